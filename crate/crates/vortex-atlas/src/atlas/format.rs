//! Plain-text output helpers.

use crate::dynamics::{hamiltonian, Trajectory};
use crate::error::Result;

/// Formats like C's `%.12g`.
pub fn fmt_g(v: f64) -> String {
    fmt_g_prec(v, 12)
}

/// Formats like C's `%.{prec}g`.
pub fn fmt_g_prec(v: f64, prec: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let p = prec.max(1);
    let sci = format!("{:.*e}", p - 1, v);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mant = strip_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Joins fields with commas, quoting any field that holds a comma, quote or newline.
pub(crate) fn csv_line<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = String::new();
    for (k, f) in fields.into_iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let f = f.as_ref();
        if f.contains([',', '"', '\n', '\r']) {
            out.push('"');
            out.push_str(&f.replace('"', "\"\""));
            out.push('"');
        } else {
            out.push_str(f);
        }
    }
    out.push('\n');
    out
}

/// Trajectory CSV: `t`, per-vortex `x,y,z`, then `H`, `dH` and `dPhi` (sup norm).
pub fn trajectory_csv(traj: &Trajectory) -> Result<String> {
    let n = traj.states.first().map_or(0, |c| c.len());
    let mut header = vec!["t".to_string()];
    for i in 1..=n {
        header.extend([format!("x{i}"), format!("y{i}"), format!("z{i}")]);
    }
    header.extend(["H".to_string(), "dH".to_string(), "dPhi".to_string()]);
    let mut out = csv_line(&header);
    for (k, c) in traj.states.iter().enumerate() {
        let mut row = vec![fmt_g(traj.times[k])];
        for v in c.vortices() {
            row.extend([
                fmt_g(v.position.x()),
                fmt_g(v.position.y()),
                fmt_g(v.position.z()),
            ]);
        }
        row.push(fmt_g(hamiltonian(c)?));
        row.push(fmt_g(traj.h_drift[k]));
        row.push(fmt_g(traj.phi_drift[k]));
        out.push_str(&csv_line(&row));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_fields_are_quoted_when_needed() {
        assert_eq!(
            csv_line(["D3d(R,R')", "3", "say \"hi\""]),
            "\"D3d(R,R')\",3,\"say \"\"hi\"\"\"\n"
        );
    }

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (0.1, "0.1"),
            (1.0 / 3.0, "0.333333333333"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (1e-5, "1e-05"),
            (0.0001234, "0.0001234"),
            (std::f64::consts::PI, "3.14159265359"),
            (999999999999.9, "1e+12"),
            (-1.5e-300, "-1.5e-300"),
        ];
        for (v, s) in cases {
            assert_eq!(fmt_g(v), s, "{v:e}");
        }
    }
}
