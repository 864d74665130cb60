//! Energy-momentum diagrams of the four- and six-vortex families.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::format::{csv_line, fmt_g};
use crate::dynamics::{hamiltonian, momentum_map};
use crate::equilibria::{make_family, Family, FamilyDescriptor};
use crate::error::{Error, Result};
use crate::stability::{analyze, analyze_small, Verdict};

/// Intersection tolerance in the `(μ, H)` plane.
pub const INTERSECTION_TOL: f64 = 1e-3;

/// One evaluated relative equilibrium.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagramPoint {
    pub branch_label: String,
    pub descriptor: FamilyDescriptor,
    pub mu_z: f64,
    pub energy: f64,
    pub verdict: Verdict,
}

/// A continuous piece of a branch, in parameter order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Curve {
    pub branch_label: String,
    pub points: Vec<DiagramPoint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PitchforkKind {
    /// The bifurcating branch exists where the parent is unstable.
    Supercritical,
    /// The bifurcating branch exists where the parent is stable.
    Subcritical,
}

impl std::fmt::Display for PitchforkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PitchforkKind::Supercritical => "supercritical",
            PitchforkKind::Subcritical => "subcritical",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bifurcation {
    pub parent: String,
    pub child: String,
    pub theta0: f64,
    pub mu_z: f64,
    pub energy: f64,
    pub kind: PitchforkKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagram {
    pub n_pairs: usize,
    pub curves: Vec<Curve>,
    /// The equatorial fixed equilibrium `E`.
    pub fixed_point: DiagramPoint,
    pub bifurcations: Vec<Bifurcation>,
}

struct BranchSpec {
    label: String,
    ring: bool,
    curves: Vec<Vec<FamilyDescriptor>>,
}

fn theta_grid(step: f64) -> Vec<f64> {
    (1..)
        .map(|k| k as f64 * step)
        .take_while(|&t| t < PI - 0.5 * step)
        .collect()
}

fn x_grid(step: f64) -> Vec<f64> {
    (1..)
        .map(|k| -1.0 + k as f64 * step)
        .take_while(|&x| x < 1.0 - 0.5 * step)
        .collect()
}

fn ring_branch(
    label: &str,
    family: Family,
    n: usize,
    kp: usize,
    lambdas: &[f64],
    step: f64,
) -> BranchSpec {
    let curves = lambdas
        .iter()
        .map(|&l| {
            theta_grid(step)
                .into_iter()
                .map(|t| FamilyDescriptor::new(family, n, t, kp).with_lambda(l))
                .collect()
        })
        .collect();
    BranchSpec {
        label: label.into(),
        ring: true,
        curves,
    }
}

fn x_branch(
    label: &str,
    family: Family,
    kp: usize,
    variants: &[(f64, i32)],
    step: f64,
) -> BranchSpec {
    let curves = variants
        .iter()
        .map(|&(l, b)| {
            x_grid(step)
                .into_iter()
                .map(|x| {
                    FamilyDescriptor::new(family, 2, x.acos(), kp)
                        .with_lambda(l)
                        .with_branch(b)
                })
                .collect()
        })
        .collect();
    BranchSpec {
        label: label.into(),
        ring: false,
        curves,
    }
}

fn branch_specs(n_pairs: usize, step: f64) -> Vec<BranchSpec> {
    let pm = [1.0, -1.0];
    if n_pairs == 2 {
        vec![
            x_branch(
                "(a) C2v(R,R')",
                Family::C2vRRp2p,
                0,
                &[(0.0, 1), (0.0, -1)],
                step,
            ),
            ring_branch("(b) D2h(2R)", Family::DNh2R, 2, 0, &[1.0], step),
            x_branch(
                "(c) C2v(Rm,Rm')",
                Family::C2vRmRmp,
                0,
                &[(0.0, 1), (0.0, -1)],
                step,
            ),
            ring_branch("(d) D2d(R,R')", Family::DNdRRp, 2, 0, &[1.0], step),
            BranchSpec {
                label: "(e) C2v(R,2p)".into(),
                ring: false,
                curves: vec![theta_grid(step)
                    .into_iter()
                    .map(|t| FamilyDescriptor::new(Family::C2vR2p, 2, t, 2).with_lambda(-1.0))
                    .collect()],
            },
        ]
    } else {
        vec![
            ring_branch("(a) D3h(2R)", Family::DNh2R, 3, 0, &[1.0], step),
            ring_branch("(b) D2h(2R,2p)", Family::DNh2R, 2, 2, &pm, step),
            x_branch(
                "(c) C2v(R,R',2p)",
                Family::C2vRRp2p,
                2,
                &[(1.0, 1), (1.0, -1), (-1.0, 1), (-1.0, -1)],
                step,
            ),
            ring_branch("(d) D3d(R,R')", Family::DNdRRp, 3, 0, &[1.0], step),
            ring_branch("(e) D2d(R,R',2p)", Family::DNdRRp, 2, 2, &pm, step),
        ]
    }
}

/// Evaluates a descriptor; `None` when the member does not exist or cannot be classified.
pub fn diagram_point(label: &str, d: &FamilyDescriptor) -> Option<DiagramPoint> {
    let c = make_family(d).ok()?;
    let energy = hamiltonian(&c).ok()?;
    let verdict = analyze(d).ok()?.verdict;
    let (mu_z, energy) = (momentum_map(&c).z, energy);
    if !(mu_z.is_finite() && energy.is_finite()) {
        return None;
    }
    Some(DiagramPoint {
        branch_label: label.into(),
        descriptor: *d,
        mu_z,
        energy,
        verdict,
    })
}

fn evaluate_curves(spec: &BranchSpec) -> Vec<Curve> {
    let mut out = Vec::new();
    for descs in &spec.curves {
        let pts: Vec<Option<DiagramPoint>> = descs
            .par_iter()
            .map(|d| diagram_point(&spec.label, d))
            .collect();
        let mut current = Vec::new();
        for p in pts {
            match p {
                Some(p) => current.push(p),
                None if !current.is_empty() => {
                    out.push(Curve {
                        branch_label: spec.label.clone(),
                        points: std::mem::take(&mut current),
                    });
                }
                None => {}
            }
        }
        if !current.is_empty() {
            out.push(Curve {
                branch_label: spec.label.clone(),
                points: current,
            });
        }
    }
    out
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    (p.0 - qx).hypot(p.1 - qy)
}

fn curve_distance(p: (f64, f64), c: &Curve) -> f64 {
    let pts: Vec<(f64, f64)> = c.points.iter().map(|q| (q.mu_z, q.energy)).collect();
    if pts.len() == 1 {
        return (p.0 - pts[0].0).hypot(p.1 - pts[0].1);
    }
    pts.windows(2)
        .map(|w| segment_distance(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

fn verdict_of(d: &FamilyDescriptor) -> Option<Verdict> {
    analyze(d).ok().map(|r| r.verdict)
}

fn refine_lyapunov_boundary(a: &FamilyDescriptor, b: &FamilyDescriptor) -> FamilyDescriptor {
    let lyap = |d: &FamilyDescriptor| verdict_of(d) == Some(Verdict::LyapunovStable);
    let left = lyap(a);
    let (mut lo, mut hi) = (a.theta0, b.theta0);
    while (hi - lo).abs() > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if lyap(&FamilyDescriptor { theta0: mid, ..*a }) == left {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    FamilyDescriptor {
        theta0: 0.5 * (lo + hi),
        ..*a
    }
}

fn detect_bifurcations(curves: &[(bool, Curve)]) -> Vec<Bifurcation> {
    let mut out = Vec::new();
    for (ring, parent) in curves {
        if !ring {
            continue;
        }
        for w in parent.points.windows(2) {
            let la = w[0].verdict == Verdict::LyapunovStable;
            let lb = w[1].verdict == Verdict::LyapunovStable;
            if la == lb {
                continue;
            }
            let d = refine_lyapunov_boundary(&w[0].descriptor, &w[1].descriptor);
            let Some(star) = diagram_point(&parent.branch_label, &d) else {
                continue;
            };
            let p = (star.mu_z, star.energy);
            // μ on the side of the boundary where the parent is not Lyapunov stable
            let unstable_end = if la { &w[1] } else { &w[0] };
            let unstable_side = (unstable_end.mu_z - star.mu_z).signum();
            for (child_ring, child) in curves {
                if *child_ring || curve_distance(p, child) >= INTERSECTION_TOL {
                    continue;
                }
                let near: Vec<f64> = child
                    .points
                    .iter()
                    .filter(|q| (q.mu_z - p.0).hypot(q.energy - p.1) < 0.2)
                    .map(|q| q.mu_z - p.0)
                    .filter(|dm| dm.abs() > 1e-9)
                    .collect();
                if near.is_empty() {
                    continue;
                }
                let child_side = (near.iter().sum::<f64>() / near.len() as f64).signum();
                let kind = if child_side == unstable_side {
                    PitchforkKind::Supercritical
                } else {
                    PitchforkKind::Subcritical
                };
                let b = Bifurcation {
                    parent: parent.branch_label.clone(),
                    child: child.branch_label.clone(),
                    theta0: d.theta0,
                    mu_z: star.mu_z,
                    energy: star.energy,
                    kind,
                };
                let dup = out.iter().any(|o: &Bifurcation| {
                    o.parent == b.parent && o.child == b.child && (o.mu_z - b.mu_z).abs() < 1e-6
                });
                if !dup {
                    out.push(b);
                }
            }
        }
    }
    out
}

/// Traces every branch of the diagram for `n_pairs` (2 or 3) (+)vortices and as
/// many (−)vortices, sampling θ₀ or `x = cos θ₀` with `step`, and locates pitchforks.
pub fn build_diagram(n_pairs: usize, step: f64) -> Result<Diagram> {
    if n_pairs != 2 && n_pairs != 3 {
        return Err(Error::InvalidDescriptor(format!(
            "n_pairs must be 2 or 3, got {n_pairs}"
        )));
    }
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::InvalidDescriptor(format!(
            "grid step {step} out of (0, 0.1]"
        )));
    }
    let specs = branch_specs(n_pairs, step);
    let mut tagged = Vec::new();
    for s in &specs {
        for c in evaluate_curves(s) {
            tagged.push((s.ring, c));
        }
    }
    let e = crate::equilibria::make_equatorial_pm_ring(n_pairs)?;
    let e_desc = FamilyDescriptor::new(Family::EquatorialPmRing, n_pairs, 0.0, 0);
    let fixed_point = DiagramPoint {
        branch_label: "E".into(),
        descriptor: e_desc,
        mu_z: momentum_map(&e).z,
        energy: hamiltonian(&e)?,
        verdict: analyze_small(&e, 0.0)?.verdict,
    };
    let bifurcations = detect_bifurcations(&tagged);
    Ok(Diagram {
        n_pairs,
        curves: tagged.into_iter().map(|(_, c)| c).collect(),
        fixed_point,
        bifurcations,
    })
}

pub const DIAGRAM_HEADER: [&str; 10] = [
    "branch_label",
    "mu_z",
    "energy",
    "verdict",
    "family",
    "N",
    "theta0",
    "kp",
    "lambda_n",
    "branch",
];

fn point_row(p: &DiagramPoint) -> String {
    let d = &p.descriptor;
    csv_line([
        p.branch_label.clone(),
        fmt_g(p.mu_z),
        fmt_g(p.energy),
        p.verdict.to_string(),
        d.family.name().to_string(),
        d.n.to_string(),
        fmt_g(d.theta0),
        d.kp.to_string(),
        fmt_g(d.lambda_n),
        d.branch.to_string(),
    ])
}

impl Diagram {
    pub fn points(&self) -> impl Iterator<Item = &DiagramPoint> {
        self.curves.iter().flat_map(|c| c.points.iter())
    }

    /// Every sampled point, then `E`.
    pub fn to_csv(&self) -> String {
        let mut out = csv_line(DIAGRAM_HEADER);
        for p in self.points() {
            out.push_str(&point_row(p));
        }
        out.push_str(&point_row(&self.fixed_point));
        out
    }

    pub fn bifurcations_csv(&self) -> String {
        let mut out = csv_line(["parent", "child", "theta0", "mu_z", "energy", "kind"]);
        for b in &self.bifurcations {
            out.push_str(&csv_line([
                b.parent.clone(),
                b.child.clone(),
                fmt_g(b.theta0),
                fmt_g(b.mu_z),
                fmt_g(b.energy),
                b.kind.to_string(),
            ]));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Hand-written SVG: one polyline per verdict run, stroke style by verdict.
    pub fn to_svg(&self) -> String {
        svg(self)
    }
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn dash(v: Verdict) -> &'static str {
    match v {
        Verdict::LyapunovStable => "",
        Verdict::LinearlyStable => " stroke-dasharray=\"8 4\"",
        Verdict::LinearlyUnstable => " stroke-dasharray=\"2 3\"",
        Verdict::Indeterminate => " stroke-dasharray=\"1 6\"",
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let k = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[k]
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-12 {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn svg(d: &Diagram) -> String {
    let (w, h, m) = (900.0, 640.0, 70.0);
    let mut mus: Vec<f64> = d.points().map(|p| p.mu_z).collect();
    let mut hs: Vec<f64> = d.points().map(|p| p.energy).collect();
    mus.push(d.fixed_point.mu_z);
    hs.push(d.fixed_point.energy);
    mus.sort_by(f64::total_cmp);
    hs.sort_by(f64::total_cmp);
    let (mu_lo, mu_hi) = (mus[0], mus[mus.len() - 1]);
    let mu_pad = 0.05 * (mu_hi - mu_lo).max(1e-9);
    let (mu_lo, mu_hi) = (mu_lo - mu_pad, mu_hi + mu_pad);
    let (q_lo, q_hi) = (quantile(&hs, 0.05), quantile(&hs, 0.95));
    let h_pad = 0.15 * (q_hi - q_lo).max(1e-9);
    let mut h_lo = q_lo - h_pad;
    let mut h_hi = q_hi + h_pad;
    for b in &d.bifurcations {
        h_lo = h_lo.min(b.energy - h_pad);
        h_hi = h_hi.max(b.energy + h_pad);
    }
    let sx = |mu: f64| (m + (mu - mu_lo) / (mu_hi - mu_lo) * (w - 2.0 * m)).clamp(-1e5, 1e5);
    let sy = |e: f64| (h - m - (e - h_lo) / (h_hi - h_lo) * (h - 2.0 * m)).clamp(-1e5, 1e5);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        s,
        "<defs><clipPath id=\"plot\"><rect x=\"{m}\" y=\"{m}\" width=\"{}\" height=\"{}\"/></clipPath></defs>",
        w - 2.0 * m,
        h - 2.0 * m
    );
    let _ = writeln!(s, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"30\" text-anchor=\"middle\" font-size=\"15\">Energy-momentum diagram, {} (+)vortices and {} (-)vortices</text>",
        w / 2.0,
        d.n_pairs,
        d.n_pairs
    );
    // axes
    let _ = writeln!(
        s,
        "<rect x=\"{m}\" y=\"{m}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        w - 2.0 * m,
        h - 2.0 * m
    );
    for t in nice_ticks(mu_lo, mu_hi) {
        let x = sx(t);
        let _ = writeln!(
            s,
            "<line x1=\"{x:.2}\" y1=\"{}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"black\"/>",
            h - m,
            h - m + 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{x:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            h - m + 18.0,
            fmt_g_short(t)
        );
    }
    for t in nice_ticks(h_lo, h_hi) {
        let y = sy(t);
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{y:.2}\" x2=\"{m}\" y2=\"{y:.2}\" stroke=\"black\"/>",
            m - 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            m - 8.0,
            y + 4.0,
            fmt_g_short(t)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">momentum \u{3bc}</text>",
        w / 2.0,
        h - 20.0
    );
    let _ = writeln!(
        s,
        "<text x=\"20\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {})\">energy H</text>",
        h / 2.0,
        h / 2.0
    );

    // branches
    let mut labels: Vec<&str> = Vec::new();
    for c in &d.curves {
        if !labels.contains(&c.branch_label.as_str()) {
            labels.push(&c.branch_label);
        }
    }
    let _ = writeln!(
        s,
        "<g clip-path=\"url(#plot)\" fill=\"none\" stroke-width=\"1.6\">"
    );
    for c in &d.curves {
        let color = PALETTE[labels
            .iter()
            .position(|l| *l == c.branch_label)
            .unwrap_or(0)
            % PALETTE.len()];
        let mut start = 0;
        while start < c.points.len() {
            let v = c.points[start].verdict;
            let mut end = start;
            while end + 1 < c.points.len() && c.points[end + 1].verdict == v {
                end += 1;
            }
            // extend one point so consecutive runs join
            let stop = (end + 1).min(c.points.len() - 1);
            let pts: Vec<String> = c.points[start..=stop]
                .iter()
                .map(|p| format!("{:.2},{:.2}", sx(p.mu_z), sy(p.energy)))
                .collect();
            if pts.len() > 1 {
                let _ = writeln!(
                    s,
                    "<polyline stroke=\"{color}\"{} points=\"{}\"/>",
                    dash(v),
                    pts.join(" ")
                );
            }
            start = end + 1;
        }
    }
    let _ = writeln!(s, "</g>");

    let (ex, ey) = (sx(d.fixed_point.mu_z), sy(d.fixed_point.energy));
    let _ = writeln!(
        s,
        "<circle cx=\"{ex:.2}\" cy=\"{ey:.2}\" r=\"4\" fill=\"black\"/>"
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-weight=\"bold\">E</text>",
        ex + 6.0,
        ey - 6.0
    );
    for b in &d.bifurcations {
        let (bx, by) = (sx(b.mu_z), sy(b.energy));
        let _ = writeln!(
            s,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"7\" height=\"7\" fill=\"none\" stroke=\"black\"/>",
            bx - 3.5,
            by - 3.5
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\">\u{3bc}={} {}</text>",
            bx + 6.0,
            by + 14.0,
            fmt_g_short(b.mu_z),
            b.kind
        );
    }

    // legend
    let lx = w - m - 190.0;
    let mut ly = m + 16.0;
    for (k, l) in labels.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            s,
            "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            lx + 24.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\">{}</text>",
            lx + 30.0,
            ly + 4.0,
            xml_escape(l)
        );
        ly += 16.0;
    }
    for (v, name) in [
        (Verdict::LyapunovStable, "Lyapunov stable"),
        (Verdict::LinearlyStable, "linearly stable"),
        (Verdict::LinearlyUnstable, "linearly unstable"),
    ] {
        let _ = writeln!(
            s,
            "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"black\"{}/>",
            lx + 24.0,
            dash(v)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\">{name}</text>",
            lx + 30.0,
            ly + 4.0
        );
        ly += 16.0;
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_g_short(v: f64) -> String {
    super::format::fmt_g_prec(v, 4)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('\'', "&apos;")
}
