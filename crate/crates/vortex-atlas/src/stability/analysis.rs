use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use serde::Serialize;
use serde_json::json;

use super::hessian::{hessian_closed_form, hessian_fd};
use super::slice::{check_nondegenerate, numeric_slice, slice_basis, BlockLabel};
use super::{DEF_TOL, SPEC_TOL};
use crate::dynamics::momentum_map;
use crate::equilibria::{
    angular_velocity, make_family, re_residual, ring_angular_velocity, Family, FamilyDescriptor,
};
use crate::error::{Error, Result};
use crate::sphere::{Configuration, MixedChart};

/// Stability verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    LyapunovStable,
    LinearlyStable,
    LinearlyUnstable,
    /// An eigenvalue sits inside a tolerance band, so the sign cannot be trusted.
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::LyapunovStable => "LyapunovStable",
            Verdict::LinearlyStable => "LinearlyStable",
            Verdict::LinearlyUnstable => "LinearlyUnstable",
            Verdict::Indeterminate => "Indeterminate",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Spectra of one block of the slice.
#[derive(Clone, Debug)]
pub struct BlockSpectrum {
    pub label: BlockLabel,
    pub hessian_eigenvalues: Vec<f64>,
    pub linearization_eigenvalues: Vec<Complex<f64>>,
    /// Named scalars defining the block (`r`, `s`, `w`, `a`, `b`, `c`, ...).
    pub entries: Vec<(String, f64)>,
    signs: Signs,
    unstable: f64,
}

impl BlockSpectrum {
    pub fn entry(&self, name: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| *v)
    }

    /// Largest real part relative to `max(1, |λ|)`.
    pub fn max_relative_real_part(&self) -> f64 {
        self.linearization_eigenvalues
            .iter()
            .map(|z| z.re.abs() / z.norm().max(1.0))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Signs {
    pos: bool,
    neg: bool,
    band: bool,
}

impl Signs {
    fn add(&mut self, v: f64, exact: bool) {
        if exact {
            if v > 0.0 {
                self.pos = true;
            } else if v < 0.0 {
                self.neg = true;
            } else {
                self.band = true;
            }
        } else if v > DEF_TOL {
            self.pos = true;
        } else if v < -DEF_TOL {
            self.neg = true;
        } else {
            self.band = true;
        }
    }

    fn merge(&mut self, o: Signs) {
        self.pos |= o.pos;
        self.neg |= o.neg;
        self.band |= o.band;
    }
}

/// Result of the energy-momentum analysis.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub descriptor: Option<FamilyDescriptor>,
    pub mu_z: f64,
    pub xi_z: f64,
    pub blocks: Vec<BlockSpectrum>,
    pub verdict: Verdict,
    pub deciding_block: Option<BlockLabel>,
}

impl StabilityReport {
    pub fn block(&self, label: BlockLabel) -> Option<&BlockSpectrum> {
        self.blocks.iter().find(|b| b.label == label)
    }

    pub fn slice_dimension(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| b.hessian_eigenvalues.len())
            .sum()
    }

    /// All linearization eigenvalues across blocks.
    pub fn spectrum(&self) -> Vec<Complex<f64>> {
        self.blocks
            .iter()
            .flat_map(|b| b.linearization_eigenvalues.iter().copied())
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let blocks: Vec<_> = self
            .blocks
            .iter()
            .map(|b| {
                let entries: serde_json::Map<String, serde_json::Value> =
                    b.entries.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                json!({
                    "label": b.label.to_string(),
                    "hessian_eigs": b.hessian_eigenvalues,
                    "lin_eigs_re": b.linearization_eigenvalues.iter().map(|z| z.re).collect::<Vec<_>>(),
                    "lin_eigs_im": b.linearization_eigenvalues.iter().map(|z| z.im).collect::<Vec<_>>(),
                    "entries": entries,
                })
            })
            .collect();
        json!({
            "descriptor": self.descriptor,
            "mu": self.mu_z,
            "xi": self.xi_z,
            "blocks": blocks,
            "verdict": self.verdict.as_str(),
            "deciding_block": self.deciding_block.map(|l| l.to_string()),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("plain data serializes")
    }
}

fn sorted_complex(mut v: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

/// Hessian eigenvalues and spectrum of `L = Ω⁻¹ H` for one block.
pub(crate) fn block_spectra(
    h: &DMatrix<f64>,
    w: &DMatrix<f64>,
) -> Result<(Vec<f64>, Vec<Complex<f64>>)> {
    check_nondegenerate(w)?;
    let hs = (h + h.transpose()) * 0.5;
    let mut he: Vec<f64> = SymmetricEigen::new(hs)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    he.sort_by(f64::total_cmp);
    let l = w.clone().lu().solve(h).ok_or(Error::DegenerateForm)?;
    let le = sorted_complex(general_eigenvalues(&l)?);
    Ok((he, le))
}

/// Eigenvalues of a general real matrix.
pub(crate) fn general_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let a = faer::Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let ev = a
        .eigenvalues()
        .map_err(|e| Error::Internal(format!("eigenvalue iteration failed: {e:?}")))?;
    Ok(ev.into_iter().map(|z| Complex::new(z.re, z.im)).collect())
}

fn numeric_spectrum(
    label: BlockLabel,
    h: &DMatrix<f64>,
    w: &DMatrix<f64>,
) -> Result<BlockSpectrum> {
    let (he, le) = block_spectra(h, w)?;
    let mut signs = Signs::default();
    for &e in &he {
        signs.add(e, false);
    }
    let mut b = BlockSpectrum {
        label,
        hessian_eigenvalues: he,
        linearization_eigenvalues: le,
        entries: Vec::new(),
        signs,
        unstable: 0.0,
    };
    let rel = b.max_relative_real_part();
    b.unstable = if rel > SPEC_TOL { rel } else { 0.0 };
    Ok(b)
}

/// `s = d²H_ξ(α′_{0,φ}, α′_{0,φ}) = −8κN³t/(1−κt)²`, `t = ((1−|u|)/(1+|u|))^N`, `κ = cos(Nφ₀)`.
pub fn radial_s(desc: &FamilyDescriptor) -> f64 {
    let n = desc.n as f64;
    let u = desc.theta0.cos().abs();
    let t = ((1.0 - u) / (1.0 + u)).powf(n);
    let kappa = (n * desc.ring_offset()).cos();
    -8.0 * kappa * n.powi(3) * t / (1.0 - kappa * t).powi(2)
}

fn sigma_sums(desc: &FamilyDescriptor) -> [f64; 3] {
    let n = desc.n;
    let u2 = desc.theta0.cos().powi(2);
    let mut out = [0.0; 3];
    for j in 0..n {
        let c = (2.0 * PI * j as f64 / n as f64 + desc.ring_offset()).cos();
        let d = (1.0 + u2 - (1.0 - u2) * c).powi(2);
        out[0] += 1.0 / d;
        out[1] += c / d;
        out[2] += c * c / d;
    }
    out
}

/// Displayed expressions for `r` and `s` in terms of `Σ_m` (no poles).
pub fn closed_form_r_s(desc: &FamilyDescriptor) -> (f64, f64) {
    let n = desc.n as f64;
    let u2 = desc.theta0.cos().powi(2);
    let u4 = u2 * u2;
    let [s1, s2, s3] = sigma_sums(desc);
    let r = 2.0
        * n
        * (-(n - 1.0) * (1.0 + u2) / (1.0 - u2) + (1.0 - u4) * s1 - 2.0 * (1.0 + u4) * s2
            + (1.0 - u4) * s3);
    let s = 4.0 * n * (1.0 - u2) * ((1.0 - u2) * s1 - (1.0 + u2) * s2);
    (r, s)
}

/// Closed forms of `a = d²H_ξ(α′_{q,θ}, ·)` and `b = d²H_ξ(β_{q,φ}, ·)` for `2 ≤ q ≤ N/2`.
///
/// At `q = N/2` for `D_Nh`, `b` is taken on `α_{N/2,φ}` and ε = 2.
pub fn closed_form_ab(desc: &FamilyDescriptor, q: usize) -> (f64, f64) {
    let n = desc.n;
    let nf = n as f64;
    let u = desc.theta0.cos();
    let u2 = u * u;
    let u4 = u2 * u2;
    let eps = if desc.family == Family::DNh2R && 2 * q == n {
        2.0
    } else {
        1.0
    };
    let qf = q as f64;
    let mut same_a = 0.0;
    let mut same_b = 0.0;
    for j in 1..n {
        let p = 2.0 * PI * j as f64 / nf;
        same_a += (p.cos() - (qf * p).cos()) / (1.0 - p.cos());
        same_b += (1.0 - (qf * p).cos()) / (1.0 - p.cos());
    }
    let mut opp_a = 0.0;
    let mut opp_b = 0.0;
    for j in 0..n {
        let p = 2.0 * PI * j as f64 / nf + desc.ring_offset();
        let (c, cq) = (p.cos(), (qf * p).cos());
        let d2 = (1.0 + u2 - (1.0 - u2) * c).powi(2);
        opp_a += (u4 - u2 + (1.0 - u2) * cq + (2.0 * u4 - u2 + 1.0 - (1.0 + u2) * cq) * c
            - (1.0 - u4) * c * c)
            / d2;
        opp_b += (1.0 - cq) * (1.0 - u2 - (1.0 + u2) * c) / d2;
    }
    let mut a = eps * nf * (-(nf - 1.0) * u2 / (1.0 - u2) + same_a / (1.0 - u2) - opp_a);
    if desc.kp == 2 {
        a -= eps * nf * 4.0 * u * desc.lambda_n / (1.0 - u2);
    }
    let b = eps * nf * (-same_b + (1.0 - u2) * opp_b);
    (a, b)
}

fn label_entries(
    desc: &FamilyDescriptor,
    label: BlockLabel,
    hb: &DMatrix<f64>,
    wb: &DMatrix<f64>,
) -> Vec<(String, f64)> {
    let e = |k: &str, v: f64| (k.to_string(), v);
    match label {
        BlockLabel::B1 | BlockLabel::B1p if hb.nrows() >= 1 => vec![e("w", hb[(0, 0)])],
        BlockLabel::Bq(q) if hb.nrows() == 8 => {
            let (a_cf, b_cf) = closed_form_ab(desc, q);
            vec![
                e("a", hb[(4, 4)]),
                e("b", hb[(5, 5)]),
                e("c", hb[(4, 5)]),
                e("omega", wb[(4, 7)]),
                e("a_closed", a_cf),
                e("b_closed", b_cf),
            ]
        }
        BlockLabel::Bhalf if hb.nrows() == 4 => {
            if desc.family == Family::DNdRRp {
                let (a_cf, b_cf) = closed_form_ab(desc, desc.n / 2);
                vec![
                    e("a", hb[(0, 0)]),
                    e("b", hb[(1, 1)]),
                    e("c", hb[(0, 1)]),
                    e("omega", wb[(0, 3)]),
                    e("a_closed", a_cf),
                    e("b_closed", b_cf),
                ]
            } else {
                vec![
                    e("a", hb[(0, 0)]),
                    e("a_prime", hb[(1, 1)]),
                    e("b", hb[(2, 2)]),
                    e("b_prime", hb[(3, 3)]),
                ]
            }
        }
        _ => Vec::new(),
    }
}

fn sub(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Largest Hessian entry coupling two different blocks of the slice basis,
/// relative to the largest entry overall.
pub fn block_coupling(desc: &FamilyDescriptor) -> Result<f64> {
    let basis = slice_basis(desc)?;
    let v = basis.matrix();
    let hg = v.transpose() * hessian_closed_form(desc)? * &v;
    let mut block_of = vec![0; basis.len()];
    for (k, (_, idx)) in basis.blocks().iter().enumerate() {
        for &i in idx {
            block_of[i] = k;
        }
    }
    let mut cross = 0.0f64;
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if block_of[i] != block_of[j] {
                cross = cross.max(hg[(i, j)].abs());
            }
        }
    }
    Ok(cross / hg.amax().max(f64::MIN_POSITIVE))
}

fn analyze_rings(desc: &FamilyDescriptor) -> Result<StabilityReport> {
    let c = make_family(desc)?;
    let xi = ring_angular_velocity(desc)?;
    let mu = momentum_map(&c).z;
    let h = hessian_closed_form(desc)?;
    let w = MixedChart::for_configuration(&c).symplectic_form(&c);
    let basis = slice_basis(desc)?;
    let v = basis.matrix();
    let hg = v.transpose() * &h * &v;
    let wg = {
        let raw = v.transpose() * &w * &v;
        (&raw - raw.transpose()) * 0.5
    };

    let mut blocks = Vec::new();
    for (label, idx) in basis.blocks() {
        let radial = basis.radial_pair && idx[0] == 0;
        if !radial {
            let (hb, wb) = (sub(&hg, &idx), sub(&wg, &idx));
            let mut b = numeric_spectrum(label, &hb, &wb)?;
            b.entries = label_entries(desc, label, &hb, &wb);
            blocks.push(b);
            continue;
        }
        // radial pair: H = diag(r, s), Ω = [[0, ω], [−ω, 0]]
        let r = hg[(0, 0)];
        let s = radial_s(desc);
        let omega = wg[(0, 1)];
        let mut signs = Signs::default();
        signs.add(r, false);
        signs.add(s, true);
        let rs = r * s;
        let lam = rs.abs().sqrt() / omega.abs();
        let mut le = if rs < 0.0 {
            vec![Complex::new(-lam, 0.0), Complex::new(lam, 0.0)]
        } else {
            vec![Complex::new(0.0, -lam), Complex::new(0.0, lam)]
        };
        let mut he = vec![r, s];
        let unstable = rs < 0.0 && r.abs() > DEF_TOL;
        let mut entries = vec![("r".to_string(), r), ("s".to_string(), s)];
        if desc.kp == 0 {
            let (rp, sp) = closed_form_r_s(desc);
            entries.push(("r_closed".into(), rp));
            entries.push(("s_closed".into(), sp));
        }
        // the exact sign test on (r, s) outranks any numerical growth rate
        let mut unstable_score = if unstable { f64::INFINITY } else { 0.0 };
        if idx.len() > 2 {
            let rest = &idx[2..];
            let hb = sub(&hg, rest);
            let b = numeric_spectrum(label, &hb, &sub(&wg, rest))?;
            signs.merge(b.signs);
            he.extend(b.hessian_eigenvalues);
            le.extend(b.linearization_eigenvalues);
            if unstable_score == 0.0 {
                unstable_score = b.unstable;
            }
        }
        he.sort_by(f64::total_cmp);
        blocks.push(BlockSpectrum {
            label,
            hessian_eigenvalues: he,
            linearization_eigenvalues: sorted_complex(le),
            entries,
            signs,
            unstable: unstable_score,
        });
    }
    Ok(finish(Some(*desc), mu, xi, blocks))
}

fn finish(
    descriptor: Option<FamilyDescriptor>,
    mu_z: f64,
    xi_z: f64,
    blocks: Vec<BlockSpectrum>,
) -> StabilityReport {
    let worst = blocks
        .iter()
        .filter(|b| b.unstable > 0.0)
        .max_by(|a, b| a.unstable.total_cmp(&b.unstable));
    let mut all = Signs::default();
    for b in &blocks {
        all.merge(b.signs);
    }
    let (verdict, deciding) = if let Some(b) = worst {
        (Verdict::LinearlyUnstable, Some(b.label))
    } else if !all.band && !(all.pos && all.neg) {
        (Verdict::LyapunovStable, None)
    } else if all.pos && all.neg {
        // the first block whose signs disagree with the first definite block
        let reference = blocks
            .iter()
            .find(|b| b.signs.pos != b.signs.neg)
            .map(|b| b.signs.pos);
        let pick = blocks.iter().find(|b| {
            (b.signs.pos && b.signs.neg)
                || reference.is_some_and(|p| b.signs.pos != p && !b.signs.band)
        });
        (Verdict::LinearlyStable, pick.map(|b| b.label))
    } else {
        (
            Verdict::Indeterminate,
            blocks.iter().find(|b| b.signs.band).map(|b| b.label),
        )
    };
    StabilityReport {
        descriptor,
        mu_z,
        xi_z,
        blocks,
        verdict,
        deciding_block: deciding,
    }
}

/// Energy-momentum analysis of a family member.
pub fn analyze(desc: &FamilyDescriptor) -> Result<StabilityReport> {
    desc.validate()?;
    match desc.family {
        Family::DNh2R | Family::DNdRRp => analyze_rings(desc),
        Family::TetrahedralPair => Err(Error::InvalidDescriptor(
            "stability of the tetrahedral pair is not analyzed".into(),
        )),
        _ => {
            let c = make_family(desc)?;
            let xi = angular_velocity(&c)?;
            let mut r = analyze_small(&c, xi)?;
            r.descriptor = Some(*desc);
            Ok(r)
        }
    }
}

/// Analysis on a numerically constructed slice (no isotypic basis), with a
/// finite-difference Hessian.
pub fn analyze_small(config: &Configuration, xi_z: f64) -> Result<StabilityReport> {
    let res = re_residual(config, xi_z)?;
    if res > 1e-6 {
        return Err(Error::NotRelativeEquilibrium(res));
    }
    let phi = momentum_map(config);
    let mu_zero = phi.norm() < 1e-9;
    let h = hessian_fd(config, xi_z, 1e-5)?;
    let w = MixedChart::for_configuration(config).symplectic_form(config);
    let v = numeric_slice(config, mu_zero, &[]);
    let hg = v.transpose() * &h * &v;
    let wg = {
        let raw = v.transpose() * &w * &v;
        (&raw - raw.transpose()) * 0.5
    };
    let block = numeric_spectrum(BlockLabel::Slice, &hg, &wg)?;
    let mut report = finish(None, phi.z, xi_z, vec![block]);
    if report.verdict == Verdict::LyapunovStable {
        report.deciding_block = None;
    }
    Ok(report)
}
