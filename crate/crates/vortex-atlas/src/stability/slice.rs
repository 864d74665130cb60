//! Symplectic slices: isotypic bases for the ring families and numeric slices otherwise.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::equilibria::{make_family, FamilyDescriptor};
use crate::error::{Error, Result};
use crate::sphere::{Configuration, MixedChart, Vec3};

/// Block tag of a slice vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BlockLabel {
    B0,
    B0p,
    B1,
    B1p,
    Bq(usize),
    Bhalf,
    /// Numerically constructed part of a slice without an isotypic basis.
    Slice,
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockLabel::B0 => write!(f, "B0"),
            BlockLabel::B0p => write!(f, "B0p"),
            BlockLabel::B1 => write!(f, "B1"),
            BlockLabel::B1p => write!(f, "B1p"),
            BlockLabel::Bq(q) => write!(f, "B{q}"),
            BlockLabel::Bhalf => write!(f, "Bhalf"),
            BlockLabel::Slice => write!(f, "slice"),
        }
    }
}

/// Tangent vector of a two-ring configuration split by vortex group.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub dtheta_plus: Vec<f64>,
    pub dtheta_minus: Vec<f64>,
    pub dphi_plus: Vec<f64>,
    pub dphi_minus: Vec<f64>,
    /// `(dx_n, dy_n, dx_s, dy_s)` when the poles are occupied.
    pub dpole: Option<[f64; 4]>,
}

impl TangentVector {
    pub fn from_chart(n: usize, v: &DVector<f64>) -> Self {
        let seg = |k: usize| v.rows(k * n, n).iter().copied().collect::<Vec<_>>();
        let dpole = (v.len() == 4 * n + 4).then(|| {
            let r = 4 * n;
            [v[r], v[r + 1], v[r + 2], v[r + 3]]
        });
        Self {
            dtheta_plus: seg(0),
            dtheta_minus: seg(1),
            dphi_plus: seg(2),
            dphi_minus: seg(3),
            dpole,
        }
    }

    pub fn to_chart(&self) -> DVector<f64> {
        let mut out: Vec<f64> = Vec::new();
        for part in [
            &self.dtheta_plus,
            &self.dtheta_minus,
            &self.dphi_plus,
            &self.dphi_minus,
        ] {
            out.extend_from_slice(part);
        }
        if let Some(p) = self.dpole {
            out.extend_from_slice(&p);
        }
        DVector::from_vec(out)
    }

    pub fn dim(&self) -> usize {
        4 * self.dtheta_plus.len() + if self.dpole.is_some() { 4 } else { 0 }
    }
}

/// Ordered slice basis with a block tag per vector.
///
/// When `radial_pair` is set, the first two vectors are `(α_{0,θ}, α′_{0,φ})`,
/// which decouple from everything else.
#[derive(Clone, Debug)]
pub struct SliceBasis {
    pub n: usize,
    pub kp: usize,
    pub vectors: Vec<DVector<f64>>,
    pub labels: Vec<BlockLabel>,
    pub radial_pair: bool,
}

impl SliceBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_columns(&self.vectors)
    }

    pub fn tangent(&self, i: usize) -> TangentVector {
        TangentVector::from_chart(self.n, &self.vectors[i])
    }

    /// Contiguous runs of equal labels.
    pub fn blocks(&self) -> Vec<(BlockLabel, Vec<usize>)> {
        let mut out: Vec<(BlockLabel, Vec<usize>)> = Vec::new();
        for (i, l) in self.labels.iter().enumerate() {
            match out.last_mut() {
                Some((last, idx)) if last == l => idx.push(i),
                _ => out.push((*l, vec![i])),
            }
        }
        out
    }
}

/// Orthonormal basis of the null space of `m`, from the eigenvectors of `mᵀm`.
pub(crate) fn null_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    let k = m.ncols();
    let eig = SymmetricEigen::new(m.transpose() * m);
    let scale = eig.eigenvalues.amax().max(1.0);
    let mut idx: Vec<usize> = (0..k)
        .filter(|&i| eig.eigenvalues[i] < 1e-12 * scale)
        .collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let cols: Vec<DVector<f64>> = idx
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(k, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Chart tangents of the `SO(3)_μ` orbit: rotation about z, plus x and y when μ = 0.
pub fn orbit_tangents(c: &Configuration, mu_zero: bool) -> Vec<DVector<f64>> {
    let chart = MixedChart::for_configuration(c);
    let mut axes = vec![Vec3::z()];
    if mu_zero {
        axes.push(Vec3::x());
        axes.push(Vec3::y());
    }
    axes.iter().map(|a| chart.rotation_tangent(c, a)).collect()
}

/// Numeric slice `ker DΦ ∩ (orbit)^⊥ ∩ extra^⊥` as an orthonormal basis.
pub fn numeric_slice(c: &Configuration, mu_zero: bool, extra: &[DVector<f64>]) -> DMatrix<f64> {
    let chart = MixedChart::for_configuration(c);
    let dphi = chart.momentum_differential(c);
    let mut rows: Vec<DVector<f64>> = (0..3).map(|r| dphi.row(r).transpose()).collect();
    rows.extend(orbit_tangents(c, mu_zero));
    rows.extend(extra.iter().cloned());
    let m = DMatrix::from_columns(&rows).transpose();
    null_space(&m)
}

struct Fourier {
    n: usize,
    dim: usize,
    off: f64,
}

impl Fourier {
    // α (cos) or β (sin) of mode q on θ (kind 0) or φ (kind 1); primed flips the (−)ring.
    fn vec(&self, cosine: bool, q: usize, phi: bool, prime: bool) -> DVector<f64> {
        let n = self.n;
        let base = if phi { 2 * n } else { 0 };
        let sg = if prime { -1.0 } else { 1.0 };
        let f = |x: f64| if cosine { x.cos() } else { x.sin() };
        let mut v = DVector::zeros(self.dim);
        for j in 0..n {
            let ang = 2.0 * PI * (q * j) as f64 / n as f64;
            v[base + j] = f(ang);
            v[base + n + j] = sg * f(ang + q as f64 * self.off);
        }
        v
    }
    fn a(&self, q: usize, phi: bool, prime: bool) -> DVector<f64> {
        self.vec(true, q, phi, prime)
    }
    fn b(&self, q: usize, phi: bool, prime: bool) -> DVector<f64> {
        self.vec(false, q, phi, prime)
    }
    fn unit(&self, k: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim);
        v[k] = 1.0;
        v
    }
}

const TH: bool = false;
const PH: bool = true;

/// Isotypic slice basis of `D_Nh(2R, k_p p)` or `D_Nd(R, R′, k_p p)`.
pub fn slice_basis(desc: &FamilyDescriptor) -> Result<SliceBasis> {
    desc.validate()?;
    if !desc.family.is_ring_pair() {
        return Err(Error::InvalidDescriptor(format!(
            "no isotypic slice basis for {}",
            desc.family.name()
        )));
    }
    let n = desc.n;
    let kp = desc.kp;
    let ln = desc.lambda_n;
    let dnd = desc.family == crate::equilibria::Family::DNdRRp;
    let f = Fourier {
        n,
        dim: 4 * n + 2 * kp,
        off: desc.ring_offset(),
    };
    let (s, u) = desc.theta0.sin_cos();
    let mu = 2.0 * n as f64 * u + kp as f64 * ln;
    let mu_zero = mu.abs() < 1e-9;
    let config = make_family(desc)?;

    let mut blocks: Vec<(BlockLabel, Vec<DVector<f64>>)> = Vec::new();
    let radial = vec![f.a(0, TH, false), f.a(0, PH, true)];

    if n == 2 && kp == 2 {
        let rest = numeric_slice(&config, mu_zero, &radial);
        let mut vectors = radial;
        let mut labels = vec![BlockLabel::B0p; 2];
        for c in rest.column_iter() {
            vectors.push(c.into_owned());
            labels.push(BlockLabel::Slice);
        }
        return Ok(SliceBasis {
            n,
            kp,
            vectors,
            labels,
            radial_pair: true,
        });
    }

    if n == 2 {
        blocks.push((BlockLabel::B0, radial));
        if dnd {
            blocks.push((
                BlockLabel::B1,
                vec![
                    s * f.a(1, TH, false) + u * f.b(1, PH, true),
                    s * f.b(1, TH, true) + u * f.a(1, PH, false),
                ],
            ));
        } else {
            blocks.push((BlockLabel::Bhalf, vec![f.a(1, TH, true), f.a(1, PH, false)]));
        }
    } else {
        let b1 = vec![
            s * f.a(1, TH, false) + u * f.b(1, PH, true),
            s * f.b(1, TH, false) - u * f.a(1, PH, true),
        ];
        if kp == 0 {
            let mut b0 = radial;
            b0.extend([
                f.b(1, PH, false),
                f.a(1, TH, true),
                f.a(1, PH, false),
                f.b(1, TH, true),
            ]);
            blocks.push((BlockLabel::B0, b0));
            blocks.push((BlockLabel::B1, b1));
        } else {
            let xn = f.unit(4 * n);
            let yn = f.unit(4 * n + 1);
            let xs = f.unit(4 * n + 2);
            let ys = f.unit(4 * n + 3);
            let mut b0 = radial;
            b0.extend([
                f.b(1, PH, false),
                f.a(1, TH, true),
                &xn + &xs,
                f.a(1, PH, false),
                f.b(1, TH, true),
                &yn + &ys,
            ]);
            blocks.push((BlockLabel::B0p, b0));
            let k = n as f64 * u / (2.0 * ln);
            let mut b1p = b1;
            b1p.push(f.a(1, TH, false) - (&xn - &xs) * k);
            b1p.push(f.b(1, TH, false) - (&yn - &ys) * k);
            blocks.push((BlockLabel::B1p, b1p));
        }
        let l = if n % 2 == 1 { (n - 1) / 2 } else { n / 2 - 1 };
        for q in 2..=l {
            blocks.push((
                BlockLabel::Bq(q),
                vec![
                    f.a(q, TH, false),
                    f.b(q, PH, true),
                    f.b(q, TH, false),
                    f.a(q, PH, true),
                    f.a(q, TH, true),
                    f.b(q, PH, false),
                    f.b(q, TH, true),
                    f.a(q, PH, false),
                ],
            ));
        }
        if n.is_multiple_of(2) {
            let h = n / 2;
            let v = if dnd {
                vec![
                    f.a(h, TH, true),
                    f.b(h, PH, false),
                    f.b(h, TH, true),
                    f.a(h, PH, false),
                ]
            } else {
                vec![
                    f.a(h, TH, false),
                    f.a(h, TH, true),
                    f.a(h, PH, false),
                    f.a(h, PH, true),
                ]
            };
            blocks.push((BlockLabel::Bhalf, v));
        }
    }

    if mu_zero {
        let orbit = orbit_tangents(&config, true);
        for (label, vs) in blocks.iter_mut() {
            let skip = if matches!(label, BlockLabel::B0 | BlockLabel::B0p) {
                2
            } else {
                0
            };
            if vs.len() <= skip {
                continue;
            }
            let tail = DMatrix::from_columns(&vs[skip..]);
            let o = DMatrix::from_columns(&orbit).transpose();
            let ns = null_space(&(o * &tail));
            if ns.ncols() < tail.ncols() {
                let reduced = &tail * ns;
                vs.truncate(skip);
                vs.extend(reduced.column_iter().map(|c| c.into_owned()));
            }
        }
        blocks.retain(|(_, vs)| !vs.is_empty());
    }

    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for (label, vs) in blocks {
        for v in vs {
            vectors.push(v);
            labels.push(label);
        }
    }
    Ok(SliceBasis {
        n,
        kp,
        vectors,
        labels,
        radial_pair: true,
    })
}

/// `Ω_ab = ω(v_a, v_b)` on the slice.
pub fn slice_symplectic_form(desc: &FamilyDescriptor, basis: &SliceBasis) -> Result<DMatrix<f64>> {
    let c = make_family(desc)?;
    let w = MixedChart::for_configuration(&c).symplectic_form(&c);
    let v = basis.matrix();
    let raw = v.transpose() * w * &v;
    let omega = (&raw - raw.transpose()) * 0.5;
    check_nondegenerate(&omega)?;
    Ok(omega)
}

pub(crate) fn check_nondegenerate(omega: &DMatrix<f64>) -> Result<()> {
    if omega.nrows() == 0 {
        return Ok(());
    }
    let sv = omega.clone().singular_values();
    let max = sv.max();
    if sv.min() <= 1e-10 * max.max(1e-300) {
        return Err(Error::DegenerateForm);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::Family;

    fn check_in_slice(desc: &FamilyDescriptor, basis: &SliceBasis) {
        let c = make_family(desc).unwrap();
        let chart = MixedChart::for_configuration(&c);
        let dphi = chart.momentum_differential(&c);
        let mu = crate::dynamics::momentum_map(&c).z;
        let orbit = orbit_tangents(&c, mu.abs() < 1e-9);
        for v in &basis.vectors {
            assert!((&dphi * v).amax() < 1e-10, "{desc:?}");
            for o in &orbit {
                assert!(o.dot(v).abs() < 1e-10, "{desc:?}");
            }
        }
        let m = basis.matrix();
        assert_eq!(m.rank(1e-9), basis.len());
    }

    #[test]
    fn dimensions_and_membership() {
        for fam in [Family::DNh2R, Family::DNdRRp] {
            for n in 2..=7 {
                for kp in [0, 2] {
                    for theta in [0.4, 1.1, 2.3] {
                        let d = FamilyDescriptor::new(fam, n, theta, kp);
                        let b = slice_basis(&d).unwrap();
                        let want = if kp == 0 { 4 * n - 4 } else { 4 * n };
                        assert_eq!(b.len(), want, "{d:?}");
                        check_in_slice(&d, &b);
                        slice_symplectic_form(&d, &b).unwrap();
                    }
                }
            }
        }
        for n in 2..=7 {
            let d = FamilyDescriptor::dnd(n, PI / 2.0, 0);
            let b = slice_basis(&d).unwrap();
            assert_eq!(b.len(), 4 * n - 6, "n = {n}");
            check_in_slice(&d, &b);
            slice_symplectic_form(&d, &b).unwrap();
        }
    }

    #[test]
    fn spec_counts() {
        assert_eq!(
            slice_basis(&FamilyDescriptor::dnd(3, 1.0, 0))
                .unwrap()
                .len(),
            8
        );
        assert_eq!(
            slice_basis(&FamilyDescriptor::dnh(4, 1.0, 2))
                .unwrap()
                .len(),
            16
        );
        assert_eq!(
            slice_basis(&FamilyDescriptor::dnd(3, PI / 2.0, 0))
                .unwrap()
                .len(),
            6
        );
    }

    #[test]
    fn omega_is_antisymmetric() {
        let d = FamilyDescriptor::dnh(5, 0.7, 0);
        let b = slice_basis(&d).unwrap();
        let w = slice_symplectic_form(&d, &b).unwrap();
        assert_eq!(&w + w.transpose(), DMatrix::zeros(w.nrows(), w.ncols()));
        assert!(w.determinant().abs() > 1e-12);
    }

    #[test]
    fn tangent_vector_round_trip() {
        let d = FamilyDescriptor::dnd(4, 1.0, 2);
        let b = slice_basis(&d).unwrap();
        for i in 0..b.len() {
            let t = b.tangent(i);
            assert_eq!(t.dim(), 20);
            assert_eq!(t.to_chart(), b.vectors[i]);
        }
    }
}
