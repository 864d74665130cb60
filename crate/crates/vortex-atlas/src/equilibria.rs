//! Named symmetric families, angular velocities and branch solvers.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{chart_gradient, momentum_map};
use crate::error::{Error, Result};
use crate::sphere::{
    cyclic, reflection_z, rotation_z, Configuration, GroupElement, UnitVector3, Vec3, Vortex,
    POLE_EPS,
};

/// Named families of (relative) equilibria.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Equatorial (±)ring of 2N alternating vortices, `D_{2Nh}(R_e)`.
    #[serde(rename = "Re")]
    EquatorialPmRing,
    /// Regular tetrahedron of (+)vortices with its dual of (−)vortices.
    #[serde(rename = "Tetra")]
    TetrahedralPair,
    /// `D_Nh(2R, k_p p)`: rings at opposite latitudes, in phase.
    #[serde(rename = "DNh")]
    DNh2R,
    /// `D_Nd(R, R′, k_p p)`: rings at opposite latitudes, offset by π/N.
    #[serde(rename = "DNd")]
    DNdRRp,
    /// `C_2v(2R, 2p)`: two 2-rings in phase plus poles.
    #[serde(rename = "C2v_2R2p")]
    C2v2R2p,
    /// `C_2v(R, R′, 2p)`: two 2-rings offset by π/2 plus poles (no poles when λ_n = 0).
    #[serde(rename = "C2v_RRp2p")]
    C2vRRp2p,
    /// `C_2v(R_m, R_m′)`: two longitudinal (±)rings.
    #[serde(rename = "C2v_RmRmp")]
    C2vRmRmp,
    /// `C_2v(R, 2p)`: a (+)ring of two vortices and two polar vortices of equal strength.
    #[serde(rename = "C2v_R2p")]
    C2vR2p,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::EquatorialPmRing => "Re",
            Family::TetrahedralPair => "Tetra",
            Family::DNh2R => "DNh",
            Family::DNdRRp => "DNd",
            Family::C2v2R2p => "C2v_2R2p",
            Family::C2vRRp2p => "C2v_RRp2p",
            Family::C2vRmRmp => "C2v_RmRmp",
            Family::C2vR2p => "C2v_R2p",
        }
    }

    pub fn is_ring_pair(self) -> bool {
        matches!(self, Family::DNh2R | Family::DNdRRp)
    }
}

fn default_n() -> usize {
    2
}

fn default_lambda() -> f64 {
    1.0
}

fn default_branch() -> i32 {
    1
}

/// Symbolic description of a family member.
///
/// `theta0` is the co-latitude of the (+)ring for the ring families, and
/// the co-latitude of the first (+)vortex (`x = cos theta0`) for the
/// two-parameter `C2v` branches, where `branch` picks the root.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub family: Family,
    #[serde(rename = "N", default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub theta0: f64,
    #[serde(default)]
    pub kp: usize,
    #[serde(default = "default_lambda")]
    pub lambda_n: f64,
    #[serde(default = "default_branch")]
    pub branch: i32,
}

impl FamilyDescriptor {
    pub fn new(family: Family, n: usize, theta0: f64, kp: usize) -> Self {
        Self {
            family,
            n,
            theta0,
            kp,
            lambda_n: 1.0,
            branch: 1,
        }
    }

    pub fn dnh(n: usize, theta0: f64, kp: usize) -> Self {
        Self::new(Family::DNh2R, n, theta0, kp)
    }

    pub fn dnd(n: usize, theta0: f64, kp: usize) -> Self {
        Self::new(Family::DNdRRp, n, theta0, kp)
    }

    pub fn with_lambda(mut self, lambda_n: f64) -> Self {
        self.lambda_n = lambda_n;
        self
    }

    pub fn with_branch(mut self, branch: i32) -> Self {
        self.branch = branch;
        self
    }

    /// Short human label such as `D3h(2R,2p)`.
    pub fn label(&self) -> String {
        let p = if self.kp == 2 { ",2p" } else { "" };
        match self.family {
            Family::EquatorialPmRing => format!("D{}h(Re)", 2 * self.n),
            Family::TetrahedralPair => "Td(pair)".into(),
            Family::DNh2R => format!("D{}h(2R{p})", self.n),
            Family::DNdRRp => format!("D{}d(R,R'{p})", self.n),
            Family::C2v2R2p => "C2v(2R,2p)".into(),
            Family::C2vRRp2p if self.lambda_n == 0.0 => "C2v(R,R')".into(),
            Family::C2vRRp2p => "C2v(R,R',2p)".into(),
            Family::C2vRmRmp => "C2v(Rm,Rm')".into(),
            Family::C2vR2p => "C2v(R,2p)".into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDescriptor(m));
        let fam = self.family;
        if matches!(
            fam,
            Family::EquatorialPmRing | Family::DNh2R | Family::DNdRRp
        ) && self.n < 2
        {
            return bad(format!("N = {} (need N ≥ 2)", self.n));
        }
        if self.kp != 0 && self.kp != 2 {
            return bad(format!("kp = {} (need 0 or 2)", self.kp));
        }
        if !self.lambda_n.is_finite() {
            return bad("lambda_n must be finite".into());
        }
        let needs_theta = !matches!(fam, Family::EquatorialPmRing | Family::TetrahedralPair);
        if needs_theta && !(self.theta0 > 0.0 && self.theta0 < PI) {
            return bad(format!("theta0 = {} outside (0, π)", self.theta0));
        }
        if fam.is_ring_pair() && self.kp == 2 && self.lambda_n == 0.0 {
            return bad("polar strength must be nonzero".into());
        }
        if matches!(fam, Family::C2vR2p) && self.lambda_n == 0.0 {
            return bad("polar strength must be nonzero".into());
        }
        if self.branch != 1 && self.branch != -1 {
            return bad(format!("branch = {} (need ±1)", self.branch));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: FamilyDescriptor = serde_json::from_str(text)?;
        d.validate()?;
        Ok(d)
    }

    /// Ring offset of the (−)ring: 0 for `D_Nh`, π/N for `D_Nd`.
    pub fn ring_offset(&self) -> f64 {
        match self.family {
            Family::DNdRRp => PI / self.n as f64,
            _ => 0.0,
        }
    }
}

fn unit(theta: f64, phi: f64) -> UnitVector3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    UnitVector3::normalize(Vec3::new(st * cp, st * sp, ct)).expect("nonzero")
}

/// `D_{2Nh}(R_e)`: 2N vortices at longitudes πk/N on the equator with alternating signs.
pub fn make_equatorial_pm_ring(n_pairs: usize) -> Result<Configuration> {
    if n_pairs < 2 {
        return Err(Error::InvalidDescriptor(format!("n_pairs = {n_pairs}")));
    }
    let m = 2 * n_pairs;
    let vortices = (0..m)
        .map(|k| {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            Vortex::new(unit(PI / 2.0, PI * k as f64 / n_pairs as f64), s)
        })
        .collect();
    Configuration::new(vortices, 0)
}

/// Tetrahedron of +1 vortices at `(±1,±1,±1)/√3` with even sign products,
/// and −1 vortices at the antipodes.
pub fn make_tetrahedral_pair() -> Configuration {
    let even = [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ];
    let mut vortices = Vec::with_capacity(8);
    for sign in [1.0, -1.0] {
        for p in even {
            let v = Vec3::new(p[0], p[1], p[2]) * sign;
            vortices.push(Vortex::new(
                UnitVector3::normalize(v).expect("nonzero"),
                sign,
            ));
        }
    }
    Configuration::new(vortices, 0).expect("tetrahedral pair is collision free")
}

/// A single latitudinal ring of `n` identical +1 vortices (test oracle).
pub fn make_single_ring(n: usize, theta: f64) -> Result<Configuration> {
    let vortices = (0..n)
        .map(|j| Vortex::new(unit(theta, 2.0 * PI * j as f64 / n as f64), 1.0))
        .collect();
    Configuration::new(vortices, 0)
}

fn with_poles(mut vortices: Vec<Vortex>, lambda_north: f64, lambda_south: f64) -> Vec<Vortex> {
    vortices.push(Vortex::new(UnitVector3::north(), lambda_north));
    vortices.push(Vortex::new(UnitVector3::south(), lambda_south));
    vortices
}

fn ring_pair(n: usize, theta0: f64, offset: f64) -> Vec<Vortex> {
    let mut v = Vec::with_capacity(2 * n + 2);
    for j in 0..n {
        v.push(Vortex::new(
            unit(theta0, 2.0 * PI * j as f64 / n as f64),
            1.0,
        ));
    }
    for j in 0..n {
        v.push(Vortex::new(
            unit(PI - theta0, 2.0 * PI * j as f64 / n as f64 + offset),
            -1.0,
        ));
    }
    v
}

/// Builds the configuration described by `desc`.
pub fn make_family(desc: &FamilyDescriptor) -> Result<Configuration> {
    desc.validate()?;
    match desc.family {
        Family::EquatorialPmRing => make_equatorial_pm_ring(desc.n),
        Family::TetrahedralPair => Ok(make_tetrahedral_pair()),
        Family::DNh2R | Family::DNdRRp => {
            let v = ring_pair(desc.n, desc.theta0, desc.ring_offset());
            if desc.kp == 2 {
                Configuration::new(with_poles(v, desc.lambda_n, -desc.lambda_n), 2)
            } else {
                Configuration::new(v, 0)
            }
        }
        Family::C2v2R2p => branch_c2v_2R2p(desc.theta0.cos(), desc.lambda_n)?.configuration(),
        Family::C2vRRp2p => {
            branch_c2v_RRp2p(desc.theta0.cos(), desc.lambda_n, desc.branch)?.configuration()
        }
        Family::C2vRmRmp => branch_c2v_RmRmp_root(desc.theta0.cos(), desc.branch)?.configuration(),
        Family::C2vR2p => {
            let v = vec![
                Vortex::new(unit(desc.theta0, 0.0), 1.0),
                Vortex::new(unit(desc.theta0, PI), 1.0),
            ];
            Configuration::new(with_poles(v, desc.lambda_n, desc.lambda_n), 2)
        }
    }
}

/// Symmetry elements generating the defining isotropy of a ring family.
pub fn defining_symmetries(desc: &FamilyDescriptor) -> Vec<GroupElement> {
    let n = desc.n;
    let id: Vec<usize> = (0..n).collect();
    let back = cyclic(n, n - 1);
    let rot = GroupElement::new(
        rotation_z(2.0 * PI / n as f64),
        back.clone(),
        back.clone(),
        0,
    )
    .expect("valid element");
    match desc.family {
        Family::DNh2R => {
            vec![
                rot,
                GroupElement::new(reflection_z(), id.clone(), id, 1).expect("valid element"),
            ]
        }
        Family::DNdRRp => {
            let a = rotation_z(PI / n as f64) * reflection_z();
            vec![
                rot,
                GroupElement::new(a, id, back, 1).expect("valid element"),
            ]
        }
        Family::EquatorialPmRing => {
            let m = n;
            let back = cyclic(m, m - 1);
            let id: Vec<usize> = (0..m).collect();
            vec![
                GroupElement::new(rotation_z(2.0 * PI / m as f64), back.clone(), back, 0)
                    .expect("valid element"),
                GroupElement::new(reflection_z(), id.clone(), id, 0).expect("valid element"),
            ]
        }
        _ => Vec::new(),
    }
}

/// `ξ_z` from the per-vortex formula
/// `ξ = Σ_j λ_j (cosθ_j sinθ_i − sinθ_j cosθ_i cos(φ_j − φ_i)) / (sinθ_i (1 − x_i·x_j))`.
pub fn angular_velocity_generic(c: &Configuration, index: usize) -> Result<f64> {
    let vs = c.vortices();
    let n_ring = c.len() - c.pole_count();
    if index >= n_ring {
        return Err(Error::PoleSingularity);
    }
    let xi = vs[index].position;
    let si = xi.x().hypot(xi.y());
    if si < POLE_EPS {
        return Err(Error::PoleSingularity);
    }
    let ci = xi.z();
    let mut acc = 0.0;
    for (j, v) in vs.iter().enumerate() {
        if j == index {
            continue;
        }
        let xj = v.position;
        // sinθ_j cos(φ_j − φ_i), valid for polar j as well
        let proj = (xj.x() * xi.x() + xj.y() * xi.y()) / si;
        let num = xj.z() * si - proj * ci;
        let den = 1.0 - xi.dot(&xj);
        acc += v.strength * num / den;
    }
    Ok(acc / si)
}

/// Closed-form angular velocity of `D_Nh(2R, k_p p)` and `D_Nd(R, R′, k_p p)`:
/// `cosθ ((N−1)/sin²θ + Σ_j (1 + cosφ′_j)/(2 − sin²θ (1 + cosφ′_j))) + k_p λ_n / sin²θ`.
pub fn ring_angular_velocity(desc: &FamilyDescriptor) -> Result<f64> {
    desc.validate()?;
    if !desc.family.is_ring_pair() {
        return Err(Error::InvalidDescriptor(format!(
            "{} is not a two-ring family",
            desc.family.name()
        )));
    }
    let n = desc.n;
    let (s, c) = desc.theta0.sin_cos();
    let s2 = s * s;
    let off = desc.ring_offset();
    let sum: f64 = (0..n)
        .map(|j| {
            let cp = (2.0 * PI * j as f64 / n as f64 + off).cos();
            (1.0 + cp) / (2.0 - s2 * (1.0 + cp))
        })
        .sum();
    Ok(c * ((n as f64 - 1.0) / s2 + sum) + desc.kp as f64 * desc.lambda_n / s2)
}

/// Max-norm of `dH_ξ` in the mixed chart.
pub fn re_residual(c: &Configuration, xi_z: f64) -> Result<f64> {
    c.check_collisions(crate::sphere::COLLISION_EPS)?;
    Ok(chart_gradient(c, xi_z)?.amax())
}

/// Angular velocity of a relative equilibrium with Φ along z, read from the
/// first vortex and cross-checked against every non-polar vortex.
pub fn angular_velocity(c: &Configuration) -> Result<f64> {
    let n_ring = c.len() - c.pole_count();
    let first = (0..n_ring).find(|&i| {
        let p = c.vortices()[i].position;
        p.x().hypot(p.y()) >= 1e-6
    });
    let Some(first) = first else {
        return Ok(0.0);
    };
    let xi = angular_velocity_generic(c, first)?;
    let rho = |i: usize| {
        let p = c.vortices()[i].position;
        p.x().hypot(p.y())
    };
    for i in first + 1..n_ring {
        if rho(i) < 1e-6 {
            continue;
        }
        let other = angular_velocity_generic(c, i)?;
        // the per-vortex formula loses accuracy like 1/sin²θ near a pole
        let conditioning = (0.1 / rho(first).min(rho(i))).powi(2).max(1.0);
        if (other - xi).abs() > 1e-9 * xi.abs().max(1.0) * conditioning {
            return Err(Error::Internal(format!(
                "angular velocity differs between vortex {first} ({xi}) and {i} ({other})"
            )));
        }
    }
    Ok(xi)
}

/// Angular velocity of a family member, closed form where one exists.
pub fn family_angular_velocity(desc: &FamilyDescriptor) -> Result<f64> {
    match desc.family {
        Family::DNh2R | Family::DNdRRp => {
            let closed = ring_angular_velocity(desc)?;
            let c = make_family(desc)?;
            let generic = angular_velocity(&c)?;
            if (closed - generic).abs() > 1e-9 * closed.abs().max(1.0) {
                return Err(Error::Internal(format!(
                    "closed-form angular velocity {closed} disagrees with {generic}"
                )));
            }
            Ok(closed)
        }
        _ => angular_velocity(&make_family(desc)?),
    }
}

/// Point on one of the low-symmetry branches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchPoint {
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
    pub family: FamilyDescriptor,
}

impl BranchPoint {
    /// Momentum `Φ_z` on the branch.
    pub fn mu(&self) -> f64 {
        match self.family.family {
            Family::C2vRmRmp => 2.0 * (self.x - self.y),
            _ => 2.0 * (self.x - self.y + self.family.lambda_n),
        }
    }

    pub fn configuration(&self) -> Result<Configuration> {
        let (x, y, a) = (self.x, self.y, self.alpha);
        let tp = x.acos();
        let tm = y.acos();
        match self.family.family {
            Family::C2vRmRmp => {
                // R_m: (+) at (θ1, 0), (−) at (π−θ1, 0); R_m′: (−) at (θ3, α), (+) at (π−θ3, α)
                let v = vec![
                    Vortex::new(unit(tp, 0.0), 1.0),
                    Vortex::new(unit(PI - tm, a), 1.0),
                    Vortex::new(unit(tm, a), -1.0),
                    Vortex::new(unit(PI - tp, 0.0), -1.0),
                ];
                Configuration::new(v, 0)
            }
            _ => {
                let v = vec![
                    Vortex::new(unit(tp, 0.0), 1.0),
                    Vortex::new(unit(tp, PI), 1.0),
                    Vortex::new(unit(tm, a), -1.0),
                    Vortex::new(unit(tm, a + PI), -1.0),
                ];
                let ln = self.family.lambda_n;
                if ln == 0.0 {
                    Configuration::new(v, 0)
                } else {
                    Configuration::new(with_poles(v, ln, -ln), 2)
                }
            }
        }
    }
}

fn check_square(x: f64, y: f64) -> Result<()> {
    if !(x.is_finite() && y.is_finite()) || x.abs() >= 1.0 || y.abs() >= 1.0 {
        return Err(Error::OutOfDomain(format!(
            "(x, y) = ({x}, {y}) outside (-1, 1)²"
        )));
    }
    // a root at |y| = 1 up to rounding puts a ring on the pole
    if (1.0 - x * x).sqrt() < 1e-6 || (1.0 - y * y).sqrt() < 1e-6 {
        return Err(Error::OutOfDomain(format!("(x, y) = ({x}, {y}) on a pole")));
    }
    Ok(())
}

fn branch_descriptor(family: Family, x: f64, lambda_n: f64, branch: i32) -> FamilyDescriptor {
    let kp = if lambda_n == 0.0 || family == Family::C2vRmRmp {
        0
    } else {
        2
    };
    FamilyDescriptor {
        family,
        n: 2,
        theta0: x.acos(),
        kp,
        lambda_n,
        branch,
    }
}

/// `C_2v(2R, 2p)`: `y = (2λ_n x + 1)/(x + 2λ_n)`, α = 0.
#[allow(non_snake_case)]
pub fn branch_c2v_2R2p(x: f64, lambda_n: f64) -> Result<BranchPoint> {
    if lambda_n.abs() < 0.5 {
        return Err(Error::OutOfDomain(format!(
            "|λ_n| = {} < 1/2",
            lambda_n.abs()
        )));
    }
    let den = x + 2.0 * lambda_n;
    if den.abs() < 1e-14 {
        return Err(Error::OutOfDomain("x + 2λ_n = 0".into()));
    }
    let y = (2.0 * lambda_n * x + 1.0) / den;
    check_square(x, y)?;
    let family = branch_descriptor(Family::C2v2R2p, x, lambda_n, 1);
    let p = BranchPoint {
        x,
        y,
        alpha: 0.0,
        family,
    };
    p.configuration()?;
    Ok(p)
}

/// Quartic factor of the α = π/2 family.
pub fn c2v_quartic(x: f64, y: f64, lambda_n: f64) -> f64 {
    x * x * y * y - 2.0 * y * y - 2.0 * x * x + 2.0 * x * y + 1.0
        - 2.0 * lambda_n * (1.0 - x * y) * (x - y)
}

/// `C_2v(R, R′, 2p)`:
/// `y = −(x + λ_n(x²+1) ± (1−x²)√(2+λ_n²)) / (x² − 2(1+λ_n x))`, α = π/2.
#[allow(non_snake_case)]
pub fn branch_c2v_RRp2p(x: f64, lambda_n: f64, sign: i32) -> Result<BranchPoint> {
    if sign != 1 && sign != -1 {
        return Err(Error::OutOfDomain(format!("sign = {sign}")));
    }
    let den = x * x - 2.0 * (1.0 + lambda_n * x);
    if den.abs() < 1e-14 {
        return Err(Error::OutOfDomain("vanishing denominator".into()));
    }
    let root = (2.0 + lambda_n * lambda_n).sqrt();
    let y = -(x + lambda_n * (x * x + 1.0) + sign as f64 * (1.0 - x * x) * root) / den;
    check_square(x, y)?;
    let family = branch_descriptor(Family::C2vRRp2p, x, lambda_n, sign);
    let p = BranchPoint {
        x,
        y,
        alpha: PI / 2.0,
        family,
    };
    p.configuration()?;
    Ok(p)
}

/// Second factor of the α = π equation for `C_2v(R_m, R_m′)`.
pub fn rm_equation(x: f64, y: f64) -> f64 {
    let r = ((1.0 - x * x) * (1.0 - y * y)).max(0.0).sqrt();
    2.0 * (y * x.powi(3) + x * y.powi(3) - x * x - y * y - x * y + 1.0)
        - (x * x + y * y + 2.0 * x * y - 2.0) * r
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// All roots `y ∈ (−1, 1)` of the `C_2v(R_m, R_m′)` equation for a given `x`,
/// excluding the `D_2h(2R)` factor `y = −x`.
pub fn rm_roots(x: f64) -> Vec<f64> {
    const GRID: usize = 4000;
    let f = |y: f64| rm_equation(x, y);
    let mut out = Vec::new();
    let lo = -1.0 + 1e-12;
    let hi = 1.0 - 1e-12;
    let step = (hi - lo) / GRID as f64;
    let mut a = lo;
    let mut fa = f(a);
    for k in 1..=GRID {
        let b = if k == GRID { hi } else { lo + k as f64 * step };
        let fb = f(b);
        if fa == 0.0 {
            out.push(a);
        } else if fa * fb < 0.0 {
            out.push(bisect(f, a, b, 1e-13));
        }
        a = b;
        fa = fb;
    }
    out.retain(|y| y.abs() < 1.0 - 1e-9);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    out
}

/// `C_2v(R_m, R_m′)` with α = π. `branch = +1` selects the root with both
/// (+)vortices in one hemisphere (`xy < 0`), `−1` the root through `D_4h(R_e)`.
#[allow(non_snake_case)]
pub fn branch_c2v_RmRmp_root(x: f64, branch: i32) -> Result<BranchPoint> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::OutOfDomain(format!("x = {x}")));
    }
    let roots = rm_roots(x);
    let pick = roots.into_iter().find(|&y| {
        if branch > 0 {
            x * y < 0.0
        } else {
            x * y >= 0.0
        }
    });
    let y = pick.ok_or(Error::NoRoot)?;
    let family = branch_descriptor(Family::C2vRmRmp, x, 0.0, branch);
    let p = BranchPoint {
        x,
        y,
        alpha: PI,
        family,
    };
    p.configuration()?;
    Ok(p)
}

/// `C_2v(R_m, R_m′)` with the same-hemisphere root when one exists, else the other one.
#[allow(non_snake_case)]
pub fn branch_c2v_RmRmp(x: f64) -> Result<BranchPoint> {
    branch_c2v_RmRmp_root(x, 1).or_else(|_| branch_c2v_RmRmp_root(x, -1))
}

/// Relative phase of two latitudinal rings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RingPhase {
    InPhase,
    OutPhaseByPiOverN,
    Neither,
}

/// Classifies the offset between the (+)ring and the (−)ring modulo 2π/N.
pub fn two_ring_phase_test(c: &Configuration) -> Result<RingPhase> {
    let layout = c.layout();
    let n = layout.plus.len();
    if n < 2 || layout.minus.len() != n {
        return Err(Error::NotTwoRings);
    }
    let pos = c.positions();
    let lat = |idx: &[usize]| -> Result<Vec<f64>> {
        let z0 = pos[idx[0]].z;
        let mut phis = Vec::with_capacity(idx.len());
        for &i in idx {
            if (pos[i].z - z0).abs() > 1e-9 || pos[i].x.hypot(pos[i].y) < POLE_EPS {
                return Err(Error::NotTwoRings);
            }
            phis.push(pos[i].y.atan2(pos[i].x));
        }
        Ok(phis)
    };
    let pp = lat(&layout.plus)?;
    let pm = lat(&layout.minus)?;
    let period = 2.0 * PI / n as f64;
    let reduce = |a: f64| {
        let r = a.rem_euclid(period);
        r.min(period - r)
    };
    // each ring must be a regular N-gon
    for phis in [&pp, &pm] {
        if phis.iter().any(|&p| reduce(p - phis[0]) > 1e-9) {
            return Err(Error::NotTwoRings);
        }
    }
    let off = (pm[0] - pp[0]).rem_euclid(period);
    if off.min(period - off) < 1e-9 {
        Ok(RingPhase::InPhase)
    } else if (off - period / 2.0).abs() < 1e-9 {
        Ok(RingPhase::OutPhaseByPiOverN)
    } else {
        Ok(RingPhase::Neither)
    }
}

/// `Φ_z` of a configuration.
pub fn momentum_z(c: &Configuration) -> f64 {
    momentum_map(c).z
}
