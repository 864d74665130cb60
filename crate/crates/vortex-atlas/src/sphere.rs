//! Geometry of the unit sphere: positions, configurations, the symmetry
//! group `O(3) × S_N × S_N ⋊ Z₂[τ]` and the mixed (θ, φ) / pole chart.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Minimum admissible chord distance between two vortices.
pub const COLLISION_EPS: f64 = 1e-9;
/// Band on |sin θ| inside which the spherical chart is refused.
pub const POLE_EPS: f64 = 1e-8;

const UNIT_TOL: f64 = 1e-12;
// Inputs read from files are renormalized when they are this close to unit length.
const INPUT_UNIT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidConfiguration(format!(
                "({x}, {y}, {z}) is not a unit vector"
            )));
        }
        Ok(Self { x, y, z })
    }

    /// Projects a nonzero vector onto the sphere.
    pub fn normalize(v: Vec3) -> Result<Self> {
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidConfiguration(
                "cannot normalize a zero vector".into(),
            ));
        }
        let u = v / n;
        Ok(Self {
            x: u.x,
            y: u.y,
            z: u.z,
        })
    }

    pub(crate) fn from_vec_unchecked(v: Vec3) -> Self {
        Self {
            x: v.x,
            y: v.y,
            z: v.z,
        }
    }

    pub fn north() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            z: 1.0,
        }
    }

    pub fn south() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            z: -1.0,
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn as_vec(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn dot(&self, other: &UnitVector3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

/// Squared Euclidean distance `|a − b|² = 2(1 − a·b)` between two points of the sphere.
pub fn chord_distance_squared(a: &UnitVector3, b: &UnitVector3) -> f64 {
    (a.as_vec() - b.as_vec()).norm_squared()
}

/// Co-latitude θ ∈ (0, π) and longitude φ ∈ [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalCoords {
    pub theta: f64,
    pub phi: f64,
}

pub fn to_spherical(v: &UnitVector3) -> Result<SphericalCoords> {
    let rho = v.x.hypot(v.y);
    if rho < POLE_EPS {
        return Err(Error::PoleSingularity);
    }
    let theta = rho.atan2(v.z);
    let mut phi = v.y.atan2(v.x);
    if phi < 0.0 {
        phi += 2.0 * PI;
    }
    if phi >= 2.0 * PI {
        phi -= 2.0 * PI;
    }
    Ok(SphericalCoords { theta, phi })
}

pub fn to_cartesian(s: &SphericalCoords) -> UnitVector3 {
    let (st, ct) = s.theta.sin_cos();
    let (sp, cp) = s.phi.sin_cos();
    UnitVector3::from_vec_unchecked(Vec3::new(st * cp, st * sp, ct))
}

/// Tangent-plane coordinates of a vortex pinned near a pole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleChart {
    pub x: f64,
    pub y: f64,
}

impl PoleChart {
    pub fn from_unit(v: &UnitVector3) -> Self {
        Self { x: v.x, y: v.y }
    }

    /// Lifts back to the sphere on the northern (`north = true`) or southern hemisphere.
    pub fn to_unit(&self, north: bool) -> Result<UnitVector3> {
        let r2 = self.x * self.x + self.y * self.y;
        if r2 >= 1.0 {
            return Err(Error::InvalidConfiguration(
                "pole chart point outside unit disk".into(),
            ));
        }
        let z = (1.0 - r2).sqrt();
        Ok(UnitVector3::from_vec_unchecked(Vec3::new(
            self.x,
            self.y,
            if north { z } else { -z },
        )))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vortex {
    pub position: UnitVector3,
    pub strength: f64,
}

impl Vortex {
    pub fn new(position: UnitVector3, strength: f64) -> Self {
        Self { position, strength }
    }
}

/// Index labeling of a configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    pub north: Option<usize>,
    pub south: Option<usize>,
}

/// Ordered vortices; when `pole_count == 2` the last two entries are the
/// north and south polar vortices.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    vortices: Vec<Vortex>,
    pole_count: usize,
}

impl Configuration {
    pub fn new(vortices: Vec<Vortex>, pole_count: usize) -> Result<Self> {
        if pole_count != 0 && pole_count != 2 {
            return Err(Error::InvalidConfiguration(format!(
                "pole count {pole_count}"
            )));
        }
        if vortices.len() < pole_count + 1 {
            return Err(Error::InvalidConfiguration("too few vortices".into()));
        }
        let n_ring = vortices.len() - pole_count;
        for (i, v) in vortices.iter().enumerate() {
            let s = v.strength;
            if i < n_ring && s != 1.0 && s != -1.0 {
                return Err(Error::InvalidConfiguration(format!(
                    "ring vortex {i} has strength {s}, expected ±1"
                )));
            }
            if i >= n_ring && !(s.is_finite() && s != 0.0) {
                return Err(Error::InvalidConfiguration(format!("polar strength {s}")));
            }
        }
        let c = Self {
            vortices,
            pole_count,
        };
        if pole_count == 2 {
            let n = c.vortices.len();
            if c.vortices[n - 2].position.z <= 0.0 || c.vortices[n - 1].position.z >= 0.0 {
                return Err(Error::InvalidConfiguration(
                    "polar vortices must lie in their own hemispheres".into(),
                ));
            }
        }
        c.check_collisions(COLLISION_EPS)?;
        Ok(c)
    }

    pub(crate) fn from_parts_unchecked(vortices: Vec<Vortex>, pole_count: usize) -> Self {
        Self {
            vortices,
            pole_count,
        }
    }

    pub fn vortices(&self) -> &[Vortex] {
        &self.vortices
    }

    pub fn len(&self) -> usize {
        self.vortices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vortices.is_empty()
    }

    pub fn pole_count(&self) -> usize {
        self.pole_count
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.vortices.iter().map(|v| v.position.as_vec()).collect()
    }

    pub fn strengths(&self) -> Vec<f64> {
        self.vortices.iter().map(|v| v.strength).collect()
    }

    pub fn layout(&self) -> Layout {
        let n_ring = self.vortices.len() - self.pole_count;
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (i, v) in self.vortices[..n_ring].iter().enumerate() {
            if v.strength > 0.0 {
                plus.push(i);
            } else {
                minus.push(i);
            }
        }
        let (north, south) = if self.pole_count == 2 {
            (Some(n_ring), Some(n_ring + 1))
        } else {
            (None, None)
        };
        Layout {
            plus,
            minus,
            north,
            south,
        }
    }

    /// Smallest chord distance and the pair realizing it.
    pub fn min_chord_distance(&self) -> (f64, usize, usize) {
        let mut best = (f64::INFINITY, 0, 0);
        for i in 0..self.vortices.len() {
            for j in i + 1..self.vortices.len() {
                let d =
                    chord_distance_squared(&self.vortices[i].position, &self.vortices[j].position)
                        .sqrt();
                if d < best.0 {
                    best = (d, i, j);
                }
            }
        }
        best
    }

    pub fn check_collisions(&self, eps: f64) -> Result<()> {
        let (d, i, j) = self.min_chord_distance();
        if d <= eps {
            return Err(Error::Collision { i, j, distance: d });
        }
        Ok(())
    }

    /// Same labels and strengths at new (renormalized) positions.
    pub fn with_positions(&self, positions: &[Vec3]) -> Configuration {
        let vortices = self
            .vortices
            .iter()
            .zip(positions)
            .map(|(v, p)| Vortex::new(UnitVector3::from_vec_unchecked(p.normalize()), v.strength))
            .collect();
        Configuration::from_parts_unchecked(vortices, self.pole_count)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ConfigurationJson = serde_json::from_str(text)?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ConfigurationJson::from(self)).expect("plain data serializes")
    }
}

/// File format `{"vortices": [{"pos": [x,y,z], "strength": s}, ...], "poles": 0|2}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigurationJson {
    pub vortices: Vec<VortexJson>,
    #[serde(default)]
    pub poles: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VortexJson {
    pub pos: [f64; 3],
    pub strength: f64,
}

impl TryFrom<ConfigurationJson> for Configuration {
    type Error = Error;

    fn try_from(raw: ConfigurationJson) -> Result<Self> {
        let mut vortices = Vec::with_capacity(raw.vortices.len());
        for v in raw.vortices {
            let p = Vec3::from(v.pos);
            if (p.norm() - 1.0).abs() > INPUT_UNIT_TOL {
                return Err(Error::InvalidConfiguration(format!(
                    "{:?} is not a unit vector",
                    v.pos
                )));
            }
            vortices.push(Vortex::new(UnitVector3::normalize(p)?, v.strength));
        }
        Configuration::new(vortices, raw.poles)
    }
}

impl From<&Configuration> for ConfigurationJson {
    fn from(c: &Configuration) -> Self {
        Self {
            vortices: c
                .vortices
                .iter()
                .map(|v| VortexJson {
                    pos: [v.position.x, v.position.y, v.position.z],
                    strength: v.strength,
                })
                .collect(),
            poles: c.pole_count,
        }
    }
}

/// Labeled slot of a configuration acted on by the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Plus(usize),
    Minus(usize),
    North,
    South,
}

/// Element `(A, σ, σ′, τᵏ)` of `O(3) × S_N × S_N ⋊ Z₂[τ]`. Permutations are 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub orthogonal: Matrix3<f64>,
    pub sigma_plus: Vec<usize>,
    pub sigma_minus: Vec<usize>,
    pub tau_power: u8,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &k in p {
        if k >= p.len() || seen[k] {
            return false;
        }
        seen[k] = true;
    }
    true
}

impl GroupElement {
    pub fn new(
        orthogonal: Matrix3<f64>,
        sigma_plus: Vec<usize>,
        sigma_minus: Vec<usize>,
        tau_power: u8,
    ) -> Result<Self> {
        if (orthogonal.transpose() * orthogonal - Matrix3::identity()).amax() > 1e-12 {
            return Err(Error::InvalidConfiguration(
                "matrix is not orthogonal".into(),
            ));
        }
        if !is_permutation(&sigma_plus) || !is_permutation(&sigma_minus) {
            return Err(Error::InvalidConfiguration("invalid permutation".into()));
        }
        Ok(Self {
            orthogonal,
            sigma_plus,
            sigma_minus,
            tau_power: tau_power % 2,
        })
    }

    pub fn identity(n_plus: usize, n_minus: usize) -> Self {
        Self {
            orthogonal: Matrix3::identity(),
            sigma_plus: (0..n_plus).collect(),
            sigma_minus: (0..n_minus).collect(),
            tau_power: 0,
        }
    }

    /// `(−1)^k det A`: +1 for symplectic, −1 for time-reversing elements.
    pub fn chi(&self) -> i32 {
        let det = self.orthogonal.determinant();
        let s = if det > 0.0 { 1 } else { -1 };
        if self.tau_power == 1 {
            -s
        } else {
            s
        }
    }

    /// Slot whose position is moved into `slot`.
    pub fn source(&self, slot: Slot) -> Slot {
        let swap = self.tau_power == 1;
        match slot {
            Slot::Plus(i) if swap => Slot::Minus(self.sigma_minus[i]),
            Slot::Plus(i) => Slot::Plus(self.sigma_plus[i]),
            Slot::Minus(i) if swap => Slot::Plus(self.sigma_plus[i]),
            Slot::Minus(i) => Slot::Minus(self.sigma_minus[i]),
            Slot::North if swap => Slot::South,
            Slot::South if swap => Slot::North,
            other => other,
        }
    }

    /// Group product `self ∘ other`, acting as `self·(other·c)`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        let (np, nm) = (self.sigma_plus.len(), self.sigma_minus.len());
        if other.sigma_plus.len() != np || other.sigma_minus.len() != nm {
            return Err(Error::InvalidConfiguration(
                "group elements of different sizes".into(),
            ));
        }
        let tau_power = (self.tau_power + other.tau_power) % 2;
        let index = |s: Slot| match s {
            Slot::Plus(i) | Slot::Minus(i) => i,
            _ => unreachable!(),
        };
        let sigma_plus = (0..np)
            .map(|i| index(other.source(self.source(Slot::Plus(i)))))
            .collect();
        let sigma_minus = (0..nm)
            .map(|i| index(other.source(self.source(Slot::Minus(i)))))
            .collect();
        Ok(GroupElement {
            orthogonal: self.orthogonal * other.orthogonal,
            sigma_plus,
            sigma_minus,
            tau_power,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        let invert = |p: &[usize]| {
            let mut q = vec![0; p.len()];
            for (i, &k) in p.iter().enumerate() {
                q[k] = i;
            }
            q
        };
        // With τ the roles of σ and σ′ swap under inversion.
        let (sp, sm) = if self.tau_power == 1 {
            (invert(&self.sigma_minus), invert(&self.sigma_plus))
        } else {
            (invert(&self.sigma_plus), invert(&self.sigma_minus))
        };
        GroupElement {
            orthogonal: self.orthogonal.transpose(),
            sigma_plus: sp,
            sigma_minus: sm,
            tau_power: self.tau_power,
        }
    }
}

pub fn rotation_z(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

pub fn rotation_x(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// Reflection `z ↦ −z`.
pub fn reflection_z() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0))
}

/// Reflection `x ↦ −x`.
pub fn reflection_x() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vec3::new(-1.0, 1.0, 1.0))
}

/// Cyclic shift `i ↦ i + k mod n`.
pub fn cyclic(n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|i| (i + k) % n).collect()
}

fn slot_index(layout: &Layout, slot: Slot) -> usize {
    match slot {
        Slot::Plus(i) => layout.plus[i],
        Slot::Minus(i) => layout.minus[i],
        Slot::North => layout.north.expect("north pole present"),
        Slot::South => layout.south.expect("south pole present"),
    }
}

/// `g·c`: slot `s` receives `A·x_{src(s)}`; strengths stay with their slots.
pub fn apply_group_element(g: &GroupElement, c: &Configuration) -> Result<Configuration> {
    let layout = c.layout();
    if layout.plus.len() != g.sigma_plus.len() || layout.minus.len() != g.sigma_minus.len() {
        return Err(Error::InvalidConfiguration(
            "group element does not match the configuration layout".into(),
        ));
    }
    if g.tau_power == 1 && layout.plus.len() != layout.minus.len() {
        return Err(Error::InvalidConfiguration(
            "τ needs equally many (+) and (−) vortices".into(),
        ));
    }
    let pos = c.positions();
    let mut out = pos.clone();
    let mut slots: Vec<Slot> = (0..layout.plus.len()).map(Slot::Plus).collect();
    slots.extend((0..layout.minus.len()).map(Slot::Minus));
    if c.pole_count() == 2 {
        slots.push(Slot::North);
        slots.push(Slot::South);
    }
    for s in slots {
        out[slot_index(&layout, s)] = g.orthogonal * pos[slot_index(&layout, g.source(s))];
    }
    Ok(c.with_positions(&out))
}

pub fn is_fixed_by(c: &Configuration, g: &GroupElement, tol: f64) -> bool {
    match apply_group_element(g, c) {
        Ok(gc) => c
            .positions()
            .iter()
            .zip(gc.positions())
            .all(|(a, b)| (a - b).norm() < tol),
        Err(_) => false,
    }
}

/// Mixed chart: (θ, φ) for every non-polar vortex, (x, y) for the polar ones.
///
/// Coordinates are ordered `[θ_1..θ_m, φ_1..φ_m, x_n, y_n, x_s, y_s]`
/// where `m` counts the non-polar vortices in configuration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedChart {
    sph: Vec<usize>,
    poles: Vec<usize>,
}

impl MixedChart {
    pub fn for_configuration(c: &Configuration) -> Self {
        let n_ring = c.len() - c.pole_count();
        Self {
            sph: (0..n_ring).collect(),
            poles: (n_ring..c.len()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.sph.len() + 2 * self.poles.len()
    }

    pub fn n_spherical(&self) -> usize {
        self.sph.len()
    }

    pub fn coordinates(&self, c: &Configuration) -> Result<DVector<f64>> {
        let m = self.sph.len();
        let mut q = DVector::zeros(self.dim());
        for (k, &i) in self.sph.iter().enumerate() {
            let s = to_spherical(&c.vortices()[i].position)?;
            q[k] = s.theta;
            q[m + k] = s.phi;
        }
        for (k, &i) in self.poles.iter().enumerate() {
            let p = PoleChart::from_unit(&c.vortices()[i].position);
            q[2 * m + 2 * k] = p.x;
            q[2 * m + 2 * k + 1] = p.y;
        }
        Ok(q)
    }

    /// Rebuilds a configuration from chart coordinates, keeping the labels of `template`.
    pub fn configuration(
        &self,
        template: &Configuration,
        q: &DVector<f64>,
    ) -> Result<Configuration> {
        let m = self.sph.len();
        let mut pos = template.positions();
        for (k, &i) in self.sph.iter().enumerate() {
            pos[i] = to_cartesian(&SphericalCoords {
                theta: q[k],
                phi: q[m + k],
            })
            .as_vec();
        }
        for (k, &i) in self.poles.iter().enumerate() {
            let north = template.vortices()[i].position.z > 0.0;
            let p = PoleChart {
                x: q[2 * m + 2 * k],
                y: q[2 * m + 2 * k + 1],
            };
            pos[i] = p.to_unit(north)?.as_vec();
        }
        Ok(template.with_positions(&pos))
    }

    /// For every coordinate, the vortex it moves and `∂x/∂q`.
    pub fn tangents(&self, c: &Configuration) -> Vec<(usize, Vec3)> {
        let m = self.sph.len();
        let mut out = vec![(0, Vec3::zeros()); self.dim()];
        for (k, &i) in self.sph.iter().enumerate() {
            let p = c.vortices()[i].position;
            let rho = p.x.hypot(p.y);
            let (cp, sp) = (p.x / rho, p.y / rho);
            out[k] = (i, Vec3::new(p.z * cp, p.z * sp, -rho));
            out[m + k] = (i, Vec3::new(-p.y, p.x, 0.0));
        }
        for (k, &i) in self.poles.iter().enumerate() {
            let p = c.vortices()[i].position;
            out[2 * m + 2 * k] = (i, Vec3::new(1.0, 0.0, -p.x / p.z));
            out[2 * m + 2 * k + 1] = (i, Vec3::new(0.0, 1.0, -p.y / p.z));
        }
        out
    }

    /// Pulls ambient per-vortex covectors back to chart components.
    pub fn pull_back(&self, c: &Configuration, covectors: &[Vec3]) -> DVector<f64> {
        let t = self.tangents(c);
        DVector::from_iterator(t.len(), t.iter().map(|(i, v)| covectors[*i].dot(v)))
    }

    /// Chart components of ambient per-vortex velocities.
    pub fn push_forward(&self, c: &Configuration, velocities: &[Vec3]) -> DVector<f64> {
        let m = self.sph.len();
        let mut out = DVector::zeros(self.dim());
        for (k, &i) in self.sph.iter().enumerate() {
            let p = c.vortices()[i].position;
            let rho = p.x.hypot(p.y);
            let (cp, sp) = (p.x / rho, p.y / rho);
            let v = velocities[i];
            out[k] = v.dot(&Vec3::new(p.z * cp, p.z * sp, -rho));
            out[m + k] = v.dot(&Vec3::new(-sp, cp, 0.0)) / rho;
        }
        for (k, &i) in self.poles.iter().enumerate() {
            out[2 * m + 2 * k] = velocities[i].x;
            out[2 * m + 2 * k + 1] = velocities[i].y;
        }
        out
    }

    /// Symplectic form `Σ λ sinθ dθ∧dφ` plus `λ/z dx∧dy` on the pole charts.
    pub fn symplectic_form(&self, c: &Configuration) -> DMatrix<f64> {
        let m = self.sph.len();
        let mut w = DMatrix::zeros(self.dim(), self.dim());
        for (k, &i) in self.sph.iter().enumerate() {
            let v = c.vortices()[i];
            let rho = v.position.x.hypot(v.position.y);
            w[(k, m + k)] = v.strength * rho;
            w[(m + k, k)] = -v.strength * rho;
        }
        for (k, &i) in self.poles.iter().enumerate() {
            let v = c.vortices()[i];
            let a = 2 * m + 2 * k;
            w[(a, a + 1)] = v.strength / v.position.z;
            w[(a + 1, a)] = -v.strength / v.position.z;
        }
        w
    }

    /// `DΦ` as a 3 × dim matrix.
    pub fn momentum_differential(&self, c: &Configuration) -> DMatrix<f64> {
        let t = self.tangents(c);
        let mut d = DMatrix::zeros(3, t.len());
        for (k, (i, v)) in t.iter().enumerate() {
            let lam = c.vortices()[*i].strength;
            for r in 0..3 {
                d[(r, k)] = lam * v[r];
            }
        }
        d
    }

    /// Chart components of the infinitesimal rotation about `axis`.
    pub fn rotation_tangent(&self, c: &Configuration, axis: &Vec3) -> DVector<f64> {
        let vel: Vec<Vec3> = c.positions().iter().map(|x| axis.cross(x)).collect();
        self.push_forward(c, &vel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chord_examples() {
        let e1 = UnitVector3::new(1.0, 0.0, 0.0).unwrap();
        let e2 = UnitVector3::new(0.0, 1.0, 0.0).unwrap();
        assert_eq!(chord_distance_squared(&e1, &e1), 0.0);
        assert_eq!(
            chord_distance_squared(&UnitVector3::north(), &UnitVector3::south()),
            4.0
        );
        assert!((chord_distance_squared(&e1, &e2) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn spherical_examples() {
        let s = to_spherical(&UnitVector3::new(1.0, 0.0, 0.0).unwrap()).unwrap();
        assert!((s.theta - PI / 2.0).abs() < 1e-15 && s.phi.abs() < 1e-15);
        let s = to_spherical(&UnitVector3::new(0.0, -1.0, 0.0).unwrap()).unwrap();
        assert!((s.phi - 1.5 * PI).abs() < 1e-15);
        let near = UnitVector3::normalize(Vec3::new(1e-10, 0.0, 1.0)).unwrap();
        assert!(matches!(to_spherical(&near), Err(Error::PoleSingularity)));
    }

    #[test]
    fn rejects_collisions_and_bad_strengths() {
        let p = UnitVector3::north();
        let q = UnitVector3::new(1.0, 0.0, 0.0).unwrap();
        let same = vec![Vortex::new(q, 1.0), Vortex::new(q, -1.0)];
        assert!(matches!(
            Configuration::new(same, 0),
            Err(Error::Collision { .. })
        ));
        let bad = vec![Vortex::new(p, 2.0), Vortex::new(q, -1.0)];
        assert!(Configuration::new(bad, 0).is_err());
    }

    #[test]
    fn compose_inverse_is_identity() {
        let g = GroupElement::new(rotation_z(0.3), vec![1, 2, 0], vec![2, 0, 1], 1).unwrap();
        let e = g.compose(&g.inverse()).unwrap();
        assert_eq!(e.sigma_plus, vec![0, 1, 2]);
        assert_eq!(e.sigma_minus, vec![0, 1, 2]);
        assert_eq!(e.tau_power, 0);
        assert!((e.orthogonal - Matrix3::identity()).amax() < 1e-15);
    }
}
