//! Hyperbolic plane primitives in the hyperboloid model.
//!
//! Points live on the future sheet `{x : <x,x> = -1, x3 > 0}` of 2+1 Minkowski
//! space with the Lorentzian form `<x,y> = x1 y1 + x2 y2 - x3 y3`. The
//! Poincaré disk and the Klein (projective) disk are used only for input,
//! output and planar predicates: geodesics of the plane are straight chords of
//! the Klein disk, which is what makes the hull and clipping code linear.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points farther than this from the apex are rejected.
pub const MAX_APEX_DISTANCE: f64 = 20.0;
const SHEET_TOL: f64 = 1e-10;
const ACOSH_CLAMP: f64 = 1e-12;

/// A vector of 2+1 Minkowski space with signature (+, +, -).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MinkowskiVec {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl MinkowskiVec {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn inner(&self, other: &Self) -> f64 {
        lorentz_inner(self, other)
    }

    pub fn cross(&self, other: &Self) -> Self {
        lorentz_cross(self, other)
    }

    /// `<v,v>`; negative for time-like vectors.
    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x1, self.x2, self.x3)
    }

    pub fn from_vector(v: &Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    /// Euclidean max-norm, used for tolerances that scale with coordinate size.
    pub fn max_abs(&self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs())
    }
}

impl Add for MinkowskiVec {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for MinkowskiVec {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for MinkowskiVec {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for MinkowskiVec {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

/// `u1 v1 + u2 v2 - u3 v3`.
pub fn lorentz_inner(u: &MinkowskiVec, v: &MinkowskiVec) -> f64 {
    u.x1 * v.x1 + u.x2 * v.x2 - u.x3 * v.x3
}

/// Lorentzian cross product `J (u x v)`.
///
/// The result is Lorentz-orthogonal to both arguments, and
/// `<u ⊗ v, w> = det[u, v, w]`, so `e1 ⊗ e2 = (0, 0, -1)`.
pub fn lorentz_cross(u: &MinkowskiVec, v: &MinkowskiVec) -> MinkowskiVec {
    MinkowskiVec::new(
        u.x2 * v.x3 - u.x3 * v.x2,
        u.x3 * v.x1 - u.x1 * v.x3,
        -(u.x1 * v.x2 - u.x2 * v.x1),
    )
}

/// A point of the hyperbolic plane on the future sheet of the hyperboloid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MinkowskiVec", into = "MinkowskiVec")]
pub struct HPoint(MinkowskiVec);

impl TryFrom<MinkowskiVec> for HPoint {
    type Error = Error;
    fn try_from(v: MinkowskiVec) -> Result<Self> {
        HPoint::new(v)
    }
}

impl From<HPoint> for MinkowskiVec {
    fn from(p: HPoint) -> Self {
        p.0
    }
}

fn check_range(x3: f64) -> Result<()> {
    if x3 > MAX_APEX_DISTANCE.cosh() {
        return Err(Error::Range(x3.acosh()));
    }
    Ok(())
}

impl HPoint {
    /// The apex `(0, 0, 1)`.
    pub const APEX: HPoint = HPoint(MinkowskiVec::new(0.0, 0.0, 1.0));

    /// Wraps a vector that already lies on the sheet.
    pub fn new(v: MinkowskiVec) -> Result<Self> {
        if !v.is_finite() || v.x3 <= 0.0 {
            return Err(Error::InvalidPoint(format!("{v:?}")));
        }
        let defect = (v.norm_sq() + 1.0).abs();
        if defect > SHEET_TOL * v.x3 * v.x3 {
            return Err(Error::InvalidPoint(format!("<p,p> + 1 = {defect:.3e}")));
        }
        check_range(v.x3)?;
        Ok(Self(v))
    }

    /// Projects a time-like vector (either cone) radially onto the future sheet.
    pub fn normalize(v: MinkowskiVec) -> Result<Self> {
        let n = v.norm_sq();
        if !(n < 0.0) || !v.is_finite() {
            return Err(Error::InvalidPoint(format!("not time-like: {v:?}")));
        }
        let s = (-n).sqrt();
        let s = if v.x3 < 0.0 { -s } else { s };
        let p = v * (1.0 / s);
        check_range(p.x3)?;
        Ok(Self(p))
    }

    /// Point at hyperbolic distance `r` from the apex in direction `theta`.
    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        check_range(r.cosh())?;
        let (s, c) = theta.sin_cos();
        Ok(Self(MinkowskiVec::new(r.sinh() * c, r.sinh() * s, r.cosh())))
    }

    pub fn from_disk(z: DiskPoint) -> Result<Self> {
        disk_to_hyperboloid(z)
    }

    /// Lifts a Klein-disk point `(k1, k2)`, `k1² + k2² < 1`.
    pub fn from_klein(k: [f64; 2]) -> Result<Self> {
        let q = 1.0 - k[0] * k[0] - k[1] * k[1];
        if !(q > 0.0) {
            return Err(Error::OutOfDomain(format!("Klein point {k:?}")));
        }
        let s = 1.0 / q.sqrt();
        check_range(s)?;
        Ok(Self(MinkowskiVec::new(k[0] * s, k[1] * s, s)))
    }

    pub fn vec(&self) -> MinkowskiVec {
        self.0
    }

    pub fn x1(&self) -> f64 {
        self.0.x1
    }
    pub fn x2(&self) -> f64 {
        self.0.x2
    }
    pub fn x3(&self) -> f64 {
        self.0.x3
    }

    pub fn inner(&self, other: &HPoint) -> f64 {
        self.0.inner(&other.0)
    }

    pub fn distance(&self, other: &HPoint) -> f64 {
        hyperbolic_distance(self, other)
    }

    pub fn to_disk(&self) -> DiskPoint {
        hyperboloid_to_disk(self)
    }

    pub fn to_klein(&self) -> [f64; 2] {
        [self.0.x1 / self.0.x3, self.0.x2 / self.0.x3]
    }

    /// Unit tangent at `self` pointing along the geodesic towards `other`.
    pub fn direction_to(&self, other: &HPoint) -> Result<MinkowskiVec> {
        let c = -self.inner(other);
        let t = other.0 - self.0 * c;
        let n = t.norm_sq();
        if !(n > 0.0) {
            return Err(Error::Degenerate("coincident points have no direction".into()));
        }
        Ok(t * (1.0 / n.sqrt()))
    }

    /// Exponential map: follow the unit tangent `dir` for arc length `s`.
    pub fn walk(&self, dir: &MinkowskiVec, s: f64) -> Result<HPoint> {
        HPoint::normalize(self.0 * s.cosh() + *dir * s.sinh())
    }
}

/// A point of the open Poincaré disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    pub u: f64,
    pub v: f64,
}

impl DiskPoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        let r2 = u * u + v * v;
        if !(r2 < 1.0) {
            return Err(Error::OutOfDomain(format!("disk point ({u}, {v}) has |z| >= 1")));
        }
        Ok(Self { u, v })
    }

    pub fn norm(&self) -> f64 {
        self.u.hypot(self.v)
    }
}

/// `arcosh(-<x,y>)`, evaluated as `2 asinh(|x - y|_L / 2)` for accuracy at short range.
pub fn hyperbolic_distance(x: &HPoint, y: &HPoint) -> f64 {
    let d = x.0 - y.0;
    let q = d.norm_sq();
    if q <= 0.0 {
        return 0.0;
    }
    2.0 * (0.5 * q.sqrt()).asinh()
}

/// Distance between raw vectors; fails when `-<x,y>` is below 1 beyond rounding.
pub fn distance_checked(x: &MinkowskiVec, y: &MinkowskiVec) -> Result<f64> {
    let c = -x.inner(y);
    let scale = (x.x3 * y.x3).abs().max(1.0);
    if c < 1.0 - ACOSH_CLAMP * scale {
        return Err(Error::InvalidPoint(format!("-<x,y> = {c} < 1")));
    }
    Ok(c.max(1.0).acosh())
}

pub fn disk_to_hyperboloid(z: DiskPoint) -> Result<HPoint> {
    let r2 = z.u * z.u + z.v * z.v;
    if !(r2 < 1.0) {
        return Err(Error::OutOfDomain(format!("disk point ({}, {}) has |z| >= 1", z.u, z.v)));
    }
    let s = 1.0 / (1.0 - r2);
    let x3 = (1.0 + r2) * s;
    check_range(x3)?;
    Ok(HPoint(MinkowskiVec::new(2.0 * z.u * s, 2.0 * z.v * s, x3)))
}

pub fn hyperboloid_to_disk(p: &HPoint) -> DiskPoint {
    let s = 1.0 / (1.0 + p.0.x3);
    DiskPoint { u: p.0.x1 * s, v: p.0.x2 * s }
}

/// Sign convention for triangle orientation: `<(b-a) ⊗ (c-a), a>`, positive
/// iff `a, b, c` run counter-clockwise in the disk.
pub fn orientation(a: &HPoint, b: &HPoint, c: &HPoint) -> f64 {
    lorentz_cross(&(b.0 - a.0), &(c.0 - a.0)).inner(&a.0)
}

/// Area of a hyperbolic triangle with side lengths `a, b, c` from its angle deficit.
pub fn triangle_area(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::Degenerate(format!("side lengths must be positive: {a}, {b}, {c}")));
    }
    let alpha = angle_from_sides(b, c, a)?;
    let beta = angle_from_sides(c, a, b)?;
    let gamma = angle_from_sides(a, b, c)?;
    Ok((PI - alpha - beta - gamma).max(0.0))
}

/// Angle between sides `a` and `b` opposite side `c`, via the half-angle form
/// of the hyperbolic law of cosines.
fn angle_from_sides(a: f64, b: f64, c: f64) -> Result<f64> {
    let tol = 1e-12 * (a + b + c);
    let s1 = c + a - b;
    let s2 = c - a + b;
    let s3 = a + b - c;
    if s1 < -tol || s2 < -tol || s3 < -tol {
        return Err(Error::Degenerate(format!(
            "triangle inequality violated by sides {a}, {b}, {c}"
        )));
    }
    let sin2 = (0.5 * s1.max(0.0)).sinh() * (0.5 * s2.max(0.0)).sinh();
    let cos2 = (0.5 * (a + b + c)).sinh() * (0.5 * s3.max(0.0)).sinh();
    Ok(2.0 * sin2.sqrt().atan2(cos2.sqrt()))
}

/// Area of the geodesic triangle with the given vertices.
///
/// Uses `tan(A/2) = |det[a,b,c]| / (1 - <a,b> - <b,c> - <c,a>)`, which has no
/// cancellation for thin triangles.
pub fn triangle_area_points(a: &HPoint, b: &HPoint, c: &HPoint) -> f64 {
    let det = lorentz_cross(&a.0, &b.0).inner(&c.0);
    let den = 1.0 - a.inner(b) - b.inner(c) - c.inner(a);
    2.0 * det.abs().atan2(den)
}

/// Area `a sinh b` of a Saccheri quadrilateral with base `a` and legs `b`.
pub fn saccheri_area(a: f64, b: f64) -> f64 {
    a * b.sinh()
}

/// Intersections of the geodesic circles `(c1, r1)` and `(c2, r2)`.
///
/// The first returned point lies on the positive side of the oriented geodesic
/// `c1 -> c2`, i.e. `orientation(c1, c2, p) > 0`.
pub fn circle_circle_intersection(
    c1: &HPoint,
    r1: f64,
    c2: &HPoint,
    r2: f64,
) -> Result<(HPoint, HPoint)> {
    let d = c1.distance(c2);
    let tol = 1e-12 * (1.0 + r1 + r2);
    if !(d > tol) || d >= r1 + r2 - tol || d <= (r1 - r2).abs() + tol {
        return Err(Error::NoIntersection);
    }
    let cc = d.cosh();
    let (a1, a2) = (r1.cosh(), r2.cosh());
    let den = 1.0 - cc * cc;
    let alpha = (a1 - cc * a2) / den;
    let beta = (a2 - cc * a1) / den;
    let n = lorentz_cross(&c1.0, &c2.0);
    let nn = n.norm_sq();
    let base = c1.0 * alpha + c2.0 * beta;
    let t2 = (-1.0 - base.norm_sq()) / nn;
    if !(t2 > 0.0) {
        return Err(Error::NoIntersection);
    }
    let t = t2.sqrt();
    let p = HPoint::normalize(base + n * t)?;
    let q = HPoint::normalize(base - n * t)?;
    if orientation(c1, c2, &p) > 0.0 {
        Ok((p, q))
    } else {
        Ok((q, p))
    }
}

/// Point at fraction `t` of the arc length along the geodesic from `a` to `b`.
pub fn geodesic_point(a: &HPoint, b: &HPoint, t: f64) -> Result<HPoint> {
    let d = a.distance(b);
    if d == 0.0 {
        return Ok(*a);
    }
    let dir = a.direction_to(b)?;
    a.walk(&dir, t * d)
}

/// Lorentz-normalized mean of weighted points.
pub fn lorentz_mean(points: &[HPoint], weights: &[f64]) -> Result<HPoint> {
    let mut acc = MinkowskiVec::default();
    for (p, w) in points.iter().zip(weights) {
        acc = acc + p.0 * *w;
    }
    HPoint::normalize(acc)
}

/// `diag(1, 1, -1)`.
pub fn signature() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0))
}

/// An orientation- and time-preserving linear isometry of Minkowski space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzIsometry {
    m: Matrix3<f64>,
}

impl LorentzIsometry {
    pub fn identity() -> Self {
        Self { m: Matrix3::identity() }
    }

    /// Checks `GᵀJG = J` to `1e-10` and `G[3,3] > 0`.
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        Self::with_tolerance(m, 1e-10)
    }

    pub fn with_tolerance(m: Matrix3<f64>, tol: f64) -> Result<Self> {
        let g = Self { m };
        let res = g.residual();
        let scale = m.amax().max(1.0);
        if !(res <= tol * scale * scale) || !(m[(2, 2)] > 0.0) {
            return Err(Error::Degenerate(format!("not a Lorentz isometry (residual {res:.3e})")));
        }
        Ok(g)
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { m: Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0) }
    }

    /// Hyperbolic translation by `t` along the `x1` axis.
    pub fn boost_x(t: f64) -> Self {
        let (s, c) = (t.sinh(), t.cosh());
        Self { m: Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c) }
    }

    /// Translation along the geodesic from the apex to `p`, mapping the apex to `p`.
    pub fn translation_to(p: &HPoint) -> Self {
        let r = (p.x1().hypot(p.x2())).asinh();
        let theta = p.x2().atan2(p.x1());
        let rot = Self::rotation(theta);
        rot.compose(&Self::boost_x(r)).compose(&rot.inverse())
    }

    /// The unique isometry taking the frame at `p0` pointing to `p1` onto the
    /// frame at `q0` pointing to `q1`. Requires `d(p0,p1) = d(q0,q1)`.
    pub fn from_point_pairs(p0: &HPoint, p1: &HPoint, q0: &HPoint, q1: &HPoint) -> Result<Self> {
        let e = frame(p0, p1)?;
        let f = frame(q0, q1)?;
        // Frame Gram matrix is diag(-1, 1, 1).
        let k = Matrix3::from_diagonal(&Vector3::new(-1.0, 1.0, 1.0));
        let m = f * k * e.transpose() * signature();
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { m: self.m * other.m }
    }

    /// `J Gᵀ J`.
    pub fn inverse(&self) -> Self {
        let j = signature();
        Self { m: j * self.m.transpose() * j }
    }

    pub fn apply_vec(&self, v: &MinkowskiVec) -> MinkowskiVec {
        MinkowskiVec::from_vector(&(self.m * v.to_vector()))
    }

    pub fn apply(&self, p: &HPoint) -> HPoint {
        let v = self.apply_vec(&p.0);
        HPoint::normalize(v).unwrap_or(HPoint(v))
    }

    /// `max |GᵀJG - J|`.
    pub fn residual(&self) -> f64 {
        let j = signature();
        (self.m.transpose() * j * self.m - j).amax()
    }

    /// The nearby Lorentz matrix obtained by Gram–Schmidt on the columns,
    /// timelike column first. Removes drift accumulated by long products.
    pub fn reorthonormalized(&self) -> Self {
        let col = |k: usize| MinkowskiVec::from_vector(&self.m.column(k).into_owned());
        let unit = |v: MinkowskiVec| {
            let n = v.inner(&v).abs().sqrt();
            MinkowskiVec::new(v.x1 / n, v.x2 / n, v.x3 / n)
        };
        let sub = |v: MinkowskiVec, e: &MinkowskiVec, s: f64| {
            let c = s * v.inner(e);
            MinkowskiVec::new(v.x1 - c * e.x1, v.x2 - c * e.x2, v.x3 - c * e.x3)
        };
        let t = unit(col(2));
        let e1 = unit(sub(col(0), &t, -1.0));
        let e2 = unit(sub(sub(col(1), &t, -1.0), &e1, 1.0));
        Self { m: Matrix3::from_columns(&[e1.to_vector(), e2.to_vector(), t.to_vector()]) }
    }

    /// Max-norm distance between matrices.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.m - other.m).amax()
    }
}

/// Columns: the point, the unit tangent towards `toward`, and their cross product.
fn frame(at: &HPoint, toward: &HPoint) -> Result<Matrix3<f64>> {
    let t = at.direction_to(toward)?;
    let n = lorentz_cross(&at.0, &t);
    Ok(Matrix3::from_columns(&[at.0.to_vector(), t.to_vector(), n.to_vector()]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(u: f64, v: f64) -> HPoint {
        HPoint::from_disk(DiskPoint::new(u, v).unwrap()).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        let e3 = MinkowskiVec::new(0.0, 0.0, 1.0);
        let e1 = MinkowskiVec::new(1.0, 0.0, 0.0);
        assert_eq!(lorentz_inner(&e3, &e3), -1.0);
        assert_eq!(lorentz_inner(&e1, &e1), 1.0);
        let a = MinkowskiVec::new(1.0, 1.0, 1.0);
        let b = MinkowskiVec::new(2.0, 0.0, 3.0);
        assert_eq!(lorentz_inner(&a, &b), -1.0);
        assert_eq!(lorentz_inner(&b, &a), -1.0);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(HPoint::APEX.distance(&HPoint::APEX), 0.0);
        let p = disk(0.5, 0.0);
        assert!((HPoint::APEX.distance(&p) - 3f64.ln()).abs() < 1e-14);
        assert!((HPoint::APEX.distance(&p) - 2.0 * 0.5f64.atanh()).abs() < 1e-14);
    }

    #[test]
    fn disk_conversion_examples() {
        let o = disk(0.0, 0.0);
        assert_eq!(o.vec(), MinkowskiVec::new(0.0, 0.0, 1.0));
        let p = disk(0.5, 0.0);
        assert!((p.x1() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.x2(), 0.0);
        assert!((p.x3() - 5.0 / 3.0).abs() < 1e-15);
        assert!(matches!(DiskPoint::new(1.0, 0.0), Err(Error::OutOfDomain(_))));
        assert!(matches!(
            disk_to_hyperboloid(DiskPoint { u: 0.6, v: 0.8 }),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn far_points_are_rejected() {
        assert!(matches!(HPoint::from_polar(20.5, 0.3), Err(Error::Range(_))));
        assert!(HPoint::from_polar(19.0, 0.3).is_ok());
    }

    #[test]
    fn off_sheet_vectors_are_rejected() {
        assert!(HPoint::new(MinkowskiVec::new(0.0, 0.0, 2.0)).is_err());
        assert!(HPoint::new(MinkowskiVec::new(0.0, 0.0, -1.0)).is_err());
        assert!(distance_checked(&MinkowskiVec::new(0.0, 0.0, 1.0), &MinkowskiVec::new(0.0, 0.0, 0.5)).is_err());
        let c = distance_checked(
            &MinkowskiVec::new(0.0, 0.0, 1.0),
            &MinkowskiVec::new(0.0, 0.0, 1.0 - 5e-13),
        )
        .unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn cross_product_convention() {
        let e1 = MinkowskiVec::new(1.0, 0.0, 0.0);
        let e2 = MinkowskiVec::new(0.0, 1.0, 0.0);
        assert_eq!(lorentz_cross(&e1, &e2), MinkowskiVec::new(0.0, 0.0, -1.0));
        let u = MinkowskiVec::new(0.3, -1.2, 2.0);
        assert_eq!(lorentz_cross(&u, &u), MinkowskiVec::default());
        let a = disk(0.0, 0.0);
        let b = disk(0.3, 0.0);
        let c = disk(0.0, 0.3);
        assert!(orientation(&a, &b, &c) > 0.0);
        assert!(orientation(&a, &c, &b) < 0.0);
    }

    #[test]
    fn triangle_area_limits() {
        // Equilateral: cos A = cosh a / (cosh a + 1).
        let big = triangle_area(10.0, 10.0, 10.0).unwrap();
        let angle = (10f64.cosh() / (10f64.cosh() + 1.0)).acos();
        assert!(big < PI && (big - (PI - 3.0 * angle)).abs() < 1e-9);
        let tiny = triangle_area(1e-3, 1e-3, 1e-3).unwrap();
        assert!(tiny > 0.0 && tiny < 1e-5);
        assert!(matches!(triangle_area(1.0, 1.0, 2.5), Err(Error::Degenerate(_))));
    }

    #[test]
    fn triangle_area_from_points_matches_deficit() {
        let a = disk(0.1, -0.2);
        let b = disk(0.5, 0.1);
        let c = disk(-0.3, 0.4);
        let from_sides = triangle_area(b.distance(&c), c.distance(&a), a.distance(&b)).unwrap();
        assert!((triangle_area_points(&a, &b, &c) - from_sides).abs() < 1e-12);
    }

    #[test]
    fn saccheri_examples() {
        assert_eq!(saccheri_area(2.0, 0.0), 0.0);
        assert!((saccheri_area(1.0, 1.0) - 1.1752011936438014).abs() < 1e-15);
    }

    #[test]
    fn circle_intersection_symmetric_case() {
        let c1 = HPoint::from_polar(0.7, 0.0).unwrap();
        let c2 = HPoint::from_polar(0.7, PI).unwrap();
        let (p, q) = circle_circle_intersection(&c1, 1.0, &c2, 1.0).unwrap();
        // Both on the geodesic x1 = 0.
        assert!(p.x1().abs() < 1e-12 && q.x1().abs() < 1e-12);
        assert!((p.distance(&c1) - 1.0).abs() < 1e-9);
        assert!((q.distance(&c2) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn circle_intersection_rejects_tangency() {
        let c1 = HPoint::APEX;
        let c2 = HPoint::from_polar(1.5, 0.4).unwrap();
        let d = c1.distance(&c2);
        assert_eq!(
            circle_circle_intersection(&c1, 0.5, &c2, d - 0.5),
            Err(Error::NoIntersection)
        );
        assert_eq!(circle_circle_intersection(&c1, 0.2, &c2, 0.2), Err(Error::NoIntersection));
    }

    #[test]
    fn isometry_basics() {
        let p = disk(0.2, -0.4);
        assert_eq!(LorentzIsometry::identity().apply(&p), p);
        let g = LorentzIsometry::translation_to(&disk(0.3, 0.5)).compose(&LorentzIsometry::rotation(0.7));
        let gi = g.compose(&g.inverse());
        assert!(gi.distance(&LorentzIsometry::identity()) < 1e-12);
        assert!(g.residual() < 1e-12);
        let t = LorentzIsometry::translation_to(&p);
        assert!(t.apply(&HPoint::APEX).distance(&p) < 1e-12);
    }

    #[test]
    fn isometry_from_point_pairs() {
        let p0 = disk(0.1, 0.2);
        let p1 = disk(-0.3, 0.1);
        let g = LorentzIsometry::translation_to(&disk(0.4, -0.2)).compose(&LorentzIsometry::rotation(2.1));
        let q0 = g.apply(&p0);
        let q1 = g.apply(&p1);
        let h = LorentzIsometry::from_point_pairs(&p0, &p1, &q0, &q1).unwrap();
        assert!(h.distance(&g) < 1e-12);
        assert!(h.residual() < 1e-12);
    }
}
