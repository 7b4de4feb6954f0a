use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{signature, HPoint, MinkowskiVec};

/// A geodesic circle `(center, r)`; its height is `ln cosh r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicCircle {
    center: HPoint,
    radius: f64,
}

impl GeodesicCircle {
    pub fn new(center: HPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Degenerate(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &HPoint {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `φ = ln cosh r`.
    pub fn height(&self) -> f64 {
        self.radius.cosh().ln()
    }

    /// `ρ = 1 / cosh r = e^{-φ}`.
    pub fn radial(&self) -> f64 {
        1.0 / self.radius.cosh()
    }

    pub fn site(&self) -> Site {
        Site::new(self.center, self.height())
    }
}

/// `cosh pow(q, c) = cosh d(q, center) / cosh r`.
pub fn power_distance(q: &HPoint, c: &GeodesicCircle) -> f64 {
    -q.inner(&c.center) / c.radius.cosh()
}

/// A weighted site with a real height. Heights may be negative: the diagram
/// only sees the radial length `e^{-height}`, and adding a constant to every
/// height leaves it unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Site {
    pub center: HPoint,
    pub height: f64,
}

impl Site {
    pub fn new(center: HPoint, height: f64) -> Self {
        Self { center, height }
    }

    pub fn radial(&self) -> f64 {
        (-self.height).exp()
    }

    /// Lifted point `ρ x` in Minkowski space.
    pub fn lifted(&self) -> MinkowskiVec {
        self.center.vec() * self.radial()
    }

    /// `cosh d(q, x) · e^{-height}`; equals the circle power distance when
    /// `height = ln cosh r`.
    pub fn power(&self, q: &HPoint) -> f64 {
        -q.inner(&self.center) * self.radial()
    }

    /// The geodesic circle with this height, when the height is positive.
    pub fn circle(&self) -> Option<GeodesicCircle> {
        (self.height > 0.0)
            .then(|| GeodesicCircle::new(self.center, self.height.exp().acosh()).ok())
            .flatten()
    }
}

/// The point with equal power to the three sites of a weighted triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerCenter {
    pub center: HPoint,
    /// Common power value `cosh R` (for circle sites).
    pub cosh_radius: f64,
}

/// Solves `oᵀJo = -1`, `(p_i, p_j, p_k)ᵀ J o = -cosh R (e^{φ_i}, e^{φ_j}, e^{φ_k})`.
pub fn power_center(a: &Site, b: &Site, c: &Site) -> Result<PowerCenter> {
    let rows = Matrix3::from_rows(&[
        a.center.vec().to_vector().transpose(),
        b.center.vec().to_vector().transpose(),
        c.center.vec().to_vector().transpose(),
    ]) * signature();
    let rhs = -Vector3::new(a.height.exp(), b.height.exp(), c.height.exp());
    let o = rows
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Degenerate("power-center system is singular".into()))?;
    let o = MinkowskiVec::from_vector(&o);
    let n = o.norm_sq();
    if !(n < 0.0) || o.x3 <= 0.0 {
        return Err(Error::Degenerate("power center is not a point of the plane".into()));
    }
    let s = (-n).sqrt();
    Ok(PowerCenter { center: HPoint::normalize(o)?, cosh_radius: 1.0 / s })
}

/// Inward unit normal of the hull face spanned by three lifted points:
/// the future unit vector `y` with `ρ_i<x_i,y>` equal on the three sites.
pub fn dual_vertex(a: &Site, b: &Site, c: &Site) -> Result<HPoint> {
    power_center(a, b, c).map(|p| p.center)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::{DiskPoint, HPoint};
    use std::f64::consts::PI;

    fn circle_at(r: f64, theta: f64, radius: f64) -> GeodesicCircle {
        GeodesicCircle::new(HPoint::from_polar(r, theta).unwrap(), radius).unwrap()
    }

    #[test]
    fn heights_and_radials_are_consistent() {
        let c = circle_at(0.3, 1.0, 0.8);
        assert!((c.height() - 0.8f64.cosh().ln()).abs() < 1e-15);
        assert!((c.radial() - (-c.height()).exp()).abs() < 1e-15);
        assert!(GeodesicCircle::new(HPoint::APEX, 0.0).is_err());
        let back = c.site().circle().unwrap();
        assert!((back.radius() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn power_distance_limits() {
        let c = circle_at(0.5, 0.2, 0.7);
        assert!((power_distance(c.center(), &c) - 1.0 / 0.7f64.cosh()).abs() < 1e-15);
        let q = HPoint::from_disk(DiskPoint::new(-0.2, 0.4).unwrap()).unwrap();
        let tiny = GeodesicCircle::new(*c.center(), 1e-9).unwrap();
        let d = q.distance(c.center());
        assert!((power_distance(&q, &tiny) - d.cosh()).abs() < 1e-12);
        assert!((power_distance(&q, &c) - c.site().power(&q)).abs() < 1e-12);
    }

    #[test]
    fn power_center_of_symmetric_triangle_is_apex() {
        let sites: Vec<Site> =
            (0..3).map(|k| circle_at(0.9, 2.0 * PI * k as f64 / 3.0, 0.4).site()).collect();
        let pc = power_center(&sites[0], &sites[1], &sites[2]).unwrap();
        assert!(pc.center.distance(&HPoint::APEX) < 1e-12);
        for s in &sites {
            assert!((s.power(&pc.center) - pc.cosh_radius).abs() < 1e-12);
        }
    }

    #[test]
    fn power_center_with_equal_radii_is_circumcenter() {
        let sites = [
            circle_at(0.4, 0.1, 0.5).site(),
            circle_at(1.1, 2.0, 0.5).site(),
            circle_at(0.7, 4.0, 0.5).site(),
        ];
        let o = power_center(&sites[0], &sites[1], &sites[2]).unwrap().center;
        let d: Vec<f64> = sites.iter().map(|s| s.center.distance(&o)).collect();
        assert!((d[0] - d[1]).abs() < 1e-9 && (d[1] - d[2]).abs() < 1e-9);
    }

    #[test]
    fn collinear_centers_are_degenerate() {
        let sites: Vec<Site> =
            [0.2, 0.5, 0.9].iter().map(|r| circle_at(*r, 0.3, 0.5).site()).collect();
        assert!(power_center(&sites[0], &sites[1], &sites[2]).is_err());
    }
}
