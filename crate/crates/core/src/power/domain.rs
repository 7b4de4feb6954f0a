use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{triangle_area_points, HPoint};

/// A convex geodesic polygon, stored counter-clockwise. Geodesic polygons are
/// straight in the Klein model, so convexity and containment are planar tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<HPoint>", into = "Vec<HPoint>")]
pub struct ConvexDomain {
    vertices: Vec<HPoint>,
    klein: Vec<[f64; 2]>,
}

fn coord(k: [f64; 2]) -> Coord<f64> {
    Coord { x: k[0], y: k[1] }
}

impl ConvexDomain {
    /// Vertices must be counter-clockwise and strictly convex.
    pub fn new(vertices: Vec<HPoint>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Degenerate("a domain needs at least 3 vertices".into()));
        }
        let klein: Vec<[f64; 2]> = vertices.iter().map(|v| v.to_klein()).collect();
        let n = klein.len();
        for i in 0..n {
            let o = orient2d(coord(klein[i]), coord(klein[(i + 1) % n]), coord(klein[(i + 2) % n]));
            if o <= 0.0 {
                return Err(Error::Degenerate(format!(
                    "domain is not strictly convex and counter-clockwise at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        Ok(Self { vertices, klein })
    }

    /// Convex hull of points (collinear boundary points dropped).
    pub fn hull_of(points: &[HPoint]) -> Result<Self> {
        let mut idx: Vec<usize> = (0..points.len()).collect();
        let k: Vec<[f64; 2]> = points.iter().map(|p| p.to_klein()).collect();
        idx.sort_by(|&a, &b| k[a].partial_cmp(&k[b]).unwrap_or(std::cmp::Ordering::Equal));
        idx.dedup_by(|a, b| k[*a] == k[*b]);
        if idx.len() < 3 {
            return Err(Error::Degenerate("hull needs three distinct points".into()));
        }
        let mut hull: Vec<usize> = Vec::new();
        for pass in 0..2 {
            let start = hull.len();
            let seq: Box<dyn Iterator<Item = &usize>> =
                if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
            for &i in seq {
                while hull.len() >= start + 2 {
                    let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                    if orient2d(coord(k[a]), coord(k[b]), coord(k[i])) <= 0.0 {
                        hull.pop();
                    } else {
                        break;
                    }
                }
                hull.push(i);
            }
            hull.pop();
        }
        Self::new(hull.into_iter().map(|i| points[i]).collect())
    }

    /// Regular polygon with `n` vertices at distance `r` from the apex.
    pub fn regular(n: usize, r: f64) -> Result<Self> {
        let v = (0..n)
            .map(|i| HPoint::from_polar(r, 2.0 * std::f64::consts::PI * i as f64 / n as f64))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    pub fn vertices(&self) -> &[HPoint] {
        &self.vertices
    }

    pub fn klein(&self) -> &[[f64; 2]] {
        &self.klein
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Closed containment with a small relative tolerance.
    pub fn contains(&self, p: &HPoint) -> bool {
        self.contains_klein(p.to_klein(), 1e-12)
    }

    pub fn contains_klein(&self, k: [f64; 2], tol: f64) -> bool {
        let n = self.klein.len();
        (0..n).all(|i| {
            let (a, b) = (self.klein[i], self.klein[(i + 1) % n]);
            let cross = (b[0] - a[0]) * (k[1] - a[1]) - (b[1] - a[1]) * (k[0] - a[0]);
            let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            cross >= -tol * len
        })
    }

    pub fn area(&self) -> f64 {
        let v = &self.vertices;
        (1..v.len() - 1).map(|i| triangle_area_points(&v[0], &v[i], &v[i + 1])).sum()
    }
}

impl TryFrom<Vec<HPoint>> for ConvexDomain {
    type Error = Error;
    fn try_from(v: Vec<HPoint>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ConvexDomain> for Vec<HPoint> {
    fn from(d: ConvexDomain) -> Self {
        d.vertices
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn regular_polygon_area_is_angle_deficit() {
        // Interior angle of a regular n-gon with circumradius r.
        let (n, r) = (6usize, 1.3f64);
        let d = ConvexDomain::regular(n, r).unwrap();
        let half = PI / n as f64;
        let angle = 2.0 * (1.0 / (r.cosh() * half.tan())).atan();
        let exact = (n as f64 - 2.0) * PI - n as f64 * angle;
        assert!((d.area() - exact).abs() < 1e-12, "{} vs {exact}", d.area());
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let mut pts: Vec<HPoint> =
            (0..4).map(|i| HPoint::from_polar(1.0, PI / 2.0 * i as f64).unwrap()).collect();
        pts.push(HPoint::APEX);
        pts.push(HPoint::from_polar(0.2, 0.3).unwrap());
        let k0 = pts[0].to_klein();
        let k1 = pts[1].to_klein();
        pts.push(HPoint::from_klein([0.5 * (k0[0] + k1[0]), 0.5 * (k0[1] + k1[1])]).unwrap());
        let h = ConvexDomain::hull_of(&pts).unwrap();
        assert_eq!(h.len(), 4);
        assert!(h.contains(&HPoint::APEX));
        assert!(!h.contains(&HPoint::from_polar(1.5, 0.0).unwrap()));
    }

    #[test]
    fn clockwise_input_is_rejected() {
        let mut v: Vec<HPoint> = ConvexDomain::regular(5, 1.0).unwrap().vertices().to_vec();
        v.reverse();
        assert!(ConvexDomain::new(v).is_err());
    }
}
