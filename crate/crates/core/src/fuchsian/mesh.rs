use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::triangle_area;

/// A side of the cut-open surface: generator `a_i` / `b_i` or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideLabel {
    /// `2(i-1)` for `a_i`, `2(i-1) + 1` for `b_i`.
    pub generator: usize,
    pub inverse: bool,
}

impl fmt::Display for SideLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = if self.generator % 2 == 0 { 'a' } else { 'b' };
        write!(f, "{letter}{}", self.generator / 2 + 1)?;
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

impl FromStr for SideLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("bad side label '{s}' (expected e.g. a1, b2^-1)"));
        let (body, inverse) = match s.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let mut chars = body.chars();
        let offset = match chars.next() {
            Some('a') => 0,
            Some('b') => 1,
            _ => return Err(bad()),
        };
        let i: usize = chars.as_str().parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        Ok(Self { generator: 2 * (i - 1) + offset, inverse })
    }
}

impl Serialize for SideLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SideLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Boundary side of the cut mesh: a chain of cut vertices, traversed
/// counter-clockwise around the fundamental domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Side {
    pub label: SideLabel,
    pub vertices: Vec<usize>,
}

/// A triangulated closed hyperbolic surface cut open along a system of loops
/// into a disk with boundary word `a₁ b₁ a₁⁻¹ b₁⁻¹ …`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMesh {
    pub genus: usize,
    /// Counter-clockwise faces over cut vertices.
    pub faces: Vec<[usize; 3]>,
    /// Hyperbolic length of every cut edge, keyed `(min, max)`.
    pub lengths: HashMap<(usize, usize), f64>,
    /// Surface vertex of each cut vertex.
    pub surface_vertex: Vec<usize>,
    pub sides: Vec<Side>,
}

pub fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl MetricMesh {
    /// Checks the combinatorics, the triangle inequalities and Gauss–Bonnet.
    pub fn new(
        genus: usize,
        faces: Vec<[usize; 3]>,
        lengths: HashMap<(usize, usize), f64>,
        surface_vertex: Vec<usize>,
        sides: Vec<Side>,
    ) -> Result<Self> {
        let mesh = Self { genus, faces, lengths, surface_vertex, sides };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn num_cut_vertices(&self) -> usize {
        self.surface_vertex.len()
    }

    pub fn num_surface_vertices(&self) -> usize {
        self.surface_vertex.iter().max().map_or(0, |m| m + 1)
    }

    pub fn length(&self, a: usize, b: usize) -> Result<f64> {
        self.lengths
            .get(&edge_key(a, b))
            .copied()
            .ok_or_else(|| Error::Metric(format!("missing length for edge ({a}, {b})")))
    }

    /// `2π(2g - 2)`.
    pub fn gauss_bonnet_area(&self) -> f64 {
        4.0 * std::f64::consts::PI * (self.genus as f64 - 1.0)
    }

    pub fn face_area(&self, f: usize) -> Result<f64> {
        let [a, b, c] = self.faces[f];
        triangle_area(self.length(b, c)?, self.length(c, a)?, self.length(a, b)?)
            .map_err(|_| Error::Metric(format!("face {f} violates the triangle inequality")))
    }

    pub fn total_area(&self) -> Result<f64> {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }

    /// Boundary cycle of cut vertices (side chains joined at the corners).
    pub fn boundary_cycle(&self) -> Vec<usize> {
        self.sides.iter().flat_map(|s| s.vertices[..s.vertices.len() - 1].iter().copied()).collect()
    }

    fn validate(&self) -> Result<()> {
        let g = self.genus;
        if g < 2 {
            return Err(Error::Metric(format!("genus must be at least 2, got {g}")));
        }
        let n = self.num_cut_vertices();
        if self.faces.is_empty() {
            return Err(Error::Metric("mesh has no faces".into()));
        }
        for (f, face) in self.faces.iter().enumerate() {
            if face.iter().any(|&v| v >= n) || face[0] == face[1] || face[1] == face[2] || face[0] == face[2] {
                return Err(Error::Metric(format!("face {f} has invalid vertices {face:?}")));
            }
        }
        for (&(a, b), &l) in &self.lengths {
            if !(l > 0.0) || !l.is_finite() || a >= n || b >= n {
                return Err(Error::Metric(format!("invalid length {l} on edge ({a}, {b})")));
            }
        }
        if self.sides.len() != 4 * g {
            return Err(Error::Metric(format!(
                "expected {} boundary sides, got {}",
                4 * g,
                self.sides.len()
            )));
        }
        let mut seen: BTreeMap<SideLabel, usize> = BTreeMap::new();
        for (k, side) in self.sides.iter().enumerate() {
            if side.label.generator >= 2 * g || seen.insert(side.label, k).is_some() {
                return Err(Error::Metric(format!("side label {} is invalid or repeated", side.label)));
            }
            if side.vertices.len() < 2 {
                return Err(Error::Metric(format!("side {} has fewer than two vertices", side.label)));
            }
            let next = &self.sides[(k + 1) % self.sides.len()];
            if side.vertices.last() != next.vertices.first() {
                return Err(Error::Metric(format!(
                    "side {} does not end where side {} starts",
                    side.label, next.label
                )));
            }
        }
        for k in 0..2 * g {
            let a = &self.sides[seen[&SideLabel { generator: k, inverse: false }]];
            let b = &self.sides[seen[&SideLabel { generator: k, inverse: true }]];
            if a.vertices.len() != b.vertices.len() {
                return Err(Error::Metric(format!(
                    "paired sides {} and {} have different vertex counts",
                    a.label, b.label
                )));
            }
            for (u, v) in a.vertices.iter().zip(b.vertices.iter().rev()) {
                if self.surface_vertex[*u] != self.surface_vertex[*v] {
                    return Err(Error::Metric(format!(
                        "paired sides {} and {} do not identify the same surface vertices",
                        a.label, b.label
                    )));
                }
            }
        }
        let total = self.total_area()?;
        let expected = self.gauss_bonnet_area();
        if (total - expected).abs() > 1e-6 * expected {
            return Err(Error::Metric(format!(
                "total area {total} differs from the Gauss-Bonnet value {expected}"
            )));
        }
        Ok(())
    }
}
