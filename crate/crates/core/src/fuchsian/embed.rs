use std::collections::{HashMap, VecDeque};

use super::mesh::{MetricMesh, Side};
use crate::error::{Error, Result};
use crate::lorentz::{circle_circle_intersection, orientation, HPoint, LorentzIsometry};

/// Largest disagreement tolerated when a vertex is reached from two faces.
pub const DRIFT_TOLERANCE: f64 = 1e-5;
/// Per-edge realization tolerance.
pub const LENGTH_TOLERANCE: f64 = 1e-7;

/// The cut-open surface laid out in the plane.
#[derive(Debug, Clone)]
pub struct FundamentalDomain {
    pub genus: usize,
    /// Position of each cut vertex.
    pub positions: Vec<HPoint>,
    pub faces: Vec<[usize; 3]>,
    pub sides: Vec<Side>,
    /// Boundary cycle of cut vertices, counter-clockwise.
    pub boundary: Vec<usize>,
    boundary_klein: Vec<[f64; 2]>,
    /// Lorentz mean of the corners; the layout is translated so this is the apex.
    pub center: HPoint,
    /// Largest distance from `center` to a cut vertex.
    pub radius: f64,
}

impl FundamentalDomain {
    pub fn area(&self) -> f64 {
        4.0 * std::f64::consts::PI * (self.genus as f64 - 1.0)
    }

    pub fn boundary_klein(&self) -> &[[f64; 2]] {
        &self.boundary_klein
    }

    /// Corners of the 4g-gon, one per side start.
    pub fn corners(&self) -> Vec<HPoint> {
        self.sides.iter().map(|s| self.positions[s.vertices[0]]).collect()
    }

    /// Closed-polygon test in Klein coordinates; points within `tol` of the
    /// boundary count as inside.
    pub fn contains_klein(&self, k: [f64; 2], tol: f64) -> bool {
        let poly = &self.boundary_klein;
        let n = poly.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            if segment_distance(k, a, b) <= tol {
                return true;
            }
            if (a[1] > k[1]) != (b[1] > k[1]) {
                let x = a[0] + (k[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                if k[0] < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn contains(&self, p: &HPoint, tol: f64) -> bool {
        p.distance(&self.center) <= self.radius + 1e-9 && self.contains_klein(p.to_klein(), tol)
    }
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * d[0]).hypot(p[1] - a[1] - t * d[1])
}

/// Lays out triangles breadth-first from `seed`, which is placed with its
/// first vertex at the apex and its first edge along the positive `x1` axis.
/// Returns `None` for vertices not reached.
pub fn embed_faces<F>(faces: &[[usize; 3]], num_vertices: usize, seed: usize, length: F) -> Result<Vec<Option<HPoint>>>
where
    F: Fn(usize, usize) -> Result<f64>,
{
    let mut pos: Vec<Option<HPoint>> = vec![None; num_vertices];
    let mut opposite: HashMap<(usize, usize), usize> = HashMap::new();
    for (f, &[a, b, c]) in faces.iter().enumerate() {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            if opposite.insert((u, v), f).is_some() {
                return Err(Error::Metric(format!("directed edge ({u}, {v}) is used twice")));
            }
        }
    }
    let [a, b, _] = faces[seed];
    let l = length(a, b)?;
    pos[a] = Some(HPoint::APEX);
    pos[b] = Some(HPoint::new(crate::lorentz::MinkowskiVec::new(l.sinh(), 0.0, l.cosh()))?);
    let mut done = vec![false; faces.len()];
    let mut queue = VecDeque::from([(seed, 0usize)]);
    done[seed] = true;
    while let Some((f, k)) = queue.pop_front() {
        // Edge `k` of face `f` is placed; place the opposite vertex.
        let face = faces[f];
        let (u, v, w) = (face[k], face[(k + 1) % 3], face[(k + 2) % 3]);
        let (pu, pv) = (pos[u].expect("placed"), pos[v].expect("placed"));
        let (luw, lvw) = (length(u, w)?, length(v, w)?);
        let p = circle_circle_intersection(&pu, luw, &pv, lvw)
            .map_err(|_| Error::Metric(format!("face {f} cannot be laid out")))?
            .0;
        match pos[w] {
            Some(q) => {
                let drift = q.distance(&p);
                if drift > DRIFT_TOLERANCE {
                    return Err(Error::EmbeddingDrift(drift));
                }
            }
            None => pos[w] = Some(p),
        }
        for j in 0..3 {
            let (x, y) = (face[j], face[(j + 1) % 3]);
            if let Some(&g) = opposite.get(&(y, x)) {
                if !done[g] {
                    done[g] = true;
                    let kg = (0..3).find(|&i| faces[g][i] == y).expect("shared edge");
                    queue.push_back((g, kg));
                }
            }
        }
    }
    Ok(pos)
}

/// Seed face: one incident to the vertex farthest (in edge hops) from the boundary.
fn seed_face(mesh: &MetricMesh) -> usize {
    let n = mesh.num_cut_vertices();
    let mut adj = vec![Vec::new(); n];
    for &[a, b, c] in &mesh.faces {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut depth = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for v in mesh.boundary_cycle() {
        depth[v] = 0;
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let deepest = (0..n).max_by_key(|&v| (depth[v] != usize::MAX, depth[v].min(n), usize::MAX - v)).unwrap_or(0);
    mesh.faces.iter().position(|f| f.contains(&deepest)).unwrap_or(0)
}

/// Embeds the cut-open mesh, checks every edge length and face orientation,
/// and translates the result so the mean of the corners sits at the apex.
pub fn embed_domain(mesh: &MetricMesh) -> Result<FundamentalDomain> {
    let n = mesh.num_cut_vertices();
    let seed = seed_face(mesh);
    let placed = embed_faces(&mesh.faces, n, seed, |a, b| mesh.length(a, b))?;
    let mut positions = Vec::with_capacity(n);
    for (v, p) in placed.into_iter().enumerate() {
        positions.push(p.ok_or_else(|| Error::Metric(format!("cut vertex {v} is not reachable")))?);
    }
    let corners: Vec<HPoint> = mesh.sides.iter().map(|s| positions[s.vertices[0]]).collect();
    let weights = vec![1.0; corners.len()];
    let mean = crate::lorentz::lorentz_mean(&corners, &weights)?;
    let recenter = LorentzIsometry::translation_to(&mean).inverse();
    for p in &mut positions {
        *p = recenter.apply(p);
    }
    for (&(a, b), &l) in &mesh.lengths {
        let err = (positions[a].distance(&positions[b]) - l).abs();
        if err > LENGTH_TOLERANCE {
            return Err(Error::EmbeddingDrift(err));
        }
    }
    for (f, &[a, b, c]) in mesh.faces.iter().enumerate() {
        if !(orientation(&positions[a], &positions[b], &positions[c]) > 0.0) {
            return Err(Error::Metric(format!("face {f} is not positively oriented")));
        }
    }
    let boundary = mesh.boundary_cycle();
    let boundary_klein: Vec<[f64; 2]> = boundary.iter().map(|&v| positions[v].to_klein()).collect();
    let center = HPoint::APEX;
    let radius = positions.iter().map(|p| p.distance(&center)).fold(0.0, f64::max);
    Ok(FundamentalDomain {
        genus: mesh.genus,
        positions,
        faces: mesh.faces.clone(),
        sides: mesh.sides.clone(),
        boundary,
        boundary_klein,
        center,
        radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triangle_seed_placement() {
        let l = [(0, 1, 0.7), (1, 2, 0.9), (0, 2, 1.1)];
        let length = |a: usize, b: usize| {
            Ok(l.iter().find(|e| (e.0, e.1) == (a.min(b), a.max(b))).unwrap().2)
        };
        let pos = embed_faces(&[[0, 1, 2]], 3, 0, length).unwrap();
        let p: Vec<HPoint> = pos.into_iter().map(Option::unwrap).collect();
        assert_eq!(p[0], HPoint::APEX);
        assert!((p[1].x1() - 0.7f64.sinh()).abs() < 1e-15 && p[1].x2() == 0.0);
        assert!(p[2].x2() > 0.0);
        assert!((p[0].distance(&p[2]) - 1.1).abs() < 1e-12);
        assert!((p[1].distance(&p[2]) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_lengths_drift() {
        // Two triangles sharing edge (0, 1), then a third that closes a
        // quadrilateral with a wrong diagonal-compatible length.
        let faces = [[0, 1, 2], [1, 0, 3], [2, 3, 0]];
        let mut lengths = HashMap::new();
        for (a, b, l) in [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 3, 1.0), (2, 3, 0.5)] {
            lengths.insert((a, b), l);
        }
        let length = |a: usize, b: usize| Ok(lengths[&(a.min(b), a.max(b))]);
        assert!(matches!(embed_faces(&faces, 4, 0, length), Err(Error::EmbeddingDrift(_)) | Err(Error::Metric(_))));
    }
}
