//! Synthetic test data: hexagonal disk samples and closed surfaces cut
//! open into geodesic 4g-gons.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fuchsian::{edge_key, MetricMesh, Side, SideLabel};
use crate::lorentz::{geodesic_point, lorentz_mean, orientation, triangle_area_points, DiskPoint, HPoint};

/// Hexagonal lattice in the Poincaré disk: `rings` rings around the origin
/// with Euclidean spacing `spacing`, and its lattice triangulation.
pub fn hex_disk(rings: usize, spacing: f64) -> Result<(Vec<DiskPoint>, Vec<[usize; 3]>)> {
    let r = rings as i64;
    let mut index = HashMap::new();
    let mut points = Vec::new();
    // Ring by ring so that ring `j` occupies a contiguous block.
    for ring in 0..=r {
        for a in -r..=r {
            for b in -r..=r {
                let c = -a - b;
                if a.abs().max(b.abs()).max(c.abs()) != ring {
                    continue;
                }
                let x = spacing * (a as f64 + 0.5 * b as f64);
                let y = spacing * (b as f64 * 3f64.sqrt() / 2.0);
                index.insert((a, b), points.len());
                points.push(DiskPoint::new(x, y)?);
            }
        }
    }
    let mut faces = Vec::new();
    let mut keys: Vec<(i64, i64)> = index.keys().copied().collect();
    keys.sort_unstable();
    for (a, b) in keys {
        let i = index[&(a, b)];
        for (p, q) in [((a + 1, b), (a, b + 1)), ((a, b + 1), (a - 1, b + 1))] {
            if let (Some(&j), Some(&k)) = (index.get(&p), index.get(&q)) {
                faces.push([i, j, k]);
            }
        }
    }
    Ok((points, faces))
}

/// Points of ring `ring` in [`hex_disk`] order.
pub fn hex_ring(ring: usize) -> std::ops::Range<usize> {
    if ring == 0 {
        0..1
    } else {
        let start = 1 + 3 * ring * (ring - 1);
        start..start + 6 * ring
    }
}

/// Euclidean area of each face in disk coordinates.
pub fn disk_face_areas(points: &[DiskPoint], faces: &[[usize; 3]]) -> Vec<f64> {
    faces
        .iter()
        .map(|&[a, b, c]| {
            let (p, q, r) = (points[a], points[b], points[c]);
            0.5 * ((q.u - p.u) * (r.v - p.v) - (q.v - p.v) * (r.u - p.u)).abs()
        })
        .collect()
}

/// Hyperbolic area of each face.
pub fn hyperbolic_face_areas(points: &[HPoint], faces: &[[usize; 3]]) -> Vec<f64> {
    faces.iter().map(|&[a, b, c]| triangle_area_points(&points[a], &points[b], &points[c])).collect()
}

/// Corners of the regular 4g-gon with interior angles `2π/4g`, counter-clockwise.
pub fn regular_corners(genus: usize) -> Result<Vec<HPoint>> {
    let n = 4 * genus;
    let cot = 1.0 / (PI / n as f64).tan();
    let r = (cot * cot).acosh();
    (0..n).map(|k| HPoint::from_polar(r, 2.0 * PI * (k as f64 + 0.5) / n as f64)).collect()
}

fn interior_angle(prev: &HPoint, at: &HPoint, next: &HPoint) -> Result<f64> {
    let t1 = at.direction_to(next)?;
    let t2 = at.direction_to(prev)?;
    Ok(t1.inner(&t2).clamp(-1.0, 1.0).acos())
}

fn side_label(k: usize) -> SideLabel {
    let (block, r) = (k / 4, k % 4);
    SideLabel { generator: 2 * block + r % 2, inverse: r >= 2 }
}

/// Index of the side paired with side `k` in the word `a₁b₁a₁⁻¹b₁⁻¹…`.
fn partner(k: usize) -> usize {
    if k % 4 < 2 {
        k + 2
    } else {
        k - 2
    }
}

/// Paired side lengths differences and the angle-sum defect.
fn polygon_defects(corners: &[HPoint]) -> Result<Vec<f64>> {
    let n = corners.len();
    let len = |k: usize| corners[k].distance(&corners[(k + 1) % n]);
    let mut out: Vec<f64> = (0..n).filter(|k| k % 4 < 2).map(|k| len(k) - len(partner(k))).collect();
    let mut sum = 0.0;
    for k in 0..n {
        sum += interior_angle(&corners[(k + n - 1) % n], &corners[k], &corners[(k + 1) % n])?;
    }
    out.push(sum - 2.0 * PI);
    Ok(out)
}

/// A convex 4g-gon with paired sides of equal length and angle sum `2π`,
/// obtained by perturbing the polar coordinates `(r, θ)` of the regular one
/// by up to `amplitude` and projecting back onto the constraints.
pub fn perturbed_corners(genus: usize, amplitude: f64, seed: u64) -> Result<Vec<HPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = regular_corners(genus)?
        .iter()
        .flat_map(|p| [p.x3().acosh(), p.x2().atan2(p.x1())])
        .map(|v| v + amplitude * rng.gen_range(-1.0..1.0))
        .collect();
    let corners_of = |x: &[f64]| -> Result<Vec<HPoint>> {
        x.chunks(2).map(|k| HPoint::from_polar(k[0], k[1])).collect()
    };
    for _ in 0..50 {
        let r = polygon_defects(&corners_of(&x)?)?;
        if r.iter().all(|v| v.abs() < 1e-14) {
            break;
        }
        let h = 1e-7;
        let mut jac = DMatrix::zeros(r.len(), x.len());
        for j in 0..x.len() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (rp, rm) = (polygon_defects(&corners_of(&xp)?)?, polygon_defects(&corners_of(&xm)?)?);
            for i in 0..r.len() {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        // Minimum-norm Gauss–Newton step.
        let jjt = &jac * jac.transpose();
        let y = jjt
            .lu()
            .solve(&DVector::from_column_slice(&r))
            .ok_or_else(|| Error::Degenerate("constraint Jacobian is singular".into()))?;
        let dx = jac.transpose() * y;
        x.iter_mut().zip(dx.iter()).for_each(|(a, d)| *a -= d);
    }
    let corners = corners_of(&x)?;
    let defect = polygon_defects(&corners)?.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if defect > 1e-12 {
        return Err(Error::Degenerate(format!("polygon constraints not met ({defect:.3e})")));
    }
    let n = corners.len();
    for k in 0..n {
        let (a, b, c) = (&corners[(k + n - 1) % n], &corners[k], &corners[(k + 1) % n]);
        if !(orientation(a, b, c) > 0.0) {
            return Err(Error::Degenerate(format!("perturbed polygon is not convex at corner {k}")));
        }
    }
    Ok(corners)
}

/// A closed surface together with the planar positions it was measured from.
#[derive(Debug, Clone)]
pub struct SyntheticSurface {
    pub mesh: MetricMesh,
    /// Position of every cut vertex.
    pub positions: Vec<HPoint>,
}

impl SyntheticSurface {
    /// Euclidean face areas in the Poincaré disk picture.
    pub fn disk_face_areas(&self) -> Vec<f64> {
        let disk: Vec<DiskPoint> = self.positions.iter().map(|p| p.to_disk()).collect();
        disk_face_areas(&disk, &self.mesh.faces)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum GridKey {
    Center,
    Spoke(usize, usize),
    Inner(usize, usize, usize),
}

/// Triangulates the 4g-gon with corners `corners` by coning its sides to the
/// mean of the corners and subdividing each cone triangle `m × m`; the
/// sides are glued by the word `a₁b₁a₁⁻¹b₁⁻¹…`. Edge lengths are measured
/// from the positions.
pub fn polygon_surface(genus: usize, corners: &[HPoint], m: usize) -> Result<SyntheticSurface> {
    let n = 4 * genus;
    if corners.len() != n || m == 0 {
        return Err(Error::Input(format!("need {n} corners and m > 0")));
    }
    let center = lorentz_mean(corners, &vec![1.0; n])?;
    let spokes: Vec<Vec<HPoint>> = corners
        .iter()
        .map(|v| (0..=m).map(|i| geodesic_point(&center, v, i as f64 / m as f64)).collect())
        .collect::<Result<_>>()?;
    let mut ids: HashMap<GridKey, usize> = HashMap::new();
    let mut positions = Vec::new();
    let mut vertex = |k: usize, i: usize, j: usize| -> Result<usize> {
        let key = if i == 0 {
            GridKey::Center
        } else if j == 0 {
            GridKey::Spoke(k, i)
        } else if j == i {
            GridKey::Spoke((k + 1) % n, i)
        } else {
            GridKey::Inner(k, i, j)
        };
        if let Some(&id) = ids.get(&key) {
            return Ok(id);
        }
        let p = match key {
            GridKey::Center => center,
            GridKey::Spoke(s, i) => spokes[s][i],
            GridKey::Inner(k, i, j) => {
                geodesic_point(&spokes[k][i], &spokes[(k + 1) % n][i], j as f64 / i as f64)?
            }
        };
        ids.insert(key, positions.len());
        positions.push(p);
        Ok(positions.len() - 1)
    };
    let mut faces = Vec::with_capacity(n * m * m);
    let mut chains = Vec::with_capacity(n);
    for k in 0..n {
        for i in 0..m {
            for j in 0..=i {
                faces.push([vertex(k, i, j)?, vertex(k, i + 1, j)?, vertex(k, i + 1, j + 1)?]);
                if j < i {
                    faces.push([vertex(k, i, j)?, vertex(k, i + 1, j + 1)?, vertex(k, i, j + 1)?]);
                }
            }
        }
        chains.push((0..=m).map(|j| vertex(k, m, j)).collect::<Result<Vec<usize>>>()?);
    }
    let mut parent: Vec<usize> = (0..positions.len()).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for k in (0..n).filter(|k| k % 4 < 2) {
        let (a, b) = (&chains[k], &chains[partner(k)]);
        for (u, v) in a.iter().zip(b.iter().rev()) {
            let (ru, rv) = (find(&mut parent, *u), find(&mut parent, *v));
            parent[ru.max(rv)] = ru.min(rv);
        }
    }
    let mut relabel = HashMap::new();
    let surface_vertex: Vec<usize> = (0..positions.len())
        .map(|v| {
            let r = find(&mut parent, v);
            let next = relabel.len();
            *relabel.entry(r).or_insert(next)
        })
        .collect();
    let mut lengths = HashMap::new();
    for &[a, b, c] in &faces {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            lengths.entry(edge_key(u, v)).or_insert_with(|| positions[u].distance(&positions[v]));
        }
    }
    let sides =
        chains.into_iter().enumerate().map(|(k, vertices)| Side { label: side_label(k), vertices }).collect();
    let mesh = MetricMesh::new(genus, faces, lengths, surface_vertex, sides)?;
    Ok(SyntheticSurface { mesh, positions })
}

pub fn regular_surface(genus: usize, m: usize) -> Result<SyntheticSurface> {
    polygon_surface(genus, &regular_corners(genus)?, m)
}

/// A genus-`g` surface whose metric differs from the regular one.
pub fn irregular_surface(genus: usize, m: usize, seed: u64) -> Result<SyntheticSurface> {
    polygon_surface(genus, &perturbed_corners(genus, 0.1, seed)?, m)
}

/// Subdivision level giving at least `vertices` surface vertices.
pub fn subdivision_for(genus: usize, vertices: usize) -> usize {
    // V = 2 - 2g + 4g m² / 2
    let mut m = 1;
    while 2 + 2 * genus * m * m < vertices + 2 * genus {
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_disk_counts() {
        let (p, f) = hex_disk(4, 0.2).unwrap();
        assert_eq!(p.len(), 61);
        assert_eq!(f.len(), 96);
        assert_eq!(hex_ring(4), 37..61);
        assert!(hex_ring(1).all(|i| (p[i].norm() - 0.2).abs() < 1e-12));
    }

    #[test]
    fn regular_corners_close_up() {
        for g in [2, 3] {
            let d = polygon_defects(&regular_corners(g).unwrap()).unwrap();
            assert!(d.iter().all(|v| v.abs() < 1e-12), "{d:?}");
        }
    }

    #[test]
    fn surface_vertex_count() {
        for (g, m) in [(2, 1), (2, 3), (3, 2)] {
            let s = regular_surface(g, m).unwrap();
            let expected = 2 + 2 * g * m * m - 2 * g;
            assert_eq!(s.mesh.num_surface_vertices(), expected);
        }
        assert_eq!(subdivision_for(2, 2200), 24);
    }

    #[test]
    fn perturbed_polygon_is_not_regular() {
        let c = perturbed_corners(2, 0.1, 7).unwrap();
        let lens: Vec<f64> = (0..8).map(|k| c[k].distance(&c[(k + 1) % 8])).collect();
        assert!((lens[0] - lens[1]).abs() > 1e-3);
        assert!((lens[0] - lens[2]).abs() < 1e-12);
    }
}
