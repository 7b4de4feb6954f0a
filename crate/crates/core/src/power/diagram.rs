//! Power diagrams as Klein-model polygons.
//!
//! In Klein coordinates `k` the power of `q = (k, 1)/√(1-|k|²)` to a site is a
//! positive multiple (common to all sites) of the affine function
//! `ρ (x₃ - x₁k₁ - x₂k₂)`, so every cell is a convex polygon cut out by the
//! half-planes of its neighbours in the regular triangulation of the lifted
//! points `ρ x`.

use serde::{Deserialize, Serialize};

use super::domain::ConvexDomain;
use super::hull::RegularTriangulation;
use super::site::{dual_vertex, Site};
use crate::error::{Error, Result};
use crate::lorentz::{lorentz_cross, triangle_area_points, HPoint};

/// Cells below this hyperbolic area count as degenerate.
pub const DEGENERATE_AREA: f64 = 1e-12;

/// What bounds a cell edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    /// Bisector with a site copy (index into the copy set).
    Site(usize),
    /// Edge of the clipping region.
    Boundary(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub site: usize,
    /// Counter-clockwise polygon; edge `i` runs from vertex `i` to `i + 1`.
    pub vertices: Vec<HPoint>,
    pub klein: Vec<[f64; 2]>,
    pub labels: Vec<Label>,
    pub area: f64,
    /// Empty, or with area below [`DEGENERATE_AREA`].
    pub degenerate: bool,
    /// Some vertex left the disk; only possible when the copies are
    /// insufficient in surface mode.
    pub unbounded: bool,
}

impl Cell {
    fn empty(site: usize) -> Self {
        Self {
            site,
            vertices: Vec::new(),
            klein: Vec::new(),
            labels: Vec::new(),
            area: 0.0,
            degenerate: true,
            unbounded: false,
        }
    }

    /// The two constraints meeting at vertex `i`.
    pub fn vertex_labels(&self, i: usize) -> (Label, Label) {
        let n = self.labels.len();
        (self.labels[(i + n - 1) % n], self.labels[i])
    }

    /// Edges as `(label, start, end)`.
    pub fn edges(&self) -> impl Iterator<Item = (Label, &HPoint, &HPoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.labels[i], &self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    /// Whether `k` lies in the closed Klein polygon.
    pub fn contains_klein(&self, k: [f64; 2], tol: f64) -> bool {
        let n = self.klein.len();
        n >= 3
            && (0..n).all(|i| {
                let (a, b) = (self.klein[i], self.klein[(i + 1) % n]);
                (b[0] - a[0]) * (k[1] - a[1]) - (b[1] - a[1]) * (k[0] - a[0]) >= -tol
            })
    }
}

/// Site points in the universal cover: the canonical copies and their
/// translates. `owner[c]` is the site of copy `c`, `canonical[i]` the copy
/// whose cell is reported for site `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CopySet {
    pub points: Vec<HPoint>,
    pub owner: Vec<usize>,
    pub canonical: Vec<usize>,
}

impl CopySet {
    pub fn planar(points: &[HPoint]) -> Self {
        Self {
            points: points.to_vec(),
            owner: (0..points.len()).collect(),
            canonical: (0..points.len()).collect(),
        }
    }

    pub fn num_sites(&self) -> usize {
        self.canonical.len()
    }
}

/// Region the cells are clipped to.
#[derive(Debug, Clone, Copy)]
pub enum Clip<'a> {
    Domain(&'a ConvexDomain),
    /// The Klein square `[-1, 1]²`; cells must close up inside the disk.
    Square,
}

#[derive(Debug, Clone)]
pub struct PowerDiagram {
    pub copies: CopySet,
    /// Height per site.
    pub heights: Vec<f64>,
    pub triangulation: RegularTriangulation,
    pub cells: Vec<Cell>,
}

impl PowerDiagram {
    /// Planar diagram of sites restricted to a convex domain.
    pub fn planar(sites: &[Site], domain: &ConvexDomain) -> Result<Self> {
        let points: Vec<HPoint> = sites.iter().map(|s| s.center).collect();
        let heights: Vec<f64> = sites.iter().map(|s| s.height).collect();
        Self::build(CopySet::planar(&points), &heights, Clip::Domain(domain))
    }

    pub fn build(copies: CopySet, heights: &[f64], clip: Clip<'_>) -> Result<Self> {
        let k = copies.num_sites();
        if k == 0 {
            return Err(Error::TooFewSites(0));
        }
        if heights.len() != k {
            return Err(Error::Input(format!("expected {k} heights, got {}", heights.len())));
        }
        if heights.iter().any(|h| !h.is_finite()) {
            return Err(Error::Degenerate("non-finite height".into()));
        }
        // Only differences of heights matter; centring keeps ρ near one.
        let mean = heights.iter().sum::<f64>() / k as f64;
        let radial: Vec<f64> = heights.iter().map(|h| (mean - h).exp()).collect();
        let lifted: Vec<[f64; 3]> = copies
            .points
            .iter()
            .zip(&copies.owner)
            .map(|(p, &o)| {
                let z = p.vec() * radial[o];
                [z.x1, z.x2, z.x3]
            })
            .collect();
        let (triangulation, adjacency) = if lifted.len() < 3 {
            let n = lifted.len();
            let all = (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect();
            (RegularTriangulation::without_faces(n), all)
        } else {
            let t = RegularTriangulation::build(&lifted).map_err(|e| match e {
                Error::DuplicateSite(a, b) => {
                    Error::DuplicateSite(copies.owner[a], copies.owner[b])
                }
                other => other,
            })?;
            let adj = t.adjacency();
            (t, adj)
        };
        let cells = (0..k)
            .map(|i| {
                let c = copies.canonical[i];
                if triangulation.is_hidden(c) {
                    return Cell::empty(i);
                }
                build_cell(i, c, &adjacency[c], &copies, &radial, clip)
            })
            .collect();
        Ok(Self { copies, heights: heights.to_vec(), triangulation, cells })
    }

    pub fn num_sites(&self) -> usize {
        self.cells.len()
    }

    pub fn site(&self, copy: usize) -> Site {
        Site::new(self.copies.points[copy], self.heights[self.copies.owner[copy]])
    }

    pub fn areas(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.area).collect()
    }

    /// First degenerate cell, if any.
    pub fn first_degenerate(&self) -> Option<usize> {
        self.cells.iter().position(|c| c.degenerate)
    }

    /// Site-level adjacency from shared diagram edges (self-copies dropped).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.cells
            .iter()
            .map(|cell| {
                let mut n: Vec<usize> = cell
                    .labels
                    .iter()
                    .filter_map(|l| match l {
                        Label::Site(c) => Some(self.copies.owner[*c]),
                        Label::Boundary(_) => None,
                    })
                    .filter(|&j| j != cell.site)
                    .collect();
                n.sort_unstable();
                n.dedup();
                n
            })
            .collect()
    }

    /// Dual vertex (power center) of a triangulation face, when it lies in
    /// the plane.
    pub fn face_vertex(&self, face: usize) -> Result<HPoint> {
        let [a, b, c] = self.triangulation.triangles()[face];
        dual_vertex(&self.site(a), &self.site(b), &self.site(c))
    }

    /// Index of the site whose cell contains `q`: least power, lowest index
    /// on ties.
    pub fn locate(&self, q: &HPoint) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (c, p) in self.copies.points.iter().enumerate() {
            let o = self.copies.owner[c];
            let pw = -q.inner(p) * (-self.heights[o]).exp();
            if pw < best.0 || (pw == best.0 && o < best.1) {
                best = (pw, o);
            }
        }
        best.1
    }
}

fn build_cell(
    site: usize,
    copy: usize,
    neighbors: &[usize],
    copies: &CopySet,
    radial: &[f64],
    clip: Clip<'_>,
) -> Cell {
    let mut poly: Vec<([f64; 2], Label)> = match clip {
        Clip::Domain(d) => {
            d.klein().iter().enumerate().map(|(e, k)| (*k, Label::Boundary(e))).collect()
        }
        Clip::Square => vec![
            ([-1.0, -1.0], Label::Boundary(0)),
            ([1.0, -1.0], Label::Boundary(1)),
            ([1.0, 1.0], Label::Boundary(2)),
            ([-1.0, 1.0], Label::Boundary(3)),
        ],
    };
    let x = copies.points[copy].vec();
    let rx = radial[copies.owner[copy]];
    let mut scratch = Vec::with_capacity(poly.len() + 4);
    for &c in neighbors {
        let y = copies.points[c].vec();
        let ry = radial[copies.owner[c]];
        // f(k) = ρ_x(x₃ - x₁k₁ - x₂k₂) - ρ_y(y₃ - y₁k₁ - y₂k₂) ≤ 0 inside.
        let line = [ry * y.x1 - rx * x.x1, ry * y.x2 - rx * x.x2, rx * x.x3 - ry * y.x3];
        clip_polygon(&mut poly, &mut scratch, line, Label::Site(c));
        if poly.is_empty() {
            break;
        }
    }
    dedup_vertices(&mut poly);
    if poly.len() < 3 {
        return Cell::empty(site);
    }
    let klein: Vec<[f64; 2]> = poly.iter().map(|p| p.0).collect();
    let labels: Vec<Label> = poly.iter().map(|p| p.1).collect();
    let unbounded = klein.iter().any(|k| k[0] * k[0] + k[1] * k[1] >= 1.0 - 1e-14);
    if unbounded {
        return Cell {
            site,
            vertices: Vec::new(),
            klein,
            labels,
            area: f64::INFINITY,
            degenerate: false,
            unbounded: true,
        };
    }
    let vertices: Vec<HPoint> =
        klein.iter().map(|k| HPoint::from_klein(*k).unwrap_or(HPoint::APEX)).collect();
    let area: f64 = (1..vertices.len() - 1)
        .map(|i| triangle_area_points(&vertices[0], &vertices[i], &vertices[i + 1]))
        .sum();
    Cell {
        site,
        vertices,
        klein,
        labels,
        area,
        degenerate: area < DEGENERATE_AREA,
        unbounded: false,
    }
}

/// Sutherland–Hodgman step keeping `line·(k, 1) ≤ 0`; each vertex carries
/// the label of the edge leaving it.
fn clip_polygon(
    poly: &mut Vec<([f64; 2], Label)>,
    out: &mut Vec<([f64; 2], Label)>,
    line: [f64; 3],
    label: Label,
) {
    let f = |k: [f64; 2]| line[0] * k[0] + line[1] * k[1] + line[2];
    let n = poly.len();
    out.clear();
    let mut all_in = true;
    for i in 0..n {
        let (p, lp) = poly[i];
        let q = poly[(i + 1) % n].0;
        let (fp, fq) = (f(p), f(q));
        all_in &= fp <= 0.0;
        if fp <= 0.0 {
            out.push((p, lp));
            if fq > 0.0 {
                let t = fp / (fp - fq);
                out.push(([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])], label));
            }
        } else if fq <= 0.0 {
            let t = fp / (fp - fq);
            out.push(([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])], lp));
        }
    }
    if !all_in {
        std::mem::swap(poly, out);
    }
}

fn dedup_vertices(poly: &mut Vec<([f64; 2], Label)>) {
    let close = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).abs() + (a[1] - b[1]).abs() < 1e-14;
    let mut i = 0;
    while poly.len() >= 2 && i < poly.len() {
        let j = (i + 1) % poly.len();
        if close(poly[i].0, poly[j].0) {
            // Keep the later label: the zero-length edge `i` disappears.
            poly.remove(i);
        } else {
            i += 1;
        }
    }
}

/// Geometry of one diagram edge between sites `i` and `j`, as seen from
/// the foot `q` of the bisector on the geodesic through the two centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeGeometry {
    /// Signed distances from the centers to `q`; `gamma_i + gamma_j = d(i, j)`.
    pub gamma_i: f64,
    pub gamma_j: f64,
    /// Signed distances from `q` to the edge endpoints, `d_k + d_l` the length.
    pub d_k: f64,
    pub d_l: f64,
}

impl EdgeGeometry {
    /// `∂ω_i/∂φ_j` contributed by this edge.
    pub fn hessian_entry(&self) -> f64 {
        -(self.d_k.sinh() + self.d_l.sinh()) / (self.gamma_i.tanh() + self.gamma_j.tanh())
    }
}

pub fn hessian_edge_geometry(si: &Site, sj: &Site, p: &HPoint, q: &HPoint) -> Result<EdgeGeometry> {
    let (xi, xj) = (si.center.vec(), sj.center.vec());
    let c = -xi.inner(&xj);
    if !(c > 1.0) {
        return Err(Error::Degenerate("edge between coincident centers".into()));
    }
    let d = c.acosh();
    let s = d.sinh();
    let ratio = (sj.height - si.height).exp();
    let th = (c - ratio) / s;
    if !(th.abs() < 1.0) {
        return Err(Error::Degenerate("bisector does not cross the center geodesic".into()));
    }
    let gamma_i = th.atanh();
    let w = lorentz_cross(&xi, &xj);
    let w = w * (1.0 / w.norm_sq().sqrt());
    let (a, b) = (p.vec().inner(&w), q.vec().inner(&w));
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    // ⟨e, w⟩ = sinh s at arc length s from the foot along the bisector.
    Ok(EdgeGeometry { gamma_i, gamma_j: d - gamma_i, d_k: -lo.asinh(), d_l: hi.asinh() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::site::GeodesicCircle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sites(n: usize, seed: u64, spread: f64) -> Vec<Site> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let p = HPoint::from_polar(rng.gen_range(0.0..1.5), rng.gen_range(0.0..6.3)).unwrap();
                Site::new(p, spread * rng.gen_range(-1.0..1.0))
            })
            .collect()
    }

    #[test]
    fn cells_partition_the_domain() {
        let sites = random_sites(40, 3, 0.3);
        let domain = ConvexDomain::regular(7, 2.0).unwrap();
        let pd = PowerDiagram::planar(&sites, &domain).unwrap();
        let total: f64 = pd.areas().iter().sum();
        assert!((total - domain.area()).abs() < 1e-9 * domain.area());
    }

    #[test]
    fn cell_membership_matches_power_argmin() {
        let sites = random_sites(30, 11, 0.5);
        let domain = ConvexDomain::regular(6, 1.8).unwrap();
        let pd = PowerDiagram::planar(&sites, &domain).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let q = HPoint::from_polar(rng.gen_range(0.0..1.1), rng.gen_range(0.0..6.3)).unwrap();
            assert!(domain.contains(&q));
            let i = pd.locate(&q);
            assert!(pd.cells[i].contains_klein(q.to_klein(), 1e-9));
        }
    }

    #[test]
    fn hidden_site_has_empty_cell() {
        let mut sites = random_sites(10, 2, 0.0);
        sites.push(Site::new(HPoint::from_polar(0.05, 0.0).unwrap(), -3.0));
        let domain = ConvexDomain::regular(5, 2.0).unwrap();
        let pd = PowerDiagram::planar(&sites, &domain).unwrap();
        assert!(pd.cells[10].degenerate);
        assert_eq!(pd.cells[10].area, 0.0);
    }

    #[test]
    fn edge_geometry_of_equal_circles_is_symmetric() {
        let a = GeodesicCircle::new(HPoint::from_polar(0.5, 0.0).unwrap(), 0.3).unwrap().site();
        let b = GeodesicCircle::new(HPoint::from_polar(0.5, std::f64::consts::PI).unwrap(), 0.3)
            .unwrap()
            .site();
        let p = HPoint::from_polar(0.7, std::f64::consts::FRAC_PI_2).unwrap();
        let q = HPoint::from_polar(0.2, -std::f64::consts::FRAC_PI_2).unwrap();
        let g = hessian_edge_geometry(&a, &b, &p, &q).unwrap();
        assert!((g.gamma_i - 0.5).abs() < 1e-12 && (g.gamma_j - 0.5).abs() < 1e-12);
        assert!((g.d_k + g.d_l - 0.9).abs() < 1e-12);
    }
}
