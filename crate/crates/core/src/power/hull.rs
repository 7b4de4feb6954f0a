//! Regular triangulation of lifted planar points, i.e. the projection of the
//! lower convex hull of `(x, y, z)` onto the `(x, y)` plane.
//!
//! Built by incremental insertion with Lawson flips. Predicates are exact
//! (`robust`) and ties are broken by a symbolic perturbation: a point with a
//! lower index is treated as infinitesimally lower (and its planar position
//! as infinitesimally moved), so flips always terminate. The three corners
//! of the enclosing triangle carry a symbolic infinite height.

use std::collections::HashMap;

use robust::{orient2d, orient3d, Coord, Coord3D};

use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

/// Triangles are counter-clockwise. `neighbors[t][k]` is the triangle across
/// the edge opposite `triangles[t][k]`.
#[derive(Debug, Clone, Default)]
pub struct RegularTriangulation {
    triangles: Vec<[usize; 3]>,
    neighbors: Vec<[Option<usize>; 3]>,
    hidden: Vec<bool>,
}

impl RegularTriangulation {
    /// `points[i] = [x, y, height]`.
    pub fn build(points: &[[f64; 3]]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewSites(points.len()));
        }
        if points.iter().any(|p| p.iter().any(|c| !c.is_finite())) {
            return Err(Error::Degenerate("non-finite lifted point".into()));
        }
        Builder::new(points).run()
    }

    /// No faces: for one or two points, whose cells are cut by direct
    /// bisectors.
    pub fn without_faces(n: usize) -> Self {
        Self { triangles: Vec::new(), neighbors: Vec::new(), hidden: vec![false; n] }
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn neighbors(&self) -> &[[Option<usize>; 3]] {
        &self.neighbors
    }

    /// Points that are not vertices of the lower hull.
    pub fn is_hidden(&self, i: usize) -> bool {
        self.hidden[i]
    }

    pub fn num_points(&self) -> usize {
        self.hidden.len()
    }

    /// Sorted adjacency lists of the triangulation graph.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.hidden.len()];
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Undirected edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .adjacency()
            .iter()
            .enumerate()
            .flat_map(|(i, l)| l.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .collect();
        out.sort_unstable();
        out
    }
}

struct Builder {
    pts: Vec<[f64; 3]>,
    n: usize,
    verts: Vec<[usize; 3]>,
    nbrs: Vec<[usize; 3]>,
    alive: Vec<bool>,
    hidden: Vec<bool>,
    stack: Vec<usize>,
    last: usize,
    rng: u64,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

impl Builder {
    fn new(points: &[[f64; 3]]) -> Self {
        let n = points.len();
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let c = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
        let m = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-3);
        let r = 1e3 * m;
        let mut pts = points.to_vec();
        for k in 0..3 {
            let th = std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            pts.push([c[0] + r * th.cos(), c[1] + r * th.sin(), 0.0]);
        }
        Self {
            pts,
            n,
            verts: vec![[n, n + 1, n + 2]],
            nbrs: vec![[NONE; 3]],
            alive: vec![true],
            hidden: vec![false; n],
            stack: Vec::new(),
            last: 0,
            rng: 0x9e37_79b9_7f4a_7c15,
        }
    }

    fn run(mut self) -> Result<RegularTriangulation> {
        let order = self.insertion_order()?;
        for p in order {
            self.insert(p)?;
        }
        Ok(self.finish())
    }

    /// Hilbert-curve order for short walks; points sharing a planar position
    /// keep only the lowest one.
    fn insertion_order(&mut self) -> Result<Vec<usize>> {
        let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
        for i in 0..self.n {
            let key = (self.pts[i][0].to_bits(), self.pts[i][1].to_bits());
            match seen.get(&key).copied() {
                None => {
                    seen.insert(key, i);
                }
                Some(j) => {
                    let (zi, zj) = (self.pts[i][2], self.pts[j][2]);
                    if zi == zj {
                        return Err(Error::DuplicateSite(j, i));
                    }
                    if zi < zj {
                        self.hidden[j] = true;
                        seen.insert(key, i);
                    } else {
                        self.hidden[i] = true;
                    }
                }
            }
        }
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &self.pts[..self.n] {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let side = 1u32 << 16;
        let scale = |v: f64, k: usize| -> u32 {
            let w = (hi[k] - lo[k]).max(f64::MIN_POSITIVE);
            (((v - lo[k]) / w) * (side - 1) as f64).round().clamp(0.0, (side - 1) as f64) as u32
        };
        let mut keyed: Vec<(u64, usize)> = (0..self.n)
            .filter(|&i| !self.hidden[i])
            .map(|i| (hilbert(side, scale(self.pts[i][0], 0), scale(self.pts[i][1], 1)), i))
            .collect();
        keyed.sort_unstable();
        Ok(keyed.into_iter().map(|(_, i)| i).collect())
    }

    fn xy(&self, i: usize) -> Coord<f64> {
        Coord { x: self.pts[i][0], y: self.pts[i][1] }
    }

    /// Orientation of `(i, j, k)` with symbolic perturbation of positions.
    fn orient(&self, i: usize, j: usize, k: usize) -> i8 {
        let d = orient2d(self.xy(i), self.xy(j), self.xy(k));
        if d != 0.0 {
            return sign(d);
        }
        let mut idx = [i, j, k];
        let mut flip = false;
        for a in 0..3 {
            for b in 0..2 - a {
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    flip = !flip;
                }
            }
        }
        let (a, b, c) = (self.pts[idx[0]], self.pts[idx[1]], self.pts[idx[2]]);
        let seq = [b[1] - c[1], c[0] - b[0], c[1] - a[1], a[0] - c[0]];
        let s = seq.iter().map(|&v| sign(v)).find(|&s| s != 0).unwrap_or(0);
        if flip {
            -s
        } else {
            s
        }
    }

    fn lifted(&self, i: usize, infinite: bool) -> Coord3D<f64> {
        let p = &self.pts[i];
        let z = match (i >= self.n, infinite) {
            (true, true) => 1.0,
            (true, false) | (false, true) => 0.0,
            (false, false) => p[2],
        };
        Coord3D { x: p[0], y: p[1], z }
    }

    /// Whether lifted `d` lies strictly below the plane through `a, b, c`
    /// (counter-clockwise).
    fn below(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let ids = [a, b, c, d];
        if ids.iter().any(|&i| i >= self.n) {
            let [pa, pb, pc, pd] = ids.map(|i| self.lifted(i, true));
            let s = orient3d(pa, pb, pc, pd);
            if s != 0.0 {
                return s > 0.0;
            }
        }
        let [pa, pb, pc, pd] = ids.map(|i| self.lifted(i, false));
        let s = orient3d(pa, pb, pc, pd);
        if s != 0.0 {
            return s > 0.0;
        }
        let mut order = ids;
        order.sort_unstable();
        let (qa, qb, qc, qd) = (self.xy(a), self.xy(b), self.xy(c), self.xy(d));
        for m in order {
            let g = if m == a {
                -orient2d(qd, qb, qc)
            } else if m == b {
                -orient2d(qd, qc, qa)
            } else if m == c {
                -orient2d(qd, qa, qb)
            } else {
                orient2d(qa, qb, qc)
            };
            if g != 0.0 {
                return g > 0.0;
            }
        }
        false
    }

    fn next_rand(&mut self) -> u64 {
        self.rng ^= self.rng << 13;
        self.rng ^= self.rng >> 7;
        self.rng ^= self.rng << 17;
        self.rng
    }

    fn locate(&mut self, p: usize) -> Result<usize> {
        let mut t = self.last;
        let mut steps = 0usize;
        'walk: loop {
            steps += 1;
            if steps > 4 * self.verts.len() + 64 {
                return Err(Error::Degenerate("point location did not terminate".into()));
            }
            let v = self.verts[t];
            let r = (self.next_rand() % 3) as usize;
            for s in 0..3 {
                let e = (r + s) % 3;
                if self.orient(v[(e + 1) % 3], v[(e + 2) % 3], p) < 0 {
                    let u = self.nbrs[t][e];
                    if u == NONE {
                        return Err(Error::Degenerate("point outside the enclosing triangle".into()));
                    }
                    t = u;
                    continue 'walk;
                }
            }
            return Ok(t);
        }
    }

    fn replace_nbr(&mut self, t: usize, old: usize, new: usize) {
        if t == NONE {
            return;
        }
        for k in 0..3 {
            if self.nbrs[t][k] == old {
                self.nbrs[t][k] = new;
                return;
            }
        }
    }

    /// Rotates triangle `t` so that vertex `v` comes first.
    fn rotate_to(&mut self, t: usize, v: usize) -> bool {
        match self.verts[t].iter().position(|&x| x == v) {
            Some(i) => {
                self.verts[t].rotate_left(i);
                self.nbrs[t].rotate_left(i);
                true
            }
            None => false,
        }
    }

    fn new_triangle(&mut self, v: [usize; 3], nb: [usize; 3]) -> usize {
        self.verts.push(v);
        self.nbrs.push(nb);
        self.alive.push(true);
        self.verts.len() - 1
    }

    fn insert(&mut self, p: usize) -> Result<()> {
        let t = self.locate(p)?;
        let [a, b, c] = self.verts[t];
        if !self.below(a, b, c, p) {
            self.hidden[p] = true;
            return Ok(());
        }
        let [na, nb, nc] = self.nbrs[t];
        let t1 = self.new_triangle([p, c, a], [nb, NONE, t]);
        let t2 = self.new_triangle([p, a, b], [nc, t, t1]);
        self.nbrs[t1][1] = t2;
        self.verts[t] = [p, b, c];
        self.nbrs[t] = [na, t1, t2];
        self.replace_nbr(nb, t, t1);
        self.replace_nbr(nc, t, t2);
        self.stack.extend([t, t1, t2]);
        self.legalize(p);
        self.last = t;
        if !self.alive[t] {
            self.last = (0..self.alive.len()).rev().find(|&i| self.alive[i]).unwrap_or(0);
        }
        Ok(())
    }

    fn legalize(&mut self, p: usize) {
        while let Some(t) = self.stack.pop() {
            if !self.alive[t] || !self.rotate_to(t, p) {
                continue;
            }
            let [_, a, b] = self.verts[t];
            let u = self.nbrs[t][0];
            if u == NONE {
                continue;
            }
            let Some(d) = self.verts[u].iter().copied().find(|&x| x != a && x != b) else {
                continue;
            };
            if !self.below(p, a, b, d) {
                continue;
            }
            self.rotate_to(u, d);
            let reflex_a = self.orient(p, a, d) <= 0;
            let reflex_b = self.orient(p, d, b) <= 0;
            if !reflex_a && !reflex_b {
                self.flip22(t, u, p, a, b, d);
            } else if reflex_a {
                let w = self.nbrs[t][2];
                if w != NONE && a < self.n && self.verts[w].contains(&d) {
                    self.flip31_a(t, u, w, p, a, d);
                }
            } else {
                let w = self.nbrs[t][1];
                if w != NONE && b < self.n && self.verts[w].contains(&d) {
                    self.flip31_b(t, u, w, p, b, d);
                }
            }
        }
    }

    /// `t = (p, a, b)`, `u = (d, b, a)` become `(p, a, d)`, `(p, d, b)`.
    fn flip22(&mut self, t: usize, u: usize, p: usize, a: usize, b: usize, d: usize) {
        let (n_bp, n_pa) = (self.nbrs[t][1], self.nbrs[t][2]);
        let (n_ad, n_db) = (self.nbrs[u][1], self.nbrs[u][2]);
        self.verts[t] = [p, a, d];
        self.nbrs[t] = [n_ad, u, n_pa];
        self.verts[u] = [p, d, b];
        self.nbrs[u] = [n_db, n_bp, t];
        self.replace_nbr(n_ad, u, t);
        self.replace_nbr(n_bp, t, u);
        self.stack.extend([t, u]);
    }

    /// Removes the degree-3 vertex `a`: `(p, a, b)`, `(d, b, a)`, `(a, p, d)`
    /// become `(p, d, b)`.
    fn flip31_a(&mut self, t: usize, u: usize, w: usize, p: usize, a: usize, d: usize) {
        self.rotate_to(w, a);
        let b = self.verts[t][2];
        let n_pd = self.nbrs[w][0];
        let n_bp = self.nbrs[t][1];
        let n_db = self.nbrs[u][2];
        self.verts[t] = [p, d, b];
        self.nbrs[t] = [n_db, n_bp, n_pd];
        self.replace_nbr(n_db, u, t);
        self.replace_nbr(n_pd, w, t);
        self.alive[u] = false;
        self.alive[w] = false;
        self.hidden[a] = true;
        self.stack.push(t);
    }

    /// Removes the degree-3 vertex `b`: `(p, a, b)`, `(d, b, a)`, `(b, d, p)`
    /// become `(p, a, d)`.
    fn flip31_b(&mut self, t: usize, u: usize, w: usize, p: usize, b: usize, d: usize) {
        self.rotate_to(w, b);
        let a = self.verts[t][1];
        let n_dp = self.nbrs[w][0];
        let n_pa = self.nbrs[t][2];
        let n_ad = self.nbrs[u][1];
        self.verts[t] = [p, a, d];
        self.nbrs[t] = [n_ad, n_dp, n_pa];
        self.replace_nbr(n_ad, u, t);
        self.replace_nbr(n_dp, w, t);
        self.alive[u] = false;
        self.alive[w] = false;
        self.hidden[b] = true;
        self.stack.push(t);
    }

    fn finish(self) -> RegularTriangulation {
        let n = self.n;
        let mut id = vec![NONE; self.verts.len()];
        let mut triangles = Vec::new();
        for (t, v) in self.verts.iter().enumerate() {
            // Flat triangles only arise along the hull boundary from the
            // symbolic perturbation; they carry no face.
            if self.alive[t]
                && v.iter().all(|&x| x < n)
                && orient2d(self.xy(v[0]), self.xy(v[1]), self.xy(v[2])) != 0.0
            {
                id[t] = triangles.len();
                triangles.push(*v);
            }
        }
        let mut neighbors = Vec::with_capacity(triangles.len());
        for (t, nb) in self.nbrs.iter().enumerate() {
            if id[t] != NONE {
                neighbors.push(nb.map(|u| (u != NONE && id[u] != NONE).then(|| id[u])));
            }
        }
        RegularTriangulation { triangles, neighbors, hidden: self.hidden }
    }
}

fn hilbert(n: u32, mut x: u32, mut y: u32) -> u64 {
    let mut d = 0u64;
    let mut s = n / 2;
    while s > 0 {
        let rx = u32::from(x & s > 0);
        let ry = u32::from(y & s > 0);
        d += u64::from(s) * u64::from(s) * u64::from((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = n - 1 - x;
                y = n - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s /= 2;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force lower hull: triangles whose plane has every point on or
    /// above it.
    fn brute_lower_faces(p: &[[f64; 3]]) -> Vec<[usize; 3]> {
        let n = p.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (p[i], p[j], p[k]);
                    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
                    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
                    let mut nrm =
                        [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
                    if nrm[2].abs() < 1e-12 {
                        continue;
                    }
                    if nrm[2] < 0.0 {
                        nrm = nrm.map(|x| -x);
                    }
                    let ok = (0..n).all(|m| {
                        let w = [p[m][0] - a[0], p[m][1] - a[1], p[m][2] - a[2]];
                        nrm[0] * w[0] + nrm[1] * w[1] + nrm[2] * w[2] >= -1e-12
                    });
                    if ok {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    fn sorted_faces(t: &RegularTriangulation) -> Vec<[usize; 3]> {
        let mut f: Vec<[usize; 3]> = t
            .triangles()
            .iter()
            .map(|v| {
                let mut s = *v;
                s.sort_unstable();
                s
            })
            .collect();
        f.sort_unstable();
        f
    }

    #[test]
    fn matches_brute_force_on_random_weighted_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let n = rng.gen_range(4..25);
            let pts: Vec<[f64; 3]> = (0..n)
                .map(|_| {
                    let (x, y): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    [x, y, x * x + y * y + rng.gen_range(-0.3..0.3)]
                })
                .collect();
            let t = RegularTriangulation::build(&pts).unwrap();
            let mut brute = brute_lower_faces(&pts);
            brute.sort_unstable();
            assert_eq!(sorted_faces(&t), brute);
            for (ti, v) in t.triangles().iter().enumerate() {
                let o = orient2d(
                    Coord { x: pts[v[0]][0], y: pts[v[0]][1] },
                    Coord { x: pts[v[1]][0], y: pts[v[1]][1] },
                    Coord { x: pts[v[2]][0], y: pts[v[2]][1] },
                );
                assert!(o > 0.0);
                for k in 0..3 {
                    if let Some(u) = t.neighbors()[ti][k] {
                        assert!(t.neighbors()[u].contains(&Some(ti)));
                    }
                }
            }
            for i in 0..n {
                let used = t.triangles().iter().any(|v| v.contains(&i));
                assert_eq!(used, !t.is_hidden(i));
            }
        }
    }

    #[test]
    fn cocircular_grid_terminates_with_valid_triangulation() {
        let mut pts = Vec::new();
        for i in 0..7 {
            for j in 0..7 {
                let (x, y) = (i as f64, j as f64);
                pts.push([x, y, x * x + y * y]);
            }
        }
        let t = RegularTriangulation::build(&pts).unwrap();
        // A 7x7 grid has 2·6·6 triangles in any triangulation.
        assert_eq!(t.triangles().len(), 72);
        assert!((0..pts.len()).all(|i| !t.is_hidden(i)));
    }

    #[test]
    fn redundant_and_coincident_points_are_hidden() {
        let pts = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.2, 0.2, 5.0],
            [1.0, 1.0, 2.0],
            [1.0, 0.0, 3.0],
        ];
        let t = RegularTriangulation::build(&pts).unwrap();
        assert!(t.is_hidden(3));
        assert!(t.is_hidden(5));
        assert!(!t.is_hidden(1));
        assert_eq!(t.triangles().len(), 2);
        let dup = vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]];
        assert!(matches!(RegularTriangulation::build(&dup), Err(Error::DuplicateSite(0, 2))));
    }

    #[test]
    fn collinear_points_on_hull_edge() {
        let pts: Vec<[f64; 3]> =
            vec![[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [1.0, 0.0, -0.1], [1.0, 2.0, 0.0]];
        let t = RegularTriangulation::build(&pts).unwrap();
        assert_eq!(sorted_faces(&t), vec![[0, 2, 3], [1, 2, 3]]);
    }
}
