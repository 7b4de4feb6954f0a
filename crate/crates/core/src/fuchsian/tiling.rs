use std::collections::{HashMap, VecDeque};

use super::embed::FundamentalDomain;
use super::group::FuchsianGroup;
use crate::error::{Error, Result};
use crate::lorentz::{geodesic_point, HPoint, LorentzIsometry, MinkowskiVec};

/// Offset of the probe ring around each boundary sample in the containment check.
const PROBE_RADIUS: f64 = 1e-4;
const PROBE_DIRECTIONS: usize = 12;
const EDGE_SAMPLES: usize = 6;
/// Klein-coordinate slack for probes that land on a tile edge.
const PROBE_TOLERANCE: f64 = 1e-10;
/// Slack on the center distance used to discard tiles that cannot meet the domain.
const PRUNE_MARGIN: f64 = 0.5;

/// A finite set of group elements and their translated domains.
#[derive(Debug, Clone)]
pub struct TilePatch {
    pub depth: usize,
    /// Distinct elements; the identity comes first.
    pub elements: Vec<LorentzIsometry>,
    pub words: Vec<Vec<usize>>,
    inverses: Vec<LorentzIsometry>,
    /// Images of the domain center.
    centers: Vec<HPoint>,
}

/// Images of the domain center bucketed by their distance to it. Distinct
/// tiles have centers at least twice the inradius apart. Equal elements
/// reached by different words disagree by the relator defect times
/// `sinh d`, which reaches `1e-4` near the copy radius for genus 3.
struct CenterIndex {
    origin: HPoint,
    buckets: HashMap<i64, Vec<HPoint>>,
}

const SAME_TILE: f64 = 1e-2;

impl CenterIndex {
    fn new(origin: HPoint) -> Self {
        Self { origin, buckets: HashMap::new() }
    }

    /// Inserts `p` unless a stored center lies within `SAME_TILE`.
    fn insert(&mut self, p: HPoint) -> bool {
        let key = (p.distance(&self.origin) / SAME_TILE).floor() as i64;
        for k in key - 1..=key + 1 {
            if let Some(b) = self.buckets.get(&k) {
                if b.iter().any(|q| q.distance(&p) < SAME_TILE) {
                    return false;
                }
            }
        }
        self.buckets.entry(key).or_default().push(p);
        true
    }
}

/// Breadth-first enumeration of reduced words, keeping elements whose
/// image of the domain center lies within `radius` of it.
fn enumerate(
    group: &FuchsianGroup,
    dom: &FundamentalDomain,
    max_len: Option<usize>,
    radius: f64,
) -> (Vec<LorentzIsometry>, Vec<Vec<usize>>) {
    let mut elements = vec![LorentzIsometry::identity()];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut seen = CenterIndex::new(dom.center);
    seen.insert(dom.center);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if max_len.is_some_and(|l| words[i].len() >= l) {
            continue;
        }
        for l in 0..group.num_letters() {
            if words[i].last().is_some_and(|&last| last == FuchsianGroup::inverse_letter(l)) {
                continue;
            }
            let m = elements[i].compose(group.letter(l)).reorthonormalized();
            let c = m.apply(&dom.center);
            if c.distance(&dom.center) > radius || !seen.insert(c) {
                continue;
            }
            let mut w = words[i].clone();
            w.push(l);
            elements.push(m);
            words.push(w);
            queue.push_back(elements.len() - 1);
        }
    }
    (elements, words)
}

impl TilePatch {
    /// Reduced words up to length `depth` whose tiles can meet the domain.
    /// No containment check.
    pub fn generate(group: &FuchsianGroup, dom: &FundamentalDomain, depth: usize) -> Self {
        let (elements, words) = enumerate(group, dom, Some(depth), 2.0 * dom.radius + PRUNE_MARGIN);
        Self::from_elements(dom, depth, elements, words)
    }

    /// Every tile meeting the ball of radius `radius` about the domain center
    /// (possibly with a few more).
    pub fn ball(group: &FuchsianGroup, dom: &FundamentalDomain, radius: f64) -> Self {
        // Tiles meeting a ball are connected through tiles meeting it, and
        // such tiles have centers within `radius + R`.
        let (elements, words) = enumerate(group, dom, None, radius + dom.radius + 1e-6);
        let depth = words.iter().map(Vec::len).max().unwrap_or(0);
        Self::from_elements(dom, depth, elements, words)
    }

    fn from_elements(
        dom: &FundamentalDomain,
        depth: usize,
        elements: Vec<LorentzIsometry>,
        words: Vec<Vec<usize>>,
    ) -> Self {
        let inverses = elements.iter().map(|m| m.inverse()).collect();
        let centers = elements.iter().map(|m| m.apply(&dom.center)).collect();
        Self { depth, elements, words, inverses, centers }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn center(&self, t: usize) -> &HPoint {
        &self.centers[t]
    }

    pub fn inverse(&self, t: usize) -> &LorentzIsometry {
        &self.inverses[t]
    }

    /// A tile containing `x` together with `γ⁻¹x ∈ D̄`, nearest tiles first.
    pub fn locate(&self, dom: &FundamentalDomain, x: &HPoint, tol: f64) -> Option<(usize, HPoint)> {
        if dom.contains(x, tol) {
            return Some((0, *x));
        }
        let mut order: Vec<(f64, usize)> =
            self.centers.iter().enumerate().map(|(t, c)| (c.distance(x), t)).collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (d, t) in order {
            if d > dom.radius + 1e-6 {
                break;
            }
            let y = self.inverses[t].apply(x);
            if dom.contains(&y, tol) {
                return Some((t, y));
            }
        }
        None
    }

    /// Whether every probe point around the boundary of the domain lies
    /// inside some tile.
    pub fn covers_domain(&self, dom: &FundamentalDomain) -> bool {
        let n = dom.boundary.len();
        for i in 0..n {
            let a = dom.positions[dom.boundary[i]];
            let b = dom.positions[dom.boundary[(i + 1) % n]];
            for s in 0..EDGE_SAMPLES {
                let Ok(p) = geodesic_point(&a, &b, s as f64 / EDGE_SAMPLES as f64) else {
                    return false;
                };
                for probe in ring(&p) {
                    if self.locate(dom, &probe, PROBE_TOLERANCE).is_none() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn ring(p: &HPoint) -> Vec<HPoint> {
    let to = LorentzIsometry::translation_to(p);
    (0..PROBE_DIRECTIONS)
        .filter_map(|k| {
            let t = std::f64::consts::TAU * (k as f64 + 0.3183) / PROBE_DIRECTIONS as f64;
            let (s, c) = t.sin_cos();
            let q = MinkowskiVec::new(PROBE_RADIUS.sinh() * c, PROBE_RADIUS.sinh() * s, PROBE_RADIUS.cosh());
            HPoint::new(to.apply_vec(&q)).ok()
        })
        .collect()
}

/// [`TilePatch::generate`] followed by the containment check.
pub fn build_tiling(group: &FuchsianGroup, dom: &FundamentalDomain, depth: usize) -> Result<TilePatch> {
    let patch = TilePatch::generate(group, dom, depth);
    if patch.covers_domain(dom) {
        Ok(patch)
    } else {
        Err(Error::InsufficientTiling(depth))
    }
}

/// Smallest depth, starting from `start`, whose patch covers the domain.
/// Corners of the 4g-gon are shared by 4g tiles, so depth `2g` always suffices
/// for convex domains; the search stops there.
pub fn auto_tiling(group: &FuchsianGroup, dom: &FundamentalDomain, start: usize) -> Result<TilePatch> {
    let cap = (2 * dom.genus).max(start);
    let mut last = Error::InsufficientTiling(start);
    for depth in start.max(1)..=cap {
        match build_tiling(group, dom, depth) {
            Ok(p) => return Ok(p),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// `γ⁻¹x ∈ D̄` for the first tile `γD` of the patch that contains `x`.
/// Points beyond the patch are first pulled in by repeatedly undoing the
/// tile whose center is nearest, which strictly shortens the distance to
/// the domain center.
pub fn covering_reduce(patch: &TilePatch, dom: &FundamentalDomain, x: &HPoint) -> Result<HPoint> {
    let mut x = *x;
    for _ in 0..MAX_PULLS {
        if let Some((_, y)) = patch.locate(dom, &x, REDUCE_TOLERANCE) {
            return Ok(y);
        }
        let here = x.distance(&dom.center);
        let (d, t) = patch
            .centers
            .iter()
            .enumerate()
            .map(|(t, c)| (c.distance(&x), t))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .ok_or(Error::OutOfPatch)?;
        if d >= here - 1e-9 {
            break;
        }
        x = patch.inverses[t].apply(&x);
    }
    Err(Error::OutOfPatch)
}

const MAX_PULLS: usize = 64;

/// Klein-distance slack for membership in D̄. Side chains carry the embedding
/// drift (up to 1e-7), and points on a side, such as centroids of cells
/// symmetric across it, must still count as inside.
const REDUCE_TOLERANCE: f64 = 1e-7;
