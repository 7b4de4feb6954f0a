use std::cell::{Cell, RefCell};

use super::embed::FundamentalDomain;
use super::group::FuchsianGroup;
use super::tiling::{covering_reduce, TilePatch};
use crate::error::{Error, Result};
use crate::lorentz::HPoint;
use crate::power::{Clip, CopySet, PowerDiagram};
use crate::solver::DiagramSource;

/// Copies are never placed farther than this from the domain center.
const MAX_COPY_RADIUS: f64 = 8.0;

/// Sites on a closed surface, represented in the fundamental domain.
///
/// Diagrams are computed in the universal cover from all copies `γxᵢ`
/// within `R + halo` of the domain center (`R` the domain radius). A
/// canonical cell is accepted only when no farther copy can reach any of
/// its vertices; otherwise the halo grows and the diagram is rebuilt.
#[derive(Debug)]
pub struct SurfaceProblem {
    domain: FundamentalDomain,
    group: FuchsianGroup,
    patch: TilePatch,
    sites: Vec<HPoint>,
    min_halo: f64,
    halo: Cell<f64>,
    ball: RefCell<Option<(f64, TilePatch)>>,
}

impl SurfaceProblem {
    /// Sites are first reduced into the closed domain with `patch`.
    pub fn new(
        domain: FundamentalDomain,
        group: FuchsianGroup,
        patch: TilePatch,
        sites: &[HPoint],
    ) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::TooFewSites(0));
        }
        let sites = sites
            .iter()
            .map(|x| covering_reduce(&patch, &domain, x))
            .collect::<Result<Vec<_>>>()?;
        let min_halo = 1.5 * (domain.area() / sites.len() as f64).sqrt();
        Ok(Self {
            domain,
            group,
            patch,
            sites,
            min_halo,
            halo: Cell::new(min_halo),
            ball: RefCell::new(None),
        })
    }

    pub fn domain(&self) -> &FundamentalDomain {
        &self.domain
    }

    pub fn group(&self) -> &FuchsianGroup {
        &self.group
    }

    pub fn patch(&self) -> &TilePatch {
        &self.patch
    }

    /// Sites inside the closed fundamental domain.
    pub fn sites(&self) -> &[HPoint] {
        &self.sites
    }

    pub fn halo(&self) -> f64 {
        self.halo.get()
    }

    /// Canonical sites first, then every translate within `R + halo`.
    pub fn copies(&self, halo: f64) -> CopySet {
        let r = self.domain.radius;
        let center = self.domain.center;
        let mut cache = self.ball.borrow_mut();
        if cache.as_ref().map_or(true, |(h, _)| *h < halo) {
            *cache = Some((halo, TilePatch::ball(&self.group, &self.domain, r + halo)));
        }
        let ball = &cache.as_ref().expect("filled").1;
        let k = self.sites.len();
        let mut points = self.sites.clone();
        let mut owner: Vec<usize> = (0..k).collect();
        for (t, m) in ball.elements.iter().enumerate().skip(1) {
            if ball.center(t).distance(&center) > 2.0 * r + halo {
                continue;
            }
            for (i, x) in self.sites.iter().enumerate() {
                let y = m.apply(x);
                if y.distance(&center) <= r + halo {
                    points.push(y);
                    owner.push(i);
                }
            }
        }
        CopySet { points, owner, canonical: (0..k).collect() }
    }

    /// Halo needed for the canonical cells of `pd` to be exact, or `None`
    /// when a cell does not close up.
    fn required_halo(&self, pd: &PowerDiagram, heights: &[f64]) -> Option<f64> {
        let r = self.domain.radius;
        let hmax = heights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut need: f64 = 0.0;
        for (i, cell) in pd.cells.iter().enumerate() {
            if cell.unbounded {
                return None;
            }
            let x = &self.sites[i];
            for v in &cell.vertices {
                // A copy y beyond R + halo has cosh d(v, y) e^{-h_max} above
                // cosh(R + halo - d(v, c)) e^{-h_max}; it must exceed the
                // power of v to xᵢ.
                let p = -v.inner(x) * (hmax - heights[i]).exp();
                need = need.max(v.distance(&self.domain.center) - r + p.max(1.0).acosh());
            }
        }
        Some(need)
    }

    /// Site index whose cell contains `x`, after reducing `x` into the domain.
    pub fn locate(&self, pd: &PowerDiagram, x: &HPoint) -> Result<usize> {
        let y = covering_reduce(&self.patch, &self.domain, x)?;
        Ok(pd.locate(&y))
    }
}

impl DiagramSource for SurfaceProblem {
    fn num_sites(&self) -> usize {
        self.sites.len()
    }

    fn total_mass(&self) -> f64 {
        self.domain.area()
    }

    fn diagram(&self, heights: &[f64]) -> Result<PowerDiagram> {
        let r = self.domain.radius;
        let mut halo = self.halo.get();
        loop {
            let pd = PowerDiagram::build(self.copies(halo), heights, Clip::Square)?;
            match self.required_halo(&pd, heights) {
                Some(need) if need < halo => {
                    self.halo.set((1.25 * need).clamp(self.min_halo, halo));
                    return Ok(pd);
                }
                Some(need) => halo = (1.5 * halo).max(1.25 * need),
                None => halo *= 2.0,
            }
            if r + halo > MAX_COPY_RADIUS {
                return Err(Error::Degenerate(format!(
                    "cells do not close up within distance {MAX_COPY_RADIUS} of the domain"
                )));
            }
        }
    }
}
