//! Damped Newton iteration on the heights.


use serde::{Deserialize, Serialize};

use super::derivatives::{gradient, hessian};
use super::energy::{dual_functional, total_cost};
use super::linalg::solve_constrained;
use super::target::TargetMeasure;
use crate::error::{Error, Result};
use crate::lorentz::HPoint;
use crate::power::{Clip, ConvexDomain, CopySet, PowerDiagram};

/// Anything that turns a height vector into a power diagram of the source.
pub trait DiagramSource {
    fn num_sites(&self) -> usize;
    /// Source mass: area of the domain or of the surface.
    fn total_mass(&self) -> f64;
    fn diagram(&self, heights: &[f64]) -> Result<PowerDiagram>;
}

/// Sites in the plane with a convex clipping domain.
#[derive(Debug, Clone)]
pub struct PlanarProblem {
    pub centers: Vec<HPoint>,
    pub domain: ConvexDomain,
    area: f64,
}

impl PlanarProblem {
    pub fn new(centers: Vec<HPoint>, domain: ConvexDomain) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::TooFewSites(0));
        }
        for (i, c) in centers.iter().enumerate() {
            if !domain.contains(c) {
                return Err(Error::OutOfDomain(format!("site {i} lies outside the domain")));
            }
            for (j, d) in centers[..i].iter().enumerate() {
                if c.distance(d) <= 1e-9 {
                    return Err(Error::DuplicateSite(j, i));
                }
            }
        }
        let area = domain.area();
        Ok(Self { centers, domain, area })
    }

    /// Domain defaults to the convex hull of the sites.
    pub fn with_hull(centers: Vec<HPoint>) -> Result<Self> {
        let domain = ConvexDomain::hull_of(&centers)?;
        Self::new(centers, domain)
    }
}

impl DiagramSource for PlanarProblem {
    fn num_sites(&self) -> usize {
        self.centers.len()
    }

    fn total_mass(&self) -> f64 {
        self.area
    }

    fn diagram(&self, heights: &[f64]) -> Result<PowerDiagram> {
        PowerDiagram::build(CopySet::planar(&self.centers), heights, Clip::Domain(&self.domain))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonConfig {
    pub lambda0: f64,
    pub eps: f64,
    pub max_iters: usize,
    /// Evaluate the energy at every accepted iterate (one quadrature pass).
    pub track_energy: bool,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self { lambda0: 0.5, eps: 1e-6, max_iters: 200, track_energy: true }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda0 > 0.0 && self.lambda0 <= 1.0) {
            return Err(Error::Input(format!("lambda0 must lie in (0, 1], got {}", self.lambda0)));
        }
        if !(self.eps > 0.0) {
            return Err(Error::Input(format!("eps must be positive, got {}", self.eps)));
        }
        Ok(())
    }
}

/// One accepted iterate; iteration 0 is the starting point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    /// Step length that produced this iterate (0 for the start).
    pub lambda: f64,
    pub residual_inf: f64,
    /// Total squared error `Σ (ω_i - ν_i)²`.
    pub residual_l2: f64,
    /// `max_i |ω_i - ν_i| / ν_i`.
    pub max_relative: f64,
    pub energy: Option<f64>,
    /// `Σ ω_i`.
    pub total_area: f64,
    pub millis: f64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// Heights normalized to sum to zero.
    pub heights: Vec<f64>,
    pub diagram: PowerDiagram,
    pub log: Vec<IterationRecord>,
    /// `Σ_i ∫_{W_i} ln cosh d(x, p_i) dμ`.
    pub cost: f64,
}

impl Solution {
    pub fn iterations(&self) -> usize {
        self.log.last().map(|r| r.iter).unwrap_or(0)
    }

    pub fn residual(&self) -> f64 {
        self.log.last().map(|r| r.residual_inf).unwrap_or(0.0)
    }
}

/// A failed solve with the log up to the failure.
#[derive(Debug, Clone)]
pub struct SolveFailure {
    pub error: Error,
    pub log: Vec<IterationRecord>,
}

impl std::fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for SolveFailure {}

impl From<Error> for SolveFailure {
    fn from(error: Error) -> Self {
        Self { error, log: Vec::new() }
    }
}

fn normalized(mut h: Vec<f64>) -> Vec<f64> {
    let mean = h.iter().sum::<f64>() / h.len() as f64;
    h.iter_mut().for_each(|v| *v -= mean);
    h
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

struct Evaluation {
    diagram: PowerDiagram,
    residual: Vec<f64>,
    inf: f64,
}

fn evaluate(source: &dyn DiagramSource, target: &TargetMeasure, h: &[f64]) -> Result<Evaluation> {
    let diagram = source.diagram(h)?;
    let residual = gradient(&diagram, target)?;
    let inf = max_abs(&residual);
    Ok(Evaluation { diagram, residual, inf })
}

/// Minimizes the convex energy whose gradient is `ω(φ) - ν`, starting from
/// `initial` (zero when absent). Each step solves `H h = -(ω - ν)` with
/// `Σ h = 0` and halves the step until every cell is nonempty and the
/// max-norm residual strictly decreases.
pub fn damped_newton(
    source: &dyn DiagramSource,
    target: &TargetMeasure,
    config: &NewtonConfig,
    initial: Option<&[f64]>,
) -> Result<Solution, SolveFailure> {
    config.validate()?;
    let k = source.num_sites();
    if target.len() != k {
        return Err(Error::InvalidTarget(format!("{} masses for {k} sites", target.len())).into());
    }
    let total = source.total_mass();
    TargetMeasure::new(target.masses().to_vec(), total)?;
    let start = Clock::now();
    let mut phi = normalized(match initial {
        Some(h) if h.len() == k => h.to_vec(),
        Some(h) => {
            return Err(Error::Input(format!("{} initial heights for {k} sites", h.len())).into())
        }
        None => vec![0.0; k],
    });
    let mut state = evaluate(source, target, &phi)?;
    let base_energy = if config.track_energy {
        source.diagram(&vec![0.0; k]).ok().map(|pd| dual_functional(&pd))
    } else {
        None
    };
    let energy_of = |pd: &PowerDiagram, h: &[f64]| {
        base_energy.map(|f0| {
            f0 - dual_functional(pd) - h.iter().zip(target.masses()).map(|(a, b)| a * b).sum::<f64>()
        })
    };
    let record = |iter: usize, lambda: f64, ev: &Evaluation, energy: Option<f64>, millis: f64| {
        IterationRecord {
            iter,
            lambda,
            residual_inf: ev.inf,
            residual_l2: ev.residual.iter().map(|r| r * r).sum(),
            max_relative: ev
                .residual
                .iter()
                .zip(target.masses())
                .fold(0.0, |m, (r, n)| f64::max(m, r.abs() / n)),
            energy,
            total_area: ev.diagram.cells.iter().map(|c| c.area).sum(),
            millis,
        }
    };
    let mut log =
        vec![record(0, 0.0, &state, energy_of(&state.diagram, &phi), start.millis())];
    let mut iter = 0;
    while state.inf >= config.eps {
        if iter >= config.max_iters {
            let error = Error::NonConvergence { iterations: iter, residual: state.inf };
            return Err(SolveFailure { error, log });
        }
        iter += 1;
        let tick = Clock::now();
        let step = hessian(&state.diagram).and_then(|h| {
            let rhs: Vec<f64> = state.residual.iter().map(|r| -r).collect();
            solve_constrained(&h, &rhs)
        });
        let step = match step {
            Ok(s) => s,
            Err(error) => return Err(SolveFailure { error, log }),
        };
        let mut lambda = config.lambda0;
        let accepted = loop {
            let trial: Vec<f64> = phi.iter().zip(&step).map(|(p, s)| p + lambda * s).collect();
            let trial = normalized(trial);
            if let Ok(ev) = evaluate(source, target, &trial) {
                if ev.inf < state.inf {
                    break Some((trial, ev));
                }
            }
            lambda *= 0.5;
            if lambda < 1e-12 {
                break None;
            }
        };
        let Some((next, ev)) = accepted else {
            return Err(SolveFailure { error: Error::Stall { iteration: iter }, log });
        };
        phi = next;
        state = ev;
        let energy = energy_of(&state.diagram, &phi);
        log.push(record(iter, lambda, &state, energy, tick.millis()));
    }
    let cost = total_cost(&state.diagram);
    Ok(Solution { heights: phi, diagram: state.diagram, log, cost })
}

/// Wall clock for the iteration log. The browser target has no std clock,
/// so times there are logged as zero.
struct Clock(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Clock {
    #[cfg(not(target_arch = "wasm32"))]
    fn now() -> Self {
        Self(std::time::Instant::now())
    }

    #[cfg(target_arch = "wasm32")]
    fn now() -> Self {
        Self()
    }

    #[cfg(not(target_arch = "wasm32"))]
    fn millis(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1e3
    }

    #[cfg(target_arch = "wasm32")]
    fn millis(&self) -> f64 {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_site_converges_immediately() {
        let domain = ConvexDomain::regular(5, 1.0).unwrap();
        let p = PlanarProblem::new(vec![HPoint::APEX], domain).unwrap();
        let t = TargetMeasure::new(vec![p.total_mass()], p.total_mass()).unwrap();
        let s = damped_newton(&p, &t, &NewtonConfig::default(), None).unwrap();
        assert_eq!(s.heights, vec![0.0]);
        assert_eq!(s.iterations(), 0);
    }

    #[test]
    fn symmetric_sites_are_a_fixed_point() {
        let centers: Vec<HPoint> =
            (0..6).map(|i| HPoint::from_polar(0.8, PI / 3.0 * i as f64).unwrap()).collect();
        let domain = ConvexDomain::regular(6, 1.4).unwrap();
        let p = PlanarProblem::new(centers, domain).unwrap();
        let t = TargetMeasure::uniform(6, p.total_mass()).unwrap();
        let s = damped_newton(&p, &t, &NewtonConfig::default(), None).unwrap();
        assert!(s.iterations() <= 1);
        assert!(max_abs(&s.heights) < 1e-9);
    }

    #[test]
    fn rejects_bad_config() {
        let domain = ConvexDomain::regular(5, 1.0).unwrap();
        let p = PlanarProblem::new(vec![HPoint::APEX], domain).unwrap();
        let t = TargetMeasure::new(vec![p.total_mass()], p.total_mass()).unwrap();
        let cfg = NewtonConfig { lambda0: 1.5, ..Default::default() };
        assert!(matches!(damped_newton(&p, &t, &cfg, None), Err(SolveFailure { error: Error::Input(_), .. })));
    }
}
