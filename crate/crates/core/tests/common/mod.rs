#![allow(dead_code)]

use hyperot::lorentz::HPoint;
use hyperot::power::ConvexDomain;
use hyperot::solver::{DiagramSource, PlanarProblem, TargetMeasure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `k` sites scattered in a disk of hyperbolic radius 1.3 inside a regular
/// octagon of circumradius 2, with random admissible heights.
pub fn planar_instance(k: usize, seed: u64) -> (PlanarProblem, Vec<f64>, TargetMeasure) {
    let mut r = rng(seed);
    let domain = ConvexDomain::regular(8, 2.0).unwrap();
    loop {
        let centers: Vec<HPoint> = (0..k)
            .map(|_| {
                let rad = 1.3 * r.gen::<f64>().sqrt();
                HPoint::from_polar(rad, r.gen_range(0.0..std::f64::consts::TAU)).unwrap()
            })
            .collect();
        let Ok(problem) = PlanarProblem::new(centers, domain.clone()) else { continue };
        let heights: Vec<f64> = (0..k).map(|_| r.gen_range(-0.3..0.3)).collect();
        let Ok(pd) = problem.diagram(&heights) else { continue };
        if pd.cells.iter().any(|c| c.area < 0.05) {
            continue;
        }
        let target = TargetMeasure::uniform(k, problem.total_mass()).unwrap();
        return (problem, heights, target);
    }
}

/// Random sites in the radius-2 octagon with heights in ±0.05; only
/// diagrams with a degenerate cell are rejected.
#[allow(dead_code)]
pub fn admissible_instance(k: usize, seed: u64) -> (PlanarProblem, Vec<f64>) {
    let mut r = rng(seed);
    let domain = ConvexDomain::regular(8, 2.0).unwrap();
    loop {
        let centers: Vec<HPoint> = (0..k)
            .map(|_| HPoint::from_polar(1.3 * r.gen::<f64>().sqrt(), r.gen_range(0.0..std::f64::consts::TAU)).unwrap())
            .collect();
        let Ok(problem) = PlanarProblem::new(centers, domain.clone()) else { continue };
        let heights: Vec<f64> = (0..k).map(|_| r.gen_range(-0.05..0.05)).collect();
        match problem.diagram(&heights) {
            Ok(pd) if pd.first_degenerate().is_none() => return (problem, heights),
            _ => continue,
        }
    }
}

use hyperot::fuchsian::{auto_tiling, embed_domain, side_pairing_generators, FuchsianGroup, FundamentalDomain, TilePatch};
use hyperot::synth::{irregular_surface, regular_surface, SyntheticSurface};

pub struct Built {
    pub surface: SyntheticSurface,
    pub domain: FundamentalDomain,
    pub group: FuchsianGroup,
    pub patch: TilePatch,
}

pub fn build(surface: SyntheticSurface) -> Built {
    let domain = embed_domain(&surface.mesh).unwrap();
    let group = side_pairing_generators(&domain).unwrap();
    let patch = auto_tiling(&group, &domain, 1).unwrap();
    Built { surface, domain, group, patch }
}

/// Regular octagon, irregular genus 2 and regular genus 3, small meshes.
pub fn test_surfaces() -> Vec<(&'static str, Built)> {
    vec![
        ("regular genus 2", build(regular_surface(2, 3).unwrap())),
        ("irregular genus 2", build(irregular_surface(2, 4, 7).unwrap())),
        ("regular genus 3", build(regular_surface(3, 2).unwrap())),
    ]
}

/// Uniform sample of the domain by rejection in the Klein disk.
pub fn sample_domain(dom: &FundamentalDomain, r: &mut ChaCha8Rng) -> HPoint {
    let k_max = dom.radius.tanh();
    loop {
        let k = [r.gen_range(-k_max..k_max), r.gen_range(-k_max..k_max)];
        if k[0] * k[0] + k[1] * k[1] < 1.0 && dom.contains_klein(k, 0.0) {
            return HPoint::from_klein(k).unwrap();
        }
    }
}
