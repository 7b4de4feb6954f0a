mod common;

use common::{build, rng, sample_domain, test_surfaces};
use hyperot::fuchsian::*;
use hyperot::lorentz::LorentzIsometry;
use hyperot::solver::{damped_newton, DiagramSource, NewtonConfig, TargetMeasure};
use hyperot::synth::regular_surface;
use hyperot::Error;
use rand::Rng;

#[test]
fn edge_lengths_are_realized() {
    for (name, b) in test_surfaces() {
        let worst = b
            .surface
            .mesh
            .lengths
            .iter()
            .map(|(&(u, v), &l)| (b.domain.positions[u].distance(&b.domain.positions[v]) - l).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-7, "{name}: length error {worst:e}");
    }
}

#[test]
fn generators_are_isometries_and_pair_sides() {
    for (name, b) in test_surfaces() {
        for m in &b.patch.elements {
            assert!(m.residual() <= 1e-8, "{name}: residual {:e}", m.residual());
        }
        for k in 0..b.group.num_generators() {
            let label = SideLabel { generator: k, inverse: false };
            let side = b.domain.sides.iter().find(|s| s.label == label).unwrap();
            let partner = b.domain.sides.iter().find(|s| s.label == SideLabel { generator: k, inverse: true }).unwrap();
            let m = b.group.generator(k);
            let p = &b.domain.positions;
            let first = m.apply(&p[side.vertices[0]]).distance(&p[*partner.vertices.last().unwrap()]);
            let last = m.apply(&p[*side.vertices.last().unwrap()]).distance(&p[partner.vertices[0]]);
            assert!(first.max(last) <= 1e-6, "{name}: {label} endpoints off by {:e}", first.max(last));
        }
        let rel = b.group.relator().distance(&LorentzIsometry::identity());
        assert!(rel < 1e-5, "{name}: relator {rel:e}");
    }
}

#[test]
fn generator_moves_the_domain_off_itself() {
    let b = build(regular_surface(2, 2).unwrap());
    for k in 0..b.group.num_generators() {
        let c = b.group.generator(k).apply(&b.domain.center);
        assert!(!b.domain.contains(&c, 1e-9));
    }
}

#[test]
fn mismatched_side_lengths_are_rejected() {
    let s = regular_surface(2, 2).unwrap();
    let dom = embed_domain(&s.mesh).unwrap();
    let a1 = dom.sides.iter().find(|s| s.label.to_string() == "a1").unwrap().vertices.clone();
    // Moving a corner changes the side length; moving an interior chain
    // vertex keeps it but breaks the chain correspondence.
    for v in [a1[0], a1[1]] {
        let mut bad = dom.clone();
        bad.positions[v] = LorentzIsometry::boost_x(1e-3).apply(&bad.positions[v]);
        assert!(matches!(side_pairing_generators(&bad), Err(Error::Pairing(_))));
    }
}

#[test]
fn tiling_depths() {
    let b = build(regular_surface(2, 2).unwrap());
    let zero = TilePatch::generate(&b.group, &b.domain, 0);
    assert_eq!(zero.len(), 1);
    assert!(zero.elements[0].distance(&LorentzIsometry::identity()) < 1e-15);
    assert!(matches!(build_tiling(&b.group, &b.domain, 0), Err(Error::InsufficientTiling(0))));
    let one = TilePatch::generate(&b.group, &b.domain, 1);
    assert!(one.len() <= 9, "{} tiles at depth 1", one.len());
}

#[test]
fn auto_selected_depth_contains_the_domain() {
    for (name, b) in test_surfaces() {
        assert!(b.patch.covers_domain(&b.domain), "{name}");
        assert!(b.patch.depth >= 1 && b.patch.depth <= 2 * b.domain.genus, "{name}: depth {}", b.patch.depth);
        if b.patch.depth > 1 {
            let below = TilePatch::generate(&b.group, &b.domain, b.patch.depth - 1);
            assert!(!below.covers_domain(&b.domain), "{name}: smaller depth already covers");
        }
    }
}

#[test]
fn covering_reduce_round_trip() {
    for (name, b) in test_surfaces() {
        let mut r = rng(11);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let y = sample_domain(&b.domain, &mut r);
            let t = r.gen_range(0..b.patch.len());
            let x = b.patch.elements[t].apply(&y);
            let (s, z) = b.patch.locate(&b.domain, &x, 1e-12).expect("inside the patch");
            assert!(b.domain.contains(&z, 1e-9), "{name}: reduced point outside the domain");
            worst = worst.max(b.patch.elements[s].apply(&z).distance(&x));
            worst = worst.max(z.distance(&y));
            let again = covering_reduce(&b.patch, &b.domain, &z).unwrap();
            assert!(again.distance(&z) < 1e-15, "{name}: not idempotent");
        }
        assert!(worst <= 1e-8, "{name}: round trip error {worst:e}");
    }
}

#[test]
fn generator_image_reduces_back() {
    let b = build(regular_surface(2, 2).unwrap());
    let mut r = rng(3);
    for _ in 0..50 {
        let p = sample_domain(&b.domain, &mut r);
        let x = b.group.generator(0).apply(&p);
        let back = covering_reduce(&b.patch, &b.domain, &x).unwrap();
        assert!(back.distance(&p) <= 1e-8);
    }
    // Points beyond the patch are pulled back through the orbit; at these
    // distances the coordinates carry about 1e-8 of rounding.
    let ball = TilePatch::ball(&b.group, &b.domain, 5.0);
    let mut outside = 0;
    for m in &ball.elements {
        let p = sample_domain(&b.domain, &mut r);
        let x = m.apply(&p);
        if b.patch.locate(&b.domain, &x, 1e-12).is_some() {
            continue;
        }
        outside += 1;
        let back = covering_reduce(&b.patch, &b.domain, &x).unwrap();
        assert!(back.distance(&p) <= 1e-7, "{:e}", back.distance(&p));
    }
    assert!(outside > 50, "{outside} points outside the patch");
}

fn surface_problem(b: &common::Built) -> SurfaceProblem {
    let sites = hyperot::pipeline::surface_sites(&b.surface.mesh, &b.domain);
    SurfaceProblem::new(b.domain.clone(), b.group.clone(), b.patch.clone(), &sites).unwrap()
}

#[test]
fn surface_cells_tile_the_surface() {
    for (name, b) in test_surfaces() {
        let problem = surface_problem(&b);
        let n = problem.num_sites();
        let total = 4.0 * std::f64::consts::PI * (b.domain.genus as f64 - 1.0);
        assert!((problem.total_mass() - total).abs() < 1e-9 * total);
        let mut r = rng(5);
        for trial in 0..3 {
            let heights: Vec<f64> = (0..n).map(|_| if trial == 0 { 0.0 } else { r.gen_range(-0.1..0.1) }).collect();
            let pd = problem.diagram(&heights).unwrap();
            let sum: f64 = pd.areas().iter().sum();
            assert!((sum - total).abs() <= 1e-9 * total, "{name}: areas sum to {sum}");
        }
    }
}

#[test]
fn surface_cells_match_brute_force_argmin() {
    let b = build(regular_surface(2, 2).unwrap());
    let problem = surface_problem(&b);
    let n = problem.num_sites();
    let mut r = rng(8);
    let heights: Vec<f64> = (0..n).map(|_| r.gen_range(-0.1..0.1)).collect();
    let pd = problem.diagram(&heights).unwrap();
    let copies = problem.copies(2.0 * b.domain.radius);
    let ball = TilePatch::ball(&b.group, &b.domain, 2.0 * b.domain.radius);
    let mut agree = 0;
    for _ in 0..500 {
        let x = sample_domain(&b.domain, &mut r);
        let (best, second) = copies.points.iter().zip(&copies.owner).fold(
            ((f64::INFINITY, usize::MAX), f64::INFINITY),
            |(best, second), (y, &i)| {
                let p = -x.inner(y) * (-heights[i]).exp();
                if p < best.0 {
                    ((p, i), best.0)
                } else {
                    (best, second.min(p))
                }
            },
        );
        if (second - best.0) / best.0 < 1e-9 {
            continue;
        }
        let cell = &pd.cells[best.1];
        let hit = ball.elements.iter().any(|m| cell.contains_klein(m.inverse().apply(&x).to_klein(), 1e-12));
        assert!(hit, "no translate of cell {} contains the sample", best.1);
        agree += 1;
    }
    assert!(agree > 450);
}

#[test]
fn genus_three_converges() {
    let b = build(regular_surface(3, 2).unwrap());
    let problem = surface_problem(&b);
    let n = problem.num_sites();
    let mut r = rng(2);
    let weights: Vec<f64> = (0..n).map(|_| r.gen_range(0.8..1.2)).collect();
    let (target, _) = TargetMeasure::normalized(weights, problem.total_mass()).unwrap();
    let cfg = NewtonConfig::default();
    let sol = damped_newton(&problem, &target, &cfg, None).unwrap();
    assert!(sol.residual() < cfg.eps);
    for rec in &sol.log {
        assert!((rec.total_area - problem.total_mass()).abs() <= 1e-9 * problem.total_mass());
    }
}
