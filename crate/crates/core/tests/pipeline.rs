mod common;

use common::rng;
use hyperot::fuchsian::{embed_domain, side_pairing_generators, TilePatch};
use hyperot::lorentz::{HPoint, LorentzIsometry};
use hyperot::pipeline::{parametrize, scale_to_gauss_bonnet, surface_faces, vertex_measure, ParametrizeConfig};
use hyperot::power::ConvexDomain;
use hyperot::solver::{cell_centroid, damped_newton, DiagramSource, NewtonConfig, PlanarProblem, TargetMeasure};
use hyperot::synth::{irregular_surface, regular_surface};
use rand::Rng;
use std::f64::consts::PI;

#[test]
fn irregular_genus_two_is_area_preserving() {
    let s = irregular_surface(2, 4, 3).unwrap();
    // The solver stops on the absolute residual; relative error below 1e-6
    // needs ε scaled by the smallest ν.
    let areas: Vec<f64> = (0..s.mesh.faces.len()).map(|f| s.mesh.face_area(f).unwrap()).collect();
    let areas = scale_to_gauss_bonnet(&areas, 2).unwrap();
    let nu = vertex_measure(&surface_faces(&s.mesh), &areas, s.mesh.num_surface_vertices()).unwrap();
    let min_nu = nu.iter().cloned().fold(f64::INFINITY, f64::min);
    let newton = NewtonConfig { eps: 1e-6 * min_nu, ..Default::default() };
    let out = parametrize(&s.mesh, None, &ParametrizeConfig { newton, tile_depth: None }).unwrap();
    let total: f64 = out.target.iter().sum();
    assert!((total - 4.0 * PI).abs() <= 1e-9 * 4.0 * PI);
    assert!(out.max_relative_error() < 1e-6, "{:e}", out.max_relative_error());
    let achieved: f64 = out.achieved.iter().sum();
    assert!((achieved - 4.0 * PI).abs() <= 1e-9 * 4.0 * PI);
    assert_eq!(out.centroids.len(), s.mesh.num_surface_vertices());
    for q in &out.reduced {
        assert!(out.domain.contains(q, 1e-9));
    }
    for (p, q) in out.disk().iter().zip(&out.centroids) {
        assert!((p.u - q.to_disk().u).abs() < 1e-15 && p.norm() < 1.0);
    }
}

#[test]
fn vertex_measure_sums_to_face_area() {
    let s = regular_surface(2, 6).unwrap();
    let areas: Vec<f64> = (0..s.mesh.faces.len()).map(|f| s.mesh.face_area(f).unwrap()).collect();
    let nu = vertex_measure(&surface_faces(&s.mesh), &areas, s.mesh.num_surface_vertices()).unwrap();
    let (a, b): (f64, f64) = (areas.iter().sum(), nu.iter().sum());
    assert!((a - b).abs() <= 1e-12 * a);
}

/// `min_γ d(γ p, q)` over a patch.
fn orbit_distance(ball: &TilePatch, p: &HPoint, q: &HPoint) -> f64 {
    ball.elements.iter().map(|m| m.apply(p).distance(q)).fold(f64::INFINITY, f64::min)
}

#[test]
fn symmetric_octagon_centroids_keep_the_symmetry() {
    // Rotation by π about the center maps side a1 to a2 and b1 to b2, so it
    // descends to an isometry of the regular octagon surface.
    // The fan subdivision is symmetric too, so ν from face areas is as well.
    let s = regular_surface(2, 3).unwrap();
    let n = s.mesh.num_surface_vertices();
    let cfg = ParametrizeConfig { newton: NewtonConfig { eps: 1e-10, ..Default::default() }, tile_depth: None };
    let out = parametrize(&s.mesh, None, &cfg).unwrap();
    let dom = embed_domain(&s.mesh).unwrap();
    let group = side_pairing_generators(&dom).unwrap();
    let ball = TilePatch::ball(&group, &dom, 2.0 * dom.radius);
    let rot = LorentzIsometry::rotation(PI);
    let mut matched = 0;
    for i in 0..n {
        let image = rot.apply(&out.sites[i]);
        let j = (0..n)
            .min_by(|&a, &b| orbit_distance(&ball, &image, &out.sites[a]).total_cmp(&orbit_distance(&ball, &image, &out.sites[b])))
            .unwrap();
        assert!(orbit_distance(&ball, &image, &out.sites[j]) < 1e-6, "site {i} has no rotated partner");
        let e = orbit_distance(&ball, &rot.apply(&out.centroids[i]), &out.centroids[j]);
        assert!(e < 1e-6, "centroid {i} vs {j}: {e:e}");
        matched += 1;
    }
    assert_eq!(matched, n);
}

#[test]
fn planar_centroids_are_equivariant() {
    let mut r = rng(21);
    let centers: Vec<HPoint> = (0..12)
        .map(|_| HPoint::from_polar(1.2 * r.gen::<f64>().sqrt(), r.gen_range(0.0..2.0 * PI)).unwrap())
        .collect();
    let domain = ConvexDomain::regular(7, 1.8).unwrap();
    let weights: Vec<f64> = (0..12).map(|_| r.gen_range(0.5..1.5)).collect();
    let cfg = NewtonConfig { eps: 1e-11, ..Default::default() };
    let solve = |centers: Vec<HPoint>, domain: ConvexDomain| {
        let problem = PlanarProblem::new(centers, domain).unwrap();
        let (target, _) = TargetMeasure::normalized(weights.clone(), problem.total_mass()).unwrap();
        let sol = damped_newton(&problem, &target, &cfg, None).unwrap();
        sol.diagram.cells.iter().map(|c| cell_centroid(c).unwrap()).collect::<Vec<_>>()
    };
    let before = solve(centers.clone(), domain.clone());
    let t = LorentzIsometry::translation_to(&HPoint::from_polar(0.9, 1.1).unwrap())
        .compose(&LorentzIsometry::rotation(0.4));
    let moved = ConvexDomain::new(domain.vertices().iter().map(|v| t.apply(v)).collect()).unwrap();
    let after = solve(centers.iter().map(|c| t.apply(c)).collect(), moved);
    for (a, b) in before.iter().zip(&after) {
        let e = t.apply(a).distance(b);
        assert!(e < 1e-7, "{e:e}");
    }
}

#[test]
fn cut_vertex_centroids_follow_the_side_pairing() {
    let s = regular_surface(2, 3).unwrap();
    let p = parametrize(&s.mesh, None, &ParametrizeConfig::default()).unwrap();
    let per_cut = p.cut_vertex_centroids(&s.mesh.surface_vertex);
    assert_eq!(per_cut.len(), s.mesh.surface_vertex.len());
    let mut shared = 0;
    for (v, &sv) in s.mesh.surface_vertex.iter().enumerate() {
        let at = &p.domain.positions[v];
        // The element taking the site onto this cut vertex takes the center onto this copy.
        let m = p.patch.elements.iter().find(|m| m.apply(&p.sites[sv]).distance(at) < 1e-8).expect("cut vertex in the orbit");
        assert!(m.apply(&p.centroids[sv]).distance(&per_cut[v]) < 1e-9);
        if p.domain.positions[v].distance(&p.sites[sv]) > 1e-6 {
            shared += 1;
        }
    }
    assert!(shared > 0, "no cut vertex away from its site");
}
