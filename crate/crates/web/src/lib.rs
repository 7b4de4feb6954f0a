//! Browser bindings: each operation returns an SVG of the Poincaré disk and a
//! one-line summary.

use hyperot::io::{render_svg, Dump, RenderOptions};
use hyperot::lorentz::{DiskPoint, HPoint};
use hyperot::pipeline::{parametrize, vertex_measure, ParametrizeConfig};
use hyperot::power::ConvexDomain;
use hyperot::solver::{cell_centroid, damped_newton, DiagramSource, NewtonConfig, PlanarProblem, TargetMeasure};
use hyperot::synth::{disk_face_areas, hex_disk, hyperbolic_face_areas, irregular_surface, regular_surface};
use wasm_bindgen::prelude::*;

#[wasm_bindgen(getter_with_clone)]
pub struct Run {
    pub svg: String,
    pub summary: String,
}

/// Circumradius of the octagon that clips the interactive diagram.
pub const DOMAIN_RADIUS: f64 = 2.5;

fn disk(p: &HPoint) -> [f64; 2] {
    let d = p.to_disk();
    [d.u, d.v]
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Power diagram of sites `coords = [u0, v0, u1, v1, …]` with geodesic radii,
/// clipped to a fixed octagon.
pub fn power_diagram(coords: &[f64], radii: &[f64]) -> Result<Run, String> {
    if coords.len() != 2 * radii.len() {
        return Err(format!("{} coordinates for {} radii", coords.len(), radii.len()));
    }
    let domain = ConvexDomain::regular(8, DOMAIN_RADIUS).map_err(err)?;
    let mut centers = Vec::new();
    let mut heights = Vec::new();
    for (c, &r) in coords.chunks(2).zip(radii) {
        let p = HPoint::from_disk(DiskPoint::new(c[0], c[1]).map_err(err)?).map_err(err)?;
        if domain.contains(&p) {
            centers.push(p);
            heights.push(r.max(0.0).cosh().ln());
        }
    }
    if centers.is_empty() {
        return Err("click inside the octagon to add sites".into());
    }
    let problem = PlanarProblem::new(centers, domain).map_err(err)?;
    let pd = problem.diagram(&heights).map_err(err)?;
    let dump = Dump::planar("power-diagram", &pd, &problem.domain);
    let hidden = pd.cells.iter().filter(|c| c.degenerate).count();
    Ok(Run {
        svg: render_svg(&dump, &RenderOptions::default()),
        summary: format!("{} sites, {} with empty cells", pd.num_sites(), hidden),
    })
}

/// The hexagonal disk experiment: solve for the Euclidean (`euclidean`) or
/// hyperbolic (`hyperbolic`) face-area target and draw cells with centroids.
pub fn solve_disk(target: &str, rings: usize) -> Result<Run, String> {
    let (points, faces) = hex_disk(rings, 0.8 / rings.max(1) as f64).map_err(err)?;
    let centers: Vec<HPoint> = points.iter().map(|&p| HPoint::from_disk(p)).collect::<Result<_, _>>().map_err(err)?;
    let problem = PlanarProblem::with_hull(centers.clone()).map_err(err)?;
    let areas = match target {
        "euclidean" => disk_face_areas(&points, &faces),
        "hyperbolic" => hyperbolic_face_areas(&centers, &faces),
        other => return Err(format!("unknown target '{other}'")),
    };
    let nu = vertex_measure(&faces, &areas, points.len()).map_err(err)?;
    let (target, _) = TargetMeasure::normalized(nu, problem.total_mass()).map_err(err)?;
    let sol = damped_newton(&problem, &target, &NewtonConfig::default(), None).map_err(err)?;
    let mut dump = Dump::planar("transport", &sol.diagram, &problem.domain);
    dump.centroids =
        Some(sol.diagram.cells.iter().map(|c| cell_centroid(c).map(|p| disk(&p))).collect::<Result<_, _>>().map_err(err)?);
    let a = sol.diagram.areas();
    let ratio = a.iter().cloned().fold(0.0, f64::max) / a.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(Run {
        svg: render_svg(&dump, &RenderOptions::default()),
        summary: format!(
            "{} sites, {} iterations, residual {:.2e}, max/min cell area {:.3}",
            points.len(),
            sol.iterations(),
            sol.residual(),
            ratio
        ),
    })
}

/// Area-preserving decomposition of a synthetic genus `g` surface; `seed = 0`
/// keeps the regular 4g-gon. `cover` draws the surrounding tiles too.
pub fn parametrize_surface(genus: usize, subdivision: usize, seed: u32, cover: bool) -> Result<Run, String> {
    if !(2..=3).contains(&genus) || !(1..=8).contains(&subdivision) {
        return Err("genus 2 or 3 and subdivision 1 to 8".into());
    }
    let s = if seed == 0 {
        regular_surface(genus, subdivision)
    } else {
        irregular_surface(genus, subdivision, seed as u64)
    }
    .map_err(err)?;
    let p = parametrize(&s.mesh, None, &ParametrizeConfig::default()).map_err(|f| f.error.to_string())?;
    let dump = Dump::surface(&p);
    let opts = RenderOptions { tiles: cover, ..Default::default() };
    Ok(Run {
        svg: render_svg(&dump, &opts),
        summary: format!(
            "genus {}, {} vertices, tiling depth {} ({} tiles), {} iterations, max relative error {:.2e}",
            p.genus,
            p.sites.len(),
            p.tile_depth,
            p.patch.len(),
            p.log.len() - 1,
            p.max_relative_error()
        ),
    })
}

#[wasm_bindgen(js_name = powerDiagram)]
pub fn power_diagram_js(coords: Vec<f64>, radii: Vec<f64>) -> Result<Run, JsError> {
    power_diagram(&coords, &radii).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = solveDisk)]
pub fn solve_disk_js(target: &str, rings: usize) -> Result<Run, JsError> {
    solve_disk(target, rings).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = parametrizeSurface)]
pub fn parametrize_surface_js(genus: usize, subdivision: usize, seed: u32, cover: bool) -> Result<Run, JsError> {
    parametrize_surface(genus, subdivision, seed, cover).map_err(|e| JsError::new(&e))
}
