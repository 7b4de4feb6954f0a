//! Area-preserving parametrization of a closed surface of genus at least two.

use crate::error::{Error, Result};
use crate::fuchsian::{
    auto_tiling, build_tiling, covering_reduce, embed_domain, side_pairing_generators, FuchsianGroup,
    FundamentalDomain, MetricMesh, SurfaceProblem, TilePatch,
};
use crate::lorentz::{DiskPoint, HPoint};
use crate::power::PowerDiagram;
use crate::solver::{cell_centroid, damped_newton, IterationRecord, NewtonConfig, SolveFailure, TargetMeasure};

/// Scales positive face areas so they sum to `4π(g - 1)`.
pub fn scale_to_gauss_bonnet(face_areas: &[f64], genus: usize) -> Result<Vec<f64>> {
    if genus < 2 {
        return Err(Error::Input(format!("genus must be at least 2, got {genus}")));
    }
    if face_areas.iter().any(|a| !(*a >= 0.0) || !a.is_finite()) {
        return Err(Error::Degenerate("face areas must be finite and nonnegative".into()));
    }
    let total: f64 = face_areas.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Degenerate("mesh has zero total area".into()));
    }
    let s = 4.0 * std::f64::consts::PI * (genus as f64 - 1.0) / total;
    Ok(face_areas.iter().map(|a| a * s).collect())
}

/// One third of the area of every incident face.
pub fn vertex_measure(faces: &[[usize; 3]], face_areas: &[f64], num_vertices: usize) -> Result<Vec<f64>> {
    if faces.len() != face_areas.len() {
        return Err(Error::Input(format!("{} faces but {} areas", faces.len(), face_areas.len())));
    }
    let mut nu = vec![0.0; num_vertices];
    for (f, &a) in faces.iter().zip(face_areas) {
        for &v in f {
            *nu.get_mut(v).ok_or_else(|| Error::Input(format!("face vertex {v} out of range")))? += a / 3.0;
        }
    }
    if let Some(v) = nu.iter().position(|m| !(*m > 0.0)) {
        return Err(Error::InvalidTarget(format!("vertex {v} has zero measure")));
    }
    Ok(nu)
}

#[derive(Debug, Clone, Copy)]
pub struct ParametrizeConfig {
    pub newton: NewtonConfig,
    /// Fixed tiling depth; automatic when `None`.
    pub tile_depth: Option<usize>,
}

impl Default for ParametrizeConfig {
    fn default() -> Self {
        Self { newton: NewtonConfig::default(), tile_depth: None }
    }
}

#[derive(Debug, Clone)]
pub struct Parametrization {
    pub genus: usize,
    pub domain: FundamentalDomain,
    pub group: FuchsianGroup,
    /// Tiling at depth `tile_depth`, containing the domain.
    pub patch: TilePatch,
    pub tile_depth: usize,
    /// Site of each surface vertex, inside the closed fundamental domain.
    pub sites: Vec<HPoint>,
    /// Area-weighted center of each cell, next to its site in the cover.
    pub centroids: Vec<HPoint>,
    /// Centers reduced into the closed fundamental domain.
    pub reduced: Vec<HPoint>,
    pub target: Vec<f64>,
    pub achieved: Vec<f64>,
    pub heights: Vec<f64>,
    pub diagram: PowerDiagram,
    pub log: Vec<IterationRecord>,
}

impl Parametrization {
    pub fn disk(&self) -> Vec<DiskPoint> {
        self.centroids.iter().map(|p| p.to_disk()).collect()
    }

    pub fn max_relative_error(&self) -> f64 {
        self.achieved.iter().zip(&self.target).fold(0.0, |m, (w, n)| f64::max(m, (w - n).abs() / n))
    }

    /// One center per cut vertex: the center of its surface vertex moved by
    /// the tile that carries the site onto the cut vertex, so texture
    /// coordinates stay continuous across the cut.
    pub fn cut_vertex_centroids(&self, surface_vertex: &[usize]) -> Vec<HPoint> {
        surface_vertex
            .iter()
            .enumerate()
            .map(|(v, &s)| {
                let at = &self.domain.positions[v];
                let gap = |m: &crate::lorentz::LorentzIsometry| m.apply(&self.sites[s]).distance(at);
                let best = self
                    .patch
                    .elements
                    .iter()
                    .min_by(|a, b| gap(a).total_cmp(&gap(b)))
                    .expect("a patch contains the identity");
                best.apply(&self.centroids[s])
            })
            .collect()
    }
}

/// Surface faces: cut faces mapped to surface vertices.
pub fn surface_faces(mesh: &MetricMesh) -> Vec<[usize; 3]> {
    mesh.faces.iter().map(|f| f.map(|v| mesh.surface_vertex[v])).collect()
}

/// One embedded position per surface vertex (its first cut vertex).
pub fn surface_sites(mesh: &MetricMesh, dom: &FundamentalDomain) -> Vec<HPoint> {
    let mut sites: Vec<Option<HPoint>> = vec![None; mesh.num_surface_vertices()];
    for (v, &s) in mesh.surface_vertex.iter().enumerate() {
        sites[s].get_or_insert(dom.positions[v]);
    }
    sites.into_iter().map(|p| p.expect("every surface vertex has a cut vertex")).collect()
}

/// Embeds the cut mesh, builds the group and a covering tiling, and solves
/// for cells of area `ν_i`, one third of the incident face areas after
/// scaling to `4π(g - 1)`. `face_areas` are per cut face; hyperbolic face
/// areas of the metric are used when absent.
pub fn parametrize(
    mesh: &MetricMesh,
    face_areas: Option<&[f64]>,
    cfg: &ParametrizeConfig,
) -> Result<Parametrization, SolveFailure> {
    let areas = match face_areas {
        Some(a) => a.to_vec(),
        None => (0..mesh.faces.len()).map(|f| mesh.face_area(f)).collect::<Result<_>>()?,
    };
    let areas = scale_to_gauss_bonnet(&areas, mesh.genus)?;
    let nu = vertex_measure(&surface_faces(mesh), &areas, mesh.num_surface_vertices())?;
    parametrize_with_measure(mesh, nu, cfg)
}

/// [`parametrize`] with a given per-surface-vertex measure of total `4π(g - 1)`.
pub fn parametrize_with_measure(
    mesh: &MetricMesh,
    nu: Vec<f64>,
    cfg: &ParametrizeConfig,
) -> Result<Parametrization, SolveFailure> {
    cfg.newton.validate()?;
    if nu.len() != mesh.num_surface_vertices() {
        return Err(Error::InvalidTarget(format!(
            "{} target masses for {} surface vertices",
            nu.len(),
            mesh.num_surface_vertices()
        ))
        .into());
    }
    let dom = embed_domain(mesh)?;
    let group = side_pairing_generators(&dom)?;
    let patch = match cfg.tile_depth {
        Some(l) => build_tiling(&group, &dom, l)?,
        None => auto_tiling(&group, &dom, 1)?,
    };
    let tile_depth = patch.depth;
    let sites = surface_sites(mesh, &dom);
    let problem = SurfaceProblem::new(dom.clone(), group, patch, &sites)?;
    let target = TargetMeasure::new(nu, dom.area())?;
    let solution = damped_newton(&problem, &target, &cfg.newton, None)?;
    let fail = |error| SolveFailure { error, log: solution.log.clone() };
    let centroids =
        solution.diagram.cells.iter().map(cell_centroid).collect::<Result<Vec<_>>>().map_err(fail)?;
    let reduced = centroids
        .iter()
        .map(|q| covering_reduce(problem.patch(), &dom, q))
        .collect::<Result<Vec<_>>>()
        .map_err(fail)?;
    Ok(Parametrization {
        genus: mesh.genus,
        domain: dom,
        group: problem.group().clone(),
        patch: problem.patch().clone(),
        tile_depth,
        sites: problem.sites().to_vec(),
        centroids,
        reduced,
        target: target.masses().to_vec(),
        achieved: solution.diagram.areas(),
        heights: solution.heights,
        diagram: solution.diagram,
        log: solution.log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_bonnet_scaling() {
        let a = scale_to_gauss_bonnet(&[1.0, 2.0, 3.0], 2).unwrap();
        assert!((a.iter().sum::<f64>() - 4.0 * PI).abs() < 1e-12);
        let b = scale_to_gauss_bonnet(&a, 2).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-15));
        let c = scale_to_gauss_bonnet(&[1.0; 5], 3).unwrap();
        assert!((c.iter().sum::<f64>() - 8.0 * PI).abs() < 1e-12);
        assert!(matches!(scale_to_gauss_bonnet(&[0.0, 0.0], 2), Err(Error::Degenerate(_))));
    }

    #[test]
    fn thirds_of_face_areas() {
        let nu = vertex_measure(&[[0, 1, 2]], &[0.9], 3).unwrap();
        assert!(nu.iter().all(|m| (m - 0.3).abs() < 1e-15));
        // A valence-6 vertex among unit faces.
        let faces: Vec<[usize; 3]> = (0..6).map(|k| [0, 1 + k, 1 + (k + 1) % 6]).collect();
        let nu = vertex_measure(&faces, &[1.0; 6], 7).unwrap();
        assert!((nu[0] - 2.0).abs() < 1e-15);
        assert!(matches!(vertex_measure(&[[0, 1, 2]], &[1.0], 4), Err(Error::InvalidTarget(_))));
    }
}
