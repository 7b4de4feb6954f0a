use std::collections::HashMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{edge_key, MetricMesh, Side};
use crate::lorentz::{DiskPoint, HPoint};
use crate::pipeline::Parametrization;
use crate::power::{ConvexDomain, Label, PowerDiagram};

/// Parse errors carry the path and serde's line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Input(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn disk(p: &HPoint) -> [f64; 2] {
    let d = p.to_disk();
    [d.u, d.v]
}

fn from_disk(p: [f64; 2]) -> Result<HPoint> {
    HPoint::from_disk(DiskPoint::new(p[0], p[1])?)
}

/// A site in the Poincaré disk with a geodesic radius (height `ln cosh r`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiteRecord {
    pub u: f64,
    pub v: f64,
    #[serde(default)]
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SitesFile {
    pub sites: Vec<SiteRecord>,
    /// Counter-clockwise convex polygon in disk coordinates; the convex hull
    /// of the sites when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<[f64; 2]>>,
    /// Triangles over the sites, for face-area target measures.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<[usize; 3]>>,
}

impl SitesFile {
    pub fn centers(&self) -> Result<Vec<HPoint>> {
        self.sites.iter().map(|s| from_disk([s.u, s.v])).collect()
    }

    pub fn heights(&self) -> Result<Vec<f64>> {
        self.sites
            .iter()
            .map(|s| {
                if s.radius >= 0.0 && s.radius.is_finite() {
                    Ok(s.radius.cosh().ln())
                } else {
                    Err(Error::Input(format!("site radius {} must be finite and nonnegative", s.radius)))
                }
            })
            .collect()
    }

    pub fn domain(&self) -> Result<ConvexDomain> {
        match &self.domain {
            Some(poly) => ConvexDomain::new(poly.iter().map(|&p| from_disk(p)).collect::<Result<_>>()?),
            None => ConvexDomain::hull_of(&self.centers()?),
        }
    }

    pub fn faces(&self) -> Result<&[[usize; 3]]> {
        let faces = self.faces.as_deref().ok_or_else(|| {
            Error::Input("face-area targets need a \"faces\" array in the sites file".into())
        })?;
        if let Some(v) = faces.iter().flatten().find(|&&v| v >= self.sites.len()) {
            return Err(Error::Input(format!("face vertex {v} out of range")));
        }
        Ok(faces)
    }
}

/// Per-site target weights, normalized to the domain mass on use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetFile {
    pub weights: Vec<f64>,
}

/// Hyperbolic metric of a cut-open mesh whose faces come from the mesh file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSidecar {
    pub genus: usize,
    /// `[a, b, length]` for every cut edge.
    pub lengths: Vec<(usize, usize, f64)>,
    pub surface_vertex: Vec<usize>,
    pub sides: Vec<Side>,
}

impl MetricSidecar {
    pub fn from_mesh(mesh: &MetricMesh) -> Self {
        let mut lengths: Vec<(usize, usize, f64)> = mesh.lengths.iter().map(|(&(a, b), &l)| (a, b, l)).collect();
        lengths.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        Self {
            genus: mesh.genus,
            lengths,
            surface_vertex: mesh.surface_vertex.clone(),
            sides: mesh.sides.clone(),
        }
    }

    pub fn into_mesh(self, faces: Vec<[usize; 3]>) -> Result<MetricMesh> {
        let mut lengths = HashMap::with_capacity(self.lengths.len());
        for (a, b, l) in self.lengths {
            if lengths.insert(edge_key(a, b), l).is_some() {
                return Err(Error::Input(format!("edge ({a}, {b}) listed twice")));
            }
        }
        MetricMesh::new(self.genus, faces, lengths, self.surface_vertex, self.sides)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpSite {
    pub u: f64,
    pub v: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpCell {
    pub site: usize,
    pub area: f64,
    /// Counter-clockwise, disk coordinates.
    pub vertices: Vec<[f64; 2]>,
    /// Site across edge `i` (from vertex `i` to `i + 1`); `None` on the domain boundary.
    pub neighbors: Vec<Option<usize>>,
}

/// Everything the renderer and downstream tools need from a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dump {
    pub kind: String,
    pub sites: Vec<DumpSite>,
    /// Boundary chains of the domain, each drawn as one geodesic path.
    pub domain: Vec<Vec<[f64; 2]>>,
    pub cells: Vec<DumpCell>,
    pub adjacency: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centroids: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_centroids: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub achieved: Option<Vec<f64>>,
    /// Factor applied to the user's weights to match the domain mass.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_inf: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tile_depth: Option<usize>,
    /// Row-major Lorentz matrices of the tiles drawn around the domain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tiles: Option<Vec<[f64; 9]>>,
}

impl Dump {
    fn from_diagram(kind: &str, pd: &PowerDiagram, domain: Vec<Vec<[f64; 2]>>) -> Self {
        let sites = pd
            .copies
            .canonical
            .iter()
            .map(|&c| {
                let [u, v] = disk(&pd.copies.points[c]);
                DumpSite { u, v, height: pd.heights[pd.copies.owner[c]] }
            })
            .collect();
        let cells = pd
            .cells
            .iter()
            .map(|cell| DumpCell {
                site: cell.site,
                area: cell.area,
                vertices: cell.vertices.iter().map(disk).collect(),
                neighbors: cell
                    .labels
                    .iter()
                    .map(|l| match l {
                        Label::Site(c) => Some(pd.copies.owner[*c]),
                        Label::Boundary(_) => None,
                    })
                    .collect(),
            })
            .collect();
        Self {
            kind: kind.into(),
            sites,
            domain,
            cells,
            adjacency: pd.adjacency(),
            centroids: None,
            reduced_centroids: None,
            target: None,
            achieved: None,
            scale_factor: None,
            iterations: None,
            residual_inf: None,
            genus: None,
            tile_depth: None,
            tiles: None,
        }
    }

    /// A diagram clipped to a convex domain.
    pub fn planar(kind: &str, pd: &PowerDiagram, domain: &ConvexDomain) -> Self {
        let v = domain.vertices();
        let chains = (0..v.len()).map(|i| vec![disk(&v[i]), disk(&v[(i + 1) % v.len()])]).collect();
        Self::from_diagram(kind, pd, chains)
    }

    /// Canonical cells on the fundamental domain, with the tiles of the patch.
    pub fn surface(p: &Parametrization) -> Self {
        let chains = p
            .domain
            .sides
            .iter()
            .map(|s| s.vertices.iter().map(|&v| disk(&p.domain.positions[v])).collect())
            .collect();
        let mut d = Self::from_diagram("parametrization", &p.diagram, chains);
        d.centroids = Some(p.centroids.iter().map(disk).collect());
        d.reduced_centroids = Some(p.reduced.iter().map(disk).collect());
        d.target = Some(p.target.clone());
        d.achieved = Some(p.achieved.clone());
        d.iterations = Some(p.log.len().saturating_sub(1));
        d.residual_inf = p.log.last().map(|r| r.residual_inf);
        d.genus = Some(p.genus);
        d.tile_depth = Some(p.tile_depth);
        d.tiles = Some(
            p.patch
                .elements
                .iter()
                .map(|m| {
                    let m = m.matrix();
                    std::array::from_fn(|k| m[(k / 3, k % 3)])
                })
                .collect(),
        );
        d
    }
}
