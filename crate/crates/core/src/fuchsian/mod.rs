//! Closed hyperbolic surfaces: fundamental domains, side pairings, tilings
//! and diagrams in the universal cover.

mod cover;
mod embed;
mod group;
mod mesh;
mod tiling;

pub use cover::SurfaceProblem;
pub use embed::{embed_domain, embed_faces, FundamentalDomain, DRIFT_TOLERANCE, LENGTH_TOLERANCE};
pub use group::{side_pairing_generators, FuchsianGroup, PAIRING_TOLERANCE};
pub use mesh::{edge_key, MetricMesh, Side, SideLabel};
pub use tiling::{auto_tiling, build_tiling, covering_reduce, TilePatch};
