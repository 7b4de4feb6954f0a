//! Weighted sites, regular triangulations and power diagrams.

pub mod diagram;
pub mod domain;
pub mod hull;
pub mod site;

pub use diagram::{hessian_edge_geometry, Cell, Clip, CopySet, EdgeGeometry, Label, PowerDiagram};
pub use domain::ConvexDomain;
pub use hull::RegularTriangulation;
pub use site::{dual_vertex, power_center, power_distance, GeodesicCircle, PowerCenter, Site};
