//! Semi-discrete transport: targets, derivatives, energy and damped Newton.

pub mod derivatives;
pub mod energy;
pub mod linalg;
pub mod newton;
pub mod target;

pub use derivatives::{gradient, hessian};
pub use energy::{
    cell_centroid, cell_cost, dual_functional, kantorovich_energy, total_cost, transport_cost,
};
pub use linalg::{solve_constrained, SymmetricSparse};
pub use newton::{
    damped_newton, DiagramSource, IterationRecord, NewtonConfig, PlanarProblem, SolveFailure,
    Solution,
};
pub use target::{TargetMeasure, TargetMode};
