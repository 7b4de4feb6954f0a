//! Semi-discrete optimal transport on the hyperbolic plane and on compact
//! hyperbolic surfaces, via power diagrams in the hyperboloid model.

pub mod error;
pub mod fuchsian;
pub mod io;
pub mod lorentz;
pub mod pipeline;
pub mod power;
pub mod quadrature;
pub mod solver;
pub mod synth;

pub use error::{Error, Result};
