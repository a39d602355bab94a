pub mod cli;
pub mod error;
pub mod kernel;
pub mod lattice;
pub mod manhattan2d;
pub mod numeric;
pub mod pantograph;
pub mod partition;
pub mod potential;
pub mod rng;
pub mod sampling;
pub mod spectral1d;

pub use error::{EdmError, Result};
