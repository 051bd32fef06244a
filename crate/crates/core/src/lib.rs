//! Multipartite entanglement analysis on dense state vectors and density operators.

pub mod bipartite;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod info;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod mps;
pub mod protocols;
pub mod random;
pub mod stabilizer;
pub mod tensor;
pub mod threequbit;
pub mod tolerance;
pub mod witness;

pub use error::{Error, Result};
pub use tensor::{DensityOperator, PartialTrace, StateVector, SubsystemSet};
pub use tolerance::Tolerances;
