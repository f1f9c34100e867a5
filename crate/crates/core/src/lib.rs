//! Density estimation by evolving the heat equation from a sum of point masses.
//!
//! A 1D sample is projected onto P1 finite elements and diffused with implicit
//! Euler. Two boundary treatments are available: homogeneous Neumann, which
//! conserves total mass, and a nonlocal condition that conserves both mass and
//! the first moment (the sample mean).

pub mod assembly;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod initial_condition;
pub mod mesh;
pub mod oracle;
pub mod solver;

pub use assembly::{assemble_mass, assemble_stiffness, BcKind, BcOperator, SymTridiagonal};
pub use diagnostics::{discrete_mass, discrete_mean, DiagnosticsRecord};
pub use error::{Error, Result};
pub use initial_condition::{
    generate_uniform, histogram, load_sample, project_deltas, CoefficientVector, DataSample,
};
pub use mesh::Mesh1D;
pub use solver::{run, SolverConfig, Trajectory};
