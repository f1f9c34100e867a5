//! Conserved functionals of a P1 density and their drift from the initial state.

use crate::assembly::{check_dim, dot, SymTridiagonal};
use crate::error::{Error, Result};
use crate::mesh::Mesh1D;

/// Snapshot of the conserved quantities at one time level.
///
/// Drifts follow the convention `delta = value(0) - value(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub mass: f64,
    pub mean: f64,
    pub min_value: f64,
    pub delta_mass: f64,
    pub delta_mean: f64,
}

impl DiagnosticsRecord {
    /// `delta_mean / mean(0)`, the relative change of the mean.
    pub fn relative_mean_change(&self) -> f64 {
        self.delta_mean / (self.mean + self.delta_mean)
    }
}

/// `1ᵀ M u`, the exact integral of the P1 interpolant.
pub fn discrete_mass(u: &[f64], mass_matrix: &SymTridiagonal) -> Result<f64> {
    Ok(mass_matrix.matvec(u)?.iter().sum())
}

/// `xᵀ M u / 1ᵀ M u`.
pub fn discrete_mean(u: &[f64], mass_matrix: &SymTridiagonal, mesh: &Mesh1D) -> Result<f64> {
    check_dim(mesh.num_nodes(), u.len())?;
    let mu = mass_matrix.matvec(u)?;
    let total: f64 = mu.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok(dot(mesh.nodes(), &mu) / total)
}

/// Builds the record for `u` at `time`. Without a baseline the record is its own baseline.
pub fn record(
    u: &[f64],
    time: f64,
    mass_matrix: &SymTridiagonal,
    mesh: &Mesh1D,
    baseline: Option<&DiagnosticsRecord>,
) -> Result<DiagnosticsRecord> {
    check_dim(mesh.num_nodes(), u.len())?;
    let mu = mass_matrix.matvec(u)?;
    let mass: f64 = mu.iter().sum();
    if mass == 0.0 {
        return Err(Error::ZeroMass);
    }
    let mean = dot(mesh.nodes(), &mu) / mass;
    // P1 extrema sit at the nodes
    let min_value = u.iter().copied().fold(f64::INFINITY, f64::min);
    let (mass0, mean0) = baseline.map_or((mass, mean), |b| (b.mass, b.mean));
    Ok(DiagnosticsRecord {
        time,
        mass,
        mean,
        min_value,
        delta_mass: mass0 - mass,
        delta_mean: mean0 - mean,
    })
}
