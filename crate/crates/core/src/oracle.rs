//! Reference solutions that do not share code paths with the FEM pipeline.
//!
//! For Neumann conditions the heat equation on `[a, b]` diagonalizes in the
//! cosine basis, so a delta-sum initial condition evolves as
//! `u(x, t) = 1/L + Σ_k c_k cos(kπ(x - a)/L) exp(-(kπ/L)² t)` with
//! `c_k = 2/(N L) Σ_i cos(kπ(b_i - a)/L)`. No closed form is used for the
//! mean-conserving conditions; there the reference is the same stepper at a
//! much finer time step.

use std::f64::consts::PI;

use crate::assembly::{check_dim, dot, BcKind, SymTridiagonal};
use crate::error::{Error, Result};
use crate::initial_condition::{CoefficientVector, DataSample};
use crate::mesh::Mesh1D;
use crate::solver::{run, SolverConfig};

/// Truncated cosine series for the Neumann problem at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSolution {
    a: f64,
    b: f64,
    t: f64,
    /// `coefficients[0] = 1/L`, `coefficients[k]` multiplies `cos(kπ(x - a)/L)`
    /// before the decay factor.
    coefficients: Vec<f64>,
}

impl SpectralSolution {
    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Mode amplitudes at time `t`, decay included.
    fn damped(&self) -> Vec<f64> {
        let l = self.length();
        self.coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let lambda = (k as f64 * PI / l).powi(2);
                c * (-lambda * self.t).exp()
            })
            .collect()
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.evaluate_many(&[x])[0]
    }

    pub fn evaluate_many(&self, xs: &[f64]) -> Vec<f64> {
        let l = self.length();
        let damped = self.damped();
        // modes beyond this index are below 1e-300 and contribute nothing
        let last = damped.iter().rposition(|c| c.abs() > 1e-300).unwrap_or(0);
        xs.iter()
            .map(|&x| {
                let theta = PI * (x - self.a) / l;
                damped[0]
                    + damped[1..=last]
                        .iter()
                        .enumerate()
                        .map(|(j, c)| c * ((j + 1) as f64 * theta).cos())
                        .sum::<f64>()
            })
            .collect()
    }

    /// `∫ u dx`, which is `c_0 L = 1`.
    pub fn mass(&self) -> f64 {
        self.coefficients[0] * self.length()
    }

    /// `∫ x u dx / ∫ u dx`, integrated term by term.
    pub fn mean(&self) -> f64 {
        let l = self.length();
        let damped = self.damped();
        let mut first_moment = damped[0] * l * l / 2.0;
        for (k, c) in damped.iter().enumerate().skip(1) {
            let kpi = k as f64 * PI;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            first_moment += c * l * l * (sign - 1.0) / (kpi * kpi);
        }
        self.a + first_moment / self.mass()
    }

    /// Nodal interpolant on `mesh`.
    pub fn interpolate(&self, mesh: &Mesh1D) -> CoefficientVector {
        CoefficientVector(self.evaluate_many(mesh.nodes()))
    }
}

/// Cosine-series solution of the Neumann problem from the exact delta-sum initial condition.
pub fn spectral_neumann(sample: &DataSample, t: f64, k_max: usize) -> Result<SpectralSolution> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::Config(format!("spectral time must be positive, got {t}")));
    }
    if k_max == 0 {
        return Err(Error::Config("k_max must be at least 1".into()));
    }
    let (a, b) = sample.domain();
    let l = b - a;
    let n = sample.len() as f64;
    let mut coefficients = vec![0.0; k_max + 1];
    coefficients[0] = 1.0 / l;
    for (k, c) in coefficients.iter_mut().enumerate().skip(1) {
        let kpi = k as f64 * PI / l;
        let sum: f64 = sample.points().iter().map(|&p| (kpi * (p - a)).cos()).sum();
        *c = 2.0 * sum / (n * l);
    }
    Ok(SpectralSolution {
        a,
        b,
        t,
        coefficients,
    })
}

/// Same stepper at `dt = t_final / (100 * refinement)`; returns the final state.
pub fn reference_run(
    mesh: &Mesh1D,
    u0: &CoefficientVector,
    bc: BcKind,
    t_final: f64,
    refinement: usize,
) -> Result<CoefficientVector> {
    if refinement == 0 {
        return Err(Error::Config("refinement must be at least 1".into()));
    }
    let dt = t_final / (100 * refinement) as f64;
    let traj = run(mesh, u0, &SolverConfig::new(dt, t_final, bc))?;
    Ok(traj.final_state().clone())
}

/// `sqrt((u - v)ᵀ M (u - v))`, the L2 norm of the P1 difference.
pub fn l2_error(u: &[f64], v: &[f64], mass_matrix: &SymTridiagonal) -> Result<f64> {
    check_dim(u.len(), v.len())?;
    let diff: Vec<f64> = u.iter().zip(v).map(|(x, y)| x - y).collect();
    let md = mass_matrix.matvec(&diff)?;
    Ok(dot(&diff, &md).max(0.0).sqrt())
}

/// `l2_error(u, v) / ‖v‖`.
pub fn relative_l2_error(u: &[f64], v: &[f64], mass_matrix: &SymTridiagonal) -> Result<f64> {
    let zero = vec![0.0; v.len()];
    Ok(l2_error(u, v, mass_matrix)? / l2_error(v, &zero, mass_matrix)?)
}
