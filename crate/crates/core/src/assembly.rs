//! Galerkin matrices for P1 elements and the boundary-condition operator.
//!
//! The weak form of the heat equation on `[a, b]` reads
//! `(u_t, v) + (u_x, v_x) = (v(b) - v(a)) u_x(b)`. With Neumann conditions the
//! right-hand side vanishes. With the mean-conserving conditions the boundary
//! flux is replaced by `(u(b) - u(a)) / (b - a)`, which turns the right-hand side
//! into the symmetric rank-one term `w wᵀ u / (b - a)` with `w = e_last - e_first`.
//! Moving it to the left gives `K_eff = K - wwᵀ / (b - a)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh::Mesh1D;

/// Symmetric tridiagonal matrix stored as its diagonal and one off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len().saturating_sub(1),
                found: off.len(),
            });
        }
        Ok(Self { diag, off })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            diag: vec![1.0; n],
            off: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: f64, other: &SymTridiagonal) -> Result<SymTridiagonal> {
        check_dim(self.dim(), other.dim())?;
        let diag = self
            .diag
            .iter()
            .zip(&other.diag)
            .map(|(x, y)| x + alpha * y)
            .collect();
        let off = self
            .off
            .iter()
            .zip(&other.off)
            .map(|(x, y)| x + alpha * y)
            .collect();
        Ok(SymTridiagonal { diag, off })
    }

    pub fn matvec(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), u.len())?;
        let n = self.dim();
        let mut out: Vec<f64> = self.diag.iter().zip(u).map(|(d, x)| d * x).collect();
        for i in 0..n - 1 {
            out[i] += self.off[i] * u[i + 1];
            out[i + 1] += self.off[i] * u[i];
        }
        Ok(out)
    }

    /// Largest entry in absolute value.
    pub fn max_abs(&self) -> f64 {
        self.diag.iter().chain(&self.off).fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Dense row-major copy, for tests and small-system checks.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = self.diag[i];
            if i + 1 < n {
                dense[i][i + 1] = self.off[i];
                dense[i + 1][i] = self.off[i];
            }
        }
        dense
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Element-by-element assembly of `local` (a 2x2 symmetric block given as
/// (diagonal, off-diagonal)) over a uniform mesh.
fn assemble_uniform(mesh: &Mesh1D, local_diag: f64, local_off: f64) -> SymTridiagonal {
    let n = mesh.num_nodes();
    let mut diag = vec![0.0; n];
    let off = vec![local_off; n - 1];
    for e in 0..mesh.num_elements() {
        diag[e] += local_diag;
        diag[e + 1] += local_diag;
    }
    SymTridiagonal { diag, off }
}

/// Consistent P1 mass matrix, entries `∫ φ_i φ_j dx`.
pub fn assemble_mass(mesh: &Mesh1D) -> SymTridiagonal {
    let h = mesh.h();
    assemble_uniform(mesh, h / 3.0, h / 6.0)
}

/// P1 stiffness matrix, entries `∫ φ_i' φ_j' dx`.
pub fn assemble_stiffness(mesh: &Mesh1D) -> SymTridiagonal {
    let h = mesh.h();
    assemble_uniform(mesh, 1.0 / h, -1.0 / h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BcKind {
    /// Zero flux at both ends; conserves mass only.
    Neumann,
    /// Nonlocal conditions `u_x(a) = u_x(b) = (u(b) - u(a)) / (b - a)`; conserves mass and mean.
    MeanConserving,
}

impl BcKind {
    pub const NAMES: [&'static str; 2] = ["neumann", "mean-conserving"];

    pub fn name(self) -> &'static str {
        match self {
            BcKind::Neumann => "neumann",
            BcKind::MeanConserving => "mean-conserving",
        }
    }
}

impl fmt::Display for BcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BcKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "neumann" => Ok(BcKind::Neumann),
            "mean-conserving" => Ok(BcKind::MeanConserving),
            other => Err(Error::Config(format!(
                "unknown boundary condition {other:?}; expected one of {}",
                BcKind::NAMES.join(", ")
            ))),
        }
    }
}

/// Symmetric rank-one term `scale * w wᵀ`, subtracted from the stiffness matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOne {
    pub w: Vec<f64>,
    pub scale: f64,
}

/// Effective spatial operator `K_eff = K - scale * w wᵀ` (no correction for Neumann).
#[derive(Debug, Clone, PartialEq)]
pub struct BcOperator {
    stiffness: SymTridiagonal,
    correction: Option<RankOne>,
}

impl BcOperator {
    pub fn new(stiffness: SymTridiagonal, mesh: &Mesh1D, kind: BcKind) -> Result<Self> {
        check_dim(mesh.num_nodes(), stiffness.dim())?;
        let correction = match kind {
            BcKind::Neumann => None,
            BcKind::MeanConserving => {
                let n = stiffness.dim();
                let mut w = vec![0.0; n];
                w[0] = -1.0;
                w[n - 1] += 1.0;
                Some(RankOne {
                    w,
                    scale: 1.0 / mesh.length(),
                })
            }
        };
        Ok(Self {
            stiffness,
            correction,
        })
    }

    pub fn kind(&self) -> BcKind {
        if self.correction.is_some() {
            BcKind::MeanConserving
        } else {
            BcKind::Neumann
        }
    }

    pub fn dim(&self) -> usize {
        self.stiffness.dim()
    }

    pub fn stiffness(&self) -> &SymTridiagonal {
        &self.stiffness
    }

    pub fn correction(&self) -> Option<&RankOne> {
        self.correction.as_ref()
    }

    /// `K u - scale (wᵀu) w`.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.stiffness.matvec(u)?;
        if let Some(RankOne { w, scale }) = &self.correction {
            let wu: f64 = dot(w, u);
            for (o, wi) in out.iter_mut().zip(w) {
                *o -= scale * wu * wi;
            }
        }
        Ok(out)
    }

    /// Largest absolute entry of the dense effective operator.
    pub fn max_abs(&self) -> f64 {
        match &self.correction {
            None => self.stiffness.max_abs(),
            Some(_) => self
                .to_dense()
                .iter()
                .flatten()
                .fold(0.0, |m: f64, x| m.max(x.abs())),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = self.stiffness.to_dense();
        if let Some(RankOne { w, scale }) = &self.correction {
            for (i, row) in dense.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    *entry -= scale * w[i] * w[j];
                }
            }
        }
        dense
    }
}

pub fn build_bc_operator(stiffness: SymTridiagonal, mesh: &Mesh1D, kind: BcKind) -> Result<BcOperator> {
    BcOperator::new(stiffness, mesh, kind)
}

pub fn apply_operator(op: &BcOperator, u: &[f64]) -> Result<Vec<f64>> {
    op.apply(u)
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
