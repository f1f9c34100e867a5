//! Implicit Euler time stepping for `M u' + K_eff u = 0`.
//!
//! Each step solves `(M + dt K_eff) u_next = M u`. The system matrix is the
//! symmetric tridiagonal `M + dt K` minus the rank-one term `dt * scale * wwᵀ`
//! for the mean-conserving operator, so a step costs one tridiagonal
//! factorization plus Sherman-Morrison, all O(n).

use crate::assembly::{
    assemble_mass, assemble_stiffness, check_dim, dot, BcKind, BcOperator, SymTridiagonal,
};
use crate::diagnostics::{self, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::initial_condition::CoefficientVector;
use crate::mesh::Mesh1D;

const MIN_PIVOT: f64 = 1e-300;
const MIN_SM_DENOMINATOR: f64 = 1e-12;

/// `LDLᵀ` factorization of a symmetric tridiagonal matrix (Thomas algorithm).
#[derive(Debug, Clone)]
pub struct TridiagonalFactor {
    pivots: Vec<f64>,
    multipliers: Vec<f64>,
}

impl TridiagonalFactor {
    pub fn new(t: &SymTridiagonal) -> Result<Self> {
        let n = t.dim();
        let (diag, off) = (t.diag(), t.off());
        let mut pivots = Vec::with_capacity(n);
        let mut multipliers = Vec::with_capacity(n.saturating_sub(1));
        let mut pivot = diag[0];
        for i in 0..n {
            if i > 0 {
                let l = off[i - 1] / pivots[i - 1];
                multipliers.push(l);
                pivot = diag[i] - l * off[i - 1];
            }
            if pivot.is_nan() || pivot.abs() < MIN_PIVOT {
                return Err(Error::SingularPivot { row: i, pivot });
            }
            pivots.push(pivot);
        }
        Ok(Self { pivots, multipliers })
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), rhs.len())?;
        let n = self.dim();
        let mut y = rhs.to_vec();
        for i in 1..n {
            y[i] -= self.multipliers[i - 1] * y[i - 1];
        }
        y[n - 1] /= self.pivots[n - 1];
        for i in (0..n - 1).rev() {
            y[i] = y[i] / self.pivots[i] - self.multipliers[i] * y[i + 1];
        }
        Ok(y)
    }
}

/// Solves `t y = rhs` for a symmetric tridiagonal `t`.
pub fn solve_tridiag(t: &SymTridiagonal, rhs: &[f64]) -> Result<Vec<f64>> {
    check_dim(t.dim(), rhs.len())?;
    TridiagonalFactor::new(t)?.solve(rhs)
}

/// Solver for `(T - scale * wwᵀ) y = rhs` with `T` factored once.
#[derive(Debug, Clone)]
pub struct RankOneCorrectedSolver {
    factor: TridiagonalFactor,
    correction: Option<(Vec<f64>, f64, Vec<f64>, f64)>,
}

impl RankOneCorrectedSolver {
    pub fn new(t: &SymTridiagonal, w: &[f64], scale: f64) -> Result<Self> {
        check_dim(t.dim(), w.len())?;
        let factor = TridiagonalFactor::new(t)?;
        if scale == 0.0 {
            return Ok(Self {
                factor,
                correction: None,
            });
        }
        let z = factor.solve(w)?;
        let denominator = 1.0 - scale * dot(w, &z);
        if denominator.is_nan() || denominator.abs() < MIN_SM_DENOMINATOR {
            return Err(Error::RankOneBreakdown { denominator });
        }
        Ok(Self {
            factor,
            correction: Some((w.to_vec(), scale, z, denominator)),
        })
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut y = self.factor.solve(rhs)?;
        if let Some((w, scale, z, denominator)) = &self.correction {
            let coef = scale * dot(w, &y) / denominator;
            for (yi, zi) in y.iter_mut().zip(z) {
                *yi += coef * zi;
            }
        }
        Ok(y)
    }
}

/// Sherman-Morrison solve of `(t - scale * wwᵀ) y = rhs`.
pub fn solve_rank_one_corrected(t: &SymTridiagonal, w: &[f64], scale: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    check_dim(t.dim(), rhs.len())?;
    RankOneCorrectedSolver::new(t, w, scale)?.solve(rhs)
}

/// Prepared system `M + dt K_eff` for a fixed step size.
#[derive(Debug, Clone)]
pub struct ImplicitEulerStepper<'a> {
    mass: &'a SymTridiagonal,
    dt: f64,
    system: RankOneCorrectedSolver,
}

impl<'a> ImplicitEulerStepper<'a> {
    pub fn new(mass: &'a SymTridiagonal, op: &BcOperator, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        check_dim(mass.dim(), op.dim())?;
        let t = mass.add_scaled(dt, op.stiffness())?;
        let system = match op.correction() {
            Some(c) => RankOneCorrectedSolver::new(&t, &c.w, dt * c.scale)?,
            None => RankOneCorrectedSolver::new(&t, &vec![0.0; t.dim()], 0.0)?,
        };
        Ok(Self { mass, dt, system })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, u: &[f64]) -> Result<Vec<f64>> {
        let rhs = self.mass.matvec(u)?;
        self.system.solve(&rhs)
    }
}

/// One implicit Euler step: solves `(M + dt K_eff) u_next = M u`.
pub fn step_implicit_euler(
    u: &CoefficientVector,
    mass: &SymTridiagonal,
    op: &BcOperator,
    dt: f64,
) -> Result<CoefficientVector> {
    check_dim(mass.dim(), u.len())?;
    Ok(ImplicitEulerStepper::new(mass, op, dt)?.step(u.values())?.into())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_final: f64,
    pub bc: BcKind,
    /// Keep every k-th state; `None` keeps only the initial and final states.
    pub snapshot_stride: Option<usize>,
}

impl SolverConfig {
    pub fn new(dt: f64, t_final: f64, bc: BcKind) -> Self {
        Self {
            dt,
            t_final,
            bc,
            snapshot_stride: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config(format!(
                "t_final must be positive, got {}",
                self.t_final
            )));
        }
        if self.dt > self.t_final {
            return Err(Error::Config(format!(
                "dt ({}) must not exceed t_final ({})",
                self.dt, self.t_final
            )));
        }
        if self.snapshot_stride == Some(0) {
            return Err(Error::Config("snapshot stride must be at least 1".into()));
        }
        Ok(())
    }

    /// Time levels `0 = t_0 < t_1 < ... < t_n = t_final`; all steps are `dt`
    /// except possibly a shortened last one.
    pub fn time_levels(&self) -> Vec<f64> {
        let ratio = self.t_final / self.dt;
        let nearest = ratio.round();
        // 0.1 / 1e-3 evaluates to 100.00000000000001
        let steps = if (ratio - nearest).abs() <= 1e-9 * ratio {
            nearest
        } else {
            ratio.ceil()
        }
        .max(1.0) as usize;
        let mut times: Vec<f64> = (0..steps).map(|k| k as f64 * self.dt).collect();
        times.push(self.t_final);
        times
    }

    pub fn num_steps(&self) -> usize {
        self.time_levels().len() - 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub u: CoefficientVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Vec<DiagnosticsRecord>,
}

impl Trajectory {
    pub fn final_state(&self) -> &CoefficientVector {
        &self
            .snapshots
            .last()
            .expect("trajectory always holds the initial state")
            .u
    }

    pub fn final_diagnostics(&self) -> &DiagnosticsRecord {
        self.diagnostics
            .last()
            .expect("trajectory always holds the initial record")
    }
}

/// Evolves `u0` to `config.t_final`, recording diagnostics at every step.
pub fn run(mesh: &Mesh1D, u0: &CoefficientVector, config: &SolverConfig) -> Result<Trajectory> {
    config.validate()?;
    check_dim(mesh.num_nodes(), u0.len())?;
    let mass = assemble_mass(mesh);
    let op = BcOperator::new(assemble_stiffness(mesh), mesh, config.bc)?;
    let times = config.time_levels();
    let steps = times.len() - 1;

    let baseline = diagnostics::record(u0.values(), 0.0, &mass, mesh, None)?;
    let mut records = Vec::with_capacity(times.len());
    records.push(baseline);
    let mut snapshots = vec![Snapshot {
        step: 0,
        time: 0.0,
        u: u0.clone(),
    }];

    let wrap = |step: usize| {
        move |e: Error| Error::Step {
            step,
            source: Box::new(e),
        }
    };
    let stepper = ImplicitEulerStepper::new(&mass, &op, config.dt).map_err(wrap(1))?;
    let mut u = u0.values().to_vec();
    for step in 1..=steps {
        let dt = times[step] - times[step - 1];
        let shortened;
        let active = if (dt - config.dt).abs() <= 1e-12 * config.dt {
            &stepper
        } else {
            shortened = ImplicitEulerStepper::new(&mass, &op, dt).map_err(wrap(step))?;
            &shortened
        };
        u = active.step(&u).map_err(wrap(step))?;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(wrap(step)(Error::NonFinite));
        }
        records.push(diagnostics::record(&u, times[step], &mass, mesh, Some(&baseline)).map_err(wrap(step))?);
        let on_stride = config.snapshot_stride.is_some_and(|k| step % k == 0);
        if on_stride || step == steps {
            snapshots.push(Snapshot {
                step,
                time: times[step],
                u: u.clone().into(),
            });
        }
    }

    Ok(Trajectory {
        times,
        snapshots,
        diagnostics: records,
    })
}
