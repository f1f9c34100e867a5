use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: right endpoint {b} must exceed left endpoint {a}")]
    DomainOrder { a: f64, b: f64 },

    #[error("mesh needs at least one element")]
    NoElements,

    #[error("point {x} lies outside the domain [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("line {line}: cannot parse {text:?} as a number")]
    Parse { line: usize, text: String },

    #[error("sample values outside [{a}, {b}]: {}", format_offenders(.offenders))]
    SampleOutOfDomain {
        a: f64,
        b: f64,
        /// (line number, value) pairs
        offenders: Vec<(usize, f64)>,
    },

    #[error("sample contains no points")]
    EmptySample,

    #[error("sample domain [{sample_a}, {sample_b}] does not match mesh domain [{mesh_a}, {mesh_b}]")]
    DomainMismatch {
        sample_a: f64,
        sample_b: f64,
        mesh_a: f64,
        mesh_b: f64,
    },

    #[error("singular pivot {pivot:e} at row {row}")]
    SingularPivot { row: usize, pivot: f64 },

    #[error("Sherman-Morrison breakdown: denominator {denominator:e} is too close to zero")]
    RankOneBreakdown { denominator: f64 },

    #[error("solution became non-finite")]
    NonFinite,

    #[error("discrete mass is zero; mean is undefined")]
    ZeroMass,

    #[error("time step {step} failed: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerical pipeline (as opposed to input or I/O problems).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularPivot { .. }
                | Error::RankOneBreakdown { .. }
                | Error::NonFinite
                | Error::ZeroMass
                | Error::Step { .. }
        )
    }
}

fn format_offenders(offenders: &[(usize, f64)]) -> String {
    offenders
        .iter()
        .map(|(line, value)| format!("{value} (line {line})"))
        .collect::<Vec<_>>()
        .join(", ")
}
