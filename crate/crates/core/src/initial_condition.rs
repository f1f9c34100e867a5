//! Data samples and their projection onto the P1 basis as an initial condition.
//!
//! Each sample point is represented by the hat function of its nearest node,
//! scaled so that it carries mass `1 / N`. Interior hats integrate to `h`, which
//! gives the familiar weight `M / ((b - a) N) = 1 / (N h)`; boundary hats
//! integrate to `h / 2` and get twice that. A final scalar rescale removes
//! the last bit of roundoff from the unit discrete mass.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::assembly::{check_dim, SymTridiagonal};
use crate::diagnostics::discrete_mass;
use crate::error::{Error, Result};
use crate::mesh::Mesh1D;

/// Raw data points on a bounded domain.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSample {
    points: Vec<f64>,
    a: f64,
    b: f64,
}

impl DataSample {
    pub fn new(points: Vec<f64>, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(Error::DomainOrder { a, b });
        }
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        let offenders: Vec<(usize, f64)> = points
            .iter()
            .enumerate()
            .filter(|(_, x)| !(a..=b).contains(*x))
            .map(|(i, &x)| (i + 1, x))
            .collect();
        if !offenders.is_empty() {
            return Err(Error::SampleOutOfDomain { a, b, offenders });
        }
        Ok(Self { points, a, b })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn mean(&self) -> f64 {
        self.points.iter().sum::<f64>() / self.points.len() as f64
    }
}

/// Parses one number per line; blank lines and `#` comments are skipped.
pub fn parse_sample(text: &str, a: f64, b: f64) -> Result<DataSample> {
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(Error::DomainOrder { a, b });
    }
    let mut points = Vec::new();
    let mut offenders = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            text: line.to_string(),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: idx + 1,
                text: line.to_string(),
            });
        }
        if !(a..=b).contains(&value) {
            offenders.push((idx + 1, value));
        }
        points.push(value);
    }
    if !offenders.is_empty() {
        return Err(Error::SampleOutOfDomain { a, b, offenders });
    }
    DataSample::new(points, a, b)
}

pub fn load_sample(path: &Path, a: f64, b: f64) -> Result<DataSample> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sample(&text, a, b)
}

/// `n` seeded draws from `Uniform[a, b]`. ChaCha8 keeps the stream stable across platforms.
pub fn generate_uniform(n: usize, a: f64, b: f64, seed: u64) -> Result<DataSample> {
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(Error::DomainOrder { a, b });
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n).map(|_| rng.random_range(a..=b)).collect();
    DataSample::new(points, a, b)
}

/// Nodal coefficients of a P1 function.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector(pub Vec<f64>);

impl CoefficientVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl From<Vec<f64>> for CoefficientVector {
    fn from(values: Vec<f64>) -> Self {
        CoefficientVector(values)
    }
}

impl AsRef<[f64]> for CoefficientVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub fn project_deltas(
    sample: &DataSample,
    mesh: &Mesh1D,
    mass: &SymTridiagonal,
) -> Result<CoefficientVector> {
    let (a, b) = sample.domain();
    if a != mesh.a() || b != mesh.b() {
        return Err(Error::DomainMismatch {
            sample_a: a,
            sample_b: b,
            mesh_a: mesh.a(),
            mesh_b: mesh.b(),
        });
    }
    check_dim(mesh.num_nodes(), mass.dim())?;
    let hat_integrals = mass.matvec(&vec![1.0; mass.dim()])?;
    let n = sample.len() as f64;
    let mut values = vec![0.0; mesh.num_nodes()];
    for &x in sample.points() {
        let node = mesh.nearest_node(x)?;
        values[node] += 1.0 / (n * hat_integrals[node]);
    }
    let total = discrete_mass(&values, mass)?;
    for v in &mut values {
        *v /= total;
    }
    Ok(CoefficientVector(values))
}

/// Equal-width bins over the sample domain as `(left edge, count)`; the last bin is closed on the right.
pub fn histogram(sample: &DataSample, bins: usize) -> Result<Vec<(f64, usize)>> {
    if bins == 0 {
        return Err(Error::Config("histogram needs at least one bin".into()));
    }
    let (a, b) = sample.domain();
    let width = (b - a) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in sample.points() {
        let idx = (((x - a) / width).floor() as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (a + i as f64 * width, c))
        .collect())
}
