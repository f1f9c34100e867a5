#![allow(dead_code)]

use diffkde::assembly::{assemble_mass, assemble_stiffness, BcKind, BcOperator};
use diffkde::{generate_uniform, project_deltas, CoefficientVector, DataSample, Mesh1D};

pub const SEED: u64 = 42;

/// The reference experiment: 500 uniform points on [0, 10], 5000 elements.
pub fn reference_setup() -> (DataSample, Mesh1D, CoefficientVector) {
    let sample = generate_uniform(500, 0.0, 10.0, SEED).unwrap();
    let mesh = Mesh1D::new(0.0, 10.0, 5000).unwrap();
    let mass = assemble_mass(&mesh);
    let u0 = project_deltas(&sample, &mesh, &mass).unwrap();
    (sample, mesh, u0)
}

pub fn operator(mesh: &Mesh1D, bc: BcKind) -> BcOperator {
    BcOperator::new(assemble_stiffness(mesh), mesh, bc).unwrap()
}

/// Dense LU factorization with partial pivoting, kept apart from the tridiagonal code paths.
pub struct DenseLu {
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

impl DenseLu {
    pub fn new(mut a: Vec<Vec<f64>>) -> Self {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let p = (col..n)
                .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
                .unwrap();
            a.swap(col, p);
            perm.swap(col, p);
            for row in col + 1..n {
                let f = a[row][col] / a[col][col];
                a[row][col] = f;
                for k in col + 1..n {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
        Self { lu: a, perm }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                y[i] -= self.lu[i][k] * y[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= self.lu[i][k] * y[k];
            }
            y[i] /= self.lu[i][i];
        }
        y
    }
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn rel_max_diff(x: &[f64], reference: &[f64]) -> f64 {
    let diff: Vec<f64> = x.iter().zip(reference).map(|(a, b)| a - b).collect();
    max_abs(&diff) / max_abs(reference)
}
