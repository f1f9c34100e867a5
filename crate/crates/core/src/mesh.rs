//! Uniform partition of an interval into P1 elements.

use crate::error::{Error, Result};

/// Uniform 1D mesh of `[a, b]` with `num_elements` elements and `num_elements + 1` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    a: f64,
    b: f64,
    num_elements: usize,
    h: f64,
    nodes: Vec<f64>,
}

impl Mesh1D {
    pub fn new(a: f64, b: f64, num_elements: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(Error::DomainOrder { a, b });
        }
        if num_elements == 0 {
            return Err(Error::NoElements);
        }
        let h = (b - a) / num_elements as f64;
        let mut nodes: Vec<f64> = (0..=num_elements).map(|i| a + i as f64 * h).collect();
        nodes[num_elements] = b;
        Ok(Self {
            a,
            b,
            num_elements,
            h,
            nodes,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn num_nodes(&self) -> usize {
        self.num_elements + 1
    }

    /// Element width.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Index of the node closest to `x`. Ties go to the lower index.
    pub fn nearest_node(&self, x: f64) -> Result<usize> {
        if !(self.a..=self.b).contains(&x) {
            return Err(Error::OutOfDomain {
                x,
                a: self.a,
                b: self.b,
            });
        }
        // Candidate from the element containing x, then settle by exact distances.
        let guess = (((x - self.a) / self.h).floor() as usize).min(self.num_elements - 1);
        let lo = guess.saturating_sub(1);
        let hi = (guess + 2).min(self.num_elements);
        let mut best = lo;
        let mut best_dist = (x - self.nodes[lo]).abs();
        for i in lo + 1..=hi {
            let d = (x - self.nodes[i]).abs();
            if d < best_dist {
                best = i;
                best_dist = d;
            }
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn paper_partition() {
        let mesh = Mesh1D::new(0.0, 10.0, 5000).unwrap();
        assert_eq!(mesh.num_nodes(), 5001);
        assert_eq!(mesh.h(), 0.002);
        assert_eq!(mesh.nodes()[0], 0.0);
        assert_eq!(mesh.nodes()[5000], 10.0);
    }

    #[test]
    fn small_meshes() {
        assert_eq!(Mesh1D::new(0.0, 1.0, 1).unwrap().nodes(), &[0.0, 1.0]);
        let m2 = Mesh1D::new(0.0, 1.0, 2).unwrap();
        assert_eq!(m2.nodes(), &[0.0, 0.5, 1.0]);
        assert_eq!(m2.h(), 0.5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Mesh1D::new(1.0, 1.0, 3), Err(Error::DomainOrder { .. })));
        assert!(matches!(Mesh1D::new(2.0, 1.0, 3), Err(Error::DomainOrder { .. })));
        assert!(matches!(Mesh1D::new(0.0, 1.0, 0), Err(Error::NoElements)));
    }

    #[test]
    fn nearest_node_cases() {
        let m2 = Mesh1D::new(0.0, 1.0, 2).unwrap();
        assert_eq!(m2.nearest_node(0.74).unwrap(), 1);
        assert_eq!(m2.nearest_node(0.25).unwrap(), 0);
        assert_eq!(m2.nearest_node(0.75).unwrap(), 1);
        assert_eq!(m2.nearest_node(1.0).unwrap(), 2);
        assert!(matches!(m2.nearest_node(-0.1), Err(Error::OutOfDomain { .. })));
        assert!(matches!(m2.nearest_node(1.1), Err(Error::OutOfDomain { .. })));
        let big = Mesh1D::new(0.0, 10.0, 5000).unwrap();
        assert_eq!(big.nearest_node(10.0).unwrap(), 5000);
        assert_eq!(big.nearest_node(0.0).unwrap(), 0);
    }

    proptest! {
        #[test]
        fn mesh_invariants(a in -100.0f64..100.0, len in 1e-3f64..1e3, m in 1usize..2000) {
            let b = a + len;
            let mesh = Mesh1D::new(a, b, m).unwrap();
            let nodes = mesh.nodes();
            prop_assert_eq!(nodes.len(), m + 1);
            prop_assert_eq!(nodes[0], a);
            prop_assert_eq!(nodes[m], b);
            let ulp = f64::EPSILON * a.abs().max(b.abs());
            let mut total = 0.0;
            for w in nodes.windows(2) {
                prop_assert!(w[1] > w[0]);
                prop_assert!((w[1] - w[0] - mesh.h()).abs() <= 2.0 * ulp);
                total += w[1] - w[0];
            }
            prop_assert!((total - (b - a)).abs() <= m as f64 * ulp);
        }

        #[test]
        fn nearest_node_idempotent_on_nodes(m in 1usize..500, i_frac in 0.0f64..=1.0) {
            let mesh = Mesh1D::new(-3.0, 7.0, m).unwrap();
            let i = ((i_frac * m as f64).round() as usize).min(m);
            prop_assert_eq!(mesh.nearest_node(mesh.nodes()[i]).unwrap(), i);
        }

        #[test]
        fn nearest_node_minimizes_distance(m in 1usize..300, x in 0.0f64..=1.0) {
            let mesh = Mesh1D::new(0.0, 1.0, m).unwrap();
            let i = mesh.nearest_node(x).unwrap();
            let d = (x - mesh.nodes()[i]).abs();
            for (j, node) in mesh.nodes().iter().enumerate() {
                let dj = (x - node).abs();
                prop_assert!(d < dj || (d == dj && i <= j) || j == i);
            }
        }
    }
}
