use ndarray::Array2;
use rand::Rng;

use crate::error::{Error, Result};
use crate::seeding::rng_from_seed;

/// Edge-support pattern of a causality graph.
///
/// Entry `(n, n')` is `true` iff the edge `n' -> n` may carry nonzero
/// coefficients. Diagonal entries (self-loops) are always `true`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMask {
    entries: Array2<bool>,
}

impl AdjacencyMask {
    pub fn new(entries: Array2<bool>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows == 0 || rows != cols {
            return Err(Error::DimensionMismatch(format!(
                "mask must be square and non-empty, got {}x{}",
                rows, cols
            )));
        }
        for n in 0..rows {
            if !entries[[n, n]] {
                return Err(Error::InvalidParameter(format!(
                    "mask diagonal entry ({n}, {n}) must be true (self-loops always allowed)"
                )));
            }
        }
        Ok(Self { entries })
    }

    /// Self-loops only.
    pub fn identity(n_nodes: usize) -> Self {
        Self {
            entries: Array2::from_shape_fn((n_nodes, n_nodes), |(i, j)| i == j),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_allowed(&self, n: usize, n_prime: usize) -> bool {
        self.entries[[n, n_prime]]
    }

    pub fn entries(&self) -> &Array2<bool> {
        &self.entries
    }

    /// Number of off-diagonal edges present.
    pub fn edge_count(&self) -> usize {
        let n = self.n_nodes();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && self.entries[[i, j]])
            .count()
    }

    /// Fraction of off-diagonal entries that are true.
    pub fn off_diagonal_density(&self) -> f64 {
        let n = self.n_nodes();
        if n < 2 {
            return 0.0;
        }
        self.edge_count() as f64 / (n * (n - 1)) as f64
    }
}

/// Draw an Erdős-Rényi support pattern: each off-diagonal entry is true
/// independently with probability `edge_prob`; self-loops have probability 1.
pub fn generate_er_graph(n_nodes: usize, edge_prob: f64, seed: u64) -> Result<AdjacencyMask> {
    if n_nodes == 0 {
        return Err(Error::InvalidParameter("n_nodes must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidParameter(format!(
            "edge_prob must lie in [0, 1], got {edge_prob}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut entries = Array2::from_elem((n_nodes, n_nodes), false);
    for n in 0..n_nodes {
        for n_prime in 0..n_nodes {
            if n == n_prime {
                entries[[n, n_prime]] = true;
            } else {
                entries[[n, n_prime]] = rng.gen::<f64>() < edge_prob;
            }
        }
    }
    AdjacencyMask::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_edge_prob_gives_identity_pattern() {
        let mask = generate_er_graph(3, 0.0, 1).unwrap();
        assert_eq!(mask, AdjacencyMask::identity(3));
    }

    #[test]
    fn unit_edge_prob_gives_full_mask() {
        let mask = generate_er_graph(3, 1.0, 1).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(mask.is_allowed(i, j));
            }
        }
    }

    #[test]
    fn rejects_out_of_range_probability() {
        assert!(generate_er_graph(3, -0.1, 1).is_err());
        assert!(generate_er_graph(3, 1.1, 1).is_err());
        assert!(generate_er_graph(0, 0.5, 1).is_err());
    }

    #[test]
    fn same_seed_same_mask() {
        let a = generate_er_graph(12, 0.2, 99).unwrap();
        let b = generate_er_graph(12, 0.2, 99).unwrap();
        assert_eq!(a, b);
        let c = generate_er_graph(12, 0.2, 100).unwrap();
        assert_ne!(a, c);
    }

    // Monte Carlo frequency oracle: over many seeds the empirical off-diagonal
    // density of an ER draw concentrates around edge_prob.
    #[test]
    fn off_diagonal_density_matches_edge_prob() {
        let n = 12;
        let p = 0.2;
        let draws = 10_000usize;
        let mut total_edges = 0usize;
        for seed in 0..draws as u64 {
            total_edges += generate_er_graph(n, p, seed).unwrap().edge_count();
        }
        let density = total_edges as f64 / (draws * n * (n - 1)) as f64;
        assert!(
            (density - p).abs() < 0.02,
            "density {density} not within 0.02 of {p}"
        );
    }
}
