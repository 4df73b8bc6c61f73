use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::config::NodeEstimate;

/// Weighted directed causality-graph estimate. `source` VAR-causes `target`
/// (edge (n, n') with source n', target n); node ids are 1-based in the JSON
/// artifact.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphSnapshot {
    pub nodes: Vec<usize>,
    pub edges: Vec<GraphEdge>,
    pub self_loops: Vec<SelfLoop>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphEdge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SelfLoop {
    pub node: usize,
    pub weight: f64,
}

/// Group norms ||a_{n,n'}|| stacked as an N x N matrix.
pub fn group_norm_matrix(estimates: &[NodeEstimate]) -> Array2<f64> {
    let n = estimates.len();
    Array2::from_shape_fn((n, n), |(row, col)| estimates[row].group_norm(col))
}

/// Threshold the group norms into a weighted directed graph: edge n' -> n is
/// reported iff ||a_{n,n'}|| >= threshold and n' != n; self-loops are listed
/// separately regardless of the threshold.
pub fn graph_snapshot(estimates: &[NodeEstimate], threshold: f64) -> GraphSnapshot {
    let n = estimates.len();
    let mut edges = Vec::new();
    let mut self_loops = Vec::with_capacity(n);
    for (target, estimate) in estimates.iter().enumerate() {
        for source in 0..n {
            let weight = estimate.group_norm(source);
            if source == target {
                self_loops.push(SelfLoop {
                    node: target + 1,
                    weight,
                });
            } else if weight >= threshold {
                edges.push(GraphEdge {
                    source: source + 1,
                    target: target + 1,
                    weight,
                });
            }
        }
    }
    GraphSnapshot {
        nodes: (1..=n).collect(),
        edges,
        self_loops,
    }
}
