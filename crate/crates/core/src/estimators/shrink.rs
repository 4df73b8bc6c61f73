use ndarray::Array1;

use super::config::NodeEstimate;

/// Multidimensional shrinkage-thresholding applied per group.
///
/// For n' != self_index the group becomes
/// `a_f * [1 - shrink / ||a_f||]_+`, i.e. the whole group is zeroed whenever
/// `||a_f|| <= shrink` (which subsumes the zero-norm case without dividing);
/// the self group passes through unchanged.
pub fn group_shrink(
    a_f: &Array1<f64>,
    shrink: &[f64],
    self_index: usize,
    order: usize,
) -> Array1<f64> {
    debug_assert_eq!(a_f.len(), shrink.len() * order);
    let mut out = a_f.clone();
    for (n_prime, &amount) in shrink.iter().enumerate() {
        if n_prime == self_index || amount == 0.0 {
            continue;
        }
        let span = n_prime * order..(n_prime + 1) * order;
        let norm = a_f
            .slice(ndarray::s![span.clone()])
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        let mut group = out.slice_mut(ndarray::s![span]);
        if norm <= amount {
            group.fill(0.0);
        } else {
            let factor = 1.0 - amount / norm;
            group.mapv_inplace(|v| v * factor);
        }
    }
    out
}

/// `group_shrink` on a node estimate with per-group amounts `alpha * lambda`.
pub fn shrink_estimate(
    a_f: Array1<f64>,
    amounts: &[f64],
    node: usize,
    order: usize,
) -> NodeEstimate {
    let values = group_shrink(&a_f, amounts, node, order);
    NodeEstimate::from_values(node, order, values).expect("shrink preserves shape")
}
