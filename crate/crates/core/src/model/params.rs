use ndarray::{s, Array1, Array2, Array3, ArrayView2};
use rand::Rng;
use rand_distr::StandardNormal;

use super::graph::AdjacencyMask;
use crate::error::{Error, Result};
use crate::seeding::rng_from_seed;

/// Coefficient tensor of an order-P VAR process.
///
/// `coeffs[[n, n', p]]` is the weight that lag `p+1` of series `n'` carries in
/// the prediction of series `n`; slice `coeffs[.., .., p]` is the lag matrix
/// A_{p+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct VarParameters {
    coeffs: Array3<f64>,
}

impl VarParameters {
    pub fn new(coeffs: Array3<f64>) -> Result<Self> {
        let (rows, cols, order) = coeffs.dim();
        if rows == 0 || rows != cols || order == 0 {
            return Err(Error::DimensionMismatch(format!(
                "coefficient tensor must be NxNxP with N,P >= 1, got {}x{}x{}",
                rows, cols, order
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(n_nodes: usize, order: usize) -> Self {
        Self {
            coeffs: Array3::zeros((n_nodes, n_nodes, order)),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.coeffs.dim().0
    }

    pub fn order(&self) -> usize {
        self.coeffs.dim().2
    }

    pub fn coeffs(&self) -> &Array3<f64> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut Array3<f64> {
        &mut self.coeffs
    }

    /// Lag matrix A_{p+1} (0-based `p`).
    pub fn lag_matrix(&self, p: usize) -> ArrayView2<'_, f64> {
        self.coeffs.slice(s![.., .., p])
    }

    /// Coefficient vector a_n of node `n`, length N*P, grouped by source node:
    /// group n' occupies positions n'*P .. (n'+1)*P, lags innermost.
    pub fn node_vector(&self, n: usize) -> Array1<f64> {
        let (n_nodes, _, order) = self.coeffs.dim();
        let mut v = Array1::zeros(n_nodes * order);
        for n_prime in 0..n_nodes {
            for p in 0..order {
                v[n_prime * order + p] = self.coeffs[[n, n_prime, p]];
            }
        }
        v
    }

    /// Rebuild a tensor from per-node coefficient vectors (inverse of
    /// `node_vector`).
    pub fn from_node_vectors(vectors: &[Array1<f64>], order: usize) -> Result<Self> {
        let n_nodes = vectors.len();
        if n_nodes == 0 || order == 0 {
            return Err(Error::DimensionMismatch("empty node vector set".into()));
        }
        let mut coeffs = Array3::zeros((n_nodes, n_nodes, order));
        for (n, v) in vectors.iter().enumerate() {
            if v.len() != n_nodes * order {
                return Err(Error::DimensionMismatch(format!(
                    "node vector {} has length {}, expected {}",
                    n,
                    v.len(),
                    n_nodes * order
                )));
            }
            for n_prime in 0..n_nodes {
                for p in 0..order {
                    coeffs[[n, n_prime, p]] = v[n_prime * order + p];
                }
            }
        }
        Ok(Self { coeffs })
    }

    /// Euclidean norms of the coefficient groups: entry (n, n') is
    /// ||a_{n,n'}||_2, the weight of candidate edge n' -> n.
    pub fn group_norms(&self) -> Array2<f64> {
        let (n_nodes, _, order) = self.coeffs.dim();
        Array2::from_shape_fn((n_nodes, n_nodes), |(n, n_prime)| {
            (0..order)
                .map(|p| self.coeffs[[n, n_prime, p]].powi(2))
                .sum::<f64>()
                .sqrt()
        })
    }

    /// Support pattern: (n, n') true iff the group a_{n,n'} is not all-zero.
    pub fn support(&self) -> Array2<bool> {
        self.group_norms().mapv(|w| w != 0.0)
    }

    /// Companion matrix [[A_1 ... A_P], [I, 0]] of size NP x NP.
    pub fn companion(&self) -> Array2<f64> {
        let (n_nodes, _, order) = self.coeffs.dim();
        let dim = n_nodes * order;
        let mut f = Array2::zeros((dim, dim));
        for p in 0..order {
            f.slice_mut(s![0..n_nodes, p * n_nodes..(p + 1) * n_nodes])
                .assign(&self.lag_matrix(p));
        }
        for i in n_nodes..dim {
            f[[i, i - n_nodes]] = 1.0;
        }
        f
    }

    /// Scale each lag matrix A_p by c^p (1-based p), which scales every
    /// characteristic root magnitude by c.
    pub fn scale_lags(&mut self, c: f64) {
        let order = self.order();
        for p in 0..order {
            let factor = c.powi(p as i32 + 1);
            self.coeffs.slice_mut(s![.., .., p]).mapv_inplace(|x| x * factor);
        }
    }
}

/// Spectral radius of the NP x NP companion matrix of `params`.
///
/// Uses Gelfand's formula with normalized repeated squaring:
/// rho = lim ||F^(2^k)||^(1/2^k). Writing F^(2^k) as a product of the
/// per-step normalizers gives log rho = sum_j 2^-j log n_j, a geometrically
/// convergent series, so ~60 squarings reach machine precision. Unlike QR
/// iteration this cannot stall on nilpotent or permutation-like companions.
pub fn companion_spectral_radius(params: &VarParameters) -> f64 {
    spectral_radius(&params.companion())
}

pub(crate) fn spectral_radius(f: &Array2<f64>) -> f64 {
    let frob = |m: &Array2<f64>| m.iter().map(|v| v * v).sum::<f64>().sqrt();
    let n0 = frob(f);
    if n0 == 0.0 {
        return 0.0;
    }
    let mut acc = n0.ln();
    let mut b = f / n0;
    let mut weight = 1.0f64;
    for _ in 0..64 {
        weight *= 0.5;
        b = b.dot(&b);
        let n = frob(&b);
        if n == 0.0 {
            // exactly nilpotent beyond this power
            return 0.0;
        }
        acc += weight * n.ln();
        b.mapv_inplace(|v| v / n);
        if weight * n.ln().abs() < 1e-15 * acc.abs().max(1.0) {
            break;
        }
    }
    acc.exp()
}

/// Rescale coefficients so the companion spectral radius equals
/// `target_radius` exactly (up to floating point): A_p <- A_p * c^p with
/// c = target/current. An all-zero input (radius 0) is returned unchanged.
pub fn stabilize(params: &VarParameters, target_radius: f64) -> Result<VarParameters> {
    if !(target_radius > 0.0 && target_radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "target_radius must be positive and finite, got {target_radius}"
        )));
    }
    let radius = companion_spectral_radius(params);
    if radius == 0.0 {
        // Nilpotent dynamics are stable already; nothing to rescale.
        return Ok(params.clone());
    }
    let mut out = params.clone();
    out.scale_lags(target_radius / radius);
    Ok(out)
}

/// Draw VAR coefficients on the support of `mask` i.i.d. from a standard
/// normal distribution, then rescale them to the requested spectral radius.
pub fn sample_var_coefficients(
    mask: &AdjacencyMask,
    order: usize,
    seed: u64,
    target_radius: f64,
) -> Result<VarParameters> {
    if order == 0 {
        return Err(Error::InvalidParameter("order must be >= 1".into()));
    }
    if !(target_radius > 0.0 && target_radius < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "target_radius must lie in (0, 1), got {target_radius}"
        )));
    }
    let n_nodes = mask.n_nodes();
    let mut rng = rng_from_seed(seed);
    let mut coeffs = Array3::zeros((n_nodes, n_nodes, order));
    for n in 0..n_nodes {
        for n_prime in 0..n_nodes {
            if mask.is_allowed(n, n_prime) {
                for p in 0..order {
                    coeffs[[n, n_prime, p]] = rng.sample(StandardNormal);
                }
            }
        }
    }
    stabilize(&VarParameters::new(coeffs)?, target_radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::graph::generate_er_graph;
    use nalgebra::{Complex, DMatrix};

    #[test]
    fn scalar_companion_radius_is_coefficient_magnitude() {
        let mut params = VarParameters::zeros(1, 1);
        params.coeffs_mut()[[0, 0, 0]] = 0.5;
        assert!((companion_spectral_radius(&params) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn all_zero_coefficients_have_zero_radius() {
        let params = VarParameters::zeros(3, 2);
        assert_eq!(companion_spectral_radius(&params), 0.0);
    }

    // Root-finding oracle: the companion eigenvalue magnitudes are the inverse
    // magnitudes of the roots of det(I - A_1 z - A_2 z^2). For N=2, P=2 the
    // determinant is a quartic whose roots we extract from its own 4x4
    // polynomial companion matrix, a construction independent of
    // `VarParameters::companion`.
    #[test]
    fn radius_matches_characteristic_polynomial_roots() {
        let mask = generate_er_graph(2, 1.0, 3).unwrap();
        let params = sample_var_coefficients(&mask, 2, 5, 0.8).unwrap();

        let a1 = params.lag_matrix(0).to_owned();
        let a2 = params.lag_matrix(1).to_owned();
        // entries of M(z) = I - A1 z - A2 z^2 as coefficient triples [c0, c1, c2]
        let entry = |i: usize, j: usize| {
            let id = if i == j { 1.0 } else { 0.0 };
            [id, -a1[[i, j]], -a2[[i, j]]]
        };
        let mul = |a: &[f64], b: &[f64]| {
            let mut out = vec![0.0; a.len() + b.len() - 1];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let m00 = entry(0, 0);
        let m01 = entry(0, 1);
        let m10 = entry(1, 0);
        let m11 = entry(1, 1);
        let prod_diag = mul(&m00, &m11);
        let prod_off = mul(&m01, &m10);
        // det coefficients, degree 4 in z
        let det: Vec<f64> = prod_diag
            .iter()
            .zip(prod_off.iter())
            .map(|(d, o)| d - o)
            .collect();
        assert_eq!(det.len(), 5);
        // polynomial companion of det(z) = c0 + c1 z + ... + c4 z^4
        let c4 = det[4];
        assert!(c4.abs() > 1e-14, "degenerate leading coefficient");
        let mut comp = DMatrix::<f64>::zeros(4, 4);
        for k in 0..4 {
            comp[(0, k)] = -det[3 - k] / c4;
        }
        for k in 1..4 {
            comp[(k, k - 1)] = 1.0;
        }
        let max_inv_root = comp
            .complex_eigenvalues()
            .iter()
            .map(|z: &Complex<f64>| 1.0 / z.norm())
            .fold(0.0, f64::max);

        let radius = companion_spectral_radius(&params);
        assert!(
            (radius - max_inv_root).abs() < 1e-8,
            "companion radius {radius} vs polynomial-root oracle {max_inv_root}"
        );
    }

    #[test]
    fn stabilize_hits_target_radius() {
        let mask = generate_er_graph(5, 0.4, 11).unwrap();
        let mut rng = rng_from_seed(17);
        let mut coeffs = Array3::zeros((5, 5, 2));
        for n in 0..5 {
            for m in 0..5 {
                if mask.is_allowed(n, m) {
                    for p in 0..2 {
                        coeffs[[n, m, p]] = rng.sample::<f64, _>(StandardNormal) * 2.0;
                    }
                }
            }
        }
        let raw = VarParameters::new(coeffs).unwrap();
        let out = stabilize(&raw, 0.5).unwrap();
        let radius = companion_spectral_radius(&out);
        assert!((radius - 0.5).abs() < 1e-8, "radius {radius}");
    }

    #[test]
    fn stabilize_is_identity_at_target() {
        let mask = generate_er_graph(3, 0.5, 2).unwrap();
        let params = sample_var_coefficients(&mask, 2, 7, 0.9).unwrap();
        let again = stabilize(&params, companion_spectral_radius(&params)).unwrap();
        for (a, b) in params.coeffs().iter().zip(again.coeffs().iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn stabilize_order_one_is_uniform_scaling() {
        let mask = generate_er_graph(3, 0.5, 21).unwrap();
        let raw = sample_var_coefficients(&mask, 1, 13, 0.9).unwrap();
        let out = stabilize(&raw, 0.45).unwrap();
        for (a, b) in raw.coeffs().iter().zip(out.coeffs().iter()) {
            assert!((b - a * 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn stabilize_zero_input_returned_unchanged() {
        let zero = VarParameters::zeros(2, 2);
        let out = stabilize(&zero, 0.9).unwrap();
        assert_eq!(out, zero);
    }

    #[test]
    fn sampled_coefficients_respect_mask_support() {
        let mask = generate_er_graph(6, 0.3, 4).unwrap();
        let params = sample_var_coefficients(&mask, 3, 8, 0.9).unwrap();
        for n in 0..6 {
            for n_prime in 0..6 {
                if !mask.is_allowed(n, n_prime) {
                    for p in 0..3 {
                        assert_eq!(params.coeffs()[[n, n_prime, p]], 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_scalar_coefficient_has_target_magnitude() {
        let mask = AdjacencyMask::identity(1);
        let params = sample_var_coefficients(&mask, 1, 3, 0.7).unwrap();
        assert!((params.coeffs()[[0, 0, 0]].abs() - 0.7).abs() < 1e-9);
    }

    #[test]
    fn sampled_radius_matches_target_within_tolerance() {
        let mask = generate_er_graph(5, 0.2, 123).unwrap();
        let params = sample_var_coefficients(&mask, 2, 456, 0.9).unwrap();
        let radius = companion_spectral_radius(&params);
        assert!((radius - 0.9).abs() / 0.9 < 1e-6, "radius {radius}");
    }

    #[test]
    fn node_vector_round_trips() {
        let mask = generate_er_graph(4, 0.5, 9).unwrap();
        let params = sample_var_coefficients(&mask, 3, 10, 0.9).unwrap();
        let vectors: Vec<_> = (0..4).map(|n| params.node_vector(n)).collect();
        let rebuilt = VarParameters::from_node_vectors(&vectors, 3).unwrap();
        assert_eq!(params, rebuilt);
    }
}
