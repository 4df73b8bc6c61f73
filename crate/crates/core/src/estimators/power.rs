use ndarray::{Array1, Array2};

/// Result of a dominant-eigenvalue estimation run.
#[derive(Debug, Clone, Copy)]
pub struct LambdaMaxEstimate {
    pub value: f64,
    /// False when the iteration cap was hit; the value is then the best
    /// available approximation.
    pub converged: bool,
    pub iterations: usize,
}

pub const DEFAULT_POWER_MAX_ITER: usize = 200;
pub const DEFAULT_POWER_REL_TOL: f64 = 1e-9;

fn seed_vector(dim: usize) -> Array1<f64> {
    // fixed LCG pattern: deterministic, no zero or symmetric entries
    let mut x = 0x2545F4914F6CDD1Du64;
    Array1::from_shape_fn(dim, |_| {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((x >> 11) as f64) / (1u64 << 53) as f64 + 0.5
    })
}

/// Power iteration for the largest eigenvalue of a symmetric PSD matrix.
///
/// Stops when the Rayleigh quotient stabilizes within `rel_tol` relative; a
/// warm start accelerates tracking across rank-1 perturbations of Phi.
pub fn lambda_max_power_iteration(
    phi: &Array2<f64>,
    warm_start: Option<&Array1<f64>>,
    max_iter: usize,
    rel_tol: f64,
) -> LambdaMaxEstimate {
    let dim = phi.nrows();
    debug_assert_eq!(dim, phi.ncols());
    let mut v = match warm_start {
        Some(w) if w.len() == dim && w.iter().any(|&x| x != 0.0) => w.to_owned(),
        _ => seed_vector(dim),
    };
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.mapv_inplace(|x| x / norm);

    let mut lambda = 0.0f64;
    for k in 1..=max_iter {
        let w = phi.dot(&v);
        let rayleigh = v.dot(&w);
        let w_norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if w_norm == 0.0 {
            // v is in the null space; for PSD input the matrix may still be 0
            return LambdaMaxEstimate {
                value: 0.0,
                converged: true,
                iterations: k,
            };
        }
        v = w / w_norm;
        let delta = (rayleigh - lambda).abs();
        lambda = rayleigh;
        if delta <= rel_tol * lambda.abs().max(f64::MIN_POSITIVE) {
            return LambdaMaxEstimate {
                value: lambda,
                converged: true,
                iterations: k,
            };
        }
    }
    LambdaMaxEstimate {
        value: lambda,
        converged: false,
        iterations: max_iter,
    }
}

/// Warm-started tracker for lambda_max over a stream of slowly changing
/// matrices.
#[derive(Debug, Clone)]
pub struct PowerIterationTracker {
    vector: Option<Array1<f64>>,
}

impl PowerIterationTracker {
    pub fn new() -> Self {
        Self { vector: None }
    }

    pub fn estimate(&mut self, phi: &Array2<f64>) -> LambdaMaxEstimate {
        let est = lambda_max_power_iteration(
            phi,
            self.vector.as_ref(),
            DEFAULT_POWER_MAX_ITER,
            DEFAULT_POWER_REL_TOL,
        );
        // refresh the warm start with the last iterate direction
        let dim = phi.nrows();
        let mut v = match self.vector.take() {
            Some(v) if v.len() == dim => v,
            _ => seed_vector(dim),
        };
        let w = phi.dot(&v);
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.0 {
            v = w / n;
        }
        self.vector = Some(v);
        est
    }
}

impl Default for PowerIterationTracker {
    fn default() -> Self {
        Self::new()
    }
}
