use ndarray::{Array1, Array2, Array3};
use rand::Rng;
use rand_distr::StandardNormal;

use super::params::{companion_spectral_radius, VarParameters};
use crate::error::{Error, Result};
use crate::seeding::rng_from_seed;

/// A multivariate time series; row `t` is the sample vector y[t].
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesMatrix {
    samples: Array2<f64>,
    innovation_std: Option<f64>,
    /// Set when the generating model had companion spectral radius >= 1.
    unstable_source: bool,
}

impl TimeSeriesMatrix {
    pub fn new(samples: Array2<f64>) -> Self {
        Self {
            samples,
            innovation_std: None,
            unstable_source: false,
        }
    }

    pub fn with_metadata(
        samples: Array2<f64>,
        innovation_std: Option<f64>,
        unstable_source: bool,
    ) -> Self {
        Self {
            samples,
            innovation_std,
            unstable_source,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.nrows() == 0
    }

    pub fn n_nodes(&self) -> usize {
        self.samples.ncols()
    }

    pub fn samples(&self) -> &Array2<f64> {
        &self.samples
    }

    pub fn row(&self, t: usize) -> ndarray::ArrayView1<'_, f64> {
        self.samples.row(t)
    }

    pub fn innovation_std(&self) -> Option<f64> {
        self.innovation_std
    }

    pub fn unstable_source(&self) -> bool {
        self.unstable_source
    }

    /// Largest squared sample magnitude, the empirical bound B_y.
    pub fn max_squared_sample(&self) -> f64 {
        self.samples.iter().map(|y| y * y).fold(0.0, f64::max)
    }
}

/// Ground-truth coefficients over time: constant for a stationary process, one
/// tensor per sample for a time-varying one.
#[derive(Debug, Clone)]
pub enum CoefficientTruth {
    Constant(VarParameters),
    Varying(Vec<VarParameters>),
}

impl CoefficientTruth {
    pub fn at(&self, t: usize) -> &VarParameters {
        match self {
            Self::Constant(p) => p,
            Self::Varying(seq) => &seq[t],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.at(0).n_nodes()
    }

    pub fn order(&self) -> usize {
        self.at(0).order()
    }
}

fn check_sim_args(params: &VarParameters, length: usize, innovation_std: f64) -> Result<bool> {
    if length <= params.order() {
        return Err(Error::InvalidParameter(format!(
            "length {} must exceed the model order {}",
            length,
            params.order()
        )));
    }
    if innovation_std < 0.0 {
        return Err(Error::InvalidParameter(
            "innovation_std must be nonnegative".into(),
        ));
    }
    Ok(companion_spectral_radius(params) >= 1.0)
}

fn recurse(
    coeff_at: impl Fn(usize) -> Array3<f64>,
    n_nodes: usize,
    order: usize,
    total: usize,
    init: Option<&Array2<f64>>,
    innovation_std: f64,
    seed: u64,
) -> Array2<f64> {
    let mut rng = rng_from_seed(seed);
    let mut y = Array2::<f64>::zeros((total, n_nodes));
    if let Some(init_rows) = init {
        y.slice_mut(ndarray::s![0..order, ..]).assign(init_rows);
    }
    let mut row = Array1::<f64>::zeros(n_nodes);
    for t in order..total {
        let coeffs = coeff_at(t);
        row.fill(0.0);
        for n in 0..n_nodes {
            let mut acc = 0.0;
            for n_prime in 0..n_nodes {
                for p in 0..order {
                    acc += coeffs[[n, n_prime, p]] * y[[t - 1 - p, n_prime]];
                }
            }
            row[n] = acc;
        }
        if innovation_std > 0.0 {
            for n in 0..n_nodes {
                let u: f64 = rng.sample(StandardNormal);
                row[n] += innovation_std * u;
            }
        }
        for n in 0..n_nodes {
            y[[t, n]] = row[n];
        }
    }
    y
}

/// Simulate y[t] = sum_p A_p y[t-p] + u[t] with i.i.d. Gaussian innovations.
///
/// The first P rows start at zero, `burn_in` leading samples are discarded,
/// and the remaining `length` rows are returned. Identical seeds give
/// bit-identical output.
pub fn simulate_var(
    params: &VarParameters,
    length: usize,
    innovation_std: f64,
    seed: u64,
    burn_in: usize,
) -> Result<TimeSeriesMatrix> {
    simulate_var_from(params, None, length, innovation_std, seed, burn_in)
}

/// As `simulate_var` but with explicit initial rows (shape P x N) occupying
/// t = 0..P of the pre-burn-in trajectory.
pub fn simulate_var_from(
    params: &VarParameters,
    init: Option<&Array2<f64>>,
    length: usize,
    innovation_std: f64,
    seed: u64,
    burn_in: usize,
) -> Result<TimeSeriesMatrix> {
    let unstable = check_sim_args(params, length, innovation_std)?;
    let n_nodes = params.n_nodes();
    let order = params.order();
    if let Some(init_rows) = init {
        if init_rows.dim() != (order, n_nodes) {
            return Err(Error::DimensionMismatch(format!(
                "init must be {}x{}, got {}x{}",
                order,
                n_nodes,
                init_rows.nrows(),
                init_rows.ncols()
            )));
        }
    }
    let total = burn_in + length;
    let coeffs = params.coeffs().clone();
    let y = recurse(
        |_| coeffs.clone(),
        n_nodes,
        order,
        total,
        init,
        innovation_std,
        seed,
    );
    let out = y.slice(ndarray::s![burn_in.., ..]).to_owned();
    Ok(TimeSeriesMatrix::with_metadata(
        out,
        Some(innovation_std),
        unstable,
    ))
}

/// Configuration of a smooth-transition VAR process interpolating from
/// `params_a` to `params_b` with profile speed `kappa` starting at `t_break`.
#[derive(Debug, Clone)]
pub struct SmoothTransitionConfig {
    pub kappa: f64,
    pub t_break: usize,
    pub params_a: VarParameters,
    pub params_b: VarParameters,
}

impl SmoothTransitionConfig {
    pub fn new(
        kappa: f64,
        t_break: usize,
        params_a: VarParameters,
        params_b: VarParameters,
    ) -> Result<Self> {
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "kappa must be nonnegative, got {kappa}"
            )));
        }
        if params_a.n_nodes() != params_b.n_nodes() || params_a.order() != params_b.order() {
            return Err(Error::DimensionMismatch(
                "params_a and params_b must share N and P".into(),
            ));
        }
        Ok(Self {
            kappa,
            t_break,
            params_a,
            params_b,
        })
    }
}

/// Transition profile s_f[t] = 1 - exp(-kappa * ([t - t_break]_+)^2).
pub fn transition_profile(t: usize, cfg: &SmoothTransitionConfig) -> f64 {
    let dt = t.saturating_sub(cfg.t_break) as f64;
    1.0 - (-cfg.kappa * dt * dt).exp()
}

fn interpolate(cfg: &SmoothTransitionConfig, s: f64) -> Array3<f64> {
    let a = cfg.params_a.coeffs();
    let b = cfg.params_b.coeffs();
    a + &((b - a) * s)
}

/// Instantaneous coefficient tensor A + s_f[t] (B - A) at sample index `t`.
pub fn transition_coefficients(cfg: &SmoothTransitionConfig, t: usize) -> VarParameters {
    VarParameters::new(interpolate(cfg, transition_profile(t, cfg)))
        .expect("interpolation preserves shape")
}

/// Simulate the smooth-transition process and return both the series and the
/// exact per-sample coefficient tensors used to generate it.
pub fn simulate_smooth_transition(
    cfg: &SmoothTransitionConfig,
    length: usize,
    innovation_std: f64,
    seed: u64,
) -> Result<(TimeSeriesMatrix, CoefficientTruth)> {
    if cfg.t_break >= length {
        return Err(Error::InvalidParameter(format!(
            "t_break {} must be below the simulation length {}",
            cfg.t_break, length
        )));
    }
    check_sim_args(&cfg.params_a, length, innovation_std)?;
    let n_nodes = cfg.params_a.n_nodes();
    let order = cfg.params_a.order();

    let truth: Vec<VarParameters> = (0..length).map(|t| transition_coefficients(cfg, t)).collect();

    // Coarse interpolated-stability scan; the interpolation of two stable
    // tensors is expected stable but is not guaranteed for every draw.
    let mut unstable = false;
    let probes = 8usize;
    for k in 0..=probes {
        let t = (length - 1) * k / probes;
        if companion_spectral_radius(&truth[t]) >= 1.0 {
            unstable = true;
            break;
        }
    }

    let y = recurse(
        |t| truth[t].coeffs().clone(),
        n_nodes,
        order,
        length,
        None,
        innovation_std,
        seed,
    );
    Ok((
        TimeSeriesMatrix::with_metadata(y, Some(innovation_std), unstable),
        CoefficientTruth::Varying(truth),
    ))
}
