use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floor substituted for lambda_max when the statistics are degenerate
/// (no informative sample yet), giving alpha = c / EPS_LAMBDA.
const EPS_LAMBDA: f64 = 1e-12;

/// Step-size rules for the online updates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSizeSchedule {
    /// alpha_t = alpha.
    Constant { alpha: f64 },
    /// alpha_t = 1 / (beta * t).
    Diminishing { beta: f64 },
    /// Doubling trick: alpha = c / sqrt(t0 * 2^(m-1)) inside window
    /// t0 2^(m-1) < t <= t0 2^m, with a pre-window [P, t0] at c / sqrt(t0).
    Doubling { t0: usize, c: f64 },
    /// alpha_t = c / lambda_max(Phi[t]).
    Adaptive { c: f64 },
    /// alpha_t = c / max_{tau <= t} lambda_max(Phi[tau]), the running-max
    /// approximation of the Lipschitz constant.
    AdaptiveMax { c: f64 },
}

impl StepSizeSchedule {
    pub fn needs_phi(&self) -> bool {
        matches!(self, Self::Adaptive { .. } | Self::AdaptiveMax { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Self::Constant { alpha } => *alpha > 0.0,
            Self::Diminishing { beta } => *beta > 0.0,
            Self::Doubling { t0, c } => *t0 >= 1 && *c > 0.0,
            Self::Adaptive { c } | Self::AdaptiveMax { c } => *c > 0.0 && *c <= 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "invalid step-size schedule {self:?}"
            )))
        }
    }
}

/// Step size at sample index `t` (t >= P). Adaptive variants require the
/// current (or running-max) lambda_max of Phi[t]; a non-positive value falls
/// back to the EPS_LAMBDA floor.
pub fn step_size_at(schedule: &StepSizeSchedule, t: usize, lambda_max: Option<f64>) -> Result<f64> {
    match schedule {
        StepSizeSchedule::Constant { alpha } => Ok(*alpha),
        StepSizeSchedule::Diminishing { beta } => {
            if t == 0 {
                return Err(Error::InvalidParameter(
                    "diminishing step size undefined at t = 0".into(),
                ));
            }
            Ok(1.0 / (beta * t as f64))
        }
        StepSizeSchedule::Doubling { t0, c } => {
            let t0f = *t0 as f64;
            if t <= *t0 {
                return Ok(c / t0f.sqrt());
            }
            // window m = ceil(log2(t / t0)) covers t0 2^(m-1) < t <= t0 2^m
            let m = (t as f64 / t0f).log2().ceil() as i32;
            Ok(c / (t0f * 2f64.powi(m - 1)).sqrt())
        }
        StepSizeSchedule::Adaptive { c } | StepSizeSchedule::AdaptiveMax { c } => {
            let l = lambda_max.ok_or_else(|| {
                Error::InvalidParameter("adaptive step size requires lambda_max(Phi)".into())
            })?;
            if l <= 0.0 {
                return Ok(c / EPS_LAMBDA);
            }
            Ok(c / l)
        }
    }
}
