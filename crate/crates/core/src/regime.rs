//! Viability arithmetic for the step size and dephasing-rate budget.
//!
//! A bidirectional walk with per-step duration `tau` and dephasing rate
//! `lambda` (units 1/s^2) accumulates phase `z = tau^2 * lambda` per step, so
//! an `N`-step walk spans total time `T = N * tau` and meets its first
//! interference revival when `z * (N + 1)` reaches `3 pi`, i.e. near
//! `T = 3 pi / (tau * lambda)`.  The rate is parameterized by the fraction
//! `f` of the energy budget driving dephasing: `lambda = sqrt(f) * 1e57`.
//!
//! Durations below the window's lower edge cannot be resolved (or, in strict
//! mode, do not contain enough steps for the asymptotics to hold); durations
//! above the upper edge land past the first revival where the principal peak
//! no longer dominates.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::tol::MUCH_LESS_RATIO;

/// Planck time in seconds, the default fixed step duration.
pub const PLANCK_TIME_S: f64 = 5e-44;

/// Dephasing-rate coefficient in 1/s^2: `lambda = sqrt(fraction) * RATE_COEFF_PER_S2`.
pub const RATE_COEFF_PER_S2: f64 = 1e57;

/// Seconds per year, used when reporting durations in years.
pub const SECONDS_PER_YEAR: f64 = 3.156e7;

/// Shortest experimentally resolvable interval in seconds; the relaxed
/// lower window edge.
pub const RESOLUTION_FLOOR_S: f64 = 1e-17;

/// Stringent lower-edge coefficient: the many-step floor is
/// `STRINGENT_FLOOR_COEFF_S / sqrt(fraction)` seconds.
pub const STRINGENT_FLOOR_COEFF_S: f64 = 1e-13;

/// How the per-step duration depends on the number of steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TauModel {
    /// Constant step duration in seconds.
    Fixed { tau_s: f64 },
    /// Step duration `c / sqrt(N + 1)` for an `N`-step walk, which keeps the
    /// total accumulated phase `(N + 1) * tau^2 * lambda` independent of `N`.
    Scaled { c: f64 },
}

/// Dephasing budget fraction plus step-duration model.
#[derive(Clone, Copy, Debug)]
pub struct RegimeInputs {
    fraction: f64,
    tau_model: TauModel,
}

impl RegimeInputs {
    /// Creates inputs, requiring `fraction` in (0, 1] and a positive finite
    /// step scale.
    pub fn new(fraction: f64, tau_model: TauModel) -> Result<Self> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::Domain(format!(
                "budget fraction must lie in (0, 1], got {fraction}"
            )));
        }
        let scale = match tau_model {
            TauModel::Fixed { tau_s } => tau_s,
            TauModel::Scaled { c } => c,
        };
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Domain(format!(
                "step scale must be positive and finite, got {scale}"
            )));
        }
        Ok(Self {
            fraction,
            tau_model,
        })
    }

    /// Fixed Planck-time steps with the given budget fraction.
    pub fn planck_fixed(fraction: f64) -> Result<Self> {
        Self::new(
            fraction,
            TauModel::Fixed {
                tau_s: PLANCK_TIME_S,
            },
        )
    }

    pub fn fraction(&self) -> f64 {
        self.fraction
    }

    pub fn tau_model(&self) -> TauModel {
        self.tau_model
    }

    /// Dephasing rate `sqrt(fraction) * RATE_COEFF_PER_S2` in 1/s^2.
    pub fn dephasing_rate(&self) -> f64 {
        self.fraction.sqrt() * RATE_COEFF_PER_S2
    }

    /// Step duration used for an `N`-step walk under the configured model.
    pub fn effective_tau(&self, steps: u64) -> f64 {
        match self.tau_model {
            TauModel::Fixed { tau_s } => tau_s,
            TauModel::Scaled { c } => c / (steps as f64 + 1.0).sqrt(),
        }
    }

    fn fixed_tau(&self) -> Result<f64> {
        match self.tau_model {
            TauModel::Fixed { tau_s } => Ok(tau_s),
            TauModel::Scaled { .. } => Err(Error::WrongTauModel { required: "fixed" }),
        }
    }

    fn scaled_c(&self) -> Result<f64> {
        match self.tau_model {
            TauModel::Scaled { c } => Ok(c),
            TauModel::Fixed { .. } => Err(Error::WrongTauModel { required: "scaled" }),
        }
    }
}

/// Admissible range of total evolved duration, in seconds.
#[derive(Clone, Copy, Debug)]
pub struct RegimeWindow {
    /// Smallest admissible total duration.
    pub lower_s: f64,
    /// Largest admissible total duration (first-revival bound).
    pub upper_s: f64,
    /// Whether the stringent many-step floor set the lower edge.
    pub strict: bool,
    /// True when the two edges cannot both be honored.
    pub conflict: bool,
}

/// Largest total duration `3 pi / (tau * lambda)` before the first revival.
///
/// Defined only for the fixed step model; with scaled steps the product
/// `tau * lambda` varies with the walk length and no single bound exists.
pub fn upper_bound_total_time(inputs: &RegimeInputs) -> Result<f64> {
    let tau = inputs.fixed_tau()?;
    Ok(3.0 * PI / (tau * inputs.dephasing_rate()))
}

/// Admissible duration window for fixed steps.
///
/// The relaxed lower edge is the resolution floor, a hard instrumental limit
/// compared directly against the upper edge.  The stringent lower edge
/// `STRINGENT_FLOOR_COEFF_S / sqrt(fraction)` and the revival bound are both
/// order-of-magnitude requirements: a duration honors them only when it
/// exceeds the lower edge and undercuts the upper edge by a factor of at
/// least `1 / MUCH_LESS_RATIO`, so the strict window conflicts when
/// `lower / MUCH_LESS_RATIO > upper * MUCH_LESS_RATIO`.
pub fn validity_window(inputs: &RegimeInputs, strict: bool) -> Result<RegimeWindow> {
    let upper_s = upper_bound_total_time(inputs)?;
    if strict {
        let lower_s = STRINGENT_FLOOR_COEFF_S / inputs.fraction().sqrt();
        Ok(RegimeWindow {
            lower_s,
            upper_s,
            strict: true,
            conflict: lower_s / MUCH_LESS_RATIO > upper_s * MUCH_LESS_RATIO,
        })
    } else {
        Ok(RegimeWindow {
            lower_s: RESOLUTION_FLOOR_S,
            upper_s,
            strict: false,
            conflict: RESOLUTION_FLOOR_S >= upper_s,
        })
    }
}

/// Budget fraction whose revival bound equals `total_time_s` at fixed step
/// duration `tau_s`: `f = (3 pi / (tau * T * RATE_COEFF_PER_S2))^2`.
///
/// The result exceeds 1 when no admissible fraction reaches the requested
/// duration.
pub fn required_fraction_for_duration(tau_s: f64, total_time_s: f64) -> Result<f64> {
    if !(tau_s > 0.0 && tau_s.is_finite()) {
        return Err(Error::Domain(format!(
            "step duration must be positive and finite, got {tau_s}"
        )));
    }
    if !(total_time_s > 0.0 && total_time_s.is_finite()) {
        return Err(Error::Domain(format!(
            "total duration must be positive and finite, got {total_time_s}"
        )));
    }
    let ratio = 3.0 * PI / (tau_s * total_time_s * RATE_COEFF_PER_S2);
    Ok(ratio * ratio)
}

/// Outcome of checking `c^2 * lambda << 3 pi` for scaled steps.
#[derive(Clone, Copy, Debug)]
pub struct TauScalingCheck {
    /// `c^2 * lambda / (3 pi)`: the fixed total accumulated phase in units
    /// of the first revival.
    pub margin: f64,
    /// True when the margin does not exceed `MUCH_LESS_RATIO`.
    pub satisfied: bool,
    /// Rate at which the first subsidiary peak would be reached: `3 pi / c^2`.
    pub first_subsidiary_rate: f64,
}

/// Checks that scaled steps keep the walk inside the principal peak for the
/// configured rate, regardless of the number of steps.
pub fn tau_scaling_check(inputs: &RegimeInputs) -> Result<TauScalingCheck> {
    let c = inputs.scaled_c()?;
    let margin = c * c * inputs.dephasing_rate() / (3.0 * PI);
    Ok(TauScalingCheck {
        margin,
        satisfied: margin <= MUCH_LESS_RATIO,
        first_subsidiary_rate: 3.0 * PI / (c * c),
    })
}

/// Ratio of the first subsidiary-peak position `3 pi / (N + 1)` to the
/// per-step phase `tau^2 * lambda` for an `N`-step walk.
///
/// Values well above 1 mean the walk samples the principal peak far more
/// finely than the subsidiary structure.  With scaled steps the `N + 1`
/// factors cancel and the ratio `3 pi / (c^2 * lambda)` is independent of
/// the walk length.
pub fn subsidiary_vs_width_ratio(inputs: &RegimeInputs, steps: u64) -> f64 {
    let tau = inputs.effective_tau(steps);
    let z_step = tau * tau * inputs.dephasing_rate();
    3.0 * PI / (steps as f64 + 1.0) / z_step
}
