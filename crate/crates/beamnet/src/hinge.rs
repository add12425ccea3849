//! Softening hinge embedded at the element midpoint.
//!
//! Only the axial component of the displacement jump is active: the hinge
//! carries an opening `xi` [mm] and an internal softening variable `alpha`
//! [mm]. The failure surface is `phi = N - (n_bar + h * alpha)`; with the
//! interpolation of the jump the trial force reads
//! `N_trial = EA * (eps - xi_n / l_e)`. Linear softening closes the return
//! mapping in a single corrector pass.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::beam::FiberSection;

/// Relative residual (times `n_bar`) below which the surface counts as met.
pub const RETURN_MAP_THRESHOLD: f64 = 1e-10;

/// Defensive cap on corrector passes; linear softening needs exactly one.
const MAX_CORRECTOR_PASSES: usize = 32;

/// State of one hinge, committed at converged steps.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HingeState {
    /// Axial opening of the discontinuity [mm].
    pub xi: f64,
    /// Softening variable, monotone non-decreasing [mm].
    pub alpha: f64,
    /// Set once `alpha` reaches `alpha_max`; never cleared.
    pub ruptured: bool,
}

/// Elastic predictor quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialState {
    /// Axial force assuming the opening stays frozen [N].
    pub n_trial: f64,
    /// Failure-surface value of the trial force [N].
    pub phi_trial: f64,
}

/// Failures of the hinge update.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HingeError {
    #[error(
        "snap-back: element length {l_e} reaches the stability limit \
         EA/|h| = {l_max}; refine the mesh below the limit"
    )]
    SnapBack { l_e: f64, l_max: f64 },
}

/// Opening at which the softening law reaches zero force:
/// `alpha_max = n_bar / |h| = 2 g_f / n_bar`.
pub fn alpha_max(section: &FiberSection) -> f64 {
    section.n_bar / section.h.abs()
}

/// Elastic predictor for a given midpoint axial strain.
pub fn trial_state(
    eps: f64,
    state: &HingeState,
    section: &FiberSection,
    l_e: f64,
) -> TrialState {
    let n_trial = section.ea() * (eps - state.xi / l_e);
    let phi_trial = n_trial - (section.n_bar + section.h * state.alpha);
    TrialState { n_trial, phi_trial }
}

/// Predictor-corrector update of the hinge.
///
/// Returns the axial force together with the new state. An elastic trial
/// state passes through unchanged; an inadmissible one is corrected until
/// the surface is met, which linear softening achieves in one pass. When
/// `alpha` reaches [`alpha_max`] the increment is cut back to land exactly
/// on the rupture point and the force drops to zero. A ruptured input state
/// is absorbing and keeps a zero force.
pub fn return_map(
    trial: &TrialState,
    state: &HingeState,
    section: &FiberSection,
    l_e: f64,
) -> Result<(f64, HingeState), HingeError> {
    if state.ruptured {
        return Ok((0.0, *state));
    }
    let threshold = RETURN_MAP_THRESHOLD * section.n_bar;
    if trial.phi_trial <= threshold {
        return Ok((trial.n_trial, *state));
    }

    let ea_over_l = section.ea() / l_e;
    let a_max = alpha_max(section);
    let mut n = trial.n_trial;
    let mut xi = state.xi;
    let mut alpha = state.alpha;
    let mut phi = trial.phi_trial;

    for _ in 0..MAX_CORRECTOR_PASSES {
        let sign = if n >= 0.0 { 1.0 } else { -1.0 };
        let denominator = section.h + ea_over_l * sign;
        if denominator <= 0.0 {
            return Err(HingeError::SnapBack {
                l_e,
                l_max: section.ea() / section.h.abs(),
            });
        }
        let mut dgamma = phi / denominator;
        if alpha + dgamma >= a_max {
            dgamma = a_max - alpha;
            return Ok((
                0.0,
                HingeState {
                    xi: xi + dgamma * sign,
                    alpha: a_max,
                    ruptured: true,
                },
            ));
        }
        n -= ea_over_l * dgamma * sign;
        xi += dgamma * sign;
        alpha += dgamma;
        phi = n - (section.n_bar + section.h * alpha);
        if phi.abs() <= threshold {
            break;
        }
    }
    Ok((n, HingeState { xi, alpha, ruptured: false }))
}

/// Energy dissipated by the hinge so far: the area swept under the
/// softening line, `n_bar * alpha + h * alpha^2 / 2`, saturating at `g_f`.
pub fn dissipation(state: &HingeState, section: &FiberSection) -> f64 {
    if state.ruptured {
        return section.g_f;
    }
    let d = section.n_bar * state.alpha + section.h * state.alpha.powi(2) / 2.0;
    d.min(section.g_f)
}
