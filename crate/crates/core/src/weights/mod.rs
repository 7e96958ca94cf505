//! Radial weights, their one-dimensional interval norms and class checks.

mod muckenhoupt;
pub mod piecewise;
mod profile;

pub use muckenhoupt::{ap_report, default_ball_family, muckenhoupt_ap_estimate, ApReport, BallSample};
pub use profile::{Monotonicity, RadialProfile, Segment};

use crate::error::{MorreyError, Result};
use crate::extreal::{pow_nonneg, ExtReal};
use crate::integration::quadrature::QuadratureConfig;
use crate::integration::radial::check_dimension;

/// `x ↦ profile(|x|)` on `ℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    pub n: usize,
    pub profile: RadialProfile,
}

impl Weight {
    pub fn new(n: usize, profile: RadialProfile) -> Result<Self> {
        check_dimension(n)?;
        profile.validate()?;
        Ok(Weight { n, profile })
    }

    pub fn unit(n: usize) -> Self {
        Weight {
            n,
            profile: RadialProfile::constant(1.0),
        }
    }

    pub fn eval(&self, rho: f64) -> ExtReal {
        ExtReal::clamp(self.profile.eval(rho))
    }
}

/// `‖φ‖_{q,(a,b)}`: `(∫_a^b φ^q)^{1/q}`, or the essential supremum for `q = ∞`.
pub fn lp_norm_interval(phi: &RadialProfile, q: f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<ExtReal> {
    if !(q > 0.0) {
        return Err(MorreyError::InvalidExponent(q));
    }
    if !(0.0 <= a && a < b) {
        return Ok(ExtReal::ZERO);
    }
    if q.is_infinite() {
        return ExtReal::new(phi.esssup(a, b));
    }
    let m = phi.moment(q, 0.0, a, b, cfg)?;
    Ok(ExtReal::clamp(pow_nonneg(m.value.value(), 1.0 / q)))
}

/// `‖ω‖_{θ,(t,∞)}`.
pub fn tail_norm(omega: &RadialProfile, theta: f64, t: f64, cfg: &QuadratureConfig) -> Result<ExtReal> {
    lp_norm_interval(omega, theta, t, f64::INFINITY, cfg)
}

/// `‖ω‖_{θ,(0,t)}`.
pub fn head_norm(omega: &RadialProfile, theta: f64, t: f64, cfg: &QuadratureConfig) -> Result<ExtReal> {
    lp_norm_interval(omega, theta, 0.0, t, cfg)
}

/// `lim_{s→t-} ‖ω‖_{θ,(s,∞)}`.
pub fn tail_norm_left_limit(omega: &RadialProfile, theta: f64, t: f64, cfg: &QuadratureConfig) -> Result<ExtReal> {
    let plain = tail_norm(omega, theta, t, cfg)?;
    if theta.is_finite() {
        return Ok(plain);
    }
    Ok(plain.max(ExtReal::clamp(omega.left_limit(t))))
}

/// `lim_{s→t+} ‖ω‖_{θ,(0,s)}`.
pub fn head_norm_right_limit(omega: &RadialProfile, theta: f64, t: f64, cfg: &QuadratureConfig) -> Result<ExtReal> {
    let plain = head_norm(omega, theta, t, cfg)?;
    if theta.is_finite() {
        return Ok(plain);
    }
    Ok(plain.max(ExtReal::clamp(omega.right_limit(t))))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaMembership {
    /// `0 < ‖ω‖_{θ,(t,∞)} < ∞` for every `t > 0`.
    pub in_omega_theta: bool,
    /// `0 < ‖ω‖_{θ,(0,t)} < ∞` for every `t > 0`.
    pub in_dual_omega_theta: bool,
    /// First sampled point where a check failed, if any.
    pub witness_t: Option<f64>,
    /// True when decided analytically rather than by sampling.
    pub certified: bool,
}

/// Log-spaced grid over `[1e-6, 1e6]`.
pub fn default_sample_grid() -> Vec<f64> {
    (0..=120).map(|i| 10f64.powf(-6.0 + 0.1 * i as f64)).collect()
}

/// Decides membership of `ω` in `Ω_θ` and the dual class.
pub fn omega_class_check(omega: &RadialProfile, theta: f64, grid: &[f64], cfg: &QuadratureConfig) -> OmegaMembership {
    if let Some(pw) = omega.closed_form() {
        let any_inf = pw.segs.iter().any(|s| s.0.is_infinite());
        let (cl, al) = *pw.segs.last().unwrap();
        let (cf, af) = pw.segs[0];
        let tail_ok = cl == 0.0 || if theta.is_infinite() { al <= 0.0 } else { al * theta < -1.0 };
        let head_ok = cf == 0.0 || if theta.is_infinite() { af >= 0.0 } else { af * theta > -1.0 };
        return OmegaMembership {
            in_omega_theta: !any_inf && cl > 0.0 && tail_ok,
            in_dual_omega_theta: !any_inf && cf > 0.0 && head_ok,
            witness_t: None,
            certified: true,
        };
    }
    let good = |v: Result<ExtReal>| matches!(v, Ok(x) if x.is_finite() && !x.is_zero());
    let mut witness = None;
    let mut in_omega = true;
    let mut in_dual = true;
    for &t in grid {
        if in_omega && !good(tail_norm(omega, theta, t, cfg)) {
            in_omega = false;
            witness.get_or_insert(t);
        }
        if in_dual && !good(head_norm(omega, theta, t, cfg)) {
            in_dual = false;
            witness.get_or_insert(t);
        }
    }
    OmegaMembership {
        in_omega_theta: in_omega,
        in_dual_omega_theta: in_dual,
        witness_t: witness,
        certified: false,
    }
}
