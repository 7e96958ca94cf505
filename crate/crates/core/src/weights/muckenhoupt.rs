//! Sampled lower estimates of the Muckenhoupt `A_p` constant of a radial weight.

use statrs::function::beta::beta_reg;

use super::Weight;
use crate::error::{MorreyError, Result};
use crate::extreal::{mul_nonneg, pow_nonneg, ExtReal};
use crate::integration::quadrature::{integrate_halfline, QuadratureConfig};
use crate::integration::radial::{sphere_area, unit_ball_volume};

/// A ball of radius `radius` whose center lies at distance `offset·radius`
/// from the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSample {
    pub offset: f64,
    pub radius: f64,
}

/// Balls over a range of scales and offsets. `level` 0 is the coarse
/// family; level 1 refines both radii and offsets and contains level 0.
pub fn default_ball_family(level: u32) -> Vec<BallSample> {
    let (step, kmax, offsets): (f64, i32, &[f64]) = if level == 0 {
        (4.0, 5, &[0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0])
    } else {
        (
            2.0,
            10,
            &[
                0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0, 1.125, 1.25, 1.375, 1.5, 1.75, 2.0, 2.5, 3.0,
                4.0, 5.0, 7.5, 10.0,
            ],
        )
    };
    let mut out = Vec::new();
    for k in -kmax..=kmax {
        for &offset in offsets {
            out.push(BallSample {
                offset,
                radius: step.powi(k),
            });
        }
    }
    out
}

/// Fraction of the sphere `|x| = ρ` inside the ball of radius `r` centered
/// at distance `d` from the origin.
fn sphere_fraction(n: usize, rho: f64, d: f64, r: f64) -> f64 {
    if n == 1 {
        let inside = |x: f64| ((x - d).abs() < r) as u8 as f64;
        return 0.5 * (inside(rho) + inside(-rho));
    }
    if d == 0.0 {
        return (rho < r) as u8 as f64;
    }
    let kappa = (rho * rho + d * d - r * r) / (2.0 * rho * d);
    if kappa >= 1.0 {
        return 0.0;
    }
    if kappa <= -1.0 {
        return 1.0;
    }
    let half_cap = 0.5 * beta_reg((n as f64 - 1.0) / 2.0, 0.5, 1.0 - kappa * kappa);
    if kappa >= 0.0 {
        half_cap
    } else {
        1.0 - half_cap
    }
}

/// `∫_B w(x)^e dx` for the sampled ball `B`.
fn ball_power_integral(w: &Weight, e: f64, ball: BallSample, cfg: &QuadratureConfig) -> Result<f64> {
    let n = w.n;
    let r = ball.radius;
    let d = ball.offset * r;
    let m = n as f64 - 1.0;
    let sigma = sphere_area(n);
    // Spheres of radius below r - d lie entirely inside the ball.
    let full = (r - d).max(0.0);
    let inner = if full > 0.0 {
        w.profile.moment(e, m, 0.0, full, cfg)?.value.value()
    } else {
        0.0
    };
    let lo = (d - r).abs();
    let hi = d + r;
    let partial = if hi > lo {
        let f = |rho: f64| {
            let frac = sphere_fraction(n, rho, d, r);
            if frac == 0.0 {
                0.0
            } else {
                mul_nonneg(pow_nonneg(w.profile.eval(rho), e), rho.powf(m) * frac)
            }
        };
        integrate_halfline(&f, lo, hi, &w.profile.breakpoints(), cfg)?.value.value()
    } else {
        0.0
    };
    Ok(sigma * (inner + partial))
}

/// `sup_B (∫_B w)(∫_B w^{1-p'})^{p-1} / |B|^p` over the sampled balls.
pub fn muckenhoupt_ap_estimate(w: &Weight, p: f64, family: &[BallSample], cfg: &QuadratureConfig) -> Result<ExtReal> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(MorreyError::InadmissibleExponents(format!("A_p needs 1 < p < ∞, got p = {p}")));
    }
    let dual_power = -1.0 / (p - 1.0);
    let vn = unit_ball_volume(w.n);
    let mut best = ExtReal::ZERO;
    for &ball in family {
        let a = ball_power_integral(w, 1.0, ball, cfg)?;
        let b = ball_power_integral(w, dual_power, ball, cfg)?;
        let measure = vn * ball.radius.powi(w.n as i32);
        let v = mul_nonneg(a, pow_nonneg(b, p - 1.0)) / measure.powf(p);
        best = best.max(ExtReal::clamp(v));
        if best.is_infinite() {
            break;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApReport {
    pub estimate: ExtReal,
    pub refined: ExtReal,
    /// Finite on both families and stable to 5% under refinement.
    pub likely_ap: bool,
}

pub fn ap_report(w: &Weight, p: f64, cfg: &QuadratureConfig) -> Result<ApReport> {
    let estimate = muckenhoupt_ap_estimate(w, p, &default_ball_family(0), cfg)?;
    let refined = muckenhoupt_ap_estimate(w, p, &default_ball_family(1), cfg)?;
    let likely_ap = estimate.is_finite() && refined.is_finite() && refined.value() <= 1.05 * estimate.value();
    Ok(ApReport {
        estimate,
        refined,
        likely_ap,
    })
}
