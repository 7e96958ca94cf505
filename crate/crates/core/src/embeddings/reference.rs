//! Closed-form functionals for the unweighted embedding `L_{p1} ↪ LM_{p2θ,ω}`
//! and the exact factors relating them to the weighted dispatch.

use super::CaseTag;
use crate::error::{MorreyError, Result};
use crate::extreal::ExtReal;
use crate::hardy::{integral_over_t, sup_over_t, EvalConfig};
use crate::integration::radial::unit_ball_volume;
use crate::weights::{lp_norm_interval, tail_norm, RadialProfile};

/// Which of the two reference formulas applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceBranch {
    /// `‖r^a ω(r)‖_{θ,(0,∞)}`.
    Weighted,
    /// `‖t^{a-1/s} ‖ω‖_{θ,(t,∞)}‖_{s,(0,∞)}` with the given `s`.
    Tail { s: f64 },
}

fn inv(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

pub fn reference_branch(p1: f64, p2: f64, theta: f64) -> Result<ReferenceBranch> {
    if !(p2 > 0.0 && p2 <= p1 && theta > 0.0) {
        return Err(MorreyError::InadmissibleExponents(format!(
            "the unweighted reference needs 0 < p2 <= p1 <= ∞ and θ > 0, got p1 = {p1}, p2 = {p2}, θ = {theta}"
        )));
    }
    if p1 == p2 || theta.is_infinite() {
        return Ok(ReferenceBranch::Weighted);
    }
    let s = if theta < p1 {
        if p1.is_infinite() {
            theta
        } else {
            p1 * theta / (p1 - theta)
        }
    } else {
        f64::INFINITY
    };
    Ok(ReferenceBranch::Tail { s })
}

/// The unweighted two-regime functional with `a = n(1/p2 - 1/p1)`.
pub fn unweighted_reference(p1: f64, p2: f64, theta: f64, omega: &RadialProfile, n: usize, cfg: &EvalConfig) -> Result<ExtReal> {
    let a = n as f64 * (inv(p2) - inv(p1));
    match reference_branch(p1, p2, theta)? {
        ReferenceBranch::Weighted => {
            let g = RadialProfile::power(1.0, a).times(omega.clone());
            lp_norm_interval(&g, theta, 0.0, f64::INFINITY, &cfg.quad)
        }
        ReferenceBranch::Tail { s } => {
            let breaks = omega.breakpoints();
            let g = |t: f64| Ok(ExtReal::clamp(t.powf(a - inv(s))) * tail_norm(omega, theta, t, &cfg.quad)?);
            if s.is_infinite() {
                sup_over_t(&g, &breaks, cfg)
            } else {
                let gs = |t: f64| g(t)?.pow(s);
                integral_over_t(&gs, &breaks, cfg)?.pow(1.0 / s)
            }
        }
    }
}

/// The exact factor `K` with `embedding constant = K · reference` for
/// unit weights, or `None` outside the Lebesgue-to-Morrey family.
pub fn reference_factor(tag: &CaseTag, p1: f64, p2: f64, theta: f64, n: usize) -> Option<f64> {
    use super::Theorem;
    if tag.theorem != Theorem::Main1 {
        return None;
    }
    let gamma = inv(p2) - inv(p1);
    let ball = unit_ball_volume(n).powf(gamma);
    let a = n as f64 * gamma;
    Some(match tag.case_id {
        "i" | "iii" | "iv" => ball,
        "ii" | "v" => {
            let s = match reference_branch(p1, p2, theta).ok()? {
                ReferenceBranch::Tail { s } => s,
                ReferenceBranch::Weighted => return None,
            };
            ball * (a * theta).powf(1.0 / s)
        }
        "vi" | "viii" | "ix" => 1.0,
        "vii" => {
            let s = p1 * theta / (p1 - theta);
            ((p1 - theta) / p1).powf(1.0 / s)
        }
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn branches() {
        assert_eq!(reference_branch(2.0, 2.0, 0.5).unwrap(), ReferenceBranch::Weighted);
        assert_eq!(reference_branch(2.0, 1.0, f64::INFINITY).unwrap(), ReferenceBranch::Weighted);
        assert_eq!(reference_branch(3.0, 1.0, 1.5).unwrap(), ReferenceBranch::Tail { s: 3.0 });
        assert_eq!(reference_branch(3.0, 1.0, 3.0).unwrap(), ReferenceBranch::Tail { s: f64::INFINITY });
        assert!(reference_branch(1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn equal_exponents() {
        let om = RadialProfile::truncated_power(1.0, -1.0, 2.0);
        let r = unweighted_reference(2.0, 2.0, 2.0, &om, 3, &EvalConfig::default()).unwrap();
        assert_relative_eq!(r.value(), 0.5f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn sup_branch_closed_form() {
        // a = 1/2, ω = ρ^{-1} on (1,∞), θ = ∞: sup_r r^{1/2} ω(r) over r > 1 is 1.
        let om = RadialProfile::truncated_power(1.0, -1.0, 1.0);
        let r = unweighted_reference(2.0, 1.0, f64::INFINITY, &om, 1, &EvalConfig::default()).unwrap();
        assert_relative_eq!(r.value(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn tail_branch_closed_form() {
        // p1 = 3, p2 = 1, θ = 1, n = 1: a = 2/3, s = 3/2.
        // ω = ρ^{-2} on (1,∞): ‖ω‖_{1,(t,∞)} = 1/max(t,1).
        // ∫ t^{(a-1/s)s} ‖ω‖^s dt = ∫_0^1 1 dt + ∫_1^∞ t^{-3/2} dt = 3.
        let om = RadialProfile::truncated_power(1.0, -2.0, 1.0);
        let r = unweighted_reference(3.0, 1.0, 1.0, &om, 1, &EvalConfig::default()).unwrap();
        assert_relative_eq!(r.value(), 3f64.powf(2.0 / 3.0), max_relative = 1e-9);
    }
}
