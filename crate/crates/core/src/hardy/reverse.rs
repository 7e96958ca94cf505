use super::{sup_over_t, EvalConfig, HardyProblem, HardyVariant};
use crate::error::{MorreyError, Result};
use crate::extreal::{conjugate_exponent, pow_nonneg, ExtReal};
use crate::integration::radial::sphere_area;
use crate::integration::stieltjes::{stieltjes_integral, IntegratorDirection, MonotoneIntegrator};
use crate::weights::{head_norm, head_norm_right_limit, lp_norm_interval, tail_norm, tail_norm_left_limit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReverseCase {
    /// `0 < q ≤ p ≤ 1`: a supremum.
    A,
    /// `0 < p ≤ 1`, `p < q ≤ ∞`: a Stieltjes integral plus a boundary term.
    B,
}

impl ReverseCase {
    pub fn label(self) -> &'static str {
        match self {
            ReverseCase::A => "a",
            ReverseCase::B => "b",
        }
    }
}

/// Which cumulative function drives the Stieltjes integral in case (b).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegratorLimit {
    /// `‖u‖_{q,(t-,∞)}` (or `‖u‖_{q,(0,t+)}` for the complement operator).
    OneSided,
    /// `‖u‖_{q,(t,∞)}` (or `‖u‖_{q,(0,t)}`).
    Plain,
}

pub fn reverse_case(p: f64, q: f64) -> Result<ReverseCase> {
    if !(p > 0.0 && p <= 1.0) || !(q > 0.0) {
        return Err(MorreyError::InadmissibleExponents(format!(
            "the reverse inequality needs 0 < p <= 1 and 0 < q <= ∞, got p = {p}, q = {q}"
        )));
    }
    Ok(if q <= p { ReverseCase::A } else { ReverseCase::B })
}

/// Points where the one-dimensional weight's norms are probed for the
/// finiteness hypothesis.
fn hypothesis_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (-12..=12).map(|k| 10f64.powi(k)).collect();
    g.extend((0..=120).map(|i| 10f64.powf(-6.0 + 0.1 * i as f64)));
    g
}

pub(super) fn evaluate(prob: &HardyProblem, case: ReverseCase, limit: IntegratorLimit, cfg: &EvalConfig) -> Result<ExtReal> {
    let (main, boundary) = evaluate_parts(prob, case, limit, cfg)?;
    Ok(main + boundary)
}

/// The two summands of the functional; the boundary term is zero in case (a).
pub(crate) fn evaluate_parts(
    prob: &HardyProblem,
    case: ReverseCase,
    limit: IntegratorLimit,
    cfg: &EvalConfig,
) -> Result<(ExtReal, ExtReal)> {
    let complement = match prob.variant {
        HardyVariant::Reverse => false,
        HardyVariant::ReverseComplement => true,
        v => return Err(MorreyError::InadmissibleExponents(format!("not a reverse problem: {v:?}"))),
    };
    let (p, q) = (prob.p, prob.q);
    let u = &prob.v_outer;
    let w = &prob.w_inner;
    let quad = &cfg.quad;
    let pp = conjugate_exponent(p)?.value();
    let sigma = sphere_area(w.n);
    let m = w.n as f64 - 1.0;

    // ‖w‖_{p', E} with E = ℝⁿ∖B(0,t) (ball operator) or B(0,t) (complement operator).
    let w_norm_between = |a: f64, b: f64| -> Result<ExtReal> {
        if pp.is_infinite() {
            return Ok(ExtReal::clamp(w.profile.esssup(a, b)));
        }
        let mass = ExtReal::clamp(sigma) * w.profile.moment(pp, m, a, b, quad)?.value;
        mass.pow(1.0 / pp)
    };
    let w_norm = |t: f64| {
        if complement {
            w_norm_between(0.0, t)
        } else {
            w_norm_between(t, f64::INFINITY)
        }
    };
    // ‖u‖_{q,(t,∞)} (ball operator) or ‖u‖_{q,(0,t)}.
    let u_norm = |t: f64| if complement { head_norm(u, q, t, quad) } else { tail_norm(u, q, t, quad) };

    for t in hypothesis_grid() {
        if u_norm(t)?.is_infinite() {
            return Err(MorreyError::HypothesisViolated(format!(
                "the {} norm of u of order {q} is infinite at t = {t}",
                if complement { "head" } else { "tail" }
            )));
        }
    }

    match case {
        ReverseCase::A => {
            let f = |t: f64| Ok(w_norm(t)? / u_norm(t)?);
            Ok((sup_over_t(&f, &prob.breakpoints(), cfg)?, ExtReal::ZERO))
        }
        ReverseCase::B => {
            let r = if q.is_infinite() { p } else { 1.0 / (1.0 / p - 1.0 / q) };
            let failure = std::sync::Mutex::new(None);
            let record = |e: MorreyError| {
                failure.lock().unwrap().get_or_insert(e);
                f64::NAN
            };
            let f = |t: f64| match w_norm(t).and_then(|x| x.pow(r)) {
                Ok(v) => v.value(),
                Err(e) => record(e),
            };
            let inv = |x: Result<ExtReal>| match x {
                Ok(v) => pow_nonneg(v.value(), -r),
                Err(e) => record(e),
            };
            let one_sided = limit == IntegratorLimit::OneSided;
            let integral = {
                let inv = &inv;
                let integrator = if complement {
                    // φ(t) = ‖u‖_{q,(0,t+)}^{-r}, non-increasing and right-continuous.
                    let left = move |t: f64| inv(head_norm(u, q, t, quad));
                    let right = move |t: f64| inv(head_norm_right_limit(u, q, t, quad));
                    let value = move |t: f64| if one_sided { right(t) } else { left(t) };
                    MonotoneIntegrator::new(IntegratorDirection::NonIncreasing, value, left, value, u.breakpoints())
                        .with_infinity_test(move |t| u.esssup(0.0, t) == 0.0)
                } else {
                    // h(t) = ‖u‖_{q,(t-,∞)}^{-r}, non-decreasing and left-continuous.
                    let left = move |t: f64| inv(tail_norm_left_limit(u, q, t, quad));
                    let right = move |t: f64| inv(tail_norm(u, q, t, quad));
                    let value = move |t: f64| if one_sided { left(t) } else { right(t) };
                    MonotoneIntegrator::new(IntegratorDirection::NonDecreasing, value, value, right, u.breakpoints())
                        .with_infinity_test(move |t| u.esssup(t, f64::INFINITY) == 0.0)
                };
                stieltjes_integral(&f, &integrator, 0.0, f64::INFINITY, quad)
            };
            if let Some(e) = failure.into_inner().unwrap() {
                return Err(e);
            }
            let main = integral?.value.pow(1.0 / r)?;
            let boundary = w_norm_between(0.0, f64::INFINITY)? / lp_norm_interval(u, q, 0.0, f64::INFINITY, quad)?;
            Ok((main, boundary))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::{reverse_hardy_c, reverse_hardy_c_star, reverse_hardy_c_with};
    use crate::weights::{RadialProfile, Weight};
    use approx::assert_relative_eq;

    fn prob(variant: HardyVariant, p: f64, q: f64, u: RadialProfile, w: RadialProfile) -> HardyProblem {
        HardyProblem::new(variant, p, q, u, Weight::new(1, w).unwrap())
    }

    #[test]
    fn case_split() {
        assert_eq!(reverse_case(0.5, 0.5).unwrap(), ReverseCase::A);
        assert_eq!(reverse_case(1.0, 0.3).unwrap(), ReverseCase::A);
        assert_eq!(reverse_case(0.5, 2.0).unwrap(), ReverseCase::B);
        assert_eq!(reverse_case(1.0, f64::INFINITY).unwrap(), ReverseCase::B);
        assert!(reverse_case(1.5, 2.0).is_err());
    }

    #[test]
    fn shifted_power_pair_gives_one() {
        let u = RadialProfile::ShiftedPower { c: 1.0, shift: 1.0, alpha: -4.0 };
        let w = RadialProfile::ShiftedPower { c: 1.0, shift: 1.0, alpha: -3.0 };
        let c = reverse_hardy_c(&prob(HardyVariant::Reverse, 0.5, 0.5, u, w), &EvalConfig::default()).unwrap();
        assert_relative_eq!(c.value(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn exponential_pair_gives_two() {
        let u = RadialProfile::ExpPower { c: 1.0, kappa: -1.0, beta: 1.0 };
        let w = RadialProfile::ExpPower { c: 1.0, kappa: -2.0, beta: 1.0 };
        let c = reverse_hardy_c(&prob(HardyVariant::Reverse, 1.0, f64::INFINITY, u, w), &EvalConfig::default()).unwrap();
        assert_relative_eq!(c.value(), 2.0, max_relative = 1e-7);
    }

    #[test]
    fn unit_weight_diverges() {
        let u = RadialProfile::ShiftedPower { c: 1.0, shift: 1.0, alpha: -2.0 };
        let c = reverse_hardy_c(&prob(HardyVariant::Reverse, 1.0, 2.0, u, RadialProfile::constant(1.0)), &EvalConfig::default()).unwrap();
        assert!(c.is_infinite());
    }

    #[test]
    fn infinite_tail_is_rejected() {
        let u = RadialProfile::constant(1.0);
        let err = reverse_hardy_c(&prob(HardyVariant::Reverse, 0.5, 1.0, u, RadialProfile::constant(1.0)), &EvalConfig::default()).unwrap_err();
        assert!(matches!(err, MorreyError::HypothesisViolated(_)));
    }

    #[test]
    fn mirrored_exponential_pair() {
        // Substituting t ↦ 1/t in the exponential pair: u(s) = e^{-1/s},
        // w(x) = e^{-2/|x|}. For n = 1 the densities pick up Jacobians, so
        // compare against the direct evaluation of the mirrored formula.
        let u = RadialProfile::ExpPower { c: 1.0, kappa: -1.0, beta: -1.0 };
        let w = RadialProfile::ExpPower { c: 1.0, kappa: -2.0, beta: -1.0 };
        let c = reverse_hardy_c_star(&prob(HardyVariant::ReverseComplement, 1.0, f64::INFINITY, u, w), &EvalConfig::default())
            .unwrap();
        // ‖w‖_{∞,B_t} = e^{-2/t}, ‖u‖_{∞,(0,t+)} = e^{-1/t}:
        // ∫ e^{-2/t} d(-e^{1/t}) = ∫_0^∞ e^{-2/t} e^{1/t} t^{-2} dt = 1, boundary 1.
        assert_relative_eq!(c.value(), 2.0, max_relative = 1e-7);
    }

    #[test]
    fn plain_integrator_agrees_for_finite_q() {
        let u = RadialProfile::piecewise(vec![1.0, 3.0], &[(1.0, 0.0), (0.5, -1.0), (0.2, -2.0)]);
        let w = RadialProfile::ShiftedPower { c: 1.0, shift: 1.0, alpha: -3.0 };
        let pr = prob(HardyVariant::Reverse, 0.5, 2.0, u, w);
        let cfg = EvalConfig::default();
        let a = reverse_hardy_c_with(&pr, IntegratorLimit::OneSided, &cfg).unwrap().value();
        let b = reverse_hardy_c_with(&pr, IntegratorLimit::Plain, &cfg).unwrap().value();
        assert_relative_eq!(a, b, max_relative = 1e-8);
    }

    #[test]
    fn one_sided_limit_matters_for_sup_norms() {
        // u jumps down at t = 1: ‖u‖_{∞,(t-,∞)} keeps the value 2 at t = 1,
        // so the integrator h = ‖u‖^{-1}_{∞,(t-,∞)} jumps after t = 1.
        let u = RadialProfile::piecewise(vec![1.0, 2.0], &[(2.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        let w = RadialProfile::piecewise(vec![1.0, 2.0], &[(1.0, 0.0), (0.5, 0.0), (0.0, 0.0)]);
        let pr = prob(HardyVariant::Reverse, 1.0, f64::INFINITY, u, w);
        let cfg = EvalConfig::default();
        let err = reverse_hardy_c(&pr, &cfg);
        // h = ∞ beyond t = 2 while ‖w‖_{∞,(t,∞)} = 0 there, so the integral is defined.
        let c = err.unwrap().value();
        // Atoms: at 1 (h: 1/2 → 1) weight ‖w‖_{∞,(1,∞)} = 1/2; at 2 the integrand is 0.
        // Boundary: ‖w‖_∞ / ‖u‖_∞ = 1/2.
        assert_relative_eq!(c, 0.25 + 0.5, max_relative = 1e-9);
    }
}
