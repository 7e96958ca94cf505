//! Norms in the associate spaces of weighted local Morrey-type spaces.

use crate::error::{MorreyError, Result};
use crate::extreal::{conjugate_exponent, mul_nonneg, pow_nonneg, ExtReal};
use crate::hardy::{sup_over_t, EvalConfig};
use crate::integration::quadrature::QuadratureConfig;
use crate::integration::radial::sphere_area;
use crate::integration::stieltjes::{stieltjes_integral, IntegratorDirection, MonotoneIntegrator};
use crate::norms::GridFunction;
use crate::weights::{
    default_sample_grid, head_norm, head_norm_right_limit, lp_norm_interval, omega_class_check, tail_norm,
    tail_norm_left_limit, RadialProfile, Weight,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorreyKind {
    /// Balls inside, `ω` in the tail class.
    Local,
    /// Complements of balls inside, `ω` in the head class.
    Complementary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MorreySpace {
    pub kind: MorreyKind,
    pub p: f64,
    pub theta: f64,
    pub omega: RadialProfile,
    pub v: Weight,
}

/// `t ↦ ‖f‖_{p,u,E(t)}` for a step function, with `E(t)` the complement
/// of the ball (`tail`) or the ball itself.
struct StepNorm<'a> {
    f: &'a GridFunction,
    p: f64,
    u: &'a Weight,
    sigma: f64,
    /// Cumulative `Σ val^p · mass` (or running max for `p = ∞`) by cell,
    /// from the far end of the region.
    acc: Vec<f64>,
    tail: bool,
    cfg: &'a QuadratureConfig,
}

impl<'a> StepNorm<'a> {
    fn new(f: &'a GridFunction, p: f64, u: &'a Weight, tail: bool, cfg: &'a QuadratureConfig) -> Result<Self> {
        let mut s = StepNorm {
            f,
            p,
            u,
            sigma: sphere_area(u.n),
            acc: Vec::new(),
            tail,
            cfg,
        };
        let cells: Vec<f64> = (0..f.cells())
            .map(|i| {
                let k = f.knots();
                s.cell_part(i, k[i], k[i + 1])
            })
            .collect::<Result<_>>()?;
        let m = cells.len();
        let mut acc = vec![0.0; m + 1];
        if tail {
            // acc[i] covers cells i..m.
            for i in (0..m).rev() {
                acc[i] = s.fold(acc[i + 1], cells[i]);
            }
        } else {
            // acc[i] covers cells 0..i.
            for i in 0..m {
                acc[i + 1] = s.fold(acc[i], cells[i]);
            }
        }
        s.acc = acc;
        Ok(s)
    }

    fn fold(&self, a: f64, b: f64) -> f64 {
        if self.p.is_infinite() {
            a.max(b)
        } else {
            a + b
        }
    }

    fn cell_part(&self, i: usize, a: f64, b: f64) -> Result<f64> {
        let val = self.f.values()[i];
        if val == 0.0 || a >= b {
            return Ok(0.0);
        }
        if self.p.is_infinite() {
            return Ok(mul_nonneg(val, self.u.profile.esssup(a, b)));
        }
        let mass = self.u.profile.moment(1.0, self.u.n as f64 - 1.0, a, b, self.cfg)?.value.value();
        Ok(mul_nonneg(pow_nonneg(val, self.p), self.sigma * mass))
    }

    fn at(&self, t: f64) -> Result<ExtReal> {
        let k = self.f.knots();
        let m = self.f.cells();
        let raw = if t <= k[0] {
            if self.tail {
                self.acc[0]
            } else {
                0.0
            }
        } else if t >= k[m] {
            if self.tail {
                0.0
            } else {
                self.acc[m]
            }
        } else {
            let i = k.partition_point(|&x| x <= t) - 1;
            if self.tail {
                self.fold(self.cell_part(i, t, k[i + 1])?, self.acc[i + 1])
            } else {
                self.fold(self.acc[i], self.cell_part(i, k[i], t)?)
            }
        };
        Ok(ExtReal::clamp(if self.p.is_infinite() { raw } else { pow_nonneg(raw, 1.0 / self.p) }))
    }
}

/// Norm of `f` in the associate space of the given Morrey-type space.
pub fn associate_norm(f: &GridFunction, space: &MorreySpace, cfg: &EvalConfig) -> Result<ExtReal> {
    let (p, theta) = (space.p, space.theta);
    if !(p >= 1.0 && p.is_finite()) || !(theta > 0.0) {
        return Err(MorreyError::InadmissibleExponents(format!(
            "the associate norm needs 1 <= p < ∞ and θ > 0, got p = {p}, θ = {theta}"
        )));
    }
    let om = &space.omega;
    let class = omega_class_check(om, theta, &default_sample_grid(), &cfg.quad);
    let complementary = space.kind == MorreyKind::Complementary;
    if !(if complementary { class.in_dual_omega_theta } else { class.in_omega_theta }) {
        return Err(MorreyError::HypothesisViolated(format!(
            "ω is not in the {} class of order {theta}",
            if complementary { "head" } else { "tail" }
        )));
    }
    if f.is_zero() {
        return Ok(ExtReal::ZERO);
    }
    let pp = conjugate_exponent(p)?.value();
    // ‖f‖_{p', v^{1-p'}}; at p = 1 this is esssup f / v.
    let dual_weight = if pp.is_infinite() {
        space.v.profile.clone().powered(-1.0)
    } else {
        space.v.profile.clone().powered(1.0 - pp)
    };
    let u = Weight::new(space.v.n, dual_weight)?;
    // Local spaces pair with complements of balls and vice versa.
    let fnorm = StepNorm::new(f, pp, &u, !complementary, &cfg.quad)?;
    let whole = fnorm_all(&fnorm, complementary)?;
    let omega_norm = |t: f64| if complementary { head_norm(om, theta, t, &cfg.quad) } else { tail_norm(om, theta, t, &cfg.quad) };
    let mut breaks = om.breakpoints();
    breaks.extend_from_slice(f.knots());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    if theta <= 1.0 {
        let g = |t: f64| Ok(fnorm.at(t)? / omega_norm(t)?);
        return sup_over_t(&g, &breaks, cfg);
    }
    let tp = conjugate_exponent(theta)?.value();
    let failure = std::sync::Mutex::new(None);
    let record = |e: MorreyError| {
        failure.lock().unwrap().get_or_insert(e);
        f64::NAN
    };
    let integrand = |t: f64| match fnorm.at(t).and_then(|x| x.pow(tp)) {
        Ok(v) => v.value(),
        Err(e) => record(e),
    };
    let inv = |x: Result<ExtReal>| match x {
        Ok(v) => pow_nonneg(v.value(), -tp),
        Err(e) => record(e),
    };
    let quad = &cfg.quad;
    let integral = {
        let inv = &inv;
        let integrator = if complementary {
            let left = move |t: f64| inv(head_norm(om, theta, t, quad));
            let right = move |t: f64| inv(head_norm_right_limit(om, theta, t, quad));
            MonotoneIntegrator::new(IntegratorDirection::NonIncreasing, right, left, right, om.breakpoints())
                .with_infinity_test(move |t| om.esssup(0.0, t) == 0.0)
        } else {
            let left = move |t: f64| inv(tail_norm_left_limit(om, theta, t, quad));
            let right = move |t: f64| inv(tail_norm(om, theta, t, quad));
            MonotoneIntegrator::new(IntegratorDirection::NonDecreasing, left, left, right, om.breakpoints())
                .with_infinity_test(move |t| om.esssup(t, f64::INFINITY) == 0.0)
        };
        stieltjes_integral(&integrand, &integrator, 0.0, f64::INFINITY, quad)
    };
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let main = integral?.value.pow(1.0 / tp)?;
    Ok(main + whole / lp_norm_interval(om, theta, 0.0, f64::INFINITY, quad)?)
}

fn fnorm_all(s: &StepNorm, complementary: bool) -> Result<ExtReal> {
    // The full-space norm is the ball norm at the last knot or the tail norm at 0.
    if complementary {
        s.at(*s.f.knots().last().unwrap())
    } else {
        s.at(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{fubini_weight, weighted_lp_norm, FubiniDirection, Region};
    use approx::assert_relative_eq;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn space(kind: MorreyKind, p: f64, theta: f64, omega: RadialProfile) -> MorreySpace {
        MorreySpace {
            kind,
            p,
            theta,
            omega,
            v: Weight::unit(1),
        }
    }

    #[test]
    fn zero_function() {
        let f = GridFunction::zero(GridFunction::log_knots(1e-2, 1e2, 16)).unwrap();
        let s = space(MorreyKind::Local, 2.0, 2.0, RadialProfile::power(1.0, -1.0));
        assert_eq!(associate_norm(&f, &s, &cfg()).unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn step_norm_matches_direct_norms() {
        let knots = GridFunction::log_knots(1e-2, 1e2, 16);
        let f = GridFunction::from_fn(knots, |r| 1.0 / (1.0 + r)).unwrap();
        let u = Weight::new(2, RadialProfile::power(1.0, 0.5)).unwrap();
        let q = QuadratureConfig::default();
        for tail in [true, false] {
            let s = StepNorm::new(&f, 3.0, &u, tail, &q).unwrap();
            for t in [1e-3, 0.05, 1.0, 7.3, 1e3] {
                let region = if tail { Region::Complement(t) } else { Region::Ball(t) };
                let direct = weighted_lp_norm(&f, 3.0, &u, region, &q).unwrap();
                assert_relative_eq!(s.at(t).unwrap().value(), direct.value(), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn sup_form_closed_form() {
        // p = 1, θ = 1/2, ω = ρ^{-3} on (1,∞): ‖ω‖_{1/2,(t,∞)} = (2 max(t,1)^{-1/2})^2 = 4/max(t,1).
        // f = 1 on [1e-2, 10): esssup_{|x|>t} f = 1 for t < 10, so the sup is max over t<10 of max(t,1)/4 → 10/4.
        let f = GridFunction::from_fn(GridFunction::log_knots(1e-2, 10.0, 16), |_| 1.0).unwrap();
        let s = space(MorreyKind::Local, 1.0, 0.5, RadialProfile::truncated_power(1.0, -3.0, 1.0));
        assert_relative_eq!(associate_norm(&f, &s, &cfg()).unwrap().value(), 2.5, max_relative = 1e-9);
    }

    #[test]
    fn within_a_fixed_factor_of_the_exact_dual() {
        // θ = p: the space is L_p(u) with the Fubini weight, whose associate is L_{p'}(u^{1-p'}).
        let knots = GridFunction::log_knots(1e-2, 1e2, 32);
        let f = GridFunction::from_fn(knots, |r| (1.0 + r * r).recip()).unwrap();
        let om = RadialProfile::power(1.0, -1.0);
        let q = QuadratureConfig::default();
        for p in [1.5, 2.0] {
            let a = associate_norm(&f, &space(MorreyKind::Local, p, p, om.clone()), &cfg()).unwrap().value();
            let u = fubini_weight(&om, p, &Weight::unit(1), FubiniDirection::Tail, &q).unwrap();
            let pp = p / (p - 1.0);
            let du = Weight::new(1, u.profile.powered(1.0 - pp)).unwrap();
            let exact = weighted_lp_norm(&f, pp, &du, Region::All, &q).unwrap().value();
            let ratio = a / exact;
            assert!(ratio > 0.1 && ratio < 10.0, "p = {p}: ratio {ratio}");
        }
    }

    #[test]
    fn complementary_space() {
        // ω = ρ^{2} on (0,1), θ = 2 > 1: exercises the non-increasing integrator.
        let knots = GridFunction::log_knots(1e-2, 1e2, 16);
        let f = GridFunction::from_fn(knots, |r| r / (1.0 + r * r)).unwrap();
        let om = RadialProfile::piecewise(vec![1.0], &[(1.0, 2.0), (0.0, 0.0)]);
        let v = associate_norm(&f, &space(MorreyKind::Complementary, 2.0, 2.0, om), &cfg()).unwrap();
        assert!(v.is_finite() && v.value() > 0.0);
    }
}
