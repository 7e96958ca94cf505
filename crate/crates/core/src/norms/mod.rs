//! Weighted Lebesgue norms of radial step functions, local Morrey-type
//! norms and their complementary versions.

mod grid;
mod plan;

pub use grid::{GridFunction, MAX_CELLS, MIN_CELLS};
pub use plan::{CumulativePlan, InnerMode, LebesguePlan, OuterMode, Side};

use crate::error::{MorreyError, Result};
use crate::extreal::{mul_nonneg, pow_nonneg, ExtReal};
use crate::integration::quadrature::QuadratureConfig;
use crate::integration::radial::sphere_area;
use crate::weights::{default_sample_grid, omega_class_check, RadialProfile, Weight};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Ball(f64),
    Complement(f64),
    All,
}

impl Region {
    fn bounds(self) -> (f64, f64) {
        match self {
            Region::Ball(t) => (0.0, t),
            Region::Complement(t) => (t, f64::INFINITY),
            Region::All => (0.0, f64::INFINITY),
        }
    }
}

/// `‖f‖_{p,v,region}`; for `p = ∞` this is `esssup f·v`.
pub fn weighted_lp_norm(f: &GridFunction, p: f64, v: &Weight, region: Region, cfg: &QuadratureConfig) -> Result<ExtReal> {
    if !(p > 0.0) {
        return Err(MorreyError::InvalidExponent(p));
    }
    let (ra, rb) = region.bounds();
    let sigma = sphere_area(v.n);
    let m = v.n as f64 - 1.0;
    let mut acc = 0.0f64;
    for (w, &val) in f.knots().windows(2).zip(f.values()) {
        let (a, b) = (w[0].max(ra), w[1].min(rb));
        if a >= b || val == 0.0 {
            continue;
        }
        if p.is_infinite() {
            acc = acc.max(mul_nonneg(val, v.profile.esssup(a, b)));
        } else {
            let mass = sigma * v.profile.moment(1.0, m, a, b, cfg)?.value.value();
            acc += mul_nonneg(pow_nonneg(val, p), mass);
        }
    }
    Ok(ExtReal::clamp(if p.is_infinite() { acc } else { pow_nonneg(acc, 1.0 / p) }))
}

fn morrey_plan(
    knots: &[f64],
    side: Side,
    p: f64,
    theta: f64,
    omega: &RadialProfile,
    v: &Weight,
    cfg: &QuadratureConfig,
) -> Result<CumulativePlan> {
    if !(p > 0.0) {
        return Err(MorreyError::InvalidExponent(p));
    }
    if !(theta > 0.0) {
        return Err(MorreyError::InvalidExponent(theta));
    }
    let inner = if p.is_infinite() { InnerMode::Max } else { InnerMode::Sum { exponent: p } };
    let (outer, w) = if theta.is_infinite() {
        (OuterMode::Sup, omega.clone())
    } else {
        (OuterMode::Integral { exponent: theta }, omega.clone().powered(theta))
    };
    CumulativePlan::new(knots, side, inner, v, outer, &w, cfg)
}

/// Plan for `‖ω(r) ‖f‖_{p,v,B(0,r)}‖_{θ,(0,∞)}` on fixed knots.
pub fn lm_plan(knots: &[f64], p: f64, theta: f64, omega: &RadialProfile, v: &Weight, cfg: &QuadratureConfig) -> Result<CumulativePlan> {
    morrey_plan(knots, Side::Head, p, theta, omega, v, cfg)
}

/// Plan for `‖ω(r) ‖f‖_{p,v,ℝⁿ∖B(0,r)}‖_{θ,(0,∞)}` on fixed knots.
pub fn dual_lm_plan(
    knots: &[f64],
    p: f64,
    theta: f64,
    omega: &RadialProfile,
    v: &Weight,
    cfg: &QuadratureConfig,
) -> Result<CumulativePlan> {
    morrey_plan(knots, Side::Tail, p, theta, omega, v, cfg)
}

/// Local Morrey-type norm `‖f‖_{LM_{pθ,ω}(v)}`.
pub fn lm_norm(f: &GridFunction, p: f64, theta: f64, omega: &RadialProfile, v: &Weight, cfg: &QuadratureConfig) -> Result<ExtReal> {
    lm_plan(f.knots(), p, theta, omega, v, cfg)?.evaluate(f)
}

/// Complementary local Morrey-type norm, with complements of balls inside.
pub fn dual_lm_norm(
    f: &GridFunction,
    p: f64,
    theta: f64,
    omega: &RadialProfile,
    v: &Weight,
    cfg: &QuadratureConfig,
) -> Result<ExtReal> {
    dual_lm_plan(f.knots(), p, theta, omega, v, cfg)?.evaluate(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FubiniDirection {
    /// `u(x) = v(x) ‖ω‖^p_{p,(|x|,∞)}`, for the local Morrey-type norm.
    Tail,
    /// `u(x) = v(x) ‖ω‖^p_{p,(0,|x|)}`, for the complementary norm.
    Head,
}

/// The weight `u` with `‖f‖_{LM_{pp,ω}(v)} = ‖f‖_{p,u}` (or the complementary version).
pub fn fubini_weight(omega: &RadialProfile, p: f64, v: &Weight, direction: FubiniDirection, cfg: &QuadratureConfig) -> Result<Weight> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(MorreyError::InadmissibleExponents(format!("the identity needs 1 <= p < ∞, got {p}")));
    }
    let class = omega_class_check(omega, p, &default_sample_grid(), cfg);
    let (ok, norm) = match direction {
        FubiniDirection::Tail => (
            class.in_omega_theta,
            RadialProfile::TailNorm {
                base: Box::new(omega.clone()),
                theta: p,
            },
        ),
        FubiniDirection::Head => (
            class.in_dual_omega_theta,
            RadialProfile::HeadNorm {
                base: Box::new(omega.clone()),
                theta: p,
            },
        ),
    };
    if !ok {
        return Err(MorreyError::NotAWeight(format!(
            "the {} norms of ω of order {p} are not finite and positive everywhere{}",
            if direction == FubiniDirection::Tail { "tail" } else { "head" },
            class.witness_t.map(|t| format!(" (fails at t = {t})")).unwrap_or_default()
        )));
    }
    Ok(Weight {
        n: v.n,
        profile: v.profile.clone().times(norm.powered(p)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integration::quadrature::integrate_halfline;
    use approx::assert_relative_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn unit_indicator(lo: f64) -> GridFunction {
        GridFunction::new(GridFunction::log_knots(lo, 1.0, 16), vec![1.0; 16]).unwrap()
    }

    #[test]
    fn lebesgue_examples() {
        let f = unit_indicator(1e-20);
        let v = Weight::unit(1);
        assert_relative_eq!(weighted_lp_norm(&f, 2.0, &v, Region::All, &cfg()).unwrap().value(), 2f64.sqrt(), max_relative = 1e-14);
        assert_eq!(weighted_lp_norm(&f.scaled(0.0), 2.0, &v, Region::All, &cfg()).unwrap().value(), 0.0);
        let x = Weight::new(1, RadialProfile::power(1.0, 1.0)).unwrap();
        assert_relative_eq!(
            weighted_lp_norm(&f, f64::INFINITY, &x, Region::Ball(1.0), &cfg()).unwrap().value(),
            1.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn region_monotonicity() {
        let k = GridFunction::log_knots(1e-2, 1e2, 32);
        let f = GridFunction::from_fn(k, |r| (r.ln().sin() + 1.5) / (1.0 + r)).unwrap();
        let v = Weight::new(2, RadialProfile::power(2.0, 0.5)).unwrap();
        let (mut pb, mut pc) = (0.0, f64::INFINITY);
        for i in -10..10 {
            let t = 1.7f64.powi(i);
            let b = weighted_lp_norm(&f, 1.5, &v, Region::Ball(t), &cfg()).unwrap().value();
            let c = weighted_lp_norm(&f, 1.5, &v, Region::Complement(t), &cfg()).unwrap().value();
            assert!(b >= pb && c <= pc);
            let all = weighted_lp_norm(&f, 1.5, &v, Region::All, &cfg()).unwrap().value();
            assert_relative_eq!(b.powf(1.5) + c.powf(1.5), all.powf(1.5), max_relative = 1e-12);
            pb = b;
            pc = c;
        }
    }

    #[test]
    fn lm_blows_up_as_support_reaches_origin() {
        // Exact value for support (ρ₀, 1]: 1/ρ₀ - 1.
        let omega = RadialProfile::power(1.0, -3.0);
        let v = Weight::unit(1);
        for &r0 in &[1e-2, 1e-4, 1e-6] {
            let got = lm_norm(&unit_indicator(r0), 1.0, 1.0, &omega, &v, &cfg()).unwrap().value();
            assert_relative_eq!(got, 1.0 / r0 - 1.0, max_relative = 1e-9);
        }
    }

    /// Independent route: adaptive quadrature of `ω(r)^θ N(r)^θ` with `N`
    /// recomputed from scratch at every `r`.
    fn lm_by_quadrature(f: &GridFunction, p: f64, theta: f64, omega: &RadialProfile, v: &Weight, dual: bool) -> f64 {
        let w = omega.clone().powered(theta);
        let g = |r: f64| {
            let region = if dual { Region::Complement(r) } else { Region::Ball(r) };
            let n = weighted_lp_norm(f, p, v, region, &cfg()).unwrap().value();
            mul_nonneg(w.eval(r), n.powf(theta))
        };
        let q = integrate_halfline(&g, 0.0, f64::INFINITY, f.knots(), &cfg()).unwrap();
        q.value.value().powf(1.0 / theta)
    }

    #[test]
    fn lm_matches_direct_quadrature() {
        let k = GridFunction::log_knots(1e-2, 1e2, 24);
        let f = GridFunction::from_fn(k, |r| 1.0 + (3.0 * r.ln()).cos().abs()).unwrap();
        let v = Weight::new(2, RadialProfile::power(1.0, 0.5)).unwrap();
        for &(p, theta) in &[(2.0, 3.0), (1.0, 0.5), (3.0, 1.5)] {
            let omega = RadialProfile::power(1.0, -2.0);
            let a = lm_norm(&f, p, theta, &omega, &v, &cfg()).unwrap().value();
            let b = lm_by_quadrature(&f, p, theta, &omega, &v, false);
            assert_relative_eq!(a, b, max_relative = 1e-8);
            let omega = RadialProfile::power(1.0, 0.3);
            let a = dual_lm_norm(&f, p, theta, &omega, &v, &cfg()).unwrap().value();
            let b = lm_by_quadrature(&f, p, theta, &omega, &v, true);
            assert_relative_eq!(a, b, max_relative = 1e-8);
        }
    }

    #[test]
    fn sup_outer_and_max_inner() {
        let k = GridFunction::log_knots(1e-2, 1e2, 16);
        let f = GridFunction::from_fn(k, |r| 1.0 / (1.0 + r)).unwrap();
        let v = Weight::unit(1);
        // θ = ∞: sup_r ω(r) N(r) with ω = r^{-1}: brute-force scan.
        let omega = RadialProfile::power(1.0, -1.0);
        let got = lm_norm(&f, 2.0, f64::INFINITY, &omega, &v, &cfg()).unwrap().value();
        let mut best: f64 = 0.0;
        for i in 0..20000 {
            let r = 1e-3 * 1e6f64.powf(i as f64 / 20000.0);
            let n = weighted_lp_norm(&f, 2.0, &v, Region::Ball(r), &cfg()).unwrap().value();
            best = best.max(n / r);
        }
        assert!(got >= best * (1.0 - 1e-12) && got <= best * (1.0 + 1e-3), "{got} vs {best}");
        // p = ∞ inner: N(r) = sup over the ball of f·v.
        let w = Weight::new(1, RadialProfile::power(1.0, 1.0)).unwrap();
        let omega = RadialProfile::power(1.0, -2.0);
        let a = lm_norm(&f, f64::INFINITY, 1.0, &omega, &w, &cfg()).unwrap().value();
        let b = lm_by_quadrature(&f, f64::INFINITY, 1.0, &omega, &w, false);
        assert_relative_eq!(a, b, max_relative = 1e-8);
    }

    #[test]
    fn fubini_identity_examples() {
        let v = Weight::unit(1);
        let u = fubini_weight(&RadialProfile::power(1.0, -1.0), 2.0, &v, FubiniDirection::Tail, &cfg()).unwrap();
        assert_relative_eq!(u.profile.eval(4.0), 0.25, max_relative = 1e-14);
        let u = fubini_weight(&RadialProfile::constant(1.0), 1.0, &v, FubiniDirection::Head, &cfg()).unwrap();
        assert_relative_eq!(u.profile.eval(4.0), 4.0, max_relative = 1e-14);
        let err = fubini_weight(&RadialProfile::power(1.0, -1.0), 1.0, &v, FubiniDirection::Tail, &cfg()).unwrap_err();
        assert!(matches!(err, MorreyError::NotAWeight(_)));
    }

    #[test]
    fn fubini_identity_holds() {
        let k = GridFunction::log_knots(1e-3, 1e3, 64);
        let f = GridFunction::from_fn(k, |r| (1.3 + (2.0 * r.ln()).sin()) * r.powf(-0.2)).unwrap();
        let v = Weight::new(3, RadialProfile::power(0.7, 0.4)).unwrap();
        for &p in &[1.0, 1.5, 2.0] {
            let omega = RadialProfile::power(1.0, -1.2);
            let lm = lm_norm(&f, p, p, &omega, &v, &cfg()).unwrap().value();
            let u = fubini_weight(&omega, p, &v, FubiniDirection::Tail, &cfg()).unwrap();
            let lp = weighted_lp_norm(&f, p, &u, Region::All, &cfg()).unwrap().value();
            assert_relative_eq!(lm, lp, max_relative = 1e-9);
            let omega = RadialProfile::power(1.0, 0.5);
            let dual = dual_lm_norm(&f, p, p, &omega, &v, &cfg()).unwrap().value();
            let u = fubini_weight(&omega, p, &v, FubiniDirection::Head, &cfg()).unwrap();
            let lp = weighted_lp_norm(&f, p, &u, Region::All, &cfg()).unwrap().value();
            assert_relative_eq!(dual, lp, max_relative = 1e-9);
        }
    }

    #[test]
    fn homogeneity_and_lattice() {
        let k = GridFunction::log_knots(1e-2, 1e2, 32);
        let f = GridFunction::from_fn(k.clone(), |r| 1.0 + r.ln().abs()).unwrap();
        let g = GridFunction::from_fn(k, |r| 0.5 * (1.0 + r.ln().abs()) * (r.ln().cos() + 1.0) / 2.0).unwrap();
        let v = Weight::unit(2);
        let omega = RadialProfile::power(1.0, -1.5);
        let a = lm_norm(&f, 2.0, 3.0, &omega, &v, &cfg()).unwrap().value();
        let b = lm_norm(&f.scaled(4.0), 2.0, 3.0, &omega, &v, &cfg()).unwrap().value();
        assert_relative_eq!(b, 4.0 * a, max_relative = 1e-13);
        let c = lm_norm(&g, 2.0, 3.0, &omega, &v, &cfg()).unwrap().value();
        assert!(c <= a);
    }
}
