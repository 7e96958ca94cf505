use super::{integral_over_t, sup_over_t, EvalConfig, HardyProblem, HardyVariant};
use crate::error::{MorreyError, Result};
use crate::extreal::{conjugate_exponent, ExtReal};
use crate::integration::radial::sphere_area;

/// The eight exponent regimes of the direct inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DirectCase {
    /// `1 < p ≤ q < ∞`.
    A,
    /// `1 < p < ∞`, `0 < q < p`.
    B,
    /// `1 < p < ∞`, `q = ∞`.
    C,
    /// `p = q = ∞`.
    D,
    /// `p = ∞`, `0 < q < ∞`.
    E,
    /// `p = 1 ≤ q < ∞`.
    F,
    /// `p = 1`, `0 < q < 1`.
    G,
    /// `p = 1`, `q = ∞`.
    H,
}

impl DirectCase {
    pub fn label(self) -> &'static str {
        match self {
            DirectCase::A => "a",
            DirectCase::B => "b",
            DirectCase::C => "c",
            DirectCase::D => "d",
            DirectCase::E => "e",
            DirectCase::F => "f",
            DirectCase::G => "g",
            DirectCase::H => "h",
        }
    }
}

pub fn direct_case(p: f64, q: f64) -> Result<DirectCase> {
    if !(p >= 1.0) || !(q > 0.0) {
        return Err(MorreyError::InadmissibleExponents(format!(
            "the direct inequality needs 1 <= p <= ∞ and 0 < q <= ∞, got p = {p}, q = {q}"
        )));
    }
    Ok(if p.is_infinite() {
        if q.is_infinite() {
            DirectCase::D
        } else {
            DirectCase::E
        }
    } else if p == 1.0 {
        if q.is_infinite() {
            DirectCase::H
        } else if q >= 1.0 {
            DirectCase::F
        } else {
            DirectCase::G
        }
    } else if q.is_infinite() {
        DirectCase::C
    } else if q >= p {
        DirectCase::A
    } else {
        DirectCase::B
    })
}

/// The building blocks `∫ v`, `esssup v` over the outer interval and
/// `∫ w^e`, `esssup w^{-1}` over the inner region, as functions of `t`.
pub(super) struct Parts<'a> {
    prob: &'a HardyProblem,
    complement: bool,
    inner_exponent: f64,
    sigma: f64,
    cfg: &'a EvalConfig,
}

impl<'a> Parts<'a> {
    pub(super) fn new(prob: &'a HardyProblem, complement: bool, inner_exponent: f64, cfg: &'a EvalConfig) -> Self {
        Parts {
            prob,
            complement,
            inner_exponent,
            sigma: sphere_area(prob.n()),
            cfg,
        }
    }

    /// Outer interval: `(t, ∞)` for the ball operator, `(0, t)` for the complement.
    fn outer(&self, t: f64) -> (f64, f64) {
        if self.complement {
            (0.0, t)
        } else {
            (t, f64::INFINITY)
        }
    }

    /// Inner radial range: `(0, t)` for balls, `(t, ∞)` for complements.
    fn inner(&self, t: f64) -> (f64, f64) {
        if self.complement {
            (t, f64::INFINITY)
        } else {
            (0.0, t)
        }
    }

    fn outer_mass(&self, t: f64) -> Result<ExtReal> {
        let (a, b) = self.outer(t);
        Ok(self.prob.v_outer.moment(1.0, 0.0, a, b, &self.cfg.quad)?.value)
    }

    fn outer_sup(&self, t: f64) -> ExtReal {
        let (a, b) = self.outer(t);
        ExtReal::clamp(self.prob.v_outer.esssup(a, b))
    }

    fn inner_mass(&self, t: f64) -> Result<ExtReal> {
        let (a, b) = self.inner(t);
        let m = self.prob.n() as f64 - 1.0;
        let q = self.prob.w_inner.profile.moment(self.inner_exponent, m, a, b, &self.cfg.quad)?;
        Ok(ExtReal::clamp(self.sigma) * q.value)
    }

    /// `esssup w^{-1}` over the inner region.
    pub(super) fn inverse_sup(&self, t: f64) -> ExtReal {
        let (a, b) = self.inner(t);
        ExtReal::clamp(self.prob.w_inner.profile.essinf(a, b)).recip()
    }

    fn v(&self, t: f64) -> ExtReal {
        ExtReal::clamp(self.prob.v_outer.eval(t))
    }
}

pub(super) fn evaluate(prob: &HardyProblem, case: DirectCase, cfg: &EvalConfig) -> Result<ExtReal> {
    let complement = match prob.variant {
        HardyVariant::Direct => false,
        HardyVariant::DirectComplement => true,
        v => return Err(MorreyError::InadmissibleExponents(format!("not a direct problem: {v:?}"))),
    };
    let (p, q) = (prob.p, prob.q);
    // `1 - p'` for finite p > 1; `-1` for the `∫ 1/w` forms at p = ∞.
    let inner_exponent = if p.is_infinite() { -1.0 } else if p > 1.0 { -1.0 / (p - 1.0) } else { 0.0 };
    let parts = Parts::new(prob, complement, inner_exponent, cfg);
    let breaks = prob.breakpoints();
    let pp = if p > 1.0 && p.is_finite() {
        conjugate_exponent(p)?.value()
    } else {
        f64::NAN
    };
    match case {
        DirectCase::A => {
            let f = |t: f64| Ok(parts.outer_mass(t)?.pow(1.0 / q)? * parts.inner_mass(t)?.pow(1.0 / pp)?);
            sup_over_t(&f, &breaks, cfg)
        }
        DirectCase::B => {
            let r = 1.0 / (1.0 / q - 1.0 / p);
            let g = |t: f64| {
                let v = parts.v(t);
                if v.is_zero() {
                    return Ok(ExtReal::ZERO);
                }
                Ok(parts.outer_mass(t)?.pow(r / p)? * v * parts.inner_mass(t)?.pow(r / pp)?)
            };
            integral_over_t(&g, &breaks, cfg)?.pow(1.0 / r)
        }
        DirectCase::C => {
            let f = |t: f64| Ok(parts.outer_sup(t) * parts.inner_mass(t)?.pow(1.0 / pp)?);
            sup_over_t(&f, &breaks, cfg)
        }
        DirectCase::D => {
            let f = |t: f64| Ok(parts.outer_sup(t) * parts.inner_mass(t)?);
            sup_over_t(&f, &breaks, cfg)
        }
        DirectCase::E => {
            let g = |t: f64| {
                let v = parts.v(t);
                if v.is_zero() {
                    return Ok(ExtReal::ZERO);
                }
                Ok(v * parts.inner_mass(t)?.pow(q)?)
            };
            integral_over_t(&g, &breaks, cfg)?.pow(1.0 / q)
        }
        DirectCase::F => {
            let f = |t: f64| Ok(parts.outer_mass(t)?.pow(1.0 / q)? * parts.inverse_sup(t));
            sup_over_t(&f, &breaks, cfg)
        }
        DirectCase::G => {
            let qq = conjugate_exponent(q)?.value();
            let g = |t: f64| {
                let v = parts.v(t);
                if v.is_zero() {
                    return Ok(ExtReal::ZERO);
                }
                Ok(parts.outer_mass(t)?.pow(qq)? * v * parts.inverse_sup(t).pow(qq)?)
            };
            integral_over_t(&g, &breaks, cfg)?.pow(1.0 / qq)
        }
        DirectCase::H => {
            let f = |t: f64| Ok(parts.outer_sup(t) * parts.inverse_sup(t));
            sup_over_t(&f, &breaks, cfg)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::hardy_a;
    use crate::weights::{RadialProfile, Weight};
    use approx::assert_relative_eq;

    fn prob(p: f64, q: f64, v: RadialProfile, w: Weight) -> HardyProblem {
        HardyProblem::new(HardyVariant::Direct, p, q, v, w)
    }

    #[test]
    fn case_table() {
        let inf = f64::INFINITY;
        let table = [
            (2.0, 3.0, DirectCase::A),
            (2.0, 2.0, DirectCase::A),
            (2.0, 1.0, DirectCase::B),
            (2.0, 0.5, DirectCase::B),
            (2.0, inf, DirectCase::C),
            (inf, inf, DirectCase::D),
            (inf, 2.0, DirectCase::E),
            (1.0, 1.0, DirectCase::F),
            (1.0, 0.5, DirectCase::G),
            (1.0, inf, DirectCase::H),
        ];
        for (p, q, c) in table {
            assert_eq!(direct_case(p, q).unwrap(), c, "p = {p}, q = {q}");
        }
        assert!(direct_case(0.5, 1.0).is_err());
        assert!(direct_case(2.0, 0.0).is_err());
    }

    #[test]
    fn power_benchmark() {
        let a = hardy_a(&prob(2.0, 2.0, RadialProfile::power(1.0, -2.0), Weight::unit(1)), &EvalConfig::default()).unwrap();
        assert_relative_eq!(a.value(), 2f64.sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn case_f_diverges() {
        let a = hardy_a(&prob(1.0, 1.0, RadialProfile::power(1.0, -2.0), Weight::unit(1)), &EvalConfig::default()).unwrap();
        assert!(a.is_infinite());
    }

    #[test]
    fn truncated_outer_weight() {
        let v = RadialProfile::truncated_power(1.0, -2.0, 1.0);
        let a = hardy_a(&prob(2.0, 2.0, v, Weight::unit(1)), &EvalConfig::default()).unwrap();
        assert_relative_eq!(a.value(), 2f64.sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn scaling_laws() {
        let cfg = EvalConfig::default();
        let v = RadialProfile::truncated_power(1.0, -3.0, 0.5);
        for (p, q, alpha) in [(2.0, 2.5, 0.5), (3.0, 1.5, 0.5), (2.0, f64::INFINITY, 0.5), (1.0, 2.0, -0.5)] {
            let w = Weight::new(2, RadialProfile::power(1.0, alpha)).unwrap();
            let base = hardy_a(&prob(p, q, v.clone(), w.clone()), &cfg).unwrap().value();
            assert!(base.is_finite() && base > 0.0, "p = {p}, q = {q}: {base}");
            let v4 = v.clone().times(RadialProfile::constant(4.0));
            let scaled_v = hardy_a(&prob(p, q, v4, w.clone()), &cfg).unwrap().value();
            let expect = if q.is_infinite() { 4.0 } else { 4f64.powf(1.0 / q) };
            assert_relative_eq!(scaled_v, expect * base, max_relative = 1e-9);
            let w4 = Weight::new(2, RadialProfile::power(4.0, alpha)).unwrap();
            let scaled_w = hardy_a(&prob(p, q, v.clone(), w4), &cfg).unwrap().value();
            assert_relative_eq!(scaled_w, 4f64.powf(-1.0 / p) * base, max_relative = 1e-9);
        }
    }

    #[test]
    fn slowly_growing_product_is_infinite() {
        let v = RadialProfile::truncated_power(1.0, -3.0, 0.5);
        let w = Weight::new(2, RadialProfile::power(1.0, 0.5)).unwrap();
        assert!(hardy_a(&prob(2.0, 3.0, v, w), &EvalConfig::default()).unwrap().is_infinite());
    }
}
