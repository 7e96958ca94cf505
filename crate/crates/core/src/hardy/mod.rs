//! Closed-form functionals characterizing direct and reverse Hardy-type
//! inequalities for radial weights, and the supremal-operator analogues.

mod direct;
mod reverse;

pub use direct::{direct_case, DirectCase};
pub use reverse::{reverse_case, IntegratorLimit, ReverseCase};

use std::cell::RefCell;

use crate::error::{MorreyError, Result};
use crate::extreal::ExtReal;
use crate::integration::quadrature::{integrate_halfline, QuadratureConfig};
use crate::integration::supremum::{supremum, SupConfig};
use crate::weights::{RadialProfile, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HardyVariant {
    /// `‖Hf‖_{q,v} ≤ c‖f‖_{p,w}` with `Hf(t) = ∫_{B(0,t)} f`.
    Direct,
    /// Same with the complement of the ball.
    DirectComplement,
    /// `‖v·Sf‖_q ≤ c‖fw‖_∞` with `Sf(t) = esssup_{B(0,t)} f`.
    Sup,
    SupComplement,
    /// `‖gw‖_p ≤ c‖u·Hg‖_q`, `0 < p ≤ 1`.
    Reverse,
    ReverseComplement,
}

/// A Hardy-type inequality with a one-dimensional outer weight and an
/// `n`-dimensional radial inner weight.
///
/// For the reverse variants `v_outer` plays the role of `u` (multiplying
/// `Hg`) and `w_inner` multiplies `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyProblem {
    pub variant: HardyVariant,
    pub p: f64,
    pub q: f64,
    pub v_outer: RadialProfile,
    pub w_inner: Weight,
}

impl HardyProblem {
    pub fn new(variant: HardyVariant, p: f64, q: f64, v_outer: RadialProfile, w_inner: Weight) -> Self {
        HardyProblem {
            variant,
            p,
            q,
            v_outer,
            w_inner,
        }
    }

    pub fn n(&self) -> usize {
        self.w_inner.n
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.v_outer.breakpoints();
        b.extend(self.w_inner.profile.breakpoints());
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalConfig {
    pub quad: QuadratureConfig,
    pub sup: SupConfig,
}

/// A functional value together with the case label that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyValue {
    pub value: ExtReal,
    pub case: String,
}

/// Evaluates the functional matching the problem's variant.
pub fn evaluate(prob: &HardyProblem, cfg: &EvalConfig) -> Result<HardyValue> {
    match prob.variant {
        HardyVariant::Direct | HardyVariant::DirectComplement => {
            let case = direct_case(prob.p, prob.q)?;
            Ok(HardyValue {
                value: direct::evaluate(prob, case, cfg)?,
                case: case.label().to_string(),
            })
        }
        HardyVariant::Sup | HardyVariant::SupComplement => Ok(HardyValue {
            value: sup_operator_constant(prob, cfg)?,
            case: "sup".into(),
        }),
        HardyVariant::Reverse | HardyVariant::ReverseComplement => {
            let case = reverse_case(prob.p, prob.q)?;
            Ok(HardyValue {
                value: reverse::evaluate(prob, case, IntegratorLimit::OneSided, cfg)?,
                case: case.label().to_string(),
            })
        }
    }
}

fn expect_variant(prob: &HardyProblem, v: HardyVariant) -> Result<()> {
    if prob.variant != v {
        return Err(MorreyError::InadmissibleExponents(format!(
            "expected a {v:?} problem, got {:?}",
            prob.variant
        )));
    }
    Ok(())
}

/// `A(p, q)` for the ball operator.
pub fn hardy_a(prob: &HardyProblem, cfg: &EvalConfig) -> Result<ExtReal> {
    expect_variant(prob, HardyVariant::Direct)?;
    direct::evaluate(prob, direct_case(prob.p, prob.q)?, cfg)
}

/// `A*(p, q)` for the complement operator.
pub fn hardy_a_star(prob: &HardyProblem, cfg: &EvalConfig) -> Result<ExtReal> {
    expect_variant(prob, HardyVariant::DirectComplement)?;
    direct::evaluate(prob, direct_case(prob.p, prob.q)?, cfg)
}

/// `‖v(r)·esssup_{region(r)} w^{-1}‖_{q,(0,∞)}`.
pub fn sup_operator_constant(prob: &HardyProblem, cfg: &EvalConfig) -> Result<ExtReal> {
    let complement = match prob.variant {
        HardyVariant::Sup => false,
        HardyVariant::SupComplement => true,
        v => {
            return Err(MorreyError::InadmissibleExponents(format!(
                "the supremal-operator constant needs a Sup or SupComplement problem, got {v:?}"
            )))
        }
    };
    let q = prob.q;
    if !(q > 0.0) {
        return Err(MorreyError::InvalidExponent(q));
    }
    let parts = direct::Parts::new(prob, complement, 1.0, cfg);
    let g = |t: f64| Ok(ExtReal::clamp(prob.v_outer.eval(t)) * parts.inverse_sup(t));
    if q.is_infinite() {
        return sup_over_t(&g, &prob.breakpoints(), cfg);
    }
    let gq = |t: f64| g(t)?.pow(q);
    integral_over_t(&gq, &prob.breakpoints(), cfg)?.pow(1.0 / q)
}

/// `C(p, q)` for the reverse inequality with the ball operator.
pub fn reverse_hardy_c(prob: &HardyProblem, cfg: &EvalConfig) -> Result<ExtReal> {
    expect_variant(prob, HardyVariant::Reverse)?;
    reverse_hardy_c_with(prob, IntegratorLimit::OneSided, cfg)
}

/// `C*(p, q)` for the reverse inequality with the complement operator.
pub fn reverse_hardy_c_star(prob: &HardyProblem, cfg: &EvalConfig) -> Result<ExtReal> {
    expect_variant(prob, HardyVariant::ReverseComplement)?;
    reverse_hardy_c_with(prob, IntegratorLimit::OneSided, cfg)
}

/// Reverse constant with a chosen integrator. [`IntegratorLimit::Plain`]
/// drops the one-sided limits; it agrees with the default whenever `q < ∞`.
pub fn reverse_hardy_c_with(prob: &HardyProblem, limit: IntegratorLimit, cfg: &EvalConfig) -> Result<ExtReal> {
    if !matches!(prob.variant, HardyVariant::Reverse | HardyVariant::ReverseComplement) {
        return Err(MorreyError::InadmissibleExponents(format!(
            "the reverse constant needs a Reverse or ReverseComplement problem, got {:?}",
            prob.variant
        )));
    }
    reverse::evaluate(prob, reverse_case(prob.p, prob.q)?, limit, cfg)
}

/// Reverse functional split into its Stieltjes part and boundary term.
pub(crate) fn reverse_parts(prob: &HardyProblem, cfg: &EvalConfig) -> Result<(ExtReal, ExtReal)> {
    if !matches!(prob.variant, HardyVariant::Reverse | HardyVariant::ReverseComplement) {
        return Err(MorreyError::InadmissibleExponents(format!("not a reverse problem: {:?}", prob.variant)));
    }
    reverse::evaluate_parts(prob, reverse_case(prob.p, prob.q)?, IntegratorLimit::OneSided, cfg)
}

/// `sup_{t>0} F(t)`.
pub(crate) fn sup_over_t(f: &dyn Fn(f64) -> Result<ExtReal>, breaks: &[f64], cfg: &EvalConfig) -> Result<ExtReal> {
    Ok(supremum(f, breaks, &cfg.sup)?.value)
}

/// `∫_0^∞ G(t) dt`.
pub(crate) fn integral_over_t(g: &dyn Fn(f64) -> Result<ExtReal>, breaks: &[f64], cfg: &EvalConfig) -> Result<ExtReal> {
    let failure = RefCell::new(None);
    let h = |t: f64| match g(t) {
        Ok(v) => v.value(),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let q = integrate_halfline(&h, 0.0, f64::INFINITY, breaks, &cfg.quad);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(q?.value)
}
