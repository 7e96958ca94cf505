//! The ratio `numerator(f) / denominator(f)` of an inequality, evaluated on
//! the cell values of a step function over fixed knots.

use super::OracleProblem;
use crate::embeddings::{classify_case, Direction, EmbeddingProblem};
use crate::error::Result;
use crate::hardy::{direct_case, reverse_case, HardyProblem, HardyVariant};
use crate::integration::quadrature::QuadratureConfig;
use crate::norms::{dual_lm_plan, lm_plan, CumulativePlan, InnerMode, LebesguePlan, OuterMode, Side};
use crate::weights::{RadialProfile, Weight};

pub(crate) enum NormPlan {
    Lebesgue(LebesguePlan),
    Cumulative(CumulativePlan),
}

impl NormPlan {
    pub(crate) fn eval(&self, values: &[f64]) -> Result<f64> {
        Ok(match self {
            NormPlan::Lebesgue(p) => p.evaluate_values(values).value(),
            NormPlan::Cumulative(p) => p.evaluate_values(values)?.value(),
        })
    }
}

pub(crate) struct RatioPlan {
    pub(crate) knots: Vec<f64>,
    pub(crate) num: NormPlan,
    pub(crate) den: NormPlan,
    /// Exponent and weight when the denominator is a weighted Lebesgue norm.
    pub(crate) den_lebesgue: Option<(f64, Weight)>,
}

fn lebesgue(knots: &[f64], p: f64, v: &Weight, cfg: &QuadratureConfig) -> Result<NormPlan> {
    Ok(NormPlan::Lebesgue(LebesguePlan::new(knots, p, v, cfg)?))
}

/// `‖W·N‖` over `(0,∞)` where `N(r)` is `∫ f` or `esssup f` over the ball or
/// its complement, and `W` multiplies (`q = ∞` or `weight_is_measure = false`)
/// or weighs the measure.
fn cumulative(
    knots: &[f64],
    side: Side,
    inner: InnerMode,
    n: usize,
    q: f64,
    outer: &RadialProfile,
    weight_is_measure: bool,
    cfg: &QuadratureConfig,
) -> Result<NormPlan> {
    let (mode, w) = if q.is_infinite() {
        (OuterMode::Sup, outer.clone())
    } else if weight_is_measure {
        (OuterMode::Integral { exponent: q }, outer.clone())
    } else {
        (OuterMode::Integral { exponent: q }, outer.clone().powered(q))
    };
    Ok(NormPlan::Cumulative(CumulativePlan::new(knots, side, inner, &Weight::unit(n), mode, &w, cfg)?))
}

impl RatioPlan {
    pub(crate) fn new(prob: &OracleProblem, knots: &[f64], cfg: &QuadratureConfig) -> Result<Self> {
        match prob {
            OracleProblem::Hardy(h) => Self::hardy(h, knots, cfg),
            OracleProblem::Embedding(e) => Self::embedding(e, knots, cfg),
        }
    }

    fn hardy(h: &HardyProblem, knots: &[f64], cfg: &QuadratureConfig) -> Result<Self> {
        let n = h.n();
        let side = match h.variant {
            HardyVariant::Direct | HardyVariant::Sup | HardyVariant::Reverse => Side::Head,
            _ => Side::Tail,
        };
        match h.variant {
            HardyVariant::Direct | HardyVariant::DirectComplement => {
                direct_case(h.p, h.q)?;
                Ok(RatioPlan {
                    knots: knots.to_vec(),
                    num: cumulative(knots, side, InnerMode::Sum { exponent: 1.0 }, n, h.q, &h.v_outer, true, cfg)?,
                    den: lebesgue(knots, h.p, &h.w_inner, cfg)?,
                    den_lebesgue: Some((h.p, h.w_inner.clone())),
                })
            }
            HardyVariant::Sup | HardyVariant::SupComplement => {
                if !(h.q > 0.0) {
                    return Err(crate::error::MorreyError::InvalidExponent(h.q));
                }
                Ok(RatioPlan {
                    knots: knots.to_vec(),
                    num: cumulative(knots, side, InnerMode::Max, n, h.q, &h.v_outer, false, cfg)?,
                    den: lebesgue(knots, f64::INFINITY, &h.w_inner, cfg)?,
                    den_lebesgue: Some((f64::INFINITY, h.w_inner.clone())),
                })
            }
            HardyVariant::Reverse | HardyVariant::ReverseComplement => {
                reverse_case(h.p, h.q)?;
                let wp = Weight::new(n, h.w_inner.profile.clone().powered(h.p))?;
                Ok(RatioPlan {
                    knots: knots.to_vec(),
                    num: lebesgue(knots, h.p, &wp, cfg)?,
                    den: cumulative(knots, side, InnerMode::Sum { exponent: 1.0 }, n, h.q, &h.v_outer, false, cfg)?,
                    den_lebesgue: None,
                })
            }
        }
    }

    fn embedding(e: &EmbeddingProblem, knots: &[f64], cfg: &QuadratureConfig) -> Result<Self> {
        classify_case(e)?;
        let morrey = |p: f64, v: &Weight| -> Result<NormPlan> {
            let plan = if e.direction.complementary() {
                dual_lm_plan(knots, p, e.theta, &e.omega, v, cfg)?
            } else {
                lm_plan(knots, p, e.theta, &e.omega, v, cfg)?
            };
            Ok(NormPlan::Cumulative(plan))
        };
        Ok(match e.direction {
            Direction::LebesgueToLM | Direction::LebesgueToDualLM => RatioPlan {
                knots: knots.to_vec(),
                num: morrey(e.p2, &e.v2)?,
                den: lebesgue(knots, e.p1, &e.v1, cfg)?,
                den_lebesgue: Some((e.p1, e.v1.clone())),
            },
            Direction::LMToLebesgue | Direction::DualLMToLebesgue => RatioPlan {
                knots: knots.to_vec(),
                num: lebesgue(knots, e.p1, &e.v1, cfg)?,
                den: morrey(e.p2, &e.v2)?,
                den_lebesgue: None,
            },
        })
    }

    pub(crate) fn cells(&self) -> usize {
        self.knots.len() - 1
    }

    /// The ratio, `∞` when only the denominator vanishes, and NaN when it
    /// is undefined (both zero, or an infinite denominator).
    pub(crate) fn ratio(&self, values: &[f64]) -> Result<f64> {
        let den = self.den.eval(values)?;
        if den.is_infinite() {
            return Ok(f64::NAN);
        }
        let num = self.num.eval(values)?;
        if den == 0.0 {
            return Ok(if num > 0.0 { f64::INFINITY } else { f64::NAN });
        }
        Ok(num / den)
    }

    /// Rescales `values` to unit denominator; no-op when that is not finite.
    pub(crate) fn normalize(&self, values: &mut [f64]) -> Result<()> {
        let den = self.den.eval(values)?;
        if den > 0.0 && den.is_finite() {
            for v in values.iter_mut() {
                *v /= den;
            }
        }
        Ok(())
    }
}
