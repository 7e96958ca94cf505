//! Embedding constants between weighted Lebesgue spaces and weighted local
//! Morrey-type spaces, by reduction to the Hardy-type functionals.

mod associate;
mod reference;

pub use associate::{associate_norm, MorreyKind, MorreySpace};
pub use reference::{reference_branch, reference_factor, unweighted_reference, ReferenceBranch};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{MorreyError, Result};
use crate::extreal::ExtReal;
use crate::hardy::{self, EvalConfig, HardyProblem, HardyVariant};
use crate::weights::{ap_report, default_sample_grid, omega_class_check, ApReport, RadialProfile, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `L_{p1}(v1) ↪ LM_{p2θ,ω}(v2)`.
    LebesgueToLM,
    /// `L_{p1}(v1) ↪` the complementary space.
    LebesgueToDualLM,
    /// `LM_{p2θ,ω}(v2) ↪ L_{p1}(v1)`.
    LMToLebesgue,
    DualLMToLebesgue,
}

impl Direction {
    pub fn target_is_morrey(self) -> bool {
        matches!(self, Direction::LebesgueToLM | Direction::LebesgueToDualLM)
    }

    /// Whether the Morrey-type side uses complements of balls.
    pub fn complementary(self) -> bool {
        matches!(self, Direction::LebesgueToDualLM | Direction::DualLMToLebesgue)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingProblem {
    pub direction: Direction,
    pub n: usize,
    pub p1: f64,
    pub p2: f64,
    pub theta: f64,
    pub v1: Weight,
    pub v2: Weight,
    pub omega: RadialProfile,
}

/// The family of characterizations a problem falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    Main1,
    Main100,
    Main2,
    Main200,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::Main1 => "main1",
            Theorem::Main100 => "main100",
            Theorem::Main2 => "main2",
            Theorem::Main200 => "main200",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseTag {
    pub theorem: Theorem,
    /// `i`..`ix` for the Lebesgue-source families, `a`/`b` for the others.
    pub case_id: &'static str,
    pub notes: String,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.theorem.label(), self.case_id)
    }
}

/// A value together with the dispatch that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingValue {
    pub value: ExtReal,
    pub tag: CaseTag,
}

fn fmt_exp(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x}")
    }
}

fn inadmissible(prob: &EmbeddingProblem, why: &str) -> MorreyError {
    MorreyError::InadmissibleExponents(format!(
        "{:?} with p1 = {}, p2 = {}, θ = {}: {why}",
        prob.direction,
        fmt_exp(prob.p1),
        fmt_exp(prob.p2),
        fmt_exp(prob.theta)
    ))
}

pub fn classify_case(prob: &EmbeddingProblem) -> Result<CaseTag> {
    let (p1, p2, th) = (prob.p1, prob.p2, prob.theta);
    for x in [p1, p2, th] {
        if !(x > 0.0) {
            return Err(MorreyError::InvalidExponent(x));
        }
    }
    let theorem = match prob.direction {
        Direction::LebesgueToLM => Theorem::Main1,
        Direction::LebesgueToDualLM => Theorem::Main100,
        Direction::LMToLebesgue => Theorem::Main2,
        Direction::DualLMToLebesgue => Theorem::Main200,
    };
    let (case_id, notes): (&'static str, String) = if prob.direction.target_is_morrey() {
        if p2.is_infinite() {
            if !p1.is_infinite() {
                return Err(inadmissible(prob, "p2 = ∞ needs p1 = ∞"));
            }
            if th.is_infinite() {
                return Err(inadmissible(prob, "p1 = p2 = ∞ needs θ < ∞"));
            }
            ("ix", "p1 = p2 = ∞, θ < ∞".into())
        } else if p1.is_infinite() {
            if th.is_infinite() {
                ("iv", "p1 = θ = ∞".into())
            } else {
                ("v", "p1 = ∞, θ < ∞".into())
            }
        } else if p1 == p2 {
            if th.is_infinite() {
                ("viii", "p1 = p2 < ∞, θ = ∞".into())
            } else if th >= p1 {
                ("vi", "p1 = p2 ≤ θ < ∞".into())
            } else {
                ("vii", "p1 = p2, θ < p".into())
            }
        } else if p2 < p1 {
            if th.is_infinite() {
                ("iii", "p2 < p1 < ∞, θ = ∞".into())
            } else if th >= p1 {
                ("i", "p2 < p1 ≤ θ < ∞ (θ = p1 included)".into())
            } else {
                ("ii", "p2 < p1 < ∞, θ < p1".into())
            }
        } else {
            return Err(inadmissible(prob, "a Lebesgue source needs p2 ≤ p1"));
        }
    } else {
        if !(p1 <= p2 && p2.is_finite()) {
            return Err(inadmissible(prob, "a Lebesgue target needs p1 ≤ p2 < ∞"));
        }
        if th <= p1 {
            ("a", "θ ≤ p1 ≤ p2 < ∞".into())
        } else {
            ("b", "p1 ≤ p2 < ∞, p1 < θ".into())
        }
    };
    Ok(CaseTag { theorem, case_id, notes })
}

fn check_problem(prob: &EmbeddingProblem, cfg: &EvalConfig) -> Result<()> {
    if prob.v1.n != prob.n || prob.v2.n != prob.n {
        return Err(MorreyError::NotAWeight(format!(
            "weight dimensions {} and {} differ from n = {}",
            prob.v1.n, prob.v2.n, prob.n
        )));
    }
    let class = omega_class_check(&prob.omega, prob.theta, &default_sample_grid(), &cfg.quad);
    let (ok, name) = if prob.direction.complementary() {
        (class.in_dual_omega_theta, "0 < ‖ω‖_{θ,(0,t)} < ∞")
    } else {
        (class.in_omega_theta, "0 < ‖ω‖_{θ,(t,∞)} < ∞")
    };
    if !ok {
        let at = class.witness_t.map(|t| format!(" (fails at t = {t})")).unwrap_or_default();
        return Err(MorreyError::HypothesisViolated(format!("ω must satisfy {name} for all t > 0{at}")));
    }
    Ok(())
}

/// The Hardy-type problem a given case reduces to, and the root to take of its value.
fn reduce(prob: &EmbeddingProblem, tag: &CaseTag) -> Result<(HardyProblem, f64)> {
    let (p1, p2, th) = (prob.p1, prob.p2, prob.theta);
    let n = prob.n;
    let v1 = prob.v1.profile.clone();
    let v2 = prob.v2.profile.clone();
    let om = prob.omega.clone();
    let complement = prob.direction.complementary();
    Ok(match tag.theorem {
        Theorem::Main1 | Theorem::Main100 if tag.case_id == "ix" => {
            let variant = if complement { HardyVariant::SupComplement } else { HardyVariant::Sup };
            let w = Weight::new(n, v1.times(v2.powered(-1.0)))?;
            (HardyProblem::new(variant, f64::INFINITY, th, om, w), 1.0)
        }
        Theorem::Main1 | Theorem::Main100 => {
            let variant = if complement { HardyVariant::DirectComplement } else { HardyVariant::Direct };
            let (q1, inner) = if p1.is_infinite() {
                (f64::INFINITY, v1.powered(p2).times(v2.powered(-1.0)))
            } else {
                let q1 = p1 / p2;
                (q1, v1.times(v2.powered(-q1)))
            };
            let (q2, outer) = if th.is_infinite() {
                (f64::INFINITY, om.powered(p2))
            } else {
                (th / p2, om.powered(th))
            };
            (HardyProblem::new(variant, q1, q2, outer, Weight::new(n, inner)?), p2)
        }
        Theorem::Main2 | Theorem::Main200 => {
            let variant = if complement { HardyVariant::ReverseComplement } else { HardyVariant::Reverse };
            let q2 = if th.is_infinite() { f64::INFINITY } else { th / p2 };
            let inner = v1.powered(p2 / p1).times(v2.powered(-1.0));
            (HardyProblem::new(variant, p1 / p2, q2, om.powered(p2), Weight::new(n, inner)?), p2)
        }
    })
}

/// Dispatches the problem and evaluates the characterizing functional.
pub fn evaluate_embedding(prob: &EmbeddingProblem, cfg: &EvalConfig) -> Result<EmbeddingValue> {
    let tag = classify_case(prob)?;
    check_problem(prob, cfg)?;
    let (hp, root) = reduce(prob, &tag)?;
    let value = match hp.variant {
        HardyVariant::Reverse | HardyVariant::ReverseComplement => {
            // Roots are taken termwise, as in the two-term characterization.
            let (main, boundary) = hardy::reverse_parts(&hp, cfg)?;
            main.pow(1.0 / root)? + boundary.pow(1.0 / root)?
        }
        _ => hardy::evaluate(&hp, cfg)?.value.pow(1.0 / root)?,
    };
    Ok(EmbeddingValue { value, tag })
}

pub fn embedding_constant(prob: &EmbeddingProblem, cfg: &EvalConfig) -> Result<ExtReal> {
    Ok(evaluate_embedding(prob, cfg)?.value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalValue {
    pub value: ExtReal,
    pub tag: CaseTag,
    pub gate: ApReport,
}

/// The embedding constant read as the maximal-operator norm, gated on a
/// sampled `A_{p1}` check of `v1`. A failing gate is reported as
/// [`MorreyError::GateFailed`] carrying the embedding constant.
pub fn maximal_operator_constant(prob: &EmbeddingProblem, cfg: &EvalConfig) -> Result<MaximalValue> {
    if !prob.direction.target_is_morrey() {
        return Err(MorreyError::InadmissibleExponents(format!(
            "the maximal operator is only characterized on Lebesgue sources, got {:?}",
            prob.direction
        )));
    }
    if !(prob.p1 > 1.0 && prob.p1.is_finite()) {
        return Err(MorreyError::InadmissibleExponents(format!(
            "the maximal-operator characterization needs 1 < p1 < ∞, got p1 = {}",
            fmt_exp(prob.p1)
        )));
    }
    let EmbeddingValue { value, tag } = evaluate_embedding(prob, cfg)?;
    let gate = ap_report(&prob.v1, prob.p1, &cfg.quad)?;
    if !gate.likely_ap {
        return Err(MorreyError::GateFailed {
            embedding_constant: value,
            ap_estimate: gate.refined.max(gate.estimate),
        });
    }
    Ok(MaximalValue { value, tag, gate })
}
