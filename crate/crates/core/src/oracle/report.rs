use std::collections::BTreeMap;

use super::{best_constant_lower_bound, OracleConfig, OracleProblem};
use crate::error::{MorreyError, Result};

/// Regression constants for one case label: the smallest acceptable
/// `lower_bound / A` and the largest acceptable `ratio(f) / A`.
///
/// These are measured artifacts of this repository, not theorems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordedConstants {
    pub floor: f64,
    pub k: f64,
}

/// Recorded constants for a case label such as `direct.a` or `main1.vii`.
pub fn recorded_constants(label: &str) -> RecordedConstants {
    let k = match label {
        "direct.a" | "direct_complement.a" => 4.0,
        "direct.b" | "direct_complement.b" => 8.0,
        "direct.c" | "direct.d" | "direct.e" | "direct.f" | "direct.h" => 4.0,
        "direct.g" => 8.0,
        "sup" | "sup_complement" => 2.0,
        "reverse.a" | "reverse_complement.a" => 2.0,
        "reverse.b" | "reverse_complement.b" => 4.0,
        _ => 8.0,
    };
    RecordedConstants { floor: 0.5, k }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub case: String,
    pub closed_form: f64,
    pub lower_bound: f64,
    /// `lower_bound / closed_form`.
    pub ratio_low: f64,
    pub floor: f64,
    pub k_recorded: f64,
    pub family_bests: BTreeMap<String, f64>,
    /// `ratio_low >= floor` and every sampled ratio is at most `k_recorded · closed_form`.
    pub holds: bool,
}

/// Compares the oracle's lower bound with the closed-form functional.
///
/// The largest sampled ratio is the lower bound itself, so the upper check
/// is `lower_bound <= k · A`.
pub fn equivalence_report(prob: &OracleProblem, cfg: &OracleConfig) -> Result<EquivalenceReport> {
    let (value, case) = prob.closed_form(&cfg.eval)?;
    if !(value.is_finite() && value.value() > 0.0) {
        return Err(MorreyError::HypothesisViolated(format!(
            "an equivalence report needs a finite positive closed-form constant; {case} gives {value}"
        )));
    }
    let a = value.value();
    let res = best_constant_lower_bound(prob, cfg)?;
    let lb = res.lower_bound.value();
    let rec = recorded_constants(&case);
    let ratio_low = lb / a;
    Ok(EquivalenceReport {
        holds: ratio_low >= rec.floor && lb <= rec.k * a,
        case,
        closed_form: a,
        lower_bound: lb,
        ratio_low,
        floor: rec.floor,
        k_recorded: rec.k,
        family_bests: res.family_bests,
    })
}
