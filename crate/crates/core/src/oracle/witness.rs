use super::ratio::RatioPlan;
use super::{OracleConfig, OracleProblem};
use crate::error::{MorreyError, Result};
use crate::norms::GridFunction;

/// Steps in a witness window and the growth it must show.
const WINDOW: usize = 4;
const REQUIRED_GROWTH: f64 = 2.0;

/// Test functions at scales `4^k` whose ratios grow along the sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub family: String,
    pub scales: Vec<f64>,
    pub functions: Vec<GridFunction>,
    /// Non-decreasing.
    pub ratios: Vec<f64>,
}

impl Witness {
    pub fn growth(&self) -> f64 {
        let last = self.ratios[self.ratios.len() - 1];
        if last.is_infinite() {
            f64::INFINITY
        } else {
            last / self.ratios[0]
        }
    }
}

struct Candidate {
    family: &'static str,
    scales: Vec<f64>,
    values: Vec<Vec<f64>>,
    ratios: Vec<f64>,
    growth: f64,
}

/// Values of the scale-indexed family `name` at knot index `i`.
fn member(name: &str, i: usize, m: usize, profile: Option<&[f64]>) -> Option<Vec<f64>> {
    let v: Vec<f64> = match name {
        "ball" => (0..m).map(|j| if j < i { 1.0 } else { 0.0 }).collect(),
        "complement" => (0..m).map(|j| if j >= i { 1.0 } else { 0.0 }).collect(),
        "cell" => (0..m).map(|j| if j == i.min(m - 1) { 1.0 } else { 0.0 }).collect(),
        "near_extremal_ball" => {
            let p = profile?;
            (0..m).map(|j| if j < i { p[j] } else { 0.0 }).collect()
        }
        "near_extremal_complement" => {
            let p = profile?;
            (0..m).map(|j| if j >= i { p[j] } else { 0.0 }).collect()
        }
        _ => unreachable!("unknown witness family"),
    };
    v.iter().any(|&x| x > 0.0).then_some(v)
}

fn search(plan: &RatioPlan, lo: f64, hi: f64) -> Result<Option<Candidate>> {
    let m = plan.cells();
    let profile = super::search::near_extremal_values(plan);
    let kmin = (lo.ln() / 4f64.ln()).ceil() as i32;
    let kmax = (hi.ln() / 4f64.ln()).floor() as i32;
    let scales: Vec<f64> = (kmin..=kmax).map(|k| 4f64.powi(k)).collect();
    let index = |t: f64| (((t / lo).ln() / (hi / lo).ln()) * m as f64).round().clamp(0.0, m as f64) as usize;
    let mut best: Option<Candidate> = None;
    for family in ["ball", "complement", "cell", "near_extremal_ball", "near_extremal_complement"] {
        let mut seq = Vec::new();
        for &t in &scales {
            match member(family, index(t), m, profile.as_deref()) {
                Some(v) => {
                    let r = plan.ratio(&v)?;
                    seq.push((t, v, r));
                }
                None => seq.push((t, Vec::new(), f64::NAN)),
            }
        }
        for reversed in [false, true] {
            let ordered: Vec<&(f64, Vec<f64>, f64)> = if reversed { seq.iter().rev().collect() } else { seq.iter().collect() };
            for w in ordered.windows(WINDOW + 1) {
                let rs: Vec<f64> = w.iter().map(|x| x.2).collect();
                if rs.iter().any(|r| r.is_nan()) || !(rs[0] > 0.0) || rs.windows(2).any(|p| p[1] < p[0]) {
                    continue;
                }
                let growth = if rs[WINDOW].is_infinite() { f64::INFINITY } else { rs[WINDOW] / rs[0] };
                if best.as_ref().is_none_or(|b| growth > b.growth) {
                    best = Some(Candidate {
                        family,
                        scales: w.iter().map(|x| x.0).collect(),
                        values: w.iter().map(|x| x.1.clone()).collect(),
                        ratios: rs,
                        growth,
                    });
                }
            }
        }
    }
    Ok(best)
}

/// Scale-indexed test functions whose ratios at least double over four
/// steps, for a problem whose closed-form functional is infinite.
///
/// The search runs over the configured knot range and, failing that, over
/// one with twice the logarithmic width.
pub fn divergence_witness(prob: &OracleProblem, cfg: &OracleConfig) -> Result<Witness> {
    cfg.validate()?;
    let (value, label) = prob.closed_form(&cfg.eval)?;
    if value.is_finite() {
        return Err(MorreyError::HypothesisViolated(format!(
            "a divergence witness needs an infinite closed-form constant; {label} gives {value}"
        )));
    }
    let (lo, hi) = cfg.knot_range;
    let centre = (lo * hi).sqrt();
    let mut best: Option<Candidate> = None;
    for (a, b) in [(lo, hi), (centre * (lo / centre).powi(2), centre * (hi / centre).powi(2))] {
        let knots = GridFunction::log_knots(a, b, cfg.grid_cells);
        let plan = RatioPlan::new(prob, &knots, &cfg.eval.quad)?;
        if let Some(c) = search(&plan, a, b)? {
            let done = c.growth >= REQUIRED_GROWTH;
            if best.as_ref().is_none_or(|b| c.growth > b.growth) {
                let functions = c
                    .values
                    .iter()
                    .map(|v| GridFunction::new(knots.clone(), v.clone()))
                    .collect::<Result<Vec<_>>>()?;
                best = Some(Candidate { values: Vec::new(), ..c });
                if done {
                    let c = best.expect("just set");
                    return Ok(Witness {
                        family: c.family.to_string(),
                        scales: c.scales,
                        functions,
                        ratios: c.ratios,
                    });
                }
            }
        }
    }
    Err(MorreyError::WitnessNotFound {
        ratios: best.map(|c| c.ratios).unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::{HardyProblem, HardyVariant};
    use crate::weights::{RadialProfile, Weight};

    fn hardy(variant: HardyVariant, p: f64, q: f64, v: RadialProfile) -> OracleProblem {
        HardyProblem::new(variant, p, q, v, Weight::unit(1)).into()
    }

    #[test]
    fn unweighted_direct_diverges() {
        let w = divergence_witness(&hardy(HardyVariant::Direct, 2.0, 2.0, RadialProfile::constant(1.0)), &OracleConfig::default()).unwrap();
        assert!(w.growth() >= REQUIRED_GROWTH);
        assert_eq!(w.functions.len(), WINDOW + 1);
        assert!(w.ratios.windows(2).all(|p| p[1] >= p[0]));
    }

    #[test]
    fn reverse_with_unit_inner_weight_diverges() {
        let u = RadialProfile::ShiftedPower { c: 1.0, shift: 1.0, alpha: -2.0 };
        let w = divergence_witness(&hardy(HardyVariant::Reverse, 1.0, 2.0, u), &OracleConfig::default()).unwrap();
        assert!(w.growth() >= REQUIRED_GROWTH);
        assert!(w.ratios.iter().all(|r| r.is_finite()));
    }

    #[test]
    fn finite_constant_is_rejected() {
        let prob = hardy(HardyVariant::Direct, 2.0, 2.0, RadialProfile::power(1.0, -2.0));
        assert!(matches!(divergence_witness(&prob, &OracleConfig::default()), Err(MorreyError::HypothesisViolated(_))));
    }
}
