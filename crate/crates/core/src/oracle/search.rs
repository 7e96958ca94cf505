//! Candidate families and the local searches that improve on them.

use super::ratio::RatioPlan;
use super::Families;
use crate::error::Result;

/// Ratios below this are treated as no improvement.
const RELATIVE_GAIN: f64 = 1e-12;
const MAX_VALUE: f64 = 1e12;

/// Larger is better; NaN ranks below everything.
pub(crate) fn better(a: f64, b: f64) -> bool {
    !a.is_nan() && (b.is_nan() || a > b * (1.0 + RELATIVE_GAIN))
}

fn geometric_mids(knots: &[f64]) -> Vec<f64> {
    knots.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect()
}

/// Named cell-value vectors for the canonical test functions.
pub(crate) fn family_members(plan: &RatioPlan, n: usize, which: &Families) -> Vec<(&'static str, Vec<f64>)> {
    let m = plan.cells();
    let mut out = Vec::new();
    if which.balls {
        for k in 1..=m {
            let v: Vec<f64> = (0..m).map(|j| if j < k { 1.0 } else { 0.0 }).collect();
            out.push(("ball", v));
        }
    }
    if which.complements {
        for k in 0..m {
            let v: Vec<f64> = (0..m).map(|j| if j >= k { 1.0 } else { 0.0 }).collect();
            out.push(("complement", v));
        }
    }
    if which.near_extremal {
        if let Some(profile) = near_extremal_values(plan) {
            for k in 1..=m {
                out.push(("near_extremal", (0..m).map(|j| if j < k { profile[j] } else { 0.0 }).collect()));
            }
            for k in 0..m.saturating_sub(1) {
                out.push(("near_extremal", (0..m).map(|j| if j >= k { profile[j] } else { 0.0 }).collect()));
            }
        }
    }
    if which.two_block {
        for i in 0..m {
            let mut v = vec![0.0; m];
            v[i] = 1.0;
            out.push(("two_block", v));
            for d in [1usize, 4, 16, 64] {
                if i + d >= m {
                    continue;
                }
                for c in [0.25, 1.0, 4.0] {
                    let mut v = vec![0.0; m];
                    v[i] = 1.0;
                    v[i + d] = c;
                    out.push(("two_block", v));
                }
            }
        }
    }
    if which.powers {
        let mids = geometric_mids(&plan.knots);
        let lo = -(n as f64) - 2.0;
        for k in 0..=((n as f64 + 4.0) * 8.0) as usize {
            let gamma = lo + k as f64 / 8.0;
            let v: Vec<f64> = mids.iter().map(|r| r.powf(gamma)).collect();
            if v.iter().all(|x| x.is_finite()) {
                out.push(("power", v));
            }
        }
    }
    out
}

/// `σ^{1-p'}` for an `L_p(σ)` denominator, sampled at cell midpoints.
pub(crate) fn near_extremal_values(plan: &RatioPlan) -> Option<Vec<f64>> {
    let (p, w) = plan.den_lebesgue.as_ref()?;
    let e = if p.is_infinite() {
        -1.0
    } else if *p > 1.0 {
        -1.0 / (p - 1.0)
    } else {
        return None;
    };
    let v: Vec<f64> = geometric_mids(&plan.knots)
        .iter()
        .map(|&r| {
            let x = w.profile.eval(r);
            if x > 0.0 && x.is_finite() {
                x.powf(e)
            } else {
                0.0
            }
        })
        .collect();
    (v.iter().all(|x| x.is_finite()) && v.iter().any(|&x| x > 0.0)).then_some(v)
}

/// Fixed-point iteration `f_j ← (∂_j num / c_j)^{1/(p-1)}` for an `L_p`
/// denominator with cell masses `c_j`; for `p = 2` and a quadratic numerator
/// this is the power method. Returns the best iterate.
pub(crate) fn power_stage(
    plan: &RatioPlan,
    start: &[f64],
    iterations: usize,
    mut on_step: impl FnMut(f64),
) -> Result<Option<(Vec<f64>, f64)>> {
    let p = match &plan.den_lebesgue {
        Some((p, _)) if *p > 1.0 && p.is_finite() => *p,
        _ => return Ok(None),
    };
    let cells: Vec<f64> = match &plan.den {
        super::ratio::NormPlan::Lebesgue(l) => l.cell_weights().to_vec(),
        _ => return Ok(None),
    };
    let mut x = start.to_vec();
    plan.normalize(&mut x)?;
    let mut best = (x.clone(), plan.ratio(&x)?);
    for _ in 0..iterations {
        let base = plan.num.eval(&x)?;
        if !(base > 0.0 && base.is_finite()) {
            break;
        }
        let top = x.iter().cloned().fold(0.0, f64::max);
        let mut next = vec![0.0; x.len()];
        for j in 0..x.len() {
            if !(cells[j] > 0.0 && cells[j].is_finite()) {
                continue;
            }
            let h = 1e-6 * x[j].max(1e-3 * top);
            let mut y = x.clone();
            y[j] += h;
            let g = (plan.num.eval(&y)? - base) / h;
            if g > 0.0 {
                next[j] = (g / cells[j]).powf(1.0 / (p - 1.0));
            }
        }
        if !next.iter().all(|v| v.is_finite()) || next.iter().all(|&v| v == 0.0) {
            break;
        }
        plan.normalize(&mut next)?;
        x = next;
        let r = plan.ratio(&x)?;
        if better(r, best.1) {
            best = (x.clone(), r);
        }
        on_step(best.1);
    }
    Ok(Some(best))
}

/// Coordinate ascent in log-space with a three-point parabolic step per
/// cell, renormalizing after every sweep. `on_sweep` sees the running best.
pub(crate) fn ascend(plan: &RatioPlan, start: &[f64], sweeps: usize, mut on_sweep: impl FnMut(f64)) -> Result<(Vec<f64>, f64)> {
    let mut x = start.to_vec();
    let top = x.iter().cloned().fold(0.0, f64::max);
    if !(top > 0.0) {
        let r = plan.ratio(&x)?;
        return Ok((x, r));
    }
    for v in x.iter_mut() {
        *v = v.max(1e-9 * top);
    }
    plan.normalize(&mut x)?;
    let mut r = plan.ratio(&x)?;
    let original = plan.ratio(start)?;
    if better(original, r) {
        x = start.to_vec();
        r = original;
    }
    if r.is_infinite() || r.is_nan() {
        return Ok((x, r));
    }
    for sweep in 0..sweeps {
        let delta = (std::f64::consts::LN_2 * 0.8f64.powi(sweep as i32)).max(0.02);
        for j in 0..x.len() {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            let try_at = |s: f64, x: &mut Vec<f64>| -> Result<f64> {
                x[j] = (xj * s.exp()).min(MAX_VALUE);
                plan.ratio(x)
            };
            let lo = try_at(-delta, &mut x)?;
            let hi = try_at(delta, &mut x)?;
            let curv = hi + lo - 2.0 * r;
            let step = if curv < 0.0 && lo.is_finite() && hi.is_finite() {
                (0.5 * delta * (lo - hi) / curv).clamp(-4.0 * delta, 4.0 * delta)
            } else if better(hi, lo) {
                2.0 * delta
            } else {
                -2.0 * delta
            };
            let mid = try_at(step, &mut x)?;
            let mut best = (0.0, r);
            for (s, v) in [(-delta, lo), (delta, hi), (step, mid)] {
                if better(v, best.1) {
                    best = (s, v);
                }
            }
            x[j] = (xj * best.0.exp()).min(MAX_VALUE);
            if best.0 == 0.0 {
                x[j] = xj;
            }
            r = best.1;
            if r.is_infinite() {
                on_sweep(r);
                return Ok((x, r));
            }
        }
        plan.normalize(&mut x)?;
        let renorm = plan.ratio(&x)?;
        if !renorm.is_nan() {
            r = renorm;
        }
        on_sweep(r);
    }
    Ok((x, r))
}
