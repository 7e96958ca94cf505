//! Suprema of nonnegative functions of `t ∈ (0, ∞)`.

use crate::error::Result;
use crate::extreal::ExtReal;

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of `f` on `[a, b]`; returns the best value seen.
pub fn golden_max(f: &dyn Fn(f64) -> f64, a: f64, b: f64, iters: usize) -> f64 {
    let (mut a, mut b) = (a, b);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = f1.max(f2);
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
            best = best.max(f2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
            best = best.max(f1);
        }
        if (b - a).abs() < 1e-13 * (1.0 + a.abs()) {
            break;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupConfig {
    pub grid_points: usize,
    pub grid_lo: f64,
    pub grid_hi: f64,
    /// Decades scanned on either side of the grid when probing the ends.
    pub extend_decades: i32,
}

impl Default for SupConfig {
    fn default() -> Self {
        SupConfig {
            grid_points: 512,
            grid_lo: 1e-6,
            grid_hi: 1e6,
            extend_decades: 250,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupResult {
    pub value: ExtReal,
    pub argmax: f64,
}

const GROWTH_DELTA: f64 = 1e-3;
/// Beyond this many decades an infinite value is attributed to overflow
/// unless the function was already growing steadily.
const TRUSTED_DECADES: i32 = 36;

/// `sup_{t>0} F(t)` for a nonnegative `F`.
///
/// `F` is evaluated on a log grid, at the given breakpoints (and just
/// beside them), and decade by decade far beyond the grid. Steady growth
/// toward an end is reported as `∞`; otherwise the best point is polished
/// by golden-section search in `log t`.
pub fn supremum(
    f: &dyn Fn(f64) -> Result<ExtReal>,
    breakpoints: &[f64],
    cfg: &SupConfig,
) -> Result<SupResult> {
    let mut pts: Vec<f64> = Vec::new();
    let (la, lb) = (cfg.grid_lo.ln(), cfg.grid_hi.ln());
    let n = cfg.grid_points.max(2);
    for i in 0..n {
        pts.push((la + (lb - la) * i as f64 / (n - 1) as f64).exp());
    }
    for &b in breakpoints {
        if b > 0.0 && b.is_finite() {
            pts.extend([b * (1.0 - 1e-9), b, b * (1.0 + 1e-9)]);
        }
    }
    let mut evals: Vec<(f64, f64)> = Vec::with_capacity(pts.len() + 2 * cfg.extend_decades as usize);
    for &t in &pts {
        let v = f(t)?;
        if v.is_infinite() {
            return Ok(SupResult { value: ExtReal::INFINITY, argmax: t });
        }
        evals.push((t, v.value()));
    }

    let grid_lo_dec = cfg.grid_lo.log10().floor() as i32;
    let grid_hi_dec = cfg.grid_hi.log10().ceil() as i32;
    for dir in [-1i32, 1] {
        let mut seq: Vec<f64> = Vec::new();
        let start = if dir < 0 { grid_lo_dec - 1 } else { grid_hi_dec + 1 };
        let mut k = start;
        while k.abs() <= cfg.extend_decades {
            let t = 10f64.powi(k);
            let v = f(t)?;
            if v.is_infinite() {
                if k.abs() <= TRUSTED_DECADES || steadily_growing(&seq) {
                    return Ok(SupResult { value: ExtReal::INFINITY, argmax: t });
                }
                break;
            }
            if v.is_zero() && seq.last().is_some_and(|&x| x > 0.0) {
                // Underflow of a factor far out; judge growth on what came before.
                break;
            }
            seq.push(v.value());
            evals.push((t, v.value()));
            k += dir;
        }
        if steadily_growing(&seq) {
            return Ok(SupResult {
                value: ExtReal::INFINITY,
                argmax: 10f64.powi(k - dir),
            });
        }
    }

    evals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (bi, &(bt, bv)) = evals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("at least two grid points");
    let l = if bi == 0 { bt.ln() - 1.0 } else { evals[bi - 1].0.ln() };
    let r = if bi + 1 == evals.len() { bt.ln() + 1.0 } else { evals[bi + 1].0.ln() };
    let err = std::cell::Cell::new(None);
    let best_t = std::cell::Cell::new(bt);
    let best_v = std::cell::Cell::new(bv);
    let g = |x: f64| {
        let t = x.exp();
        match f(t) {
            Ok(v) => {
                if v.value() > best_v.get() {
                    best_v.set(v.value());
                    best_t.set(t);
                }
                v.value()
            }
            Err(e) => {
                err.set(Some(e));
                f64::NEG_INFINITY
            }
        }
    };
    golden_max(&g, l, r, 80);
    if let Some(e) = err.take() {
        return Err(e);
    }
    Ok(SupResult {
        value: ExtReal::clamp(best_v.get()),
        argmax: best_t.get(),
    })
}

fn steadily_growing(seq: &[f64]) -> bool {
    let k = seq.len();
    k >= 9 && (k - 8..k).all(|i| seq[i] >= (1.0 + GROWTH_DELTA) * seq[i - 1] && seq[i] > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn run(f: impl Fn(f64) -> f64) -> SupResult {
        supremum(&|t| Ok(ExtReal::clamp(f(t))), &[], &SupConfig::default()).unwrap()
    }

    #[test]
    fn interior_maximum() {
        let r = run(|t: f64| t * (-t).exp());
        assert_relative_eq!(r.value.value(), (-1.0f64).exp(), max_relative = 1e-12);
        assert_relative_eq!(r.argmax, 1.0, max_relative = 1e-5);
    }

    #[test]
    fn constant_product_of_powers() {
        let r = run(|t: f64| (2.0 * t).sqrt() * (1.0 / t).sqrt());
        assert_relative_eq!(r.value.value(), 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn growth_at_either_end_is_infinite() {
        assert!(run(|t: f64| t.powf(0.01)).value.is_infinite());
        assert!(run(|t: f64| t.powf(-0.5)).value.is_infinite());
    }

    #[test]
    fn limit_at_zero_is_found() {
        let r = run(|t: f64| 1.0 / (1.0 + t));
        assert_relative_eq!(r.value.value(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn breakpoint_maximum() {
        let f = |t: f64| if t <= 3.0 { t } else { 3.0 / t };
        let r = supremum(&|t| Ok(ExtReal::clamp(f(t))), &[3.0], &SupConfig::default()).unwrap();
        assert_relative_eq!(r.value.value(), 3.0, max_relative = 1e-12);
    }

    #[test]
    fn slow_growth_survives_underflow() {
        // t^{1/12} assembled from factors that underflow near t = 1e160.
        let f = |t: f64| crate::extreal::mul_nonneg(t.powf(-2.0).powf(1.0 / 3.0), t.powf(0.75));
        assert!(run(f).value.is_infinite());
    }

    #[test]
    fn overflow_far_out_is_ignored() {
        // Finite decreasing function whose naive evaluation overflows far out.
        let f = |t: f64| crate::extreal::mul_nonneg(t.powi(7), (1.0 + t).powi(-8));
        let r = run(f);
        assert!(r.value.is_finite());
    }
}
