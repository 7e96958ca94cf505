//! Adaptive Gauss–Kronrod quadrature on subintervals of `(0, ∞)`.
//!
//! Bounded pieces use a 21-point Kronrod rule with its embedded 10-point
//! Gauss rule. Ends at `0` or `∞` are handled by walking geometric pieces
//! `[x, 4x]` (or `[x/4, x]`) outward until the tail is negligible, the
//! integrand has been zero for a long run, or the range is exhausted. At
//! exhaustion the walk either extrapolates a geometric tail, declares
//! divergence, or reports failure.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{MorreyError, Result};
use crate::extreal::ExtReal;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Bisection budget for one bounded piece.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 500,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_subdivisions < 16 {
            return Err(MorreyError::InvalidProfile(format!(
                "bad quadrature config {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: ExtReal,
    pub error_bound: f64,
}

impl Quadrature {
    pub const ZERO: Quadrature = Quadrature {
        value: ExtReal::ZERO,
        error_bound: 0.0,
    };
    pub const INFINITE: Quadrature = Quadrature {
        value: ExtReal::INFINITY,
        error_bound: 0.0,
    };
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980212560,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One GK21 panel. Returns `None` if the integrand was infinite at a node.
fn gk21<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> Option<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    if !fc.is_finite() {
        return None;
    }
    let mut kron = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut vals = [(0.0, 0.0); 10];
    for (j, v) in vals.iter_mut().enumerate() {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        if !f1.is_finite() || !f2.is_finite() {
            return None;
        }
        *v = (f1, f2);
        kron += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kron;
    let mut asc = WGK[10] * (fc - mean).abs();
    for (j, (f1, f2)) in vals.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kron * h;
    let resasc = asc * h.abs();
    let mut err = ((kron - gauss) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    // Roundoff floor relative to the absolute integral.
    err = err.max(50.0 * f64::EPSILON * value.abs());
    Some((value, err))
}

/// Adaptive integration over a bounded interval `[a, b]`, `0 <= a < b < ∞`.
/// `breaks` must be sorted; those strictly inside `(a, b)` become panel edges.
pub fn integrate_bounded<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    debug_assert!(a < b && b.is_finite());
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut frozen_err = 0.0;
    let mut lo = a;
    let inner = breaks.iter().copied().filter(|&x| x > a && x < b);
    for hi in inner.chain(std::iter::once(b)) {
        if hi <= lo {
            continue;
        }
        let Some((v, e)) = gk21(f, lo, hi) else {
            return Ok(Quadrature::INFINITE);
        };
        total += v;
        total_err += e;
        heap.push(Panel {
            a: lo,
            b: hi,
            value: v,
            error: e,
        });
        lo = hi;
    }
    let mut splits = 0;
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err + frozen_err <= tol {
            break;
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        if splits >= cfg.max_subdivisions {
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) <= 1e-15 * mid.abs() {
            // Cannot refine further at this precision; its error stays in the budget.
            frozen_err += worst.error;
            total_err -= worst.error;
            continue;
        }
        let (Some((v1, e1)), Some((v2, e2))) = (gk21(f, worst.a, mid), gk21(f, mid, worst.b)) else {
            return Ok(Quadrature::INFINITE);
        };
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        splits += 1;
    }
    // Recompute from panels to shed accumulated cancellation error.
    let (sum, err): (f64, f64) = heap
        .iter()
        .fold((0.0, 0.0), |(s, e), p| (s + p.value, e + p.error));
    let total = if heap.is_empty() { total } else { sum };
    let err = if heap.is_empty() { total_err } else { err } + frozen_err;
    let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
    if err > tol {
        return Err(MorreyError::QuadratureFailure {
            achieved: err,
            requested: tol,
        });
    }
    Ok(Quadrature {
        value: ExtReal::clamp(total),
        error_bound: err,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkDirection {
    /// Pieces `[x, 4x]` marching toward `+∞`.
    Outward,
    /// Pieces `[x/4, x]` marching toward `0`.
    Inward,
}

const WALK_FACTOR: f64 = 4.0;
const WALK_LIMIT_HI: f64 = 1e300;
const WALK_LIMIT_LO: f64 = 1e-300;
const ZERO_RUN: usize = 40;
const WALK_EXTREME: f64 = 1e30;
const GROWTH_DELTA: f64 = 1e-3;

/// Sums piece integrals along a geometric walk starting at `start`.
///
/// `piece(lo, hi)` integrates over one piece. The walk ends early once the
/// geometric tail estimate from the last four piece ratios drops below
/// `rel_tol` of the running sum, or after a long run of exactly-zero pieces
/// following some nonzero ones.
pub fn walk<P>(mut piece: P, start: f64, dir: WalkDirection, cfg: &QuadratureConfig) -> Result<Quadrature>
where
    P: FnMut(f64, f64) -> Result<Quadrature>,
{
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut pieces: Vec<f64> = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    let mut zero_run = 0;
    let mut x = start;
    loop {
        let (lo, hi) = match dir {
            WalkDirection::Outward => (x, x * WALK_FACTOR),
            WalkDirection::Inward => (x / WALK_FACTOR, x),
        };
        let exhausted = match dir {
            WalkDirection::Outward => hi > WALK_LIMIT_HI,
            WalkDirection::Inward => lo < WALK_LIMIT_LO,
        };
        if exhausted {
            return finish_exhausted(sum, err, &pieces, &sums, cfg);
        }
        // Far out, a piece that vanishes or cannot be resolved while the partial
        // sums are still growing means the integrand's factors left the
        // floating-point range.
        let extreme = match dir {
            WalkDirection::Outward => lo > WALK_EXTREME,
            WalkDirection::Inward => hi < 1.0 / WALK_EXTREME,
        };
        let q = match piece(lo, hi) {
            Ok(q) => q,
            Err(MorreyError::QuadratureFailure { .. }) if extreme && steadily_growing(&sums) => {
                return Ok(Quadrature::INFINITE);
            }
            Err(e) => return Err(e),
        };
        if q.value.is_infinite() {
            return Ok(Quadrature::INFINITE);
        }
        let p = q.value.value();
        if p == 0.0 && extreme && steadily_growing(&sums) {
            return Ok(Quadrature::INFINITE);
        }
        sum += p;
        err += q.error_bound;
        if !sum.is_finite() {
            return Ok(Quadrature::INFINITE);
        }
        pieces.push(p);
        sums.push(sum);
        x = match dir {
            WalkDirection::Outward => hi,
            WalkDirection::Inward => lo,
        };

        if p == 0.0 {
            zero_run += 1;
            // Before any mass has been seen the support may still lie ahead.
            if zero_run >= ZERO_RUN && sum > 0.0 {
                return Ok(Quadrature {
                    value: ExtReal::clamp(sum),
                    error_bound: err,
                });
            }
            continue;
        }
        zero_run = 0;

        let k = pieces.len();
        if k >= 5 {
            let ratios: Vec<f64> = (k - 4..k).map(|i| pieces[i] / pieces[i - 1]).collect();
            let rho = ratios.iter().cloned().fold(0.0, f64::max);
            if ratios.iter().all(|r| r.is_finite()) && rho < 0.9 {
                let tail = p * rho / (1.0 - rho);
                if tail <= cfg.rel_tol * sum * 1e-2 {
                    return Ok(Quadrature {
                        value: ExtReal::clamp(sum + tail),
                        error_bound: err + tail,
                    });
                }
            }
        }
    }
}

fn steadily_growing(sums: &[f64]) -> bool {
    let k = sums.len();
    k >= 9 && sums[k - 9] > 0.0 && (k - 8..k).all(|i| sums[i] >= (1.0 + GROWTH_DELTA) * sums[i - 1])
}

fn finish_exhausted(
    sum: f64,
    err: f64,
    pieces: &[f64],
    sums: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    let k = pieces.len();
    if sum == 0.0 {
        return Ok(Quadrature::ZERO);
    }
    if k >= 9 {
        if steadily_growing(sums) {
            return Ok(Quadrature::INFINITE);
        }
        // Stable geometric decay: extrapolate the remaining tail exactly.
        let ratios: Vec<f64> = (k - 8..k).map(|i| pieces[i] / pieces[i - 1]).collect();
        let r0 = ratios[ratios.len() - 1];
        let stable = ratios.iter().all(|r| (r - r0).abs() <= 1e-6 * r0.max(1e-300));
        if stable && r0 < 1.0 {
            let tail = pieces[k - 1] * r0 / (1.0 - r0);
            let total = sum + tail;
            let tail_err = tail * 1e-6 + err;
            if tail_err <= cfg.rel_tol.max(1e-8) * total {
                return Ok(Quadrature {
                    value: ExtReal::clamp(total),
                    error_bound: tail_err,
                });
            }
        }
        let last = pieces[k - 1];
        if last <= cfg.rel_tol * sum {
            return Ok(Quadrature {
                value: ExtReal::clamp(sum),
                error_bound: err + last,
            });
        }
        return Err(MorreyError::QuadratureFailure {
            achieved: last,
            requested: cfg.rel_tol * sum,
        });
    }
    Ok(Quadrature {
        value: ExtReal::clamp(sum),
        error_bound: err,
    })
}

/// `∫_a^b f` for a nonnegative integrand on `(a, b) ⊆ (0, ∞)`.
///
/// `breaks` are known discontinuities or kinks of `f` (sorted ascending).
/// Returns `∞` for divergent integrals and `QuadratureFailure` when the
/// trichotomy finite/infinite cannot be settled.
pub fn integrate_halfline<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    if !(a < b) || a < 0.0 {
        return Err(MorreyError::InvalidGrid(format!(
            "integration interval ({a}, {b}) is empty or not in (0, ∞)"
        )));
    }
    let piece = |lo: f64, hi: f64| integrate_bounded(f, lo, hi, breaks, cfg);
    match (a == 0.0, b.is_infinite()) {
        (false, false) => geometric_chunks(f, a, b, breaks, cfg),
        (true, false) => walk(piece, b, WalkDirection::Inward, cfg),
        (false, true) => walk(piece, a, WalkDirection::Outward, cfg),
        (true, true) => {
            let lower = walk(piece, 1.0, WalkDirection::Inward, cfg)?;
            if lower.value.is_infinite() {
                return Ok(lower);
            }
            let upper = walk(piece, 1.0, WalkDirection::Outward, cfg)?;
            Ok(combine(lower, upper))
        }
    }
}

pub(crate) fn combine(a: Quadrature, b: Quadrature) -> Quadrature {
    Quadrature {
        value: a.value + b.value,
        error_bound: a.error_bound + b.error_bound,
    }
}

fn geometric_chunks<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    let mut acc = Quadrature::ZERO;
    let mut lo = a;
    while lo < b {
        let hi = if lo * WALK_FACTOR * 1.5 >= b { b } else { lo * WALK_FACTOR };
        let q = integrate_bounded(f, lo, hi, breaks, cfg)?;
        if q.value.is_infinite() {
            return Ok(q);
        }
        acc = combine(acc, q);
        lo = hi;
    }
    Ok(acc)
}
