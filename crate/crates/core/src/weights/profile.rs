use serde::{Deserialize, Serialize};

use super::piecewise::{interior_point, Piecewise};
use crate::error::{MorreyError, Result};
use crate::exponent::ext;
use crate::extreal::{mul_nonneg, pow_nonneg};
use crate::integration::quadrature::{integrate_halfline, Quadrature, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub c: f64,
    pub alpha: f64,
}

/// A one-variable profile `φ: (0,∞) → [0,∞]`, representing the radial
/// function `x ↦ φ(|x|)`.
///
/// Serialized as `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadialProfile {
    /// `c ρ^α`.
    Power { c: f64, alpha: f64 },
    /// `c_i ρ^{α_i}` on `(b_{i-1}, b_i]`.
    PiecewisePower {
        breakpoints: Vec<f64>,
        segments: Vec<Segment>,
    },
    /// `values[i]` on `[knots[i], knots[i+1])`, extended constantly past both ends.
    Tabulated { knots: Vec<f64>, values: Vec<f64> },
    Product {
        left: Box<RadialProfile>,
        right: Box<RadialProfile>,
    },
    PowerOf {
        base: Box<RadialProfile>,
        exponent: f64,
    },
    /// `c·exp(κ ρ^β)`.
    ExpPower { c: f64, kappa: f64, beta: f64 },
    /// `c (shift + ρ)^α`.
    ShiftedPower { c: f64, shift: f64, alpha: f64 },
    /// `ρ ↦ ‖base‖_{θ,(ρ,∞)}`.
    TailNorm {
        base: Box<RadialProfile>,
        #[serde(with = "ext")]
        theta: f64,
    },
    /// `ρ ↦ ‖base‖_{θ,(0,ρ)}`.
    HeadNorm {
        base: Box<RadialProfile>,
        #[serde(with = "ext")]
        theta: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Constant,
    NonDecreasing,
    NonIncreasing,
}

impl Monotonicity {
    fn flip(self) -> Self {
        match self {
            Monotonicity::Constant => Monotonicity::Constant,
            Monotonicity::NonDecreasing => Monotonicity::NonIncreasing,
            Monotonicity::NonIncreasing => Monotonicity::NonDecreasing,
        }
    }

    fn combine(self, other: Self) -> Option<Self> {
        use Monotonicity::*;
        match (self, other) {
            (Constant, x) | (x, Constant) => Some(x),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }
}

/// Quadrature settings used when a profile must integrate itself pointwise
/// (tail/head norm profiles without a closed form).
const INNER_CFG: QuadratureConfig = QuadratureConfig {
    rel_tol: 1e-12,
    abs_tol: 1e-300,
    max_subdivisions: 500,
};

impl RadialProfile {
    pub fn power(c: f64, alpha: f64) -> Self {
        RadialProfile::Power { c, alpha }
    }

    pub fn constant(c: f64) -> Self {
        RadialProfile::Power { c, alpha: 0.0 }
    }

    pub fn piecewise(breakpoints: Vec<f64>, segments: &[(f64, f64)]) -> Self {
        RadialProfile::PiecewisePower {
            breakpoints,
            segments: segments.iter().map(|&(c, alpha)| Segment { c, alpha }).collect(),
        }
    }

    /// `c ρ^α` on `(cut, ∞)` and `0` on `(0, cut]`.
    pub fn truncated_power(c: f64, alpha: f64, cut: f64) -> Self {
        Self::piecewise(vec![cut], &[(0.0, 0.0), (c, alpha)])
    }

    pub fn times(self, other: RadialProfile) -> Self {
        RadialProfile::Product {
            left: Box::new(self),
            right: Box::new(other),
        }
    }

    pub fn powered(self, exponent: f64) -> Self {
        if exponent == 1.0 {
            return self;
        }
        RadialProfile::PowerOf {
            base: Box::new(self),
            exponent,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(MorreyError::InvalidProfile(m));
        match self {
            RadialProfile::Power { c, alpha } => {
                if !(c.is_finite() && *c > 0.0) || !alpha.is_finite() {
                    return bad(format!("power profile needs finite c > 0 and finite α, got c={c}, α={alpha}"));
                }
            }
            RadialProfile::PiecewisePower { breakpoints, segments } => {
                if segments.len() != breakpoints.len() + 1 {
                    return bad(format!(
                        "piecewise power needs {} segments for {} breakpoints, got {}",
                        breakpoints.len() + 1,
                        breakpoints.len(),
                        segments.len()
                    ));
                }
                check_ascending(breakpoints, "breakpoints")?;
                for s in segments {
                    if !(s.c.is_finite() && s.c >= 0.0) || !s.alpha.is_finite() {
                        return bad(format!("segment coefficients must be finite and c >= 0, got {s:?}"));
                    }
                }
            }
            RadialProfile::Tabulated { knots, values } => {
                if knots.is_empty() || knots.len() != values.len() {
                    return bad("tabulated profile needs equally many knots and values (at least one)".into());
                }
                check_ascending(knots, "knots")?;
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return bad("tabulated values must be finite and nonnegative".into());
                }
            }
            RadialProfile::Product { left, right } => {
                left.validate()?;
                right.validate()?;
            }
            RadialProfile::PowerOf { base, exponent } => {
                if !exponent.is_finite() || *exponent == 0.0 {
                    return bad(format!("power-of exponent must be finite and nonzero, got {exponent}"));
                }
                base.validate()?;
            }
            RadialProfile::ExpPower { c, kappa, beta } => {
                if !(c.is_finite() && *c > 0.0) || !kappa.is_finite() || !beta.is_finite() {
                    return bad(format!("exp-power profile needs finite c > 0, κ, β; got {c}, {kappa}, {beta}"));
                }
            }
            RadialProfile::ShiftedPower { c, shift, alpha } => {
                if !(c.is_finite() && *c > 0.0) || !(shift.is_finite() && *shift >= 0.0) || !alpha.is_finite() {
                    return bad(format!("shifted power needs c > 0, shift >= 0, finite α; got {c}, {shift}, {alpha}"));
                }
            }
            RadialProfile::TailNorm { base, theta } | RadialProfile::HeadNorm { base, theta } => {
                if !(*theta > 0.0) {
                    return bad(format!("norm exponent must be positive, got {theta}"));
                }
                base.validate()?;
            }
        }
        Ok(())
    }

    /// Exact piecewise-power form, when the profile has one.
    pub fn closed_form(&self) -> Option<Piecewise> {
        match self {
            RadialProfile::Power { c, alpha } => Some(Piecewise::power(*c, *alpha)),
            RadialProfile::PiecewisePower { breakpoints, segments } => Some(
                Piecewise {
                    breaks: breakpoints.clone(),
                    segs: segments.iter().map(|s| (s.c, s.alpha)).collect(),
                }
                .simplified(),
            ),
            RadialProfile::Tabulated { knots, values } => Some(
                Piecewise {
                    breaks: knots[1..].to_vec(),
                    segs: values.iter().map(|&v| (v, 0.0)).collect(),
                }
                .simplified(),
            ),
            RadialProfile::Product { left, right } => {
                Some(left.closed_form()?.product(&right.closed_form()?))
            }
            RadialProfile::PowerOf { base, exponent } => Some(base.closed_form()?.pow(*exponent)),
            RadialProfile::ExpPower { c, kappa, .. } if *kappa == 0.0 => Some(Piecewise::constant(*c)),
            RadialProfile::ShiftedPower { c, shift, alpha } if *shift == 0.0 || *alpha == 0.0 => {
                Some(Piecewise::power(*c, if *shift == 0.0 { *alpha } else { 0.0 }))
            }
            RadialProfile::ExpPower { .. } | RadialProfile::ShiftedPower { .. } => None,
            RadialProfile::TailNorm { base, theta } => {
                let pw = base.closed_form()?;
                single_power_norm(&pw, *theta, true)
            }
            RadialProfile::HeadNorm { base, theta } => {
                let pw = base.closed_form()?;
                single_power_norm(&pw, *theta, false)
            }
        }
    }

    pub fn eval(&self, rho: f64) -> f64 {
        match self {
            RadialProfile::Power { c, alpha } => mul_nonneg(*c, pow_or_one(rho, *alpha)),
            RadialProfile::PiecewisePower { .. } | RadialProfile::Tabulated { .. } => {
                self.closed_form().map(|p| p.eval(rho)).unwrap_or(f64::NAN)
            }
            RadialProfile::Product { left, right } => mul_nonneg(left.eval(rho), right.eval(rho)),
            RadialProfile::PowerOf { base, exponent } => base.eval_pow(rho, *exponent),
            RadialProfile::ExpPower { c, kappa, beta } => c * (kappa * pow_or_one(rho, *beta)).exp(),
            RadialProfile::ShiftedPower { c, shift, alpha } => mul_nonneg(*c, pow_or_one(shift + rho, *alpha)),
            RadialProfile::TailNorm { base, theta } => norm_point(base, *theta, rho, f64::INFINITY),
            RadialProfile::HeadNorm { base, theta } => norm_point(base, *theta, 0.0, rho),
        }
    }

    /// `φ(ρ)^e`, folding the exponent into power-type factors so the result
    /// stays representable when `φ(ρ)` alone would over- or underflow.
    pub fn eval_pow(&self, rho: f64, e: f64) -> f64 {
        match self {
            RadialProfile::Power { c, alpha } => mul_nonneg(pow_nonneg(*c, e), pow_or_one(rho, alpha * e)),
            RadialProfile::ShiftedPower { c, shift, alpha } => {
                mul_nonneg(pow_nonneg(*c, e), pow_or_one(shift + rho, alpha * e))
            }
            RadialProfile::ExpPower { c, kappa, beta } if *c > 0.0 => {
                pow_nonneg(*c, e) * (e * kappa * pow_or_one(rho, *beta)).exp()
            }
            RadialProfile::Product { left, right } => mul_nonneg(left.eval_pow(rho, e), right.eval_pow(rho, e)),
            RadialProfile::PowerOf { base, exponent } => base.eval_pow(rho, exponent * e),
            _ => pow_nonneg(self.eval(rho), e),
        }
    }

    /// `lim_{s→ρ-} φ(s)`.
    pub fn left_limit(&self, rho: f64) -> f64 {
        if let Some(p) = self.closed_form() {
            return p.left_limit(rho);
        }
        match self {
            RadialProfile::Product { left, right } => mul_nonneg(left.left_limit(rho), right.left_limit(rho)),
            RadialProfile::PowerOf { base, exponent } => pow_nonneg(base.left_limit(rho), *exponent),
            RadialProfile::TailNorm { base, theta } if theta.is_infinite() => {
                self.eval(rho).max(base.left_limit(rho))
            }
            _ => self.eval(rho),
        }
    }

    /// `lim_{s→ρ+} φ(s)`.
    pub fn right_limit(&self, rho: f64) -> f64 {
        if let Some(p) = self.closed_form() {
            return p.right_limit(rho);
        }
        match self {
            RadialProfile::Product { left, right } => mul_nonneg(left.right_limit(rho), right.right_limit(rho)),
            RadialProfile::PowerOf { base, exponent } => pow_nonneg(base.right_limit(rho), *exponent),
            RadialProfile::HeadNorm { base, theta } if theta.is_infinite() => {
                self.eval(rho).max(base.right_limit(rho))
            }
            _ => self.eval(rho),
        }
    }

    /// Points where the profile may jump or have a kink, ascending.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = match self {
            RadialProfile::PiecewisePower { breakpoints, .. } => breakpoints.clone(),
            RadialProfile::Tabulated { knots, .. } => knots.clone(),
            RadialProfile::Product { left, right } => {
                let mut v = left.breakpoints();
                v.extend(right.breakpoints());
                v
            }
            RadialProfile::PowerOf { base, .. }
            | RadialProfile::TailNorm { base, .. }
            | RadialProfile::HeadNorm { base, .. } => base.breakpoints(),
            _ => Vec::new(),
        };
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    pub fn limit_zero(&self) -> f64 {
        if let Some(p) = self.closed_form() {
            return p.limit_zero();
        }
        match self {
            RadialProfile::Product { left, right } => mul_nonneg(left.limit_zero(), right.limit_zero()),
            RadialProfile::PowerOf { base, exponent } => pow_nonneg(base.limit_zero(), *exponent),
            RadialProfile::ExpPower { c, kappa, beta } => {
                if *beta > 0.0 {
                    *c
                } else if *beta == 0.0 {
                    c * kappa.exp()
                } else if *kappa > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            RadialProfile::ShiftedPower { c, shift, alpha } => mul_nonneg(*c, pow_or_one(*shift, *alpha)),
            RadialProfile::TailNorm { base, theta } => norm_point(base, *theta, 0.0, f64::INFINITY),
            RadialProfile::HeadNorm { base, theta } => {
                if theta.is_infinite() {
                    base.esssup_sampled(0.0, 1e-12)
                } else if norm_point(base, *theta, 0.0, 1.0).is_finite() {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            _ => self.eval(1e-300),
        }
    }

    pub fn limit_inf(&self) -> f64 {
        if let Some(p) = self.closed_form() {
            return p.limit_inf();
        }
        match self {
            RadialProfile::Product { left, right } => mul_nonneg(left.limit_inf(), right.limit_inf()),
            RadialProfile::PowerOf { base, exponent } => pow_nonneg(base.limit_inf(), *exponent),
            RadialProfile::ExpPower { c, kappa, beta } => {
                if *beta < 0.0 {
                    *c
                } else if *beta == 0.0 {
                    c * kappa.exp()
                } else if *kappa > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            RadialProfile::ShiftedPower { c, alpha, .. } => mul_nonneg(*c, pow_or_one(f64::INFINITY, *alpha)),
            RadialProfile::TailNorm { base, theta } => {
                if theta.is_infinite() {
                    base.esssup_sampled(1e12, f64::INFINITY)
                } else if norm_point(base, *theta, 1.0, f64::INFINITY).is_finite() {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            RadialProfile::HeadNorm { base, theta } => norm_point(base, *theta, 0.0, f64::INFINITY),
            _ => self.eval(1e300),
        }
    }

    pub fn monotonicity(&self) -> Option<Monotonicity> {
        if let Some(p) = self.closed_form() {
            if p.segs.len() == 1 && (p.segs[0].1 == 0.0 || p.segs[0].0 == 0.0) {
                return Some(Monotonicity::Constant);
            }
            return p.monotone_direction().map(|inc| {
                if inc {
                    Monotonicity::NonDecreasing
                } else {
                    Monotonicity::NonIncreasing
                }
            });
        }
        match self {
            RadialProfile::Product { left, right } => left.monotonicity()?.combine(right.monotonicity()?),
            RadialProfile::PowerOf { base, exponent } => {
                let m = base.monotonicity()?;
                Some(if *exponent < 0.0 { m.flip() } else { m })
            }
            RadialProfile::ExpPower { kappa, beta, .. } => Some(sign_mono(kappa * beta)),
            RadialProfile::ShiftedPower { alpha, .. } => Some(sign_mono(*alpha)),
            RadialProfile::TailNorm { .. } => Some(Monotonicity::NonIncreasing),
            RadialProfile::HeadNorm { .. } => Some(Monotonicity::NonDecreasing),
            _ => None,
        }
    }

    /// `∫_a^b φ(ρ)^q ρ^m dρ`.
    pub fn moment(&self, q: f64, m: f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Quadrature> {
        if a >= b {
            return Ok(Quadrature::ZERO);
        }
        if let Some(p) = self.closed_form() {
            let v = p.moment(q, m, a, b);
            return Ok(Quadrature {
                value: crate::extreal::ExtReal::clamp(v),
                error_bound: 0.0,
            });
        }
        let f = |rho: f64| mul_nonneg(self.eval_pow(rho, q), rho.powf(m));
        integrate_halfline(&f, a, b, &self.breakpoints(), cfg)
    }

    /// Essential supremum over `(a, b)`.
    pub fn esssup(&self, a: f64, b: f64) -> f64 {
        if a >= b {
            return 0.0;
        }
        if let Some(p) = self.closed_form() {
            return p.esssup(a, b);
        }
        match self.monotonicity() {
            Some(Monotonicity::Constant) => self.eval(interior_point(a, b)),
            Some(Monotonicity::NonDecreasing) => self.limit_from_left(b),
            Some(Monotonicity::NonIncreasing) => self.limit_from_right(a),
            None => self.esssup_sampled(a, b),
        }
    }

    /// Essential infimum over `(a, b)`.
    pub fn essinf(&self, a: f64, b: f64) -> f64 {
        if a >= b {
            return f64::INFINITY;
        }
        if let Some(p) = self.closed_form() {
            return p.essinf(a, b);
        }
        match self.monotonicity() {
            Some(Monotonicity::Constant) => self.eval(interior_point(a, b)),
            Some(Monotonicity::NonDecreasing) => self.limit_from_right(a),
            Some(Monotonicity::NonIncreasing) => self.limit_from_left(b),
            None => -sampled_extremum(&|r| -self.eval(r), a, b),
        }
    }

    fn limit_from_left(&self, b: f64) -> f64 {
        if b.is_infinite() {
            self.limit_inf()
        } else {
            self.left_limit(b)
        }
    }

    fn limit_from_right(&self, a: f64) -> f64 {
        if a == 0.0 {
            self.limit_zero()
        } else {
            self.right_limit(a)
        }
    }

    fn esssup_sampled(&self, a: f64, b: f64) -> f64 {
        sampled_extremum(&|r| self.eval(r), a, b)
    }
}

fn check_ascending(v: &[f64], what: &str) -> Result<()> {
    if v.iter().any(|x| !(x.is_finite() && *x > 0.0)) || v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(MorreyError::InvalidProfile(format!(
            "{what} must be positive, finite and strictly ascending"
        )));
    }
    Ok(())
}

fn pow_or_one(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        pow_nonneg(x, e)
    }
}

fn sign_mono(s: f64) -> Monotonicity {
    if s > 0.0 {
        Monotonicity::NonDecreasing
    } else if s < 0.0 {
        Monotonicity::NonIncreasing
    } else {
        Monotonicity::Constant
    }
}

/// Closed form of `ρ ↦ ‖cρ^α‖_{θ,(ρ,∞)}` (tail) or `‖cρ^α‖_{θ,(0,ρ)}` (head).
fn single_power_norm(pw: &Piecewise, theta: f64, tail: bool) -> Option<Piecewise> {
    if pw.segs.len() != 1 {
        return None;
    }
    let (c, alpha) = pw.segs[0];
    if c == 0.0 {
        return Some(Piecewise::constant(0.0));
    }
    if theta.is_infinite() {
        let ok = if tail { alpha <= 0.0 } else { alpha >= 0.0 };
        return Some(if ok { Piecewise::power(c, alpha) } else { Piecewise::constant(f64::INFINITY) });
    }
    let e = alpha * theta + 1.0;
    let ok = if tail { e < 0.0 } else { e > 0.0 };
    if !ok {
        return Some(Piecewise::constant(f64::INFINITY));
    }
    Some(Piecewise::power(c * e.abs().powf(-1.0 / theta), alpha + 1.0 / theta))
}

/// `‖base‖_{θ,(a,b)}` as a plain float; NaN on quadrature failure.
fn norm_point(base: &RadialProfile, theta: f64, a: f64, b: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    if theta.is_infinite() {
        return base.esssup(a, b);
    }
    match base.moment(theta, 0.0, a, b, &INNER_CFG) {
        Ok(q) => pow_nonneg(q.value.value(), 1.0 / theta),
        Err(_) => f64::NAN,
    }
}

/// Max of `f` over a log grid in `(a, b)` with golden-section polishing.
/// Unbounded ends are clipped to twelve decades.
pub(crate) fn sampled_extremum(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let lo = if a > 0.0 { a } else { (b.min(1.0)) * 1e-12 };
    let hi = if b.is_finite() { b } else { a.max(1.0) * 1e12 };
    let n = 400;
    let (la, lb) = (lo.ln(), hi.ln());
    let pts: Vec<f64> = (1..n).map(|i| la + (lb - la) * i as f64 / n as f64).collect();
    let vals: Vec<f64> = pts.iter().map(|&x| f(x.exp())).collect();
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for (i, &v) in vals.iter().enumerate() {
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if best.is_infinite() && best > 0.0 {
        return best;
    }
    let l = if best_i == 0 { la } else { pts[best_i - 1] };
    let r = if best_i + 1 >= pts.len() { lb } else { pts[best_i + 1] };
    let polished = crate::integration::supremum::golden_max(&|x: f64| f(x.exp()), l, r, 60);
    best.max(polished)
}
