//! Lebesgue–Stieltjes integrals `∫ f dh` against monotone extended-real
//! integrators, with atoms at jumps and the conventions for integrators
//! that become infinite on one side of the interval.

use crate::error::{MorreyError, Result};
use crate::extreal::ExtReal;
use crate::integration::quadrature::{combine, walk, Quadrature, QuadratureConfig, WalkDirection};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegratorDirection {
    /// `h` non-decreasing, left-continuous, values in `[0, ∞]`; integrate `dh`.
    /// `h = ∞` may only happen on a terminal interval `(c, b)`.
    NonDecreasing,
    /// `φ` non-increasing, right-continuous, values in `[0, ∞]`; integrate
    /// `d(-φ)`. `φ = ∞` may only happen on an initial interval `(a, c)`.
    NonIncreasing,
}

type Func<'a> = Box<dyn Fn(f64) -> f64 + Sync + 'a>;

/// A monotone function of `t` together with its one-sided limits and the
/// points where it is known to possibly jump.
pub struct MonotoneIntegrator<'a> {
    pub direction: IntegratorDirection,
    value: Func<'a>,
    left: Func<'a>,
    right: Func<'a>,
    candidates: Vec<f64>,
    genuine_infinity: Option<Box<dyn Fn(f64) -> bool + Sync + 'a>>,
}

/// A detected atom of the Stieltjes measure. Jumps found by scanning are
/// only located to a bracket `[lo, hi]` of relative width ~1e-14; declared
/// jumps have `lo == at == hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub at: f64,
    pub size: f64,
    pub lo: f64,
    pub hi: f64,
}

impl<'a> MonotoneIntegrator<'a> {
    pub fn new(
        direction: IntegratorDirection,
        value: impl Fn(f64) -> f64 + Sync + 'a,
        left_limit: impl Fn(f64) -> f64 + Sync + 'a,
        right_limit: impl Fn(f64) -> f64 + Sync + 'a,
        candidates: Vec<f64>,
    ) -> Self {
        MonotoneIntegrator {
            direction,
            value: Box::new(value),
            left: Box::new(left_limit),
            right: Box::new(right_limit),
            candidates,
            genuine_infinity: None,
        }
    }

    /// Supplies a test telling whether `h(t) = ∞` is a true infinity rather
    /// than a floating-point overflow of a finite value. Without one every
    /// infinite value is taken at face value.
    pub fn with_infinity_test(mut self, test: impl Fn(f64) -> bool + Sync + 'a) -> Self {
        self.genuine_infinity = Some(Box::new(test));
        self
    }

    fn is_genuine_infinity(&self, t: f64) -> bool {
        self.genuine_infinity.as_ref().is_none_or(|g| g(t))
    }

    /// A continuous integrator (no jumps).
    pub fn continuous(direction: IntegratorDirection, value: impl Fn(f64) -> f64 + Sync + Clone + 'a) -> Self {
        Self::new(direction, value.clone(), value.clone(), value, Vec::new())
    }

    /// Left-continuous unit step at `at`: 0 on `(0, at]`, 1 after.
    pub fn unit_step(at: f64) -> Self {
        Self::new(
            IntegratorDirection::NonDecreasing,
            move |t| if t <= at { 0.0 } else { 1.0 },
            move |t| if t <= at { 0.0 } else { 1.0 },
            move |t| if t < at { 0.0 } else { 1.0 },
            vec![at],
        )
    }

    /// The non-decreasing cumulative function whose increments define the measure.
    fn g(&self, t: f64) -> f64 {
        self.signed(self.value.as_ref()(t))
    }

    fn g_left(&self, t: f64) -> f64 {
        self.signed(self.left.as_ref()(t))
    }

    fn g_right(&self, t: f64) -> f64 {
        self.signed(self.right.as_ref()(t))
    }

    fn signed(&self, v: f64) -> f64 {
        match self.direction {
            IntegratorDirection::NonDecreasing => v,
            IntegratorDirection::NonIncreasing => -v,
        }
    }

    pub fn eval(&self, t: f64) -> ExtReal {
        ExtReal::clamp(self.value.as_ref()(t))
    }

    /// Threshold `c` beyond which (or below which, for the non-increasing
    /// direction) the integrator is infinite inside `(a, b)`, as a bracket
    /// `(last finite point, first infinite point)` ordered along the direction.
    pub fn infinite_from(&self, a: f64, b: f64) -> Option<(f64, f64)> {
        let pts = probe_points(a, b, 400);
        let is_inf = |t: f64| self.value.as_ref()(t).is_infinite();
        match self.direction {
            IntegratorDirection::NonDecreasing => {
                let last = *pts.last()?;
                if !is_inf(last) {
                    return None;
                }
                let first_inf = pts.iter().position(|&t| is_inf(t)).unwrap();
                if first_inf == 0 {
                    return Some((a, a));
                }
                Some(bisect_log(pts[first_inf - 1], pts[first_inf], is_inf))
            }
            IntegratorDirection::NonIncreasing => {
                let first = *pts.first()?;
                if !is_inf(first) {
                    return None;
                }
                let last_inf = pts.iter().rposition(|&t| is_inf(t)).unwrap();
                if last_inf + 1 == pts.len() {
                    return Some((b, b));
                }
                let (lo, hi) = bisect_log(pts[last_inf], pts[last_inf + 1], |t| !is_inf(t));
                Some((hi, lo))
            }
        }
    }

    /// Atoms inside `(a, b)`: declared candidates plus a bisection scan.
    pub fn jumps(&self, a: f64, b: f64) -> Vec<Jump> {
        let mut out: Vec<Jump> = self
            .candidates
            .iter()
            .copied()
            .filter(|&x| x > a && x < b)
            .filter_map(|x| {
                let size = self.g_right(x) - self.g_left(x);
                (size > 0.0 && size.is_finite()).then_some(Jump { at: x, size, lo: x, hi: x })
            })
            .collect();
        for j in self.scan_for_jumps(a, b) {
            if !out.iter().any(|k| j.lo <= k.at * (1.0 + 1e-12) && k.at <= j.hi * (1.0 + 1e-12)) {
                out.push(j);
            }
        }
        out.sort_by(|x, y| x.at.total_cmp(&y.at));
        out
    }

    fn scan_for_jumps(&self, a: f64, b: f64) -> Vec<Jump> {
        let pts = probe_points(a, b, 1024);
        let vals: Vec<f64> = pts.iter().map(|&t| self.g(t)).collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return Vec::new();
        }
        let inc: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
        let total: f64 = inc.iter().sum();
        if total <= 0.0 {
            return Vec::new();
        }
        let mut found = Vec::new();
        for i in 0..inc.len() {
            let before = if i > 0 { inc[i - 1] } else { 0.0 };
            let after = inc.get(i + 1).copied().unwrap_or(0.0);
            if inc[i] <= 1e-9 * total || inc[i] <= 4.0 * before.max(after) {
                continue;
            }
            // Narrow down to the point carrying the increment.
            let (mut lo, mut hi) = (pts[i], pts[i + 1]);
            let (mut glo, mut ghi) = (vals[i], vals[i + 1]);
            for _ in 0..80 {
                let mid = (lo * hi).sqrt();
                if !(mid > lo && mid < hi) {
                    break;
                }
                let gm = self.g(mid);
                if gm - glo >= ghi - gm {
                    hi = mid;
                    ghi = gm;
                } else {
                    lo = mid;
                    glo = gm;
                }
                if hi - lo <= 1e-14 * hi {
                    break;
                }
            }
            if ghi - glo >= 0.5 * inc[i] {
                found.push(Jump {
                    at: (lo * hi).sqrt(),
                    size: ghi - glo,
                    lo,
                    hi,
                });
            }
        }
        found
    }
}

fn probe_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    let lo = if a > 0.0 { a } else { b.min(1.0) * 1e-250 };
    let hi = if b.is_finite() { b } else { a.max(1.0) * 1e250 };
    let (la, lb) = (lo.ln(), hi.ln());
    (1..n).map(|i| (la + (lb - la) * i as f64 / n as f64).exp()).collect()
}

/// Brackets the boundary between `pred == false` at `lo` and `pred == true` at `hi`.
fn bisect_log(mut lo: f64, mut hi: f64, pred: impl Fn(f64) -> bool) -> (f64, f64) {
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if !(mid > lo && mid < hi) {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    (lo, hi)
}

/// `∫_{(a,b)} f dh`. For the non-increasing direction this is `∫ f d(-φ)`.
///
/// Atoms contribute `f(x)·jump`. If the integrator is infinite on a
/// terminal (resp. initial) part of the interval, the integral is defined
/// only when `f` vanishes there, and then equals the integral over the rest.
pub fn stieltjes_integral(
    f: &(dyn Fn(f64) -> f64 + Sync),
    h: &MonotoneIntegrator,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    if !(a < b) || a < 0.0 {
        return Err(MorreyError::InvalidGrid(format!("Stieltjes interval ({a}, {b}) is invalid")));
    }
    let (mut a, mut b) = (a, b);
    // One-sided values of the cumulative function at the two ends.
    let mut ga: Option<f64> = None;
    let mut gb: Option<f64> = None;
    if let Some((finite, infinite)) = h.infinite_from(a, b) {
        if !h.is_genuine_infinity(infinite) && h.value.as_ref()(finite) > 1e100 {
            return overflowing_integral(f, h, a, b, finite, cfg);
        }
        let (lo, hi) = match h.direction {
            IntegratorDirection::NonDecreasing => (infinite, b),
            IntegratorDirection::NonIncreasing => (a, infinite),
        };
        if !vanishes_on(f, lo, hi) {
            return Err(MorreyError::UndefinedStieltjes { threshold: infinite });
        }
        match h.direction {
            IntegratorDirection::NonDecreasing => {
                b = finite;
                gb = Some(h.g(finite));
            }
            IntegratorDirection::NonIncreasing => {
                a = finite;
                ga = Some(h.g(finite));
            }
        }
        if a >= b {
            return Ok(Quadrature::ZERO);
        }
    }

    let jumps = h.jumps(a, b);
    let mut total = Quadrature::ZERO;
    for j in &jumps {
        let fx = f(j.at);
        check_value(fx)?;
        let v = crate::extreal::mul_nonneg(fx, j.size);
        total = combine(
            total,
            Quadrature {
                value: ExtReal::clamp(v),
                error_bound: 0.0,
            },
        );
    }
    if total.value.is_infinite() {
        return Ok(Quadrature::INFINITE);
    }

    // Continuous parts between consecutive atoms.
    let mut lo = a;
    let mut glo = ga.unwrap_or_else(|| if a > 0.0 { h.g_right(a) } else { f64::NAN });
    for k in 0..=jumps.len() {
        let (hi, ghi) = match jumps.get(k) {
            Some(j) if j.lo == j.hi => (j.at, h.g_left(j.at)),
            Some(j) => (j.lo, h.g(j.lo)),
            None => (b, gb.unwrap_or_else(|| if b.is_finite() { h.g_left(b) } else { f64::NAN })),
        };
        let q = continuous_part(f, h, (lo, glo), (hi, ghi), cfg)?;
        if q.value.is_infinite() {
            return Ok(Quadrature::INFINITE);
        }
        total = combine(total, q);
        if let Some(j) = jumps.get(k) {
            if j.lo == j.hi {
                lo = j.at;
                glo = h.g_right(j.at);
            } else {
                lo = j.hi;
                glo = h.g(j.hi);
            }
        }
    }
    Ok(total)
}

/// `h` grows past the floating-point range at `finite` without being
/// infinite. The integral is cut there and kept if the stretch where `h`
/// climbs from `√h(finite)` to `h(finite)` adds nothing; otherwise it is
/// declared divergent.
fn overflowing_integral(
    f: &(dyn Fn(f64) -> f64 + Sync),
    h: &MonotoneIntegrator,
    a: f64,
    b: f64,
    finite: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    let size = |t: f64| h.value.as_ref()(t);
    let half = size(finite).sqrt();
    let grown = |t: f64| size(t) >= half;
    let (full, stretch) = match h.direction {
        IntegratorDirection::NonDecreasing => {
            let start = if a > 0.0 { a } else { finite * 1e-280 };
            let cut = if grown(start) { a } else { bisect_log(start, finite, grown).0 };
            ((a, finite), (cut, finite))
        }
        IntegratorDirection::NonIncreasing => {
            let end = if b.is_finite() { b } else { finite * 1e280 };
            let cut = if grown(end) { b } else { bisect_log(finite, end, |t| !grown(t)).1 };
            ((finite, b), (finite, cut))
        }
    };
    if !(full.0 < full.1) {
        return Ok(Quadrature::INFINITE);
    }
    let whole = split_at_one(f, h, full, cfg)?;
    if whole.value.is_infinite() {
        return Ok(whole);
    }
    let last = if stretch.0 < stretch.1 {
        split_at_one(f, h, stretch, cfg)?.value.value()
    } else {
        0.0
    };
    let total = whole.value.value();
    if last <= (cfg.rel_tol * total).max(cfg.abs_tol) {
        Ok(whole)
    } else {
        Ok(Quadrature::INFINITE)
    }
}

/// Integrates over `(a, b)` in two parts so that neither walk starts from an
/// extreme endpoint.
fn split_at_one(f: &(dyn Fn(f64) -> f64 + Sync), h: &MonotoneIntegrator, (a, b): (f64, f64), cfg: &QuadratureConfig) -> Result<Quadrature> {
    if a < 1.0 && 1.0 < b {
        let l = stieltjes_integral(f, h, a, 1.0, cfg)?;
        if l.value.is_infinite() {
            return Ok(l);
        }
        // The point 1 may carry an atom; it is counted on neither side.
        let atom = (h.g_right(1.0) - h.g_left(1.0)).max(0.0);
        let at = Quadrature {
            value: ExtReal::clamp(crate::extreal::mul_nonneg(f(1.0), atom)),
            error_bound: 0.0,
        };
        Ok(combine(combine(l, at), stieltjes_integral(f, h, 1.0, b, cfg)?))
    } else {
        stieltjes_integral(f, h, a, b, cfg)
    }
}

fn check_value(v: f64) -> Result<()> {
    if v.is_nan() {
        Err(MorreyError::ToleranceFailure("integrand or integrator evaluated to NaN".into()))
    } else {
        Ok(())
    }
}

fn vanishes_on(f: &(dyn Fn(f64) -> f64 + Sync), lo: f64, hi: f64) -> bool {
    let mut pts = probe_points(lo, hi, 200);
    if lo > 0.0 {
        pts.push(lo);
    }
    if hi.is_finite() {
        pts.push(hi);
    }
    pts.iter().all(|&t| f(t) == 0.0)
}

/// Continuous part of the measure on the open interval `(lo, hi)`, given the
/// one-sided values of the cumulative function at finite positive ends.
fn continuous_part(
    f: &(dyn Fn(f64) -> f64 + Sync),
    h: &MonotoneIntegrator,
    (lo, glo): (f64, f64),
    (hi, ghi): (f64, f64),
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    if lo >= hi {
        return Ok(Quadrature::ZERO);
    }
    // Chunk boundaries strictly inside (lo, hi) are continuity points.
    let piece = |x: f64, y: f64| {
        let gx = if x == lo { glo } else { h.g(x) };
        let gy = if y == hi { ghi } else { h.g(y) };
        adaptive_piece(f, h, x, y, gx, gy, cfg, 0)
    };
    match (lo == 0.0, hi.is_infinite()) {
        (false, false) => {
            let mut acc = Quadrature::ZERO;
            let mut x = lo;
            while x < hi {
                let y = if x * 6.0 >= hi { hi } else { x * 4.0 };
                let q = piece(x, y)?;
                if q.value.is_infinite() {
                    return Ok(q);
                }
                acc = combine(acc, q);
                x = y;
            }
            Ok(acc)
        }
        (true, false) => walk(piece, hi, WalkDirection::Inward, cfg),
        (false, true) => walk(piece, lo, WalkDirection::Outward, cfg),
        (true, true) => {
            let l = walk(piece, 1.0, WalkDirection::Inward, cfg)?;
            if l.value.is_infinite() {
                return Ok(l);
            }
            Ok(combine(l, walk(piece, 1.0, WalkDirection::Outward, cfg)?))
        }
    }
}

const MAX_DEPTH: usize = 40;

/// Midpoint–Stieltjes sums with Richardson extrapolation on `[x, y]`
/// (uniform in `log t`), bisecting when the extrapolation stalls.
#[allow(clippy::too_many_arguments)]
fn adaptive_piece(
    f: &(dyn Fn(f64) -> f64 + Sync),
    h: &MonotoneIntegrator,
    x: f64,
    y: f64,
    gx: f64,
    gy: f64,
    cfg: &QuadratureConfig,
    depth: usize,
) -> Result<Quadrature> {
    check_value(gx)?;
    check_value(gy)?;
    if gy - gx <= 0.0 {
        return Ok(Quadrature::ZERO);
    }
    let (lx, ly) = (x.ln(), y.ln());
    let mut table: Vec<f64> = Vec::new();
    let mut prev_row: Vec<f64> = Vec::new();
    let mut gvals = vec![gx, gy];
    let mut best = f64::NAN;
    let mut best_err = f64::INFINITY;
    for level in 1..=8 {
        let n = 1usize << level;
        // Refine the integrator grid to n + 1 points.
        let mut next = Vec::with_capacity(n + 1);
        for i in 0..n / 2 {
            next.push(gvals[i]);
            let t = (lx + (ly - lx) * (2 * i + 1) as f64 / n as f64).exp();
            let g = h.g(t);
            check_value(g)?;
            next.push(g);
        }
        next.push(gy);
        gvals = next;
        let mut s = 0.0;
        for i in 0..n {
            let dg = (gvals[i + 1] - gvals[i]).max(0.0);
            if dg == 0.0 {
                continue;
            }
            let m = (lx + (ly - lx) * (i as f64 + 0.5) / n as f64).exp();
            let fm = f(m);
            check_value(fm)?;
            s += crate::extreal::mul_nonneg(fm, dg);
        }
        if s.is_infinite() {
            return Ok(Quadrature::INFINITE);
        }
        // Richardson on the even error expansion of the midpoint rule.
        let mut row = vec![s];
        let mut factor = 4.0;
        for (j, &p) in prev_row.iter().enumerate() {
            let r = row[j] + (row[j] - p) / (factor - 1.0);
            row.push(r);
            factor *= 4.0;
        }
        if let (Some(&cur), Some(&old)) = (row.last(), prev_row.last()) {
            let err = (cur - old).abs();
            if err < best_err {
                best_err = err;
                best = cur;
            }
            let tol = cfg.abs_tol.max(cfg.rel_tol * cur.abs());
            if err <= tol && level >= 3 {
                return Ok(Quadrature {
                    value: ExtReal::clamp(cur),
                    error_bound: err,
                });
            }
        }
        table.push(s);
        prev_row = row;
    }
    if depth >= MAX_DEPTH || (y - x) <= 1e-13 * y {
        let tol = cfg.abs_tol.max(cfg.rel_tol * best.abs()).max(1e-6 * best.abs());
        if best_err <= tol {
            return Ok(Quadrature {
                value: ExtReal::clamp(best),
                error_bound: best_err,
            });
        }
        return Err(MorreyError::ToleranceFailure(format!(
            "Stieltjes piece [{x:e}, {y:e}] stalled at error {best_err:e}"
        )));
    }
    let mid = (x * y).sqrt();
    let gm = h.g(mid);
    check_value(gm)?;
    let l = adaptive_piece(f, h, x, mid, gx, gm, cfg, depth + 1)?;
    let r = adaptive_piece(f, h, mid, y, gm, gy, cfg, depth + 1)?;
    Ok(combine(l, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integration::quadrature::integrate_halfline;
    use approx::assert_relative_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn single_atom() {
        let h = MonotoneIntegrator::unit_step(1.0);
        let f = |t: f64| (t * 3.0).sin().abs() + 0.5;
        let q = stieltjes_integral(&f, &h, 0.0, f64::INFINITY, &cfg()).unwrap();
        assert_eq!(q.value.value(), f(1.0));
    }

    #[test]
    fn exponential_density() {
        let h = MonotoneIntegrator::continuous(IntegratorDirection::NonDecreasing, |t: f64| t.exp());
        let f = |t: f64| (-2.0 * t).exp();
        let q = stieltjes_integral(&f, &h, 0.0, f64::INFINITY, &cfg()).unwrap();
        assert_relative_eq!(q.value.value(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn matches_density_quadrature() {
        // h(t) = t^3/(1+t^3), h' = 3t^2/(1+t^3)^2.
        let h = MonotoneIntegrator::continuous(IntegratorDirection::NonDecreasing, |t: f64| t.powi(3) / (1.0 + t.powi(3)));
        let f = |t: f64| 1.0 / (1.0 + t);
        let s = stieltjes_integral(&f, &h, 0.0, f64::INFINITY, &cfg()).unwrap().value.value();
        let dens = |t: f64| f(t) * 3.0 * t * t / (1.0 + t.powi(3)).powi(2);
        let q = integrate_halfline(&dens, 0.0, f64::INFINITY, &[], &cfg()).unwrap().value.value();
        assert_relative_eq!(s, q, max_relative = 1e-8);
    }

    #[test]
    fn non_increasing_direction() {
        // ∫ f d(-φ) with φ = e^{-t}: measure e^{-t} dt.
        let h = MonotoneIntegrator::continuous(IntegratorDirection::NonIncreasing, |t: f64| (-t).exp());
        let q = stieltjes_integral(&|_| 1.0, &h, 0.0, f64::INFINITY, &cfg()).unwrap();
        assert_relative_eq!(q.value.value(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn infinite_tail_requires_vanishing_integrand() {
        let h = MonotoneIntegrator::new(
            IntegratorDirection::NonDecreasing,
            |t| if t <= 2.0 { t } else { f64::INFINITY },
            |t| if t <= 2.0 { t } else { f64::INFINITY },
            |t| if t < 2.0 { t } else { f64::INFINITY },
            vec![2.0],
        );
        let err = stieltjes_integral(&|_| 1.0, &h, 0.0, f64::INFINITY, &cfg()).unwrap_err();
        assert!(matches!(err, MorreyError::UndefinedStieltjes { .. }));
        let f = |t: f64| if t < 2.0 { 1.0 } else { 0.0 };
        let q = stieltjes_integral(&f, &h, 0.0, f64::INFINITY, &cfg()).unwrap();
        assert_relative_eq!(q.value.value(), 2.0, max_relative = 1e-9);
    }

    #[test]
    fn mirrored_infinite_head() {
        let phi = |t: f64| if t < 1.0 { f64::INFINITY } else { 1.0 / t };
        let h = MonotoneIntegrator::new(IntegratorDirection::NonIncreasing, phi, phi, phi, vec![1.0]);
        let err = stieltjes_integral(&|_| 1.0, &h, 0.0, f64::INFINITY, &cfg()).unwrap_err();
        assert!(matches!(err, MorreyError::UndefinedStieltjes { .. }));
        let f = |t: f64| if t <= 1.0 { 0.0 } else { 1.0 };
        let q = stieltjes_integral(&f, &h, 0.0, f64::INFINITY, &cfg()).unwrap();
        assert_relative_eq!(q.value.value(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn overflow_is_not_an_infinite_tail() {
        // h(t) = t^3 overflows near 5.6e102.
        let cube = |t: f64| t.powi(3);
        let h = MonotoneIntegrator::continuous(IntegratorDirection::NonDecreasing, cube).with_infinity_test(|_| false);
        let q = stieltjes_integral(&|t| (1.0 + t).powi(-4), &h, 0.0, f64::INFINITY, &cfg()).unwrap();
        // ∫ 3t²/(1+t)^4 dt = 1.
        assert_relative_eq!(q.value.value(), 1.0, max_relative = 1e-9);
        let h = MonotoneIntegrator::continuous(IntegratorDirection::NonDecreasing, cube).with_infinity_test(|_| false);
        let q = stieltjes_integral(&|t| 1.0 / (1.0 + t * t), &h, 0.0, f64::INFINITY, &cfg()).unwrap();
        assert!(q.value.is_infinite());
    }

    #[test]
    fn scan_finds_undeclared_jump() {
        let v = |t: f64| if t <= 3.7 { t / 10.0 } else { 5.0 + t / 10.0 };
        let r = |t: f64| if t < 3.7 { t / 10.0 } else { 5.0 + t / 10.0 };
        let h = MonotoneIntegrator::new(IntegratorDirection::NonDecreasing, v, v, r, vec![]);
        let js = h.jumps(1.0, 10.0);
        assert_eq!(js.len(), 1);
        assert_relative_eq!(js[0].at, 3.7, max_relative = 1e-10);
        assert_relative_eq!(js[0].size, 5.0, max_relative = 1e-9);
        let q = stieltjes_integral(&|_| 1.0, &h, 1.0, 10.0, &cfg()).unwrap();
        assert_relative_eq!(q.value.value(), 5.9, max_relative = 1e-9);
    }

    #[test]
    fn linearity() {
        let h = MonotoneIntegrator::continuous(IntegratorDirection::NonDecreasing, |t: f64| t.atan());
        let f1 = |t: f64| 1.0 / (1.0 + t);
        let f2 = |t: f64| (-t).exp();
        let a = stieltjes_integral(&f1, &h, 0.0, f64::INFINITY, &cfg()).unwrap().value.value();
        let b = stieltjes_integral(&f2, &h, 0.0, f64::INFINITY, &cfg()).unwrap().value.value();
        let s = stieltjes_integral(&|t| 2.0 * f1(t) + 3.0 * f2(t), &h, 0.0, f64::INFINITY, &cfg())
            .unwrap()
            .value
            .value();
        assert_relative_eq!(s, 2.0 * a + 3.0 * b, max_relative = 1e-9);
    }
}
