//! Piecewise power functions `c_i ρ^{α_i}` on `(b_{i-1}, b_i]`, the closed-form
//! backbone of every power-type profile.

use crate::extreal::{mul_nonneg, pow_nonneg};

/// A piecewise power function with `segments.len() == breaks.len() + 1`.
/// Segment `i` lives on `(b_{i-1}, b_i]` with `b_{-1} = 0`, `b_m = ∞`.
/// Coefficients may be `0` or `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    pub breaks: Vec<f64>,
    pub segs: Vec<(f64, f64)>,
}

impl Piecewise {
    pub fn power(c: f64, alpha: f64) -> Self {
        Piecewise {
            breaks: Vec::new(),
            segs: vec![(c, alpha)],
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::power(c, 0.0)
    }

    /// `(lo, hi, c, α)` for every segment.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.segs.iter().enumerate().map(move |(i, &(c, a))| {
            let lo = if i == 0 { 0.0 } else { self.breaks[i - 1] };
            let hi = self.breaks.get(i).copied().unwrap_or(f64::INFINITY);
            (lo, hi, c, a)
        })
    }

    fn index_left(&self, rho: f64) -> usize {
        self.breaks.partition_point(|&b| b < rho)
    }

    fn index_right(&self, rho: f64) -> usize {
        self.breaks.partition_point(|&b| b <= rho)
    }

    pub fn eval(&self, rho: f64) -> f64 {
        let (c, a) = self.segs[self.index_left(rho)];
        seg_value(c, a, rho)
    }

    pub fn left_limit(&self, rho: f64) -> f64 {
        self.eval(rho)
    }

    pub fn right_limit(&self, rho: f64) -> f64 {
        let (c, a) = self.segs[self.index_right(rho)];
        seg_value(c, a, rho)
    }

    pub fn limit_zero(&self) -> f64 {
        let (c, a) = self.segs[0];
        seg_value(c, a, 0.0)
    }

    pub fn limit_inf(&self) -> f64 {
        let (c, a) = *self.segs.last().unwrap();
        seg_value(c, a, f64::INFINITY)
    }

    /// Pointwise product, merging breakpoints.
    pub fn product(&self, other: &Piecewise) -> Piecewise {
        let mut breaks: Vec<f64> = self.breaks.iter().chain(&other.breaks).copied().collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut segs = Vec::with_capacity(breaks.len() + 1);
        for i in 0..=breaks.len() {
            // A representative point strictly inside the merged segment.
            let lo = if i == 0 { 0.0 } else { breaks[i - 1] };
            let hi = breaks.get(i).copied().unwrap_or(f64::INFINITY);
            let probe = interior_point(lo, hi);
            let (c1, a1) = self.segs[self.index_left(probe)];
            let (c2, a2) = other.segs[other.index_left(probe)];
            segs.push((mul_nonneg(c1, c2), a1 + a2));
        }
        Piecewise { breaks, segs }.simplified()
    }

    /// `φ^e` for `e != 0`.
    pub fn pow(&self, e: f64) -> Piecewise {
        let segs = self
            .segs
            .iter()
            .map(|&(c, a)| {
                let nc = pow_nonneg(c, e);
                // 0^e or ∞^e absorb the power; keep α·e for the finite case.
                if nc == 0.0 || nc.is_infinite() {
                    (nc, 0.0)
                } else {
                    (nc, a * e)
                }
            })
            .collect();
        Piecewise {
            breaks: self.breaks.clone(),
            segs,
        }
        .simplified()
    }

    /// Merges neighbouring segments with identical `(c, α)`.
    pub fn simplified(mut self) -> Piecewise {
        let mut i = 0;
        while i + 1 < self.segs.len() {
            let (c0, a0) = self.segs[i];
            let (c1, a1) = self.segs[i + 1];
            let same = (c0 == c1 && (a0 == a1 || c0 == 0.0 || c0.is_infinite()))
                || (c0 == 0.0 && c1 == 0.0);
            if same {
                self.segs.remove(i + 1);
                self.breaks.remove(i);
            } else {
                i += 1;
            }
        }
        self
    }

    /// `∫_a^b φ(ρ)^q ρ^m dρ`, exactly.
    pub fn moment(&self, q: f64, m: f64, a: f64, b: f64) -> f64 {
        let mut total = 0.0;
        for (lo, hi, c, alpha) in self.intervals() {
            let lo = lo.max(a);
            let hi = hi.min(b);
            if lo >= hi {
                continue;
            }
            total += seg_moment(c, alpha, q, m, lo, hi);
            if total.is_infinite() {
                return total;
            }
        }
        total
    }

    pub fn esssup(&self, a: f64, b: f64) -> f64 {
        self.intervals()
            .filter_map(|(lo, hi, c, al)| {
                let lo = lo.max(a);
                let hi = hi.min(b);
                (lo < hi).then(|| seg_sup(c, al, lo, hi))
            })
            .fold(0.0, f64::max)
    }

    pub fn essinf(&self, a: f64, b: f64) -> f64 {
        self.intervals()
            .filter_map(|(lo, hi, c, al)| {
                let lo = lo.max(a);
                let hi = hi.min(b);
                (lo < hi).then(|| seg_inf(c, al, lo, hi))
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// `Some(true)` non-decreasing, `Some(false)` non-increasing, `None` neither.
    /// Constants report `Some(true)`.
    pub fn monotone_direction(&self) -> Option<bool> {
        let mut inc = true;
        let mut dec = true;
        for &(c, a) in &self.segs {
            if c > 0.0 && c.is_finite() {
                if a > 0.0 {
                    dec = false;
                }
                if a < 0.0 {
                    inc = false;
                }
            }
        }
        for &b in &self.breaks {
            let l = self.left_limit(b);
            let r = self.right_limit(b);
            if r > l {
                dec = false;
            }
            if r < l {
                inc = false;
            }
        }
        if inc {
            Some(true)
        } else if dec {
            Some(false)
        } else {
            None
        }
    }
}

pub(crate) fn interior_point(lo: f64, hi: f64) -> f64 {
    match (lo == 0.0, hi.is_infinite()) {
        (true, true) => 1.0,
        (true, false) => 0.5 * hi,
        (false, true) => 2.0 * lo,
        (false, false) => (lo * hi).sqrt(),
    }
}

fn seg_value(c: f64, alpha: f64, rho: f64) -> f64 {
    if alpha == 0.0 {
        c
    } else {
        mul_nonneg(c, pow_nonneg(rho, alpha))
    }
}

fn seg_sup(c: f64, alpha: f64, lo: f64, hi: f64) -> f64 {
    if alpha > 0.0 {
        seg_value(c, alpha, hi)
    } else {
        seg_value(c, alpha, lo)
    }
}

fn seg_inf(c: f64, alpha: f64, lo: f64, hi: f64) -> f64 {
    if alpha > 0.0 {
        seg_value(c, alpha, lo)
    } else {
        seg_value(c, alpha, hi)
    }
}

/// `∫_lo^hi (c ρ^α)^q ρ^m dρ`, evaluated in log space so that neither the
/// coefficient nor the endpoint powers overflow prematurely.
pub(crate) fn seg_moment(c: f64, alpha: f64, q: f64, m: f64, lo: f64, hi: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    if c.is_infinite() {
        return f64::INFINITY;
    }
    let e1 = alpha * q + m + 1.0;
    let lc = q * c.ln();
    if lo == 0.0 {
        if e1 <= 0.0 || hi.is_infinite() {
            return f64::INFINITY;
        }
        return (lc + e1 * hi.ln()).exp() / e1;
    }
    if hi.is_infinite() {
        if e1 >= 0.0 {
            return f64::INFINITY;
        }
        return (lc + e1 * lo.ln()).exp() / (-e1);
    }
    let l = (hi / lo).ln();
    if e1 == 0.0 {
        return lc.exp() * l;
    }
    if e1 > 0.0 {
        (lc + e1 * hi.ln()).exp() * (-(-e1 * l).exp_m1()) / e1
    } else {
        (lc + e1 * lo.ln()).exp() * (-(e1 * l).exp_m1()) / (-e1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn step() -> Piecewise {
        // 3 on (0,1], 1 on (1,∞)
        Piecewise {
            breaks: vec![1.0],
            segs: vec![(3.0, 0.0), (1.0, 0.0)],
        }
    }

    #[test]
    fn eval_and_limits() {
        let s = step();
        assert_eq!(s.eval(1.0), 3.0);
        assert_eq!(s.left_limit(1.0), 3.0);
        assert_eq!(s.right_limit(1.0), 1.0);
        assert_eq!(s.eval(5.0), 1.0);
        assert_eq!(s.esssup(0.0, 5.0), 3.0);
        assert_eq!(s.esssup(1.0, 5.0), 1.0);
        assert_eq!(s.essinf(0.0, 5.0), 1.0);
    }

    #[test]
    fn moments() {
        let p = Piecewise::power(1.0, -1.0);
        assert_relative_eq!(p.moment(2.0, 0.0, 1.0, f64::INFINITY), 1.0);
        assert_relative_eq!(p.moment(2.0, 0.0, 2.0, f64::INFINITY), 0.5);
        assert!(p.moment(2.0, 0.0, 0.0, 1.0).is_infinite());
        assert!(p.moment(1.0, 0.0, 1.0, f64::INFINITY).is_infinite());
        let one = Piecewise::constant(1.0);
        assert_relative_eq!(one.moment(1.0, 0.0, 0.0, 3.0), 3.0);
        assert_relative_eq!(one.moment(1.0, 0.0, 2.0, 3.0), 1.0, max_relative = 1e-15);
        // log case
        assert_relative_eq!(p.moment(1.0, 0.0, 1.0, std::f64::consts::E), 1.0, max_relative = 1e-15);
        // zero coefficient kills divergence
        let z = Piecewise::constant(0.0);
        assert_eq!(z.moment(1.0, 0.0, 0.0, f64::INFINITY), 0.0);
    }

    #[test]
    fn moment_near_log_exponent_is_accurate() {
        let p = Piecewise::power(1.0, -1.0 + 1e-12);
        let v = p.moment(1.0, 0.0, 1.0, 10.0);
        assert_relative_eq!(v, 10f64.ln(), max_relative = 1e-10);
    }

    #[test]
    fn product_and_pow() {
        let s = step();
        let p = Piecewise::power(2.0, 1.0);
        let prod = s.product(&p);
        assert_eq!(prod.eval(0.5), 3.0);
        assert_eq!(prod.eval(2.0), 4.0);
        let sq = s.pow(2.0);
        assert_eq!(sq.eval(0.5), 9.0);
        let inv = Piecewise {
            breaks: vec![1.0],
            segs: vec![(0.0, 0.0), (1.0, -2.0)],
        }
        .pow(-1.0);
        assert!(inv.eval(0.5).is_infinite());
        assert_eq!(inv.eval(2.0), 4.0);
    }

    #[test]
    fn monotone_detection() {
        assert_eq!(step().monotone_direction(), Some(false));
        assert_eq!(Piecewise::power(1.0, 2.0).monotone_direction(), Some(true));
        let bump = Piecewise {
            breaks: vec![1.0],
            segs: vec![(1.0, 1.0), (1.0, -1.0)],
        };
        assert_eq!(bump.monotone_direction(), None);
    }

    #[test]
    fn simplify_merges_zero_segments() {
        let z = Piecewise {
            breaks: vec![1.0, 2.0],
            segs: vec![(0.0, 1.0), (0.0, -3.0), (1.0, 0.0)],
        }
        .simplified();
        assert_eq!(z.breaks, vec![2.0]);
    }
}
