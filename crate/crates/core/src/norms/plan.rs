//! Precomputed evaluation plans for norms of cumulative functionals of a
//! simple radial function.
//!
//! For a step function `f` on fixed knots, the inner functional
//! `N(r) = ‖f‖_{e,v,B(0,r)}` (or over the complement, or with `e = ∞`) is an
//! explicit function of the cell values: inside cell `j` it equals
//! `(I_j + f_j^e P_j(r))^{1/e}` where `I_j` accumulates the preceding cells
//! and `P_j` is the partial `v`-mass. The outer norm `‖W N‖` is then a
//! one-dimensional integral whose nodes and partial masses do not depend on
//! `f`; they are computed once here.

use std::ops::Range;
use std::sync::OnceLock;

use super::grid::GridFunction;
use crate::error::{MorreyError, Result};
use crate::extreal::{mul_nonneg, pow_nonneg, ExtReal};
use crate::integration::quadrature::{integrate_bounded, QuadratureConfig};
use crate::integration::supremum::golden_max;
use crate::integration::radial::sphere_area;
use crate::weights::piecewise::Piecewise;
use crate::weights::{RadialProfile, Weight};

const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_78,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_361_77,
    0.313_706_645_877_887_05,
    0.222_381_034_453_374_34,
    0.101_228_536_290_376_69,
];
/// Largest ratio `hi/lo` of a quadrature piece.
const PIECE_RATIO: f64 = 1.5;
/// Levels of geometric grading toward the point where the cumulative starts.
const GRADING_LEVELS: usize = 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Balls `B(0, r)`.
    Head,
    /// Complements `ℝⁿ ∖ B(0, r)`.
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerMode {
    /// `(∫ f^e v)^{1/e}` over the region.
    Sum { exponent: f64 },
    /// `esssup f v` over the region.
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OuterMode {
    /// `(∫_0^∞ W(r) N(r)^θ dr)^{1/θ}`; `W` is given already raised as needed.
    Integral { exponent: f64 },
    /// `sup_r W(r) N(r)`.
    Sup,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    weight: f64,
    part: f64,
}

#[derive(Debug)]
struct Piece {
    cell: usize,
    lo: f64,
    hi: f64,
    nodes: Range<usize>,
    /// Partial inner quantity at the end where the cumulative starts
    /// (`lo` for balls, `hi` for complements).
    edge_part: f64,
    /// Partial inner quantity at the opposite end.
    far_part: f64,
    graded: OnceLock<std::result::Result<Vec<Node>, MorreyError>>,
}

/// Inner weight in a form that is cheap to integrate repeatedly.
#[derive(Debug, Clone)]
struct InnerWeight {
    profile: RadialProfile,
    closed: Option<Piecewise>,
    n: usize,
    sigma: f64,
    cfg: QuadratureConfig,
}

impl InnerWeight {
    fn mass(&self, a: f64, b: f64) -> Result<f64> {
        if a >= b {
            return Ok(0.0);
        }
        let m = self.n as f64 - 1.0;
        let v = match &self.closed {
            Some(p) => p.moment(1.0, m, a, b),
            None => self.profile.moment(1.0, m, a, b, &self.cfg)?.value.value(),
        };
        Ok(self.sigma * v)
    }

    fn sup(&self, a: f64, b: f64) -> f64 {
        if a >= b {
            return 0.0;
        }
        match &self.closed {
            Some(p) => p.esssup(a, b),
            None => self.profile.esssup(a, b),
        }
    }
}

#[derive(Debug)]
pub struct CumulativePlan {
    side: Side,
    inner: InnerMode,
    outer: OuterMode,
    knots: Vec<f64>,
    /// Full-cell mass (sum mode) or full-cell supremum (max mode).
    cell_total: Vec<f64>,
    pieces: Vec<Piece>,
    nodes: Vec<Node>,
    /// `∫ W` or `esssup W` over the part of `(0, ∞)` outside the knots
    /// where `N` is constant and nonzero.
    outside: f64,
    inner_weight: InnerWeight,
    outer_weight: RadialProfile,
}

impl CumulativePlan {
    pub fn new(
        knots: &[f64],
        side: Side,
        inner: InnerMode,
        inner_weight: &Weight,
        outer: OuterMode,
        outer_weight: &RadialProfile,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        match inner {
            InnerMode::Sum { exponent } if !(exponent > 0.0 && exponent.is_finite()) => {
                return Err(MorreyError::InvalidExponent(exponent));
            }
            _ => {}
        }
        if let OuterMode::Integral { exponent } = outer {
            if !(exponent > 0.0 && exponent.is_finite()) {
                return Err(MorreyError::InvalidExponent(exponent));
            }
        }
        let iw = InnerWeight {
            closed: inner_weight.profile.closed_form(),
            profile: inner_weight.profile.clone(),
            n: inner_weight.n,
            sigma: sphere_area(inner_weight.n),
            cfg: *cfg,
        };
        let m = knots.len() - 1;
        let mut cell_total = Vec::with_capacity(m);
        for j in 0..m {
            cell_total.push(match inner {
                InnerMode::Sum { .. } => iw.mass(knots[j], knots[j + 1])?,
                InnerMode::Max => iw.sup(knots[j], knots[j + 1]),
            });
        }
        let mut breaks = inner_weight.profile.breakpoints();
        breaks.extend(outer_weight.breakpoints());
        breaks.sort_by(f64::total_cmp);

        let mut plan = CumulativePlan {
            side,
            inner,
            outer,
            knots: knots.to_vec(),
            cell_total,
            pieces: Vec::new(),
            nodes: Vec::new(),
            outside: 0.0,
            inner_weight: iw,
            outer_weight: outer_weight.clone(),
        };
        for j in 0..m {
            let (a, b) = (knots[j], knots[j + 1]);
            let mut cuts = vec![a];
            cuts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
            cuts.push(b);
            for w in cuts.windows(2) {
                let k = ((w[1] / w[0]).ln() / PIECE_RATIO.ln()).ceil().max(1.0) as usize;
                let r = (w[1] / w[0]).powf(1.0 / k as f64);
                let mut lo = w[0];
                for i in 0..k {
                    let hi = if i + 1 == k { w[1] } else { lo * r };
                    plan.push_piece(j, lo, hi)?;
                    lo = hi;
                }
            }
        }
        plan.outside = match (side, outer) {
            (Side::Head, OuterMode::Integral { .. }) => {
                outer_weight.moment(1.0, 0.0, knots[m], f64::INFINITY, cfg)?.value.value()
            }
            (Side::Tail, OuterMode::Integral { .. }) => outer_weight.moment(1.0, 0.0, 0.0, knots[0], cfg)?.value.value(),
            (Side::Head, OuterMode::Sup) => outer_weight.esssup(knots[m], f64::INFINITY),
            (Side::Tail, OuterMode::Sup) => outer_weight.esssup(0.0, knots[0]),
        };
        Ok(plan)
    }

    /// Inner partial quantity at `r` inside cell `j`.
    fn part(&self, j: usize, r: f64) -> Result<f64> {
        let (a, b) = (self.knots[j], self.knots[j + 1]);
        Ok(match (self.inner, self.side) {
            (InnerMode::Sum { .. }, Side::Head) => self.inner_weight.mass(a, r)?,
            (InnerMode::Sum { .. }, Side::Tail) => self.inner_weight.mass(r, b)?,
            (InnerMode::Max, Side::Head) => self.inner_weight.sup(a, r),
            (InnerMode::Max, Side::Tail) => self.inner_weight.sup(r, b),
        })
    }

    fn gauss_nodes(&self, j: usize, lo: f64, hi: f64, out: &mut Vec<Node>) -> Result<()> {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            for r in [c - h * x, c + h * x] {
                let wr = self.outer_weight.eval(r);
                let weight = match self.outer {
                    OuterMode::Integral { .. } => mul_nonneg(wr, w * h),
                    OuterMode::Sup => wr,
                };
                out.push(Node {
                    weight,
                    part: self.part(j, r)?,
                });
            }
        }
        Ok(())
    }

    fn push_piece(&mut self, j: usize, lo: f64, hi: f64) -> Result<()> {
        let start = self.nodes.len();
        let mut nodes = Vec::with_capacity(18);
        self.gauss_nodes(j, lo, hi, &mut nodes)?;
        if self.outer == OuterMode::Sup {
            nodes.push(Node {
                weight: self.outer_weight.right_limit(lo),
                part: self.part(j, lo)?,
            });
            nodes.push(Node {
                weight: self.outer_weight.left_limit(hi),
                part: self.part(j, hi)?,
            });
        }
        self.nodes.extend(nodes);
        let (edge_part, far_part) = match self.side {
            Side::Head => (self.part(j, lo)?, self.part(j, hi)?),
            Side::Tail => (self.part(j, hi)?, self.part(j, lo)?),
        };
        self.pieces.push(Piece {
            cell: j,
            lo,
            hi,
            nodes: start..self.nodes.len(),
            edge_part,
            far_part,
            graded: OnceLock::new(),
        });
        Ok(())
    }

    /// Nodes on geometrically shrinking subpieces toward the starting edge.
    fn graded_nodes(&self, piece: &Piece) -> Result<Vec<Node>> {
        let mut out = Vec::with_capacity(8 * (GRADING_LEVELS + 1));
        let h = piece.hi - piece.lo;
        for k in 0..=GRADING_LEVELS {
            let big = h * 0.5f64.powi(k as i32);
            let small = if k == GRADING_LEVELS { 0.0 } else { 0.5 * big };
            let (lo, hi) = match self.side {
                Side::Head => (piece.lo + small, piece.lo + big),
                Side::Tail => (piece.hi - big, piece.hi - small),
            };
            self.gauss_nodes(piece.cell, lo, hi, &mut out)?;
        }
        Ok(out)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn cells(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn evaluate(&self, f: &GridFunction) -> Result<ExtReal> {
        if f.knots() != self.knots.as_slice() {
            return Err(MorreyError::InvalidGrid("function knots differ from the plan's knots".into()));
        }
        self.evaluate_values(f.values())
    }

    /// Evaluates on raw cell values (must match the plan's cell count).
    pub fn evaluate_values(&self, values: &[f64]) -> Result<ExtReal> {
        let m = self.cells();
        assert_eq!(values.len(), m, "cell count mismatch");
        let (sum_exp, is_sum) = match self.inner {
            InnerMode::Sum { exponent } => (exponent, true),
            InnerMode::Max => (1.0, false),
        };
        let combine = |x: f64, y: f64| if is_sum { x + y } else { x.max(y) };
        let coef: Vec<f64> = values.iter().map(|&v| if is_sum { pow_nonneg(v, sum_exp) } else { v }).collect();
        // Accumulated inner quantity from all cells before `j` along the side.
        let mut before = vec![0.0; m + 1];
        match self.side {
            Side::Head => {
                for j in 0..m {
                    before[j + 1] = combine(before[j], mul_nonneg(coef[j], self.cell_total[j]));
                }
            }
            Side::Tail => {
                for j in (0..m).rev() {
                    before[j] = combine(before[j + 1], mul_nonneg(coef[j], self.cell_total[j]));
                }
            }
        }
        let base_of = |j: usize| match self.side {
            Side::Head => before[j],
            Side::Tail => before[j + 1],
        };
        let total = match self.side {
            Side::Head => before[m],
            Side::Tail => before[0],
        };
        // N(r)^θ (integral) or N(r) (sup) from the inner accumulated quantity.
        let e = match self.outer {
            OuterMode::Integral { exponent } => exponent / sum_exp,
            OuterMode::Sup => 1.0 / sum_exp,
        };
        let lift = |s: f64| {
            if e == 1.0 {
                s
            } else if e == 2.0 {
                s * s
            } else if e == 0.5 {
                s.sqrt()
            } else {
                pow_nonneg(s, e)
            }
        };
        let mut acc = 0.0f64;
        let mut extra = 0.0f64;
        let mut consume = |weight: f64, s: f64| {
            let v = mul_nonneg(weight, lift(s));
            match self.outer {
                OuterMode::Integral { .. } => acc += v,
                OuterMode::Sup => acc = acc.max(v),
            }
        };
        let mut piece_best = vec![0.0f64; if self.outer == OuterMode::Sup { self.pieces.len() } else { 0 }];
        for (pi, piece) in self.pieces.iter().enumerate() {
            let j = piece.cell;
            let base = base_of(j);
            let a = coef[j];
            if a == 0.0 && base == 0.0 {
                continue;
            }
            if self.outer == OuterMode::Sup {
                for nd in &self.nodes[piece.nodes.clone()] {
                    let v = mul_nonneg(nd.weight, lift(combine(base, mul_nonneg(a, nd.part))));
                    piece_best[pi] = piece_best[pi].max(v);
                }
            }
            let kink = !is_sum
                && matches!(self.outer, OuterMode::Integral { .. })
                && mul_nonneg(a, piece.edge_part) < base
                && base < mul_nonneg(a, piece.far_part);
            if kink {
                extra += self.integrate_across_kink(piece, a, base, &lift)?;
                continue;
            }
            let grade = is_sum && base == 0.0 && piece.edge_part == 0.0 && self.outer != OuterMode::Sup;
            if grade {
                let nodes = piece
                    .graded
                    .get_or_init(|| self.graded_nodes(piece))
                    .as_ref()
                    .map_err(Clone::clone)?;
                for nd in nodes {
                    consume(nd.weight, combine(base, mul_nonneg(a, nd.part)));
                }
            } else {
                for nd in &self.nodes[piece.nodes.clone()] {
                    consume(nd.weight, combine(base, mul_nonneg(a, nd.part)));
                }
            }
        }
        consume(self.outside, total);
        acc += extra;
        if self.outer == OuterMode::Sup {
            acc = acc.max(self.polish_sup(&piece_best, &coef, &base_of, &combine, &lift)?);
        }
        let v = match self.outer {
            OuterMode::Integral { exponent } => pow_nonneg(acc, 1.0 / exponent),
            OuterMode::Sup => acc,
        };
        if v.is_nan() {
            return Err(MorreyError::ToleranceFailure("norm plan produced NaN".into()));
        }
        Ok(ExtReal::clamp(v))
    }

    /// `∫ W max(base, a·part)^θ` over a piece where the running maximum
    /// switches from `base` to the cell's own contribution.
    fn integrate_across_kink(&self, piece: &Piece, a: f64, base: f64, lift: &dyn Fn(f64) -> f64) -> Result<f64> {
        let j = piece.cell;
        let (mut lo, mut hi) = (piece.lo, piece.hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let above = mul_nonneg(a, self.part(j, mid)?) >= base;
            // Head: part grows with r; Tail: it shrinks.
            if above == (self.side == Side::Head) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let cross = 0.5 * (lo + hi);
        let failure = std::cell::RefCell::new(None);
        let g = |r: f64| match self.part(j, r) {
            Ok(part) => mul_nonneg(self.outer_weight.eval(r), lift(mul_nonneg(a, part).max(base))),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        };
        let q = integrate_bounded(&g, piece.lo, piece.hi, &[cross], &self.inner_weight.cfg)?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(q.value.value())
    }

    /// Golden-section search in log r over the pieces holding the largest node
    /// values and their neighbours.
    fn polish_sup(
        &self,
        piece_best: &[f64],
        coef: &[f64],
        base_of: &dyn Fn(usize) -> f64,
        combine: &dyn Fn(f64, f64) -> f64,
        lift: &dyn Fn(f64) -> f64,
    ) -> Result<f64> {
        let mut order: Vec<usize> = (0..piece_best.len()).filter(|&i| piece_best[i] > 0.0).collect();
        order.sort_by(|&x, &y| piece_best[y].total_cmp(&piece_best[x]));
        let mut chosen: Vec<usize> = Vec::new();
        for &i in order.iter().take(3) {
            for k in i.saturating_sub(1)..=(i + 1).min(piece_best.len() - 1) {
                if !chosen.contains(&k) {
                    chosen.push(k);
                }
            }
        }
        let mut best = 0.0f64;
        let failure = std::cell::RefCell::new(None);
        for pi in chosen {
            let piece = &self.pieces[pi];
            let j = piece.cell;
            let (base, a) = (base_of(j), coef[j]);
            let g = |x: f64| {
                let r = x.exp();
                match self.part(j, r) {
                    Ok(part) => mul_nonneg(self.outer_weight.eval(r), lift(combine(base, mul_nonneg(a, part)))),
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    }
                }
            };
            best = best.max(golden_max(&g, piece.lo.ln(), piece.hi.ln(), 80));
        }
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(best),
        }
    }

    /// Breakdown for debugging: `(lo, hi)` of every quadrature piece.
    pub fn piece_bounds(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pieces.iter().map(|p| (p.lo, p.hi))
    }
}

/// `‖f‖_{p,v,ℝⁿ}` on fixed knots, via precomputed cell masses.
#[derive(Debug, Clone)]
pub struct LebesguePlan {
    knots: Vec<f64>,
    p: f64,
    /// Cell masses (p < ∞) or cell suprema of `v` (p = ∞).
    cell: Vec<f64>,
}

impl LebesguePlan {
    pub fn new(knots: &[f64], p: f64, v: &Weight, cfg: &QuadratureConfig) -> Result<Self> {
        if !(p > 0.0) {
            return Err(MorreyError::InvalidExponent(p));
        }
        let iw = InnerWeight {
            closed: v.profile.closed_form(),
            profile: v.profile.clone(),
            n: v.n,
            sigma: sphere_area(v.n),
            cfg: *cfg,
        };
        let cell = knots
            .windows(2)
            .map(|w| {
                if p.is_infinite() {
                    Ok(iw.sup(w[0], w[1]))
                } else {
                    iw.mass(w[0], w[1])
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(LebesguePlan {
            knots: knots.to_vec(),
            p,
            cell,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    /// Cell masses of the weight, or its cell suprema when `p = ∞`.
    pub fn cell_weights(&self) -> &[f64] {
        &self.cell
    }

    pub fn evaluate_values(&self, values: &[f64]) -> ExtReal {
        if self.p.is_infinite() {
            let s = values
                .iter()
                .zip(&self.cell)
                .map(|(&f, &c)| mul_nonneg(f, c))
                .fold(0.0, f64::max);
            return ExtReal::clamp(s);
        }
        let s: f64 = values
            .iter()
            .zip(&self.cell)
            .map(|(&f, &c)| mul_nonneg(pow_nonneg(f, self.p), c))
            .sum();
        ExtReal::clamp(pow_nonneg(s, 1.0 / self.p))
    }
}
