use approx::assert_relative_eq;
use morrey_core::embeddings::{classify_case, evaluate_embedding, Direction, EmbeddingProblem, Theorem};
use morrey_core::hardy::{evaluate, EvalConfig, HardyProblem, HardyVariant};
use morrey_core::weights::{RadialProfile, Weight};
use morrey_core::MorreyError;

const INF: f64 = f64::INFINITY;

fn problem(direction: Direction, p1: f64, p2: f64, theta: f64) -> EmbeddingProblem {
    EmbeddingProblem {
        direction,
        n: 2,
        p1,
        p2,
        theta,
        v1: Weight::unit(2),
        v2: Weight::unit(2),
        omega: RadialProfile::truncated_power(1.0, -1.0, 1.0),
    }
}

/// Case hypotheses for a Lebesgue source, each written out in full.
fn lebesgue_source_cases(p1: f64, p2: f64, th: f64) -> Vec<&'static str> {
    let fin = |x: f64| x.is_finite();
    let table: [(&str, bool); 9] = [
        ("i", p2 < p1 && p1 <= th && fin(th)),
        ("ii", p2 < p1 && fin(p1) && th < p1),
        ("iii", p2 < p1 && fin(p1) && th == INF),
        ("iv", p1 == INF && th == INF && fin(p2)),
        ("v", p1 == INF && fin(th) && fin(p2)),
        ("vi", p1 == p2 && p1 <= th && fin(th)),
        ("vii", p1 == p2 && fin(p1) && th < p1),
        ("viii", p1 == p2 && fin(p1) && th == INF),
        ("ix", p1 == INF && p2 == INF && fin(th)),
    ];
    table.iter().filter(|(_, hit)| *hit).map(|(id, _)| *id).collect()
}

fn lebesgue_target_cases(p1: f64, p2: f64, th: f64) -> Vec<&'static str> {
    let base = p1 <= p2 && p2.is_finite();
    [("a", base && th <= p1), ("b", base && p1 < th)]
        .iter()
        .filter(|(_, hit)| *hit)
        .map(|(id, _)| *id)
        .collect()
}

#[test]
fn case_hypotheses_partition_the_exponent_grid() {
    let grid = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 7.0, INF];
    let directions = [
        (Direction::LebesgueToLM, Theorem::Main1),
        (Direction::LebesgueToDualLM, Theorem::Main100),
        (Direction::LMToLebesgue, Theorem::Main2),
        (Direction::DualLMToLebesgue, Theorem::Main200),
    ];
    let mut seen = std::collections::BTreeSet::new();
    for (direction, theorem) in directions {
        for &p1 in &grid {
            for &p2 in &grid {
                for &th in &grid {
                    let expected = if direction.target_is_morrey() {
                        lebesgue_source_cases(p1, p2, th)
                    } else {
                        lebesgue_target_cases(p1, p2, th)
                    };
                    assert!(expected.len() <= 1, "overlapping hypotheses at ({p1}, {p2}, {th}): {expected:?}");
                    match (classify_case(&problem(direction, p1, p2, th)), expected.first()) {
                        (Ok(tag), Some(id)) => {
                            assert_eq!(tag.theorem, theorem);
                            assert_eq!(tag.case_id, *id, "{direction:?} at ({p1}, {p2}, {th})");
                            seen.insert((theorem.label(), tag.case_id));
                        }
                        (Err(MorreyError::InadmissibleExponents(_)), None) => {}
                        (got, want) => panic!("{direction:?} at ({p1}, {p2}, {th}): got {got:?}, want {want:?}"),
                    }
                }
            }
        }
    }
    assert_eq!(seen.len(), 9 + 9 + 2 + 2);
}

#[test]
fn nonpositive_exponents_are_invalid() {
    for bad in [0.0, -1.0, f64::NAN] {
        let err = classify_case(&problem(Direction::LebesgueToLM, bad, 1.0, 1.0)).unwrap_err();
        assert!(matches!(err, MorreyError::InvalidExponent(_)), "{err:?}");
    }
}

/// `ρ ↦ φ(λρ)` for a piecewise power profile.
fn dilate(breakpoints: &[f64], segments: &[(f64, f64)], lambda: f64) -> RadialProfile {
    let b = breakpoints.iter().map(|x| x / lambda).collect();
    let s: Vec<_> = segments.iter().map(|&(c, a)| (c * lambda.powf(a), a)).collect();
    RadialProfile::piecewise(b, &s)
}

/// `ρ ↦ ρ^k φ(1/ρ)` for a piecewise power profile.
fn invert(breakpoints: &[f64], segments: &[(f64, f64)], k: f64) -> RadialProfile {
    let b = breakpoints.iter().rev().map(|x| 1.0 / x).collect();
    let s: Vec<_> = segments.iter().rev().map(|&(c, a)| (c, k - a)).collect();
    RadialProfile::piecewise(b, &s)
}

fn value(prob: &HardyProblem) -> f64 {
    evaluate(prob, &EvalConfig::default()).unwrap().value.value()
}

fn close(a: f64, b: f64) -> bool {
    (a.is_infinite() && b.is_infinite()) || (a - b).abs() <= 1e-8 * b.abs()
}

#[test]
fn dilating_both_weights_rescales_the_hardy_constant() {
    let n = 2;
    let vb = [0.5];
    let vs = [(0.0, 0.0), (1.0, -3.0)];
    let wb = [0.7];
    let rising = [(1.0, 0.25), (2.0, 0.5)];
    let falling = [(1.0, -0.25), (0.5, -0.5)];
    for (p, q, ws) in [(2.0, 2.5, rising), (3.0, 1.5, rising), (2.0, 2.0, rising), (1.0, 2.0, falling), (1.5, 0.75, rising)] {
        let base = value(&HardyProblem::new(
            HardyVariant::Direct,
            p,
            q,
            RadialProfile::piecewise(vb.to_vec(), &vs),
            Weight::new(n, RadialProfile::piecewise(wb.to_vec(), &ws)).unwrap(),
        ));
        assert!(base.is_finite() && base > 0.0, "p = {p}, q = {q}: {base}");
        for lambda in [0.3, 4.0] {
            let scaled = value(&HardyProblem::new(
                HardyVariant::Direct,
                p,
                q,
                dilate(&vb, &vs, lambda),
                Weight::new(n, dilate(&wb, &ws, lambda)).unwrap(),
            ));
            let factor = lambda.powf(n as f64 / p - n as f64 - 1.0 / q);
            assert_relative_eq!(scaled, factor * base, max_relative = 1e-8);
        }
    }
}

#[test]
fn inversion_maps_the_complement_operator_to_the_ball_operator() {
    // x ↦ x/|x|² carries ∫_{|x|>t} f to ∫_{|y|<1/t} g with g(y) = f(y/|y|²)|y|^{-2n}.
    let n = 2;
    let vb = [1.0];
    let vs = [(1.0, 0.0), (0.0, 0.0)];
    for (p, q, beta) in [(2.0, 3.0, 2.5), (2.0, 1.5, 2.5), (3.0, 3.0, 4.5), (1.0, 2.0, 0.25), (1.0, 0.5, 0.5)] {
        let ws = [(1.0, beta)];
        let complement = value(&HardyProblem::new(
            HardyVariant::DirectComplement,
            p,
            q,
            RadialProfile::piecewise(vb.to_vec(), &vs),
            Weight::new(n, RadialProfile::piecewise(vec![], &ws)).unwrap(),
        ));
        let ball = value(&HardyProblem::new(
            HardyVariant::Direct,
            p,
            q,
            invert(&vb, &vs, -2.0),
            Weight::new(n, invert(&[], &ws, 2.0 * n as f64 * (p - 1.0))).unwrap(),
        ));
        assert!(complement.is_finite() && complement > 0.0, "p = {p}, q = {q}: {complement}");
        assert_relative_eq!(ball, complement, max_relative = 1e-8);
    }
}

#[test]
fn complementary_embedding_mirrors_the_ball_embedding() {
    let n = 2;
    let cfg = EvalConfig::default();
    let ob = [1.0];
    let mut compared = 0;
    for (p1, p2, th, a, gamma) in [
        (4.0, 2.0, 6.0, 3.0, 0.1),
        (4.0, 2.0, 3.0, 3.0, 0.2),
        (2.0, 2.0, 3.0, 0.5, 0.0),
        (3.0, 3.0, 1.5, 0.5, 0.0),
        (6.0, 2.0, 6.0, 5.0, 0.1),
        (4.0, 2.0, 6.0, 1.0, 0.1),
    ] {
        let os = [(1.0, gamma), (0.0, 0.0)];
        let v1s = [(1.0, a)];
        let dual = EmbeddingProblem {
            direction: Direction::LebesgueToDualLM,
            n,
            p1,
            p2,
            theta: th,
            v1: Weight::new(n, RadialProfile::piecewise(vec![], &v1s)).unwrap(),
            v2: Weight::unit(n),
            omega: RadialProfile::piecewise(ob.to_vec(), &os),
        };
        let mirrored = EmbeddingProblem {
            direction: Direction::LebesgueToLM,
            v1: Weight::new(n, invert(&[], &v1s, 2.0 * n as f64 * (p1 / p2 - 1.0))).unwrap(),
            omega: invert(&ob, &os, -2.0 / th),
            ..dual.clone()
        };
        let d = evaluate_embedding(&dual, &cfg).unwrap();
        let m = evaluate_embedding(&mirrored, &cfg).unwrap();
        assert_eq!(d.tag.case_id, m.tag.case_id);
        assert!(close(d.value.value(), m.value.value()), "({p1}, {p2}, {th}): {} vs {}", d.value, m.value);
        compared += d.value.value().is_finite() as usize;
    }
    assert!(compared >= 5, "only {compared} finite comparisons");
}
