//! Integrals and essential suprema of radial functions over balls `B(0,t)`
//! and their complements.

use statrs::function::gamma::gamma;

use crate::error::{MorreyError, Result};
use crate::extreal::ExtReal;
use crate::integration::quadrature::QuadratureConfig;
use crate::weights::RadialProfile;

/// Largest supported dimension.
pub const MAX_DIMENSION: usize = 64;

/// Surface measure of the unit sphere in `ℝⁿ`: `2π^{n/2}/Γ(n/2)` (2 for `n = 1`).
pub fn sphere_area(n: usize) -> f64 {
    assert!((1..=MAX_DIMENSION).contains(&n), "dimension {n} out of range");
    let h = n as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(h) / gamma(h)
}

/// Lebesgue measure of the unit ball in `ℝⁿ`.
pub fn unit_ball_volume(n: usize) -> f64 {
    sphere_area(n) / n as f64
}

pub(crate) fn check_dimension(n: usize) -> Result<()> {
    if (1..=MAX_DIMENSION).contains(&n) {
        Ok(())
    } else {
        Err(MorreyError::InvalidProfile(format!(
            "dimension must be in 1..={MAX_DIMENSION}, got {n}"
        )))
    }
}

/// `∫_{a<|x|<b} g(|x|) dx = σ ∫_a^b g(ρ) ρ^{n-1} dρ`.
pub fn shell_integral(g: &RadialProfile, n: usize, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<ExtReal> {
    check_dimension(n)?;
    let q = g.moment(1.0, n as f64 - 1.0, a, b, cfg)?;
    Ok(ExtReal::clamp(sphere_area(n)) * q.value)
}

/// `∫_{B(0,t)} g(|x|) dx`.
pub fn ball_integral(g: &RadialProfile, n: usize, t: f64, cfg: &QuadratureConfig) -> Result<ExtReal> {
    shell_integral(g, n, 0.0, t, cfg)
}

/// `∫_{ℝⁿ∖B(0,t)} g(|x|) dx`.
pub fn complement_integral(g: &RadialProfile, n: usize, t: f64, cfg: &QuadratureConfig) -> Result<ExtReal> {
    shell_integral(g, n, t, f64::INFINITY, cfg)
}

pub fn esssup_ball(g: &RadialProfile, t: f64) -> ExtReal {
    ExtReal::clamp(g.esssup(0.0, t))
}

pub fn esssup_complement(g: &RadialProfile, t: f64) -> ExtReal {
    ExtReal::clamp(g.esssup(t, f64::INFINITY))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn sphere_constants() {
        assert_relative_eq!(sphere_area(1), 2.0, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(2), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(3), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0, max_relative = 1e-14);
        // Recursion σ_{n+1} = 2π/(n-1)·σ_{n-1}: compare the two routes up to n = 64.
        for n in 3..=MAX_DIMENSION {
            let rec = 2.0 * PI / (n as f64 - 2.0) * sphere_area(n - 2);
            assert_relative_eq!(sphere_area(n), rec, max_relative = 1e-12);
        }
    }

    #[test]
    fn ball_examples() {
        let one = RadialProfile::constant(1.0);
        assert_relative_eq!(ball_integral(&one, 2, 1.0, &cfg()).unwrap().value(), PI, max_relative = 1e-14);
        assert_relative_eq!(ball_integral(&one, 1, 3.0, &cfg()).unwrap().value(), 6.0, max_relative = 1e-14);
        let inv = RadialProfile::power(1.0, -1.0);
        assert_relative_eq!(ball_integral(&inv, 2, 2.0, &cfg()).unwrap().value(), 4.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn complement_examples() {
        let g = RadialProfile::power(1.0, -3.0);
        assert_relative_eq!(complement_integral(&g, 1, 1.0, &cfg()).unwrap().value(), 1.0, max_relative = 1e-14);
        assert!(complement_integral(&RadialProfile::constant(1.0), 1, 1.0, &cfg())
            .unwrap()
            .is_infinite());
        let g = RadialProfile::power(1.0, -4.0);
        assert_relative_eq!(complement_integral(&g, 2, 1.0, &cfg()).unwrap().value(), PI, max_relative = 1e-14);
    }

    #[test]
    fn esssup_examples() {
        assert_eq!(esssup_ball(&RadialProfile::power(1.0, 1.0), 2.0).value(), 2.0);
        assert_eq!(esssup_complement(&RadialProfile::power(1.0, -1.0), 2.0).value(), 0.5);
        let step = RadialProfile::piecewise(vec![1.0], &[(3.0, 0.0), (1.0, 0.0)]);
        assert_eq!(esssup_ball(&step, 5.0).value(), 3.0);
    }

    #[test]
    fn numeric_profile_additivity() {
        let g = RadialProfile::ShiftedPower { c: 1.0, shift: 1.0, alpha: -5.0 };
        let total = shell_integral(&g, 3, 0.0, f64::INFINITY, &cfg()).unwrap().value();
        let b = ball_integral(&g, 3, 2.5, &cfg()).unwrap().value();
        let c = complement_integral(&g, 3, 2.5, &cfg()).unwrap().value();
        assert_relative_eq!(b + c, total, max_relative = 1e-10);
    }
}
