//! Closed-form payoffs of a single `AAB` round, totals over its three qubits.

use std::f64::consts::{PI, TAU};

use crate::coin::{lose_prob_to_theta, APhases, BranchPhases, CoinBiases, PhaseAssignment};
use crate::{Direction, Result};

/// Phases entering the `AAB` closed form. All angles are reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AABPhaseConfig {
    pub delta: f64,
    pub betas: [f64; 4],
    pub alphas: [f64; 4],
    pub gamma: f64,
}

fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl AABPhaseConfig {
    pub fn new(delta: f64, betas: [f64; 4], alphas: [f64; 4], gamma: f64) -> Self {
        AABPhaseConfig {
            delta: wrap(delta),
            betas: betas.map(wrap),
            alphas: alphas.map(wrap),
            gamma: wrap(gamma),
        }
    }

    pub fn to_phase_assignment(&self) -> PhaseAssignment {
        let mut b = [BranchPhases::default(); 4];
        for (k, slot) in b.iter_mut().enumerate() {
            *slot = BranchPhases {
                alpha: self.alphas[k],
                beta: self.betas[k],
            };
        }
        PhaseAssignment {
            a: APhases {
                gamma: self.gamma,
                delta: self.delta,
            },
            b,
        }
    }

    pub fn from_phase_assignment(p: &PhaseAssignment) -> Self {
        AABPhaseConfig::new(
            p.a.delta,
            p.b.map(|b| b.beta),
            p.b.map(|b| b.alpha),
            p.a.gamma,
        )
    }
}

/// `(θ, [φ₁..φ₄])` for the given biases and ε.
pub fn coin_angles(biases: &CoinBiases, eps: f64) -> Result<(f64, [f64; 4])> {
    let theta = lose_prob_to_theta(biases.a_lose + eps)?;
    let mut phis = [0.0; 4];
    for (phi, p) in phis.iter_mut().zip(biases.b_lose) {
        *phi = lose_prob_to_theta(p + eps)?;
    }
    Ok((theta, phis))
}

/// Payoff of `AAB` on `|000⟩`; identical to the classical value.
pub fn aab_payoff_zero_state(theta: f64, phis: [f64; 4]) -> f64 {
    let (s, c) = theta.sin_cos();
    let c2 = |x: f64| (2.0 * x).cos();
    s.powi(4) * (2.0 - c2(phis[3])) - c.powi(4) * (2.0 + c2(phis[0]))
        - 0.25 * (2.0 * theta).sin().powi(2) * (c2(phis[1]) + c2(phis[2]))
}

/// Payoff of `AAB` on `(|000⟩ + |111⟩)/√2`. Depends on game A's δ and the
/// branch β's only.
pub fn aab_payoff_ghz(theta: f64, phis: [f64; 4], cfg: &AABPhaseConfig) -> f64 {
    const SIGNS: [f64; 4] = [1.0, -1.0, -1.0, 1.0];
    let interference: f64 = (0..4)
        .map(|k| SIGNS[k] * (2.0 * cfg.delta + cfg.betas[k]).cos() * (2.0 * phis[k]).sin())
        .sum();
    0.5 * (2.0 * theta).cos() * ((2.0 * phis[3]).cos() - (2.0 * phis[0]).cos())
        + 0.25 * (2.0 * theta).sin().powi(2) * interference
}

/// Phases extremizing [`aab_payoff_ghz`] for a chosen δ.
///
/// `Max`: β₂ = β₃ = π − 2δ, β₁ = β₄ = −2δ. `Min`: the two pairs swapped.
pub fn aab_extremal_phases(direction: Direction, delta: f64) -> AABPhaseConfig {
    let aligned = -2.0 * delta;
    let flipped = PI - 2.0 * delta;
    let betas = match direction {
        Direction::Max => [aligned, flipped, flipped, aligned],
        Direction::Min => [flipped, aligned, aligned, flipped],
    };
    AABPhaseConfig::new(delta, betas, [0.0; 4], 0.0)
}

/// Extreme of [`aab_payoff_ghz`] over all phases:
/// `±¼ sin²2θ Σ|sin 2φᵢ| + ½ cos 2θ (cos 2φ₄ − cos 2φ₁)`.
pub fn aab_ghz_phase_extreme(theta: f64, phis: [f64; 4], direction: Direction) -> f64 {
    let sign = match direction {
        Direction::Max => 1.0,
        Direction::Min => -1.0,
    };
    let amp: f64 = phis.iter().map(|p| (2.0 * p).sin().abs()).sum();
    sign * 0.25 * (2.0 * theta).sin().powi(2) * amp
        + 0.5 * (2.0 * theta).cos() * ((2.0 * phis[3]).cos() - (2.0 * phis[0]).cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn fig1() -> (f64, [f64; 4]) {
        coin_angles(&CoinBiases::STANDARD, 0.0).unwrap()
    }

    fn exact_max() -> f64 {
        0.25 * (0.6 + 3f64.sqrt() + 2.0 * 0.21f64.sqrt())
    }

    #[test]
    fn zero_state_examples() {
        assert_abs_diff_eq!(aab_payoff_zero_state(FRAC_PI_2, [0.0, 0.0, 0.0, FRAC_PI_2]), 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(aab_payoff_zero_state(0.0, [0.0, 1.0, 1.0, 1.0]), -3.0, epsilon = 1e-12);
        let (t, p) = fig1();
        assert_abs_diff_eq!(aab_payoff_zero_state(t, p), 1.0 / 20.0, epsilon = 1e-12);
    }

    #[test]
    fn ghz_single_branch_vanishes() {
        let (t, p) = fig1();
        let cfg = AABPhaseConfig::new(0.7, [1.9; 4], [0.3, 0.1, 2.0, 5.0], 2.2);
        assert_abs_diff_eq!(aab_payoff_ghz(t, [p[0]; 4], &cfg), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn ghz_extremes() {
        let (t, p) = fig1();
        assert_abs_diff_eq!(exact_max(), 0.812_141_5, epsilon = 1e-7);
        for delta in [0.0, 0.4, FRAC_PI_4, 3.0] {
            let hi = aab_payoff_ghz(t, p, &aab_extremal_phases(Direction::Max, delta));
            let lo = aab_payoff_ghz(t, p, &aab_extremal_phases(Direction::Min, delta));
            assert_abs_diff_eq!(hi, exact_max(), epsilon = 1e-12);
            assert_abs_diff_eq!(lo, -exact_max(), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(aab_ghz_phase_extreme(t, p, Direction::Max), exact_max(), epsilon = 1e-12);
    }

    #[test]
    fn extremal_phase_assignments() {
        let cfg = aab_extremal_phases(Direction::Max, 0.0);
        assert_eq!(cfg.betas, [0.0, PI, PI, 0.0]);
        let cfg = aab_extremal_phases(Direction::Min, 0.0);
        assert_eq!(cfg.betas, [PI, 0.0, 0.0, PI]);
        let cfg = aab_extremal_phases(Direction::Max, FRAC_PI_4);
        let want = [3.0 * FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, 3.0 * FRAC_PI_2];
        for (b, w) in cfg.betas.iter().zip(want) {
            assert_abs_diff_eq!(*b, w, epsilon = 1e-15);
        }
        assert_eq!(cfg.alphas, [0.0; 4]);
    }

    #[test]
    fn zero_phase_reduction() {
        let (t, p) = fig1();
        let cfg = AABPhaseConfig::new(0.0, [0.0; 4], [0.0; 4], 0.0);
        let reduced = 0.25
            * ((2.0 * p[0]).sin() - (2.0 * p[1]).sin() - (2.0 * p[2]).sin() + (2.0 * p[3]).sin());
        assert_abs_diff_eq!(aab_payoff_ghz(t, p, &cfg), reduced, epsilon = 1e-15);
    }

    #[test]
    fn extreme_matches_dense_grid() {
        let (t, p) = coin_angles(&CoinBiases::STANDARD, 0.02).unwrap();
        let n = 24;
        let grid: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
        let mut best = f64::NEG_INFINITY;
        let mut worst = f64::INFINITY;
        // δ = 0 loses nothing: every β is free, and the grid holds 0 and π
        for &b1 in &grid {
            for &b2 in &grid {
                for &b3 in &[0.0, PI] {
                    for &b4 in &[0.0, PI] {
                        let v = aab_payoff_ghz(t, p, &AABPhaseConfig::new(0.0, [b1, b2, b3, b4], [0.0; 4], 0.0));
                        best = best.max(v);
                        worst = worst.min(v);
                    }
                }
            }
        }
        assert_abs_diff_eq!(best, aab_ghz_phase_extreme(t, p, Direction::Max), epsilon = 1e-12);
        assert_abs_diff_eq!(worst, aab_ghz_phase_extreme(t, p, Direction::Min), epsilon = 1e-12);
    }

    #[test]
    fn config_round_trip_and_wrap() {
        let cfg = AABPhaseConfig::new(-0.5, [-1.0, 7.0, 0.0, 1.0], [0.1; 4], TAU);
        assert!(cfg.delta >= 0.0 && cfg.delta < TAU);
        assert_eq!(cfg.gamma, 0.0);
        let back = AABPhaseConfig::from_phase_assignment(&cfg.to_phase_assignment());
        assert_eq!(back, cfg);
        assert!(cfg.to_phase_assignment().validate().is_ok());
    }
}
