//! Coin operators for games A and B.
//!
//! A coin is the SU(2) operator
//!
//! ```text
//! A(θ, γ, δ) = [  e^{-i(γ+δ)/2} cos θ   -e^{-i(γ-δ)/2} sin θ ]
//!              [  e^{ i(γ-δ)/2} sin θ    e^{ i(γ+δ)/2} cos θ ]
//! ```
//!
//! with `|0⟩` meaning *lose* and `|1⟩` meaning *win*. Acting on a fresh `|0⟩`
//! target the coin loses with probability `cos²θ`, so the classical bias maps
//! to `θ = arccos √p_lose`.
//!
//! Note the asymmetry: on a `|1⟩` target the same operator *wins* with
//! probability `cos²θ`. This is not how a classical coin behaves, but it is the
//! operator's action and it is what the GHZ-state payoffs are built from.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::statevector::Unitary2;
use crate::{Error, Result};

/// Angles `(θ, γ, δ)` of one coin, with `θ ∈ [-π, π]` and `γ, δ ∈ [0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinParams {
    theta: f64,
    gamma: f64,
    delta: f64,
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lo..=hi).contains(&value) {
        return Err(Error::AngleOutOfRange { name, value, lo, hi });
    }
    Ok(())
}

impl CoinParams {
    pub fn new(theta: f64, gamma: f64, delta: f64) -> Result<Self> {
        check_range("theta", theta, -PI, PI)?;
        check_range("gamma", gamma, 0.0, TAU)?;
        check_range("delta", delta, 0.0, TAU)?;
        Ok(CoinParams { theta, gamma, delta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Probability that the coin leaves a `|0⟩` target in `|0⟩`.
    pub fn lose_probability(&self) -> f64 {
        self.theta.cos().powi(2)
    }
}

/// The matrix of coin `p`.
pub fn su2_matrix(p: &CoinParams) -> Unitary2 {
    let (s, c) = p.theta.sin_cos();
    let sum = (p.gamma + p.delta) / 2.0;
    let diff = (p.gamma - p.delta) / 2.0;
    Unitary2::from_entries_unchecked([
        Complex64::from_polar(c, -sum),
        -Complex64::from_polar(s, -diff),
        Complex64::from_polar(s, diff),
        Complex64::from_polar(c, sum),
    ])
}

/// `θ = arccos √p_lose ∈ [0, π/2]`.
pub fn lose_prob_to_theta(p_lose: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_lose) {
        return Err(Error::InvalidProbability(p_lose));
    }
    Ok(p_lose.sqrt().acos())
}

/// Bias ε shifting every lose probability upward; `|ε| < 1/10`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EpsilonBias(f64);

impl EpsilonBias {
    pub const ZERO: EpsilonBias = EpsilonBias(0.0);

    pub fn new(eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps.abs() >= 0.1 {
            return Err(Error::BiasOutOfRange(eps));
        }
        Ok(EpsilonBias(eps))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Lose probabilities at ε = 0 for game A and the four branches of game B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinBiases {
    pub a_lose: f64,
    pub b_lose: [f64; 4],
}

impl CoinBiases {
    /// Game A loses w.p. 1/2; B₁…B₄ lose w.p. 1/10, 3/4, 3/4, 3/10.
    pub const STANDARD: CoinBiases = CoinBiases {
        a_lose: 0.5,
        b_lose: [0.1, 0.75, 0.75, 0.3],
    };

    /// Standard game A with every B branch replaced by branch `branch` (0-based).
    pub fn all_b_branches_as(branch: usize) -> CoinBiases {
        let p = Self::STANDARD.b_lose[branch];
        CoinBiases {
            a_lose: Self::STANDARD.a_lose,
            b_lose: [p; 4],
        }
    }
}

impl Default for CoinBiases {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// Phases `(γ, δ)` of game A.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct APhases {
    pub gamma: f64,
    pub delta: f64,
}

/// Phases `(α, β)` of one game-B branch.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchPhases {
    pub alpha: f64,
    pub beta: f64,
}

/// Every phase of one game setup. Serialized as
/// `{"A": {"gamma": _, "delta": _}, "B": [{"alpha": _, "beta": _}; 4]}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseAssignment {
    #[serde(rename = "A")]
    pub a: APhases,
    #[serde(rename = "B")]
    pub b: [BranchPhases; 4],
}

impl PhaseAssignment {
    pub const NUM_COORDINATES: usize = 10;

    /// Coordinate names in the order used by [`PhaseAssignment::coordinate`].
    pub const COORDINATE_NAMES: [&'static str; 10] = [
        "gamma", "delta", "alpha1", "alpha2", "alpha3", "alpha4", "beta1", "beta2", "beta3", "beta4",
    ];

    pub fn coordinate(&self, i: usize) -> f64 {
        match i {
            0 => self.a.gamma,
            1 => self.a.delta,
            2..=5 => self.b[i - 2].alpha,
            6..=9 => self.b[i - 6].beta,
            _ => panic!("phase coordinate {i} out of range"),
        }
    }

    pub fn set_coordinate(&mut self, i: usize, value: f64) {
        match i {
            0 => self.a.gamma = value,
            1 => self.a.delta = value,
            2..=5 => self.b[i - 2].alpha = value,
            6..=9 => self.b[i - 6].beta = value,
            _ => panic!("phase coordinate {i} out of range"),
        }
    }

    /// Rejects any phase outside `[0, 2π]`, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        for i in 0..Self::NUM_COORDINATES {
            check_range(Self::COORDINATE_NAMES[i], self.coordinate(i), 0.0, TAU)?;
        }
        Ok(())
    }
}

/// The four coins of game B, indexed by the previous two results:
/// (lost, lost), (lost, won), (won, lost), (won, won).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameBSpec {
    pub branches: [CoinParams; 4],
}

impl GameBSpec {
    pub fn new(branches: [CoinParams; 4]) -> Self {
        GameBSpec { branches }
    }

    pub fn matrices(&self) -> [Unitary2; 4] {
        self.branches.map(|b| su2_matrix(&b))
    }

    pub fn from_biases(biases: &CoinBiases, e: EpsilonBias, phases: &[BranchPhases; 4]) -> Result<Self> {
        let mut branches = [CoinParams {
            theta: 0.0,
            gamma: 0.0,
            delta: 0.0,
        }; 4];
        for (k, slot) in branches.iter_mut().enumerate() {
            let theta = lose_prob_to_theta(biases.b_lose[k] + e.value())?;
            *slot = CoinParams::new(theta, phases[k].alpha, phases[k].beta)?;
        }
        Ok(GameBSpec { branches })
    }
}

/// Game A losing with probability `1/2 + ε`.
pub fn game_a_from_bias(e: EpsilonBias, gamma: f64, delta: f64) -> Result<CoinParams> {
    CoinParams::new(lose_prob_to_theta(0.5 + e.value())?, gamma, delta)
}

/// Game B with branch lose probabilities `1/10 + ε, 3/4 + ε, 3/4 + ε, 3/10 + ε`.
pub fn game_b_from_bias(e: EpsilonBias, phases: &[BranchPhases; 4]) -> Result<GameBSpec> {
    GameBSpec::from_biases(&CoinBiases::STANDARD, e, phases)
}

/// Both games of one setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameSetup {
    pub a: CoinParams,
    pub b: GameBSpec,
}

impl GameSetup {
    pub fn new(biases: &CoinBiases, e: EpsilonBias, phases: &PhaseAssignment) -> Result<Self> {
        let a = CoinParams::new(
            lose_prob_to_theta(biases.a_lose + e.value())?,
            phases.a.gamma,
            phases.a.delta,
        )?;
        let b = GameBSpec::from_biases(biases, e, &phases.b)?;
        Ok(GameSetup { a, b })
    }

    /// Standard biases with the given ε and phases.
    pub fn standard(eps: f64, phases: &PhaseAssignment) -> Result<Self> {
        Self::new(&CoinBiases::STANDARD, EpsilonBias::new(eps)?, phases)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, SQRT_2};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn su2_examples() {
        assert_eq!(su2_matrix(&CoinParams::new(0.0, 0.0, 0.0).unwrap()), Unitary2::IDENTITY);

        let m = su2_matrix(&CoinParams::new(FRAC_PI_4, 0.0, 0.0).unwrap());
        let h = SQRT_2 / 2.0;
        let want = [h, -h, h, h].map(|x| Complex64::new(x, 0.0));
        assert!(m.entries().iter().zip(want.iter()).all(|(a, b)| close(*a, *b)));

        let m = su2_matrix(&CoinParams::new(FRAC_PI_2, PI, FRAC_PI_2).unwrap());
        let want = [
            Complex64::new(0.0, 0.0),
            -Complex64::from_polar(1.0, -FRAC_PI_4),
            Complex64::from_polar(1.0, FRAC_PI_4),
            Complex64::new(0.0, 0.0),
        ];
        assert!(m.entries().iter().zip(want.iter()).all(|(a, b)| close(*a, *b)));
    }

    #[test]
    fn su2_rejects_out_of_range() {
        assert!(matches!(
            CoinParams::new(3.5, 0.0, 0.0),
            Err(Error::AngleOutOfRange { name: "theta", .. })
        ));
        assert!(matches!(
            CoinParams::new(0.0, -0.1, 0.0),
            Err(Error::AngleOutOfRange { name: "gamma", .. })
        ));
        assert!(matches!(
            CoinParams::new(0.0, 0.0, 7.0),
            Err(Error::AngleOutOfRange { name: "delta", .. })
        ));
    }

    #[test]
    fn theta_from_probability() {
        assert_abs_diff_eq!(lose_prob_to_theta(0.5).unwrap(), FRAC_PI_4, epsilon = 1e-15);
        assert_eq!(lose_prob_to_theta(1.0).unwrap(), 0.0);
        let t = lose_prob_to_theta(0.1).unwrap();
        assert_abs_diff_eq!(t, 1.2490458, epsilon = 1e-7);
        assert_abs_diff_eq!(t.cos().powi(2), 0.1, epsilon = 1e-12);
        assert!(matches!(lose_prob_to_theta(1.1), Err(Error::InvalidProbability(_))));
        assert!(matches!(lose_prob_to_theta(-0.1), Err(Error::InvalidProbability(_))));
    }

    #[test]
    fn game_a_examples() {
        let a = game_a_from_bias(EpsilonBias::ZERO, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(a.theta(), FRAC_PI_4, epsilon = 1e-15);

        let a = game_a_from_bias(EpsilonBias::new(0.01).unwrap(), 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(a.theta(), 0.7753975, epsilon = 1e-7);
        assert_abs_diff_eq!(a.lose_probability(), 0.51, epsilon = 1e-12);

        let a = game_a_from_bias(EpsilonBias::ZERO, 1.0, 2.0).unwrap();
        assert_eq!((a.gamma(), a.delta()), (1.0, 2.0));
    }

    #[test]
    fn game_b_examples() {
        let b = game_b_from_bias(EpsilonBias::ZERO, &[BranchPhases::default(); 4]).unwrap();
        let phi: Vec<f64> = b.branches.iter().map(|p| p.theta()).collect();
        assert_abs_diff_eq!(phi[0], 1.2490458, epsilon = 1e-7);
        assert_abs_diff_eq!(phi[1], FRAC_PI_6, epsilon = 1e-12);
        assert_abs_diff_eq!(phi[2], FRAC_PI_6, epsilon = 1e-12);
        assert_abs_diff_eq!(phi[3], 0.9911566, epsilon = 1e-7);
        let win: Vec<f64> = phi.iter().map(|t| t.sin().powi(2)).collect();
        for (w, want) in win.iter().zip([0.9, 0.25, 0.25, 0.7]) {
            assert_abs_diff_eq!(*w, want, epsilon = 1e-12);
        }

        let eps = 1.0 / 168.0;
        let b = game_b_from_bias(EpsilonBias::new(eps).unwrap(), &[BranchPhases::default(); 4]).unwrap();
        for (p, base) in b.branches.iter().zip([0.1, 0.75, 0.75, 0.3]) {
            assert_abs_diff_eq!(p.lose_probability(), base + eps, epsilon = 1e-12);
        }
    }

    #[test]
    fn bias_validity() {
        assert!(EpsilonBias::new(0.099).is_ok());
        assert!(matches!(EpsilonBias::new(0.1), Err(Error::BiasOutOfRange(_))));
        assert!(matches!(EpsilonBias::new(-0.2), Err(Error::BiasOutOfRange(_))));
        assert!(EpsilonBias::new(f64::NAN).is_err());
    }

    #[test]
    fn phase_file_format() {
        let json = r#"{"A": {"gamma": 0.5, "delta": 1.0},
                       "B": [{"alpha": 0, "beta": 1}, {"alpha": 0, "beta": 2},
                             {"alpha": 0, "beta": 3}, {"alpha": 0.25, "beta": 4}]}"#;
        let p: PhaseAssignment = serde_json::from_str(json).unwrap();
        assert_eq!(p.a.delta, 1.0);
        assert_eq!(p.b[3].alpha, 0.25);
        assert_eq!(p.coordinate(9), 4.0);

        let bad = r#"{"A": {"gamma": 0.5, "delta": 1.0, "theta": 2}, "B": []}"#;
        assert!(serde_json::from_str::<PhaseAssignment>(bad).is_err());

        let mut p = PhaseAssignment::default();
        p.set_coordinate(7, 7.0);
        assert!(matches!(p.validate(), Err(Error::AngleOutOfRange { name: "beta2", .. })));
    }
}
