//! Exact statevector simulation of the history-dependent quantum Parrondo game.
//!
//! The crate is organised bottom-up:
//!
//! - [`statevector`]: dense amplitudes plus the two gate kernels the games need
//!   (a single-qubit unitary and a two-control multiplexed unitary).
//! - [`coin`]: the SU(2) coin operator `P(γ) R(θ) P(δ)` and the four-branch game B,
//!   built either from raw angles or from the classical win/lose probabilities.
//! - [`circuit`]: compiles an `A`/`B` token string into a qubit wiring plan and runs it.
//! - [`payoff`]: the ±1 payoff expectation and its first-order expansion in the bias ε.
//! - [`analytic`]: closed forms for the `AAB` sequence, used as cross-checks.
//! - [`classical`]: the classical games (finite sequences, Markov stationary play,
//!   winning thresholds).
//! - [`optimizer`]: coordinate search over the phase parameters.
//! - [`report`]: the payoff table and machine-readable reports used by the CLI.

pub mod analytic;
pub mod circuit;
pub mod classical;
pub mod coin;
mod error;
pub mod optimizer;
pub mod payoff;
pub mod report;
pub mod statevector;

pub use error::{Error, Result};

/// Tolerance for structural checks (normalization, unitarity).
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Tolerance for end-to-end numeric agreement.
pub const END_TO_END_TOL: f64 = 1e-9;

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Max,
    Min,
}

impl Direction {
    /// True if `candidate` is strictly better than `incumbent`.
    pub fn improves(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Direction::Max => candidate > incumbent,
            Direction::Min => candidate < incumbent,
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Direction::Max),
            "min" => Ok(Direction::Min),
            other => Err(Error::Parse(format!("direction must be `max` or `min`, got `{other}`"))),
        }
    }
}
