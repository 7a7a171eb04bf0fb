//! Payoff expectation and its first-order expansion in ε.
//!
//! A qubit measured in `|1⟩` pays +1 and in `|0⟩` pays −1, so a basis label
//! with `j` ones out of `n` qubits pays `2j − n`. The `n` here is the whole
//! register, seed qubits included, and per-qubit figures divide by that same
//! count.

use crate::circuit::{compile, initial_state_for, run, CircuitPlan, GameSequence, InitKind};
use crate::coin::{CoinBiases, EpsilonBias, GameSetup, PhaseAssignment};
use crate::statevector::StateVector;
use crate::Result;

/// Default central-difference step for [`payoff_epsilon_expansion`].
pub const DEFAULT_STEP: f64 = 1e-4;

/// `Σ_label (2·popcount(label) − n)·|amplitude|²`.
pub fn payoff_expectation(state: &StateVector) -> f64 {
    let n = state.num_qubits() as i64;
    state
        .probabilities()
        .enumerate()
        .map(|(i, p)| (2 * i.count_ones() as i64 - n) as f64 * p)
        .sum()
}

/// Payoff counting only the outcome qubits of `plan` (seed qubits excluded).
/// Diagnostic only; the table figures use [`payoff_expectation`].
pub fn outcome_only_payoff(state: &StateVector, plan: &CircuitPlan) -> f64 {
    let mask = plan
        .outcome_qubits()
        .fold(0usize, |m, q| m | state.qubit_mask(q));
    let n = plan.steps.len() as i64;
    state
        .probabilities()
        .enumerate()
        .map(|(i, p)| (2 * (i & mask).count_ones() as i64 - n) as f64 * p)
        .sum()
}

pub fn per_qubit(total: f64, num_qubits: usize) -> f64 {
    total / num_qubits as f64
}

/// `payoff ≈ c0 + c1·ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffExpansion {
    pub c0: f64,
    pub c1: f64,
    pub per_qubit: bool,
}

impl PayoffExpansion {
    /// Builds the expansion from `f(0)`, `f(h)` and `f(−h)`.
    pub fn central(f: impl Fn(f64) -> Result<f64> + Sync, h: f64, per_qubit: bool) -> Result<Self> {
        EpsilonBias::new(h)?;
        EpsilonBias::new(-h)?;
        let c0 = f(0.0)?;
        let (plus, minus) = rayon::join(|| f(h), || f(-h));
        Ok(PayoffExpansion {
            c0,
            c1: (plus? - minus?) / (2.0 * h),
            per_qubit,
        })
    }

    pub fn at(&self, eps: f64) -> f64 {
        self.c0 + self.c1 * eps
    }
}

/// A fully specified quantum game run, parameterized by ε.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub sequence: GameSequence,
    pub init: InitKind,
    pub phases: PhaseAssignment,
    pub biases: CoinBiases,
}

impl Scenario {
    pub fn new(sequence: GameSequence, init: InitKind, phases: PhaseAssignment) -> Self {
        Scenario {
            sequence,
            init,
            phases,
            biases: CoinBiases::STANDARD,
        }
    }

    pub fn with_biases(mut self, biases: CoinBiases) -> Self {
        self.biases = biases;
        self
    }

    pub fn plan(&self) -> CircuitPlan {
        compile(&self.sequence)
    }

    pub fn final_state(&self, eps: f64) -> Result<StateVector> {
        let plan = self.plan();
        let setup = GameSetup::new(&self.biases, EpsilonBias::new(eps)?, &self.phases)?;
        let init = initial_state_for(&plan, &self.init)?;
        run(&plan, &setup.a, &setup.b, init)
    }

    pub fn payoff_total(&self, eps: f64) -> Result<f64> {
        Ok(payoff_expectation(&self.final_state(eps)?))
    }

    pub fn payoff_per_qubit(&self, eps: f64) -> Result<f64> {
        let total = self.payoff_total(eps)?;
        Ok(per_qubit(total, self.plan().total_qubits))
    }

    pub fn expansion(&self, h: f64, per_qubit: bool) -> Result<PayoffExpansion> {
        if per_qubit {
            PayoffExpansion::central(|e| self.payoff_per_qubit(e), h, true)
        } else {
            PayoffExpansion::central(|e| self.payoff_total(e), h, false)
        }
    }
}

/// Per-qubit `(c0, c1)` for the standard coins.
pub fn payoff_epsilon_expansion(
    seq: &GameSequence,
    init: &InitKind,
    phases: &PhaseAssignment,
    h: f64,
) -> Result<PayoffExpansion> {
    Scenario::new(seq.clone(), init.clone(), *phases).expansion(h, true)
}
