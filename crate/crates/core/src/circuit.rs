//! Wiring of `A`/`B` game sequences onto qubits.
//!
//! Every game writes its outcome to a fresh qubit. A `B` game is controlled by
//! the two most recent outcome qubits before it (older one = high control).
//! When a `B` appears before two outcomes exist, *seed* qubits are prepended
//! to stand for the results of the games preceding the sequence. This rule
//! reproduces the three standard layouts (`BB…B`, `ABAB…`, `AABAAB…`) and is
//! our extension for other strings such as `ABBAB`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::coin::{su2_matrix, CoinParams, GameBSpec};
use crate::statevector::StateVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token {
    A,
    B,
}

/// Non-empty sequence of games, written as e.g. `"AAB"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameSequence(Vec<Token>);

impl GameSequence {
    pub fn new(tokens: Vec<Token>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(GameSequence(tokens))
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// This sequence concatenated `n` times.
    pub fn repeat(&self, n: usize) -> Result<Self> {
        GameSequence::new(self.0.repeat(n))
    }

    /// True if every token is `B`.
    pub fn is_pure_b(&self) -> bool {
        self.0.iter().all(|t| *t == Token::B)
    }

    /// True for `AB`, `ABAB`, … .
    pub fn is_alternating_ab(&self) -> bool {
        self.0.len().is_multiple_of(2)
            && self
                .0
                .chunks(2)
                .all(|pair| pair == [Token::A, Token::B])
    }
}

impl FromStr for GameSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = s
            .chars()
            .map(|c| match c {
                'A' => Ok(Token::A),
                'B' => Ok(Token::B),
                other => Err(Error::InvalidToken(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        GameSequence::new(tokens)
    }
}

impl fmt::Display for GameSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            f.write_str(match t {
                Token::A => "A",
                Token::B => "B",
            })?;
        }
        Ok(())
    }
}

/// One compiled game. Qubit indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub token: Token,
    pub target: usize,
    /// `(control_hi, control_lo)` = (older, newer) outcome qubit; `None` for `A`.
    pub controls: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitPlan {
    pub seed_count: usize,
    pub total_qubits: usize,
    pub steps: Vec<Step>,
}

impl CircuitPlan {
    /// Qubits holding game outcomes (excludes seeds).
    pub fn outcome_qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|s| s.target)
    }
}

pub fn compile(seq: &GameSequence) -> CircuitPlan {
    let tokens = seq.tokens();
    let seed_count = tokens
        .iter()
        .position(|t| *t == Token::B)
        .map_or(0, |first_b| 2usize.saturating_sub(first_b));

    let mut history: Vec<usize> = (1..=seed_count).collect();
    let mut steps = Vec::with_capacity(tokens.len());
    for (k, &token) in tokens.iter().enumerate() {
        let target = seed_count + k + 1;
        let controls = match token {
            Token::A => None,
            Token::B => {
                let n = history.len();
                Some((history[n - 2], history[n - 1]))
            }
        };
        steps.push(Step { token, target, controls });
        history.push(target);
    }
    CircuitPlan {
        seed_count,
        total_qubits: seed_count + tokens.len(),
        steps,
    }
}

/// Executes `plan` from `init`.
pub fn run(plan: &CircuitPlan, a_params: &CoinParams, b_spec: &GameBSpec, init: StateVector) -> Result<StateVector> {
    if init.num_qubits() != plan.total_qubits {
        return Err(Error::QubitCountMismatch {
            expected: plan.total_qubits,
            got: init.num_qubits(),
        });
    }
    let a = su2_matrix(a_params);
    let b = b_spec.matrices();
    let mut state = init;
    for step in &plan.steps {
        match step.controls {
            None => state.apply_single_qubit(step.target, &a)?,
            Some((hi, lo)) => state.apply_two_controlled_multiplexed(hi, lo, step.target, &b)?,
        }
    }
    Ok(state)
}

/// Initial state choice.
#[derive(Debug, Clone, PartialEq)]
pub enum InitKind {
    /// `|0…0⟩`: every seed is a loss.
    AllZero,
    /// `(|0…0⟩ + |1…1⟩)/√2`.
    Ghz,
    Custom(Vec<Complex64>),
}

pub fn initial_state_for(plan: &CircuitPlan, kind: &InitKind) -> Result<StateVector> {
    match kind {
        InitKind::AllZero => StateVector::zero(plan.total_qubits),
        InitKind::Ghz => StateVector::ghz(plan.total_qubits),
        InitKind::Custom(amps) => {
            let state = StateVector::from_amplitudes(amps.clone())?;
            if state.num_qubits() != plan.total_qubits {
                return Err(Error::QubitCountMismatch {
                    expected: plan.total_qubits,
                    got: state.num_qubits(),
                });
            }
            Ok(state)
        }
    }
}
