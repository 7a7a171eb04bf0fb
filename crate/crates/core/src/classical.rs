//! The classical coin games: exact finite-sequence expectations, the Markov
//! chain over the last two results, and winning thresholds in ε.
//!
//! Histories are indexed `2·older + newer` with 1 = won, so
//! `LL = 0, LW = 1, WL = 2, WW = 3`, matching game B's branch order.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{compile, GameSequence, Token};
use crate::coin::{CoinBiases, EpsilonBias};
use crate::{Error, Result};

/// Win probabilities of game A and the four branches of game B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalGameSpec {
    pub a_win: f64,
    pub b_win: [f64; 4],
}

impl ClassicalGameSpec {
    pub fn from_biases(biases: &CoinBiases, e: EpsilonBias) -> Result<Self> {
        let win = |lose: f64| {
            let p = 1.0 - (lose + e.value());
            if p > 0.0 && p < 1.0 {
                Ok(p)
            } else {
                Err(Error::InvalidProbability(p))
            }
        };
        let mut b_win = [0.0; 4];
        for (w, lose) in b_win.iter_mut().zip(biases.b_lose) {
            *w = win(lose)?;
        }
        Ok(ClassicalGameSpec {
            a_win: win(biases.a_lose)?,
            b_win,
        })
    }

    /// `1/2 − ε` for A; `9/10 − ε, 1/4 − ε, 1/4 − ε, 7/10 − ε` for B.
    pub fn from_bias(e: EpsilonBias) -> Result<Self> {
        Self::from_biases(&CoinBiases::STANDARD, e)
    }

    fn win_probability(&self, token: Token, history: usize) -> f64 {
        match token {
            Token::A => self.a_win,
            Token::B => self.b_win[history],
        }
    }
}

/// How the seed results preceding a sequence are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedMode {
    /// Average uniformly over every seed assignment.
    Uniform,
    /// Fixed `(older, newer)` seed results, `true` = won. A single seed uses `newer`.
    Fixed(bool, bool),
}

impl SeedMode {
    pub const LOSS_LOSS: SeedMode = SeedMode::Fixed(false, false);

    fn assignments(self, seed_count: usize) -> Vec<(Vec<bool>, f64)> {
        match self {
            SeedMode::Uniform => {
                let n = 1usize << seed_count;
                (0..n)
                    .map(|bits| {
                        let seeds = (0..seed_count)
                            .map(|k| bits >> (seed_count - 1 - k) & 1 == 1)
                            .collect();
                        (seeds, 1.0 / n as f64)
                    })
                    .collect()
            }
            SeedMode::Fixed(older, newer) => {
                let seeds = match seed_count {
                    0 => vec![],
                    1 => vec![newer],
                    _ => vec![older, newer],
                };
                vec![(seeds, 1.0)]
            }
        }
    }
}

/// Expected total payoff of `seq`, seed results included.
///
/// Propagates the exact distribution over the last two results, which is all
/// that game B reads; this is the full path enumeration with the irrelevant
/// history summed out.
pub fn classical_sequence_total(seq: &GameSequence, spec: &ClassicalGameSpec, seeds: SeedMode) -> f64 {
    let plan = compile(seq);
    let mut total = 0.0;
    for (seed_bits, weight) in seeds.assignments(plan.seed_count) {
        let mut dist = [0.0f64; 4];
        let mut h = 0usize;
        let mut expected = 0.0;
        for &won in &seed_bits {
            h = ((h << 1) | usize::from(won)) & 0b11;
            expected += if won { 1.0 } else { -1.0 };
        }
        dist[h] = 1.0;
        for &token in seq.tokens() {
            let mut next = [0.0f64; 4];
            for (state, &p) in dist.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let w = spec.win_probability(token, state);
                expected += p * (2.0 * w - 1.0);
                let shifted = (state << 1) & 0b11;
                next[shifted | 1] += p * w;
                next[shifted] += p * (1.0 - w);
            }
            dist = next;
        }
        total += weight * expected;
    }
    total
}

/// [`classical_sequence_total`] divided by the total qubit count (seeds included).
pub fn classical_sequence_payoff(seq: &GameSequence, spec: &ClassicalGameSpec, seeds: SeedMode) -> f64 {
    classical_sequence_total(seq, spec, seeds) / compile(seq).total_qubits as f64
}

/// Which game is played each round in repeated play.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    PureA,
    PureB,
    /// Play A with probability `q`, otherwise B.
    Mix(f64),
}

impl Policy {
    fn a_weight(self) -> f64 {
        match self {
            Policy::PureA => 1.0,
            Policy::PureB => 0.0,
            Policy::Mix(q) => q,
        }
    }
}

impl FromStr for Policy {
    type Err = Error;

    /// Accepts `A`, `B` or `mix:<q>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(Policy::PureA),
            "B" => Ok(Policy::PureB),
            _ => {
                let q = s
                    .strip_prefix("mix:")
                    .and_then(|q| q.parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse(format!("policy must be `A`, `B` or `mix:<q>`, got `{s}`")))?;
                if !(0.0..=1.0).contains(&q) {
                    return Err(Error::InvalidMixWeight(q));
                }
                Ok(Policy::Mix(q))
            }
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::PureA => f.write_str("A"),
            Policy::PureB => f.write_str("B"),
            Policy::Mix(q) => write!(f, "mix:{q}"),
        }
    }
}

/// Markov chain over the last two results under a fixed policy.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryChain {
    pub transition: [[f64; 4]; 4],
    pub reward: [f64; 4],
}

impl HistoryChain {
    pub fn for_policy(policy: Policy, spec: &ClassicalGameSpec) -> Result<Self> {
        let q = policy.a_weight();
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidMixWeight(q));
        }
        let mut transition = [[0.0; 4]; 4];
        let mut reward = [0.0; 4];
        for s in 0..4 {
            let w = q * spec.a_win + (1.0 - q) * spec.b_win[s];
            let shifted = (s << 1) & 0b11;
            transition[s][shifted | 1] += w;
            transition[s][shifted] += 1.0 - w;
            reward[s] = 2.0 * w - 1.0;
        }
        Ok(HistoryChain { transition, reward })
    }

    /// Solves `πT = π`, `Σπ = 1` by replacing the last balance equation with
    /// the normalization and eliminating directly.
    pub fn stationary(&self) -> Result<[f64; 4]> {
        // rows: (Tᵀ − I) π = 0, last row all ones
        let mut m = [[0.0f64; 5]; 4];
        for (i, row) in m.iter_mut().enumerate().take(3) {
            for (j, cell) in row.iter_mut().enumerate().take(4) {
                *cell = self.transition[j][i] - if i == j { 1.0 } else { 0.0 };
            }
        }
        m[3] = [1.0, 1.0, 1.0, 1.0, 1.0];

        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
                .expect("non-empty range");
            if m[pivot][col].abs() < 1e-14 {
                return Err(Error::ReducibleChain);
            }
            m.swap(col, pivot);
            for r in 0..4 {
                if r != col {
                    let f = m[r][col] / m[col][col];
                    for c in col..5 {
                        m[r][c] -= f * m[col][c];
                    }
                }
            }
        }
        let mut pi = [0.0; 4];
        for (i, p) in pi.iter_mut().enumerate() {
            *p = m[i][4] / m[i][i];
        }
        if pi.iter().any(|&p| p < -1e-12) {
            return Err(Error::ReducibleChain);
        }
        Ok(pi)
    }

    pub fn stationary_payoff(&self) -> Result<f64> {
        let pi = self.stationary()?;
        Ok(pi.iter().zip(self.reward.iter()).map(|(p, r)| p * r).sum())
    }
}

/// Long-run expected payoff per game under `policy`.
pub fn stationary_payoff(policy: Policy, e: EpsilonBias) -> Result<f64> {
    HistoryChain::for_policy(policy, &ClassicalGameSpec::from_bias(e)?)?.stationary_payoff()
}

/// What a winning threshold is computed for.
#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdTarget {
    /// Stationary per-game payoff of repeated play.
    Stationary(Policy),
    /// First-order per-qubit payoff `c0 + c1·ε` of one play of a sequence,
    /// seeds averaged uniformly. This is the payoff as tabulated to O(ε).
    Sequence(GameSequence),
    /// Exact per-qubit payoff of one play of a sequence, seeds averaged
    /// uniformly. Differs from [`ThresholdTarget::Sequence`] by O(ε²) terms.
    SequenceExact(GameSequence),
}

impl ThresholdTarget {
    pub fn payoff(&self, eps: f64) -> Result<f64> {
        let e = EpsilonBias::new(eps)?;
        match self {
            ThresholdTarget::Stationary(policy) => stationary_payoff(*policy, e),
            ThresholdTarget::Sequence(seq) => {
                let h = crate::payoff::DEFAULT_STEP;
                let f = |x: f64| -> Result<f64> { sequence_payoff_uniform(seq, EpsilonBias::new(x)?) };
                let c0 = f(0.0)?;
                let c1 = (f(h)? - f(-h)?) / (2.0 * h);
                Ok(c0 + c1 * e.value())
            }
            ThresholdTarget::SequenceExact(seq) => sequence_payoff_uniform(seq, e),
        }
    }
}

fn sequence_payoff_uniform(seq: &GameSequence, e: EpsilonBias) -> Result<f64> {
    Ok(classical_sequence_payoff(seq, &ClassicalGameSpec::from_bias(e)?, SeedMode::Uniform))
}

impl ThresholdTarget {
    pub fn label(&self) -> String {
        match self {
            ThresholdTarget::Stationary(p) => p.to_string(),
            ThresholdTarget::Sequence(s) => s.to_string(),
            ThresholdTarget::SequenceExact(s) => format!("{s} (exact)"),
        }
    }
}

pub const THRESHOLD_INTERVAL: (f64, f64) = (0.0, 1.0 / 20.0);
pub const THRESHOLD_TOL: f64 = 1e-10;

/// Largest ε at which the target still breaks even, found by bisection on
/// `[0, 1/20]`. Returns 0 when the payoff is already zero at ε = 0.
pub fn paradox_threshold(target: &ThresholdTarget) -> Result<f64> {
    bisect_break_even(|eps| target.payoff(eps))
}

fn bisect_break_even(payoff: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let (mut lo, mut hi) = THRESHOLD_INTERVAL;
    let f_lo = payoff(lo)?;
    let f_hi = payoff(hi)?;
    if f_lo.abs() <= 1e-12 {
        return Ok(lo);
    }
    if f_lo < 0.0 || f_hi > 0.0 {
        return Err(Error::NoSignChange { lo, hi });
    }
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if payoff(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
