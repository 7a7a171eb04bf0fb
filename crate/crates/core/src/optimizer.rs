//! Cyclic coordinate search over the ten phase parameters.
//!
//! Each sweep visits γ, δ, α₁…α₄, β₁…β₄ in turn. A coordinate is scanned on a
//! 64-point periodic grid over `[0, 2π)`, then refined by fitting
//! `a + b cos x + c sin x` through three points around the grid optimum and
//! jumping to the fitted extremum. Moves are only accepted if they strictly
//! improve the objective, so the trace never worsens.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::circuit::{GameSequence, InitKind};
use crate::coin::{EpsilonBias, PhaseAssignment};
use crate::payoff::Scenario;
use crate::{Direction, Result};

pub const GRID_POINTS: usize = 64;
pub const IMPROVEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_sweeps: usize,
    pub max_evaluations: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_sweeps: 50,
            max_evaluations: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub direction: Direction,
    pub best_value: f64,
    pub best_phases: PhaseAssignment,
    /// Objective value after each completed sweep.
    pub trace: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
}

fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

struct Search<'a, F> {
    objective: &'a F,
    direction: Direction,
    phases: PhaseAssignment,
    value: f64,
    evaluations: usize,
}

impl<F> Search<'_, F>
where
    F: Fn(&PhaseAssignment) -> Result<f64> + Sync,
{
    fn eval_at(&mut self, coord: usize, x: f64) -> Result<f64> {
        let mut p = self.phases;
        p.set_coordinate(coord, x);
        self.evaluations += 1;
        (self.objective)(&p)
    }

    fn accept(&mut self, coord: usize, x: f64, v: f64) {
        if self.direction.improves(v, self.value) {
            self.phases.set_coordinate(coord, x);
            self.value = v;
        }
    }

    fn grid_scan(&mut self, coord: usize) -> Result<()> {
        let base = self.phases;
        let objective = self.objective;
        let values = (0..GRID_POINTS)
            .into_par_iter()
            .map(|k| {
                let mut p = base;
                p.set_coordinate(coord, TAU * k as f64 / GRID_POINTS as f64);
                objective(&p)
            })
            .collect::<Result<Vec<f64>>>()?;
        self.evaluations += GRID_POINTS;

        let mut best_k = 0;
        for k in 1..GRID_POINTS {
            if self.direction.improves(values[k], values[best_k]) {
                best_k = k;
            }
        }
        self.accept(coord, TAU * best_k as f64 / GRID_POINTS as f64, values[best_k]);
        Ok(())
    }

    fn refine(&mut self, coord: usize) -> Result<()> {
        let h = TAU / GRID_POINTS as f64;
        let x0 = self.phases.coordinate(coord);
        let f0 = self.value;
        let fp = self.eval_at(coord, wrap(x0 + h))?;
        let fm = self.eval_at(coord, wrap(x0 - h))?;
        let c = (fp - fm) / (2.0 * h.sin());
        let b = (f0 - 0.5 * (fp + fm)) / (1.0 - h.cos());
        let u = match self.direction {
            Direction::Max => c.atan2(b),
            Direction::Min => (-c).atan2(-b),
        };
        if u.abs() < 1e-15 {
            return Ok(());
        }
        let x = wrap(x0 + u);
        let v = self.eval_at(coord, x)?;
        self.accept(coord, x, v);
        Ok(())
    }
}

/// Coordinate search on an arbitrary phase objective, starting from `start`.
pub fn optimize_objective<F>(
    objective: &F,
    start: PhaseAssignment,
    direction: Direction,
    budget: Budget,
) -> Result<OptimizationResult>
where
    F: Fn(&PhaseAssignment) -> Result<f64> + Sync,
{
    let mut search = Search {
        objective,
        direction,
        phases: start,
        value: objective(&start)?,
        evaluations: 1,
    };
    let mut trace = Vec::new();
    let mut converged = false;

    'sweeps: for _ in 0..budget.max_sweeps {
        let before = search.value;
        for coord in 0..PhaseAssignment::NUM_COORDINATES {
            if search.evaluations >= budget.max_evaluations {
                break 'sweeps;
            }
            search.grid_scan(coord)?;
            search.refine(coord)?;
        }
        trace.push(search.value);
        if (search.value - before).abs() < IMPROVEMENT_TOL {
            converged = true;
            break;
        }
    }

    Ok(OptimizationResult {
        direction,
        best_value: search.value,
        best_phases: search.phases,
        trace,
        evaluations: search.evaluations,
        converged,
    })
}

/// Extremizes the per-qubit payoff of `seq` over all phases, amplitudes fixed
/// by ε. Starts from all-zero phases.
pub fn optimize_phases(
    seq: &GameSequence,
    init: &InitKind,
    e: EpsilonBias,
    direction: Direction,
    budget: Budget,
) -> Result<OptimizationResult> {
    let scenario = Scenario::new(seq.clone(), init.clone(), PhaseAssignment::default());
    let objective = |p: &PhaseAssignment| {
        let mut s = scenario.clone();
        s.phases = *p;
        s.payoff_per_qubit(e.value())
    };
    optimize_objective(&objective, PhaseAssignment::default(), direction, budget)
}

/// Both extremes of the per-qubit payoff over phases.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpread {
    pub max: OptimizationResult,
    pub min: OptimizationResult,
}

impl PhaseSpread {
    pub fn width(&self) -> f64 {
        self.max.best_value - self.min.best_value
    }

    /// True when no phase choice moves the payoff.
    pub fn is_flat(&self) -> bool {
        self.width() < IMPROVEMENT_TOL
    }
}

pub fn phase_spread(seq: &GameSequence, init: &InitKind, e: EpsilonBias, budget: Budget) -> Result<PhaseSpread> {
    Ok(PhaseSpread {
        max: optimize_phases(seq, init, e, Direction::Max, budget)?,
        min: optimize_phases(seq, init, e, Direction::Min, budget)?,
    })
}
