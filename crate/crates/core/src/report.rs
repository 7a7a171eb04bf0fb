//! Machine-readable reports: the payoff table and the per-command summaries
//! emitted by the CLI, in JSON or CSV.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::aab_extremal_phases;
use crate::circuit::{GameSequence, InitKind};
use crate::classical::{classical_sequence_payoff, ClassicalGameSpec, SeedMode};
use crate::coin::{EpsilonBias, PhaseAssignment};
use crate::payoff::{PayoffExpansion, Scenario, DEFAULT_STEP};
use crate::{Direction, Error, Result};

/// Rounds to 9 significant digits.
pub fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

fn opt_sig9(x: Option<f64>) -> Option<f64> {
    x.map(sig9)
}

fn cell(x: f64) -> String {
    x.to_string()
}

fn opt_cell(x: Option<f64>) -> String {
    x.map(cell).unwrap_or_default()
}

/// Anything that can be written as CSV rows with a fixed header.
pub trait CsvRecord {
    fn headers() -> Vec<&'static str>;
    fn record(&self) -> Vec<String>;
}

pub fn write_csv<T: CsvRecord, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(T::headers()).map_err(io)?;
    for r in rows {
        w.write_record(r.record()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

/// Expansion of the classical per-qubit payoff (uniform seeds) in ε.
pub fn classical_expansion(seq: &GameSequence) -> Result<PayoffExpansion> {
    PayoffExpansion::central(
        |eps| {
            let spec = ClassicalGameSpec::from_bias(EpsilonBias::new(eps)?)?;
            Ok(classical_sequence_payoff(seq, &spec, SeedMode::Uniform))
        },
        DEFAULT_STEP,
        true,
    )
}

/// One row of the payoff table. Quantum figures use the GHZ initial state and
/// zero phases; the `AAB` row additionally carries the phase extremes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub row: String,
    pub sequence: String,
    pub qubits: usize,
    pub classical_c0: f64,
    pub classical_c1: f64,
    pub quantum_c0: f64,
    pub quantum_c1: f64,
    pub quantum_min_c0: Option<f64>,
    pub quantum_min_c1: Option<f64>,
    pub quantum_max_c0: Option<f64>,
    pub quantum_max_c1: Option<f64>,
}

impl CsvRecord for Table1Row {
    fn headers() -> Vec<&'static str> {
        vec![
            "row",
            "sequence",
            "qubits",
            "classical_c0",
            "classical_c1",
            "quantum_c0",
            "quantum_c1",
            "quantum_min_c0",
            "quantum_min_c1",
            "quantum_max_c0",
            "quantum_max_c1",
        ]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.row.clone(),
            self.sequence.clone(),
            self.qubits.to_string(),
            cell(self.classical_c0),
            cell(self.classical_c1),
            cell(self.quantum_c0),
            cell(self.quantum_c1),
            opt_cell(self.quantum_min_c0),
            opt_cell(self.quantum_min_c1),
            opt_cell(self.quantum_max_c0),
            opt_cell(self.quantum_max_c1),
        ]
    }
}

/// The table's row labels with the sequences simulated for them.
pub fn table1_sequences(repetitions: usize) -> Result<Vec<(String, GameSequence)>> {
    let p = |s: &str| s.parse::<GameSequence>();
    Ok(vec![
        ("AA...A".into(), p("A")?.repeat(repetitions)?),
        ("B".into(), p("B")?),
        ("BB".into(), p("BB")?),
        ("BBB".into(), p("BBB")?),
        ("AB".into(), p("AB")?),
        ("ABAB".into(), p("ABAB")?),
        ("AAB".into(), p("AAB")?),
        ("AAB...AAB".into(), p("AAB")?.repeat(repetitions)?),
    ])
}

fn table1_row(label: &str, seq: &GameSequence) -> Result<Table1Row> {
    let classical = classical_expansion(seq)?;
    let zero = Scenario::new(seq.clone(), InitKind::Ghz, PhaseAssignment::default());
    let quantum = zero.expansion(DEFAULT_STEP, true)?;
    let extremes = if label == "AAB" {
        let at = |dir| {
            let phases = aab_extremal_phases(dir, 0.0).to_phase_assignment();
            Scenario::new(seq.clone(), InitKind::Ghz, phases).expansion(DEFAULT_STEP, true)
        };
        Some((at(Direction::Min)?, at(Direction::Max)?))
    } else {
        None
    };
    Ok(Table1Row {
        row: label.to_owned(),
        sequence: seq.to_string(),
        qubits: zero.plan().total_qubits,
        classical_c0: sig9(classical.c0),
        classical_c1: sig9(classical.c1),
        quantum_c0: sig9(quantum.c0),
        quantum_c1: sig9(quantum.c1),
        quantum_min_c0: opt_sig9(extremes.map(|(lo, _)| lo.c0)),
        quantum_min_c1: opt_sig9(extremes.map(|(lo, _)| lo.c1)),
        quantum_max_c0: opt_sig9(extremes.map(|(_, hi)| hi.c0)),
        quantum_max_c1: opt_sig9(extremes.map(|(_, hi)| hi.c1)),
    })
}

/// Classical and quantum per-qubit `(c0, c1)` for every table sequence.
/// `AA...A` and `AAB...AAB` are played `repetitions` times.
pub fn table1(repetitions: usize) -> Result<Vec<Table1Row>> {
    if repetitions == 0 {
        return Err(Error::Parse("repetitions must be at least 1".into()));
    }
    table1_sequences(repetitions)?
        .par_iter()
        .map(|(label, seq)| table1_row(label, seq))
        .collect()
}

/// Result of one payoff evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffReport {
    pub sequence: String,
    pub init: String,
    pub qubits: usize,
    pub eps: f64,
    pub payoff_total: f64,
    pub payoff_per_qubit: f64,
    /// Expansion about ε = 0; per qubit unless `per_qubit` is false.
    pub c0: f64,
    pub c1: f64,
    pub per_qubit: bool,
}

impl PayoffReport {
    pub fn compute(scenario: &Scenario, init_label: &str, eps: f64, per_qubit: bool) -> Result<Self> {
        let total = scenario.payoff_total(eps)?;
        let qubits = scenario.plan().total_qubits;
        let expansion = scenario.expansion(DEFAULT_STEP, per_qubit)?;
        Ok(PayoffReport {
            sequence: scenario.sequence.to_string(),
            init: init_label.to_owned(),
            qubits,
            eps,
            payoff_total: sig9(total),
            payoff_per_qubit: sig9(total / qubits as f64),
            c0: sig9(expansion.c0),
            c1: sig9(expansion.c1),
            per_qubit,
        })
    }
}

impl CsvRecord for PayoffReport {
    fn headers() -> Vec<&'static str> {
        vec!["sequence", "init", "qubits", "eps", "payoff_total", "payoff_per_qubit", "c0", "c1", "per_qubit"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.sequence.clone(),
            self.init.clone(),
            self.qubits.to_string(),
            cell(self.eps),
            cell(self.payoff_total),
            cell(self.payoff_per_qubit),
            cell(self.c0),
            cell(self.c1),
            self.per_qubit.to_string(),
        ]
    }
}

/// Result of a phase optimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub sequence: String,
    pub init: String,
    pub eps: f64,
    pub direction: Direction,
    pub best_value: f64,
    /// True when the maximum and minimum over phases coincide.
    pub flat: bool,
    pub converged: bool,
    pub evaluations: usize,
    pub sweeps: usize,
    pub phases: PhaseAssignment,
}

impl CsvRecord for OptimizeReport {
    fn headers() -> Vec<&'static str> {
        let mut h = vec![
            "sequence",
            "init",
            "eps",
            "direction",
            "best_value",
            "flat",
            "converged",
            "evaluations",
            "sweeps",
        ];
        h.extend(PhaseAssignment::COORDINATE_NAMES);
        h
    }

    fn record(&self) -> Vec<String> {
        let mut r = vec![
            self.sequence.clone(),
            self.init.clone(),
            cell(self.eps),
            match self.direction {
                Direction::Max => "max".into(),
                Direction::Min => "min".into(),
            },
            cell(self.best_value),
            self.flat.to_string(),
            self.converged.to_string(),
            self.evaluations.to_string(),
            self.sweeps.to_string(),
        ];
        r.extend((0..PhaseAssignment::NUM_COORDINATES).map(|i| cell(self.phases.coordinate(i))));
        r
    }
}

/// Result of a classical analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalReport {
    pub mode: String,
    pub target: String,
    pub eps: Option<f64>,
    pub value: f64,
}

impl CsvRecord for ClassicalReport {
    fn headers() -> Vec<&'static str> {
        vec!["mode", "target", "eps", "value"]
    }

    fn record(&self) -> Vec<String> {
        vec![self.mode.clone(), self.target.clone(), opt_cell(self.eps), cell(self.value)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sig9_rounding() {
        assert_eq!(sig9(1.0 / 15.0), 0.0666666667);
        assert_eq!(sig9(-1.0 / 3.0), -0.333333333);
        assert_eq!(sig9(0.0), 0.0);
        assert_eq!(sig9(123456789012.0), 123456789000.0);
    }

    #[test]
    fn table_rows_match_known_values() {
        let rows = table1(4).unwrap();
        assert_eq!(rows.len(), 8);
        let get = |label: &str| rows.iter().find(|r| r.row == label).unwrap();

        let ab = get("AB");
        assert_abs_diff_eq!(ab.classical_c0, 1.0 / 60.0, epsilon = 1e-9);
        assert_abs_diff_eq!(ab.classical_c1, -19.0 / 15.0, epsilon = 1e-6);
        assert_abs_diff_eq!(ab.quantum_c0, 1.0 / 30.0, epsilon = 1e-9);
        assert_abs_diff_eq!(ab.quantum_c1, 1.0 / 15.0, epsilon = 1e-6);

        let bb = get("BB");
        assert_abs_diff_eq!(bb.quantum_c0, 13.0 / 400.0, epsilon = 1e-9);
        assert_abs_diff_eq!(bb.quantum_c1, 1.0 / 20.0, epsilon = 1e-6);

        let rep = get("AAB...AAB");
        assert_eq!(rep.sequence, "AABAABAABAAB");
        assert_abs_diff_eq!(rep.quantum_c0, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.quantum_c1, 2.0 / 15.0, epsilon = 1e-6);

        let aab = get("AAB");
        assert_abs_diff_eq!(aab.quantum_max_c0.unwrap(), 0.270_713_8, epsilon = 1e-7);
        assert_abs_diff_eq!(aab.quantum_min_c0.unwrap(), -0.270_713_8, epsilon = 1e-7);
        assert!(get("B").quantum_max_c0.is_none());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rows = table1(2).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert!(lines[0].starts_with("row,sequence,qubits,classical_c0"));
        assert!(lines[1].starts_with("AA...A,AA,2,"));
    }

    #[test]
    fn zero_repetitions_rejected() {
        assert!(table1(0).is_err());
    }
}
