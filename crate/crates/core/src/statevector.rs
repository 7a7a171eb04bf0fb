//! Dense statevector storage and gate kernels.
//!
//! Qubits are numbered from 1. Qubit 1 is the most significant bit of the
//! basis index, so the label `q1 q2 … qm` reads left to right as the binary
//! expansion of the index.

use num_complex::Complex64;

use crate::{Error, Result, STRUCTURAL_TOL};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 24;

/// A 2×2 complex matrix stored row-major, checked to be unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: [Complex64; 4],
}

impl Unitary2 {
    pub const IDENTITY: Unitary2 = Unitary2 {
        m: [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ],
    };

    /// Builds a unitary from row-major entries, rejecting non-unitary input.
    pub fn new(entries: [Complex64; 4]) -> Result<Self> {
        let u = Unitary2 { m: entries };
        if !u.is_unitary(1e-10) {
            return Err(Error::Parse(format!("matrix {entries:?} is not unitary")));
        }
        Ok(u)
    }

    pub(crate) fn from_entries_unchecked(entries: [Complex64; 4]) -> Self {
        Unitary2 { m: entries }
    }

    pub fn entries(&self) -> [Complex64; 4] {
        self.m
    }

    /// Entry at `(row, col)`, both in `0..2`.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[2 * row + col]
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, c, d] = self.m;
        Unitary2 {
            m: [a.conj(), c.conj(), b.conj(), d.conj()],
        }
    }

    pub fn mul(&self, rhs: &Unitary2) -> Unitary2 {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = rhs.m;
        Unitary2 {
            m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
        }
    }

    pub fn det(&self) -> Complex64 {
        let [a, b, c, d] = self.m;
        a * d - b * c
    }

    /// Checks `U†U = I` and `|det U| = 1` entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = self.adjoint().mul(self);
        let id = Unitary2::IDENTITY;
        p.m.iter().zip(id.m.iter()).all(|(x, y)| (x - y).norm() <= tol)
            && (self.det().norm() - 1.0).abs() <= tol
    }

    #[inline]
    fn apply_pair(&self, lo: Complex64, hi: Complex64) -> (Complex64, Complex64) {
        let [a, b, c, d] = self.m;
        (a * lo + b * hi, c * lo + d * hi)
    }
}

/// A normalized pure state over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_qubit_count(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::QubitCount(num_qubits));
    }
    Ok(())
}

impl StateVector {
    /// Wraps an amplitude array, requiring power-of-two length and unit norm.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::AmplitudeLength(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_qubit_count(num_qubits)?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector { num_qubits, amps })
    }

    /// Computational basis state from a bitstring such as `"110"`.
    pub fn basis(num_qubits: usize, label: &str) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        if label.len() != num_qubits {
            return Err(Error::LabelLength {
                label: label.to_owned(),
                got: label.len(),
                expected: num_qubits,
            });
        }
        let mut index = 0usize;
        for ch in label.chars() {
            index = (index << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::LabelCharacters(label.to_owned())),
                };
        }
        Ok(Self::basis_index(num_qubits, index))
    }

    fn basis_index(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    /// `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        Ok(Self::basis_index(num_qubits, 0))
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0] = h;
        amps[dim - 1] = h;
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of each basis index.
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.amps.iter().map(|a| a.norm_sqr())
    }

    /// Bit mask of qubit `q` (1-based) within a basis index.
    #[inline]
    pub fn qubit_mask(&self, q: usize) -> usize {
        1 << (self.num_qubits - q)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q == 0 || q > self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Tensor product `self ⊗ other` (self occupies the leading qubits).
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        check_qubit_count(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(StateVector { num_qubits: n, amps })
    }

    /// Applies `u` to qubit `target` in place.
    pub fn apply_single_qubit(&mut self, target: usize, u: &Unitary2) -> Result<()> {
        self.check_qubit(target)?;
        let stride = self.qubit_mask(target);
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (nx, ny) = u.apply_pair(*x, *y);
                *x = nx;
                *y = ny;
            }
        }
        Ok(())
    }

    /// Applies one of four unitaries to `target`, selected by the classical
    /// value of `(control_hi, control_lo)`: `(0,0)` picks `branches[0]`,
    /// `(0,1)` picks `branches[1]`, `(1,0)` picks `branches[2]`, `(1,1)` picks `branches[3]`.
    pub fn apply_two_controlled_multiplexed(
        &mut self,
        control_hi: usize,
        control_lo: usize,
        target: usize,
        branches: &[Unitary2; 4],
    ) -> Result<()> {
        for q in [control_hi, control_lo, target] {
            self.check_qubit(q)?;
        }
        if control_hi == control_lo || control_hi == target || control_lo == target {
            return Err(Error::QubitCollision(vec![control_hi, control_lo, target]));
        }
        let hi_mask = self.qubit_mask(control_hi);
        let lo_mask = self.qubit_mask(control_lo);
        let t_mask = self.qubit_mask(target);
        for i in 0..self.amps.len() {
            if i & t_mask != 0 {
                continue;
            }
            let branch = (usize::from(i & hi_mask != 0) << 1) | usize::from(i & lo_mask != 0);
            let j = i | t_mask;
            let (ni, nj) = branches[branch].apply_pair(self.amps[i], self.amps[j]);
            self.amps[i] = ni;
            self.amps[j] = nj;
        }
        Ok(())
    }

    /// Non-mutating form of [`StateVector::apply_single_qubit`].
    pub fn with_single_qubit(&self, target: usize, u: &Unitary2) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_single_qubit(target, u)?;
        Ok(out)
    }

    /// Non-mutating form of [`StateVector::apply_two_controlled_multiplexed`].
    pub fn with_two_controlled_multiplexed(
        &self,
        control_hi: usize,
        control_lo: usize,
        target: usize,
        branches: &[Unitary2; 4],
    ) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_two_controlled_multiplexed(control_hi, control_lo, target, branches)?;
        Ok(out)
    }
}

/// `|0…0⟩` with the given label; see [`StateVector::basis`].
pub fn make_basis_state(num_qubits: usize, label: &str) -> Result<StateVector> {
    StateVector::basis(num_qubits, label)
}

pub fn make_ghz(num_qubits: usize) -> Result<StateVector> {
    StateVector::ghz(num_qubits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rotation(theta: f64) -> Unitary2 {
        Unitary2::new([c(theta.cos()), c(-theta.sin()), c(theta.sin()), c(theta.cos())]).unwrap()
    }

    #[test]
    fn basis_labels() {
        assert_eq!(make_basis_state(1, "0").unwrap().amplitudes(), &[c(1.0), c(0.0)]);
        let s = make_basis_state(3, "000").unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0));
        let s = make_basis_state(3, "110").unwrap();
        assert_eq!(s.amplitudes()[6], c(1.0));
        assert_abs_diff_eq!(s.norm_sqr(), 1.0);
    }

    #[test]
    fn basis_label_errors() {
        assert!(matches!(make_basis_state(3, "01"), Err(Error::LabelLength { .. })));
        assert!(matches!(make_basis_state(2, "0x"), Err(Error::LabelCharacters(_))));
        assert!(matches!(make_basis_state(0, ""), Err(Error::QubitCount(0))));
        assert!(matches!(
            make_basis_state(25, &"0".repeat(25)),
            Err(Error::QubitCount(25))
        ));
    }

    #[test]
    fn ghz_states() {
        let s = make_ghz(1).unwrap();
        assert_eq!(s.amplitudes(), &[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]);
        let s = make_ghz(3).unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            let expect = if i == 0 || i == 7 { FRAC_1_SQRT_2 } else { 0.0 };
            assert_eq!(*a, c(expect));
        }
        let s = make_ghz(2).unwrap();
        assert_eq!(s.amplitudes()[3], c(FRAC_1_SQRT_2));
        assert_eq!(s.amplitudes()[1], c(0.0));
    }

    #[test]
    fn single_qubit_kernel() {
        let s = make_basis_state(1, "0").unwrap();
        let out = s.with_single_qubit(1, &rotation(std::f64::consts::FRAC_PI_4)).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[0].re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amplitudes()[1].re, FRAC_1_SQRT_2, epsilon = 1e-15);

        let s = make_ghz(3).unwrap();
        assert_eq!(s.with_single_qubit(2, &Unitary2::IDENTITY).unwrap(), s);

        let u = rotation(0.37);
        let there = s.with_single_qubit(2, &u).unwrap();
        let back = there.with_single_qubit(2, &u.adjoint()).unwrap();
        for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn single_qubit_targets_the_right_bit() {
        // X on qubit 1 of |000⟩ gives |100⟩ = index 4
        let x = Unitary2::new([c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap();
        let s = make_basis_state(3, "000").unwrap().with_single_qubit(1, &x).unwrap();
        assert_eq!(s.amplitudes()[4], c(1.0));
        let s = make_basis_state(3, "000").unwrap().with_single_qubit(3, &x).unwrap();
        assert_eq!(s.amplitudes()[1], c(1.0));
    }

    #[test]
    fn single_qubit_range_errors() {
        let mut s = make_ghz(2).unwrap();
        assert!(matches!(
            s.apply_single_qubit(0, &Unitary2::IDENTITY),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            s.apply_single_qubit(3, &Unitary2::IDENTITY),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn multiplexed_branch_selection() {
        let phi = [1.249_045_772_398_254_4, 0.5, 0.6, 0.991_156_636_564_9];
        let branches = phi.map(rotation);

        let out = make_basis_state(3, "000")
            .unwrap()
            .with_two_controlled_multiplexed(1, 2, 3, &branches)
            .unwrap();
        assert_abs_diff_eq!(out.amplitudes()[0].re, phi[0].cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(out.amplitudes()[1].re, phi[0].sin(), epsilon = 1e-15);

        let out = make_basis_state(3, "110")
            .unwrap()
            .with_two_controlled_multiplexed(1, 2, 3, &branches)
            .unwrap();
        assert_abs_diff_eq!(out.amplitudes()[6].re, phi[3].cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(out.amplitudes()[7].re, phi[3].sin(), epsilon = 1e-15);

        // (0,1) → branch 2, (1,0) → branch 3
        let out = make_basis_state(3, "010")
            .unwrap()
            .with_two_controlled_multiplexed(1, 2, 3, &branches)
            .unwrap();
        assert_abs_diff_eq!(out.amplitudes()[2].re, phi[1].cos(), epsilon = 1e-15);
        let out = make_basis_state(3, "100")
            .unwrap()
            .with_two_controlled_multiplexed(1, 2, 3, &branches)
            .unwrap();
        assert_abs_diff_eq!(out.amplitudes()[4].re, phi[2].cos(), epsilon = 1e-15);
    }

    #[test]
    fn multiplexed_identity_and_errors() {
        let s = make_ghz(4).unwrap();
        let ids = [Unitary2::IDENTITY; 4];
        assert_eq!(s.with_two_controlled_multiplexed(2, 4, 1, &ids).unwrap(), s);
        assert!(matches!(
            s.with_two_controlled_multiplexed(1, 1, 3, &ids),
            Err(Error::QubitCollision(_))
        ));
        assert!(matches!(
            s.with_two_controlled_multiplexed(1, 2, 2, &ids),
            Err(Error::QubitCollision(_))
        ));
        assert!(matches!(
            s.with_two_controlled_multiplexed(1, 2, 5, &ids),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn from_amplitudes_validation() {
        assert!(matches!(
            StateVector::from_amplitudes(vec![c(1.0), c(1.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            StateVector::from_amplitudes(vec![c(1.0), c(0.0), c(0.0)]),
            Err(Error::AmplitudeLength(3))
        ));
        let s = StateVector::from_amplitudes(vec![c(0.6), c(0.0), c(0.0), Complex64::new(0.0, 0.8)]).unwrap();
        assert_eq!(s.num_qubits(), 2);
    }

    #[test]
    fn tensor_product_ordering() {
        let one = make_basis_state(1, "1").unwrap();
        let zero = make_basis_state(2, "01").unwrap();
        let s = one.tensor(&zero).unwrap();
        assert_eq!(s, make_basis_state(3, "101").unwrap());
    }
}
