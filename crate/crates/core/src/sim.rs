// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense reference simulation: operators, statevectors and unitary distance.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::C64;

/// Largest register for which dense matrices are built.
pub const MAX_DENSE_QUBITS: usize = 12;
/// Largest register for statevector simulation.
pub const MAX_STATE_QUBITS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("register of {0} qubits exceeds the simulation limit of {1}")]
    TooLarge(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("operator is not unitary (deviation {0:e})")]
    NotUnitary(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator(DMatrix<C64>);

impl DenseOperator {
    pub fn from_matrix(m: DMatrix<C64>) -> Self {
        DenseOperator(m)
    }

    pub fn identity(num_qubits: usize) -> Self {
        let d = 1usize << num_qubits;
        DenseOperator(DMatrix::identity(d, d))
    }

    pub fn zeros(num_qubits: usize) -> Self {
        let d = 1usize << num_qubits;
        DenseOperator(DMatrix::zeros(d, d))
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator(self.0.adjoint())
    }

    pub fn mul(&self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator(&self.0 * &rhs.0)
    }

    pub fn scale(&self, s: C64) -> DenseOperator {
        DenseOperator(&self.0 * s)
    }

    pub fn add(&self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator(&self.0 + &rhs.0)
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &DenseOperator) -> f64 {
        max_abs(&(&self.0 - &rhs.0))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.0 - self.0.adjoint()))
    }

    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim();
        max_abs(&(self.0.adjoint() * &self.0 - DMatrix::<C64>::identity(d, d)))
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let x = DVector::from_column_slice(v);
        (&self.0 * x).as_slice().to_vec()
    }

    /// Operator norm (largest singular value).
    pub fn spectral_norm(&self) -> f64 {
        self.0.clone().singular_values().max()
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigen-decomposition of a Hermitian operator, eigenvalues ascending.
pub fn eigh(h: &DenseOperator) -> Result<(Vec<f64>, DMatrix<C64>), SimError> {
    let defect = h.hermiticity_defect();
    if defect > 1e-9 {
        return Err(SimError::NotHermitian(defect));
    }
    let sym = (h.matrix() + h.matrix().adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(h.dim(), h.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// `exp(-i theta H)` for Hermitian `H`.
pub fn expm_hermitian(h: &DenseOperator, theta: f64) -> Result<DenseOperator, SimError> {
    let (values, v) = eigh(h)?;
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&l| Complex64::from_polar(1.0, -theta * l)),
    ));
    Ok(DenseOperator(&v * phases * v.adjoint()))
}

/// Pure state on `num_qubits` qubits; qubit 0 is the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self, SimError> {
        if num_qubits > MAX_STATE_QUBITS {
            return Err(SimError::TooLarge(num_qubits, MAX_STATE_QUBITS));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self, SimError> {
        let d = amplitudes.len();
        if !d.is_power_of_two() {
            return Err(SimError::Dimension(d, d.next_power_of_two()));
        }
        Ok(StateVector {
            num_qubits: d.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest amplitude difference after removing the best global phase.
    pub fn phase_distance(&self, other: &StateVector) -> f64 {
        let ov = self.inner(other);
        let ph = if ov.norm() > 1e-14 { ov / ov.norm() } else { Complex64::new(1.0, 0.0) };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a * ph - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Applies one gate in place to a `2^n` amplitude slice.
pub fn apply_gate(state: &mut [C64], num_qubits: usize, gate: &Gate) {
    let act = gate.local_action();
    let bit = |q: usize| 1usize << (num_qubits - 1 - q);
    let mut mask = 0usize;
    let mut value = 0usize;
    for &(q, b) in &act.controls {
        mask |= bit(q);
        if b {
            value |= bit(q);
        }
    }
    let m = &act.matrix;
    match act.targets.as_slice() {
        [] => {
            for a in state.iter_mut() {
                *a *= m[0];
            }
        }
        &[t] => {
            let tb = bit(t);
            for i in 0..state.len() {
                if i & tb != 0 || i & mask != value {
                    continue;
                }
                let (a, b) = (state[i], state[i | tb]);
                state[i] = m[0] * a + m[1] * b;
                state[i | tb] = m[2] * a + m[3] * b;
            }
        }
        &[t0, t1] => {
            let (b0, b1) = (bit(t0), bit(t1));
            for i in 0..state.len() {
                if i & (b0 | b1) != 0 || i & mask != value {
                    continue;
                }
                let idx = [i, i | b1, i | b0, i | b0 | b1];
                let v = idx.map(|k| state[k]);
                for (r, &k) in idx.iter().enumerate() {
                    state[k] = (0..4).map(|c| m[4 * r + c] * v[c]).sum();
                }
            }
        }
        _ => unreachable!("gates act on at most two targets"),
    }
}

pub fn apply_circuit(circuit: &Circuit, state: &mut StateVector) -> Result<(), SimError> {
    if state.num_qubits != circuit.num_qubits() {
        return Err(SimError::Dimension(state.num_qubits, circuit.num_qubits()));
    }
    for g in circuit.gates() {
        apply_gate(&mut state.amplitudes, state.num_qubits, g);
    }
    Ok(())
}

/// Dense unitary of a circuit, built column by column.
pub fn circuit_unitary(circuit: &Circuit) -> Result<DenseOperator, SimError> {
    let n = circuit.num_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(SimError::TooLarge(n, MAX_DENSE_QUBITS));
    }
    let d = 1usize << n;
    let mut u = DMatrix::<C64>::identity(d, d);
    for col in u.as_mut_slice().chunks_mut(d) {
        for g in circuit.gates() {
            apply_gate(col, n, g);
        }
    }
    Ok(DenseOperator(u))
}

/// `min_phi max|U - e^{i phi} V|`, evaluated at `phi = arg Tr(V^dagger U)`.
pub fn phase_distance(u: &DenseOperator, v: &DenseOperator) -> Result<f64, SimError> {
    if u.dim() != v.dim() {
        return Err(SimError::Dimension(u.dim(), v.dim()));
    }
    let tr: C64 = v.matrix().iter().zip(u.matrix().iter()).map(|(a, b)| a.conj() * b).sum();
    let ph = if tr.norm() > 1e-14 { tr / tr.norm() } else { Complex64::new(1.0, 0.0) };
    Ok(u.matrix()
        .iter()
        .zip(v.matrix().iter())
        .map(|(a, b)| (a - ph * b).norm())
        .fold(0.0, f64::max))
}

/// Like [`phase_distance`] but first checks both operators are unitary.
pub fn unitary_distance(u: &DenseOperator, v: &DenseOperator) -> Result<f64, SimError> {
    for op in [u, v] {
        let d = op.unitarity_defect();
        if d > 1e-8 {
            return Err(SimError::NotUnitary(d));
        }
    }
    phase_distance(u, v)
}
