// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Comparing circuits with exact evolutions.
//!
//! Small registers are compared as dense unitaries. Wider single terms use
//! the identity `H^2 = diag(lambda)`: every basis state is mapped by `H` to a
//! single basis state, so `exp(-i theta H)` acts in closed form on vectors.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use thiserror::Error;

use crate::algebra::{AlgebraError, HamiltonianExpr, Symbol, Term};
use crate::circuit::Circuit;
use crate::sim::{self, SimError, StateVector, MAX_STATE_QUBITS};
use crate::text::Verification;
use crate::C64;

/// Default tolerance for exact (non-Trotterized) comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Widest register compared as a dense unitary.
pub const DENSE_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("circuit width {circuit} exceeds operator width {operator}")]
    Width { circuit: usize, operator: usize },
    #[error("{0} qubits is too wide for a multi-term check")]
    TooWide(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

fn single_action(s: Symbol, bit: bool) -> Option<(C64, bool)> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match (s, bit) {
        (Symbol::Id, b) => Some((one, b)),
        (Symbol::X, b) => Some((one, !b)),
        (Symbol::Y, false) => Some((i, true)),
        (Symbol::Y, true) => Some((-i, false)),
        (Symbol::Z, b) => Some((if b { -one } else { one }, b)),
        (Symbol::Num, true) | (Symbol::Hole, false) => Some((one, bit)),
        (Symbol::Lower, true) => Some((one, false)),
        (Symbol::Raise, false) => Some((one, true)),
        _ => None,
    }
}

fn monomial_action(factors: &[(usize, Symbol)], n: usize, x: usize) -> Option<(C64, usize)> {
    let mut amp = Complex64::new(1.0, 0.0);
    let mut y = x;
    for &(q, s) in factors {
        let mask = 1usize << (n - 1 - q);
        let (a, b) = single_action(s, x & mask != 0)?;
        amp *= a;
        y = if b { y | mask } else { y & !mask };
    }
    Some((amp, y))
}

/// `H|x> = a |y>` for one term, or `None` when `H|x> = 0`.
pub fn term_on_basis(term: &Term, n: usize, x: usize) -> Option<(C64, usize)> {
    let f: Vec<(usize, Symbol)> = term.factors().iter().map(|(&q, &s)| (q, s)).collect();
    let z = term.coefficient();
    let fwd = monomial_action(&f, n, x).map(|(a, y)| (z * a, y));
    if !term.is_hermitized() {
        return fwd;
    }
    let adj: Vec<(usize, Symbol)> = f.iter().map(|&(q, s)| (q, s.adjoint())).collect();
    let back = monomial_action(&adj, n, x).map(|(a, y)| (z.conj() * a, y));
    match (fwd, back) {
        (Some((a, y)), Some((b, y2))) if y == y2 => Some((a + b, y)),
        (Some(p), None) | (None, Some(p)) => Some(p),
        (None, None) => None,
        // both halves nonzero on different outputs cannot happen for a single term
        (Some(p), Some(_)) => Some(p),
    }
}

/// `exp(-i theta H) psi` for a single term on an `n`-qubit state.
pub fn evolve_term(term: &Term, n: usize, theta: f64, psi: &[C64]) -> Vec<C64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; psi.len()];
    for (x, &amp) in psi.iter().enumerate() {
        if amp == zero {
            continue;
        }
        match term_on_basis(term, n, x) {
            Some((a, y)) if a.norm() > 0.0 => {
                let r = a.norm();
                out[x] += amp * (theta * r).cos();
                out[y] += amp * Complex64::new(0.0, -(theta * r).sin() / r) * a;
            }
            _ => out[x] += amp,
        }
    }
    out
}

fn random_state(n: usize, rng: &mut StdRng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Distance between `circuit` and `exp(-i theta term)`.
pub fn term_distance(term: &Term, circuit: &Circuit, theta: f64) -> Result<f64, VerifyError> {
    let n = circuit.num_qubits().max(term.max_index().map_or(1, |m| m + 1));
    if n <= DENSE_LIMIT {
        let c = circuit.clone().widened(n).expect("widening never fails");
        let u = sim::circuit_unitary(&c)?;
        let e = sim::expm_hermitian(&term.dense(n)?, theta)?;
        return Ok(sim::phase_distance(&u, &e)?);
    }
    if n > MAX_STATE_QUBITS {
        return Err(SimError::TooLarge(n, MAX_STATE_QUBITS).into());
    }
    let c = circuit.clone().widened(n).expect("widening never fails");
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let psi = random_state(n, &mut rng);
        let want = StateVector::from_amplitudes(evolve_term(term, n, theta, &psi))?;
        let mut got = StateVector::from_amplitudes(psi)?;
        sim::apply_circuit(&c, &mut got)?;
        worst = worst.max(got.phase_distance(&want));
    }
    Ok(worst)
}

/// Distance between `circuit` and `exp(-i theta H)` for a whole expression.
pub fn expr_distance(expr: &HamiltonianExpr, circuit: &Circuit, theta: f64) -> Result<f64, VerifyError> {
    if let [t] = expr.terms() {
        return term_distance(t, circuit, theta);
    }
    let n = expr.num_qubits().max(circuit.num_qubits());
    if circuit.num_qubits() > expr.num_qubits() {
        return Err(VerifyError::Width {
            circuit: circuit.num_qubits(),
            operator: expr.num_qubits(),
        });
    }
    if n > sim::MAX_DENSE_QUBITS {
        return Err(VerifyError::TooWide(n));
    }
    let u = sim::circuit_unitary(&circuit.clone().widened(n).expect("widening never fails"))?;
    let e = sim::expm_hermitian(&expr.dense()?, theta)?;
    Ok(sim::phase_distance(&u, &e)?)
}

pub fn verify_expr(expr: &HamiltonianExpr, circuit: &Circuit, theta: f64, tolerance: f64) -> Result<Verification, VerifyError> {
    Ok(Verification::new(expr_distance(expr, circuit, theta)?, tolerance))
}
