// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Fermionic terms under the Jordan-Wigner mapping `a_i = s_i Z_0 .. Z_{i-1}`.
//!
//! Every sign comes from multiplying the mapped ladder operators symbol by
//! symbol, so interleaved two-body index orders need no special casing.

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{AlgebraError, Monomial, Symbol, Term};
use crate::circuit::{Circuit, CircuitError, ControlKey, Gate, GateKind};
use crate::direct::{synthesize_direct, DirectError, DirectSynthesisOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FermionError {
    #[error("mode {mode} out of range for {num_modes} modes")]
    OutOfRange { mode: usize, num_modes: usize },
    #[error("indices must be distinct: {0:?}")]
    IndexClash(Vec<usize>),
    #[error("indices must be increasing within each pair: {0:?}")]
    Unordered(Vec<usize>),
    #[error("the product vanishes")]
    Vanishing,
    #[error("control qubit {0} is in the term's support")]
    ControlOverlap(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Direct(#[from] DirectError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FermionTerm {
    OneBody { i: usize, j: usize, h: f64 },
    TwoBody { i: usize, j: usize, k: usize, l: usize, h: f64 },
    /// Two-qubit `alpha (|01><10| + h.c.) + beta (|00><11| + h.c.)`.
    Pair { alpha: f64, beta: f64 },
}

impl FermionTerm {
    /// Qubit term for one- and two-body entries; `None` for the pair gate.
    pub fn to_term(&self) -> Result<Option<Term>, FermionError> {
        Ok(match *self {
            FermionTerm::OneBody { i, j, h } => Some(one_body_term(i, j, h)?),
            FermionTerm::TwoBody { i, j, k, l, h } => Some(two_body_term(i, j, k, l, h)?),
            FermionTerm::Pair { .. } => None,
        })
    }
}

/// Annihilation operator of `mode`.
pub fn jordan_wigner(mode: usize, num_modes: usize) -> Result<Monomial, FermionError> {
    if mode >= num_modes {
        return Err(FermionError::OutOfRange { mode, num_modes });
    }
    let factors = (0..mode).map(|q| (q, Symbol::Z)).chain(std::iter::once((mode, Symbol::Lower)));
    Ok(Monomial::new(Complex64::new(1.0, 0.0), factors)?)
}

fn ladder(mode: usize) -> Monomial {
    jordan_wigner(mode, mode + 1).expect("mode in range")
}

fn product(ops: &[Monomial]) -> Result<Monomial, FermionError> {
    ops.iter()
        .try_fold(Monomial::identity(), |acc, m| acc.mul(m))
        .ok_or(FermionError::Vanishing)
}

/// `(h/2)(a_i^dagger a_j + h.c.)`.
pub fn one_body_term(i: usize, j: usize, h: f64) -> Result<Term, FermionError> {
    if i == j {
        return Err(FermionError::IndexClash(vec![i, j]));
    }
    let (i, j) = (i.min(j), i.max(j));
    let m = product(&[ladder(i).adjoint(), ladder(j)])?;
    Ok(Term::from_monomial(&m, h / 2.0))
}

/// `(h/2)(a_i^dagger a_j^dagger a_k a_l + h.c.)`.
pub fn two_body_term(i: usize, j: usize, k: usize, l: usize, h: f64) -> Result<Term, FermionError> {
    let idx = vec![i, j, k, l];
    if i >= j || k >= l {
        return Err(FermionError::Unordered(idx));
    }
    if [i, j].iter().any(|x| *x == k || *x == l) {
        return Err(FermionError::IndexClash(idx));
    }
    let m = product(&[ladder(i).adjoint(), ladder(j).adjoint(), ladder(k), ladder(l)])?;
    Ok(Term::from_monomial(&m, h / 2.0))
}

/// `exp(-i t B)` with one shared CX serving both rotations.
pub fn pair_gate_b(alpha: f64, beta: f64, t: f64) -> Result<Circuit, FermionError> {
    let mut c = Circuit::new(2);
    c.push(Gate::cx(0, 1))?;
    // {01, 10} -> {01, 11} and {00, 11} -> {00, 10}: both pairs now differ on qubit 0
    c.push(Gate::new(GateKind::KeyedRx(2.0 * alpha * t), vec![0], ControlKey::from_bits([(1, true)]))?)?;
    c.push(Gate::new(GateKind::KeyedRx(2.0 * beta * t), vec![0], ControlKey::from_bits([(1, false)]))?)?;
    c.push(Gate::cx(0, 1))?;
    Ok(c)
}

fn check_control(term: &Term, control: usize) -> Result<(), FermionError> {
    if term.factors().contains_key(&control) {
        return Err(FermionError::ControlOverlap(control));
    }
    Ok(())
}

/// `exp(-i t H)` when `control` is 0 and `exp(+i t H)` when it is 1,
/// i.e. the evolution of `Z_control H`.
pub fn sign_controlled_evolution(term: &Term, t: f64, control: usize) -> Result<Circuit, FermionError> {
    check_control(term, control)?;
    let t2 = term.with_factor(control, Symbol::Z)?;
    Ok(synthesize_direct(&t2, &DirectSynthesisOptions::new(t))?)
}

/// `exp(-i t H)` applied only when `control` is 1, i.e. the evolution of `n_control H`.
pub fn controlled_evolution(term: &Term, t: f64, control: usize) -> Result<Circuit, FermionError> {
    check_control(term, control)?;
    let t2 = term.with_factor(control, Symbol::Num)?;
    Ok(synthesize_direct(&t2, &DirectSynthesisOptions::new(t))?)
}

/// Fermionic swap as SWAP followed by CZ.
pub fn fswap(i: usize, j: usize) -> Result<Circuit, FermionError> {
    if i == j {
        return Err(FermionError::IndexClash(vec![i, j]));
    }
    let mut c = Circuit::new(i.max(j) + 1);
    c.push(Gate::swap(i, j))?;
    c.push(Gate::cz(i, j))?;
    Ok(c)
}
