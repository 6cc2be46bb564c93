// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Block-encoding of a single term as a short linear combination of unitaries.
//!
//! A number pattern is `(I - R)/2` with `R` the reflection about it, and a
//! transition pair is `X_ab - (I + DZ_ab)/2` where `X_ab` swaps the two states
//! and `DZ_ab` flips the sign of both. With the Pauli factor as one more
//! unitary a term needs at most 3 x 2 x 1 = 6 pairs.

use thiserror::Error;

use crate::algebra::{AlgebraError, Family, Symbol, Term};
use crate::circuit::{
    keyed_double_z, keyed_x_between, keyed_y_between, reflect_state, Circuit, CircuitError, ControlKey, Gate,
};
use crate::direct::classify;
use crate::sim::{self, DenseOperator, SimError};
use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LcuError {
    #[error("empty control key")]
    EmptyKey,
    #[error("complex coefficient: split the term with be_term_split")]
    ComplexCoefficient,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcuDecomposition {
    pub num_qubits: usize,
    pub pairs: Vec<(f64, Circuit)>,
}

impl LcuDecomposition {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `sum_i c_i U_i` as a dense matrix.
    pub fn reconstruct(&self) -> Result<DenseOperator, LcuError> {
        let mut acc = DenseOperator::zeros(self.num_qubits);
        for (c, u) in &self.pairs {
            let m = sim::circuit_unitary(&u.clone().widened(self.num_qubits)?)?;
            acc = acc.add(&m.scale(C64::new(*c, 0.0)));
        }
        Ok(acc)
    }

    /// Largest `max|U^dagger U - I|` over the pairs.
    pub fn unitarity_defect(&self) -> Result<f64, LcuError> {
        let mut worst: f64 = 0.0;
        for (_, u) in &self.pairs {
            let m = sim::circuit_unitary(&u.clone().widened(self.num_qubits)?)?;
            worst = worst.max(m.unitarity_defect());
        }
        Ok(worst)
    }

    /// Sum of `|c_i|`, the subnormalization of the encoding.
    pub fn one_norm(&self) -> f64 {
        self.pairs.iter().map(|(c, _)| c.abs()).sum()
    }

    fn product(&self, rhs: &LcuDecomposition) -> Result<LcuDecomposition, LcuError> {
        let n = self.num_qubits.max(rhs.num_qubits);
        let mut pairs = Vec::with_capacity(self.len() * rhs.len());
        for (a, ua) in &self.pairs {
            for (b, ub) in &rhs.pairs {
                let mut u = ua.clone().widened(n)?;
                u.append(ub)?;
                pairs.push((a * b, u));
            }
        }
        Ok(LcuDecomposition { num_qubits: n, pairs })
    }

    fn scaled(mut self, s: f64) -> Self {
        for (c, _) in &mut self.pairs {
            *c *= s;
        }
        self
    }

    fn unit() -> Self {
        LcuDecomposition {
            num_qubits: 0,
            pairs: vec![(1.0, Circuit::new(0))],
        }
    }
}

fn width(key: &ControlKey) -> usize {
    key.qubits().max().map_or(0, |q| q + 1)
}

/// `|key><key|` (identity elsewhere) as `(I - R)/2`.
pub fn be_number_family(key: &ControlKey) -> Result<LcuDecomposition, LcuError> {
    if key.is_empty() {
        return Err(LcuError::EmptyKey);
    }
    let n = width(key);
    Ok(LcuDecomposition {
        num_qubits: n,
        pairs: vec![(0.5, Circuit::new(n)), (-0.5, reflect_state(key)?)],
    })
}

/// `|a><b| + |b><a|` for complementary patterns.
pub fn be_transition_family(a: &ControlKey, b: &ControlKey) -> Result<LcuDecomposition, LcuError> {
    let n = width(a);
    if a.len() == 1 && a.complement() == *b {
        let (q, _) = a.iter().next().expect("one qubit");
        let mut c = Circuit::new(n);
        c.push(Gate::x(q))?;
        return Ok(LcuDecomposition {
            num_qubits: n,
            pairs: vec![(1.0, c)],
        });
    }
    Ok(LcuDecomposition {
        num_qubits: n,
        pairs: vec![
            (1.0, keyed_x_between(a, b)?),
            (-0.5, Circuit::new(n)),
            (-0.5, keyed_double_z(a, b)?),
        ],
    })
}

/// `i(|a><b| - |b><a|)` for complementary patterns.
fn be_transition_family_imag(a: &ControlKey, b: &ControlKey) -> Result<LcuDecomposition, LcuError> {
    let n = width(a);
    if a.len() == 1 && a.complement() == *b {
        let (q, bit) = a.iter().next().expect("one qubit");
        let mut c = Circuit::new(n);
        c.append(&pauli_circuit(q, Symbol::Y)?)?;
        // i(|1><0| - |0><1|) = Y
        let s = if bit { 1.0 } else { -1.0 };
        return Ok(LcuDecomposition {
            num_qubits: n,
            pairs: vec![(s, c)],
        });
    }
    let (yb, s) = keyed_y_between(a, b)?;
    // yb - (I + DZ)/2 = i s (|b><a| - |a><b|)
    Ok(LcuDecomposition {
        num_qubits: n,
        pairs: vec![(-s, yb), (s / 2.0, Circuit::new(n)), (s / 2.0, keyed_double_z(a, b)?)],
    })
}

fn pauli_circuit(q: usize, s: Symbol) -> Result<Circuit, LcuError> {
    let mut c = Circuit::new(q + 1);
    match s {
        Symbol::X => c.push(Gate::x(q))?,
        Symbol::Z => c.push(Gate::z(q))?,
        Symbol::Y => {
            c.push(Gate::sdg(q))?;
            c.push(Gate::x(q))?;
            c.push(Gate::s(q))?;
        }
        _ => unreachable!("Pauli letters only"),
    }
    Ok(c)
}

fn families(term: &Term, imag: bool) -> Result<LcuDecomposition, LcuError> {
    let part = classify(term);
    let mut acc = LcuDecomposition::unit();
    if !part.transition_qubits.is_empty() {
        let fam = if imag {
            be_transition_family_imag(&part.v(), &part.w())?
        } else {
            be_transition_family(&part.v(), &part.w())?
        };
        acc = acc.product(&fam)?;
    }
    if !part.number_qubits.is_empty() {
        acc = acc.product(&be_number_family(&part.number_qubits)?)?;
    }
    let paulis: Vec<(usize, Symbol)> = term
        .factors()
        .iter()
        .filter(|(_, s)| s.family() == Family::Pauli)
        .map(|(&q, &s)| (q, s))
        .collect();
    if !paulis.is_empty() {
        let n = paulis.last().map_or(0, |&(q, _)| q + 1);
        let mut c = Circuit::new(n);
        for (q, s) in paulis {
            c.append(&pauli_circuit(q, s)?)?;
        }
        acc = acc.product(&LcuDecomposition {
            num_qubits: n,
            pairs: vec![(1.0, c)],
        })?;
    }
    Ok(acc)
}

/// At most six pairs for a term with a real coefficient.
pub fn be_term(term: &Term) -> Result<LcuDecomposition, LcuError> {
    let z = term.coefficient();
    if z.im != 0.0 {
        return Err(LcuError::ComplexCoefficient);
    }
    let scale = if term.is_hermitized() && !term.has_transitions() {
        2.0 * z.re
    } else {
        z.re
    };
    Ok(families(term, false)?.scaled(scale))
}

/// Complex coefficients split into the real part and `i Im z (A - A^dagger)`;
/// each part is encoded on its own.
pub fn be_term_split(term: &Term) -> Result<Vec<LcuDecomposition>, LcuError> {
    let z = term.coefficient();
    if z.im == 0.0 {
        return Ok(vec![be_term(term)?]);
    }
    if !term.has_transitions() {
        return Err(LcuError::ComplexCoefficient);
    }
    let mut out = Vec::with_capacity(2);
    if z.re != 0.0 {
        out.push(be_term(&term.with_coefficient(C64::new(z.re, 0.0)))?);
    }
    out.push(families(term, true)?.scaled(z.im));
    Ok(out)
}
