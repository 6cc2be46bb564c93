// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact simulation of one term by splitting its factors into four families.
//!
//! For a term `P (x) Pi_K (x) (z|v><w| + h.c.)` the circuit
//! 1. rotates every Pauli letter to Z and folds their parity onto one qubit,
//! 2. maps the transition pair `|v>, |w>` onto two states that differ only on
//!    a root qubit,
//! 3. applies one rotation on the root, keyed by the number pattern and the
//!    shared transition pattern, with its sign flipped by a CZ pair from the
//!    Pauli parity qubit,
//! 4. uncomputes.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Family, Pauli, Symbol, Term};
use crate::circuit::{Circuit, CircuitError, ControlKey, Gate, GateKind, ParityNetwork, Topology};
use crate::sim::{self, SimError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DirectError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("complex coefficient on a transition-free term makes it non-Hermitian")]
    ComplexWithoutTransition,
    #[error("evolution angle must be finite")]
    NonFiniteAngle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComplexMode {
    /// Two rotations per Eq-8-style split; carries a Trotter error.
    Split,
    /// Root rotation axis tilted by `arg z` with RZ wraps; exact.
    ExactAxis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectSynthesisOptions {
    pub parity_topology: Topology,
    pub complex_mode: ComplexMode,
    pub theta: f64,
}

impl DirectSynthesisOptions {
    pub fn new(theta: f64) -> Self {
        DirectSynthesisOptions {
            parity_topology: Topology::Chain,
            complex_mode: ComplexMode::ExactAxis,
            theta,
        }
    }

    pub fn with_topology(mut self, t: Topology) -> Self {
        self.parity_topology = t;
        self
    }

    pub fn with_complex_mode(mut self, m: ComplexMode) -> Self {
        self.complex_mode = m;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FamilyPartition {
    pub identity_qubits: Vec<usize>,
    pub pauli_qubits: BTreeMap<usize, Pauli>,
    /// `n -> 1`, `o -> 0`.
    pub number_qubits: ControlKey,
    /// `sd -> 1`, `s -> 0`; these bits spell `|v>`, the complement `|w>`.
    pub transition_qubits: ControlKey,
}

impl FamilyPartition {
    /// `|v>`: the term maps `|w>` to `|v>`.
    pub fn v(&self) -> ControlKey {
        self.transition_qubits.clone()
    }

    pub fn w(&self) -> ControlKey {
        self.transition_qubits.complement()
    }
}

/// Identity qubits are those below the term's highest index that carry no factor.
pub fn classify(term: &Term) -> FamilyPartition {
    let mut p = FamilyPartition::default();
    let top = term.max_index().map_or(0, |m| m + 1);
    for q in 0..top {
        let s = term.symbol(q);
        match s.family() {
            Family::Identity => p.identity_qubits.push(q),
            Family::Pauli => {
                let letter = match s {
                    Symbol::X => Pauli::X,
                    Symbol::Y => Pauli::Y,
                    _ => Pauli::Z,
                };
                p.pauli_qubits.insert(q, letter);
            }
            Family::Number => p.number_qubits.insert(q, s == Symbol::Num),
            Family::Transition => p.transition_qubits.insert(q, s == Symbol::Raise),
        }
    }
    p
}

/// Pauli letters to Z, then their parity onto the lowest Pauli qubit.
fn pauli_prefix(
    paulis: &BTreeMap<usize, Pauli>,
    topology: Topology,
    n: usize,
) -> Result<Option<(Circuit, usize)>, DirectError> {
    if paulis.is_empty() {
        return Ok(None);
    }
    let mut c = Circuit::new(n);
    for (&q, &p) in paulis {
        match p {
            Pauli::X => c.push(Gate::h(q))?,
            Pauli::Y => {
                c.push(Gate::sdg(q))?;
                c.push(Gate::h(q))?;
            }
            Pauli::Z => {}
        }
    }
    let qubits: Vec<usize> = paulis.keys().copied().collect();
    let net = ParityNetwork::new(&qubits, topology)?;
    c.append(&net.circuit(n)?)?;
    Ok(Some((c, net.root)))
}

/// Exact circuit for `exp(-i theta term)` (up to the split error in
/// `Split` mode for complex coefficients).
pub fn synthesize_direct(term: &Term, opts: &DirectSynthesisOptions) -> Result<Circuit, DirectError> {
    let theta = opts.theta;
    if !theta.is_finite() {
        return Err(DirectError::NonFiniteAngle);
    }
    let n = term.max_index().map_or(0, |m| m + 1);
    let part = classify(term);
    let z = term.coefficient();
    let mut c = Circuit::new(n);

    if part.transition_qubits.is_empty() {
        if z.im != 0.0 {
            return Err(DirectError::ComplexWithoutTransition);
        }
        let r = term.hermitian_scale().expect("transition-free");
        let Some((prefix, root)) = pauli_prefix(&part.pauli_qubits, opts.parity_topology, n)? else {
            diagonal_phase(&mut c, &part.number_qubits, -theta * r)?;
            return Ok(c);
        };
        c.append(&prefix)?;
        if part.number_qubits.is_empty() {
            c.push(Gate::rz(root, 2.0 * theta * r))?;
        } else {
            c.push(Gate::h(root))?;
            c.push(Gate::new(GateKind::KeyedRx(2.0 * theta * r), vec![root], part.number_qubits.clone())?)?;
            c.push(Gate::h(root))?;
        }
        c.append(&prefix.inverse())?;
        return Ok(c);
    }

    // a plain term with transitions cannot be built, so the term is hermitized
    let pauli = pauli_prefix(&part.pauli_qubits, opts.parity_topology, n)?;
    let tq: Vec<usize> = part.transition_qubits.qubits().collect();
    let net = ParityNetwork::new(&tq, opts.parity_topology)?.transposed();
    let mut image = part.v();
    net.apply_to_bits(&mut image);
    let root = net.root;
    let x = image.remove(root).expect("root carries a bit");
    let key = part.number_qubits.union(&image);
    let basis = net.circuit(n)?;

    if let Some((prefix, _)) = &pauli {
        c.append(prefix)?;
    }
    c.append(&basis)?;
    if let Some((_, proot)) = &pauli {
        c.push(Gate::cz(*proot, root))?;
    }
    // block on the root: Re z X + s Im z Y with s = +1 when |v> lands on root 1
    let s = if x { 1.0 } else { -1.0 };
    if z.im == 0.0 {
        c.push(Gate::keyed(GateKind::KeyedRx(2.0 * theta * z.re), key, root)?)?;
    } else {
        match opts.complex_mode {
            ComplexMode::ExactAxis => {
                let phi = s * z.im.atan2(z.re);
                c.push(Gate::rz(root, -phi))?;
                c.push(Gate::keyed(GateKind::KeyedRx(2.0 * theta * z.norm()), key, root)?)?;
                c.push(Gate::rz(root, phi))?;
            }
            ComplexMode::Split => {
                c.push(Gate::keyed(GateKind::KeyedRx(2.0 * theta * z.re), key.clone(), root)?)?;
                c.push(Gate::keyed(GateKind::KeyedRy(2.0 * theta * s * z.im), key, root)?)?;
            }
        }
    }
    if let Some((_, proot)) = &pauli {
        c.push(Gate::cz(*proot, root))?;
    }
    c.append(&basis.inverse())?;
    if let Some((prefix, _)) = &pauli {
        c.append(&prefix.inverse())?;
    }
    Ok(c)
}

/// `exp(i phi |key><key|)`, or a global phase for an empty key.
fn diagonal_phase(c: &mut Circuit, key: &ControlKey, phi: f64) -> Result<(), DirectError> {
    if key.is_empty() {
        c.push(Gate::global_phase(phi))?;
        return Ok(());
    }
    let (target, bit) = key
        .iter()
        .filter(|&(_, b)| b)
        .last()
        .unwrap_or_else(|| key.iter().last().expect("non-empty key"));
    let mut rest = key.clone();
    rest.remove(target);
    if !bit {
        c.push(Gate::x(target))?;
    }
    c.push(Gate::keyed(GateKind::KeyedPhase(phi), rest, target)?)?;
    if !bit {
        c.push(Gate::x(target))?;
    }
    Ok(())
}

/// Distance between the split circuit and the exact evolution.
pub fn trotter_error_of_split(term: &Term, theta: f64) -> Result<f64, DirectError> {
    let n = term.max_index().map_or(0, |m| m + 1);
    let opts = DirectSynthesisOptions::new(theta).with_complex_mode(ComplexMode::Split);
    let circ = synthesize_direct(term, &opts)?;
    let u = sim::circuit_unitary(&circ)?;
    let exact = sim::expm_hermitian(&term.dense(n)?, theta)?;
    Ok(sim::phase_distance(&u, &exact)?)
}
