// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Baseline strategy: Pauli-string exponentials and product formulas.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{expr_to_pauli_sum, HamiltonianExpr, Pauli, PauliString};
use crate::circuit::{Circuit, CircuitError, Gate, ParityNetwork, Topology};
use crate::direct::{synthesize_direct, DirectError, DirectSynthesisOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UsualError {
    #[error("Pauli rotation needs at least one non-identity letter")]
    EmptyString,
    #[error("Pauli coefficient {0} has a non-negligible imaginary part")]
    ComplexCoefficient(String),
    #[error("Trotter step count must be at least 1")]
    ZeroSteps,
    #[error("product formula order must be 1 or 2, got {0}")]
    UnsupportedOrder(u8),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Direct(#[from] DirectError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strategy {
    Direct,
    Usual,
}

/// `exp(-i theta P)` for a Pauli string: basis changes, a CX ladder onto the
/// highest qubit, `RZ(2 theta)`, then the mirror image.
pub fn synthesize_pauli_rotation(letters: &[(usize, Pauli)], theta: f64) -> Result<Circuit, UsualError> {
    if letters.is_empty() {
        return Err(UsualError::EmptyString);
    }
    let mut sorted = letters.to_vec();
    sorted.sort_unstable();
    let n = sorted.last().map_or(0, |&(q, _)| q + 1);
    let mut basis = Circuit::new(n);
    for &(q, p) in &sorted {
        match p {
            Pauli::X => basis.push(Gate::h(q))?,
            Pauli::Y => {
                basis.push(Gate::sdg(q))?;
                basis.push(Gate::h(q))?;
            }
            Pauli::Z => {}
        }
    }
    let order: Vec<usize> = sorted.iter().rev().map(|&(q, _)| q).collect();
    let net = ParityNetwork::new(&order, Topology::Chain)?;
    basis.append(&net.circuit(n)?)?;
    let mut c = basis.clone();
    c.push(Gate::rz(net.root, 2.0 * theta))?;
    c.append(&basis.inverse())?;
    Ok(c)
}

/// Rotation for `coefficient * letters`; the identity string becomes a global phase.
pub fn pauli_string_evolution(ps: &PauliString, theta: f64) -> Result<Circuit, UsualError> {
    if ps.coefficient.im.abs() > 1e-12 {
        return Err(UsualError::ComplexCoefficient(ps.coefficient.to_string()));
    }
    let c = ps.coefficient.re;
    if ps.letters.is_empty() {
        let mut g = Circuit::new(0);
        g.push(Gate::global_phase(-c * theta))?;
        return Ok(g);
    }
    let letters: Vec<(usize, Pauli)> = ps.letters.iter().map(|(&q, &p)| (q, p)).collect();
    synthesize_pauli_rotation(&letters, c * theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrotterPlan {
    pub order: u8,
    pub steps: usize,
    pub time: f64,
}

impl TrotterPlan {
    pub fn new(order: u8, steps: usize, time: f64) -> Self {
        TrotterPlan { order, steps, time }
    }
}

/// Product formula over the expression's fragments, in input order.
pub fn trotter_product(expr: &HamiltonianExpr, plan: &TrotterPlan, strategy: Strategy) -> Result<Circuit, UsualError> {
    trotter_product_with(expr, plan, strategy, &DirectSynthesisOptions::new(0.0))
}

/// As [`trotter_product`], with the direct-synthesis options (topology,
/// complex mode) taken from `base`; its angle is ignored.
pub fn trotter_product_with(
    expr: &HamiltonianExpr,
    plan: &TrotterPlan,
    strategy: Strategy,
    base: &DirectSynthesisOptions,
) -> Result<Circuit, UsualError> {
    if plan.steps == 0 {
        return Err(UsualError::ZeroSteps);
    }
    if !matches!(plan.order, 1 | 2) {
        return Err(UsualError::UnsupportedOrder(plan.order));
    }
    let n = expr.num_qubits();
    let dt = plan.time / plan.steps as f64;
    let fragment = |theta: f64| -> Result<Vec<Circuit>, UsualError> {
        match strategy {
            Strategy::Direct => expr
                .terms()
                .iter()
                .map(|t| {
                    let opts = DirectSynthesisOptions { theta, ..*base };
                    Ok(synthesize_direct(t, &opts)?)
                })
                .collect(),
            Strategy::Usual => expr_to_pauli_sum(expr)
                .iter()
                .map(|ps| pauli_string_evolution(ps, theta))
                .collect(),
        }
    };
    let mut step = Circuit::new(n);
    if plan.order == 1 {
        for f in fragment(dt)? {
            step.append(&f)?;
        }
    } else {
        let half = fragment(dt / 2.0)?;
        for f in half.iter().chain(half.iter().rev()) {
            step.append(f)?;
        }
    }
    Ok(step.repeated(plan.steps))
}
