// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Higher-order binary optimization: phase-separation circuits and gate-count
//! models for the direct and usual strategies.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{convert_formalism, expr_to_pauli_sum, AlgebraError, Formalism, HamiltonianExpr, PauliString, Symbol, Term};
use crate::circuit::{Circuit, CircuitError};
use crate::direct::{synthesize_direct, DirectError, DirectSynthesisOptions};
use crate::usual::{pauli_string_evolution, Strategy, UsualError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HuboError {
    #[error("variable {index} out of range for {num_vars} variables")]
    OutOfRange { index: usize, num_vars: usize },
    #[error("empty variable subset")]
    EmptySubset,
    #[error("variable {0} repeated in a subset")]
    Repeated(usize),
    #[error("weight must be finite")]
    NonFinite,
    #[error("assignment has {got} bits, expected {expected}")]
    AssignmentLength { got: usize, expected: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Direct(#[from] DirectError),
    #[error(transparent)]
    Usual(#[from] UsualError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HuboProblem {
    num_vars: usize,
    formalism: Formalism,
    weights: BTreeMap<Vec<usize>, f64>,
}

impl HuboProblem {
    pub fn new(num_vars: usize, formalism: Formalism) -> Self {
        HuboProblem {
            num_vars,
            formalism,
            weights: BTreeMap::new(),
        }
    }

    /// Adds `weight` to the subset; repeated subsets accumulate.
    pub fn add(&mut self, subset: &[usize], weight: f64) -> Result<(), HuboError> {
        if subset.is_empty() {
            return Err(HuboError::EmptySubset);
        }
        if !weight.is_finite() {
            return Err(HuboError::NonFinite);
        }
        let mut s = subset.to_vec();
        s.sort_unstable();
        for w in s.windows(2) {
            if w[0] == w[1] {
                return Err(HuboError::Repeated(w[0]));
            }
        }
        if let Some(&q) = s.last().filter(|&&q| q >= self.num_vars) {
            return Err(HuboError::OutOfRange {
                index: q,
                num_vars: self.num_vars,
            });
        }
        *self.weights.entry(s).or_insert(0.0) += weight;
        Ok(())
    }

    pub fn with(mut self, subset: &[usize], weight: f64) -> Result<Self, HuboError> {
        self.add(subset, weight)?;
        Ok(self)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn formalism(&self) -> Formalism {
        self.formalism
    }

    pub fn weights(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.weights.iter().map(|(k, &w)| (k.as_slice(), w))
    }

    pub fn max_order(&self) -> usize {
        self.weights.keys().map(Vec::len).max().unwrap_or(0)
    }
}

fn letter(f: Formalism) -> Symbol {
    match f {
        Formalism::ZForm => Symbol::Z,
        Formalism::NForm => Symbol::Num,
    }
}

/// One diagonal term per weighted subset.
pub fn build_expr(p: &HuboProblem) -> Result<HamiltonianExpr, HuboError> {
    let s = letter(p.formalism);
    let terms = p
        .weights
        .iter()
        .map(|(k, &w)| Term::real(w, k.iter().map(|&q| (q, s))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HamiltonianExpr::new(p.num_vars, terms)?)
}

/// Classical cost with `Z -> 1 - 2x` and `n -> x`.
pub fn cost_of(p: &HuboProblem, x: &[bool]) -> Result<f64, HuboError> {
    if x.len() != p.num_vars {
        return Err(HuboError::AssignmentLength {
            got: x.len(),
            expected: p.num_vars,
        });
    }
    let factor = |b: bool| match (p.formalism, b) {
        (Formalism::ZForm, false) => 1.0,
        (Formalism::ZForm, true) => -1.0,
        (Formalism::NForm, b) => f64::from(u8::from(b)),
    };
    Ok(p.weights
        .iter()
        .map(|(k, &w)| w * k.iter().map(|&q| factor(x[q])).product::<f64>())
        .sum())
}

/// Pauli fragments of the usual strategy, in expansion order.
pub fn usual_fragments(p: &HuboProblem) -> Result<Vec<PauliString>, HuboError> {
    Ok(expr_to_pauli_sum(&build_expr(p)?))
}

/// Phase separation `exp(-i t H_p)`. The direct strategy works on the number
/// form (Z-form problems are converted first) and emits one phase gate per
/// product; the usual strategy emits one RZ-string per Pauli fragment.
pub fn synthesize_hubo(p: &HuboProblem, t: f64, strategy: Strategy) -> Result<Circuit, HuboError> {
    let mut c = Circuit::new(p.num_vars);
    match strategy {
        Strategy::Direct => {
            let expr = convert_formalism(&build_expr(p)?, Formalism::NForm)?;
            let opts = DirectSynthesisOptions::new(t);
            for term in expr.terms() {
                c.append(&synthesize_direct(term, &opts)?)?;
            }
        }
        Strategy::Usual => {
            for ps in usual_fragments(p)? {
                c.append(&pauli_string_evolution(&ps, t)?)?;
            }
        }
    }
    Ok(c)
}

/// Two-qubit gate counts per gate class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CountModel {
    /// Count every phase gate with the quadratic no-ancilla form `2(n-1)^2`
    /// instead of the linear one-ancilla formula.
    pub no_ancilla: bool,
}

/// Phase gates on up to five qubits: P, CP, CCP, C3P, C4P.
const SMALL_KEYED_PHASE: [u64; 6] = [0, 0, 2, 8, 18, 32];

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

impl CountModel {
    /// RZ on a weight-`n` Pauli string.
    pub fn rz_string(&self, n: usize) -> u64 {
        2 * n.saturating_sub(1) as u64
    }

    /// Phase gate acting on `n` qubits (n-1 controls).
    pub fn keyed_phase(&self, n: usize) -> u64 {
        if self.no_ancilla {
            let m = n.saturating_sub(1) as u64;
            return 2 * m * m;
        }
        match n {
            0..=5 => SMALL_KEYED_PHASE[n],
            _ => {
                let n = n as u64;
                2 * (6 * 8 * (n - 5) + 48 * n - 212)
            }
        }
    }

    pub fn ancillas(&self, n: usize) -> usize {
        usize::from(!self.no_ancilla && n > 5)
    }

    /// Usual-strategy count for a dense order-`n` problem: every subset of
    /// size `h` contributes one weight-`h` RZ string.
    pub fn usual_dense(&self, n: usize) -> u64 {
        (1..=n).map(|h| self.rz_string(h) * binomial(n, h)).sum()
    }

    /// Direct and usual two-qubit totals for a concrete problem.
    pub fn problem_totals(&self, p: &HuboProblem) -> Result<(u64, u64), HuboError> {
        let nform = convert_formalism(&build_expr(p)?, Formalism::NForm)?;
        let direct = nform.terms().iter().map(|t| self.keyed_phase(t.factors().len())).sum();
        let usual = usual_fragments(p)?.iter().map(|ps| self.rz_string(ps.weight())).sum();
        Ok((direct, usual))
    }
}

/// Smallest order `n > 5` (the range of the linear phase-gate formula) at which
/// a single order-`n` phase gate needs fewer two-qubit gates than the dense
/// usual expansion.
pub fn crossover_threshold(model: &CountModel) -> usize {
    (6..)
        .find(|&n| model.keyed_phase(n) < model.usual_dense(n))
        .expect("exponential right-hand side eventually dominates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{count, Gate, GateKind};

    #[test]
    fn build_expr_examples() {
        let p = HuboProblem::new(2, Formalism::ZForm).with(&[0, 1], 1.0).unwrap();
        let e = build_expr(&p).unwrap();
        assert_eq!(e.terms()[0], Term::real(1.0, [(0, Symbol::Z), (1, Symbol::Z)]).unwrap());
        assert!(build_expr(&HuboProblem::new(3, Formalism::NForm)).unwrap().is_empty());
        assert!(matches!(
            HuboProblem::new(2, Formalism::NForm).with(&[2], 1.0),
            Err(HuboError::OutOfRange { .. })
        ));
    }

    #[test]
    fn cost_examples() {
        let p = HuboProblem::new(1, Formalism::NForm).with(&[0], 3.0).unwrap();
        assert_eq!(cost_of(&p, &[true]).unwrap(), 3.0);
        let p = HuboProblem::new(2, Formalism::ZForm).with(&[0, 1], 1.0).unwrap();
        assert_eq!(cost_of(&p, &[false, true]).unwrap(), -1.0);
        let p = HuboProblem::new(3, Formalism::ZForm).with(&[0, 1, 2], 2.0).unwrap();
        assert_eq!(cost_of(&p, &[true, true, true]).unwrap(), -2.0);
        assert!(cost_of(&p, &[true]).is_err());
    }

    #[test]
    fn nnn_direct_is_one_gate() {
        let p = HuboProblem::new(3, Formalism::NForm).with(&[0, 1, 2], 1.0).unwrap();
        let c = synthesize_hubo(&p, 0.4, Strategy::Direct).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.gates()[0].kind, GateKind::KeyedPhase(-0.4));
        assert_eq!(c.gates()[0].key.len(), 2);
    }

    #[test]
    fn zz_direct_inventory() {
        let p = HuboProblem::new(2, Formalism::ZForm).with(&[0, 1], 1.0).unwrap();
        let c = synthesize_hubo(&p, 0.3, Strategy::Direct).unwrap();
        let r = count(&c);
        assert_eq!((r.kind("Phase"), r.kind("KeyedPhase")), (2, 1));
        assert!(c.gates().contains(&Gate::phase(0, 0.6)));
    }

    #[test]
    fn count_model_values() {
        let m = CountModel::default();
        assert_eq!(m.keyed_phase(6), 248);
        assert_eq!(m.usual_dense(3), 10);
        assert_eq!(m.rz_string(4), 6);
        assert_eq!(m.ancillas(6), 1);
        assert_eq!(binomial(8, 3), 56);
    }
}
