// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Operator data model: single-qubit symbols, product terms, sums of terms,
//! Pauli-string expansion and formalism conversion.
//!
//! Tensor order: qubit 0 is the leftmost factor, i.e. the most significant
//! bit of a computational basis index.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::sim::{DenseOperator, MAX_DENSE_QUBITS};
use crate::C64;

/// Coefficients below this magnitude are treated as zero when merging.
pub const MERGE_EPS: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("qubit {0} appears twice in one term")]
    DuplicateIndex(usize),
    #[error("plain term is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    IndexOutOfRange { index: usize, num_qubits: usize },
    #[error("dense construction limited to {MAX_DENSE_QUBITS} qubits, got {0}")]
    TooLarge(usize),
    #[error("formalism conversion needs diagonal factors, found {0} on qubit {1}")]
    UnsupportedFormalism(Symbol, usize),
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
}

/// One entry of the single component basis, plus the Pauli letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Id,
    X,
    Y,
    Z,
    /// |1><1|
    Num,
    /// |0><0|
    Hole,
    /// |0><1|
    Lower,
    /// |1><0|
    Raise,
}

/// The four families a symbol can belong to when a term is synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Identity,
    Pauli,
    Number,
    Transition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn symbol(self) -> Symbol {
        match self {
            Pauli::X => Symbol::X,
            Pauli::Y => Symbol::Y,
            Pauli::Z => Symbol::Z,
        }
    }
}

fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

impl Symbol {
    pub const ALL: [Symbol; 8] = [
        Symbol::Id,
        Symbol::X,
        Symbol::Y,
        Symbol::Z,
        Symbol::Num,
        Symbol::Hole,
        Symbol::Lower,
        Symbol::Raise,
    ];

    pub fn matrix(self) -> [[C64; 2]; 2] {
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        match self {
            Symbol::Id => [[l, o], [o, l]],
            Symbol::X => [[o, l], [l, o]],
            Symbol::Y => [[o, c(0.0, -1.0)], [c(0.0, 1.0), o]],
            Symbol::Z => [[l, o], [o, -l]],
            Symbol::Num => [[o, o], [o, l]],
            Symbol::Hole => [[l, o], [o, o]],
            Symbol::Lower => [[o, l], [o, o]],
            Symbol::Raise => [[o, o], [l, o]],
        }
    }

    pub fn adjoint(self) -> Symbol {
        match self {
            Symbol::Lower => Symbol::Raise,
            Symbol::Raise => Symbol::Lower,
            s => s,
        }
    }

    pub fn is_hermitian(self) -> bool {
        !matches!(self, Symbol::Lower | Symbol::Raise)
    }

    pub fn is_diagonal(self) -> bool {
        matches!(self, Symbol::Id | Symbol::Z | Symbol::Num | Symbol::Hole)
    }

    pub fn family(self) -> Family {
        match self {
            Symbol::Id => Family::Identity,
            Symbol::X | Symbol::Y | Symbol::Z => Family::Pauli,
            Symbol::Num | Symbol::Hole => Family::Number,
            Symbol::Lower | Symbol::Raise => Family::Transition,
        }
    }

    /// Expansion in {I, X, Y, Z}; `None` stands for the identity letter.
    pub fn pauli_expansion(self) -> Vec<(C64, Option<Pauli>)> {
        let h = 0.5;
        match self {
            Symbol::Id => vec![(c(1.0, 0.0), None)],
            Symbol::X => vec![(c(1.0, 0.0), Some(Pauli::X))],
            Symbol::Y => vec![(c(1.0, 0.0), Some(Pauli::Y))],
            Symbol::Z => vec![(c(1.0, 0.0), Some(Pauli::Z))],
            Symbol::Num => vec![(c(h, 0.0), None), (c(-h, 0.0), Some(Pauli::Z))],
            Symbol::Hole => vec![(c(h, 0.0), None), (c(h, 0.0), Some(Pauli::Z))],
            Symbol::Lower => vec![(c(h, 0.0), Some(Pauli::X)), (c(0.0, h), Some(Pauli::Y))],
            Symbol::Raise => vec![(c(h, 0.0), Some(Pauli::X)), (c(0.0, -h), Some(Pauli::Y))],
        }
    }

    /// Product `self * rhs` written as `scale * symbol`, or `None` when it vanishes.
    ///
    /// The symbol set is closed under multiplication up to a scalar, so the
    /// product is matched against every basis matrix.
    pub fn mul(self, rhs: Symbol) -> Option<(C64, Symbol)> {
        let a = self.matrix();
        let b = rhs.matrix();
        let mut p = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                p[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        if p.iter().flatten().all(|z| z.norm() == 0.0) {
            return None;
        }
        for s in Symbol::ALL {
            let m = s.matrix();
            // pick the scale from the first nonzero entry of the candidate
            let Some((i, j)) = (0..4)
                .map(|k| (k / 2, k % 2))
                .find(|&(i, j)| m[i][j].norm() > 0.0)
            else {
                continue;
            };
            let scale = p[i][j] / m[i][j];
            let fits = (0..2).all(|r| (0..2).all(|q| (p[r][q] - scale * m[r][q]).norm() < 1e-15));
            if fits {
                return Some((scale, s));
            }
        }
        unreachable!("symbol products are closed up to scale")
    }

    pub fn token(self) -> &'static str {
        match self {
            Symbol::Id => "I",
            Symbol::X => "X",
            Symbol::Y => "Y",
            Symbol::Z => "Z",
            Symbol::Num => "n",
            Symbol::Hole => "o",
            Symbol::Lower => "s",
            Symbol::Raise => "sd",
        }
    }

    pub fn from_token(tok: &str) -> Option<Symbol> {
        Symbol::ALL.into_iter().find(|s| s.token() == tok)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

fn collect_factors(
    factors: impl IntoIterator<Item = (usize, Symbol)>,
) -> Result<BTreeMap<usize, Symbol>, AlgebraError> {
    let mut map = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for (q, s) in factors {
        if !seen.insert(q) {
            return Err(AlgebraError::DuplicateIndex(q));
        }
        if s != Symbol::Id {
            map.insert(q, s);
        }
    }
    Ok(map)
}

fn dense_of_factors(
    coefficient: C64,
    factors: &BTreeMap<usize, Symbol>,
    num_qubits: usize,
) -> Result<DMatrix<C64>, AlgebraError> {
    if num_qubits > MAX_DENSE_QUBITS {
        return Err(AlgebraError::TooLarge(num_qubits));
    }
    if let Some((&q, _)) = factors.iter().next_back() {
        if q >= num_qubits {
            return Err(AlgebraError::IndexOutOfRange { index: q, num_qubits });
        }
    }
    let mut m = DMatrix::from_element(1, 1, coefficient);
    for q in 0..num_qubits {
        let s = factors.get(&q).copied().unwrap_or(Symbol::Id);
        let a = s.matrix();
        let local = DMatrix::from_fn(2, 2, |i, j| a[i][j]);
        m = m.kronecker(&local);
    }
    Ok(m)
}

/// A non-Hermitian product `coefficient * (x) factors`, e.g. a fermionic
/// ladder operator after the Jordan-Wigner mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coefficient: C64,
    pub factors: BTreeMap<usize, Symbol>,
}

impl Monomial {
    pub fn new(
        coefficient: C64,
        factors: impl IntoIterator<Item = (usize, Symbol)>,
    ) -> Result<Self, AlgebraError> {
        Ok(Monomial {
            coefficient,
            factors: collect_factors(factors)?,
        })
    }

    pub fn identity() -> Self {
        Monomial {
            coefficient: c(1.0, 0.0),
            factors: BTreeMap::new(),
        }
    }

    pub fn adjoint(&self) -> Monomial {
        Monomial {
            coefficient: self.coefficient.conj(),
            factors: self.factors.iter().map(|(&q, s)| (q, s.adjoint())).collect(),
        }
    }

    /// Operator product `self * rhs`; `None` when the product vanishes.
    pub fn mul(&self, rhs: &Monomial) -> Option<Monomial> {
        let mut coefficient = self.coefficient * rhs.coefficient;
        let mut factors = self.factors.clone();
        for (&q, &s) in &rhs.factors {
            let left = factors.get(&q).copied().unwrap_or(Symbol::Id);
            let (scale, prod) = left.mul(s)?;
            coefficient *= scale;
            if prod == Symbol::Id {
                factors.remove(&q);
            } else {
                factors.insert(q, prod);
            }
        }
        Some(Monomial {
            coefficient,
            factors,
        })
    }

    pub fn scaled(&self, s: C64) -> Monomial {
        Monomial {
            coefficient: self.coefficient * s,
            factors: self.factors.clone(),
        }
    }

    pub fn dense(&self, num_qubits: usize) -> Result<DenseOperator, AlgebraError> {
        dense_of_factors(self.coefficient, &self.factors, num_qubits).map(DenseOperator::from_matrix)
    }
}

/// Unit of synthesis: `z * A`, or `z * A + conj(z) * A^dagger` when hermitized.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    coefficient: C64,
    factors: BTreeMap<usize, Symbol>,
    hermitized: bool,
}

impl Term {
    pub fn new(
        coefficient: C64,
        factors: impl IntoIterator<Item = (usize, Symbol)>,
        hermitized: bool,
    ) -> Result<Self, AlgebraError> {
        let factors = collect_factors(factors)?;
        if !hermitized {
            if let Some((q, s)) = factors.iter().find(|(_, s)| !s.is_hermitian()) {
                return Err(AlgebraError::NotHermitian(format!(
                    "{s}{q} needs '+ h.c.'"
                )));
            }
            if coefficient.im != 0.0 {
                return Err(AlgebraError::NotHermitian(format!(
                    "complex coefficient {coefficient} needs '+ h.c.'"
                )));
            }
        }
        Ok(Term {
            coefficient,
            factors,
            hermitized,
        })
    }

    pub fn real(coefficient: f64, factors: impl IntoIterator<Item = (usize, Symbol)>) -> Result<Self, AlgebraError> {
        Term::new(c(coefficient, 0.0), factors, false)
    }

    pub fn hermitized(
        coefficient: C64,
        factors: impl IntoIterator<Item = (usize, Symbol)>,
    ) -> Result<Self, AlgebraError> {
        Term::new(coefficient, factors, true)
    }

    /// `m + m^dagger` scaled by `scale`.
    pub fn from_monomial(m: &Monomial, scale: f64) -> Term {
        Term {
            coefficient: m.coefficient * scale,
            factors: m.factors.clone(),
            hermitized: true,
        }
    }

    pub fn coefficient(&self) -> C64 {
        self.coefficient
    }

    pub fn factors(&self) -> &BTreeMap<usize, Symbol> {
        &self.factors
    }

    pub fn is_hermitized(&self) -> bool {
        self.hermitized
    }

    pub fn symbol(&self, q: usize) -> Symbol {
        self.factors.get(&q).copied().unwrap_or(Symbol::Id)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.factors.keys().next_back().copied()
    }

    pub fn has_transitions(&self) -> bool {
        self.factors.values().any(|s| s.family() == Family::Transition)
    }

    pub fn is_diagonal(&self) -> bool {
        self.factors.values().all(|s| s.is_diagonal())
    }

    /// Real scale `r` with `term == r * A` when `A` itself is Hermitian.
    pub fn hermitian_scale(&self) -> Option<f64> {
        if self.has_transitions() {
            return None;
        }
        Some(if self.hermitized {
            2.0 * self.coefficient.re
        } else {
            self.coefficient.re
        })
    }

    pub fn with_coefficient(&self, coefficient: C64) -> Term {
        Term {
            coefficient,
            ..self.clone()
        }
    }

    /// Same operator with qubit indices remapped through `f`.
    pub fn relabeled(&self, f: impl Fn(usize) -> usize) -> Result<Term, AlgebraError> {
        Term::new(
            self.coefficient,
            self.factors.iter().map(|(&q, &s)| (f(q), s)),
            self.hermitized,
        )
    }

    /// Extra tensor factor on a qubit not yet in the support.
    pub fn with_factor(&self, q: usize, s: Symbol) -> Result<Term, AlgebraError> {
        Term::new(
            self.coefficient,
            self.factors.iter().map(|(&k, &v)| (k, v)).chain(std::iter::once((q, s))),
            self.hermitized,
        )
    }

    pub fn monomial(&self) -> Monomial {
        Monomial {
            coefficient: self.coefficient,
            factors: self.factors.clone(),
        }
    }

    pub fn dense(&self, num_qubits: usize) -> Result<DenseOperator, AlgebraError> {
        dense_of_term(self, num_qubits)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.coefficient;
        if z.im == 0.0 {
            write!(f, "{:?} *", z.re)?;
        } else {
            let sign = if z.im < 0.0 { '-' } else { '+' };
            write!(f, "({:?}{}{:?}i) *", z.re, sign, z.im.abs())?;
        }
        if self.factors.is_empty() {
            f.write_str(" I0")?;
        }
        for (q, s) in &self.factors {
            write!(f, " {s}{q}")?;
        }
        if self.hermitized {
            f.write_str(" + h.c.")?;
        }
        Ok(())
    }
}

/// Dense matrix of a term; the adjoint is added for hermitized terms.
pub fn dense_of_term(term: &Term, num_qubits: usize) -> Result<DenseOperator, AlgebraError> {
    let m = dense_of_factors(term.coefficient, &term.factors, num_qubits)?;
    let m = if term.hermitized { &m + m.adjoint() } else { m };
    Ok(DenseOperator::from_matrix(m))
}

/// Sum of terms over a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianExpr {
    num_qubits: usize,
    terms: Vec<Term>,
}

impl HamiltonianExpr {
    pub fn new(num_qubits: usize, terms: Vec<Term>) -> Result<Self, AlgebraError> {
        for t in &terms {
            if let Some(q) = t.max_index() {
                if q >= num_qubits {
                    return Err(AlgebraError::IndexOutOfRange { index: q, num_qubits });
                }
            }
        }
        Ok(HamiltonianExpr { num_qubits, terms })
    }

    /// Register sized to the largest index used (at least one qubit).
    pub fn from_terms(terms: Vec<Term>) -> Self {
        let n = terms.iter().filter_map(Term::max_index).max().map_or(1, |q| q + 1);
        HamiltonianExpr { num_qubits: n, terms }
    }

    pub fn zero(num_qubits: usize) -> Self {
        HamiltonianExpr {
            num_qubits,
            terms: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_num_qubits(mut self, n: usize) -> Result<Self, AlgebraError> {
        if let Some(q) = self.terms.iter().filter_map(Term::max_index).max() {
            if q >= n {
                return Err(AlgebraError::IndexOutOfRange { index: q, num_qubits: n });
            }
        }
        self.num_qubits = n;
        Ok(self)
    }

    pub fn push(&mut self, term: Term) -> Result<(), AlgebraError> {
        if let Some(q) = term.max_index() {
            if q >= self.num_qubits {
                return Err(AlgebraError::IndexOutOfRange {
                    index: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        self.terms.push(term);
        Ok(())
    }

    /// Sums terms with identical factors and hermitization, keeping first-seen
    /// order, and drops coefficients below [`MERGE_EPS`].
    pub fn merged(&self) -> HamiltonianExpr {
        let mut order: Vec<Term> = Vec::new();
        let mut index: HashMap<(Vec<(usize, Symbol)>, bool), usize> = HashMap::new();
        for t in &self.terms {
            let key = (t.factors.iter().map(|(&q, &s)| (q, s)).collect::<Vec<_>>(), t.hermitized);
            match index.get(&key) {
                Some(&i) => order[i].coefficient += t.coefficient,
                None => {
                    index.insert(key, order.len());
                    order.push(t.clone());
                }
            }
        }
        order.retain(|t| t.coefficient.norm() >= MERGE_EPS);
        HamiltonianExpr {
            num_qubits: self.num_qubits,
            terms: order,
        }
    }

    pub fn dense(&self) -> Result<DenseOperator, AlgebraError> {
        let n = self.num_qubits;
        if n > MAX_DENSE_QUBITS {
            return Err(AlgebraError::TooLarge(n));
        }
        let mut acc = DMatrix::zeros(1 << n, 1 << n);
        for t in &self.terms {
            acc += dense_of_term(t, n)?.matrix();
        }
        Ok(DenseOperator::from_matrix(acc))
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(Term::is_diagonal)
    }
}

impl fmt::Display for HamiltonianExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0 * I0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("\n+ ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// `coefficient * (x) letters`, absent qubits carrying the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub coefficient: C64,
    pub letters: BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn as_term(&self) -> Result<Term, AlgebraError> {
        Term::real(
            self.coefficient.re,
            self.letters.iter().map(|(&q, p)| (q, p.symbol())),
        )
    }

    pub fn dense(&self, num_qubits: usize) -> Result<DenseOperator, AlgebraError> {
        let factors = self.letters.iter().map(|(&q, p)| (q, p.symbol())).collect();
        dense_of_factors(self.coefficient, &factors, num_qubits).map(DenseOperator::from_matrix)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coefficient.re)?;
        if self.coefficient.im != 0.0 {
            write!(f, "{:+?}i", self.coefficient.im)?;
        }
        f.write_str(" *")?;
        if self.letters.is_empty() {
            f.write_str(" I")?;
        }
        for (q, p) in &self.letters {
            write!(f, " {}{q}", p.symbol())?;
        }
        Ok(())
    }
}

fn expand_monomial(coefficient: C64, factors: &BTreeMap<usize, Symbol>) -> Vec<(C64, Vec<(usize, Pauli)>)> {
    let mut acc: Vec<(C64, Vec<(usize, Pauli)>)> = vec![(coefficient, Vec::new())];
    for (&q, s) in factors {
        let parts = s.pauli_expansion();
        let mut next = Vec::with_capacity(acc.len() * parts.len());
        for (z, letters) in &acc {
            for &(w, p) in &parts {
                let mut l = letters.clone();
                if let Some(p) = p {
                    l.push((q, p));
                }
                next.push((z * w, l));
            }
        }
        acc = next;
    }
    acc
}

/// Number of Pauli products produced by mapping every factor of `z * A`
/// separately, before the adjoint is added and like strings are merged.
pub fn raw_pauli_product_count(term: &Term) -> usize {
    term.factors
        .values()
        .map(|s| s.pauli_expansion().len())
        .product()
}

/// Pauli-string expansion of a term with like strings merged.
pub fn to_pauli_sum(term: &Term) -> Vec<PauliString> {
    let mut merged: BTreeMap<Vec<(usize, Pauli)>, C64> = BTreeMap::new();
    let mut order: Vec<Vec<(usize, Pauli)>> = Vec::new();
    let mut add = |z: C64, letters: Vec<(usize, Pauli)>| {
        let e = merged.entry(letters.clone()).or_insert_with(|| {
            order.push(letters);
            c(0.0, 0.0)
        });
        *e += z;
    };
    for (z, l) in expand_monomial(term.coefficient, &term.factors) {
        if term.hermitized {
            // Pauli strings are Hermitian: the adjoint only conjugates the weight.
            add(z + z.conj(), l);
        } else {
            add(z, l);
        }
    }
    order
        .into_iter()
        .filter_map(|l| {
            let z = merged[&l];
            (z.norm() >= MERGE_EPS).then(|| PauliString {
                coefficient: z,
                letters: l.into_iter().collect(),
            })
        })
        .collect()
}

/// Pauli expansion of a whole expression, like strings merged across terms.
pub fn expr_to_pauli_sum(expr: &HamiltonianExpr) -> Vec<PauliString> {
    let mut out: Vec<PauliString> = Vec::new();
    let mut index: HashMap<Vec<(usize, Pauli)>, usize> = HashMap::new();
    for t in expr.terms() {
        for ps in to_pauli_sum(t) {
            let key: Vec<_> = ps.letters.iter().map(|(&q, &p)| (q, p)).collect();
            match index.get(&key) {
                Some(&i) => out[i].coefficient += ps.coefficient,
                None => {
                    index.insert(key, out.len());
                    out.push(ps);
                }
            }
        }
    }
    out.retain(|p| p.coefficient.norm() >= MERGE_EPS);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formalism {
    /// Products of Z letters.
    ZForm,
    /// Products of number operators.
    NForm,
}

/// Rewrites a diagonal expression entirely in Z letters or in number operators.
///
/// The constant part is kept as a term with no factors.
pub fn convert_formalism(expr: &HamiltonianExpr, target: Formalism) -> Result<HamiltonianExpr, AlgebraError> {
    let mut out = Vec::new();
    for t in expr.terms() {
        if let Some((&q, &s)) = t.factors.iter().find(|(_, s)| !s.is_diagonal()) {
            return Err(AlgebraError::UnsupportedFormalism(s, q));
        }
        let scale = if t.hermitized {
            2.0 * t.coefficient.re
        } else {
            t.coefficient.re
        };
        // each factor as a list of (weight, optional symbol) in the target basis
        let mut acc: Vec<(f64, Vec<(usize, Symbol)>)> = vec![(scale, Vec::new())];
        for (&q, &s) in &t.factors {
            let parts: Vec<(f64, Option<Symbol>)> = match (target, s) {
                (Formalism::ZForm, Symbol::Z) | (Formalism::NForm, Symbol::Num) => vec![(1.0, Some(s))],
                (Formalism::ZForm, Symbol::Num) => vec![(0.5, None), (-0.5, Some(Symbol::Z))],
                (Formalism::ZForm, Symbol::Hole) => vec![(0.5, None), (0.5, Some(Symbol::Z))],
                (Formalism::NForm, Symbol::Z) => vec![(1.0, None), (-2.0, Some(Symbol::Num))],
                (Formalism::NForm, Symbol::Hole) => vec![(1.0, None), (-1.0, Some(Symbol::Num))],
                _ => unreachable!("diagonal symbols only"),
            };
            let mut next = Vec::with_capacity(acc.len() * parts.len());
            for (w, f) in &acc {
                for &(pw, ps) in &parts {
                    let mut f = f.clone();
                    if let Some(ps) = ps {
                        f.push((q, ps));
                    }
                    next.push((w * pw, f));
                }
            }
            acc = next;
        }
        for (w, f) in acc {
            out.push(Term::real(w, f)?);
        }
    }
    Ok(HamiltonianExpr {
        num_qubits: expr.num_qubits,
        terms: out,
    }
    .merged())
}

/// Embedding of a non-Hermitian square matrix `A` as `Raise_0 (x) A + h.c.`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QlspEmbedding {
    /// Side of the original matrix.
    pub dim: usize,
}

impl QlspEmbedding {
    /// `|0> (x) a`
    pub fn embed(&self, a: &[C64]) -> Vec<C64> {
        let mut v = vec![c(0.0, 0.0); 2 * self.dim];
        v[..self.dim].copy_from_slice(a);
        v
    }

    /// Lower block of a vector on the doubled register, i.e. the `|1>` half.
    pub fn extract(&self, v: &[C64]) -> Vec<C64> {
        v[self.dim..].to_vec()
    }
}

/// `Raise_0 (x) A + Lower_0 (x) A^dagger` on one extra leading qubit.
pub fn hermitize_nonhermitian(a: &DMatrix<C64>) -> Result<(DenseOperator, QlspEmbedding), AlgebraError> {
    let (r, cc) = a.shape();
    if r != cc {
        return Err(AlgebraError::NotSquare(r, cc));
    }
    if r > 1 << (MAX_DENSE_QUBITS - 1) {
        return Err(AlgebraError::TooLarge(r.ilog2() as usize + 1));
    }
    let n = r;
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    h.view_mut((n, 0), (n, n)).copy_from(a);
    h.view_mut((0, n), (n, n)).copy_from(&a.adjoint());
    Ok((DenseOperator::from_matrix(h), QlspEmbedding { dim: n }))
}
