// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Finite-difference operators on cartesian grids of `2^q` nodes per line.
//!
//! Register layout, most significant first: layer qubits, line qubits, node
//! qubits. A line is selected by a Hole/Num prefix over the layer and line
//! qubits, and first-neighbor hops inside a register come from the shift
//! operator `S_q = I (x) S_{q-1} + (sd s..s + h.c.)`.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, HamiltonianExpr, Symbol, Term};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FdError {
    #[error("register needs at least {min} qubit(s), got {got}")]
    TooFewQubits { min: usize, got: usize },
    #[error("unsupported dimension {0}")]
    Dimension(usize),
    #[error("{what} has {got} entries, expected {expected}")]
    TableShape { what: &'static str, got: usize, expected: usize },
    #[error("{what} {index} out of range (limit {limit})")]
    Location { what: &'static str, index: usize, limit: usize },
    #[error("coefficients must be finite")]
    NonFinite,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Shift terms on `qubits` (most significant first). Term `m` couples
/// neighbors across a carry of `m` bits; term 1 is X on the last qubit.
pub fn shift_on(qubits: &[usize]) -> Result<Vec<Term>, FdError> {
    let q = qubits.len();
    if q == 0 {
        return Err(FdError::TooFewQubits { min: 1, got: 0 });
    }
    (1..=q)
        .map(|m| {
            let head = q - m;
            if m == 1 {
                return Ok(Term::real(1.0, [(qubits[head], Symbol::X)])?);
            }
            let factors = std::iter::once((qubits[head], Symbol::Raise))
                .chain(qubits[head + 1..].iter().map(|&k| (k, Symbol::Lower)));
            Ok(Term::hermitized(c(1.0), factors)?)
        })
        .collect()
}

/// First-neighbor adjacency on `q` qubits as `q` terms.
pub fn shift_operator(q: usize) -> Result<Vec<Term>, FdError> {
    shift_on(&(0..q).collect::<Vec<_>>())
}

/// Shift-by-two adjacency: the shift operator on the upper `q-1` qubits.
pub fn second_neighbor_terms(q: usize) -> Result<Vec<Term>, FdError> {
    if q < 2 {
        return Err(FdError::TooFewQubits { min: 2, got: q });
    }
    shift_on(&(0..q - 1).collect::<Vec<_>>())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub node_qubits: usize,
    pub line_qubits: usize,
    pub layer_qubits: usize,
}

impl GridSpec {
    pub fn line(q: usize) -> Self {
        GridSpec {
            node_qubits: q,
            line_qubits: 0,
            layer_qubits: 0,
        }
    }

    pub fn plane(q: usize, line_qubits: usize) -> Self {
        GridSpec {
            node_qubits: q,
            line_qubits,
            layer_qubits: 0,
        }
    }

    pub fn volume(q: usize, line_qubits: usize, layer_qubits: usize) -> Self {
        GridSpec {
            node_qubits: q,
            line_qubits,
            layer_qubits,
        }
    }

    /// `d`-dimensional grid with `2^q` nodes along every axis.
    pub fn cube(d: usize, q: usize) -> Result<Self, FdError> {
        match d {
            1 => Ok(GridSpec::line(q)),
            2 => Ok(GridSpec::plane(q, q)),
            3 => Ok(GridSpec::volume(q, q, q)),
            _ => Err(FdError::Dimension(d)),
        }
    }

    pub fn dimension(&self) -> usize {
        if self.layer_qubits > 0 {
            3
        } else if self.line_qubits > 0 {
            2
        } else {
            1
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.node_qubits + self.line_qubits + self.layer_qubits
    }

    pub fn nodes_per_line(&self) -> usize {
        1 << self.node_qubits
    }

    pub fn lines_per_layer(&self) -> usize {
        1 << self.line_qubits
    }

    pub fn layers(&self) -> usize {
        1 << self.layer_qubits
    }

    /// Total number of lines across all layers.
    pub fn lines(&self) -> usize {
        self.lines_per_layer() * self.layers()
    }

    fn layer_register(&self) -> Vec<usize> {
        (0..self.layer_qubits).collect()
    }

    fn line_register(&self) -> Vec<usize> {
        (self.layer_qubits..self.layer_qubits + self.line_qubits).collect()
    }

    fn node_register(&self) -> Vec<usize> {
        let s = self.layer_qubits + self.line_qubits;
        (s..s + self.node_qubits).collect()
    }

    /// Basis index of node `i` on line `j` of layer `k`.
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k << (self.line_qubits + self.node_qubits)) | (j << self.node_qubits) | i
    }
}

/// Coefficients of the first-neighbor stencil, line by line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientTable {
    /// Diagonal per global line (`layer * lines_per_layer + line`).
    pub diagonal: Vec<f64>,
    /// In-line neighbor coupling per global line.
    pub neighbor: Vec<f64>,
    /// Coupling between adjacent lines, one value per layer.
    pub inter_line: Vec<f64>,
    /// Coupling between adjacent layers, one value per line position.
    pub inter_layer: Vec<f64>,
}

impl CoefficientTable {
    pub fn uniform(grid: &GridSpec, diagonal: f64, neighbor: f64) -> Self {
        CoefficientTable {
            diagonal: vec![diagonal; grid.lines()],
            neighbor: vec![neighbor; grid.lines()],
            inter_line: if grid.line_qubits > 0 { vec![neighbor; grid.layers()] } else { Vec::new() },
            inter_layer: if grid.layer_qubits > 0 {
                vec![neighbor; grid.lines_per_layer()]
            } else {
                Vec::new()
            },
        }
    }

    fn check(&self, grid: &GridSpec) -> Result<(), FdError> {
        let shape = [
            ("diagonal", self.diagonal.len(), grid.lines()),
            ("neighbor", self.neighbor.len(), grid.lines()),
            ("inter_line", self.inter_line.len(), if grid.line_qubits > 0 { grid.layers() } else { 0 }),
            (
                "inter_layer",
                self.inter_layer.len(),
                if grid.layer_qubits > 0 { grid.lines_per_layer() } else { 0 },
            ),
        ];
        for (what, got, expected) in shape {
            if got != expected {
                return Err(FdError::TableShape { what, got, expected });
            }
        }
        let all = self.diagonal.iter().chain(&self.neighbor).chain(&self.inter_line).chain(&self.inter_layer);
        if all.into_iter().any(|x| !x.is_finite()) {
            return Err(FdError::NonFinite);
        }
        Ok(())
    }
}

/// Unit-step Laplacian stencil: diagonal `-2d`, neighbors 1.
pub fn laplacian_coefficients(dimension: usize) -> Result<(f64, f64), FdError> {
    match dimension {
        1..=3 => Ok((-2.0 * dimension as f64, 1.0)),
        d => Err(FdError::Dimension(d)),
    }
}

/// Extra terms on top of the stencil.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum BoundaryOverride {
    /// Matrix entries `(row, col)` and `(col, row)` set to `value`.
    ComponentSet { row: usize, col: usize, value: f64 },
    /// Couples the first and last node of a global line with `value`.
    PeriodicWrap { line: usize, value: f64 },
    /// Adds `value` times the shift-by-two adjacency on a global line.
    SecondNeighbor { line: usize, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdProblem {
    pub grid: GridSpec,
    pub coefficients: CoefficientTable,
    pub overrides: Vec<BoundaryOverride>,
}

impl FdProblem {
    pub fn new(grid: GridSpec, coefficients: CoefficientTable) -> Self {
        FdProblem {
            grid,
            coefficients,
            overrides: Vec::new(),
        }
    }

    pub fn laplacian(grid: GridSpec) -> Result<Self, FdError> {
        let (d, n) = laplacian_coefficients(grid.dimension())?;
        Ok(FdProblem::new(grid, CoefficientTable::uniform(&grid, d, n)))
    }
}

fn prefix(qubits: &[usize], value: usize) -> Vec<(usize, Symbol)> {
    let w = qubits.len();
    qubits
        .iter()
        .enumerate()
        .map(|(p, &q)| (q, if value >> (w - 1 - p) & 1 == 1 { Symbol::Num } else { Symbol::Hole }))
        .collect()
}

/// `coef * pre (x) term`, where `pre` is a list of number factors.
fn keyed(term: &Term, pre: &[(usize, Symbol)], coef: f64) -> Result<Term, FdError> {
    let mut t = term.clone();
    for &(q, s) in pre {
        t = t.with_factor(q, s)?;
    }
    Ok(t.with_coefficient(t.coefficient() * coef))
}

fn all_equal(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] == w[1])
}

/// Stencil value at a matrix position, used to turn `ComponentSet` into a delta.
fn stencil_entry(p: &FdProblem, row: usize, col: usize) -> f64 {
    let g = &p.grid;
    let t = &p.coefficients;
    let split = |x: usize| {
        let i = x & (g.nodes_per_line() - 1);
        let j = (x >> g.node_qubits) & (g.lines_per_layer() - 1);
        let k = x >> (g.node_qubits + g.line_qubits);
        (i, j, k)
    };
    let (i1, j1, k1) = split(row);
    let (i2, j2, k2) = split(col);
    let line = k1 * g.lines_per_layer() + j1;
    let d = |a: usize, b: usize| a.abs_diff(b);
    match (d(i1, i2), d(j1, j2), d(k1, k2)) {
        (0, 0, 0) => t.diagonal[line],
        (1, 0, 0) => t.neighbor[line],
        (0, 1, 0) => t.inter_line[k1],
        (0, 0, 1) => t.inter_layer[j1],
        _ => 0.0,
    }
}

/// Basis-state transition `|row><col|` (+ h.c. off the diagonal) as one term.
pub fn component_term(num_qubits: usize, row: usize, col: usize, value: f64) -> Result<Term, FdError> {
    let bit = |x: usize, q: usize| x >> (num_qubits - 1 - q) & 1 == 1;
    let factors = (0..num_qubits).map(|q| {
        let s = match (bit(row, q), bit(col, q)) {
            (false, false) => Symbol::Hole,
            (true, true) => Symbol::Num,
            (true, false) => Symbol::Raise,
            (false, true) => Symbol::Lower,
        };
        (q, s)
    });
    if row == col {
        Ok(Term::real(value, factors)?)
    } else {
        Ok(Term::hermitized(c(value), factors)?)
    }
}

/// Operator expression of the stencil plus overrides.
pub fn assemble(p: &FdProblem) -> Result<HamiltonianExpr, FdError> {
    let g = &p.grid;
    if g.node_qubits == 0 {
        return Err(FdError::TooFewQubits { min: 1, got: 0 });
    }
    let t = &p.coefficients;
    t.check(g)?;
    let n = g.num_qubits();
    let nodes = g.node_register();
    let lines = g.line_register();
    let layers = g.layer_register();
    let sel: Vec<usize> = layers.iter().chain(&lines).copied().collect();
    let shift = shift_on(&nodes)?;
    let mut out = HamiltonianExpr::zero(n);

    // per-line blocks
    let identity = Term::real(1.0, [])?;
    if all_equal(&t.diagonal) && all_equal(&t.neighbor) {
        out.push(keyed(&identity, &[], t.diagonal[0])?)?;
        for s in &shift {
            out.push(keyed(s, &[], t.neighbor[0])?)?;
        }
    } else {
        for line in 0..g.lines() {
            let pre = prefix(&sel, line);
            out.push(keyed(&identity, &pre, t.diagonal[line])?)?;
            for s in &shift {
                out.push(keyed(s, &pre, t.neighbor[line])?)?;
            }
        }
    }
    if !lines.is_empty() {
        let hop = shift_on(&lines)?;
        if all_equal(&t.inter_line) {
            for s in &hop {
                out.push(keyed(s, &[], t.inter_line[0])?)?;
            }
        } else {
            for (k, &a) in t.inter_line.iter().enumerate() {
                let pre = prefix(&layers, k);
                for s in &hop {
                    out.push(keyed(s, &pre, a)?)?;
                }
            }
        }
    }
    if !layers.is_empty() {
        let hop = shift_on(&layers)?;
        if all_equal(&t.inter_layer) {
            for s in &hop {
                out.push(keyed(s, &[], t.inter_layer[0])?)?;
            }
        } else {
            for (j, &a) in t.inter_layer.iter().enumerate() {
                let pre = prefix(&lines, j);
                for s in &hop {
                    out.push(keyed(s, &pre, a)?)?;
                }
            }
        }
    }

    for o in &p.overrides {
        match *o {
            BoundaryOverride::ComponentSet { row, col, value } => {
                let dim = 1usize << n;
                for (what, x) in [("row", row), ("col", col)] {
                    if x >= dim {
                        return Err(FdError::Location { what, index: x, limit: dim });
                    }
                }
                let delta = value - stencil_entry(p, row, col);
                if delta != 0.0 {
                    out.push(component_term(n, row, col, delta)?)?;
                }
            }
            BoundaryOverride::PeriodicWrap { line, value } => {
                check_line(g, line)?;
                if g.node_qubits == 1 {
                    // the wrap pair is already the neighbor pair
                    out.push(keyed(&Term::real(1.0, [(nodes[0], Symbol::X)])?, &prefix(&sel, line), value)?)?;
                } else {
                    let wrap = Term::hermitized(c(1.0), nodes.iter().map(|&q| (q, Symbol::Lower)))?;
                    out.push(keyed(&wrap, &prefix(&sel, line), value)?)?;
                }
            }
            BoundaryOverride::SecondNeighbor { line, value } => {
                check_line(g, line)?;
                if g.node_qubits < 2 {
                    return Err(FdError::TooFewQubits {
                        min: 2,
                        got: g.node_qubits,
                    });
                }
                for s in shift_on(&nodes[..nodes.len() - 1])? {
                    out.push(keyed(&s, &prefix(&sel, line), value)?)?;
                }
            }
        }
    }
    Ok(out)
}

fn check_line(g: &GridSpec, line: usize) -> Result<(), FdError> {
    if line >= g.lines() {
        return Err(FdError::Location {
            what: "line",
            index: line,
            limit: g.lines(),
        });
    }
    Ok(())
}

/// Coefficients of the two-line boundary example matrix.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct BoundaryCoefficients {
    pub b11: f64,
    pub b12: f64,
    pub b21: f64,
    pub b22: f64,
    pub bi1: f64,
    pub bi2: f64,
    pub bj12: f64,
    pub b124: f64,
    pub bii: f64,
}

/// The 8x8 boundary matrix on three qubits (line qubit first).
pub fn boundary_matrix_b(b: &BoundaryCoefficients) -> Result<HamiltonianExpr, FdError> {
    use Symbol::{Hole as O, Lower as S, Num as N, X};
    let plain = |v: f64, f: [Symbol; 3]| Term::real(v, f.into_iter().enumerate().filter(|(_, s)| *s != Symbol::Id));
    let herm = |v: f64, f: [Symbol; 3]| Term::hermitized(c(v), f.into_iter().enumerate());
    let terms = vec![
        plain(b.b11, [O, O, O])?,
        plain(b.b12, [O, N, N])?,
        plain(b.b21, [N, O, O])?,
        plain(b.b22, [N, N, N])?,
        herm(b.bi1, [O, S, S])?,
        herm(b.bi2, [N, S, S])?,
        herm(b.bj12, [S, S, S])?,
        plain(b.b124, [O, X, N])?,
        plain(b.bii, [N, X, Symbol::Id])?,
    ];
    let terms = terms.into_iter().filter(|t| t.coefficient().norm() != 0.0).collect();
    Ok(HamiltonianExpr::new(3, terms)?)
}

/// Sum of shift-term supports, `(q^2 + q)/2`.
pub fn shift_support_total(q: usize) -> Result<usize, FdError> {
    Ok(shift_operator(q)?.iter().map(|t| t.factors().len()).sum())
}
