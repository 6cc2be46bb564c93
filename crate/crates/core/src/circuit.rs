// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate vocabulary, circuits and circuit metrics.
//!
//! Multi-controlled gates are first-class: a [`ControlKey`] is an arbitrary
//! 0/1 pattern over control qubits and a keyed gate acts on its targets only
//! on that pattern. Their decomposition into two-qubit gates is a counting
//! concern (see `hubo::CountModel`), not an IR pass.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("qubit {index} out of range for {num_qubits} qubits")]
    OutOfRange { index: usize, num_qubits: usize },
    #[error("qubit {0} used twice by one gate")]
    Overlap(usize),
    #[error("{0} needs a non-empty control key")]
    MissingKey(&'static str),
    #[error("{0} takes {1} target(s), got {2}")]
    Arity(&'static str, usize, usize),
    #[error("empty qubit sequence")]
    Empty,
    #[error("states are not bitwise complements on the same qubits")]
    NotComplementary,
    #[error("key is empty after reducing the state pair")]
    DegenerateKey,
}

/// Control pattern: qubit index to required bit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ControlKey(BTreeMap<usize, bool>);

impl ControlKey {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: impl IntoIterator<Item = (usize, bool)>) -> Self {
        ControlKey(bits.into_iter().collect())
    }

    /// Pattern written as a bit string over `qubits`, e.g. `("1001", [0, 1, 2, 6])`.
    pub fn from_str_bits(bits: &str, qubits: &[usize]) -> Self {
        assert_eq!(bits.len(), qubits.len(), "bit string length must match qubit list");
        ControlKey(qubits.iter().zip(bits.chars()).map(|(&q, ch)| (q, ch == '1')).collect())
    }

    pub fn insert(&mut self, q: usize, bit: bool) {
        self.0.insert(q, bit);
    }

    pub fn get(&self, q: usize) -> Option<bool> {
        self.0.get(&q).copied()
    }

    pub fn remove(&mut self, q: usize) -> Option<bool> {
        self.0.remove(&q)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0.contains_key(&q)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.0.iter().map(|(&q, &b)| (q, b))
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn complement(&self) -> ControlKey {
        ControlKey(self.0.iter().map(|(&q, &b)| (q, !b)).collect())
    }

    pub fn union(&self, other: &ControlKey) -> ControlKey {
        let mut m = self.0.clone();
        m.extend(other.0.iter().map(|(&q, &b)| (q, b)));
        ControlKey(m)
    }

    /// Bit string in increasing qubit order.
    pub fn bit_string(&self) -> String {
        self.0.values().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for ControlKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (q, b)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}:{}", u8::from(b))?;
        }
        f.write_str("}")
    }
}

/// Rotations follow `RX(t) = exp(-i t X / 2)` (RY, RZ alike) and
/// `Phase(t) = diag(1, e^{it})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    H,
    S,
    Sdg,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    Phase(f64),
    /// targets = [control, target]
    Cx,
    Cz,
    GlobalPhase(f64),
    KeyedX,
    KeyedZ,
    KeyedPhase(f64),
    KeyedRx(f64),
    KeyedRy(f64),
    Swap,
    Fswap,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "Sdg",
            GateKind::Rx(_) => "RX",
            GateKind::Ry(_) => "RY",
            GateKind::Rz(_) => "RZ",
            GateKind::Phase(_) => "Phase",
            GateKind::Cx => "CX",
            GateKind::Cz => "CZ",
            GateKind::GlobalPhase(_) => "GlobalPhase",
            GateKind::KeyedX => "KeyedX",
            GateKind::KeyedZ => "KeyedZ",
            GateKind::KeyedPhase(_) => "KeyedPhase",
            GateKind::KeyedRx(_) => "KeyedRX",
            GateKind::KeyedRy(_) => "KeyedRY",
            GateKind::Swap => "SWAP",
            GateKind::Fswap => "FSWAP",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Rx(t)
            | GateKind::Ry(t)
            | GateKind::Rz(t)
            | GateKind::Phase(t)
            | GateKind::GlobalPhase(t)
            | GateKind::KeyedPhase(t)
            | GateKind::KeyedRx(t)
            | GateKind::KeyedRy(t) => Some(t),
            _ => None,
        }
    }

    pub fn with_angle(&self, t: f64) -> GateKind {
        match self {
            GateKind::Rx(_) => GateKind::Rx(t),
            GateKind::Ry(_) => GateKind::Ry(t),
            GateKind::Rz(_) => GateKind::Rz(t),
            GateKind::Phase(_) => GateKind::Phase(t),
            GateKind::GlobalPhase(_) => GateKind::GlobalPhase(t),
            GateKind::KeyedPhase(_) => GateKind::KeyedPhase(t),
            GateKind::KeyedRx(_) => GateKind::KeyedRx(t),
            GateKind::KeyedRy(_) => GateKind::KeyedRy(t),
            k => *k,
        }
    }

    pub fn is_keyed(&self) -> bool {
        matches!(
            self,
            GateKind::KeyedX | GateKind::KeyedZ | GateKind::KeyedPhase(_) | GateKind::KeyedRx(_) | GateKind::KeyedRy(_)
        )
    }

    /// Parametrized gates other than the global phase.
    pub fn is_rotation(&self) -> bool {
        self.angle().is_some() && !matches!(self, GateKind::GlobalPhase(_))
    }

    fn arity(&self) -> usize {
        match self {
            GateKind::GlobalPhase(_) => 0,
            GateKind::Cx | GateKind::Cz | GateKind::Swap | GateKind::Fswap => 2,
            _ => 1,
        }
    }

    pub fn from_name(name: &str, angle: Option<f64>) -> Option<GateKind> {
        let t = angle.unwrap_or(0.0);
        Some(match name {
            "X" => GateKind::X,
            "H" => GateKind::H,
            "S" => GateKind::S,
            "Sdg" => GateKind::Sdg,
            "RX" => GateKind::Rx(t),
            "RY" => GateKind::Ry(t),
            "RZ" => GateKind::Rz(t),
            "Phase" => GateKind::Phase(t),
            "CX" => GateKind::Cx,
            "CZ" => GateKind::Cz,
            "GlobalPhase" => GateKind::GlobalPhase(t),
            "KeyedX" => GateKind::KeyedX,
            "KeyedZ" => GateKind::KeyedZ,
            "KeyedPhase" => GateKind::KeyedPhase(t),
            "KeyedRX" => GateKind::KeyedRx(t),
            "KeyedRY" => GateKind::KeyedRy(t),
            "SWAP" => GateKind::Swap,
            "FSWAP" => GateKind::Fswap,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub key: ControlKey,
}

/// Local action of a gate: `matrix` acts on `targets` (first target most
/// significant) whenever every `(qubit, bit)` in `controls` matches.
pub struct LocalAction {
    pub controls: Vec<(usize, bool)>,
    pub targets: Vec<usize>,
    /// Row-major, 2x2 or 4x4; a single entry for a global phase.
    pub matrix: Vec<C64>,
}

fn cis(t: f64) -> C64 {
    Complex64::from_polar(1.0, t)
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>, key: ControlKey) -> Result<Gate, CircuitError> {
        let g = Gate { kind, targets, key };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<(), CircuitError> {
        let arity = self.kind.arity();
        if self.targets.len() != arity {
            return Err(CircuitError::Arity(self.kind.name(), arity, self.targets.len()));
        }
        if self.kind.is_keyed() && self.key.is_empty() {
            return Err(CircuitError::MissingKey(self.kind.name()));
        }
        let mut seen = BTreeSet::new();
        for q in self.targets.iter().copied().chain(self.key.qubits()) {
            if !seen.insert(q) {
                return Err(CircuitError::Overlap(q));
            }
        }
        Ok(())
    }

    fn one(kind: GateKind, q: usize) -> Gate {
        Gate {
            kind,
            targets: vec![q],
            key: ControlKey::new(),
        }
    }

    fn two(kind: GateKind, a: usize, b: usize) -> Gate {
        assert_ne!(a, b, "two-qubit gate on a single qubit");
        Gate {
            kind,
            targets: vec![a, b],
            key: ControlKey::new(),
        }
    }

    pub fn x(q: usize) -> Gate {
        Gate::one(GateKind::X, q)
    }
    pub fn h(q: usize) -> Gate {
        Gate::one(GateKind::H, q)
    }
    pub fn s(q: usize) -> Gate {
        Gate::one(GateKind::S, q)
    }
    pub fn sdg(q: usize) -> Gate {
        Gate::one(GateKind::Sdg, q)
    }
    pub fn rx(q: usize, t: f64) -> Gate {
        Gate::one(GateKind::Rx(t), q)
    }
    pub fn ry(q: usize, t: f64) -> Gate {
        Gate::one(GateKind::Ry(t), q)
    }
    pub fn rz(q: usize, t: f64) -> Gate {
        Gate::one(GateKind::Rz(t), q)
    }
    pub fn phase(q: usize, t: f64) -> Gate {
        Gate::one(GateKind::Phase(t), q)
    }
    /// Pauli Z, written as `Phase(pi)`.
    pub fn z(q: usize) -> Gate {
        Gate::phase(q, PI)
    }
    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::two(GateKind::Cx, control, target)
    }
    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Cz, a, b)
    }
    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Swap, a, b)
    }
    pub fn fswap(a: usize, b: usize) -> Gate {
        Gate::two(GateKind::Fswap, a, b)
    }
    pub fn global_phase(t: f64) -> Gate {
        Gate {
            kind: GateKind::GlobalPhase(t),
            targets: Vec::new(),
            key: ControlKey::new(),
        }
    }

    /// Keyed gate, or its plain counterpart when the key is empty.
    pub fn keyed(kind: GateKind, key: ControlKey, target: usize) -> Result<Gate, CircuitError> {
        if key.is_empty() {
            let plain = match kind {
                GateKind::KeyedX => GateKind::X,
                GateKind::KeyedZ => GateKind::Phase(PI),
                GateKind::KeyedPhase(t) => GateKind::Phase(t),
                GateKind::KeyedRx(t) => GateKind::Rx(t),
                GateKind::KeyedRy(t) => GateKind::Ry(t),
                k => k,
            };
            return Gate::new(plain, vec![target], key);
        }
        Gate::new(kind, vec![target], key)
    }

    /// Every qubit the gate touches, controls included.
    pub fn qubits(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.targets.iter().copied().chain(self.key.qubits()).collect();
        v.sort_unstable();
        v
    }

    pub fn inverse(&self) -> Gate {
        let kind = match self.kind {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            k => match k.angle() {
                Some(t) => k.with_angle(-t),
                None => k,
            },
        };
        Gate {
            kind,
            targets: self.targets.clone(),
            key: self.key.clone(),
        }
    }

    pub fn local_action(&self) -> LocalAction {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let mut controls: Vec<(usize, bool)> = self.key.iter().collect();
        let mut targets = self.targets.clone();
        let one_qubit = |t: f64, which: GateKind| -> Vec<C64> {
            let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
            match which {
                GateKind::Rx(_) | GateKind::KeyedRx(_) => vec![l * c, -i * s, -i * s, l * c],
                GateKind::Ry(_) | GateKind::KeyedRy(_) => vec![l * c, -l * s, l * s, l * c],
                GateKind::Rz(_) => vec![cis(-t / 2.0), o, o, cis(t / 2.0)],
                _ => vec![l, o, o, cis(t)],
            }
        };
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let matrix = match self.kind {
            GateKind::X | GateKind::KeyedX => vec![o, l, l, o],
            GateKind::H => vec![l * s2, l * s2, l * s2, -l * s2],
            GateKind::S => vec![l, o, o, i],
            GateKind::Sdg => vec![l, o, o, -i],
            GateKind::KeyedZ => vec![l, o, o, -l],
            k @ (GateKind::Rx(t)
            | GateKind::Ry(t)
            | GateKind::Rz(t)
            | GateKind::Phase(t)
            | GateKind::KeyedPhase(t)
            | GateKind::KeyedRx(t)
            | GateKind::KeyedRy(t)) => one_qubit(t, k),
            GateKind::Cx | GateKind::Cz => {
                controls.push((self.targets[0], true));
                targets = vec![self.targets[1]];
                if self.kind == GateKind::Cx {
                    vec![o, l, l, o]
                } else {
                    vec![l, o, o, -l]
                }
            }
            GateKind::GlobalPhase(t) => vec![cis(t)],
            GateKind::Swap | GateKind::Fswap => {
                let last = if self.kind == GateKind::Fswap { -l } else { l };
                vec![
                    l, o, o, o, //
                    o, o, l, o, //
                    o, l, o, o, //
                    o, o, o, last,
                ]
            }
        };
        LocalAction {
            controls,
            targets,
            matrix,
        }
    }
}

impl fmt::Display for Gate {
    /// `KIND targets=[..] key={q:b,..} theta=<17 significant digits>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} targets=[", self.kind.name())?;
        for (i, q) in self.targets.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str("]")?;
        if !self.key.is_empty() {
            write!(f, " key={}", self.key)?;
        }
        if let Some(t) = self.kind.angle() {
            write!(f, " theta={t:.16e}")?;
        }
        Ok(())
    }
}

/// Ordered gate list; the first gate acts first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.check()?;
        if let Some(&q) = gate.qubits().last() {
            if q >= self.num_qubits {
                return Err(CircuitError::OutOfRange {
                    index: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends every gate of `other`, which may use a narrower register.
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }

    pub fn widened(mut self, num_qubits: usize) -> Result<Circuit, CircuitError> {
        if let Some(q) = self.gates.iter().flat_map(Gate::qubits).max() {
            if q >= num_qubits {
                return Err(CircuitError::OutOfRange { index: q, num_qubits });
            }
        }
        self.num_qubits = num_qubits;
        Ok(self)
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// `times` back-to-back copies.
    pub fn repeated(&self, times: usize) -> Circuit {
        let mut gates = Vec::with_capacity(self.gates.len() * times);
        for _ in 0..times {
            gates.extend(self.gates.iter().cloned());
        }
        Circuit {
            num_qubits: self.num_qubits,
            gates,
        }
    }

    /// One gate per line in the text listing format.
    pub fn listing(&self) -> String {
        let mut s = format!("# qubits={}\n", self.num_qubits);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }
}

/// Gate counts and structure metrics.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub per_kind: BTreeMap<String, usize>,
    /// Keyed gates split by control count, e.g. `"KeyedPhase/2"`.
    pub keyed: BTreeMap<String, usize>,
    pub two_qubit_count: usize,
    /// Gates touching three or more qubits.
    pub multi_qubit_count: usize,
    pub depth: usize,
    pub rotation_count: usize,
    pub ancilla_count: usize,
}

impl CountReport {
    pub fn kind(&self, name: &str) -> usize {
        self.per_kind.get(name).copied().unwrap_or(0)
    }

    pub fn keyed_with(&self, name: &str, controls: usize) -> usize {
        self.keyed.get(&format!("{name}/{controls}")).copied().unwrap_or(0)
    }
}

/// Greedy layering depth: a gate sits one layer above the latest gate sharing
/// a qubit with it. Global phases take no layer.
pub fn depth(circuit: &Circuit) -> usize {
    let mut level = vec![0usize; circuit.num_qubits];
    let mut depth = 0;
    for g in &circuit.gates {
        let qs = g.qubits();
        if qs.is_empty() {
            continue;
        }
        let l = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for q in qs {
            level[q] = l;
        }
        depth = depth.max(l);
    }
    depth
}

pub fn count(circuit: &Circuit) -> CountReport {
    let mut r = CountReport::default();
    for g in &circuit.gates {
        *r.per_kind.entry(g.kind.name().to_string()).or_default() += 1;
        if g.kind.is_keyed() {
            *r.keyed.entry(format!("{}/{}", g.kind.name(), g.key.len())).or_default() += 1;
        }
        match g.qubits().len() {
            2 => r.two_qubit_count += 1,
            n if n > 2 => r.multi_qubit_count += 1,
            _ => {}
        }
        if g.kind.is_rotation() {
            r.rotation_count += 1;
        }
    }
    r.depth = depth(circuit);
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Topology {
    /// Linear ladder, depth k - 1.
    Chain,
    /// Pairwise pyramid, depth ceil(log2 k).
    Tree,
}

/// CX network accumulating the XOR of `qubits` onto `root` (the first qubit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityNetwork {
    /// (control, target) in application order.
    pub cx: Vec<(usize, usize)>,
    pub root: usize,
    pub topology: Topology,
}

impl ParityNetwork {
    pub fn new(qubits: &[usize], topology: Topology) -> Result<Self, CircuitError> {
        let (&root, _) = qubits.split_first().ok_or(CircuitError::Empty)?;
        let mut seen = BTreeSet::new();
        for &q in qubits {
            if !seen.insert(q) {
                return Err(CircuitError::Overlap(q));
            }
        }
        let mut cx = Vec::with_capacity(qubits.len() - 1);
        match topology {
            Topology::Chain => {
                for w in qubits.windows(2).rev() {
                    cx.push((w[1], w[0]));
                }
            }
            Topology::Tree => {
                let mut alive: Vec<usize> = qubits.to_vec();
                while alive.len() > 1 {
                    let mut next = Vec::with_capacity(alive.len().div_ceil(2));
                    for pair in alive.chunks(2) {
                        if let [keep, fold] = *pair {
                            cx.push((fold, keep));
                        }
                        next.push(pair[0]);
                    }
                    alive = next;
                }
            }
        }
        Ok(ParityNetwork { cx, root, topology })
    }

    /// The same layout with every CX reversed. It maps a complementary pair of
    /// basis states onto two states that differ only on the root.
    pub fn transposed(&self) -> ParityNetwork {
        ParityNetwork {
            cx: self.cx.iter().map(|&(c, t)| (t, c)).collect(),
            root: self.root,
            topology: self.topology,
        }
    }

    pub fn circuit(&self, num_qubits: usize) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new(num_qubits);
        for &(ctl, tgt) in &self.cx {
            c.push(Gate::cx(ctl, tgt))?;
        }
        Ok(c)
    }

    /// Classical action on a computational basis pattern.
    pub fn apply_to_bits(&self, bits: &mut ControlKey) {
        for &(ctl, tgt) in &self.cx {
            if let (Some(c), Some(t)) = (bits.get(ctl), bits.get(tgt)) {
                bits.insert(tgt, c ^ t);
            }
        }
    }
}

/// Parity network over `qubits`; returns the CX circuit and its root.
pub fn parity_network(qubits: &[usize], topology: Topology) -> Result<(Circuit, usize), CircuitError> {
    let net = ParityNetwork::new(qubits, topology)?;
    let n = qubits.iter().max().map_or(0, |&q| q + 1);
    Ok((net.circuit(n)?, net.root))
}

fn register_size(qubits: impl IntoIterator<Item = usize>) -> usize {
    qubits.into_iter().max().map_or(0, |q| q + 1)
}

/// `I - 2|key, target=1><key, target=1|`: X on the 0-keyed controls around an
/// all-ones multi-controlled Z.
pub fn keyed_z(key: &ControlKey, target: usize) -> Result<Circuit, CircuitError> {
    if key.is_empty() {
        return Err(CircuitError::MissingKey("keyed_z"));
    }
    if key.contains(target) {
        return Err(CircuitError::Overlap(target));
    }
    let n = register_size(key.qubits().chain(std::iter::once(target)));
    let mut c = Circuit::new(n);
    let zeros: Vec<usize> = key.iter().filter(|&(_, b)| !b).map(|(q, _)| q).collect();
    for &q in &zeros {
        c.push(Gate::x(q))?;
    }
    if key.len() == 1 {
        let (q, _) = key.iter().next().expect("one control");
        c.push(Gate::cz(q, target))?;
    } else {
        let ones = ControlKey::from_bits(key.qubits().map(|q| (q, true)));
        c.push(Gate::new(GateKind::KeyedZ, vec![target], ones)?)?;
    }
    for &q in &zeros {
        c.push(Gate::x(q))?;
    }
    Ok(c)
}

/// `I - 2|s><s|` for a full basis pattern `s` (the target is its last qubit).
pub fn reflect_state(state: &ControlKey) -> Result<Circuit, CircuitError> {
    let mut key = state.clone();
    let (target, bit) = {
        let (q, b) = key.iter().last().ok_or(CircuitError::Empty)?;
        (q, b)
    };
    key.remove(target);
    let n = register_size(state.qubits());
    let mut c = Circuit::new(n);
    if !bit {
        c.push(Gate::x(target))?;
    }
    if key.is_empty() {
        c.push(Gate::z(target))?;
    } else {
        c.append(&keyed_z(&key, target)?)?;
    }
    if !bit {
        c.push(Gate::x(target))?;
    }
    Ok(c)
}

/// Reduction of a complementary pair: network, root, the pattern shared by
/// both images on the non-root qubits, and the root bit of `a`'s image.
pub struct PairReduction {
    pub network: ParityNetwork,
    pub root: usize,
    pub shared: ControlKey,
    pub root_bit_of_a: bool,
}

pub fn reduce_pair(a: &ControlKey, b: &ControlKey, topology: Topology) -> Result<PairReduction, CircuitError> {
    if a.is_empty() || a.complement() != *b {
        return Err(CircuitError::NotComplementary);
    }
    let qubits: Vec<usize> = a.qubits().collect();
    let network = ParityNetwork::new(&qubits, topology)?.transposed();
    let mut image = a.clone();
    network.apply_to_bits(&mut image);
    let root = network.root;
    let root_bit_of_a = image.remove(root).expect("root is in the pattern");
    Ok(PairReduction {
        network,
        root,
        shared: image,
        root_bit_of_a,
    })
}

/// `I - 2(|a><a| + |b><b|)` for complementary `a`, `b`.
pub fn keyed_double_z(a: &ControlKey, b: &ControlKey) -> Result<Circuit, CircuitError> {
    let red = reduce_pair(a, b, Topology::Chain)?;
    if red.shared.is_empty() {
        return Err(CircuitError::DegenerateKey);
    }
    let n = register_size(a.qubits());
    let basis = red.network.circuit(n)?;
    let mut c = basis.clone();
    c.append(&reflect_state(&red.shared)?)?;
    c.append(&basis.inverse())?;
    Ok(c)
}

/// `I - |a><a| - |b><b| + |a><b| + |b><a|` for complementary `a`, `b`.
pub fn keyed_x_between(a: &ControlKey, b: &ControlKey) -> Result<Circuit, CircuitError> {
    let red = reduce_pair(a, b, Topology::Chain)?;
    let n = register_size(a.qubits());
    let basis = red.network.circuit(n)?;
    let mut c = basis.clone();
    c.push(Gate::keyed(GateKind::KeyedX, red.shared.clone(), red.root)?)?;
    c.append(&basis.inverse())?;
    Ok(c)
}

/// `I - |a><a| - |b><b| + i s (|b><a| - |a><b|)` with `s = +1` when the root
/// bit of `a`'s image is 0 and `-1` otherwise (see [`reduce_pair`]).
pub fn keyed_y_between(a: &ControlKey, b: &ControlKey) -> Result<(Circuit, f64), CircuitError> {
    let red = reduce_pair(a, b, Topology::Chain)?;
    let n = register_size(a.qubits());
    let basis = red.network.circuit(n)?;
    let mut c = basis.clone();
    c.push(Gate::sdg(red.root))?;
    c.push(Gate::keyed(GateKind::KeyedX, red.shared.clone(), red.root)?)?;
    c.push(Gate::s(red.root))?;
    c.append(&basis.inverse())?;
    Ok((c, if red.root_bit_of_a { -1.0 } else { 1.0 }))
}
