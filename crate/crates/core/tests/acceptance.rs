// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::panic;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use scbsynth::algebra::{
    hermitize_nonhermitian, raw_pauli_product_count, to_pauli_sum, Formalism, HamiltonianExpr, Symbol, Term,
};
use scbsynth::circuit::{count, depth, Circuit, GateKind, ParityNetwork, Topology};
use scbsynth::direct::{synthesize_direct, trotter_error_of_split, DirectSynthesisOptions};
use scbsynth::fd::{
    assemble, laplacian_coefficients, shift_operator, CoefficientTable, FdProblem, GridSpec,
};
use scbsynth::fermion::{jordan_wigner, one_body_term, two_body_term};
use scbsynth::hubo::{cost_of, crossover_threshold, synthesize_hubo, usual_fragments, CountModel, HuboProblem};
use scbsynth::lcu::be_term;
use scbsynth::sim::{self, DenseOperator, StateVector};
use scbsynth::usual::{pauli_string_evolution, trotter_product, Strategy, TrotterPlan};
use scbsynth::C64;

type Outcome = Result<String, String>;

fn cz(re: f64) -> C64 {
    Complex64::new(re, 0.0)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

const TOKENS: [Symbol; 8] = [
    Symbol::Id,
    Symbol::X,
    Symbol::Y,
    Symbol::Z,
    Symbol::Num,
    Symbol::Hole,
    Symbol::Lower,
    Symbol::Raise,
];

fn random_term(rng: &mut StdRng, n: usize, pool: &[Symbol]) -> Term {
    loop {
        let mut f: Vec<(usize, Symbol)> = (0..n)
            .map(|q| (q, pool[rng.random_range(0..pool.len())]))
            .filter(|(_, s)| *s != Symbol::Id)
            .collect();
        if f.is_empty() {
            continue;
        }
        // force the top qubit into the support so the register width is n
        if f.last().map(|x| x.0) != Some(n - 1) {
            f.push((n - 1, pool[rng.random_range(1..pool.len())]));
        }
        let z = rng.random_range(0.2..1.5) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        return Term::hermitized(cz(z), f).unwrap();
    }
}

fn circuit_vs_expm(c: &Circuit, h: &DenseOperator, theta: f64) -> f64 {
    let u = sim::circuit_unitary(&c.clone().widened(h.num_qubits()).unwrap()).unwrap();
    let e = sim::expm_hermitian(h, theta).unwrap();
    sim::phase_distance(&u, &e).unwrap()
}

/// Tensor product with the first factor as the most significant qubit.
fn kron_all(ms: &[DMatrix<C64>]) -> DMatrix<C64> {
    ms.iter()
        .fold(DMatrix::from_element(1, 1, cz(1.0)), |acc, m| acc.kronecker(m))
}

fn m2(a: [[f64; 2]; 2]) -> DMatrix<C64> {
    DMatrix::from_fn(2, 2, |r, c| cz(a[r][c]))
}

fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

// -------- the 15-qubit flagship term --------

const FLAGSHIP: &str = "n0 o1 o2 X3 Y4 sd5 n6 s7 s8 s9 sd10 Y11 Z12 sd13 s14 + h.c.";
const KEY_QUBITS: [usize; 4] = [0, 1, 2, 6];
const KEY_BITS: [u8; 4] = [1, 0, 0, 1];
const PAIR_QUBITS: [usize; 7] = [5, 7, 8, 9, 10, 13, 14];
const STATE_A: [u8; 7] = [0, 1, 1, 1, 0, 0, 1];
const STATE_B: [u8; 7] = [1, 0, 0, 0, 1, 1, 0];
const PAULIS: [(usize, char); 4] = [(3, 'X'), (4, 'Y'), (11, 'Y'), (12, 'Z')];

fn flagship() -> Term {
    scbsynth::text::parse(FLAGSHIP).unwrap().terms()[0].clone()
}

fn bit(x: usize, q: usize, n: usize) -> u8 {
    ((x >> (n - 1 - q)) & 1) as u8
}

fn set(x: usize, q: usize, n: usize, b: u8) -> usize {
    let m = 1 << (n - 1 - q);
    if b == 1 {
        x | m
    } else {
        x & !m
    }
}

/// `H|x>` for the flagship term, written out by hand: zero unless the
/// number key matches and the pair register holds one of the two states.
fn flagship_action(x: usize) -> Option<(C64, usize)> {
    let n = 15;
    if KEY_QUBITS.iter().zip(KEY_BITS).any(|(&q, b)| bit(x, q, n) != b) {
        return None;
    }
    let pair: Vec<u8> = PAIR_QUBITS.iter().map(|&q| bit(x, q, n)).collect();
    let target = if pair == STATE_A {
        STATE_B
    } else if pair == STATE_B {
        STATE_A
    } else {
        return None;
    };
    let mut y = x;
    for (&q, b) in PAIR_QUBITS.iter().zip(target) {
        y = set(y, q, n, b);
    }
    let mut amp = cz(1.0);
    for (q, p) in PAULIS {
        let b = bit(x, q, n);
        match p {
            'X' => y ^= 1 << (n - 1 - q),
            'Y' => {
                y ^= 1 << (n - 1 - q);
                amp *= if b == 0 { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) };
            }
            _ => {
                if b == 1 {
                    amp = -amp;
                }
            }
        }
    }
    Some((amp, y))
}

fn run_circuit(c: &Circuit, x: usize) -> Vec<C64> {
    let mut sv = StateVector::basis(c.num_qubits(), x).unwrap();
    sim::apply_circuit(c, &mut sv).unwrap();
    sv.amplitudes().to_vec()
}

// -------- criteria --------

fn c1_direct_exactness() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for case in 0..500 {
        let n = rng.random_range(2..=8);
        let t = random_term(&mut rng, n, &TOKENS);
        let theta = rng.random_range(-2.0..2.0);
        let c = synthesize_direct(&t, &DirectSynthesisOptions::new(theta)).map_err(|e| format!("{t}: {e}"))?;
        let d = circuit_vs_expm(&c, &t.dense(n).unwrap(), theta);
        worst = worst.max(d);
        ensure(d < 1e-10, format!("case {case} `{t}` distance {d:.3e}"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, format!("took {secs:.1}s"))?;
    Ok(format!("500 terms, worst distance {worst:.2e}, {secs:.1}s"))
}

fn c2_flagship_statevector() -> Outcome {
    let start = Instant::now();
    let n = 15;
    let term = flagship();
    let theta = 0.43;
    let mut report = Vec::new();
    for topo in [Topology::Chain, Topology::Tree] {
        let c = synthesize_direct(&term, &DirectSynthesisOptions::new(theta).with_topology(topo)).map_err(|e| e.to_string())?;
        ensure(c.num_qubits() == n, "width")?;
        // key state: number key, pair register in state A, Pauli qubits zero
        let mut x0 = 0usize;
        for (&q, b) in KEY_QUBITS.iter().zip(KEY_BITS) {
            x0 = set(x0, q, n, b);
        }
        for (&q, b) in PAIR_QUBITS.iter().zip(STATE_A) {
            x0 = set(x0, q, n, b);
        }
        let (a, y) = flagship_action(x0).expect("key state is active");
        let out = run_circuit(&c, x0);
        ensure((out[x0].norm() - theta.cos()).abs() < 1e-10, format!("|<x|U|x>| = {}", out[x0].norm()))?;
        ensure((out[y].norm() - theta.sin()).abs() < 1e-10, format!("|<y|U|x>| = {}", out[y].norm()))?;
        // full analytic two-state rotation, up to the circuit's global phase
        let phase = out[x0] / cz(theta.cos());
        let mut want = vec![cz(0.0); 1 << n];
        want[x0] = cz(theta.cos());
        want[y] = Complex64::new(0.0, -theta.sin()) * a;
        let d = out.iter().zip(&want).map(|(g, w)| (g - phase * w).norm()).fold(0.0, f64::max);
        ensure(d < 1e-10, format!("key-state rotation off by {d:.3e}"))?;
        // partner state rotates back
        let back = run_circuit(&c, y);
        ensure((back[x0].norm() - theta.sin()).abs() < 1e-10, "partner amplitude")?;
        // 64 random inactive basis states are fixed
        let mut rng = StdRng::seed_from_u64(2);
        let mut tested = 0;
        let mut worst: f64 = 0.0;
        while tested < 64 {
            let x = rng.random_range(0..1usize << n);
            if flagship_action(x).is_some() {
                continue;
            }
            let out = run_circuit(&c, x);
            let d = out
                .iter()
                .enumerate()
                .map(|(i, g)| (g - if i == x { phase } else { cz(0.0) }).norm())
                .fold(0.0, f64::max);
            worst = worst.max(d);
            tested += 1;
        }
        ensure(worst < 1e-12, format!("{topo:?}: inactive state moved by {worst:.3e}"))?;
        report.push(format!("{topo:?} ok"));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, format!("took {secs:.1}s"))?;
    Ok(format!("{}, {secs:.2}s", report.join(", ")))
}

fn c3_pauli_blowup() -> Outcome {
    let term = flagship();
    let strings = to_pauli_sum(&term);
    let raw = raw_pauli_product_count(&term);
    // truncation to the first eight qubits keeps all four families
    let small = scbsynth::text::parse("n0 o1 o2 X3 Y4 sd5 n6 s7 + h.c.").unwrap().terms()[0].clone();
    let sum = to_pauli_sum(&small);
    let mut acc = DMatrix::<C64>::zeros(256, 256);
    for s in &sum {
        acc += s.dense(8).unwrap().matrix();
    }
    let d = max_diff(&acc, small.dense(8).unwrap().matrix());
    ensure(d < 1e-12, format!("8-qubit round trip off by {d:.3e}"))?;
    ensure(
        strings.len() == 2048,
        format!(
            "expected 2048 strings, got {} merged ({raw} raw products); round trip {d:.1e}",
            strings.len()
        ),
    )?;
    Ok(format!("2048 strings, round trip {d:.1e}"))
}

type Inventory = Vec<(String, usize, i64)>;

/// Gate kind, control count and angle in units of 2^-20 theta, global phase dropped.
fn direct_inventory(c: &Circuit, theta: f64) -> Result<Inventory, String> {
    let mut v = Vec::new();
    for g in c.gates() {
        if matches!(g.kind, GateKind::GlobalPhase(_)) {
            continue;
        }
        let a = g.kind.angle().unwrap_or(0.0) / theta;
        let scaled = a * f64::from(1 << 20);
        if scaled.fract() != 0.0 {
            return Err(format!("angle {a} is not a dyadic multiple of theta"));
        }
        v.push((g.kind.name().to_string(), g.key.len(), scaled as i64));
    }
    v.sort();
    Ok(v)
}

fn units(x: f64) -> i64 {
    (x * f64::from(1 << 20)) as i64
}

fn inv(items: &[(&str, usize, f64, usize)]) -> Inventory {
    let mut v: Inventory = items
        .iter()
        .flat_map(|&(k, c, a, times)| std::iter::repeat_n((k.to_string(), c, units(a)), times))
        .collect();
    v.sort();
    v
}

/// (string weight, rotation angle / theta) per non-identity fragment.
fn usual_inventory(p: &HuboProblem, theta: f64) -> Result<Vec<(usize, i64)>, String> {
    let mut v = Vec::new();
    for ps in usual_fragments(p).map_err(|e| e.to_string())? {
        if ps.weight() == 0 {
            continue;
        }
        let c = pauli_string_evolution(&ps, theta).map_err(|e| e.to_string())?;
        let rz: Vec<f64> = c.gates().iter().filter_map(|g| match g.kind {
            GateKind::Rz(a) => Some(a),
            _ => None,
        }).collect();
        ensure(rz.len() == 1, "one RZ per fragment")?;
        ensure(count(&c).kind("CX") == 2 * (ps.weight() - 1), "CX ladder size")?;
        v.push((ps.weight(), units(rz[0] / theta)));
    }
    v.sort();
    Ok(v)
}

fn c4_inventories() -> Outcome {
    let theta = 0.3;
    let subsets: [&[usize]; 3] = [&[0], &[0, 1], &[0, 1, 2]];
    let problem = |f: Formalism, s: &[usize]| HuboProblem::new(s.len(), f).with(s, 1.0).unwrap();
    let mut rows = 0;

    // usual strategy, Z form: R_Z(2t), R_ZZ(2t), R_ZZZ(2t) with t = theta
    for (k, s) in subsets.iter().enumerate() {
        let got = usual_inventory(&problem(Formalism::ZForm, s), theta)?;
        ensure(got == vec![(k + 1, units(2.0))], format!("usual Z row {}: {got:?}", k + 1))?;
        rows += 1;
    }
    // usual strategy, n form. Rotation angles are twice the tabulated
    // R(t/2^k) values; the single-n row carries the sign of the expansion
    // n = (I - Z)/2, i.e. a negative angle.
    let usual_n: [Vec<(usize, f64)>; 3] = [
        vec![(1, -1.0)],
        vec![(1, -0.5), (1, -0.5), (2, 0.5)],
        vec![(1, -0.25), (1, -0.25), (1, -0.25), (2, 0.25), (2, 0.25), (2, 0.25), (3, -0.25)],
    ];
    for (k, s) in subsets.iter().enumerate() {
        let got = usual_inventory(&problem(Formalism::NForm, s), theta)?;
        let mut want: Vec<(usize, i64)> = usual_n[k].iter().map(|&(w, a)| (w, units(a))).collect();
        want.sort();
        ensure(got == want, format!("usual n row {}: {got:?} != {want:?}", k + 1))?;
        rows += 1;
    }
    // direct strategy under t = -theta
    let direct_z = [
        inv(&[("Phase", 0, 2.0, 1)]),
        inv(&[("KeyedPhase", 1, -4.0, 1), ("Phase", 0, 2.0, 2)]),
        inv(&[("KeyedPhase", 2, 8.0, 1), ("KeyedPhase", 1, -4.0, 3), ("Phase", 0, 2.0, 3)]),
    ];
    let direct_n = [
        inv(&[("Phase", 0, -1.0, 1)]),
        inv(&[("KeyedPhase", 1, -1.0, 1)]),
        inv(&[("KeyedPhase", 2, -1.0, 1)]),
    ];
    for (f, table) in [(Formalism::ZForm, &direct_z), (Formalism::NForm, &direct_n)] {
        for (k, s) in subsets.iter().enumerate() {
            let c = synthesize_hubo(&problem(f, s), theta, Strategy::Direct).map_err(|e| e.to_string())?;
            let got = direct_inventory(&c, theta)?;
            ensure(got == table[k], format!("direct {f:?} row {}: {got:?} != {:?}", k + 1, table[k]))?;
            rows += 1;
        }
    }
    ensure(rows == 12, "row count")?;
    Ok("12 rows reproduced".into())
}

fn random_hubo(rng: &mut StdRng, f: Formalism) -> HuboProblem {
    let n = rng.random_range(2..=8);
    let mut p = HuboProblem::new(n, f);
    for _ in 0..rng.random_range(1..=8) {
        let order = rng.random_range(1..=4.min(n));
        let mut vars: Vec<usize> = (0..n).collect();
        for i in 0..order {
            let j = rng.random_range(i..n);
            vars.swap(i, j);
        }
        p.add(&vars[..order], rng.random_range(-2.0..2.0)).unwrap();
    }
    p
}

fn c5_hubo_diagonal_law() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let t = 0.61;
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let f = if case % 2 == 0 { Formalism::ZForm } else { Formalism::NForm };
        let p = random_hubo(&mut rng, f);
        let n = p.num_vars();
        let direct = synthesize_hubo(&p, t, Strategy::Direct).map_err(|e| e.to_string())?;
        let usual = synthesize_hubo(&p, t, Strategy::Usual).map_err(|e| e.to_string())?;
        let ud = sim::circuit_unitary(&direct.widened(n).unwrap()).unwrap();
        let uu = sim::circuit_unitary(&usual.widened(n).unwrap()).unwrap();
        let mut global = None;
        for x in 0..1usize << n {
            let bits: Vec<bool> = (0..n).map(|q| bit(x, q, n) == 1).collect();
            let want = Complex64::from_polar(1.0, -t * cost_of(&p, &bits).unwrap());
            let got = ud.matrix()[(x, x)];
            let g = *global.get_or_insert(got / want);
            worst = worst.max((got - g * want).norm());
        }
        let off = ud.max_abs_diff(&DenseOperator::from_matrix(DMatrix::from_diagonal(&ud.matrix().diagonal())));
        ensure(off < 1e-12, format!("case {case}: off-diagonal {off:.2e}"))?;
        let d = sim::phase_distance(&ud, &uu).unwrap();
        ensure(d < 1e-10, format!("case {case}: direct vs usual {d:.2e}"))?;
    }
    ensure(worst < 1e-10, format!("diagonal law off by {worst:.3e}"))?;
    Ok(format!("20 problems, worst {worst:.2e}"))
}

fn c6_crossover() -> Outcome {
    let m = CountModel::default();
    ensure(m.keyed_phase(6) == 248, format!("keyed_phase(6) = {}", m.keyed_phase(6)))?;
    let n = crossover_threshold(&m);
    ensure(
        n == 8,
        format!(
            "crossover_threshold = {n}, expected 8 (keyed_phase({n}) = {} < usual_dense({n}) = {})",
            m.keyed_phase(n),
            m.usual_dense(n)
        ),
    )?;
    Ok("threshold 8".into())
}

fn c7_block_encoding() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst_rec: f64 = 0.0;
    let mut worst_u: f64 = 0.0;
    for case in 0..200 {
        let n = rng.random_range(1..=8);
        let t = random_term(&mut rng, n, &TOKENS);
        let d = be_term(&t).map_err(|e| format!("{t}: {e}"))?;
        ensure(d.len() <= 6, format!("case {case}: {} pairs", d.len()))?;
        let mut acc = DMatrix::<C64>::zeros(1 << n, 1 << n);
        for (c, u) in &d.pairs {
            let m = sim::circuit_unitary(&u.clone().widened(n).unwrap()).unwrap();
            worst_u = worst_u.max(m.unitarity_defect());
            acc += m.matrix() * cz(*c);
        }
        let r = max_diff(&acc, t.dense(n).unwrap().matrix());
        worst_rec = worst_rec.max(r);
        ensure(r < 1e-12, format!("case {case} `{t}`: reconstruction {r:.2e}"))?;
    }
    ensure(worst_u < 1e-12, format!("unitarity defect {worst_u:.2e}"))?;
    let f = be_term(&flagship()).map_err(|e| e.to_string())?;
    ensure(f.len() == 6, format!("flagship term gives {} pairs", f.len()))?;
    // two number-family coefficients times three transition-family ones
    let mut cs: Vec<f64> = f.pairs.iter().map(|p| p.0).collect();
    cs.sort_by(f64::total_cmp);
    ensure(cs == vec![-0.5, -0.25, -0.25, 0.25, 0.25, 0.5], format!("flagship coefficients {cs:?}"))?;
    Ok(format!("200 terms, reconstruction {worst_rec:.1e}, flagship 6 pairs"))
}

/// Annihilation operator of `mode` by explicit tensor products.
fn jw_oracle(mode: usize, n: usize) -> DMatrix<C64> {
    let id = m2([[1.0, 0.0], [0.0, 1.0]]);
    let z = m2([[1.0, 0.0], [0.0, -1.0]]);
    let lower = m2([[0.0, 1.0], [0.0, 0.0]]);
    let f: Vec<DMatrix<C64>> = (0..n)
        .map(|q| match q.cmp(&mode) {
            std::cmp::Ordering::Less => z.clone(),
            std::cmp::Ordering::Equal => lower.clone(),
            std::cmp::Ordering::Greater => id.clone(),
        })
        .collect();
    kron_all(&f)
}

fn c8_fermionic() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst_ev: f64 = 0.0;
    let mut checked = 0;
    for _ in 0..40 {
        let n = rng.random_range(4..=8);
        let a: Vec<DMatrix<C64>> = (0..n).map(|m| jw_oracle(m, n)).collect();
        let h = rng.random_range(-1.5..1.5);
        let (term, oracle) = if rng.random::<bool>() {
            let i = rng.random_range(0..n);
            let j = (i + rng.random_range(1..n)) % n;
            let (lo, hi) = (i.min(j), i.max(j));
            let m = a[lo].adjoint() * &a[hi];
            (one_body_term(i, j, h).map_err(|e| e.to_string())?, (&m + m.adjoint()) * cz(h / 2.0))
        } else {
            let mut idx: Vec<usize> = (0..n).collect();
            for i in 0..4 {
                let j = rng.random_range(i..n);
                idx.swap(i, j);
            }
            let (mut p, mut q) = ([idx[0], idx[1]], [idx[2], idx[3]]);
            p.sort_unstable();
            q.sort_unstable();
            let m = a[p[0]].adjoint() * a[p[1]].adjoint() * &a[q[0]] * &a[q[1]];
            (
                two_body_term(p[0], p[1], q[0], q[1], h).map_err(|e| e.to_string())?,
                (&m + m.adjoint()) * cz(h / 2.0),
            )
        };
        let dense = term.dense(n).unwrap();
        let d = max_diff(dense.matrix(), &oracle);
        ensure(d == 0.0, format!("`{term}` differs from the mapped product by {d:.2e}"))?;
        let theta = rng.random_range(-1.0..1.0);
        let c = synthesize_direct(&term, &DirectSynthesisOptions::new(theta)).map_err(|e| e.to_string())?;
        let e = circuit_vs_expm(&c, &dense, theta);
        worst_ev = worst_ev.max(e);
        ensure(e < 1e-10, format!("evolution of `{term}` off by {e:.2e}"))?;
        checked += 1;
    }
    // library mapping agrees with the oracle, and anticommutes canonically
    let n = 5;
    for i in 0..n {
        let ai = jordan_wigner(i, n).unwrap().dense(n).unwrap().into_matrix();
        ensure(max_diff(&ai, &jw_oracle(i, n)) == 0.0, format!("mapping of mode {i}"))?;
        for j in 0..n {
            let aj = jordan_wigner(j, n).unwrap().dense(n).unwrap().into_matrix();
            let ac = &ai * aj.adjoint() + aj.adjoint() * &ai;
            let want = if i == j { DMatrix::identity(1 << n, 1 << n) } else { DMatrix::zeros(1 << n, 1 << n) };
            let d = max_diff(&ac, &want);
            ensure(d < 1e-12, format!("anticommutator ({i},{j}) off by {d:.2e}"))?;
        }
    }
    // exp(i t A1) with A1 = |01><10| + h.c.
    let t: f64 = 0.37;
    let (co, si) = (cz(t.cos()), Complex64::new(0.0, t.sin()));
    let (o, l) = (cz(0.0), cz(1.0));
    let display = DMatrix::from_row_slice(4, 4, &[l, o, o, o, o, co, si, o, o, si, co, o, o, o, o, l]);
    let a1 = Term::hermitized(cz(1.0), [(0, Symbol::Lower), (1, Symbol::Raise)]).unwrap();
    let exact = sim::expm_hermitian(&a1.dense(2).unwrap(), -t).unwrap();
    let d1 = max_diff(exact.matrix(), &display);
    ensure(d1 < 1e-12, format!("exp(itA1) entries off by {d1:.2e}"))?;
    let c = synthesize_direct(&a1, &DirectSynthesisOptions::new(-t)).map_err(|e| e.to_string())?;
    let d2 = sim::phase_distance(&sim::circuit_unitary(&c).unwrap(), &DenseOperator::from_matrix(display)).unwrap();
    ensure(d2 < 1e-12, format!("synthesized exp(itA1) off by {d2:.2e}"))?;
    Ok(format!("{checked} terms exact, evolutions {worst_ev:.1e}, A1 display {d2:.1e}"))
}

/// Nested-loop stencil assembly, independent of the operator construction.
fn stencil_oracle(g: &GridSpec, t: &CoefficientTable) -> DMatrix<C64> {
    let (ni, nj, nk) = (g.nodes_per_line(), g.lines_per_layer(), g.layers());
    let dim = ni * nj * nk;
    let idx = |i: usize, j: usize, k: usize| (k * nj + j) * ni + i;
    let mut a = DMatrix::<C64>::zeros(dim, dim);
    for k in 0..nk {
        for j in 0..nj {
            let line = k * nj + j;
            for i in 0..ni {
                let r = idx(i, j, k);
                a[(r, r)] = cz(t.diagonal[line]);
                if i + 1 < ni {
                    a[(r, idx(i + 1, j, k))] = cz(t.neighbor[line]);
                    a[(idx(i + 1, j, k), r)] = cz(t.neighbor[line]);
                }
                if j + 1 < nj {
                    a[(r, idx(i, j + 1, k))] = cz(t.inter_line[k]);
                    a[(idx(i, j + 1, k), r)] = cz(t.inter_line[k]);
                }
                if k + 1 < nk {
                    a[(r, idx(i, j, k + 1))] = cz(t.inter_layer[j]);
                    a[(idx(i, j, k + 1), r)] = cz(t.inter_layer[j]);
                }
            }
        }
    }
    a
}

fn dense_of(p: &FdProblem) -> DMatrix<C64> {
    assemble(p).unwrap().dense().unwrap().into_matrix()
}

fn c9_finite_difference() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    // 1-D lines
    for q in [2, 3, 4] {
        for (a, b) in [(-2.0, 1.0), (rng.random_range(-3.0..0.0), rng.random_range(0.0..2.0))] {
            let g = GridSpec::line(q);
            let t = CoefficientTable::uniform(&g, a, b);
            let d = max_diff(&dense_of(&FdProblem::new(g, t.clone())), &stencil_oracle(&g, &t));
            ensure(d == 0.0, format!("1-D N={} differs by {d:.2e}", 1 << q))?;
        }
        let terms = shift_operator(q).map_err(|e| e.to_string())?;
        ensure(terms.len() == q, format!("shift terms for N={}: {}", 1 << q, terms.len()))?;
    }
    // two lines of four nodes, every coefficient distinct
    let (a1, a2, ai1, ai2, aj12) = (-4.1, -3.7, 1.3, 0.7, 0.45);
    let g = GridSpec::plane(2, 1);
    let t = CoefficientTable {
        diagonal: vec![a1, a2],
        neighbor: vec![ai1, ai2],
        inter_line: vec![aj12],
        inter_layer: vec![],
    };
    #[rustfmt::skip]
    let display = [
        a1, ai1, 0.0, 0.0, aj12, 0.0, 0.0, 0.0,
        ai1, a1, ai1, 0.0, 0.0, aj12, 0.0, 0.0,
        0.0, ai1, a1, ai1, 0.0, 0.0, aj12, 0.0,
        0.0, 0.0, ai1, a1, 0.0, 0.0, 0.0, aj12,
        aj12, 0.0, 0.0, 0.0, a2, ai2, 0.0, 0.0,
        0.0, aj12, 0.0, 0.0, ai2, a2, ai2, 0.0,
        0.0, 0.0, aj12, 0.0, 0.0, ai2, a2, ai2,
        0.0, 0.0, 0.0, aj12, 0.0, 0.0, ai2, a2,
    ];
    let want = DMatrix::from_row_slice(8, 8, &display.map(cz));
    let d = max_diff(&dense_of(&FdProblem::new(g, t.clone())), &want);
    ensure(d == 0.0, format!("two-line display differs by {d:.2e}"))?;
    ensure(max_diff(&want, &stencil_oracle(&g, &t)) == 0.0, "oracle disagrees with two-line display")?;

    // two layers of two lines of four nodes
    let (a3, a4, ai3, ai4, aj34, ak13, ak24) = (-6.2, -5.9, 0.9, 1.1, 0.35, 0.6, 0.8);
    let g = GridSpec::volume(2, 1, 1);
    let t = CoefficientTable {
        diagonal: vec![a1, a2, a3, a4],
        neighbor: vec![ai1, ai2, ai3, ai4],
        inter_line: vec![aj12, aj34],
        inter_layer: vec![ak13, ak24],
    };
    let mut want = DMatrix::<C64>::zeros(16, 16);
    let diag = [a1, a2, a3, a4];
    let nb = [ai1, ai2, ai3, ai4];
    for blk in 0..4 {
        for i in 0..4 {
            let r = 4 * blk + i;
            want[(r, r)] = cz(diag[blk]);
            if i < 3 {
                want[(r, r + 1)] = cz(nb[blk]);
                want[(r + 1, r)] = cz(nb[blk]);
            }
        }
    }
    for i in 0..4 {
        for (b1, b2, v) in [(0, 1, aj12), (2, 3, aj34), (0, 2, ak13), (1, 3, ak24)] {
            want[(4 * b1 + i, 4 * b2 + i)] = cz(v);
            want[(4 * b2 + i, 4 * b1 + i)] = cz(v);
        }
    }
    let d = max_diff(&dense_of(&FdProblem::new(g, t.clone())), &want);
    ensure(d == 0.0, format!("16x16 volume pattern differs by {d:.2e}"))?;
    ensure(max_diff(&want, &stencil_oracle(&g, &t)) == 0.0, "oracle disagrees with the 16x16 pattern")?;

    let diags: Vec<f64> = (1..=3).map(|d| laplacian_coefficients(d).unwrap().0).collect();
    ensure(diags == vec![-2.0, -4.0, -6.0], format!("laplacian diagonals {diags:?}"))?;
    for d in 1..=3 {
        let g = GridSpec::cube(d, 2).unwrap();
        let p = FdProblem::laplacian(g).unwrap();
        let diff = max_diff(&dense_of(&p), &stencil_oracle(&g, &p.coefficients));
        ensure(diff == 0.0, format!("{d}-D laplacian differs by {diff:.2e}"))?;
    }
    Ok("1-D, 8x8, 16x16 and laplacians exact".into())
}

fn random_expr(rng: &mut StdRng) -> HamiltonianExpr {
    loop {
        let terms: Vec<Term> = (0..3).map(|_| random_term(rng, 3, &TOKENS)).collect();
        let e = HamiltonianExpr::new(3, terms).unwrap();
        let h = e.dense().unwrap();
        let comm = h.mul(&e.terms()[0].dense(3).unwrap()).add(&e.terms()[0].dense(3).unwrap().mul(&h).scale(cz(-1.0)));
        if comm.spectral_norm() > 0.1 {
            return e;
        }
    }
}

fn c10_trotter_scaling() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let mut ratios = Vec::new();
    for case in 0..10 {
        let e = random_expr(&mut rng);
        let h = e.dense().unwrap();
        let time = 1.0 / h.spectral_norm();
        let exact = sim::expm_hermitian(&h, time).unwrap();
        let err = |p: usize| {
            let c = trotter_product(&e, &TrotterPlan::new(1, p, time), Strategy::Direct).unwrap();
            let u = sim::circuit_unitary(&c.widened(3).unwrap()).unwrap();
            sim::phase_distance(&u, &exact).unwrap()
        };
        let (e4, e8, e16) = (err(4), err(8), err(16));
        for (p, r) in [(4, e8 / e4), (8, e16 / e8)] {
            ensure((0.35..=0.65).contains(&r), format!("case {case}: err({})/err({p}) = {r:.3}", 2 * p))?;
            ratios.push(r);
        }
    }
    // complex-coefficient split: error quadratic in the angle
    let mut rich = Vec::new();
    for _ in 0..10 {
        let n = rng.random_range(2..=5);
        let base = random_term(&mut rng, n, &[Symbol::Id, Symbol::Num, Symbol::X, Symbol::Lower, Symbol::Raise]);
        let t = if base.has_transitions() {
            base.with_coefficient(Complex64::new(rng.random_range(0.3..1.0), rng.random_range(0.3..1.0)))
        } else {
            continue;
        };
        let a = trotter_error_of_split(&t, 0.02).map_err(|e| e.to_string())?;
        let b = trotter_error_of_split(&t, 0.01).map_err(|e| e.to_string())?;
        let r = b / a;
        ensure((0.15..=0.35).contains(&r), format!("split error ratio {r:.3} for `{t}`"))?;
        rich.push(r);
    }
    ensure(!rich.is_empty(), "no complex cases generated")?;
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    Ok(format!("first-order ratios in [{lo:.3}, {hi:.3}], {} split cases", rich.len()))
}

fn c11_qlsp() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let d = rng.random_range(1..=16);
        let a = DMatrix::<C64>::from_fn(d, d, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let (h, emb) = hermitize_nonhermitian(&a).map_err(|e| e.to_string())?;
        worst = worst.max(h.hermiticity_defect());
        let v: Vec<C64> = (0..d).map(|_| Complex64::new(rng.random::<f64>(), rng.random::<f64>())).collect();
        let out = h.apply(&emb.embed(&v));
        let av = &a * nalgebra::DVector::from_vec(v.clone());
        let top = out[..d].iter().map(|z| z.norm()).fold(0.0, f64::max);
        let low = emb
            .extract(&out)
            .iter()
            .zip(av.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        worst = worst.max(top).max(low);
    }
    ensure(worst < 1e-13, format!("worst defect {worst:.2e}"))?;
    Ok(format!("20 matrices, worst {worst:.1e}"))
}

fn c12_parity_topologies() -> Outcome {
    let mut rng = StdRng::seed_from_u64(12);
    for k in 1..=7 {
        let qubits: Vec<usize> = (0..k).collect();
        let chain = ParityNetwork::new(&qubits, Topology::Chain).map_err(|e| e.to_string())?;
        let tree = ParityNetwork::new(&qubits, Topology::Tree).map_err(|e| e.to_string())?;
        ensure(chain.cx.len() == tree.cx.len(), format!("k={k}: CX counts differ"))?;
        let td = depth(&tree.circuit(k).unwrap());
        let bound = (k as f64).log2().ceil() as usize;
        ensure(td <= bound, format!("k={k}: tree depth {td} > {bound}"))?;
        if k < 2 {
            continue;
        }
        for _ in 0..4 {
            let extra = rng.random_range(0..=2);
            let n = k + extra;
            let mut f: Vec<(usize, Symbol)> = (0..k)
                .map(|q| (q, if rng.random::<bool>() { Symbol::Raise } else { Symbol::Lower }))
                .collect();
            for q in k..n {
                f.push((q, [Symbol::Num, Symbol::Hole, Symbol::X, Symbol::Z][rng.random_range(0..4)]));
            }
            let t = Term::hermitized(cz(rng.random_range(0.2..1.2)), f).unwrap();
            let theta = rng.random_range(-1.0..1.0);
            let cc = synthesize_direct(&t, &DirectSynthesisOptions::new(theta).with_topology(Topology::Chain)).unwrap();
            let ct = synthesize_direct(&t, &DirectSynthesisOptions::new(theta).with_topology(Topology::Tree)).unwrap();
            ensure(count(&cc).kind("CX") == count(&ct).kind("CX"), format!("k={k}: synthesized CX counts differ"))?;
            let uc = sim::circuit_unitary(&cc.widened(n).unwrap()).unwrap();
            let ut = sim::circuit_unitary(&ct.widened(n).unwrap()).unwrap();
            let d = sim::phase_distance(&uc, &ut).unwrap();
            ensure(d < 1e-12, format!("k={k}: chain vs tree {d:.2e}"))?;
        }
    }
    Ok("k = 1..7".into())
}

fn main() {
    panic::set_hook(Box::new(|_| {}));
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("direct-synthesis exactness", c1_direct_exactness),
        ("15-qubit keyed-pair rotation", c2_flagship_statevector),
        ("Pauli-string blowup count", c3_pauli_blowup),
        ("single-term gate inventories", c4_inventories),
        ("HUBO diagonal law", c5_hubo_diagonal_law),
        ("phase-gate crossover", c6_crossover),
        ("block-encoding", c7_block_encoding),
        ("fermionic terms", c8_fermionic),
        ("finite-difference assembly", c9_finite_difference),
        ("Trotter scaling", c10_trotter_scaling),
        ("QLSP hermitization", c11_qlsp),
        ("parity topologies", c12_parity_topologies),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let r = panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
