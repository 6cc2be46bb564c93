// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Browser bindings. Each export takes text input and returns a JSON string;
//! the plain `*_json` functions hold the logic so they can be tested natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use scbsynth::circuit::{count, Topology};
use scbsynth::direct::DirectSynthesisOptions;
use scbsynth::fd::assemble;
use scbsynth::hubo::{cost_of, synthesize_hubo};
use scbsynth::sim::{self, StateVector};
use scbsynth::text::{self, Verification};
use scbsynth::usual::{trotter_product_with, Strategy, TrotterPlan};
use scbsynth::verify::{expr_distance, DEFAULT_TOLERANCE};

/// Widest HUBO problem tabulated in full.
pub const MAX_HUBO_VARS: usize = 10;
/// Widest grid whose dense matrix is returned.
pub const MAX_FD_QUBITS: usize = 6;

fn strategy(name: &str) -> Result<Strategy, String> {
    match name {
        "direct" => Ok(Strategy::Direct),
        "usual" => Ok(Strategy::Usual),
        s => Err(format!("unknown strategy '{s}'")),
    }
}

/// Synthesizes `exp(-i theta H)` and checks it against the exact evolution.
pub fn synth_json(expr: &str, theta: f64, strategy_name: &str, parity: &str) -> Result<String, String> {
    let e = text::parse(expr).map_err(|e| e.to_string())?;
    let topo = match parity {
        "chain" => Topology::Chain,
        "tree" => Topology::Tree,
        p => return Err(format!("unknown parity topology '{p}'")),
    };
    let opts = DirectSynthesisOptions::new(theta).with_topology(topo);
    let c = trotter_product_with(&e, &TrotterPlan::new(1, 1, theta), strategy(strategy_name)?, &opts)
        .map_err(|e| e.to_string())?;
    let verification = match expr_distance(&e, &c, theta) {
        Ok(d) => json!(Verification::new(d, DEFAULT_TOLERANCE)),
        Err(err) => json!({ "skipped": err.to_string() }),
    };
    Ok(json!({
        "expr": e.to_string(),
        "listing": c.listing(),
        "counts": count(&c),
        "verification": verification,
    })
    .to_string())
}

/// Phase the HUBO circuit puts on every basis state, next to `e^{-it cost}`.
pub fn hubo_json(problem: &str, t: f64, strategy_name: &str) -> Result<String, String> {
    let p = text::parse_hubo(problem).map_err(|e| e.to_string())?;
    let n = p.num_vars();
    if n > MAX_HUBO_VARS {
        return Err(format!("{n} variables; the demo tabulates at most {MAX_HUBO_VARS}"));
    }
    let c = synthesize_hubo(&p, t, strategy(strategy_name)?).map_err(|e| e.to_string())?;
    let c = c.widened(n.max(1)).map_err(|e| e.to_string())?;
    let mut rows = Vec::with_capacity(1 << n);
    let mut reference = None;
    for x in 0..1usize << n {
        let bits: Vec<bool> = (0..n).map(|q| (x >> (n - 1 - q)) & 1 == 1).collect();
        let cost = cost_of(&p, &bits).map_err(|e| e.to_string())?;
        let mut sv = StateVector::basis(n.max(1), x).map_err(|e| e.to_string())?;
        sim::apply_circuit(&c, &mut sv).map_err(|e| e.to_string())?;
        let amp = sv.amplitudes()[x];
        // phases relative to the all-zero state remove the global phase
        let r = *reference.get_or_insert(amp);
        let rel = (amp / r).arg();
        let cost0 = *rows.first().map(|v: &Value| &v["cost"]).and_then(Value::as_f64).get_or_insert(cost);
        let want = scbsynth::C64::from_polar(1.0, -t * (cost - cost0)).arg();
        rows.push(json!({
            "state": format!("{x:0n$b}"),
            "cost": cost,
            "phase": rel,
            "expected": want,
        }));
    }
    Ok(json!({ "counts": count(&c), "listing": c.listing(), "states": rows }).to_string())
}

/// Operator expression and dense matrix of a grid file.
pub fn fd_json(grid: &str) -> Result<String, String> {
    let p = text::parse_grid(grid).map_err(|e| e.to_string())?;
    let e = assemble(&p).map_err(|e| e.to_string())?;
    let dense = if e.num_qubits() <= MAX_FD_QUBITS {
        let m = e.dense().map_err(|e| e.to_string())?;
        let m = m.matrix();
        json!((0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)].re).collect::<Vec<_>>()).collect::<Vec<_>>())
    } else {
        Value::Null
    };
    let terms: Vec<String> = e.terms().iter().map(ToString::to_string).collect();
    Ok(json!({ "num_qubits": e.num_qubits(), "terms": terms, "dense": dense }).to_string())
}

#[wasm_bindgen]
pub fn synth(expr: &str, theta: f64, strategy: &str, parity: &str) -> Result<String, JsError> {
    synth_json(expr, theta, strategy, parity).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn hubo(problem: &str, t: f64, strategy: &str) -> Result<String, JsError> {
    hubo_json(problem, t, strategy).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fd(grid: &str) -> Result<String, JsError> {
    fd_json(grid).map_err(|e| JsError::new(&e))
}
