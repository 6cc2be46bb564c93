// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

use serde_json::Value;

use scbsynth_web::{fd_json, hubo_json, synth_json};

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn synth_reports_a_passing_check() {
    let v = parse(&synth_json("0.5 * n0 sd1 s2 + h.c.", 0.4, "direct", "tree").unwrap());
    assert_eq!(v["verification"]["pass"], Value::Bool(true));
    assert!(v["listing"].as_str().unwrap().starts_with("# qubits=3"));
    assert!(synth_json("Z0 Z0", 0.1, "direct", "chain").unwrap_err().contains("twice"));
    assert!(synth_json("Z0", 0.1, "direct", "ring").is_err());
}

#[test]
fn hubo_phases_follow_the_cost() {
    for strategy in ["direct", "usual"] {
        let v = parse(&hubo_json("vars 3\nform Z\n0,1 : 1.0\n1,2 : -0.5\n2 : 0.25\n", 0.7, strategy).unwrap());
        let states = v["states"].as_array().unwrap();
        assert_eq!(states.len(), 8);
        for s in states {
            let (got, want) = (s["phase"].as_f64().unwrap(), s["expected"].as_f64().unwrap());
            let d = (got - want).rem_euclid(std::f64::consts::TAU);
            assert!(d.min(std::f64::consts::TAU - d) < 1e-10, "{s}");
        }
    }
}

#[test]
fn fd_returns_the_stencil() {
    let v = parse(&fd_json("dim 1\nq 2\na laplacian\n").unwrap());
    assert_eq!(v["dense"][0], serde_json::json!([-2.0, 1.0, 0.0, 0.0]));
    assert!(fd_json("dim 4\nq 1\n").is_err());
}
