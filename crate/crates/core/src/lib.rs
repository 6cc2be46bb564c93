// Copyright 2026 The scbsynth Authors
// SPDX-License-Identifier: Apache-2.0

//! Circuit synthesis for Hamiltonians written over the single component
//! basis `{I, X, Y, Z, n, o, s, s†}`.
//!
//! Conventions used throughout:
//! * qubit 0 is the leftmost tensor factor and the most significant bit of a
//!   basis index;
//! * `n = |1><1|`, `o = |0><0|` (the hole projector), `s = |0><1|` and
//!   `s† = |1><0|`;
//! * time evolution is `exp(-i theta H)`.

pub mod algebra;
pub mod circuit;
pub mod direct;
pub mod fd;
pub mod fermion;
pub mod hubo;
pub mod lcu;
pub mod sim;
pub mod text;
pub mod usual;
pub mod verify;

pub type C64 = num_complex::Complex64;
