//! Exact simulation of multiple-quantum (MQ) NMR dynamics of a two-spin dimer.
//!
//! The crate carries two independent routes to the same numbers:
//!
//! * [`nmr`]: closed forms for the two-spin/two-quantum dipolar propagator,
//!   the evolved pure and thermal states, and the 0- and ±2-order coherence
//!   intensities;
//! * [`circuits`]: the gate-level experiments (a 2-qubit circuit for the pure
//!   ground state, a 4-qubit purified circuit for the thermal state) run on
//!   the dense statevector simulator in [`gates`] / [`state`], with intensities
//!   reconstructed from measured probabilities by [`measurement`].
//!
//! Conventions used throughout:
//!
//! * qubits are numbered from 1, and qubit 1 is the most significant bit of
//!   a basis index, so `|q1 q2 q3 q4⟩` reads left to right;
//! * `|0⟩` is spin up, `I_z = +1/2`;
//! * the coherence order of `⟨r|ρ|c⟩` is `m_r − m_c`;
//! * the dimensionless time is `τ = D·t`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod circuits;
mod error;
pub mod gates;
pub mod linalg;
pub mod measurement;
pub mod nmr;
pub mod state;
pub mod sweep;

pub use error::{Error, Result};
pub use linalg::CMatrix;

/// Complex amplitude type.
pub type C64 = num_complex::Complex<f64>;

/// Largest register the dense representation accepts.
pub const MAX_QUBITS: usize = 12;

/// Tolerance for algebraic identities (normalization, Hermiticity, trace).
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// Floor below which an eigenvalue counts as negative.
pub const PSD_FLOOR: f64 = 1e-10;
