//! Exact diagonalization of model Hamiltonians and eigenstate-ergodicity
//! diagnostics over disorder ensembles.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod ensemble;
pub mod error;
pub mod hilbert;
pub mod models;
pub mod operator;
pub mod pauli;
pub mod scalar;
pub mod sectors;
pub mod spectral;
pub mod stategraph;

pub use error::{Error, Result};
