//! Quantum states of a harmonic oscillator as functions in the Hardy space of
//! the unit disk: inner-outer factorisation, the number-phase Weyl
//! semigroup, the Barut-Girardello representation and the number-phase
//! Wigner function.

// `!(x < tol)` is used on purpose so that NaN fails a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barut_girardello;
pub mod catalog;
pub mod config;
pub mod disk_analytic;
pub mod error;
pub mod factorization;
pub mod fock_state;
pub mod quadrature;
pub mod roots;
pub mod series;
pub mod special;
pub mod state_spec;
pub mod verify;
pub mod weyl;
pub mod wigner;

pub use error::{Error, Result};
