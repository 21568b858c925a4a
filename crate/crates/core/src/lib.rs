//! Numerical realization of the gl_q(n)-covariant oscillator algebra.
//!
//! The crate builds the Fock representation of `n` coupled q-deformed
//! oscillators on a box-truncated basis and verifies, as residual reports,
//! the identities of the algebra: the defining relations, coherent states and
//! their resolution of the identity, the q-deformed Weyl-Heisenberg relation
//! and the spectrum of the q-deformed n-dimensional harmonic oscillator.
//!
//! Modes are numbered from 1 throughout. Relations are compared only on
//! [`fock::SafeSector`]s far enough from the occupation cutoff that the
//! truncation cannot touch them.

pub mod cli;
pub mod coherent;
pub mod error;
pub mod fock;
pub mod qcore;
pub mod qqm;
pub mod suite;
pub mod tolerance;
pub mod weyl;

pub use error::{QoscError, Result};
pub use num_complex::Complex64;
