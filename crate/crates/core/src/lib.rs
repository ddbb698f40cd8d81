//! Quantum walks from reversible Markov chains.
//!
//! A reversible chain `K` with stationary distribution `pi` is turned into
//! the symmetric Hamiltonian `H = 1 - Phi^{-1} K Phi` (`Phi = diag sqrt(pi)`).
//! The same eigen-data then drives both the classical evolution `K^l p` and
//! the unitary evolution `exp(-i H l)`.
//!
//! - [`specfun`]: shifted factorials and terminating (q-)hypergeometric sums.
//! - [`chain`]: chains, validation, the Hamiltonian and its eigen-decomposition.
//! - [`families`]: five exactly solvable chains with closed-form spectra.
//! - [`evolution`]: classical and quantum time evolution.
//! - [`cli`]: the `qmc` command-line front end.

pub mod chain;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod families;
pub mod specfun;

pub use error::{Error, Result};
