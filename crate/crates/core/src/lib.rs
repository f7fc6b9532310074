//! Tight state-independent lower bounds for sums of variances of qudit
//! observables.
//!
//! The minimum of `sum_mu var_rho(A_mu)` over all states equals
//! `(2/n)(sum_mu ||a_mu||^2 + l)` where `l` is the minimum of a quadratic
//! form `r^T T r` over coherence vectors of pure states. This crate builds
//! the su(n) machinery, the quadratic form, and solvers for `l`: a closed
//! form for qubits, an exact-plus-stochastic stratified search for qutrits
//! and a pure-state descent for larger dimensions.

pub mod bloch;
pub mod cases;
pub mod entanglement;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod oracle;
pub mod qp;

pub use error::{Error, Result};
