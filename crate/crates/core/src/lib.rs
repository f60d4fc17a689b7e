//! Batch Bayesian optimization with a dynamic multi-objective ensemble of
//! acquisition functions.
//!
//! [`engine::run_dmea`] is the entry point; [`harness`] runs repeated
//! experiments and persists them.

pub mod acquisition;
pub mod benchmarks;
pub mod domain;
pub mod engine;
pub mod error;
pub mod gp;
pub mod harness;
pub mod lhs;
pub mod maximize;
pub mod normal;
pub mod nsga2;
pub mod penalization;

pub use error::{Error, Result};
