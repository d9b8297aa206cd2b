//! Exact resolution of plane curve singularities by weighted blow-ups.
//!
//! Layers, bottom up:
//!
//! * [`exactfield`] — exact arithmetic in field towers (QQ or GF(p), one
//!   optional transcendental step, algebraic steps), with univariate
//!   factorization and p-th/n-th roots;
//! * [`mpoly`] — sparse multivariate polynomials, local models, monomial
//!   valuations, initial forms and substitutions;
//! * [`charpoly`] — projected polyhedra, vertex dissolution, the
//!   quasiregularity test and the (order, scaled-slope) invariant;
//! * [`wblowup`] — admissible centers, weighted charts, proper transforms and
//!   stabilizers;
//! * [`resolver`] — the resolution loop with certified order drops;
//! * [`oracle`] — independent brute-force checks used by tests;
//! * [`cli`] — the job-file front end.

pub mod charpoly;
pub mod cli;
pub mod error;
pub mod exactfield;
pub mod mpoly;
pub mod oracle;
pub mod resolver;
pub mod wblowup;

pub use error::{Error, Result};

/// CLI entry point; returns the process exit code.
pub fn run() -> i32 {
    cli::main_entry()
}
