//! Command-line front end for the atom-wall Casimir-Polder solvers in
//! `cpforce-core`: preset and config-file handling, separation sweeps with
//! CSV/JSON emission, and self-verification subcommands.
//!
//! The binary is a pure function of its flags, config file, and the
//! `CPFORCE_WORKERS` environment variable (worker count only affects
//! scheduling, never values): identical inputs produce byte-identical CSV
//! output. All interface quantities are SI (meters, newtons, kelvin);
//! conversion to the solver's internal Gaussian units happens exactly once,
//! at this boundary.

// Validation predicates are written `!(x > 0.0)` on purpose: the negation
// is true for NaN, so non-finite garbage fails closed instead of slipping
// through an `x <= 0.0` rewrite.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod emit;
pub mod sweep;
pub mod verify;
