//! Thermal Casimir-Polder interactions of a polarizable, paramagnetic
//! atom with a thick magnetodielectric wall.
//!
//! The crate evaluates, in Gaussian-CGS units with explicit SI conversion
//! helpers:
//!
//! * the atom-wall free energy and force at finite temperature, split into
//!   the electric-polarizability part and the (small) magnetic-moment
//!   part ([`cp_force`], [`cp_free_energy`], [`magnetic_deviation`]);
//! * closed-form ideal-metal limits used as independent cross-checks
//!   ([`ideal_metal_bracket`], [`ideal_metal_static_force`]);
//! * the free energy of two parallel walls, one of which may be a dilute
//!   atomic gas, together with a rarefaction consistency check that ties
//!   the two solvers to each other ([`plate_free_energy`],
//!   [`rarefaction_check`]).
//!
//! Materials cover an ideal metal, plasma-model metals (optionally with a
//! static ferromagnetic permeability), and constant-permittivity
//! dielectrics; atoms carry a single-resonance dynamic polarizability and
//! a Curie-law paramagnetic susceptibility with Debye relaxation.
//!
//! All summations and quadratures are deterministic (fixed evaluation
//! order, compensated accumulation), so repeated runs produce bit-identical
//! results.

// Validation predicates are written `!(x > 0.0)` on purpose: the negation
// is true for NaN, so non-finite garbage fails closed instead of slipping
// through an `x <= 0.0` rewrite.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atoms;
pub mod constants;
pub mod cp;
pub mod error;
pub mod materials;
pub mod plate;
pub mod reflection;
pub mod spectral;

pub use atoms::AtomModel;
pub use cp::{
    cp_force, cp_free_energy, ideal_metal_bracket, ideal_metal_series_force,
    ideal_metal_static_force, magnetic_deviation, ForceResult, FreeEnergyResult, ResponseMode,
    SolverOptions,
};
pub use error::{Error, Result};
pub use materials::{MuMode, PermeabilityModel, PermittivityModel, WallModel};
pub use plate::{
    plate_free_energy, rarefaction_check, DiluteGasWall, PlateFreeEnergy, PlateWall,
    RarefactionOptions, RarefactionPoint, RarefactionReport,
};
pub use reflection::{reflection_at, ReflectionPair};
pub use spectral::{
    integrate_tail, matsubara_frequency, primed_sum, ConvergenceReport, KahanSum, SpectralContext,
    Tolerances,
};
