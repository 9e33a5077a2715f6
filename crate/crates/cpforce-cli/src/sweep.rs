//! Separation sweeps: grid construction and the parallel driver.
//!
//! Every grid point is an independent solve; points are dispatched to the
//! rayon pool and collected back in input order, so the emitted rows are
//! bitwise independent of the worker count. Each point's own computation is
//! strictly sequential.

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use cpforce_core::constants::{dyn_to_newtons, meters_to_cm};
use cpforce_core::{cp_force, magnetic_deviation, AtomModel, Error, SolverOptions, WallModel};

use crate::config::{Spacing, SweepSpec};

/// Serialize NaN/inf as JSON null and read null back as NaN, so rows from
/// non-converged points survive a JSON round trip. Finite values round-trip
/// bit-exactly.
pub(crate) mod lossy_float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// One sweep point. Forces are SI (newtons); `a_m` is the separation in
/// meters. `a5_abs_f = a_m^5 * |f_total_N|`, the natural quantity for
/// comparing separations across a sweep. `deviation_pct` is the relative
/// contribution of the magnetic channel in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRow {
    pub a_m: f64,
    #[serde(rename = "f_total_N", with = "lossy_float")]
    pub f_total_n: f64,
    #[serde(rename = "f_alpha_N", with = "lossy_float")]
    pub f_alpha_n: f64,
    #[serde(rename = "f_beta_N", with = "lossy_float")]
    pub f_beta_n: f64,
    #[serde(with = "lossy_float")]
    pub a5_abs_f: f64,
    #[serde(with = "lossy_float")]
    pub deviation_pct: f64,
    pub terms_l: u64,
    pub est_rel_err: f64,
    /// False when the Matsubara sum hit its term cap; the numeric fields of
    /// such a row are NaN. Not a CSV column; the CSV flag is the NaNs.
    pub converged: bool,
}

impl SweepRow {
    pub fn is_flagged(&self) -> bool {
        !self.converged
    }
}

/// A completed sweep: rows in ascending separation plus the count of points
/// whose Matsubara sum failed to converge.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub num_unconverged: usize,
}

/// Separation grid in meters, ascending, endpoints exact.
pub fn separation_grid_m(spec: &SweepSpec) -> Vec<f64> {
    let n = spec.points;
    let (lo, hi) = (spec.a_min_m, spec.a_max_m);
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                let t = i as f64 / (n - 1) as f64;
                match spec.spacing {
                    Spacing::Linear => lo + t * (hi - lo),
                    Spacing::Log => (lo.ln() + t * (hi.ln() - lo.ln())).exp(),
                }
            }
        })
        .collect()
}

fn point_row(atom: &AtomModel, wall: &WallModel, spec: &SweepSpec, a_m: f64) -> Result<SweepRow> {
    let opts = SolverOptions {
        mode: spec.mode.to_core(),
        tolerances: spec.tolerances(),
    };
    let a_cm = meters_to_cm(a_m);
    match cp_force(atom, wall, a_cm, spec.temp_k, &opts) {
        Ok(force) => {
            let f_total_n = dyn_to_newtons(force.f_total);
            let f_alpha_n = dyn_to_newtons(force.f_alpha);
            let f_beta_n = dyn_to_newtons(force.f_beta);
            // Undefined (electric part exactly zero) only for degenerate
            // walls such as vacuum; reported as NaN rather than an error.
            let deviation_pct = magnetic_deviation(&force).unwrap_or(f64::NAN);
            Ok(SweepRow {
                a_m,
                f_total_n,
                f_alpha_n,
                f_beta_n,
                a5_abs_f: a_m.powi(5) * f_total_n.abs(),
                deviation_pct,
                terms_l: force.report.terms_used,
                est_rel_err: force.report.est_rel_err(),
                converged: true,
            })
        }
        Err(Error::SumNotConverged { report }) => Ok(SweepRow {
            a_m,
            f_total_n: f64::NAN,
            f_alpha_n: f64::NAN,
            f_beta_n: f64::NAN,
            a5_abs_f: f64::NAN,
            deviation_pct: f64::NAN,
            terms_l: report.terms_used,
            est_rel_err: report.est_rel_err(),
            converged: false,
        }),
        Err(e) => Err(e).with_context(|| format!("sweep point a = {a_m} m")),
    }
}

/// Run the sweep. Rows come back in ascending separation regardless of how
/// the points were scheduled. A point whose Matsubara sum hits the term cap
/// produces a NaN-valued row (counted in `num_unconverged`) instead of
/// aborting the sweep; any other solver error aborts.
pub fn run_sweep(spec: &SweepSpec, atom: &AtomModel, wall: &WallModel) -> Result<SweepOutcome> {
    spec.validate()?;
    let grid = separation_grid_m(spec);
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&a_m| point_row(atom, wall, spec, a_m))
        .collect::<Result<_>>()?;
    let num_unconverged = rows.iter().filter(|r| r.is_flagged()).count();
    Ok(SweepOutcome {
        rows,
        num_unconverged,
    })
}
