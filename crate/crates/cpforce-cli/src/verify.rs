//! Built-in verification suites: cross-checks the generic solver against
//! independent evaluations and its own analytic limits, and runs the
//! dilute-wall consistency harness. Each check reports pass/fail with the
//! measured numbers so a failure is diagnosable from the output alone.

use cpforce_core::constants::{meters_to_cm, HBAR, K_BOLTZMANN, SPEED_OF_LIGHT};
use cpforce_core::{
    cp_force, ideal_metal_series_force, ideal_metal_static_force, rarefaction_check, AtomModel,
    RarefactionOptions, ResponseMode, SolverOptions, Tolerances, WallModel,
};

/// Result of a single verification check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

fn check(name: impl Into<String>, body: impl FnOnce() -> anyhow::Result<(bool, String)>) -> CheckOutcome {
    let name = name.into();
    match body() {
        Ok((passed, details)) => CheckOutcome {
            name,
            passed,
            details,
        },
        Err(err) => CheckOutcome {
            name,
            passed: false,
            details: format!("error: {err:#}"),
        },
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// Static-response solver options with a tightened series truncation, so the
/// generic pipeline can meet a 1e-9 comparison against closed forms.
fn static_tight() -> SolverOptions {
    SolverOptions {
        mode: ResponseMode::Static,
        tolerances: Tolerances {
            sum_rel_tol: 1e-13,
            ..Tolerances::default()
        },
    }
}

/// Ideal-metal wall, frequency-independent atom response: the generic
/// spectral pipeline, the explicit series form, and the closed form must
/// agree pairwise to 1e-9 relative.
pub fn run_oracle() -> Vec<CheckOutcome> {
    let points = [(1.0, 1.0), (1.0, 5.0), (1.0, 10.0), (300.0, 1.0)];
    points
        .iter()
        .map(|&(t_k, a_um)| {
            check(
                format!("oracle triangle (T = {t_k} K, a = {a_um} um)"),
                || {
                    let atom = AtomModel::hydrogen();
                    let wall = WallModel::ideal_metal();
                    let a_cm = meters_to_cm(a_um * 1e-6);
                    let alpha0 = atom.alpha0;
                    let beta0 = atom.static_susceptibility(t_k)?;
                    let solver = cp_force(&atom, &wall, a_cm, t_k, &static_tight())?.f_total;
                    let closed = ideal_metal_static_force(alpha0, beta0, a_cm, t_k)?;
                    let series =
                        ideal_metal_series_force(alpha0, beta0, a_cm, t_k, 1e-13, 10_000_000)?;
                    let worst = rel_diff(solver, closed)
                        .max(rel_diff(solver, series))
                        .max(rel_diff(series, closed));
                    Ok((
                        worst < 1e-9,
                        format!(
                            "solver {solver:.6e} dyn; max pairwise relative difference {worst:.3e} (tolerance 1e-9)"
                        ),
                    ))
                },
            )
        })
        .collect()
}

/// Analytic limits of the ideal-metal force.
pub fn run_limits() -> Vec<CheckOutcome> {
    let zero_t = check("zero-temperature limit (ideal metal)", || {
        // Frequency-independent polarizability so the limit is exact; the
        // temperature is chosen to put the normalized temperature at 1e-4.
        let atom = AtomModel::new("static-alpha", 6.67e-25, f64::INFINITY, 1.0, 0.0, 1e-8)?;
        let a_cm = meters_to_cm(1e-6);
        let tau = 1e-4;
        let t_k = tau * HBAR * SPEED_OF_LIGHT
            / (4.0 * std::f64::consts::PI * a_cm * K_BOLTZMANN);
        let opts = SolverOptions {
            mode: ResponseMode::AlphaOnly,
            ..SolverOptions::default()
        };
        let force = cp_force(&atom, &WallModel::ideal_metal(), a_cm, t_k, &opts)?;
        let a5f = a_cm.powi(5) * force.f_total;
        let limit = -3.0 * HBAR * SPEED_OF_LIGHT * atom.alpha0 / (2.0 * std::f64::consts::PI);
        let departure = rel_diff(a5f, limit);
        Ok((
            departure < 1e-3,
            format!(
                "a^5 F = {a5f:.6e} erg cm^2 at normalized temperature 1e-4; limit {limit:.6e}; relative departure {departure:.3e} (tolerance 1e-3)"
            ),
        ))
    });

    let classical = check("classical limit (ideal metal)", || {
        // Normalized temperature ~ 33 at (20 um, 300 K): only the zeroth
        // Matsubara term survives.
        let atom = AtomModel::hydrogen();
        let a_cm = meters_to_cm(20e-6);
        let t_k = 300.0;
        let force = cp_force(
            &atom,
            &WallModel::ideal_metal(),
            a_cm,
            t_k,
            &SolverOptions::default(),
        )?;
        let beta0 = atom.static_susceptibility(t_k)?;
        let analytic =
            -3.0 * K_BOLTZMANN * t_k * (atom.alpha0 - beta0) / (4.0 * a_cm.powi(4));
        let diff = rel_diff(force.f_total, analytic);
        Ok((
            diff < 1e-6,
            format!(
                "F = {:.6e} dyn vs classical asymptote {analytic:.6e}; relative difference {diff:.3e} (tolerance 1e-6)",
                force.f_total
            ),
        ))
    });

    vec![zero_t, classical]
}

/// Dilute-wall consistency: the plate free energy per gas atom,
/// extrapolated to zero density, must reproduce the integrated atom-wall
/// free energy. `quick` runs at 300 K where the Matsubara series is short;
/// the full run uses 1 K.
pub fn run_rarefaction(quick: bool) -> Vec<CheckOutcome> {
    let t_k = if quick { 300.0 } else { 1.0 };
    let walls = [WallModel::ideal_metal(), WallModel::ferro_dielectric()];
    walls
        .iter()
        .map(|wall| {
            let wall = wall.clone();
            let wall_name = wall.name.clone();
            check(format!("rarefaction H/{wall_name} (1 um, {t_k} K)"), move || {
                let report = rarefaction_check(
                    &AtomModel::hydrogen(),
                    &wall,
                    meters_to_cm(1e-6),
                    t_k,
                    &RarefactionOptions::default(),
                )?;
                Ok((
                    report.rel_mismatch < 1e-4,
                    format!(
                        "plate-side limit {:.6e} erg cm, atom-side integral {:.6e} erg cm, relative mismatch {:.3e} (tolerance 1e-4)",
                        report.extrapolated, report.cp_integral, report.rel_mismatch
                    ),
                ))
            })
        })
        .collect()
}

/// Print one line per check and a summary; true when everything passed.
pub fn print_report(checks: &[CheckOutcome]) -> bool {
    for c in checks {
        let tag = if c.passed { "[PASS]" } else { "[FAIL]" };
        println!("{tag} {}: {}", c.name, c.details);
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    println!("{passed}/{} checks passed", checks.len());
    passed == checks.len()
}
