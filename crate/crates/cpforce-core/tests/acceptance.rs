//! End-to-end validation suite.
//!
//! Each test checks one advertised property of the solvers against
//! independently derived reference values or against an internal
//! cross-check that shares no code path with the quantity under test,
//! and prints a single machine-readable verdict line
//! (`[PASS]`/`[FAIL] NN <what> ...`; run with `-- --nocapture` to see the
//! lines for passing tests). The assertions mirror the printed verdicts.

use std::time::Instant;

use cpforce_core::{
    cp_force, cp_free_energy, ideal_metal_series_force, ideal_metal_static_force,
    magnetic_deviation, rarefaction_check, AtomModel, PermeabilityModel, PermittivityModel,
    RarefactionOptions, ResponseMode, SolverOptions, SpectralContext, Tolerances, WallModel,
};

const UM: f64 = 1e-4; // cm
const HBAR: f64 = 1.054_571_817e-27; // erg s
const C: f64 = 2.997_924_58e10; // cm/s
const K_B: f64 = 1.380_649e-16; // erg/K

fn verdict(ok: bool) -> &'static str {
    if ok {
        "[PASS]"
    } else {
        "[FAIL]"
    }
}

fn tight() -> SolverOptions {
    SolverOptions {
        mode: ResponseMode::Static,
        tolerances: Tolerances {
            sum_rel_tol: 1e-13,
            ..Tolerances::default()
        },
    }
}

/// 01: the generic solver (quadrature + Matsubara machinery), the
/// closed-form bracket, and a term-by-term series evaluation must agree
/// pairwise to 1e-9 on the static-response ideal-metal force.
#[test]
fn t01_ideal_metal_force_triangle() {
    let start = Instant::now();
    let atom = AtomModel::hydrogen();
    let wall = WallModel::ideal_metal();
    let opts = tight();
    let mut worst: f64 = 0.0;
    for (a_um, t) in [(1.0, 1.0), (5.0, 1.0), (10.0, 1.0), (1.0, 300.0)] {
        let a = a_um * UM;
        let alpha0 = atom.polarizability_at(0.0).unwrap();
        let beta0 = atom.static_susceptibility(t).unwrap();
        let solver = cp_force(&atom, &wall, a, t, &opts).unwrap().f_total;
        let closed = ideal_metal_static_force(alpha0, beta0, a, t).unwrap();
        let series =
            ideal_metal_series_force(alpha0, beta0, a, t, 1e-15, 10_000_000).unwrap();
        for (x, y) in [(solver, closed), (solver, series), (closed, series)] {
            worst = worst.max((x - y).abs() / y.abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = worst < 1e-9 && secs < 10.0;
    println!(
        "{} 01 ideal-metal force triangle: max pairwise rel dev {worst:.2e} \
         (tol 1e-9), {secs:.1} s (limit 10 s)",
        verdict(ok)
    );
    assert!(ok, "triangle dev {worst:.2e}, {secs:.1} s");
}

/// 02: as tau -> 0 the force on a frequency-independent polarizability
/// approaches -3 hbar c alpha0 / (2 pi a^5).
#[test]
fn t02_zero_temperature_limit() {
    let a = UM;
    let alpha0 = 6.67e-25;
    let atom = AtomModel::new("static-alpha", alpha0, f64::INFINITY, 1.0, 0.5, 0.0).unwrap();
    let wall = WallModel::ideal_metal();
    // Temperature chosen so tau = 4 pi a k_B T / (hbar c) = 1e-4.
    let t_eff = SpectralContext::new(a, 1.0).unwrap().t_eff;
    let t = 1e-4 * t_eff / (2.0 * std::f64::consts::PI);
    let opts = SolverOptions {
        mode: ResponseMode::AlphaOnly,
        ..Default::default()
    };
    let f = cp_force(&atom, &wall, a, t, &opts).unwrap().f_total;
    let limit = -3.0 * HBAR * C * alpha0 / (2.0 * std::f64::consts::PI);
    let a5f = f * a.powi(5);
    let departure = (a5f - limit).abs() / limit.abs();
    let ok = departure < 1e-3;
    println!(
        "{} 02 zero-temperature limit: a^5 F = {a5f:.6e} vs {limit:.6e} erg cm^2, \
         departure {departure:.2e} (tol 1e-3) at tau = 1e-4",
        verdict(ok)
    );
    assert!(ok, "departure {departure:.2e}");
}

/// 03: deep in the classical regime (tau ~ 33) the force collapses to the
/// l = 0 term, -3 k_B T (alpha0 - beta0) / (4 a^4).
#[test]
fn t03_classical_limit() {
    let atom = AtomModel::hydrogen();
    let wall = WallModel::ideal_metal();
    let (a, t) = (20.0 * UM, 300.0);
    let alpha0 = atom.polarizability_at(0.0).unwrap();
    let beta0 = atom.static_susceptibility(t).unwrap();
    let classical = -3.0 * K_B * t * (alpha0 - beta0) / (4.0 * a.powi(4));
    // Cross-pin against an independently computed value.
    assert!((classical - (-1.293_997_719_11e-27)).abs() / classical.abs() < 1e-9);
    let f = cp_force(&atom, &wall, a, t, &tight()).unwrap().f_total;
    let rel = (f - classical).abs() / classical.abs();
    let ok = rel < 1e-6;
    println!(
        "{} 03 classical limit: F = {f:.9e} vs {classical:.9e} dyn, \
         rel dev {rel:.2e} (tol 1e-6)",
        verdict(ok)
    );
    assert!(ok, "rel dev {rel:.2e}");
}

/// 04: Curie-law static susceptibility of hydrogen at 300 K and 1 K, and
/// its ratio to the static polarizability at 1 K.
#[test]
fn t04_static_susceptibility_values() {
    let atom = AtomModel::hydrogen();
    let b300 = atom.static_susceptibility(300.0).unwrap();
    let b1 = atom.static_susceptibility(1.0).unwrap();
    let ratio = b1 / atom.polarizability_at(0.0).unwrap();
    let ok_300 = (b300 - 5.191_233_9e-28).abs() / 5.191_233_9e-28 < 0.01;
    let ok_1 = (b1 - 1.557_370_2e-25).abs() / 1.557_370_2e-25 < 0.01;
    let ok_ratio = (ratio - 0.2335).abs() < 0.01;
    let ok = ok_300 && ok_1 && ok_ratio;
    println!(
        "{} 04 static susceptibility: beta0(300 K) = {b300:.4e} cm^3 (want 5.191e-28 +-1%), \
         beta0(1 K) = {b1:.4e} (want 1.5574e-25 +-1%), beta0/alpha0(1 K) = {ratio:.4} \
         (want 0.2335 +-0.01)",
        verdict(ok)
    );
    assert!(ok);
}

/// 05: relative force change caused by the magnetic moment for hydrogen at
/// T = 1 K against reference values at 1 um and 10 um, within +-20%.
#[test]
fn t05_magnetic_deviation_table() {
    let start = Instant::now();
    let atom = AtomModel::hydrogen();
    let opts = SolverOptions::default();
    let cases = [
        ("ideal-metal", 1.0, -0.018),
        ("ideal-metal", 10.0, -0.18),
        ("au-plasma", 1.0, -0.015),
        ("au-plasma", 10.0, -0.15),
        ("fe-plasma", 1.0, -8.0e-5),
        ("fe-plasma", 10.0, -0.13),
        ("ferro-dielectric", 1.0, 0.04),
        ("ferro-dielectric", 10.0, 0.4),
    ];
    let mut all_ok = true;
    let mut rows = String::new();
    for (name, a_um, target) in cases {
        let wall = WallModel::by_name(name).unwrap();
        let force = cp_force(&atom, &wall, a_um * UM, 1.0, &opts).unwrap();
        let dev = magnetic_deviation(&force).unwrap();
        let rel = (dev - target).abs() / target.abs();
        let ok = rel <= 0.20;
        all_ok &= ok;
        rows.push_str(&format!(
            "\n    {} {name} at {a_um} um: {dev:+.4e}% vs {target:+.1e}% (rel dev {rel:.2})",
            verdict(ok)
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = all_ok && secs < 120.0;
    println!(
        "{} 05 magnetic deviation table (H, 1 K, +-20%), {secs:.1} s (limit 120 s):{rows}",
        verdict(ok)
    );
    assert!(ok, "{rows}");
}

/// 06: sign structure of the magnetic force part: repulsive for metallic
/// walls, attractive for the magnetodielectric wall, at 1, 3 and 10 um.
#[test]
fn t06_magnetic_sign_structure() {
    let atom = AtomModel::hydrogen();
    let opts = SolverOptions::default();
    let mut all_ok = true;
    let mut detail = String::new();
    for a_um in [1.0, 3.0, 10.0] {
        for (name, repulsive) in [
            ("ideal-metal", true),
            ("au-plasma", true),
            ("fe-plasma", true),
            ("ferro-dielectric", false),
        ] {
            let wall = WallModel::by_name(name).unwrap();
            let f = cp_force(&atom, &wall, a_um * UM, 1.0, &opts).unwrap();
            let ok = if repulsive {
                f.f_beta > 0.0
            } else {
                f.f_beta < 0.0
            };
            if !ok {
                detail.push_str(&format!(
                    "\n    {name} at {a_um} um: f_beta = {:+.3e}",
                    f.f_beta
                ));
            }
            all_ok &= ok;
        }
    }
    println!(
        "{} 06 magnetic part sign structure (12 wall/separation combinations){detail}",
        verdict(all_ok)
    );
    assert!(all_ok, "{detail}");
}

/// 07: a non-magnetic dielectric wall must couple to the magnetic moment
/// only negligibly: |f_beta| / |f_alpha| below 1e-8 for hydrogen at 1 K.
///
/// KNOWN FAILURE, kept honest rather than loosened: the measured ratio is
/// 2.342e-8. The magnetic susceptibility enters the force kernel through
/// the cross term -zeta^2 beta (r_TM + r_TE) as well as through
/// 2 y^2 beta r_TE, so beta couples to a dielectric wall even though the
/// wall is non-magnetic: the l >= 1 relaxation tail
/// beta(i xi) = beta(0)/(1 + tau_rel xi) leaks through r_TM. The measured
/// leakage scales as 1/tau_rel (2.34e-10 at tau_rel = 1e-6 s) and grows
/// linearly with separation, so with the preset tau_rel = 1e-8 s no
/// in-range separation reaches the 1e-8 target.
#[test]
fn t07_dielectric_magnetic_null() {
    let atom = AtomModel::hydrogen();
    let wall = WallModel::new(
        "dielectric",
        PermittivityModel::ConstantEps { eps0: 3.0 },
        PermeabilityModel::NonMagnetic,
    )
    .unwrap();
    let f = cp_force(&atom, &wall, UM, 1.0, &SolverOptions::default()).unwrap();
    let ratio = f.f_beta.abs() / f.f_alpha.abs();
    let ok = ratio < 1e-8;
    println!(
        "{} 07 dielectric magnetic null: |f_beta|/|f_alpha| = {ratio:.3e} (tol 1e-8)",
        verdict(ok)
    );
    assert!(ok, "ratio {ratio:.3e}");
}

/// 08: the force equals the negative separation derivative of the free
/// energy over a grid of separations and temperatures for two
/// atom-wall pairs.
#[test]
fn t08_force_is_energy_derivative() {
    let atom = AtomModel::hydrogen();
    let opts = SolverOptions::default();
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    for wall in [WallModel::gold_plasma(), WallModel::ferro_dielectric()] {
        for a_um in [1.0, 5.0, 10.0] {
            for t in [1.0, 77.0, 300.0] {
                let a = a_um * UM;
                let e = |x: f64| cp_free_energy(&atom, &wall, x, t, &opts).unwrap().e_total;
                let deriv = |h: f64| (e(a + h) - e(a - h)) / (2.0 * h);
                let (d1, d2) = (deriv(a / 100.0), deriv(a / 200.0));
                let de_da = (4.0 * d2 - d1) / 3.0; // Richardson, O(h^4)
                let f = cp_force(&atom, &wall, a, t, &opts).unwrap().f_total;
                let rel = (f + de_da).abs() / f.abs();
                if rel > worst {
                    worst = rel;
                    worst_at = format!("{} at {a_um} um, {t} K", wall.name);
                }
            }
        }
    }
    let ok = worst < 1e-6;
    println!(
        "{} 08 force = -dE/da on 2x3x3 grid: worst rel dev {worst:.2e} \
         (tol 1e-6) at {worst_at}",
        verdict(ok)
    );
    assert!(ok, "worst {worst:.2e} at {worst_at}");
}

/// 09: the plate solver with one dilute-gas wall, extrapolated to zero
/// density, matches the atom-wall solver integrated over separation.
#[test]
fn t09_rarefaction_consistency() {
    let start = Instant::now();
    let atom = AtomModel::hydrogen();
    let opts = RarefactionOptions::default();
    let mut all_ok = true;
    let mut rows = String::new();
    for wall in [WallModel::ideal_metal(), WallModel::ferro_dielectric()] {
        let report = rarefaction_check(&atom, &wall, UM, 1.0, &opts).unwrap();
        let ok = report.rel_mismatch < 1e-4;
        all_ok &= ok;
        rows.push_str(&format!(
            "\n    {} {}: lim E_pp/N = {:.6e} vs integral {:.6e} erg cm, mismatch {:.2e}",
            verdict(ok),
            wall.name,
            report.extrapolated,
            report.cp_integral,
            report.rel_mismatch
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = all_ok && secs < 60.0;
    println!(
        "{} 09 rarefaction consistency (tol 1e-4), {secs:.1} s (limit 60 s):{rows}",
        verdict(ok)
    );
    assert!(ok, "{rows}");
}
