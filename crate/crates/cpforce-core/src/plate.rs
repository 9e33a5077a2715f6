//! Free energy of two parallel thick walls, and the rarefaction
//! consistency check connecting it to the single-atom result.
//!
//! Per unit area, two walls separated by a at temperature T carry
//!
//! ```text
//! E_pp(a, T) = (k_B T / 8 pi a^2) sum'_l int_{zeta_l}^inf y dy
//!              [ ln(1 - r1_tm r2_tm e^(-y)) + ln(1 - r1_te r2_te e^(-y)) ]
//! ```
//!
//! in erg/cm^2 (negative = binding). One of the walls may be a dilute gas
//! of atoms with number density N, whose response enters through the
//! deficits eps - 1 = 4 pi N alpha(i xi) and mu - 1 = 4 pi N beta(i xi; T).
//!
//! In the rarefied limit the slab becomes a stack of independent atoms, so
//! E_pp / N must approach the single-atom free energy integrated over the
//! atom-wall distance: lim_{N->0} E_pp(a)/N = int_a^inf E_atom(z) dz.
//! [`rarefaction_check`] evaluates both sides independently (the left by
//! Richardson extrapolation in N, the right by quadrature over z through
//! the atom-wall solver) and reports their relative mismatch, which ties
//! the two solvers to each other with no shared formula beyond the
//! reflection coefficients.

use std::cell::RefCell;

use crate::atoms::AtomModel;
use crate::constants::K_BOLTZMANN;
use crate::cp::{free_energy_impl, ResponseMode, SolverOptions};
use crate::error::{Error, Result};
use crate::materials::WallModel;
use crate::reflection::SurfaceResponse;
use crate::spectral::{
    adaptive_panels, integrate_tail, primed_sum_split, ConvergenceReport, SpectralContext,
    SplitTerm, Tolerances,
};

/// Largest static electric deficit 4 pi N alpha(0) accepted as "dilute".
const DILUTE_DEFICIT_LIMIT: f64 = 1e-3;

/// A rarefied gas of identical atoms acting as a wall material.
#[derive(Debug, Clone)]
pub struct DiluteGasWall {
    pub atom: AtomModel,
    /// Number density, cm^-3.
    pub number_density: f64,
}

impl DiluteGasWall {
    /// Guard that the gas is actually dilute: 4 pi N alpha(0) must stay
    /// below 1e-3 so that higher orders in N are negligible by
    /// construction.
    pub fn new(atom: AtomModel, number_density: f64) -> Result<Self> {
        if !(number_density > 0.0) || !number_density.is_finite() {
            return Err(Error::invalid(format!(
                "number density must be positive and finite, got {number_density} cm^-3"
            )));
        }
        let static_deficit =
            4.0 * std::f64::consts::PI * number_density * atom.polarizability_at(0.0)?;
        if static_deficit >= DILUTE_DEFICIT_LIMIT {
            return Err(Error::invalid(format!(
                "gas is not dilute: 4 pi N alpha(0) = {static_deficit:.3e} >= {DILUTE_DEFICIT_LIMIT:.0e}"
            )));
        }
        Ok(DiluteGasWall {
            atom,
            number_density,
        })
    }
}

/// One side of a plate-plate configuration.
#[derive(Debug, Clone)]
pub enum PlateWall {
    Bulk(WallModel),
    Dilute(DiluteGasWall),
}

impl PlateWall {
    fn response(&self, l: u64, xi: f64, omega_c: f64, t_k: f64) -> Result<SurfaceResponse> {
        match self {
            PlateWall::Bulk(wall) => SurfaceResponse::for_wall(wall, l, xi, omega_c),
            PlateWall::Dilute(gas) => {
                let four_pi_n = 4.0 * std::f64::consts::PI * gas.number_density;
                let eps_def = four_pi_n * gas.atom.polarizability_at(xi)?;
                let mu_def = four_pi_n * gas.atom.magnetic_susceptibility_at(xi, t_k)?;
                let zeta = xi / omega_c;
                let zeta2_def = zeta * zeta * (eps_def + mu_def + eps_def * mu_def);
                Ok(SurfaceResponse::from_deficits(eps_def, mu_def, zeta2_def))
            }
        }
    }
}

/// Plate-plate free energy per unit area.
#[derive(Debug, Clone, Copy)]
pub struct PlateFreeEnergy {
    /// erg/cm^2; negative values bind the walls.
    pub e_per_area: f64,
    pub report: ConvergenceReport,
}

/// Free energy per unit area of two thick walls at separation `a_cm` (cm)
/// and temperature `t_k` (K).
pub fn plate_free_energy(
    wall_1: &PlateWall,
    wall_2: &PlateWall,
    a_cm: f64,
    t_k: f64,
    tolerances: &Tolerances,
) -> Result<PlateFreeEnergy> {
    let ctx = SpectralContext::new(a_cm, t_k)?;
    let (sum, _, report) = primed_sum_split(
        |l| {
            let xi = ctx.xi(l);
            let zeta = ctx.zeta(l);
            let r1 = wall_1.response(l, xi, ctx.omega_c, t_k)?;
            let r2 = wall_2.response(l, xi, ctx.omega_c, t_k)?;
            let (value, err) = integrate_tail(
                |y| {
                    let a = r1.reflection(y);
                    let b = r2.reflection(y);
                    let decay = (-y).exp();
                    y * ((-a.tm * b.tm * decay).ln_1p() + (-a.te * b.te * decay).ln_1p())
                },
                zeta,
                tolerances.quad_rel_tol,
            )?;
            Ok(SplitTerm {
                primary: value,
                secondary: 0.0,
                quad_err_abs: err,
            })
        },
        tolerances.sum_rel_tol,
        tolerances.l_max,
    )?;
    let prefactor = K_BOLTZMANN * t_k / (8.0 * std::f64::consts::PI * a_cm * a_cm);
    Ok(PlateFreeEnergy {
        e_per_area: prefactor * sum,
        report,
    })
}

/// Configuration of the rarefaction consistency check.
#[derive(Debug, Clone)]
pub struct RarefactionOptions {
    /// Gas densities used for the N -> 0 extrapolation, cm^-3, strictly
    /// decreasing. The defaults put all points deep in the linear regime.
    pub number_densities: Vec<f64>,
    /// Tolerances for the inner plate and atom-wall solves.
    pub solver_tolerances: Tolerances,
    /// Relative tolerance of the outer z-integration.
    pub z_quad_rel_tol: f64,
}

impl Default for RarefactionOptions {
    fn default() -> Self {
        RarefactionOptions {
            number_densities: vec![1e12, 1e11, 1e10],
            solver_tolerances: Tolerances {
                sum_rel_tol: 1e-10,
                quad_rel_tol: 1e-10,
                ..Tolerances::default()
            },
            z_quad_rel_tol: 1e-7,
        }
    }
}

/// One plate-plate evaluation of the rarefaction ladder.
#[derive(Debug, Clone, Copy)]
pub struct RarefactionPoint {
    /// Gas density, cm^-3.
    pub number_density: f64,
    /// E_pp / N at this density, erg cm.
    pub energy_per_density: f64,
}

/// Outcome of the rarefaction consistency check.
#[derive(Debug, Clone)]
pub struct RarefactionReport {
    pub per_density: Vec<RarefactionPoint>,
    /// lim_{N->0} E_pp / N by polynomial extrapolation, erg cm.
    pub extrapolated: f64,
    /// int_a^inf E_atom(z) dz from the atom-wall solver, erg cm.
    pub cp_integral: f64,
    /// |extrapolated - cp_integral| / |cp_integral|.
    pub rel_mismatch: f64,
}

/// Neville's algorithm: polynomial through (xs, ys) evaluated at x = 0.
fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = p.len();
    for j in 1..n {
        for i in 0..n - j {
            p[i] = (-xs[i + j] * p[i] + xs[i] * p[i + 1]) / (xs[i] - xs[i + j]);
        }
    }
    p[0]
}

/// Check that the plate-plate solver with one dilute-gas wall reproduces
/// the single-atom solver in the rarefied limit (see the module docs).
///
/// `wall` is the bulk side; the dilute side is built from `atom` at each
/// requested density. Fails with a diagnostic if the ladder of
/// E_pp / N values disagrees beyond its noise floor in a way that cannot
/// be extrapolated (non-monotone drift), or if any inner solve fails.
pub fn rarefaction_check(
    atom: &AtomModel,
    wall: &WallModel,
    a_cm: f64,
    t_k: f64,
    opts: &RarefactionOptions,
) -> Result<RarefactionReport> {
    let densities = &opts.number_densities;
    if densities.len() < 2 {
        return Err(Error::invalid(
            "rarefaction check needs at least two gas densities".to_string(),
        ));
    }
    if densities.windows(2).any(|w| !(w[0] > w[1])) || densities.iter().any(|&n| !(n > 0.0)) {
        return Err(Error::invalid(
            "gas densities must be positive and strictly decreasing".to_string(),
        ));
    }

    // Left side: E_pp / N ladder and its extrapolation to N = 0.
    let bulk = PlateWall::Bulk(wall.clone());
    let mut per_density = Vec::with_capacity(densities.len());
    let mut noise_floor = 0.0f64;
    for &n in densities {
        let gas = PlateWall::Dilute(DiluteGasWall::new(atom.clone(), n)?);
        let pp = plate_free_energy(&gas, &bulk, a_cm, t_k, &opts.solver_tolerances)?;
        let v = pp.e_per_area / n;
        noise_floor = noise_floor.max(10.0 * pp.report.est_rel_err() * v.abs());
        per_density.push(RarefactionPoint {
            number_density: n,
            energy_per_density: v,
        });
    }
    // The ladder must drift monotonically toward the limit; alternating
    // differences above the numerical noise floor mean the densities do
    // not probe the linear regime and the extrapolation is meaningless.
    let diffs: Vec<f64> = per_density
        .windows(2)
        .map(|w| w[0].energy_per_density - w[1].energy_per_density)
        .collect();
    for pair in diffs.windows(2) {
        if pair[0].abs() > noise_floor
            && pair[1].abs() > noise_floor
            && pair[0].signum() != pair[1].signum()
        {
            return Err(Error::RarefactionDiagnostic(format!(
                "E_pp/N ladder is non-monotone beyond its noise floor \
                 ({:+.3e} then {:+.3e}, floor {:.3e}); choose smaller densities",
                pair[0], pair[1], noise_floor
            )));
        }
    }
    let xs: Vec<f64> = densities.clone();
    let ys: Vec<f64> = per_density.iter().map(|p| p.energy_per_density).collect();
    let extrapolated = neville_at_zero(&xs, &ys);

    // Right side: integrate the atom-wall free energy over z in [a, inf)
    // via the substitution z = a / u, dz = (a / u^2) du with u in (0, 1].
    let solver_opts = SolverOptions {
        mode: ResponseMode::Full,
        tolerances: opts.solver_tolerances,
    };
    let captured: RefCell<Option<Error>> = RefCell::new(None);
    let mut integrand = |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        match free_energy_impl(atom, wall, a_cm / u, t_k, &solver_opts) {
            Ok(r) => r.e_total * a_cm / (u * u),
            Err(e) => {
                captured.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let panels = [0.0, 0.05, 0.2, 0.5, 0.8, 1.0];
    let quad = adaptive_panels(&mut integrand, &panels, opts.z_quad_rel_tol);
    if let Some(e) = captured.into_inner() {
        return Err(e);
    }
    let (cp_integral, _) = quad?;

    let rel_mismatch = (extrapolated - cp_integral).abs() / cp_integral.abs();
    Ok(RarefactionReport {
        per_density,
        extrapolated,
        cp_integral,
        rel_mismatch,
    })
}
