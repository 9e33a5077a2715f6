//! Matsubara summation and quadrature machinery.
//!
//! The finite-temperature quantities in this crate are primed sums over
//! Matsubara frequencies xi_l = 2 pi k_B T l / hbar (the l = 0 term enters
//! with weight 1/2), where each term is an integral over the dimensionless
//! transverse variable y on [zeta_l, infinity) with an overall e^(-y)
//! factor. This module provides:
//!
//! * [`SpectralContext`] - the derived scales (omega_c, zeta_1, T_eff, ...)
//!   for a given separation and temperature,
//! * [`primed_sum`] - compensated, deterministic evaluation of primed
//!   Matsubara sums with explicit convergence reporting,
//! * [`integrate_tail`] - adaptive panel quadrature for exponentially
//!   decaying integrands on a half-line,
//! * [`KahanSum`] - the compensated accumulator used throughout.
//!
//! Determinism: every routine here reduces in a fixed (ascending) order and
//! uses no randomness, so results are bit-reproducible run to run.

use std::sync::OnceLock;

use crate::constants::{HBAR, K_BOLTZMANN, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Default relative tolerance for Matsubara-sum truncation.
pub const DEFAULT_SUM_REL_TOL: f64 = 1e-12;
/// Default relative tolerance for each term's y-quadrature.
pub const DEFAULT_QUAD_REL_TOL: f64 = 1e-12;
/// Default cap on the Matsubara index.
pub const DEFAULT_L_MAX: u64 = 1_000_000;

/// Length of the finite integration window used by [`integrate_tail`].
/// Beyond lower + 60 the e^(-y) y^3 envelope contributes < 1e-21 of the
/// total, far below any tolerance this crate accepts.
const TAIL_WINDOW: f64 = 60.0;

/// Maximum bisection depth in the adaptive quadrature.
const MAX_DEPTH: u32 = 48;

/// Number of consecutive negligible terms required to declare the
/// Matsubara sum converged.
const CONVERGED_STREAK: u32 = 3;

/// Numerical tolerances and caps shared by the solvers.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative truncation tolerance for the Matsubara sum.
    pub sum_rel_tol: f64,
    /// Relative tolerance for each term's y-integral.
    pub quad_rel_tol: f64,
    /// Hard cap on the Matsubara index l.
    pub l_max: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sum_rel_tol: DEFAULT_SUM_REL_TOL,
            quad_rel_tol: DEFAULT_QUAD_REL_TOL,
            l_max: DEFAULT_L_MAX,
        }
    }
}

/// Compensated (Kahan-Neumaier) accumulator.
///
/// Keeps a running correction term so that long sums of terms with widely
/// varying magnitude lose almost no precision.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add one term.
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Current compensated value.
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Derived frequency/length scales for a given separation and temperature.
///
/// All fields are in Gaussian-CGS units; `zeta_1` and `tau_norm` are
/// dimensionless and mathematically identical (both equal
/// 4 pi a k_B T / (hbar c)); the constructor asserts their agreement.
#[derive(Debug, Clone, Copy)]
pub struct SpectralContext {
    /// Atom-wall separation, cm.
    pub a: f64,
    /// Temperature, K.
    pub t: f64,
    /// Characteristic angular frequency c / (2a), rad/s.
    pub omega_c: f64,
    /// First Matsubara angular frequency 2 pi k_B T / hbar, rad/s.
    pub xi_1: f64,
    /// First dimensionless Matsubara frequency xi_1 / omega_c.
    pub zeta_1: f64,
    /// Effective temperature, k_B T_eff = hbar c / (2a), K.
    pub t_eff: f64,
    /// Normalized temperature 2 pi T / T_eff (equals zeta_1).
    pub tau_norm: f64,
}

impl SpectralContext {
    /// Build the context for separation `a_cm` (cm) and temperature `t_k` (K).
    pub fn new(a_cm: f64, t_k: f64) -> Result<Self> {
        if !(a_cm > 0.0) || !a_cm.is_finite() {
            return Err(Error::domain(format!(
                "separation must be positive and finite, got {a_cm} cm"
            )));
        }
        if !(t_k > 0.0) || !t_k.is_finite() {
            return Err(Error::domain(format!(
                "temperature must be positive and finite, got {t_k} K"
            )));
        }
        let omega_c = SPEED_OF_LIGHT / (2.0 * a_cm);
        let xi_1 = matsubara_frequency(1, t_k)?;
        let zeta_1 = xi_1 / omega_c;
        let t_eff = HBAR * SPEED_OF_LIGHT / (2.0 * a_cm * K_BOLTZMANN);
        let tau_norm = 2.0 * std::f64::consts::PI * t_k / t_eff;
        let agreement = (zeta_1 - tau_norm).abs() / tau_norm;
        assert!(
            agreement < 1e-12,
            "zeta_1 and tau_norm must coincide (rel dev {agreement:.3e})"
        );
        Ok(SpectralContext {
            a: a_cm,
            t: t_k,
            omega_c,
            xi_1,
            zeta_1,
            t_eff,
            tau_norm,
        })
    }

    /// Matsubara angular frequency xi_l, rad/s.
    #[inline]
    pub fn xi(&self, l: u64) -> f64 {
        l as f64 * self.xi_1
    }

    /// Dimensionless Matsubara frequency zeta_l = xi_l / omega_c.
    #[inline]
    pub fn zeta(&self, l: u64) -> f64 {
        l as f64 * self.zeta_1
    }
}

/// Matsubara angular frequency xi_l = 2 pi k_B T l / hbar, rad/s.
pub fn matsubara_frequency(l: u64, t_k: f64) -> Result<f64> {
    if !(t_k > 0.0) || !t_k.is_finite() {
        return Err(Error::domain(format!(
            "temperature must be positive and finite, got {t_k} K"
        )));
    }
    Ok(2.0 * std::f64::consts::PI * K_BOLTZMANN * t_k * (l as f64) / HBAR)
}

/// Convergence diagnostics for a primed Matsubara sum.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceReport {
    /// Number of terms evaluated, counting l = 0.
    pub terms_used: u64,
    /// |last evaluated term| / |total|.
    pub last_term_ratio: f64,
    /// Accumulated relative quadrature error estimate of the total.
    pub quad_error_estimate: f64,
    /// Whether the truncation criterion was met before the l cap.
    pub converged: bool,
}

impl ConvergenceReport {
    /// Combined relative error estimate: quadrature plus truncation.
    pub fn est_rel_err(&self) -> f64 {
        self.quad_error_estimate + self.last_term_ratio
    }
}

/// One term of a split primed sum: two components accumulated separately
/// (with a shared truncation criterion on their sum) plus an absolute
/// quadrature error contribution.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SplitTerm {
    pub primary: f64,
    pub secondary: f64,
    pub quad_err_abs: f64,
}

/// Evaluate a primed Matsubara sum with two separately-accumulated
/// components. Terms are reduced in ascending l with compensated
/// accumulation. Truncation: three consecutive terms with
/// |primary + secondary| <= rel_tol * |running total|.
pub(crate) fn primed_sum_split<F>(
    mut term: F,
    rel_tol: f64,
    l_max: u64,
) -> Result<(f64, f64, ConvergenceReport)>
where
    F: FnMut(u64) -> Result<SplitTerm>,
{
    if !(rel_tol > 0.0) || !rel_tol.is_finite() {
        return Err(Error::domain(format!(
            "sum tolerance must be positive and finite, got {rel_tol}"
        )));
    }
    let mut acc_primary = KahanSum::new();
    let mut acc_secondary = KahanSum::new();
    let mut acc_err = KahanSum::new();

    let t0 = term(0)?;
    acc_primary.add(0.5 * t0.primary);
    acc_secondary.add(0.5 * t0.secondary);
    acc_err.add(0.5 * t0.quad_err_abs);

    let mut terms_used = 1u64;
    let mut streak = 0u32;
    let mut last_ratio = f64::INFINITY;
    let mut converged = false;

    for l in 1..=l_max {
        let t = term(l)?;
        acc_primary.add(t.primary);
        acc_secondary.add(t.secondary);
        acc_err.add(t.quad_err_abs);
        terms_used += 1;

        let total = acc_primary.value() + acc_secondary.value();
        let term_mag = (t.primary + t.secondary).abs();
        last_ratio = if total != 0.0 {
            term_mag / total.abs()
        } else if term_mag == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if term_mag <= rel_tol * total.abs() {
            streak += 1;
            if streak >= CONVERGED_STREAK {
                converged = true;
                break;
            }
        } else {
            streak = 0;
        }
    }

    let total = acc_primary.value() + acc_secondary.value();
    let quad_error_estimate = if total != 0.0 {
        acc_err.value() / total.abs()
    } else {
        acc_err.value()
    };
    let report = ConvergenceReport {
        terms_used,
        last_term_ratio: last_ratio,
        quad_error_estimate,
        converged,
    };
    if !converged {
        return Err(Error::SumNotConverged { report });
    }
    Ok((acc_primary.value(), acc_secondary.value(), report))
}

/// Evaluate a primed Matsubara sum: term(0)/2 + sum over l >= 1 of term(l).
///
/// Terms are accumulated in ascending l with compensated summation; the sum
/// is truncated once three consecutive terms fall below `rel_tol` times the
/// running total. Exceeding `l_max` without meeting the criterion is an
/// error carrying the convergence report.
pub fn primed_sum<F>(mut term: F, rel_tol: f64, l_max: u64) -> Result<(f64, ConvergenceReport)>
where
    F: FnMut(u64) -> f64,
{
    let (value, _, report) = primed_sum_split(
        |l| {
            Ok(SplitTerm {
                primary: term(l),
                secondary: 0.0,
                quad_err_abs: 0.0,
            })
        },
        rel_tol,
        l_max,
    )?;
    Ok((value, report))
}

// ---------------------------------------------------------------------------
// Gauss-Legendre panel quadrature
// ---------------------------------------------------------------------------

const GL_N: usize = 15;

/// Nodes and weights of the 15-point Gauss-Legendre rule on [-1, 1],
/// computed once by Newton iteration on the Legendre recurrence.
fn gauss_legendre_15() -> &'static ([f64; GL_N], [f64; GL_N]) {
    static RULE: OnceLock<([f64; GL_N], [f64; GL_N])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_N;
        let mut nodes = [0.0; GL_N];
        let mut weights = [0.0; GL_N];
        for i in 0..n {
            // Chebyshev-based initial guess, then Newton on P_n(x) = 0.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// 15-point Gauss-Legendre estimate on [a, b], with a finiteness check on
/// every sample.
fn gl15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<f64> {
    let (nodes, weights) = gauss_legendre_15();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        let y = mid + half * x;
        let v = f(y);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: "sampling quadrature integrand",
                y,
            });
        }
        acc += w * v;
    }
    Ok(half * acc)
}

/// Recursive bisection with an embedded coarse/fine error estimate.
fn refine<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    eps_abs: f64,
    depth: u32,
    value: &mut KahanSum,
    err: &mut KahanSum,
) -> Result<()> {
    let coarse = gl15(f, a, b)?;
    let mid = 0.5 * (a + b);
    let fine = gl15(f, a, mid)? + gl15(f, mid, b)?;
    let delta = (fine - coarse).abs();
    if delta <= eps_abs || depth >= MAX_DEPTH {
        value.add(fine);
        err.add(delta);
        return Ok(());
    }
    refine(f, a, mid, 0.5 * eps_abs, depth + 1, value, err)?;
    refine(f, mid, b, 0.5 * eps_abs, depth + 1, value, err)
}

/// Adaptive Gauss-Legendre quadrature over a list of seed panels.
/// Returns (value, absolute error estimate).
pub(crate) fn adaptive_panels<F: FnMut(f64) -> f64>(
    f: &mut F,
    breakpoints: &[f64],
    rel_tol: f64,
) -> Result<(f64, f64)> {
    assert!(breakpoints.len() >= 2, "need at least one panel");
    // First pass: rough estimate to set the absolute refinement budget.
    let mut rough = KahanSum::new();
    for w in breakpoints.windows(2) {
        rough.add(gl15(f, w[0], w[1])?);
    }
    let span = breakpoints[breakpoints.len() - 1] - breakpoints[0];
    let eps_total = rel_tol * rough.value().abs();

    let mut value = KahanSum::new();
    let mut err = KahanSum::new();
    for w in breakpoints.windows(2) {
        let eps_panel = eps_total * (w[1] - w[0]) / span;
        refine(f, w[0], w[1], eps_panel, 0, &mut value, &mut err)?;
    }
    Ok((value.value(), err.value()))
}

/// Integrate an exponentially decaying integrand over [lower, infinity).
///
/// The quadrature covers [lower, lower + 60] with adaptive Gauss-Legendre
/// panels; the remainder is bounded analytically using the e^(-y) y^3
/// envelope of every integrand in this crate and added to the error
/// estimate (not to the value).
///
/// Returns (value, absolute error estimate).
pub fn integrate_tail<F: FnMut(f64) -> f64>(
    mut f: F,
    lower: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    if !lower.is_finite() || lower < 0.0 {
        return Err(Error::domain(format!(
            "integration lower bound must be finite and non-negative, got {lower}"
        )));
    }
    if !(rel_tol > 0.0) || !rel_tol.is_finite() {
        return Err(Error::domain(format!(
            "quadrature tolerance must be positive and finite, got {rel_tol}"
        )));
    }
    // Panels grow roughly geometrically: fine near the lower edge where the
    // integrand peaks, coarse in the decaying tail.
    let offsets = [0.0, 1.0, 3.0, 7.0, 15.0, 31.0, TAIL_WINDOW];
    let breakpoints: Vec<f64> = offsets.iter().map(|o| lower + o).collect();
    let (value, mut err) = adaptive_panels(&mut f, &breakpoints, rel_tol)?;

    // Tail bound: for integrands dominated by y^3 e^(-y) beyond the window,
    // |int_U^inf f| <= |f(U)| * (U^3 + 3U^2 + 6U + 6) / U^3.
    let u = lower + TAIL_WINDOW;
    let fu = f(u);
    if !fu.is_finite() {
        return Err(Error::NonFinite {
            context: "sampling quadrature integrand",
            y: u,
        });
    }
    let tail_bound = fu.abs() * (((u + 3.0) * u + 6.0) * u + 6.0) / (u * u * u);
    err += tail_bound;
    Ok((value, err))
}
