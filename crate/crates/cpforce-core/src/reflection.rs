//! Reflection coefficients at imaginary frequencies.
//!
//! In the dimensionless variables used throughout the crate (zeta = the
//! scaled Matsubara frequency, y = the scaled transverse momentum with
//! y >= zeta), the Fresnel coefficients of a thick wall are
//!
//! ```text
//! r_tm = (eps y - k) / (eps y + k),   r_te = (mu y - k) / (mu y + k),
//! k = sqrt(y^2 + zeta^2 (eps mu - 1))
//! ```
//!
//! Evaluating these differences directly loses precision when eps and mu
//! are close to 1 (e.g. a dilute gas wall, where eps - 1 ~ 1e-12), so the
//! implementation works with the deficits d_eps = eps - 1, d_mu = mu - 1
//! and the rationalized, cancellation-free forms
//!
//! ```text
//! r_tm = [y^2 d_eps (2 + d_eps) - Z] / (eps y + k)^2
//! r_te = [y^2 d_mu  (2 + d_mu ) - Z] / (mu  y + k)^2,   Z = zeta^2 (eps mu - 1)
//! ```
//!
//! which are exact algebraic rearrangements. Z itself is assembled from
//! the finite combination xi^2 (eps - 1) so that the plasma model's
//! diverging zero-frequency permittivity never appears as an operand:
//! Z = (2a/c)^2 [mu xi^2(eps - 1) + (mu - 1) xi^2].

use crate::error::{Error, Result};
use crate::materials::{PermittivityModel, WallModel};

/// TM ("p") and TE ("s") reflection coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub tm: f64,
    pub te: f64,
}

/// Frequency-resolved wall response at one Matsubara index, prepared once
/// per index so that the y-quadrature only performs cheap arithmetic.
#[derive(Debug, Clone, Copy)]
pub(crate) enum SurfaceResponse {
    /// Perfect reflector: (r_tm, r_te) = (1, -1) for every y.
    Ideal,
    Finite {
        /// eps - 1; `f64::INFINITY` marks a diverging permittivity with
        /// finite Z (plasma model at xi = 0), where r_tm = 1 identically.
        eps_deficit: f64,
        /// mu - 1.
        mu_deficit: f64,
        /// Z = zeta^2 (eps mu - 1), always finite and non-negative.
        zeta2_def: f64,
    },
}

impl SurfaceResponse {
    /// Prepare the response of `wall` at Matsubara index `l` with
    /// imaginary frequency `xi` (rad/s); `omega_c` = c/(2a) fixes the
    /// length scale.
    pub(crate) fn for_wall(wall: &WallModel, l: u64, xi: f64, omega_c: f64) -> Result<Self> {
        if let PermittivityModel::IdealMetal = wall.permittivity {
            return Ok(SurfaceResponse::Ideal);
        }
        let mu = wall.permeability.permeability_at(l);
        let eps_deficit = match wall.permittivity {
            PermittivityModel::IdealMetal => unreachable!(),
            PermittivityModel::Plasma { omega_p } => {
                if xi == 0.0 {
                    f64::INFINITY
                } else {
                    let r = omega_p / xi;
                    r * r
                }
            }
            PermittivityModel::ConstantEps { eps0 } => eps0 - 1.0,
        };
        let xi2_eps_deficit = wall.permittivity.eps_xi_squared_deficit(xi)?;
        let two_a_over_c = 1.0 / omega_c;
        let zeta2_def =
            two_a_over_c * two_a_over_c * (mu * xi2_eps_deficit + (mu - 1.0) * xi * xi);
        Ok(SurfaceResponse::Finite {
            eps_deficit,
            mu_deficit: mu - 1.0,
            zeta2_def,
        })
    }

    /// Response assembled directly from deficits (dilute-gas walls).
    pub(crate) fn from_deficits(eps_deficit: f64, mu_deficit: f64, zeta2_def: f64) -> Self {
        SurfaceResponse::Finite {
            eps_deficit,
            mu_deficit,
            zeta2_def,
        }
    }

    /// Reflection coefficients at transverse variable y >= 0.
    pub(crate) fn reflection(&self, y: f64) -> ReflectionPair {
        match *self {
            SurfaceResponse::Ideal => ReflectionPair { tm: 1.0, te: -1.0 },
            SurfaceResponse::Finite {
                eps_deficit,
                mu_deficit,
                zeta2_def,
            } => {
                if y == 0.0 && zeta2_def == 0.0 {
                    // k -> y limit: r_tm -> (eps-1)/(eps+1), r_te -> (mu-1)/(mu+1)
                    let tm = if eps_deficit.is_infinite() {
                        1.0
                    } else {
                        eps_deficit / (2.0 + eps_deficit)
                    };
                    return ReflectionPair {
                        tm,
                        te: mu_deficit / (2.0 + mu_deficit),
                    };
                }
                let k = (y * y + zeta2_def).sqrt();
                let tm = if eps_deficit.is_infinite() {
                    1.0
                } else {
                    let num = y * y * eps_deficit * (2.0 + eps_deficit) - zeta2_def;
                    let den = (1.0 + eps_deficit) * y + k;
                    num / (den * den)
                };
                let num = y * y * mu_deficit * (2.0 + mu_deficit) - zeta2_def;
                let den = (1.0 + mu_deficit) * y + k;
                ReflectionPair {
                    tm,
                    te: num / (den * den),
                }
            }
        }
    }
}

/// Reflection coefficients of `wall` at dimensionless Matsubara frequency
/// `zeta`, transverse variable `y` (y >= zeta >= 0), Matsubara index `l`
/// (which selects the permeability) and characteristic frequency
/// `omega_c` = c/(2a) (rad/s).
pub fn reflection_at(
    wall: &WallModel,
    zeta: f64,
    y: f64,
    l: u64,
    omega_c: f64,
) -> Result<ReflectionPair> {
    if !(omega_c > 0.0) || !omega_c.is_finite() {
        return Err(Error::domain(format!(
            "omega_c must be positive and finite, got {omega_c} rad/s"
        )));
    }
    if zeta < 0.0 || !zeta.is_finite() {
        return Err(Error::domain(format!(
            "zeta must be finite and >= 0, got {zeta}"
        )));
    }
    if !(y >= zeta) || !y.is_finite() {
        return Err(Error::domain(format!(
            "transverse variable must satisfy y >= zeta, got y = {y}, zeta = {zeta}"
        )));
    }
    let response = SurfaceResponse::for_wall(wall, l, zeta * omega_c, omega_c)?;
    Ok(response.reflection(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::PermeabilityModel;
    use proptest::prelude::*;

    const OMEGA_C_1UM: f64 = crate::constants::SPEED_OF_LIGHT / (2.0 * 1e-4);

    #[test]
    fn ideal_metal_reflects_perfectly() {
        let w = WallModel::ideal_metal();
        for (zeta, y) in [(0.0, 0.5), (0.1, 3.0), (5.0, 40.0)] {
            let r = reflection_at(&w, zeta, y, 1, OMEGA_C_1UM).unwrap();
            assert_eq!(r.tm, 1.0);
            assert_eq!(r.te, -1.0);
        }
    }

    #[test]
    fn vacuum_reflects_nothing() {
        let w = WallModel::vacuum();
        for (l, zeta, y) in [(0, 0.0, 1.0), (3, 0.3, 2.0)] {
            let r = reflection_at(&w, zeta, y, l, OMEGA_C_1UM).unwrap();
            assert_eq!(r.tm, 0.0);
            assert_eq!(r.te, 0.0);
        }
    }

    #[test]
    fn ferro_dielectric_static_coefficients() {
        // At zeta = 0: r_tm = (3-1)/(3+1) = 1/2, r_te = (100-1)/(100+1).
        let w = WallModel::ferro_dielectric();
        let r = reflection_at(&w, 0.0, 1.7, 0, OMEGA_C_1UM).unwrap();
        assert!((r.tm - 0.5).abs() < 1e-15, "tm = {}", r.tm);
        assert!((r.te - 99.0 / 101.0).abs() < 1e-15, "te = {}", r.te);
    }

    #[test]
    fn gold_zero_frequency_te_at_plasma_scale() {
        // l = 0 plasma: r_tm = 1 identically; at y equal to the scaled
        // plasma frequency, r_te = (1 - sqrt 2)/(1 + sqrt 2).
        let w = WallModel::gold_plasma();
        let omega_p = match w.permittivity {
            PermittivityModel::Plasma { omega_p } => omega_p,
            _ => unreachable!(),
        };
        let wp_scaled = omega_p / OMEGA_C_1UM; // = 2 a omega_p / c ~ 91.2
        assert!((wp_scaled - 91.219).abs() < 1e-2);
        let r = reflection_at(&w, 0.0, wp_scaled, 0, OMEGA_C_1UM).unwrap();
        assert_eq!(r.tm, 1.0);
        let expected = (1.0 - 2.0f64.sqrt()) / (1.0 + 2.0f64.sqrt());
        assert!(
            (r.te - expected).abs() < 1e-14,
            "te = {}, want {expected}",
            r.te
        );
    }

    #[test]
    fn constant_eps_approaches_ideal_metal_monotonically() {
        let mut last_tm = 0.0;
        let mut last_te = 0.0;
        for exp in [2, 4, 6, 8, 10] {
            let w = WallModel::new(
                "big-eps",
                PermittivityModel::ConstantEps {
                    eps0: 10f64.powi(exp),
                },
                PermeabilityModel::NonMagnetic,
            )
            .unwrap();
            let r = reflection_at(&w, 0.1, 1.0, 1, OMEGA_C_1UM).unwrap();
            assert!(r.tm > last_tm && r.tm < 1.0, "tm sequence broke at 1e{exp}");
            assert!(r.te < last_te && r.te > -1.0, "te sequence broke at 1e{exp}");
            last_tm = r.tm;
            last_te = r.te;
        }
        // tm converges like 1/eps, te only like 1/sqrt(eps).
        assert!(last_tm > 0.9999);
        assert!(last_te < -0.995);
    }

    #[test]
    fn zero_frequency_branch_is_continuous() {
        // Plasma deficit is frequency independent, so letting zeta -> 0
        // must land on the l = 0 branch.
        let au = WallModel::gold_plasma();
        for y in [0.5, 3.0, 95.0] {
            let r0 = reflection_at(&au, 0.0, y, 0, OMEGA_C_1UM).unwrap();
            let r = reflection_at(&au, 1e-8, y, 0, OMEGA_C_1UM).unwrap();
            assert!((r.tm - r0.tm).abs() < 1e-6);
            assert!((r.te - r0.te).abs() < 1e-6);
        }
        // Same within the l = 0 term of the magnetic wall (mu fixed at mu0).
        let fe = WallModel::iron_plasma();
        let r0 = reflection_at(&fe, 0.0, 2.0, 0, OMEGA_C_1UM).unwrap();
        let r = reflection_at(&fe, 1e-8, 2.0, 0, OMEGA_C_1UM).unwrap();
        assert!((r.tm - r0.tm).abs() < 1e-6);
        assert!((r.te - r0.te).abs() < 1e-6);
    }

    #[test]
    fn iron_zero_frequency_te_changes_sign() {
        // With mu0 = 1000 the l = 0 TE coefficient crosses zero near
        // y = omega_p_scaled / sqrt(mu0), producing the near-cancellation
        // characteristic of ferromagnetic metals.
        let fe = WallModel::iron_plasma();
        let omega_p = match fe.permittivity {
            PermittivityModel::Plasma { omega_p } => omega_p,
            _ => unreachable!(),
        };
        let y_cross = (omega_p / OMEGA_C_1UM) / 1000f64.sqrt();
        let lo = reflection_at(&fe, 0.0, 0.8 * y_cross, 0, OMEGA_C_1UM).unwrap();
        let hi = reflection_at(&fe, 0.0, 1.2 * y_cross, 0, OMEGA_C_1UM).unwrap();
        assert!(lo.te < 0.0 && hi.te > 0.0, "te: {} .. {}", lo.te, hi.te);
    }

    #[test]
    fn domain_violations_are_rejected() {
        let w = WallModel::gold_plasma();
        assert!(reflection_at(&w, 0.5, 0.4, 1, OMEGA_C_1UM).is_err()); // y < zeta
        assert!(reflection_at(&w, -0.1, 1.0, 1, OMEGA_C_1UM).is_err());
        assert!(reflection_at(&w, 0.1, 1.0, 1, 0.0).is_err());
    }

    proptest! {
        /// Reflection magnitudes never exceed 1 for physical parameters.
        #[test]
        fn magnitudes_bounded_by_unity(
            eps_def in 0.0f64..1e9,
            mu_def in 0.0f64..1e4,
            zeta in 0.0f64..20.0,
            dy in 0.0f64..40.0,
        ) {
            let y = zeta + dy;
            let z = zeta * zeta * (eps_def + mu_def + eps_def * mu_def);
            let r = SurfaceResponse::from_deficits(eps_def, mu_def, z).reflection(y);
            prop_assert!(r.tm.abs() <= 1.0 + 1e-12, "tm = {}", r.tm);
            prop_assert!(r.te.abs() <= 1.0 + 1e-12, "te = {}", r.te);
        }

        /// Non-magnetic walls: r_te <= 0 <= r_tm.
        #[test]
        fn non_magnetic_sign_structure(
            eps_def in 0.0f64..1e9,
            zeta in 0.0f64..20.0,
            dy in 1e-3f64..40.0,
        ) {
            let y = zeta + dy;
            let z = zeta * zeta * eps_def;
            let r = SurfaceResponse::from_deficits(eps_def, 0.0, z).reflection(y);
            prop_assert!(r.tm >= 0.0, "tm = {}", r.tm);
            prop_assert!(r.te <= 0.0, "te = {}", r.te);
        }
    }
}
