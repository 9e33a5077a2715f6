//! Atomic response models.
//!
//! An atom is characterized by a dynamic electric polarizability in the
//! single-oscillator form
//!
//! ```text
//! alpha(i xi) = alpha(0) / (1 + xi^2 / omega_a^2)
//! ```
//!
//! and, when it carries a permanent magnetic moment, by a paramagnetic
//! (Curie-law) magnetic susceptibility with a Debye relaxation factor:
//!
//! ```text
//! beta(i xi; T) = g^2 mu_B^2 J(J+1) / (3 k_B T) * 1 / (1 + tau_rel xi)
//! ```
//!
//! Both response functions are evaluated at imaginary frequency i*xi with
//! xi >= 0 in rad/s and are positive, monotonically decreasing in xi.

use crate::constants::{ev_to_angular_frequency, K_BOLTZMANN, MU_BOHR};
use crate::error::{Error, Result};

/// Ground-state atom with an electric-dipole resonance and an optional
/// permanent magnetic moment.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomModel {
    /// Identifier used in reports and CLI output.
    pub name: String,
    /// Static electric polarizability alpha(0), cm^3.
    pub alpha0: f64,
    /// Characteristic absorption angular frequency omega_a, rad/s.
    /// `f64::INFINITY` yields a frequency-independent polarizability.
    pub omega_a: f64,
    /// Lande factor g.
    pub lande_g: f64,
    /// Total angular momentum quantum number J (0 disables the moment).
    pub total_j: f64,
    /// Magnetic-moment relaxation time tau_rel, s.
    pub tau_rel: f64,
}

impl AtomModel {
    /// Build a model, validating the parameter contract:
    /// alpha0 > 0, omega_a > 0, g > 0, J >= 0, tau_rel >= 0.
    pub fn new(
        name: impl Into<String>,
        alpha0: f64,
        omega_a: f64,
        lande_g: f64,
        total_j: f64,
        tau_rel: f64,
    ) -> Result<Self> {
        if !(alpha0 > 0.0) || !alpha0.is_finite() {
            return Err(Error::invalid(format!(
                "alpha0 must be positive and finite, got {alpha0} cm^3"
            )));
        }
        if !(omega_a > 0.0) {
            return Err(Error::invalid(format!(
                "omega_a must be positive, got {omega_a} rad/s"
            )));
        }
        if !(lande_g > 0.0) || !lande_g.is_finite() {
            return Err(Error::invalid(format!("g must be positive, got {lande_g}")));
        }
        if !(total_j >= 0.0) || !total_j.is_finite() {
            return Err(Error::invalid(format!(
                "J must be non-negative, got {total_j}"
            )));
        }
        if !(tau_rel >= 0.0) || !tau_rel.is_finite() {
            return Err(Error::invalid(format!(
                "tau_rel must be non-negative and finite, got {tau_rel} s"
            )));
        }
        Ok(AtomModel {
            name: name.into(),
            alpha0,
            omega_a,
            lande_g,
            total_j,
            tau_rel,
        })
    }

    /// Ground-state hydrogen: alpha(0) = 6.67e-25 cm^3, characteristic
    /// absorption energy 11.65 eV, g = 1, J = 1/2, tau_rel = 1e-8 s.
    pub fn hydrogen() -> Self {
        AtomModel::new(
            "H",
            6.67e-25,
            ev_to_angular_frequency(11.65),
            1.0,
            0.5,
            1e-8,
        )
        .expect("preset parameters are valid")
    }

    /// Rb-87: alpha(0) = 4.73e-23 cm^3, characteristic absorption energy
    /// 1.68 eV, g = 1, J = 1/2, tau_rel = 1e-8 s.
    pub fn rubidium87() -> Self {
        AtomModel::new(
            "Rb87",
            4.73e-23,
            ev_to_angular_frequency(1.68),
            1.0,
            0.5,
            1e-8,
        )
        .expect("preset parameters are valid")
    }

    /// Names accepted by [`AtomModel::by_name`].
    pub fn preset_names() -> &'static [&'static str] {
        &["H", "Rb87"]
    }

    /// Look up a preset by name.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "H" => Some(Self::hydrogen()),
            "Rb87" => Some(Self::rubidium87()),
            _ => None,
        }
    }

    /// Dynamic electric polarizability alpha(i xi), cm^3, at imaginary
    /// angular frequency xi >= 0 (rad/s).
    pub fn polarizability_at(&self, xi: f64) -> Result<f64> {
        if xi < 0.0 || !xi.is_finite() {
            return Err(Error::domain(format!(
                "imaginary frequency must be finite and >= 0, got {xi} rad/s"
            )));
        }
        let ratio = xi / self.omega_a;
        Ok(self.alpha0 / (1.0 + ratio * ratio))
    }

    /// Magnetic susceptibility beta(i xi; T), cm^3, at imaginary angular
    /// frequency xi >= 0 (rad/s) and temperature T > 0 (K).
    pub fn magnetic_susceptibility_at(&self, xi: f64, t_k: f64) -> Result<f64> {
        if xi < 0.0 || !xi.is_finite() {
            return Err(Error::domain(format!(
                "imaginary frequency must be finite and >= 0, got {xi} rad/s"
            )));
        }
        if !(t_k > 0.0) || !t_k.is_finite() {
            return Err(Error::domain(format!(
                "temperature must be positive and finite, got {t_k} K"
            )));
        }
        let g2 = self.lande_g * self.lande_g;
        let curie = g2 * MU_BOHR * MU_BOHR * self.total_j * (self.total_j + 1.0)
            / (3.0 * K_BOLTZMANN * t_k);
        Ok(curie / (1.0 + self.tau_rel * xi))
    }

    /// Static susceptibility beta(0; T), cm^3.
    pub fn static_susceptibility(&self, t_k: f64) -> Result<f64> {
        self.magnetic_susceptibility_at(0.0, t_k)
    }

    /// Ratio beta(0; T) / alpha(0): the relative weight of the magnetic
    /// response in the static limit.
    pub fn static_ratio(&self, t_k: f64) -> Result<f64> {
        Ok(self.static_susceptibility(t_k)? / self.alpha0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hydrogen_static_susceptibility_reference_values() {
        // g = 1, J = 1/2: beta(0; T) = mu_B^2 / (4 k_B T)
        let h = AtomModel::hydrogen();
        let b300 = h.static_susceptibility(300.0).unwrap();
        assert!(
            (b300 - 5.191e-28).abs() / b300 < 1e-3,
            "beta(0;300K) = {b300}"
        );
        let b1 = h.static_susceptibility(1.0).unwrap();
        assert!((b1 - 1.5574e-25).abs() / b1 < 1e-4, "beta(0;1K) = {b1}");
    }

    #[test]
    fn static_ratios_at_one_kelvin() {
        let h = AtomModel::hydrogen();
        let r_h = h.static_ratio(1.0).unwrap();
        assert!((r_h - 0.2335).abs() < 1e-3, "H ratio {r_h}");
        assert!((h.static_ratio(300.0).unwrap() - 7.78e-4).abs() < 1e-5);

        let rb = AtomModel::rubidium87();
        let r_rb = rb.static_ratio(1.0).unwrap();
        assert!((r_rb - 3.29e-3).abs() < 1e-4, "Rb87 ratio {r_rb}");
    }

    #[test]
    fn relaxation_suppresses_susceptibility() {
        // xi = 1e12 rad/s, tau_rel = 1e-8 s: suppression factor 1 + 1e4.
        let h = AtomModel::hydrogen();
        let b = h.magnetic_susceptibility_at(1e12, 1.0).unwrap();
        assert!((b - 1.5572e-29).abs() / b < 1e-3, "beta(1e12;1K) = {b}");
        // first Matsubara frequency at 1 K essentially kills beta
        let xi1 = crate::spectral::matsubara_frequency(1, 1.0).unwrap();
        let ratio = h.magnetic_susceptibility_at(xi1, 1.0).unwrap() / b300_free(&h);
        assert!(ratio < 2e-4, "beta(xi_1)/beta(0) = {ratio}");
    }

    fn b300_free(h: &AtomModel) -> f64 {
        h.static_susceptibility(1.0).unwrap()
    }

    #[test]
    fn polarizability_reference_shape() {
        let h = AtomModel::hydrogen();
        assert_eq!(h.polarizability_at(0.0).unwrap(), h.alpha0);
        // at xi = omega_a the polarizability halves
        let half = h.polarizability_at(h.omega_a).unwrap();
        assert!((half - 0.5 * h.alpha0).abs() / h.alpha0 < 1e-12);
        // infinite omega_a gives a frequency-independent response
        let s = AtomModel::new("static", 1e-24, f64::INFINITY, 1.0, 0.5, 0.0).unwrap();
        assert_eq!(s.polarizability_at(1e18).unwrap(), 1e-24);
        assert_eq!(
            s.magnetic_susceptibility_at(1e18, 1.0).unwrap(),
            s.static_susceptibility(1.0).unwrap()
        );
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(AtomModel::new("x", -1.0, 1e16, 1.0, 0.5, 1e-8).is_err());
        assert!(AtomModel::new("x", 1e-24, 0.0, 1.0, 0.5, 1e-8).is_err());
        assert!(AtomModel::new("x", 1e-24, 1e16, 0.0, 0.5, 1e-8).is_err());
        assert!(AtomModel::new("x", 1e-24, 1e16, 1.0, -0.5, 1e-8).is_err());
        assert!(AtomModel::new("x", 1e-24, 1e16, 1.0, 0.5, -1e-8).is_err());
    }

    #[test]
    fn domain_errors_on_bad_arguments() {
        let h = AtomModel::hydrogen();
        assert!(h.polarizability_at(-1.0).is_err());
        assert!(h.magnetic_susceptibility_at(1e12, 0.0).is_err());
        assert!(h.magnetic_susceptibility_at(-1e12, 1.0).is_err());
    }

    proptest! {
        /// Curie law: beta(0; T1) / beta(0; T2) = T2 / T1.
        #[test]
        fn curie_scaling(t1 in 0.5f64..400.0, t2 in 0.5f64..400.0) {
            let h = AtomModel::hydrogen();
            let lhs = h.static_susceptibility(t1).unwrap() / h.static_susceptibility(t2).unwrap();
            let rhs = t2 / t1;
            prop_assert!((lhs - rhs).abs() / rhs < 1e-14);
        }

        /// Both responses are positive and bounded by their static values.
        #[test]
        fn responses_positive_and_decreasing(xi in 1e6f64..1e20, t in 0.5f64..400.0) {
            let h = AtomModel::hydrogen();
            let a = h.polarizability_at(xi).unwrap();
            prop_assert!(a > 0.0 && a < h.alpha0);
            let b = h.magnetic_susceptibility_at(xi, t).unwrap();
            prop_assert!(b > 0.0 && b < h.static_susceptibility(t).unwrap());
        }
    }
}
