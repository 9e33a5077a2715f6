//! Wall material models.
//!
//! A wall is a thick (semi-infinite) homogeneous body described along the
//! imaginary frequency axis by a permittivity model and a permeability
//! model. Supported permittivities:
//!
//! * ideal metal (perfect reflector at all frequencies),
//! * plasma model, eps(i xi) = 1 + omega_p^2 / xi^2,
//! * frequency-independent dielectric constant eps0 >= 1.
//!
//! Magnetic walls use a static permeability mu0 >= 1. Because the
//! relaxation times of ferromagnetic ordering are long on the scale of
//! 1/xi_1, the default is to apply mu0 at the zero Matsubara term only
//! (`MuMode::ZeroFrequencyOnly`); `MuMode::AllFrequencies` is available
//! for sensitivity studies.

use crate::constants::ev_to_angular_frequency;
use crate::error::{Error, Result};

/// Dielectric response along the imaginary frequency axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PermittivityModel {
    /// Perfect reflector: formally eps -> infinity at every frequency.
    IdealMetal,
    /// Plasma model eps(i xi) = 1 + (omega_p / xi)^2.
    Plasma {
        /// Plasma angular frequency, rad/s.
        omega_p: f64,
    },
    /// Frequency-independent permittivity eps0 >= 1.
    ConstantEps {
        /// Static permittivity.
        eps0: f64,
    },
}

impl PermittivityModel {
    fn validate(&self) -> Result<()> {
        match *self {
            PermittivityModel::IdealMetal => Ok(()),
            PermittivityModel::Plasma { omega_p } => {
                if !(omega_p > 0.0) || !omega_p.is_finite() {
                    Err(Error::invalid(format!(
                        "plasma frequency must be positive and finite, got {omega_p} rad/s"
                    )))
                } else {
                    Ok(())
                }
            }
            PermittivityModel::ConstantEps { eps0 } => {
                if !(eps0 >= 1.0) || !eps0.is_finite() {
                    Err(Error::invalid(format!(
                        "constant permittivity must satisfy eps0 >= 1, got {eps0}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Permittivity at imaginary frequency xi >= 0 (rad/s). Diverging
    /// responses (ideal metal anywhere; plasma at xi = 0) return
    /// `f64::INFINITY`.
    pub fn permittivity_at(&self, xi: f64) -> Result<f64> {
        if xi < 0.0 || !xi.is_finite() {
            return Err(Error::domain(format!(
                "imaginary frequency must be finite and >= 0, got {xi} rad/s"
            )));
        }
        Ok(match *self {
            PermittivityModel::IdealMetal => f64::INFINITY,
            PermittivityModel::Plasma { omega_p } => {
                if xi == 0.0 {
                    f64::INFINITY
                } else {
                    let r = omega_p / xi;
                    1.0 + r * r
                }
            }
            PermittivityModel::ConstantEps { eps0 } => eps0,
        })
    }

    /// The combination xi^2 (eps(i xi) - 1), finite for every model that
    /// has a finite reflectivity: omega_p^2 for the plasma model (at all
    /// xi, including 0) and xi^2 (eps0 - 1) for a constant permittivity.
    /// The ideal metal formally diverges.
    pub fn eps_xi_squared_deficit(&self, xi: f64) -> Result<f64> {
        if xi < 0.0 || !xi.is_finite() {
            return Err(Error::domain(format!(
                "imaginary frequency must be finite and >= 0, got {xi} rad/s"
            )));
        }
        Ok(match *self {
            PermittivityModel::IdealMetal => f64::INFINITY,
            PermittivityModel::Plasma { omega_p } => omega_p * omega_p,
            PermittivityModel::ConstantEps { eps0 } => xi * xi * (eps0 - 1.0),
        })
    }
}

/// How the static permeability is applied across the Matsubara series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MuMode {
    /// mu0 enters the l = 0 term only; mu = 1 for l >= 1. This reflects
    /// the slow relaxation of ferromagnetic ordering and is the default.
    #[default]
    ZeroFrequencyOnly,
    /// mu0 is applied at every Matsubara index.
    AllFrequencies,
}

/// Magnetic response of the wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PermeabilityModel {
    /// mu = 1 at every frequency.
    NonMagnetic,
    /// Static permeability mu0 >= 1 applied according to `mode`.
    StaticFerromagnet { mu0: f64, mode: MuMode },
}

impl PermeabilityModel {
    fn validate(&self) -> Result<()> {
        match *self {
            PermeabilityModel::NonMagnetic => Ok(()),
            PermeabilityModel::StaticFerromagnet { mu0, .. } => {
                if !(mu0 >= 1.0) || !mu0.is_finite() {
                    Err(Error::invalid(format!(
                        "static permeability must satisfy mu0 >= 1, got {mu0}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Permeability at Matsubara index l.
    pub fn permeability_at(&self, l: u64) -> f64 {
        match *self {
            PermeabilityModel::NonMagnetic => 1.0,
            PermeabilityModel::StaticFerromagnet { mu0, mode } => match mode {
                MuMode::ZeroFrequencyOnly => {
                    if l == 0 {
                        mu0
                    } else {
                        1.0
                    }
                }
                MuMode::AllFrequencies => mu0,
            },
        }
    }
}

/// A thick homogeneous wall.
#[derive(Debug, Clone, PartialEq)]
pub struct WallModel {
    /// Identifier used in reports and CLI output.
    pub name: String,
    pub permittivity: PermittivityModel,
    pub permeability: PermeabilityModel,
}

impl WallModel {
    /// Build a wall model, validating both sub-models.
    pub fn new(
        name: impl Into<String>,
        permittivity: PermittivityModel,
        permeability: PermeabilityModel,
    ) -> Result<Self> {
        permittivity.validate()?;
        permeability.validate()?;
        Ok(WallModel {
            name: name.into(),
            permittivity,
            permeability,
        })
    }

    /// Perfectly reflecting, non-magnetic wall.
    pub fn ideal_metal() -> Self {
        WallModel::new(
            "ideal-metal",
            PermittivityModel::IdealMetal,
            PermeabilityModel::NonMagnetic,
        )
        .expect("preset parameters are valid")
    }

    /// Gold described by the plasma model, hbar omega_p = 9.0 eV.
    pub fn gold_plasma() -> Self {
        WallModel::new(
            "au-plasma",
            PermittivityModel::Plasma {
                omega_p: ev_to_angular_frequency(9.0),
            },
            PermeabilityModel::NonMagnetic,
        )
        .expect("preset parameters are valid")
    }

    /// Iron described by the plasma model, hbar omega_p = 11.1 eV, with a
    /// static permeability mu0 = 1000 at the zero Matsubara term.
    pub fn iron_plasma() -> Self {
        WallModel::new(
            "fe-plasma",
            PermittivityModel::Plasma {
                omega_p: ev_to_angular_frequency(11.1),
            },
            PermeabilityModel::StaticFerromagnet {
                mu0: 1000.0,
                mode: MuMode::ZeroFrequencyOnly,
            },
        )
        .expect("preset parameters are valid")
    }

    /// Ferromagnetic dielectric: eps0 = 3, mu0 = 100 at the zero
    /// Matsubara term.
    pub fn ferro_dielectric() -> Self {
        WallModel::new(
            "ferro-dielectric",
            PermittivityModel::ConstantEps { eps0: 3.0 },
            PermeabilityModel::StaticFerromagnet {
                mu0: 100.0,
                mode: MuMode::ZeroFrequencyOnly,
            },
        )
        .expect("preset parameters are valid")
    }

    /// Trivial wall (eps = mu = 1): reflects nothing. Useful in tests.
    pub fn vacuum() -> Self {
        WallModel::new(
            "vacuum",
            PermittivityModel::ConstantEps { eps0: 1.0 },
            PermeabilityModel::NonMagnetic,
        )
        .expect("preset parameters are valid")
    }

    /// Names accepted by [`WallModel::by_name`].
    pub fn preset_names() -> &'static [&'static str] {
        &["ideal-metal", "au-plasma", "fe-plasma", "ferro-dielectric"]
    }

    /// Look up a preset by name.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "ideal-metal" => Some(Self::ideal_metal()),
            "au-plasma" => Some(Self::gold_plasma()),
            "fe-plasma" => Some(Self::iron_plasma()),
            "ferro-dielectric" => Some(Self::ferro_dielectric()),
            _ => None,
        }
    }

    /// Copy of this wall with the permeability mode replaced (no-op for
    /// non-magnetic walls). For sensitivity studies.
    pub fn with_mu_mode(&self, mode: MuMode) -> Self {
        let permeability = match self.permeability {
            PermeabilityModel::NonMagnetic => PermeabilityModel::NonMagnetic,
            PermeabilityModel::StaticFerromagnet { mu0, .. } => {
                PermeabilityModel::StaticFerromagnet { mu0, mode }
            }
        };
        WallModel {
            name: self.name.clone(),
            permittivity: self.permittivity,
            permeability,
        }
    }
}
