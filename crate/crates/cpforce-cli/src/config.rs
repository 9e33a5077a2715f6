//! Sweep specification, TOML configuration file, and name resolution.
//!
//! A sweep is fully described by a [`SweepSpec`]. Its fields come from three
//! layers, highest priority first: command-line flags, the `[sweep]` table of
//! the config file, and built-in defaults. Atom and wall names resolve
//! against the config file's `[atoms.*]` / `[walls.*]` tables first, then
//! against the built-in presets.
//!
//! The config file is strict by design: the schema version is mandatory and
//! unknown keys are hard errors, because a silently ignored typo in a physics
//! parameter is worse than a rejected file.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use cpforce_core::constants::ev_to_angular_frequency;
use cpforce_core::{
    AtomModel, MuMode, PermeabilityModel, PermittivityModel, ResponseMode, Tolerances, WallModel,
};

/// Config file schema version this build reads.
pub const CONFIG_SCHEMA_VERSION: u32 = 1;

/// Separation grid spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

/// Which response channels the solver keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum Mode {
    /// Dynamic electric polarizability and dynamic magnetic susceptibility.
    Full,
    /// Electric polarizability only; the magnetic channel is dropped.
    AlphaOnly,
    /// Frequency-independent (static) response in every Matsubara term.
    StaticModel,
}

impl Mode {
    pub fn to_core(self) -> ResponseMode {
        match self {
            Mode::Full => ResponseMode::Full,
            Mode::AlphaOnly => ResponseMode::AlphaOnly,
            Mode::StaticModel => ResponseMode::Static,
        }
    }
}

/// A fully resolved sweep request. Serialized verbatim into the JSON
/// metadata block so an output file records what produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Atom name (preset or config-defined).
    pub atom: String,
    /// Wall name (preset or config-defined).
    pub wall: String,
    /// Temperature, K.
    pub temp_k: f64,
    /// Smallest separation, m (SI at the interface; converted internally).
    pub a_min_m: f64,
    /// Largest separation, m.
    pub a_max_m: f64,
    /// Number of grid points (>= 2; endpoints included).
    pub points: usize,
    pub spacing: Spacing,
    pub mode: Mode,
    /// Relative truncation tolerance of the Matsubara sum.
    pub sum_rel_tol: f64,
    /// Relative tolerance of each term's integral.
    pub quad_rel_tol: f64,
    /// Hard cap on the Matsubara index.
    pub l_max: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.temp_k > 0.0) || !self.temp_k.is_finite() {
            bail!("temperature must be positive and finite, got {} K", self.temp_k);
        }
        if !(self.a_min_m > 0.0) || !self.a_min_m.is_finite() {
            bail!("a_min_m must be positive and finite, got {} m", self.a_min_m);
        }
        if !(self.a_max_m > self.a_min_m) || !self.a_max_m.is_finite() {
            bail!(
                "a_max_m must be finite and greater than a_min_m, got [{}, {}] m",
                self.a_min_m,
                self.a_max_m
            );
        }
        if self.points < 2 {
            bail!("points must be >= 2, got {}", self.points);
        }
        if !(self.sum_rel_tol > 0.0) || !(self.quad_rel_tol > 0.0) {
            bail!(
                "tolerances must be positive, got sum_rel_tol = {}, quad_rel_tol = {}",
                self.sum_rel_tol,
                self.quad_rel_tol
            );
        }
        if self.l_max == 0 {
            bail!("l_max must be >= 1");
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            sum_rel_tol: self.sum_rel_tol,
            quad_rel_tol: self.quad_rel_tol,
            l_max: self.l_max,
        }
    }
}

/// Inline atom definition for the config file. Units are explicit in the
/// field names; omitted optional fields fall back to the defaults below.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    /// Static electric polarizability, cm^3.
    pub alpha0_cm3: f64,
    /// Characteristic absorption energy, eV. Omit for a
    /// frequency-independent polarizability.
    #[serde(default)]
    pub hbar_omega_a_ev: Option<f64>,
    /// Lande factor (default 1).
    #[serde(default = "default_lande_g")]
    pub g: f64,
    /// Total angular momentum quantum number (default 0: no permanent
    /// magnetic moment).
    #[serde(default, alias = "J")]
    pub j: f64,
    /// Magnetic-moment relaxation time, s (default 1e-8).
    #[serde(default = "default_tau_rel")]
    pub tau_rel_s: f64,
}

fn default_lande_g() -> f64 {
    1.0
}

fn default_tau_rel() -> f64 {
    1e-8
}

impl AtomSpec {
    pub fn build(&self, name: &str) -> Result<AtomModel> {
        let omega_a = match self.hbar_omega_a_ev {
            Some(ev) => {
                if !(ev > 0.0) || !ev.is_finite() {
                    bail!("atom '{name}': hbar_omega_a_ev must be positive, got {ev}");
                }
                ev_to_angular_frequency(ev)
            }
            None => f64::INFINITY,
        };
        AtomModel::new(
            name,
            self.alpha0_cm3,
            omega_a,
            self.g,
            self.j,
            self.tau_rel_s,
        )
        .with_context(|| format!("atom '{name}' in config file"))
    }
}

/// Dielectric model selector for config-defined walls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsModelKind {
    /// Perfect reflector.
    Ideal,
    /// eps(i xi) = 1 + (omega_p/xi)^2; requires `omega_p_ev`.
    Plasma,
    /// Frequency-independent eps0 >= 1; requires `eps0`.
    Constant,
}

/// How a config-defined wall applies its static permeability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuModeSpec {
    ZeroFrequencyOnly,
    AllFrequencies,
}

impl MuModeSpec {
    fn to_core(self) -> MuMode {
        match self {
            MuModeSpec::ZeroFrequencyOnly => MuMode::ZeroFrequencyOnly,
            MuModeSpec::AllFrequencies => MuMode::AllFrequencies,
        }
    }
}

/// Inline wall definition for the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallSpec {
    pub eps_model: EpsModelKind,
    /// Plasma energy, eV (plasma model only).
    #[serde(default)]
    pub omega_p_ev: Option<f64>,
    /// Static permittivity (constant model only).
    #[serde(default)]
    pub eps0: Option<f64>,
    /// Static permeability; omit or set 1 for a non-magnetic wall.
    #[serde(default)]
    pub mu0: Option<f64>,
    /// Permeability mode (default zero_frequency_only). Only meaningful
    /// with mu0 > 1.
    #[serde(default)]
    pub mu_mode: Option<MuModeSpec>,
}

impl WallSpec {
    pub fn build(&self, name: &str) -> Result<WallModel> {
        let permittivity = match self.eps_model {
            EpsModelKind::Ideal => {
                if self.omega_p_ev.is_some() || self.eps0.is_some() {
                    bail!("wall '{name}': eps_model = \"ideal\" takes neither omega_p_ev nor eps0");
                }
                PermittivityModel::IdealMetal
            }
            EpsModelKind::Plasma => {
                if self.eps0.is_some() {
                    bail!("wall '{name}': eps_model = \"plasma\" does not take eps0");
                }
                let ev = self.omega_p_ev.ok_or_else(|| {
                    anyhow::anyhow!("wall '{name}': eps_model = \"plasma\" requires omega_p_ev")
                })?;
                if !(ev > 0.0) || !ev.is_finite() {
                    bail!("wall '{name}': omega_p_ev must be positive, got {ev}");
                }
                PermittivityModel::Plasma {
                    omega_p: ev_to_angular_frequency(ev),
                }
            }
            EpsModelKind::Constant => {
                if self.omega_p_ev.is_some() {
                    bail!("wall '{name}': eps_model = \"constant\" does not take omega_p_ev");
                }
                let eps0 = self.eps0.ok_or_else(|| {
                    anyhow::anyhow!("wall '{name}': eps_model = \"constant\" requires eps0")
                })?;
                PermittivityModel::ConstantEps { eps0 }
            }
        };
        let permeability = match self.mu0 {
            None => PermeabilityModel::NonMagnetic,
            Some(mu0) => {
                if mu0 == 1.0 {
                    PermeabilityModel::NonMagnetic
                } else {
                    PermeabilityModel::StaticFerromagnet {
                        mu0,
                        mode: self
                            .mu_mode
                            .unwrap_or(MuModeSpec::ZeroFrequencyOnly)
                            .to_core(),
                    }
                }
            }
        };
        if self.mu0.is_none() && self.mu_mode.is_some() {
            bail!("wall '{name}': mu_mode requires mu0");
        }
        WallModel::new(name, permittivity, permeability)
            .with_context(|| format!("wall '{name}' in config file"))
    }
}

/// Optional sweep defaults from the config file's `[sweep]` table. Every
/// field can still be overridden by the matching command-line flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDefaults {
    pub atom: Option<String>,
    pub wall: Option<String>,
    pub temp_k: Option<f64>,
    pub a_min_m: Option<f64>,
    pub a_max_m: Option<f64>,
    pub points: Option<usize>,
    pub spacing: Option<Spacing>,
    pub mode: Option<Mode>,
    pub sum_rel_tol: Option<f64>,
    pub quad_rel_tol: Option<f64>,
    pub l_max: Option<u64>,
}

/// Parsed config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// Must equal [`CONFIG_SCHEMA_VERSION`].
    pub schema_version: u32,
    #[serde(default)]
    pub atoms: BTreeMap<String, AtomSpec>,
    #[serde(default)]
    pub walls: BTreeMap<String, WallSpec>,
    #[serde(default)]
    pub sweep: SweepDefaults,
}

impl Default for ConfigFile {
    fn default() -> Self {
        ConfigFile {
            schema_version: CONFIG_SCHEMA_VERSION,
            atoms: BTreeMap::new(),
            walls: BTreeMap::new(),
            sweep: SweepDefaults::default(),
        }
    }
}

/// Load and validate a TOML config file. Unknown keys anywhere in the file
/// are errors, as is a schema version this build does not understand.
pub fn load_config(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let cfg: ConfigFile = toml::from_str(&text)
        .with_context(|| format!("parsing config file {}", path.display()))?;
    if cfg.schema_version != CONFIG_SCHEMA_VERSION {
        bail!(
            "config file {} has schema_version = {}, this build reads version {}",
            path.display(),
            cfg.schema_version,
            CONFIG_SCHEMA_VERSION
        );
    }
    Ok(cfg)
}

/// Sweep parameters collected from command-line flags; `None` means the flag
/// was not given and the config file / built-in default applies.
#[derive(Debug, Clone, Default)]
pub struct SweepOverrides {
    pub atom: Option<String>,
    pub wall: Option<String>,
    pub temp_k: Option<f64>,
    pub a_min_m: Option<f64>,
    pub a_max_m: Option<f64>,
    pub points: Option<usize>,
    pub spacing: Option<Spacing>,
    pub mode: Option<Mode>,
    pub sum_rel_tol: Option<f64>,
    pub quad_rel_tol: Option<f64>,
    pub l_max: Option<u64>,
}

/// Merge flags over config-file defaults over built-in defaults and
/// validate the result. Fields with no safe built-in default (atom, wall,
/// temperature, separation range) must come from one of the first two
/// layers.
pub fn build_sweep_spec(cli: &SweepOverrides, cfg: &ConfigFile) -> Result<SweepSpec> {
    let defaults = Tolerances::default();
    let require = |field: &str, flag: &str| {
        anyhow::anyhow!("{field} not specified: pass {flag} or set [sweep] {field} in the config file")
    };
    let spec = SweepSpec {
        atom: cli
            .atom
            .clone()
            .or_else(|| cfg.sweep.atom.clone())
            .ok_or_else(|| require("atom", "--atom"))?,
        wall: cli
            .wall
            .clone()
            .or_else(|| cfg.sweep.wall.clone())
            .ok_or_else(|| require("wall", "--wall"))?,
        temp_k: cli
            .temp_k
            .or(cfg.sweep.temp_k)
            .ok_or_else(|| require("temp_k", "--temp-k"))?,
        a_min_m: cli
            .a_min_m
            .or(cfg.sweep.a_min_m)
            .ok_or_else(|| require("a_min_m", "--a-min-m"))?,
        a_max_m: cli
            .a_max_m
            .or(cfg.sweep.a_max_m)
            .ok_or_else(|| require("a_max_m", "--a-max-m"))?,
        points: cli.points.or(cfg.sweep.points).unwrap_or(19),
        spacing: cli.spacing.or(cfg.sweep.spacing).unwrap_or(Spacing::Log),
        mode: cli.mode.or(cfg.sweep.mode).unwrap_or(Mode::Full),
        sum_rel_tol: cli
            .sum_rel_tol
            .or(cfg.sweep.sum_rel_tol)
            .unwrap_or(defaults.sum_rel_tol),
        quad_rel_tol: cli
            .quad_rel_tol
            .or(cfg.sweep.quad_rel_tol)
            .unwrap_or(defaults.quad_rel_tol),
        l_max: cli.l_max.or(cfg.sweep.l_max).unwrap_or(defaults.l_max),
    };
    spec.validate()?;
    Ok(spec)
}

/// Resolve an atom name: config-defined atoms shadow built-in presets.
pub fn resolve_atom(cfg: &ConfigFile, name: &str) -> Result<AtomModel> {
    if let Some(spec) = cfg.atoms.get(name) {
        return spec.build(name);
    }
    AtomModel::by_name(name).ok_or_else(|| {
        anyhow::anyhow!(
            "unknown atom '{}'; presets: {}; config-defined: {}",
            name,
            AtomModel::preset_names().join(", "),
            list_or_none(cfg.atoms.keys())
        )
    })
}

/// Resolve a wall name: config-defined walls shadow built-in presets.
pub fn resolve_wall(cfg: &ConfigFile, name: &str) -> Result<WallModel> {
    if let Some(spec) = cfg.walls.get(name) {
        return spec.build(name);
    }
    WallModel::by_name(name).ok_or_else(|| {
        anyhow::anyhow!(
            "unknown wall '{}'; presets: {}; config-defined: {}",
            name,
            WallModel::preset_names().join(", "),
            list_or_none(cfg.walls.keys())
        )
    })
}

fn list_or_none<'a>(mut names: impl Iterator<Item = &'a String>) -> String {
    let mut out = String::new();
    for n in &mut names {
        if !out.is_empty() {
            out.push_str(", ");
        }
        out.push_str(n);
    }
    if out.is_empty() {
        out.push_str("(none)");
    }
    out
}
