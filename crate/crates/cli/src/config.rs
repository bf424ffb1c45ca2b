//! Run configuration: JSON with the unit in every dimensioned key.

use fluxsim::analytics::{RamanConfig, TwoLevelModel};
use fluxsim::circuit::{self, FourNodeCircuit, JunctionChain};
use fluxsim::coupled::{CatalogOptions, CoupledModel, StateSelector};
use fluxsim::dissipation::LindbladConfig;
use fluxsim::fluxonium::FluxoniumParams;
use fluxsim::linalg::C64;
use fluxsim::presets;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// The configuration shipped as `configs/measured-device.json`.
pub const MEASURED_DEVICE: &str = include_str!("../../../configs/measured-device.json");

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("exactly one of `device` and `circuit` must be given ({0})")]
    Exclusivity(&'static str),
}

fn field(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        path: path.into(),
        message: message.into(),
    }
}

/// Fluxonium energies plus the resonator, given directly.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceSection {
    pub e_c_ghz: f64,
    pub e_j_ghz: f64,
    pub e_l_ghz: f64,
    pub nu_r_ghz: f64,
    pub g_ghz: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSection {
    pub n_junctions: u32,
    pub l_j_single_nh: f64,
    pub c_g_single_ff: f64,
}

/// Lumped four-node circuit; the coupling g is not derived from it.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSection {
    pub c_r_ff: f64,
    pub c_c_ff: f64,
    pub c_1_ff: f64,
    pub c_2_ff: f64,
    pub e_lr_ghz: f64,
    pub e_l_chain_ghz: f64,
    pub e_j_ghz: f64,
    pub g_ghz: f64,
    #[serde(default)]
    pub chain: Option<ChainSection>,
}

impl CircuitSection {
    pub fn circuit(&self) -> FourNodeCircuit {
        FourNodeCircuit {
            c_r: self.c_r_ff,
            c_c: self.c_c_ff,
            c_1: self.c_1_ff,
            c_2: self.c_2_ff,
            e_lr: self.e_lr_ghz,
            e_l_chain: self.e_l_chain_ghz,
            e_j: self.e_j_ghz,
            chain: self.chain.as_ref().map(|c| JunctionChain {
                n_junctions: c.n_junctions,
                l_j_single: c.l_j_single_nh,
                c_g_single: c.c_g_single_ff,
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruncationSection {
    pub n_flux_levels: usize,
    pub n_photons: usize,
}

impl Default for TruncationSection {
    fn default() -> Self {
        Self {
            n_flux_levels: CoupledModel::DEFAULT_FLUX_LEVELS,
            n_photons: CoupledModel::DEFAULT_PHOTONS,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub flux_min_phi0: f64,
    pub flux_max_phi0: f64,
    pub flux_steps: usize,
    #[serde(default = "SweepSection::default_freq_min")]
    pub freq_min_ghz: f64,
    #[serde(default = "SweepSection::default_freq_max")]
    pub freq_max_ghz: f64,
    #[serde(default = "SweepSection::default_freq_steps")]
    pub freq_steps: usize,
}

impl SweepSection {
    fn default_freq_min() -> f64 {
        4.85
    }
    fn default_freq_max() -> f64 {
        5.15
    }
    fn default_freq_steps() -> usize {
        61
    }

    pub fn flux_grid(&self) -> Vec<f64> {
        linspace(self.flux_min_phi0, self.flux_max_phi0, self.flux_steps)
    }

    pub fn freq_grid(&self) -> Vec<f64> {
        linspace(self.freq_min_ghz, self.freq_max_ghz, self.freq_steps)
    }
}

/// `n` evenly spaced points; a single point sits at `a`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LindbladSection {
    pub temperature_k: f64,
    pub kappa_per_ns: f64,
    pub gamma_q_per_ns: f64,
    pub zeta_ghz: f64,
    pub n_levels: usize,
    pub secular_tol_ghz: f64,
    pub budget_cells: usize,
}

impl Default for LindbladSection {
    fn default() -> Self {
        let d = LindbladConfig::device();
        Self {
            temperature_k: d.temperature,
            kappa_per_ns: d.kappa,
            gamma_q_per_ns: d.gamma_q,
            zeta_ghz: d.zeta,
            n_levels: d.n_levels,
            secular_tol_ghz: d.secular_tol,
            budget_cells: fluxsim::dissipation::MapOptions::default().budget,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSection {
    pub n_levels: usize,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self { n_levels: 10 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinesSection {
    /// Initial dressed states, as "g0/0" or an eigenstate index.
    pub initial: Vec<String>,
    pub max_order: u8,
    pub min_weight: f64,
    pub detuning_floor_ghz: f64,
}

impl Default for LinesSection {
    fn default() -> Self {
        let o = CatalogOptions::default();
        Self {
            initial: vec!["g0/0".into()],
            max_order: o.max_order,
            min_weight: o.min_weight,
            detuning_floor_ghz: o.detuning_floor,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamanSection {
    pub omega_probe_ghz: f64,
    pub omega_pump_ghz: f64,
    pub delta_ghz: f64,
    pub delta_2gamma_ghz: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalyticsSection {
    pub e_p_ghz: f64,
    pub e_p_prime_ghz: f64,
    pub phi_zpf: f64,
    pub eps_r_ghz: f64,
    pub detuning_ghz: f64,
    /// Interaction element as [re, im].
    pub m_ghz: [f64; 2],
    pub t1_reference_phi0: f64,
    pub raman: Option<RamanSection>,
}

impl Default for AnalyticsSection {
    fn default() -> Self {
        Self {
            e_p_ghz: 5.072,
            e_p_prime_ghz: 4.39,
            phi_zpf: 0.60,
            eps_r_ghz: presets::NU_R_GHZ,
            detuning_ghz: 0.089,
            m_ghz: [0.0, 0.062],
            t1_reference_phi0: presets::OPERATING_FLUX,
            raman: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Heatmap,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
    pub parallelism: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            formats: vec![Format::Csv],
            parallelism: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub device: Option<DeviceSection>,
    #[serde(default)]
    pub circuit: Option<CircuitSection>,
    #[serde(default)]
    pub truncation: TruncationSection,
    pub sweep: SweepSection,
    #[serde(default)]
    pub lindblad: LindbladSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub lines: LinesSection,
    #[serde(default)]
    pub analytics: AnalyticsSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Where the fluxonium energies came from.
#[derive(Debug, Clone, Serialize)]
pub enum Source {
    Device,
    Circuit(FourNodeCircuit),
}

/// Validated configuration with physics types resolved.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub raw: RawConfig,
    pub source: Source,
    /// Model at flux 0; sweeps move the flux.
    pub model: CoupledModel,
    pub lindblad: LindbladConfig,
    pub catalog: CatalogOptions,
    pub initial_states: Vec<StateSelector>,
    pub two_level: TwoLevelModel,
    pub raman: Option<RamanConfig>,
}

impl RunConfig {
    pub fn name(&self) -> &str {
        self.raw.name.as_deref().unwrap_or("unnamed")
    }

    pub fn flux_grid(&self) -> Vec<f64> {
        self.raw.sweep.flux_grid()
    }

    pub fn freq_grid(&self) -> Vec<f64> {
        self.raw.sweep.freq_grid()
    }

    pub fn output(&self) -> &OutputSection {
        &self.raw.output
    }

    pub fn params(&self) -> &FluxoniumParams {
        &self.model.fluxonium
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "<root>".to_string() } else { path };
        field(path, e.into_inner().to_string())
    })?;
    resolve(raw)
}

fn positive(path: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(field(path, format!("must be a finite number > 0, got {v}")))
    }
}

fn non_negative(path: &str, v: f64) -> Result<(), ConfigError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(field(path, format!("must be a finite number ≥ 0, got {v}")))
    }
}

fn at_least_one(path: &str, v: usize) -> Result<(), ConfigError> {
    if v >= 1 {
        Ok(())
    } else {
        Err(field(path, "must be ≥ 1"))
    }
}

// Map a core validation error back onto the section that produced it.
fn core_error(section: &str, e: fluxsim::Error) -> ConfigError {
    match e {
        fluxsim::Error::InvalidParameter { field: f, reason } => {
            field(format!("{section}.{f}"), reason)
        }
        other => field(section, other.to_string()),
    }
}

fn resolve(raw: RawConfig) -> Result<RunConfig, ConfigError> {
    let (fluxonium, nu_r, g, source) = match (&raw.device, &raw.circuit) {
        (Some(_), Some(_)) => return Err(ConfigError::Exclusivity("both present")),
        (None, None) => return Err(ConfigError::Exclusivity("neither present")),
        (Some(d), None) => {
            positive("device.e_c_ghz", d.e_c_ghz)?;
            positive("device.e_j_ghz", d.e_j_ghz)?;
            positive("device.e_l_ghz", d.e_l_ghz)?;
            positive("device.nu_r_ghz", d.nu_r_ghz)?;
            non_negative("device.g_ghz", d.g_ghz)?;
            let p = FluxoniumParams {
                e_c: d.e_c_ghz,
                e_j: d.e_j_ghz,
                e_l: d.e_l_ghz,
                phi_ext: 0.0,
            };
            (p, d.nu_r_ghz, d.g_ghz, Source::Device)
        }
        (None, Some(c)) => {
            for (k, v) in [
                ("c_r_ff", c.c_r_ff),
                ("c_c_ff", c.c_c_ff),
                ("c_1_ff", c.c_1_ff),
                ("c_2_ff", c.c_2_ff),
            ] {
                non_negative(&format!("circuit.{k}"), v)?;
            }
            positive("circuit.e_lr_ghz", c.e_lr_ghz)?;
            positive("circuit.e_l_chain_ghz", c.e_l_chain_ghz)?;
            positive("circuit.e_j_ghz", c.e_j_ghz)?;
            non_negative("circuit.g_ghz", c.g_ghz)?;
            if let Some(ch) = &c.chain {
                positive("circuit.chain.l_j_single_nh", ch.l_j_single_nh)?;
                non_negative("circuit.chain.c_g_single_ff", ch.c_g_single_ff)?;
            }
            let fc = c.circuit();
            let reduced = circuit::reduce_circuit(&fc).map_err(|e| core_error("circuit", e))?;
            let en = circuit::derive_energies(&reduced).map_err(|e| core_error("circuit", e))?;
            let p = FluxoniumParams {
                e_c: en.e_c,
                e_j: en.e_j,
                e_l: en.e_l,
                phi_ext: 0.0,
            };
            (p, en.nu_r, c.g_ghz, Source::Circuit(fc))
        }
    };
    let section = if raw.device.is_some() { "device" } else { "circuit" };
    fluxonium.validate().map_err(|e| core_error(section, e))?;

    let t = &raw.truncation;
    at_least_one("truncation.n_flux_levels", t.n_flux_levels)?;
    at_least_one("truncation.n_photons", t.n_photons)?;
    let model = CoupledModel {
        fluxonium,
        nu_r,
        g,
        n_flux_levels: t.n_flux_levels,
        n_photons: t.n_photons,
    };
    model.validate().map_err(|e| core_error("truncation", e))?;

    let s = &raw.sweep;
    at_least_one("sweep.flux_steps", s.flux_steps)?;
    at_least_one("sweep.freq_steps", s.freq_steps)?;
    for (k, v) in [
        ("sweep.flux_min_phi0", s.flux_min_phi0),
        ("sweep.flux_max_phi0", s.flux_max_phi0),
    ] {
        if !v.is_finite() {
            return Err(field(k, "must be finite"));
        }
    }
    if s.flux_max_phi0 < s.flux_min_phi0 {
        return Err(field("sweep.flux_max_phi0", "must be ≥ sweep.flux_min_phi0"));
    }
    positive("sweep.freq_min_ghz", s.freq_min_ghz)?;
    positive("sweep.freq_max_ghz", s.freq_max_ghz)?;
    if s.freq_max_ghz < s.freq_min_ghz {
        return Err(field("sweep.freq_max_ghz", "must be ≥ sweep.freq_min_ghz"));
    }

    let l = &raw.lindblad;
    non_negative("lindblad.temperature_k", l.temperature_k)?;
    positive("lindblad.kappa_per_ns", l.kappa_per_ns)?;
    non_negative("lindblad.gamma_q_per_ns", l.gamma_q_per_ns)?;
    non_negative("lindblad.zeta_ghz", l.zeta_ghz)?;
    at_least_one("lindblad.budget_cells", l.budget_cells)?;
    if l.n_levels < 2 {
        return Err(field("lindblad.n_levels", "must be ≥ 2"));
    }
    if l.n_levels > model.dim() {
        return Err(field(
            "lindblad.n_levels",
            format!("exceeds the coupled dimension {}", model.dim()),
        ));
    }
    positive("lindblad.secular_tol_ghz", l.secular_tol_ghz)?;
    let lindblad = LindbladConfig {
        temperature: l.temperature_k,
        kappa: l.kappa_per_ns,
        gamma_q: l.gamma_q_per_ns,
        zeta: l.zeta_ghz,
        omega_d: nu_r,
        n_levels: l.n_levels,
        secular_tol: l.secular_tol_ghz,
    };
    lindblad.validate().map_err(|e| core_error("lindblad", e))?;

    at_least_one("spectrum.n_levels", raw.spectrum.n_levels)?;

    let li = &raw.lines;
    let catalog = CatalogOptions {
        max_order: li.max_order,
        detuning_floor: li.detuning_floor_ghz,
        min_weight: li.min_weight,
    };
    catalog.validate().map_err(|e| match e {
        fluxsim::Error::InvalidParameter { field: f, reason } => {
            let key = if f == "detuning_floor" { "detuning_floor_ghz" } else { f };
            field(format!("lines.{key}"), reason)
        }
        other => field("lines", other.to_string()),
    })?;
    let initial_states = li
        .initial
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.parse::<StateSelector>()
                .map_err(|e| field(format!("lines.initial[{i}]"), e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if initial_states.is_empty() {
        return Err(field("lines.initial", "must name at least one state"));
    }

    let a = &raw.analytics;
    positive("analytics.e_p_ghz", a.e_p_ghz)?;
    positive("analytics.e_p_prime_ghz", a.e_p_prime_ghz)?;
    positive("analytics.phi_zpf", a.phi_zpf)?;
    positive("analytics.eps_r_ghz", a.eps_r_ghz)?;
    if !a.detuning_ghz.is_finite() {
        return Err(field("analytics.detuning_ghz", "must be finite"));
    }
    if !a.t1_reference_phi0.is_finite() {
        return Err(field("analytics.t1_reference_phi0", "must be finite"));
    }
    let two_level = TwoLevelModel {
        eps_r: a.eps_r_ghz,
        eps_q: a.eps_r_ghz + a.detuning_ghz,
        m: C64::new(a.m_ghz[0], a.m_ghz[1]),
    };
    let raman = match &a.raman {
        None => None,
        Some(r) => {
            let cfg = RamanConfig {
                omega_probe: r.omega_probe_ghz,
                omega_pump: r.omega_pump_ghz,
                delta: r.delta_ghz,
                delta_2gamma: r.delta_2gamma_ghz,
            };
            cfg.validate().map_err(|e| match e {
                fluxsim::Error::InvalidParameter { field: f, reason } => {
                    field(format!("analytics.raman.{f}_ghz"), reason)
                }
                other => field("analytics.raman", other.to_string()),
            })?;
            Some(cfg)
        }
    };

    let o = &raw.output;
    at_least_one("output.parallelism", o.parallelism)?;

    Ok(RunConfig {
        source,
        model,
        lindblad,
        catalog,
        initial_states,
        two_level,
        raman,
        raw,
    })
}
