//! Subcommand execution: sweeps over flux, caching, export and manifest.

use crate::cache::{content_hash, Cache};
use crate::config::{ConfigError, Format, RunConfig, Source};
use crate::manifest::{CacheStats, OutputRecord, RunManifest, TOOL_VERSION};
use fluxsim::analytics;
use fluxsim::circuit;
use fluxsim::coupled::{catalog_from_dressed, dressed_spectrum, TransitionCatalog};
use fluxsim::dissipation::{single_tone_map, CellFailure, MapOptions, TransmissionMap};
use fluxsim::export::{self, format_g9, LevelRow};
use fluxsim::fluxonium::{diagonalize, BasisConfig};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    Reduce,
    Spectrum,
    Lines,
    SingleTone,
    Analytics,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Reduce => "reduce",
            Subcommand::Spectrum => "spectrum",
            Subcommand::Lines => "lines",
            Subcommand::SingleTone => "single-tone",
            Subcommand::Analytics => "analytics",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Physics(#[from] fluxsim::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Default)]
pub struct RunOptions {
    /// Overrides `output.directory`.
    pub out: Option<PathBuf>,
    /// Overrides `output.parallelism`.
    pub jobs: Option<usize>,
    pub cache: Cache,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub manifest: RunManifest,
    /// Human-readable summary for stdout.
    pub summary: String,
}

impl RunOutcome {
    pub fn partial(&self) -> bool {
        !self.manifest.failures.is_empty()
    }
}

/// Hash of everything that influences computed numbers; output settings
/// and worker counts are excluded.
pub fn physics_hash(cfg: &RunConfig) -> String {
    #[derive(Serialize)]
    struct Key<'a> {
        version: &'a str,
        source: &'a Source,
        model: &'a fluxsim::coupled::CoupledModel,
        lindblad: &'a fluxsim::dissipation::LindbladConfig,
        budget: usize,
        sweep: &'a crate::config::SweepSection,
        spectrum: &'a crate::config::SpectrumSection,
        lines: &'a crate::config::LinesSection,
        analytics: &'a crate::config::AnalyticsSection,
    }
    content_hash(&Key {
        version: TOOL_VERSION,
        source: &cfg.source,
        model: &cfg.model,
        lindblad: &cfg.lindblad,
        budget: cfg.raw.lindblad.budget_cells,
        sweep: &cfg.raw.sweep,
        spectrum: &cfg.raw.spectrum,
        lines: &cfg.raw.lines,
        analytics: &cfg.raw.analytics,
    })
}

struct Writer {
    dir: PathBuf,
    outputs: Vec<OutputRecord>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self, RunError> {
        std::fs::create_dir_all(dir).map_err(|source| RunError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            outputs: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &[u8]) -> Result<(), RunError> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|source| RunError::Io { path, source })?;
        self.outputs.push(OutputRecord::new(name, contents));
        Ok(())
    }
}

pub fn run(sub: Subcommand, cfg: &RunConfig, opts: &RunOptions) -> Result<RunOutcome, RunError> {
    let start = Instant::now();
    let jobs = opts.jobs.unwrap_or(cfg.output().parallelism).max(1);
    let out_dir = opts
        .out
        .clone()
        .unwrap_or_else(|| cfg.output().directory.clone());
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let mut timings = BTreeMap::new();
    let mut writer = Writer::new(&out_dir)?;
    let mut failures = Vec::new();

    let t = Instant::now();
    let summary = pool.install(|| match sub {
        Subcommand::Reduce => run_reduce(cfg, &mut writer),
        Subcommand::Spectrum => run_spectrum(cfg, &opts.cache, &mut writer, &mut failures),
        Subcommand::Lines => run_lines(cfg, &opts.cache, &mut writer, &mut failures),
        Subcommand::SingleTone => run_single_tone(cfg, &opts.cache, &mut writer, &mut failures),
        Subcommand::Analytics => run_analytics(cfg, &mut writer, &mut failures),
    })?;
    timings.insert("compute_and_write".to_string(), t.elapsed().as_secs_f64());
    timings.insert("total".to_string(), start.elapsed().as_secs_f64());

    let manifest = RunManifest {
        tool_version: TOOL_VERSION.to_string(),
        subcommand: sub.name().to_string(),
        config_name: cfg.name().to_string(),
        config_hash: physics_hash(cfg),
        outputs: writer.outputs.clone(),
        timings,
        cache: CacheStats {
            enabled: opts.cache.dir().is_some(),
            hits: opts.cache.hits(),
            misses: opts.cache.misses(),
        },
        jobs,
        failures,
    };
    let json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    let path = out_dir.join("manifest.json");
    std::fs::write(&path, json).map_err(|source| RunError::Io { path, source })?;
    Ok(RunOutcome {
        out_dir,
        manifest,
        summary,
    })
}

fn wants(cfg: &RunConfig, f: Format) -> bool {
    cfg.output().formats.contains(&f)
}

// A failure at one flux point that is not part of a frequency grid.
fn point_failure(flux_index: usize, item: usize, phi: f64, e: fluxsim::Error) -> CellFailure {
    CellFailure {
        flux_index,
        freq_index: item,
        phi_ext: phi,
        omega_d: 0.0,
        error: e.to_string(),
    }
}

fn run_reduce(cfg: &RunConfig, writer: &mut Writer) -> Result<String, RunError> {
    let Source::Circuit(c) = &cfg.source else {
        return Err(ConfigError::Field {
            path: "circuit".into(),
            message: "`reduce` needs a circuit section".into(),
        }
        .into());
    };
    let reduced = circuit::reduce_circuit(c)?;
    let energies = circuit::derive_energies(&reduced)?;
    let chain = circuit::validate_chain(c, &circuit::ChainLimits::default())?;
    #[derive(Serialize)]
    struct Report<'a> {
        reduced: &'a circuit::ThreeNodeCircuit,
        energies: &'a circuit::CircuitEnergies,
        chain: &'a circuit::ChainCheck,
    }
    let report = Report {
        reduced: &reduced,
        energies: &energies,
        chain: &chain,
    };
    let mut json = serde_json::to_vec_pretty(&report).expect("report serializes");
    json.push(b'\n');
    writer.write("reduce.json", &json)?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "C_R = {} fF, C_Q = {} fF, C_C = {} fF",
        format_g9(reduced.c_r_eff),
        format_g9(reduced.c_q_eff),
        format_g9(reduced.c_c_eff)
    );
    let _ = writeln!(
        s,
        "E_C = {} GHz, E_L = {} GHz, E_J = {} GHz, nu_r = {} GHz",
        format_g9(energies.e_c),
        format_g9(energies.e_l),
        format_g9(energies.e_j),
        format_g9(energies.nu_r)
    );
    if let circuit::ChainCheck::Checked(adv) = &chain {
        for a in adv {
            let _ = writeln!(s, "advisory: {a:?}");
        }
    }
    Ok(s)
}

fn run_spectrum(
    cfg: &RunConfig,
    cache: &Cache,
    writer: &mut Writer,
    failures: &mut Vec<CellFailure>,
) -> Result<String, RunError> {
    let flux = cfg.flux_grid();
    let n = cfg.raw.spectrum.n_levels;
    let basis = BasisConfig::default();
    let rows: Vec<Result<Vec<LevelRow>, fluxsim::Error>> = flux
        .par_iter()
        .map(|&phi| {
            let params = cfg.params().at_flux(phi);
            let key = content_hash(&("spectrum", TOOL_VERSION, &params, &basis, n));
            cache.get_or_compute(
                &key,
                || Ok(export::level_rows(&diagonalize(&params, &basis)?, n)),
                |_| true,
            )
        })
        .collect();
    let mut all = Vec::new();
    for (i, r) in rows.into_iter().enumerate() {
        match r {
            Ok(rows) => all.extend(rows),
            Err(e) => failures.push(point_failure(i, 0, flux[i], e)),
        }
    }
    if wants(cfg, Format::Csv) {
        writer.write("spectrum.csv", export::spectrum_csv(&all).as_bytes())?;
    }
    Ok(format!(
        "{} flux points, {} levels each\n",
        flux.len() - failures.len(),
        n
    ))
}

fn run_lines(
    cfg: &RunConfig,
    cache: &Cache,
    writer: &mut Writer,
    failures: &mut Vec<CellFailure>,
) -> Result<String, RunError> {
    let flux = cfg.flux_grid();
    type Point = Vec<Result<TransitionCatalog, String>>;
    let points: Vec<Result<Point, fluxsim::Error>> = flux
        .par_iter()
        .map(|&phi| {
            let model = cfg.model.at_flux(phi);
            let key = content_hash(&(
                "lines",
                TOOL_VERSION,
                &model,
                &cfg.catalog,
                &cfg.raw.lines.initial,
            ));
            cache.get_or_compute(
                &key,
                || {
                    let dressed = dressed_spectrum(&model)?;
                    Ok(cfg
                        .initial_states
                        .iter()
                        .map(|sel| {
                            catalog_from_dressed(&dressed, sel, &cfg.catalog)
                                .map_err(|e| e.to_string())
                        })
                        .collect())
                },
                |p: &Point| p.iter().all(Result::is_ok),
            )
        })
        .collect();
    let mut catalogs = Vec::new();
    for (i, p) in points.into_iter().enumerate() {
        match p {
            Err(e) => failures.push(point_failure(i, 0, flux[i], e)),
            Ok(per_state) => {
                for (k, c) in per_state.into_iter().enumerate() {
                    match c {
                        Ok(c) => catalogs.push(c),
                        Err(e) => failures.push(CellFailure {
                            flux_index: i,
                            freq_index: k,
                            phi_ext: flux[i],
                            omega_d: 0.0,
                            error: e,
                        }),
                    }
                }
            }
        }
    }
    if wants(cfg, Format::Csv) {
        writer.write("lines.csv", export::catalog_csv(&catalogs).as_bytes())?;
    }
    let n: usize = catalogs.iter().map(|c| c.entries.len()).sum();
    Ok(format!("{} catalogs, {n} transitions\n", catalogs.len()))
}

/// The map row by row, each row cached once it is complete.
pub fn transmission_map(cfg: &RunConfig, cache: &Cache) -> Result<TransmissionMap, RunError> {
    let flux = cfg.flux_grid();
    let freq = cfg.freq_grid();
    let budget = cfg.raw.lindblad.budget_cells;
    let cells = flux.len() * freq.len();
    if cells > budget {
        return Err(fluxsim::Error::BudgetExceeded { cells, budget }.into());
    }
    let row_opts = MapOptions { budget: usize::MAX };
    let freq_bits: Vec<u64> = freq.iter().map(|f| f.to_bits()).collect();
    let rows: Vec<Result<TransmissionMap, fluxsim::Error>> = flux
        .par_iter()
        .map(|&phi| {
            let key = content_hash(&(
                "single-tone",
                TOOL_VERSION,
                &cfg.model,
                &cfg.lindblad,
                phi.to_bits(),
                &freq_bits,
            ));
            cache.get_or_compute(
                &key,
                || single_tone_map(&cfg.model, &cfg.lindblad, &[phi], &freq, &row_opts),
                |row: &TransmissionMap| row.failures.is_empty(),
            )
        })
        .collect();
    let mut map = TransmissionMap {
        flux: flux.clone(),
        freq,
        amplitude: Vec::with_capacity(cells),
        failures: Vec::new(),
    };
    for (i, row) in rows.into_iter().enumerate() {
        let row = row?;
        map.amplitude.extend_from_slice(&row.amplitude);
        map.failures.extend(row.failures.into_iter().map(|f| CellFailure {
            flux_index: i,
            ..f
        }));
    }
    Ok(map)
}

fn run_single_tone(
    cfg: &RunConfig,
    cache: &Cache,
    writer: &mut Writer,
    failures: &mut Vec<CellFailure>,
) -> Result<String, RunError> {
    let map = transmission_map(cfg, cache)?;
    if wants(cfg, Format::Csv) {
        writer.write("single_tone.csv", export::map_csv(&map).as_bytes())?;
    }
    if wants(cfg, Format::Heatmap) {
        write_heatmap(&map, writer)?;
    }
    failures.extend(map.failures.iter().cloned());
    Ok(format!(
        "{}×{} cells, {} failed\n",
        map.flux.len(),
        map.freq.len(),
        map.failures.len()
    ))
}

#[cfg(feature = "heatmap")]
fn write_heatmap(map: &TransmissionMap, writer: &mut Writer) -> Result<(), RunError> {
    let mut png = Vec::new();
    crate::heatmap::write_png(map, 4, &mut png).map_err(|source| RunError::Io {
        path: writer.dir.join("single_tone.png"),
        source,
    })?;
    writer.write("single_tone.png", &png)
}

#[cfg(not(feature = "heatmap"))]
fn write_heatmap(_: &TransmissionMap, _: &mut Writer) -> Result<(), RunError> {
    eprintln!("warning: built without the `heatmap` feature; skipping single_tone.png");
    Ok(())
}

fn run_analytics(
    cfg: &RunConfig,
    writer: &mut Writer,
    failures: &mut Vec<CellFailure>,
) -> Result<String, RunError> {
    let a = &cfg.raw.analytics;
    let params = cfg.params();
    let g = format_g9;
    let mut s = String::new();

    let d = analytics::plasmon_dispersion(params, a.e_p_ghz, a.e_p_prime_ghz, a.phi_zpf)?;
    let _ = writeln!(s, "[dispersion]");
    let _ = writeln!(s, "phi_min_coefficient_rad = {}", g(d.phi_min_coefficient));
    let _ = writeln!(s, "symmetric_ghz = {}", g(d.symmetric));
    let _ = writeln!(s, "antisymmetric_ghz = {}", g(d.antisymmetric));
    let _ = writeln!(s, "antisymmetric_bracket_ghz = {}", g(d.antisymmetric_bracket()));
    let _ = writeln!(s, "total_ghz = {}", g(d.total));

    let h = analytics::hybridize(&cfg.two_level);
    let shared = d.shared(&h);
    let c = |z: fluxsim::linalg::C64| {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", g(z.re), g(z.im.abs()))
    };
    let _ = writeln!(s, "\n[hybridization]");
    let _ = writeln!(s, "eigenvalues_ghz = {}, {}", g(h.eigenvalues[0]), g(h.eigenvalues[1]));
    let _ = writeln!(s, "alpha_over_beta_resonator = {}", c(h.amplitude_ratios[0]));
    let _ = writeln!(s, "alpha_over_beta_qubit = {}", c(h.amplitude_ratios[1]));
    let _ = writeln!(s, "beta_r_sq = {}", g(h.beta_r_sq));
    let _ = writeln!(s, "intensity_ratio = {}", g(h.intensity_ratio));
    let _ = writeln!(s, "decoupled = {}", h.decoupled);
    let _ = writeln!(
        s,
        "quadratic_fractions = {}, {}",
        g(h.quadratic_fractions[0]),
        g(h.quadratic_fractions[1])
    );
    let _ = writeln!(
        s,
        "quartic_per_a2_per_ghz = {}, {}",
        g(h.quartic_per_a2[0]),
        g(h.quartic_per_a2[1])
    );
    let _ = writeln!(s, "a_ghz = {}", g(shared.a));
    let _ = writeln!(s, "resonator_quadratic_ghz = {}", g(shared.resonator_quadratic));
    let _ = writeln!(s, "resonator_quartic_ghz = {}", g(shared.resonator_quartic));
    let _ = writeln!(s, "qubit_quadratic_ghz = {}", g(shared.qubit_quadratic));
    let _ = writeln!(s, "qubit_quartic_ghz = {}", g(shared.qubit_quartic));

    if let Some(r) = &cfg.raman {
        let rate = analytics::raman_rate(r)?;
        let _ = writeln!(s, "\n[raman]");
        let _ = writeln!(s, "rate_ghz = {}", g(rate));
        let _ = writeln!(s, "pi_time_ns = {}", g(analytics::pi_time(rate)));
    }

    let sl = analytics::scaling_laws(params);
    let _ = writeln!(s, "\n[scaling]");
    let _ = writeln!(s, "fluxon_slope_ghz_per_phi0 = {}", g(sl.fluxon_slope));
    let _ = writeln!(s, "suppression = {}", g(sl.suppression));
    if let Ok(phi) = analytics::stark_minimum(&params.at_flux(1.0)) {
        let _ = writeln!(s, "stark_minimum_rad_per_phi0 = {}", g(phi));
    }

    let flux = cfg.flux_grid();
    let reference = a.t1_reference_phi0;
    let _ = writeln!(s, "\n[t1_relative]");
    let _ = writeln!(s, "reference_phi0 = {}", g(reference));
    let element = |phi: f64| analytics::fluxon_charge_element(&params.at_flux(phi));
    match element(reference) {
        Err(e) => failures.push(point_failure(0, 0, reference, e)),
        Ok(r) => {
            let values: Vec<_> = flux.par_iter().map(|&phi| element(phi)).collect();
            for (i, v) in values.into_iter().enumerate() {
                match v {
                    Ok(n) => {
                        let _ = writeln!(s, "{} = {}", g(flux[i]), g((r / n).powi(2)));
                    }
                    Err(e) => failures.push(point_failure(i, 0, flux[i], e)),
                }
            }
        }
    }
    writer.write("analytics.txt", s.as_bytes())?;
    Ok(s)
}
