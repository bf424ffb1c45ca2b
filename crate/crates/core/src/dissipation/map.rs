//! Single-tone transmission maps over flux × drive frequency.

use super::liouvillian::{dissipator, steady_state, Liouvillian};
use super::{LindbladConfig, TruncatedSystem};
use crate::coupled::{dressed_spectrum, CoupledModel};
use crate::error::{invalid, Error, Result};
use crate::linalg::CMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Everything at one flux point that does not depend on the drive frequency.
#[derive(Debug, Clone)]
pub struct FluxPoint {
    pub phi_ext: f64,
    system: TruncatedSystem,
    dissipator: CMatrix,
    cfg: LindbladConfig,
}

impl FluxPoint {
    pub fn new(model: &CoupledModel, cfg: &LindbladConfig, phi_ext: f64) -> Result<Self> {
        cfg.validate()?;
        let dressed = dressed_spectrum(&model.at_flux(phi_ext))?;
        let system = TruncatedSystem::new(&dressed, cfg.n_levels)?;
        let jumps = system.collapse_operators(cfg);
        let dissipator = dissipator(system.dim(), &jumps);
        Ok(Self {
            phi_ext,
            system,
            dissipator,
            cfg: *cfg,
        })
    }

    pub fn system(&self) -> &TruncatedSystem {
        &self.system
    }

    /// Liouvillian for a drive at `omega_d` with the configured amplitude.
    pub fn liouvillian(&self, omega_d: f64) -> (Liouvillian, CMatrix) {
        let frame = self.system.rotating_frame(omega_d, self.cfg.zeta);
        (Liouvillian::from_dissipator(&frame.hamiltonian, &self.dissipator), frame.field)
    }

    /// Steady-state |tr(a ρ)| divided by the bare resonator's on-resonance
    /// amplitude ζ/(κ/4π).
    pub fn transmission(&self, omega_d: f64) -> Result<f64> {
        if !(omega_d.is_finite() && omega_d > 0.0) {
            return Err(invalid("omega_d", format!("must be > 0, got {omega_d}")));
        }
        let (l, field) = self.liouvillian(omega_d);
        let rho = steady_state(&l)?;
        Ok(rho.expect(&field).norm() / bare_amplitude(&self.cfg)?)
    }
}

/// |⟨a⟩| of the empty resonator driven on resonance.
pub fn bare_amplitude(cfg: &LindbladConfig) -> Result<f64> {
    if !(cfg.zeta > 0.0 && cfg.kappa > 0.0) {
        return Err(invalid("zeta", "normalized transmission needs ζ > 0 and κ > 0"));
    }
    Ok(4.0 * PI * cfg.zeta / cfg.kappa)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapOptions {
    /// Maximum number of cells.
    pub budget: usize,
}

impl Default for MapOptions {
    fn default() -> Self {
        Self { budget: 20_000 }
    }
}

/// A cell whose steady state could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub flux_index: usize,
    pub freq_index: usize,
    pub phi_ext: f64,
    pub omega_d: f64,
    pub error: String,
}

/// Normalized transmission on a flux × frequency grid; failed cells are NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmissionMap {
    pub flux: Vec<f64>,
    pub freq: Vec<f64>,
    /// Row-major, `amplitude[i * freq.len() + j]`.
    pub amplitude: Vec<f64>,
    pub failures: Vec<CellFailure>,
}

impl TransmissionMap {
    pub fn get(&self, flux_index: usize, freq_index: usize) -> f64 {
        self.amplitude[flux_index * self.freq.len() + freq_index]
    }

    pub fn row(&self, flux_index: usize) -> &[f64] {
        let n = self.freq.len();
        &self.amplitude[flux_index * n..(flux_index + 1) * n]
    }
}

fn check_grid(name: &'static str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid(name, "grid is empty"));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(invalid(name, "grid has non-finite entries"));
    }
    Ok(())
}

/// Steady-state transmission for every (flux, frequency) pair; cells are
/// computed in parallel and failures leave NaN holes.
pub fn single_tone_map(
    model: &CoupledModel,
    cfg: &LindbladConfig,
    flux_grid: &[f64],
    freq_grid: &[f64],
    opts: &MapOptions,
) -> Result<TransmissionMap> {
    cfg.validate()?;
    model.validate()?;
    bare_amplitude(cfg)?;
    check_grid("flux_grid", flux_grid)?;
    check_grid("freq_grid", freq_grid)?;
    if freq_grid.iter().any(|&f| f <= 0.0) {
        return Err(invalid("freq_grid", "frequencies must be > 0"));
    }
    let cells = flux_grid.len() * freq_grid.len();
    if cells > opts.budget {
        return Err(Error::BudgetExceeded {
            cells,
            budget: opts.budget,
        });
    }

    let points: Vec<Result<FluxPoint>> = flux_grid
        .par_iter()
        .map(|&phi| FluxPoint::new(model, cfg, phi))
        .collect();
    let nf = freq_grid.len();
    let results: Vec<Result<f64>> = (0..cells)
        .into_par_iter()
        .map(|c| {
            let point = points[c / nf].as_ref().map_err(Clone::clone)?;
            point.transmission(freq_grid[c % nf])
        })
        .collect();

    let mut amplitude = Vec::with_capacity(cells);
    let mut failures = Vec::new();
    for (c, r) in results.into_iter().enumerate() {
        match r {
            Ok(a) => amplitude.push(a),
            Err(e) => {
                amplitude.push(f64::NAN);
                failures.push(CellFailure {
                    flux_index: c / nf,
                    freq_index: c % nf,
                    phi_ext: flux_grid[c / nf],
                    omega_d: freq_grid[c % nf],
                    error: e.to_string(),
                });
            }
        }
    }
    Ok(TransmissionMap {
        flux: flux_grid.to_vec(),
        freq: freq_grid.to_vec(),
        amplitude,
        failures,
    })
}
