//! Parameters of the measured heavy-fluxonium device.

use crate::coupled::CoupledModel;
use crate::fluxonium::FluxoniumParams;

pub const E_C_GHZ: f64 = 0.46;
pub const E_J_GHZ: f64 = 8.11;
pub const E_L_GHZ: f64 = 0.24;
/// Bare readout-resonator frequency.
pub const NU_R_GHZ: f64 = 4.95;
/// Fluxonium–resonator coupling.
pub const G_GHZ: f64 = 0.076;
/// Resonator rate constant (1/ns).
pub const KAPPA: f64 = 0.04;
/// Fluxonium rate constant (1/ns).
pub const GAMMA_Q: f64 = 0.0005;
pub const TEMPERATURE_K: f64 = 0.030;
/// Flux at which coherent Raman operations were characterized.
pub const OPERATING_FLUX: f64 = 0.078;

pub fn device_params(phi_ext: f64) -> FluxoniumParams {
    FluxoniumParams {
        e_c: E_C_GHZ,
        e_j: E_J_GHZ,
        e_l: E_L_GHZ,
        phi_ext,
    }
}

/// Device fluxonium coupled to its readout resonator, default truncation.
pub fn device_model(phi_ext: f64) -> CoupledModel {
    CoupledModel {
        fluxonium: device_params(phi_ext),
        nu_r: NU_R_GHZ,
        g: G_GHZ,
        n_flux_levels: CoupledModel::DEFAULT_FLUX_LEVELS,
        n_photons: CoupledModel::DEFAULT_PHOTONS,
    }
}
