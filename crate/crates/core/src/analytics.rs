//! Closed-form models used to interpret the numerical spectra.
//!
//! Dispersion coefficients are per (Φ_ext/Φ₀)², in GHz.

use crate::error::{invalid, Result};
use crate::fluxonium::{diagonalize, BasisConfig, FluxoniumParams, Operator};
use crate::linalg::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Stark-shifted minimum of the central well, 2πΦ_ext(1 − E_L/E_J), to
/// lowest order in E_L/E_J.
pub fn stark_minimum(params: &FluxoniumParams) -> Result<f64> {
    if !(params.e_j > params.e_l) {
        return Err(invalid("e_j", "stark_minimum needs E_J > E_L"));
    }
    Ok(2.0 * PI * params.phi_ext * (1.0 - params.e_l / params.e_j))
}

/// ⟨m|(a + a†)³|n⟩ for harmonic-oscillator number states.
pub fn ladder_cube(m: usize, n: usize) -> f64 {
    let s = |k: usize| (k as f64).sqrt();
    match m as i64 - n as i64 {
        3 => s(n + 1) * s(n + 2) * s(n + 3),
        1 => 3.0 * (n as f64 + 1.0).powf(1.5),
        -1 => 3.0 * (n as f64).powf(1.5),
        -3 => s(n) * s(n - 1) * s(n - 2),
        _ => 0.0,
    }
}

/// Quadratic plasmon dispersion from the flux-distorted well.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionReport {
    /// φ_min per unit Φ_ext/Φ₀ (rad).
    pub phi_min_coefficient: f64,
    /// −(πE_L/E_J)² E_P: weakened effective E_J in the even part of the well.
    pub symmetric: f64,
    /// Second-order shift of the g₀→e₀ gap from the cubic odd part of the well.
    pub antisymmetric: f64,
    /// symmetric + antisymmetric.
    pub total: f64,
}

impl DispersionReport {
    /// The antisymmetric coefficient in the sign convention
    /// (πE_L/3)²·[|⟨f₀|φ³|e₀⟩|²/E′_P − 2|⟨g₀|φ³|e₀⟩|²/E_P], i.e. −antisymmetric.
    pub fn antisymmetric_bracket(&self) -> f64 {
        -self.antisymmetric
    }

    /// Coefficient `a` of ε_Q = ε_Q(0) − a(Φ_ext/Φ₀)².
    pub fn curvature(&self) -> f64 {
        -self.total
    }

    /// Resonator- and qubit-like dispersion after hybridization, taking a = −total.
    pub fn shared(&self, h: &Hybridization) -> SharedDispersion {
        SharedDispersion::new(self.curvature(), h)
    }
}

/// ΔE = quadratic·(Φ_ext/Φ₀)² + quartic·(Φ_ext/Φ₀)⁴ for both branches (GHz).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharedDispersion {
    pub a: f64,
    pub resonator_quadratic: f64,
    pub qubit_quadratic: f64,
    pub resonator_quartic: f64,
    pub qubit_quartic: f64,
}

impl SharedDispersion {
    pub fn new(a: f64, h: &Hybridization) -> Self {
        SharedDispersion {
            a,
            resonator_quadratic: -h.quadratic_fractions[0] * a,
            qubit_quadratic: -h.quadratic_fractions[1] * a,
            resonator_quartic: h.quartic_per_a2[0] * a * a,
            qubit_quartic: h.quartic_per_a2[1] * a * a,
        }
    }
}

/// Perturbative plasmon dispersion. The cubic matrix elements are evaluated
/// in the local oscillator basis with φ = phi_zpf(a + a†).
///
/// Second-order theory lowers e₀ through f₀ and raises it through g₀ while
/// g₀ is lowered through e₀, so the g₀→e₀ gap changes by
/// −(πE_L/3)²[|V_fe|²/E′_P − 2|V_ge|²/E_P] per (Φ_ext/Φ₀)².
pub fn plasmon_dispersion(params: &FluxoniumParams, e_p: f64, e_p_prime: f64, phi_zpf: f64) -> Result<DispersionReport> {
    if !(e_p > 0.0) {
        return Err(invalid("e_p", "must be > 0"));
    }
    if !(e_p_prime > 0.0) {
        return Err(invalid("e_p_prime", "must be > 0"));
    }
    if phi_zpf == 0.0 || !phi_zpf.is_finite() {
        return Err(invalid("phi_zpf", "must be finite and non-zero"));
    }
    let (e_l, e_j) = (params.e_l, params.e_j);
    let symmetric = -(PI * e_l / e_j).powi(2) * e_p;
    let cube = phi_zpf.powi(3);
    let v_fe = cube * ladder_cube(2, 1);
    let v_ge = cube * ladder_cube(0, 1);
    let bracket = v_fe.powi(2) / e_p_prime - 2.0 * v_ge.powi(2) / e_p;
    let antisymmetric = -(PI * e_l / 3.0).powi(2) * bracket;
    Ok(DispersionReport {
        phi_min_coefficient: 2.0 * PI * (1.0 - e_l / e_j),
        symmetric,
        antisymmetric,
        total: symmetric + antisymmetric,
    })
}

/// Two coupled single-excitation states |1_R, g₀⟩ and |0_R, e₀⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelModel {
    pub eps_r: f64,
    pub eps_q: f64,
    pub m: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hybridization {
    /// Resonator-like and qubit-like eigenvalues.
    pub eigenvalues: [f64; 2],
    /// α/β for the resonator-like and qubit-like branches.
    pub amplitude_ratios: [C64; 2],
    /// |β_R|²: qubit weight in the resonator-like state.
    pub beta_r_sq: f64,
    /// I_R/I_Q = |α_R/α_Q|²; infinite when decoupled.
    pub intensity_ratio: f64,
    pub decoupled: bool,
    /// Fractions of `a` entering the resonator- and qubit-like quadratic
    /// coefficients (−f·a each); they sum to one.
    pub quadratic_fractions: [f64; 2],
    /// Quartic coefficients per a² (1/GHz): ±|m|²/D^{3/2}, D = (ε_Q − ε_R)² + 4|m|².
    pub quartic_per_a2: [f64; 2],
}

/// Diagonalize the 2×2 model; the resonator-like branch is the eigenvector
/// with the larger |α|².
pub fn hybridize(model: &TwoLevelModel) -> Hybridization {
    let TwoLevelModel { eps_r, eps_q, m } = *model;
    let d = eps_q - eps_r;
    let m2 = m.norm_sqr();
    let f = (0.25 * d * d + m2).sqrt();
    let mean = 0.5 * (eps_r + eps_q);
    // the resonator-like branch follows ε_R; at exact resonance take the lower one
    let sign = if d >= 0.0 { 1.0 } else { -1.0 };
    let lam_r = mean - sign * f;
    let lam_q = mean + sign * f;

    if m2 == 0.0 {
        return Hybridization {
            eigenvalues: [eps_r, eps_q],
            amplitude_ratios: [C64::new(f64::INFINITY, 0.0), C64::new(0.0, 0.0)],
            beta_r_sq: 0.0,
            intensity_ratio: f64::INFINITY,
            decoupled: true,
            quadratic_fractions: [0.0, 1.0],
            quartic_per_a2: [0.0, 0.0],
        };
    }
    // (ε_R − λ)α + mβ = 0
    let ratio = |lam: f64| -m / (eps_r - lam);
    let weight = |r: C64| r.norm_sqr() / (1.0 + r.norm_sqr());
    let (r_r, r_q) = (ratio(lam_r), ratio(lam_q));
    let (alpha_r_sq, alpha_q_sq) = (weight(r_r), weight(r_q));
    let frac_r = 0.5 - d.abs() / (4.0 * f);
    let quartic = m2 / (d * d + 4.0 * m2).powf(1.5);
    Hybridization {
        eigenvalues: [lam_r, lam_q],
        amplitude_ratios: [r_r, r_q],
        beta_r_sq: 1.0 - alpha_r_sq,
        intensity_ratio: alpha_r_sq / alpha_q_sq,
        decoupled: false,
        quadratic_fractions: [frac_r, 1.0 - frac_r],
        quartic_per_a2: [-sign * quartic, sign * quartic],
    }
}

/// Λ-system drive parameters (GHz).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamanConfig {
    pub omega_probe: f64,
    pub omega_pump: f64,
    /// Detuning from two-photon resonance.
    pub delta: f64,
    /// Detuning of the pump from the intermediate state.
    pub delta_2gamma: f64,
}

impl RamanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.delta == 0.0 || !self.delta.is_finite() {
            return Err(invalid("delta", "must be finite and non-zero"));
        }
        if self.delta_2gamma == 0.0 || !self.delta_2gamma.is_finite() {
            return Err(invalid("delta_2gamma", "must be finite and non-zero"));
        }
        Ok(())
    }
}

/// Effective g₀↔g₁ Rabi frequency Ω_probe Ω_pump² / (Δ δ_2γ) (GHz).
pub fn raman_rate(cfg: &RamanConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(cfg.omega_probe * cfg.omega_pump.powi(2) / (cfg.delta * cfg.delta_2gamma))
}

/// π-pulse duration (ns) for a cyclic Rabi frequency in GHz: 1/(2|Ω|).
pub fn pi_time(rate: f64) -> f64 {
    1.0 / (2.0 * rate.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingLaws {
    /// 4π²E_L (GHz per Φ₀).
    pub fluxon_slope: f64,
    /// exp[−π²√(E_J/8E_C)].
    pub suppression: f64,
}

pub fn scaling_laws(params: &FluxoniumParams) -> ScalingLaws {
    ScalingLaws {
        fluxon_slope: 4.0 * PI * PI * params.e_l,
        suppression: (-PI * PI * (params.e_j / (8.0 * params.e_c)).sqrt()).exp(),
    }
}

/// Default reference flux for [`t1_relative`].
pub const T1_REFERENCE_FLUX: f64 = 0.078;

/// |⟨g₁|n̂|g₀⟩| at one flux.
pub fn fluxon_charge_element(params: &FluxoniumParams) -> Result<f64> {
    let spec = diagonalize(params, &BasisConfig::default())?;
    let g0 = spec
        .find(0, 0)
        .ok_or_else(|| crate::Error::LabelNotFound("g0".into()))?;
    let g1 = spec
        .find(1, 0)
        .ok_or_else(|| crate::Error::LabelNotFound("g1".into()))?;
    Ok(spec.operator(Operator::Charge)[(g1, g0)].norm())
}

/// T₁ relative to its value at `reference`, assuming T₁ ∝ 1/|⟨g₁|n̂|g₀⟩|².
pub fn t1_relative(params: &FluxoniumParams, flux_grid: &[f64], reference: f64) -> Result<Vec<f64>> {
    let r = fluxon_charge_element(&params.at_flux(reference))?.powi(2);
    flux_grid
        .iter()
        .map(|&phi| Ok(r / fluxon_charge_element(&params.at_flux(phi))?.powi(2)))
        .collect()
}
