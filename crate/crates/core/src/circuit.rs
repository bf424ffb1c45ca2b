//! Lumped-element circuit model.
//!
//! The physical device has four nodes (resonator, coupler island, qubit
//! node, ground) with node phases φ_R, φ_1, φ_Q. The potential does not
//! depend on φ_1, so its conjugate charge is conserved; setting it to zero
//! eliminates φ_1 and leaves the three-node circuit used by the Hamiltonian.

use crate::error::{invalid, Error, Result};
use crate::units;
use nalgebra::{Matrix2, Matrix3};
use serde::{Deserialize, Serialize};

/// Josephson-junction chain realizing the superinductance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JunctionChain {
    pub n_junctions: u32,
    /// Inductance of one chain junction (nH).
    pub l_j_single: f64,
    /// Parasitic capacitance to ground of one chain island (fF).
    pub c_g_single: f64,
}

/// Four-node circuit: capacitances in fF, energies in GHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourNodeCircuit {
    pub c_r: f64,
    pub c_c: f64,
    pub c_1: f64,
    pub c_2: f64,
    pub e_lr: f64,
    pub e_l_chain: f64,
    pub e_j: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<JunctionChain>,
}

impl FourNodeCircuit {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("c_r", self.c_r),
            ("c_c", self.c_c),
            ("c_1", self.c_1),
            ("c_2", self.c_2),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("capacitance must be ≥ 0, got {v}")));
            }
        }
        for (name, v) in [
            ("e_lr", self.e_lr),
            ("e_l_chain", self.e_l_chain),
            ("e_j", self.e_j),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("energy must be > 0, got {v}")));
            }
        }
        if let Some(chain) = &self.chain {
            if chain.n_junctions < 1 {
                return Err(invalid("chain.n_junctions", "must be ≥ 1"));
            }
            if !(chain.l_j_single > 0.0) || !(chain.c_g_single >= 0.0) {
                return Err(invalid("chain", "inductance must be > 0 and capacitance ≥ 0"));
            }
        }
        Ok(())
    }

    /// Capacitance matrix in the node-phase coordinates (φ_R, φ_1, φ_Q).
    pub fn capacitance_matrix(&self) -> Matrix3<f64> {
        let c_t = self.c_1 + self.c_2 + self.c_c;
        Matrix3::new(
            self.c_r + self.c_c, -self.c_c, 0.0,
            -self.c_c, c_t, -self.c_2,
            0.0, -self.c_2, self.c_2,
        )
    }
}

/// Three-node effective circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeNodeCircuit {
    pub c_r_eff: f64,
    pub c_q_eff: f64,
    pub c_c_eff: f64,
    pub e_lr: f64,
    pub e_l_chain: f64,
    pub e_j: f64,
}

impl ThreeNodeCircuit {
    /// Kinetic-energy matrix in (φ_R, φ_Q); the cross term enters as −C̃_C.
    pub fn capacitance_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.c_r_eff, -self.c_c_eff, -self.c_c_eff, self.c_q_eff)
    }
}

/// Eliminate the coupler island: C_T = C_1 + C_2 + C_C and
/// C̃_R = C_R + C_C(C_1 + C_2)/C_T, C̃_Q = C_2(C_1 + C_C)/C_T, C̃_C = C_2 C_C/C_T.
pub fn reduce_circuit(circuit: &FourNodeCircuit) -> Result<ThreeNodeCircuit> {
    circuit.validate()?;
    let FourNodeCircuit { c_r, c_c, c_1, c_2, .. } = *circuit;
    let c_t = c_1 + c_2 + c_c;
    if c_t <= 0.0 {
        return Err(Error::DegenerateCircuit);
    }
    Ok(ThreeNodeCircuit {
        c_r_eff: c_r + c_c * (c_1 + c_2) / c_t,
        c_q_eff: c_2 * (c_1 + c_c) / c_t,
        c_c_eff: c_2 * c_c / c_t,
        e_lr: circuit.e_lr,
        e_l_chain: circuit.e_l_chain,
        e_j: circuit.e_j,
    })
}

/// Energy scales of the reduced circuit (GHz).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitEnergies {
    pub e_c: f64,
    pub e_l: f64,
    pub e_j: f64,
    pub nu_r: f64,
}

/// E_C = e²/2C̃_Q and ν_r = √(8 E_LR E_CR) with E_CR = e²/2C̃_R.
pub fn derive_energies(reduced: &ThreeNodeCircuit) -> Result<CircuitEnergies> {
    if !(reduced.c_r_eff > 0.0) {
        return Err(invalid("c_r_eff", "must be > 0"));
    }
    if !(reduced.c_q_eff > 0.0) {
        return Err(invalid("c_q_eff", "must be > 0"));
    }
    let e_cr = units::charging_energy_ghz(reduced.c_r_eff);
    Ok(CircuitEnergies {
        e_c: units::charging_energy_ghz(reduced.c_q_eff),
        e_l: reduced.e_l_chain,
        e_j: reduced.e_j,
        nu_r: units::lc_frequency_ghz(reduced.e_lr, e_cr),
    })
}

/// Thresholds for the superinductance sanity checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainLimits {
    /// Minimum ratio of total chain inductance to one junction's inductance.
    pub min_inductance_ratio: f64,
    /// Maximum Σ C_g as a fraction of C̃_Q.
    pub max_stray_fraction: f64,
}

impl Default for ChainLimits {
    fn default() -> Self {
        Self {
            min_inductance_ratio: 10.0,
            max_stray_fraction: 0.10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainAdvisory {
    /// Chain inductance is not much larger than a single junction's.
    ChainInductanceRatio { ratio: f64, minimum: f64 },
    /// Total stray capacitance is a large fraction of the shunt.
    StrayCapacitance { fraction: f64, maximum: f64 },
}

/// Result of checking the junction chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainCheck {
    NotApplicable,
    Checked(Vec<ChainAdvisory>),
}

/// Advisory checks on the junction chain; never fails hard.
pub fn validate_chain(circuit: &FourNodeCircuit, limits: &ChainLimits) -> Result<ChainCheck> {
    let Some(chain) = circuit.chain else {
        return Ok(ChainCheck::NotApplicable);
    };
    let reduced = reduce_circuit(circuit)?;
    let mut advisories = Vec::new();
    let n = chain.n_junctions as f64;
    // N·L_J over L_J
    let ratio = n;
    if ratio < limits.min_inductance_ratio {
        advisories.push(ChainAdvisory::ChainInductanceRatio {
            ratio,
            minimum: limits.min_inductance_ratio,
        });
    }
    let stray = n * chain.c_g_single;
    let fraction = if reduced.c_q_eff > 0.0 {
        stray / reduced.c_q_eff
    } else {
        f64::INFINITY
    };
    if fraction > limits.max_stray_fraction {
        advisories.push(ChainAdvisory::StrayCapacitance {
            fraction,
            maximum: limits.max_stray_fraction,
        });
    }
    Ok(ChainCheck::Checked(advisories))
}
