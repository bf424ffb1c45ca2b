//! Physical constants and unit conversions.
//!
//! Capacitances are in fF, inductances in nH, and all energies are frequencies
//! in GHz (energies divided by Planck's constant). Time is in ns, so a
//! Hamiltonian term `E` (GHz) generates a phase `2π·E·t`.

use std::f64::consts::PI;

/// Elementary charge (C), exact SI value.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant (J·s), exact SI value.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Boltzmann constant (J/K), exact SI value.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Magnetic flux quantum h/2e (Wb).
pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * ELEMENTARY_CHARGE);

/// k_B/h in GHz per kelvin (≈ 20.8366).
pub const KB_OVER_H_GHZ_PER_K: f64 = BOLTZMANN / PLANCK * 1e-9;

const FEMTO: f64 = 1e-15;
const NANO: f64 = 1e-9;
const GIGA: f64 = 1e9;

/// Charging energy e²/2C in GHz for a capacitance in fF.
pub fn charging_energy_ghz(capacitance_ff: f64) -> f64 {
    ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * capacitance_ff * FEMTO) / PLANCK / GIGA
}

/// Capacitance in fF whose charging energy e²/2C equals `e_c_ghz`.
pub fn capacitance_ff(e_c_ghz: f64) -> f64 {
    ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * e_c_ghz * GIGA * PLANCK) / FEMTO
}

/// Inductive energy (Φ₀/2π)²/L in GHz for an inductance in nH.
pub fn inductive_energy_ghz(inductance_nh: f64) -> f64 {
    let reduced = FLUX_QUANTUM / (2.0 * PI);
    reduced * reduced / (inductance_nh * NANO) / PLANCK / GIGA
}

/// Inductance in nH whose inductive energy (Φ₀/2π)²/L equals `e_l_ghz`.
pub fn inductance_nh(e_l_ghz: f64) -> f64 {
    let reduced = FLUX_QUANTUM / (2.0 * PI);
    reduced * reduced / (e_l_ghz * GIGA * PLANCK) / NANO
}

/// LC oscillator frequency √(8·E_L·E_C) in GHz, i.e. 1/(2π√(LC)).
pub fn lc_frequency_ghz(e_l_ghz: f64, e_c_ghz: f64) -> f64 {
    (8.0 * e_l_ghz * e_c_ghz).sqrt()
}

/// Bose–Einstein occupation of a mode at `frequency_ghz` and `temperature_k`.
///
/// Zero temperature gives exactly zero; the frequency enters by magnitude.
pub fn bose_occupation(frequency_ghz: f64, temperature_k: f64) -> f64 {
    if temperature_k <= 0.0 {
        return 0.0;
    }
    let x = frequency_ghz.abs() / (KB_OVER_H_GHZ_PER_K * temperature_k);
    1.0 / x.exp_m1()
}

/// Angular frequency (rad/ns) of a frequency given in GHz.
#[inline]
pub fn angular(frequency_ghz: f64) -> f64 {
    2.0 * PI * frequency_ghz
}
