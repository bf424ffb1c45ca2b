//! Fixed CSV layouts: 9 significant digits, '.' decimal separator, '\n' line endings.
//!
//! ```
//! use fluxsim::export::format_g9;
//! assert_eq!(format_g9(4.95), "4.95");
//! assert_eq!(format_g9(1.0 / 3.0), "0.333333333");
//! assert_eq!(format_g9(2.5e-7), "2.5e-07");
//! assert_eq!(format_g9(f64::NAN), "nan");
//! ```

use crate::coupled::TransitionCatalog;
use crate::dissipation::TransmissionMap;
use crate::fluxonium::Spectrum;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

const DIGITS: i32 = 9;

/// `printf("%.9g")`.
pub fn format_g9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    // exponent after rounding to 9 digits
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-4..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub const MAP_HEADER: &str = "flux,freq_GHz,amplitude";
pub const CATALOG_HEADER: &str = "flux,frequency_GHz,weight,order,initial_label,final_label";
pub const SPECTRUM_HEADER: &str = "flux,level,label,energy_GHz";

/// Long form, flux-major; failed cells print as "nan".
pub fn map_csv(map: &TransmissionMap) -> String {
    let mut out = String::from(MAP_HEADER);
    out.push('\n');
    for (i, &phi) in map.flux.iter().enumerate() {
        for (j, &f) in map.freq.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", format_g9(phi), format_g9(f), format_g9(map.get(i, j)));
        }
    }
    out
}

pub fn catalog_csv(catalogs: &[TransitionCatalog]) -> String {
    let mut out = String::from(CATALOG_HEADER);
    out.push('\n');
    for c in catalogs {
        for t in &c.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                format_g9(c.phi_ext),
                format_g9(t.frequency),
                format_g9(t.weight()),
                t.order,
                t.initial_label,
                t.final_label
            );
        }
    }
    out
}

/// One line of a level-vs-flux table; energy relative to the ground state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub flux: f64,
    pub level: usize,
    pub label: String,
    pub energy: f64,
}

/// Lowest `n_levels` of a spectrum.
pub fn level_rows(spectrum: &Spectrum, n_levels: usize) -> Vec<LevelRow> {
    let e0 = spectrum.energies()[0];
    spectrum
        .energies()
        .iter()
        .zip(spectrum.labels())
        .take(n_levels)
        .enumerate()
        .map(|(level, (e, label))| LevelRow {
            flux: spectrum.params().phi_ext,
            level,
            label: label.to_string(),
            energy: e - e0,
        })
        .collect()
}

pub fn spectrum_csv(rows: &[LevelRow]) -> String {
    let mut out = String::from(SPECTRUM_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", format_g9(r.flux), r.level, r.label, format_g9(r.energy));
    }
    out
}
