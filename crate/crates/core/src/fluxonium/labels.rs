//! Well/plasmon labelling from probability mass in each potential well.

use super::{FluxoniumParams, Spectrum};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Labels below this captured probability are reported as mixed.
pub const MIXED_CONFIDENCE: f64 = 0.75;

const WELLS: std::ops::RangeInclusive<i32> = -2..=2;
const GRID_STEP: f64 = 0.02;
const PLASMON_NAMES: &[char] = &['g', 'e', 'f', 'h', 'i', 'j', 'k', 'l'];

/// Fluxoid well index and plasmon level of an eigenstate.
///
/// Well `m` is the potential minimum near φ = 2π(Φ_ext − m); with this
/// orientation the `m = 1` well becomes degenerate with `m = 0` at Φ_ext = ½.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateLabel {
    pub well: i32,
    pub plasmon: usize,
    pub confidence: f64,
}

impl StateLabel {
    pub fn is_mixed(&self) -> bool {
        self.confidence < MIXED_CONFIDENCE
    }

    pub fn matches(&self, well: i32, plasmon: usize) -> bool {
        self.well == well && self.plasmon == plasmon
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match PLASMON_NAMES.get(self.plasmon) {
            Some(c) => write!(f, "{c}{}", self.well),
            None => write!(f, "p{}_{}", self.plasmon, self.well),
        }
    }
}

impl FromStr for StateLabel {
    type Err = String;

    /// Parses names such as `g0`, `e-1` or `p9_2`; confidence is set to 1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("not a state label: {s:?}");
        let (plasmon, well) = if let Some(rest) = s.strip_prefix('p') {
            let (p, w) = rest.split_once('_').ok_or_else(bad)?;
            (p.parse().map_err(|_| bad())?, w)
        } else {
            let c = s.chars().next().ok_or_else(bad)?;
            let p = PLASMON_NAMES.iter().position(|&x| x == c).ok_or_else(bad)?;
            (p, &s[c.len_utf8()..])
        };
        let well = well.parse().map_err(|_| bad())?;
        Ok(StateLabel { well, plasmon, confidence: 1.0 })
    }
}

/// Stark-shifted center of well `m`: 2π(Φ_ext − m)(1 − E_L/E_J).
pub fn well_center(params: &FluxoniumParams, m: i32) -> f64 {
    2.0 * PI * (params.phi_ext - m as f64) * (1.0 - params.e_l / params.e_j)
}

// Boundaries between wells lie halfway between adjacent centers.
fn well_bounds(params: &FluxoniumParams, m: i32) -> (f64, f64) {
    let c = well_center(params, m);
    let half = PI * (1.0 - params.e_l / params.e_j).abs();
    (c - half, c + half)
}

/// Probability mass of each state in wells −2..=2 (columns ordered by well).
pub(crate) fn well_masses(spec: &Spectrum) -> Vec<[f64; 5]> {
    let p = spec.params();
    let (lo, _) = well_bounds(p, *WELLS.end());
    let (_, hi) = well_bounds(p, *WELLS.start());
    let n = ((hi - lo) / GRID_STEP).ceil() as usize + 1;
    let h = (hi - lo) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
    let psi = spec.oscillator().wavefunctions(&grid) * spec.eigenvectors();

    let bounds: Vec<(f64, f64)> = WELLS.map(|m| well_bounds(p, m)).collect();
    let mut out = vec![[0.0; 5]; spec.len()];
    for (k, masses) in out.iter_mut().enumerate() {
        for (w, &(a, b)) in bounds.iter().enumerate() {
            masses[w] = integrate(&grid, |i| psi[(i, k)].powi(2), a, b);
        }
    }
    out
}

// Trapezoid over grid points inside [a, b], with linear end corrections.
fn integrate(grid: &[f64], f: impl Fn(usize) -> f64, a: f64, b: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..grid.len() - 1 {
        let (x0, x1) = (grid[i], grid[i + 1]);
        let lo = x0.max(a);
        let hi = x1.min(b);
        if hi <= lo {
            continue;
        }
        let (f0, f1) = (f(i), f(i + 1));
        let at = |x: f64| f0 + (f1 - f0) * (x - x0) / (x1 - x0);
        total += 0.5 * (at(lo) + at(hi)) * (hi - lo);
    }
    total
}

pub(crate) fn double_well_mass(spec: &Spectrum, m1: i32, m2: i32) -> Vec<f64> {
    let idx = |m: i32| (m - WELLS.start()) as usize;
    well_masses(spec)
        .iter()
        .map(|w| w[idx(m1)] + w[idx(m2)])
        .collect()
}

/// Assign each state the well holding most of its probability and rank it
/// by energy among the states assigned to that well.
pub fn label_states(spec: &Spectrum) -> Vec<StateLabel> {
    let masses = well_masses(spec);
    let mut counts = [0usize; 5];
    masses
        .iter()
        .map(|m| {
            let (w, &conf) = m
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("five wells");
            let plasmon = counts[w];
            counts[w] += 1;
            StateLabel {
                well: WELLS.start() + w as i32,
                plasmon,
                confidence: conf.clamp(0.0, 1.0),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluxonium::{diagonalize, BasisConfig};
    use crate::presets::device_params;

    #[test]
    fn three_wells_at_small_flux() {
        let spec = diagonalize(&device_params(0.02), &BasisConfig::default()).unwrap();
        let names: Vec<String> = spec.labels()[..3].iter().map(|l| l.to_string()).collect();
        assert_eq!(names, ["g0", "g1", "g-1"]);
        for l in &spec.labels()[..3] {
            assert!(!l.is_mixed(), "{l:?}");
        }
        // g1 sits in the well near φ ≈ −2π for positive flux.
        let g1 = spec.find(1, 0).unwrap();
        let c = well_center(spec.params(), 1);
        assert!((c + 2.0 * PI).abs() < 0.5);
        assert!(spec.labels()[g1].confidence > 0.95);
    }

    #[test]
    fn labels_unique_among_lowest_states() {
        for phi in [0.02, 0.1, 0.25, 0.4] {
            let spec = diagonalize(&device_params(phi), &BasisConfig::default()).unwrap();
            let lab = &spec.labels()[..9];
            for i in 0..lab.len() {
                for j in 0..i {
                    assert!(
                        !(lab[i].well == lab[j].well && lab[i].plasmon == lab[j].plasmon),
                        "duplicate label at flux {phi}"
                    );
                }
            }
        }
    }

    #[test]
    fn half_flux_ground_doublet_is_mixed() {
        let spec = diagonalize(&device_params(0.5), &BasisConfig::default()).unwrap();
        for l in &spec.labels()[..2] {
            assert!(l.is_mixed());
            assert!((l.confidence - 0.5).abs() < 0.05, "{l:?}");
        }
    }

    #[test]
    fn heavier_circuit_localizes_more() {
        let mut last = 0.0;
        for scale in [1.0, 1.5, 2.0, 3.0, 4.0] {
            let mut p = device_params(0.3);
            p.e_c /= scale;
            let spec = diagonalize(&p, &BasisConfig::default()).unwrap();
            let g1 = spec.find(1, 0).unwrap();
            let c = spec.labels()[g1].confidence;
            assert!(c >= last, "confidence {c} dropped below {last} at ×{scale}");
            last = c;
        }
    }

    #[test]
    fn display_names() {
        let l = StateLabel { well: -1, plasmon: 1, confidence: 1.0 };
        assert_eq!(l.to_string(), "e-1");
        let l = StateLabel { well: 2, plasmon: 9, confidence: 1.0 };
        assert_eq!(l.to_string(), "p9_2");
        for name in ["g0", "e-1", "f2", "p9_2", "p11_-1"] {
            assert_eq!(name.parse::<StateLabel>().unwrap().to_string(), name);
        }
        assert!("x0".parse::<StateLabel>().is_err());
        assert!("g".parse::<StateLabel>().is_err());
    }
}
