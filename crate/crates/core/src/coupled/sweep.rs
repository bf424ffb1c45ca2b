//! Dressed spectra along a flux sweep with eigenvector state-following.

use super::{dressed_from_bare, CoupledModel, DressedSpectrum};
use crate::error::{Error, Result};
use crate::fluxonium::diagonalize;
use rayon::prelude::*;

/// Two overlaps closer than this (relative) make a following step ambiguous.
const AMBIGUITY: f64 = 0.01;

/// A following step where the best two candidates were nearly tied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ambiguity {
    pub track: usize,
    pub candidates: [usize; 2],
    pub overlaps: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub spectrum: DressedSpectrum,
    /// `tracks[t]` is the dressed index followed by track `t` at this point.
    pub tracks: Vec<usize>,
    pub ambiguities: Vec<Ambiguity>,
}

/// Dressed spectra along a flux grid. Track `t` starts at dressed state `t`
/// of the first point.
#[derive(Debug, Clone)]
pub struct DressedSweep {
    pub points: Vec<SweepPoint>,
}

impl DressedSweep {
    pub fn flux(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.spectrum.phi_ext()).collect()
    }

    pub fn n_tracks(&self) -> usize {
        self.points.first().map_or(0, |p| p.tracks.len())
    }

    /// Energy of a followed level at every flux point.
    pub fn track_energies(&self, track: usize) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| p.spectrum.energies()[p.tracks[track]])
            .collect()
    }

    /// Label of a track at the first point.
    pub fn track_label(&self, track: usize) -> String {
        self.points[0].spectrum.label(track)
    }

    /// Track that starts at the given product state (fluxonium level, photons).
    pub fn track_of(&self, level: usize, photons: usize) -> usize {
        self.points[0].spectrum.find_bare(level, photons)
    }

    /// False if any following step was ambiguous.
    pub fn is_continuous(&self) -> bool {
        self.points.iter().all(|p| p.ambiguities.is_empty())
    }
}

/// Diagonalize at each flux (in parallel) and follow levels by overlap.
pub fn dressed_sweep(model: &CoupledModel, flux_grid: &[f64]) -> Result<DressedSweep> {
    model.validate()?;
    if let Some(bad) = flux_grid.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite flux {bad}")));
    }
    let basis = model.basis();
    let spectra: Vec<DressedSpectrum> = flux_grid
        .par_iter()
        .map(|&phi| {
            let m = model.at_flux(phi);
            let bare = diagonalize(&m.fluxonium, &basis)?;
            dressed_from_bare(&m, bare)
        })
        .collect::<Result<_>>()?;

    let mut points: Vec<SweepPoint> = Vec::with_capacity(spectra.len());
    for spectrum in spectra {
        let (tracks, ambiguities) = match points.last() {
            None => ((0..spectrum.len()).collect(), Vec::new()),
            Some(prev) => follow(&prev.spectrum, &prev.tracks, &spectrum),
        };
        points.push(SweepPoint {
            spectrum,
            tracks,
            ambiguities,
        });
    }
    Ok(DressedSweep { points })
}

// Greedy maximum-overlap assignment of previous dressed states to current ones.
fn follow(prev: &DressedSpectrum, prev_tracks: &[usize], cur: &DressedSpectrum) -> (Vec<usize>, Vec<Ambiguity>) {
    let s = cur.overlap(prev).map(|c| c.norm_sqr());
    let n = cur.len();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    pairs.sort_by(|a, b| s[*b].total_cmp(&s[*a]).then(a.cmp(b)));
    let mut cur_of_prev = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for (i, j) in pairs {
        if cur_of_prev[j] == usize::MAX && !taken[i] {
            cur_of_prev[j] = i;
            taken[i] = true;
        }
    }

    let mut ambiguities = Vec::new();
    let tracks: Vec<usize> = prev_tracks
        .iter()
        .enumerate()
        .map(|(t, &j)| {
            let col = s.column(j);
            let mut best = [(0.0, 0usize), (0.0, 0usize)];
            for (i, &v) in col.iter().enumerate() {
                if v > best[0].0 {
                    best = [(v, i), best[0]];
                } else if v > best[1].0 {
                    best[1] = (v, i);
                }
            }
            if best[0].0 > 0.0 && best[0].0 - best[1].0 <= AMBIGUITY * best[0].0 {
                ambiguities.push(Ambiguity {
                    track: t,
                    candidates: [best[0].1, best[1].1],
                    overlaps: [best[0].0, best[1].0],
                });
            }
            cur_of_prev[j]
        })
        .collect();
    (tracks, ambiguities)
}
