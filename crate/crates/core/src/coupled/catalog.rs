//! Transition catalogs from a chosen initial dressed state.

use super::{dressed_spectrum, CoupledModel, DressedSpectrum, StateSelector};
use crate::error::{invalid, Result};
use crate::linalg::CMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatalogOptions {
    /// 1 for single-photon lines only, 2 to add two-photon lines.
    pub max_order: u8,
    /// Smallest |intermediate detuning| (GHz) in the two-photon sum.
    pub detuning_floor: f64,
    /// Lines with a smaller total weight are dropped.
    pub min_weight: f64,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        Self {
            max_order: 2,
            detuning_floor: 1e-3,
            min_weight: 1e-12,
        }
    }
}

impl CatalogOptions {
    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.max_order) {
            return Err(invalid("max_order", "must be 1 or 2"));
        }
        if !(self.detuning_floor > 0.0) {
            return Err(invalid("detuning_floor", "must be > 0"));
        }
        if !(self.min_weight >= 0.0) {
            return Err(invalid("min_weight", "must be ≥ 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub initial: usize,
    pub final_state: usize,
    pub initial_label: String,
    pub final_label: String,
    /// Drive frequency (GHz); half the level spacing for two-photon lines.
    pub frequency: f64,
    pub order: u8,
    /// Contribution of the qubit-charge drive n̂ ⊗ 1.
    pub charge_weight: f64,
    /// Contribution of the resonator drive 1 ⊗ (a + a†).
    pub photon_weight: f64,
}

impl Transition {
    pub fn weight(&self) -> f64 {
        self.charge_weight + self.photon_weight
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionCatalog {
    pub phi_ext: f64,
    pub entries: Vec<Transition>,
}

impl TransitionCatalog {
    /// Entries reaching a final state with the given label, e.g. `"f0/0"`.
    pub fn to_label<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a Transition> + 'a {
        self.entries.iter().filter(move |t| t.final_label == label)
    }
}

/// Catalog of upward transitions from `initial` at flux `flux`.
pub fn transition_catalog(
    model: &CoupledModel,
    flux: f64,
    initial: &StateSelector,
    opts: &CatalogOptions,
) -> Result<TransitionCatalog> {
    opts.validate()?;
    let dressed = dressed_spectrum(&model.at_flux(flux))?;
    catalog_from_dressed(&dressed, initial, opts)
}

/// Same as [`transition_catalog`] for an already diagonalized point.
pub fn catalog_from_dressed(
    dressed: &DressedSpectrum,
    initial: &StateSelector,
    opts: &CatalogOptions,
) -> Result<TransitionCatalog> {
    opts.validate()?;
    let i = dressed.find(initial)?;
    let ops = [dressed.charge_operator(), dressed.quadrature_operator()];
    let e = dressed.energies();
    let mut entries = Vec::new();

    for f in 0..dressed.len() {
        let gap = e[f] - e[i];
        if gap <= 0.0 {
            continue;
        }
        let w = ops.clone().map(|op| op[(f, i)].norm_sqr());
        push(&mut entries, dressed, opts, i, f, gap, 1, w);
    }
    if opts.max_order == 2 {
        for f in 0..dressed.len() {
            let gap = e[f] - e[i];
            if gap <= 0.0 {
                continue;
            }
            let w = [0, 1].map(|k| two_photon_weight(&ops[k], e, i, f, opts.detuning_floor));
            push(&mut entries, dressed, opts, i, f, 0.5 * gap, 2, w);
        }
    }
    entries.sort_by(|a, b| a.frequency.total_cmp(&b.frequency).then(a.order.cmp(&b.order)));
    Ok(TransitionCatalog {
        phi_ext: dressed.phi_ext(),
        entries,
    })
}

#[allow(clippy::too_many_arguments)]
fn push(
    entries: &mut Vec<Transition>,
    dressed: &DressedSpectrum,
    opts: &CatalogOptions,
    i: usize,
    f: usize,
    frequency: f64,
    order: u8,
    [charge_weight, photon_weight]: [f64; 2],
) {
    if charge_weight + photon_weight < opts.min_weight {
        return;
    }
    entries.push(Transition {
        initial: i,
        final_state: f,
        initial_label: dressed.label(i),
        final_label: dressed.label(f),
        frequency,
        order,
        charge_weight,
        photon_weight,
    });
}

// |Σ_k ⟨f|D|k⟩⟨k|D|i⟩ / (E_k − E_i − ω)|² with ω half the i→f spacing.
fn two_photon_weight(op: &CMatrix, e: &[f64], i: usize, f: usize, floor: f64) -> f64 {
    let omega = 0.5 * (e[f] - e[i]);
    let mut amp = num_complex::Complex64::new(0.0, 0.0);
    for k in 0..e.len() {
        let mut det = e[k] - e[i] - omega;
        if det.abs() < floor {
            det = floor.copysign(det);
        }
        amp += op[(f, k)] * op[(k, i)] / det;
    }
    amp.norm_sqr()
}
