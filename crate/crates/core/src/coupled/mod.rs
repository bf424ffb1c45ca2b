//! Fluxonium ⊗ resonator:
//! H = Σ_j E_j |j⟩⟨j| + ν_r a†a + g Σ_jk ⟨j|n̂|k⟩ |j⟩⟨k| (a + a†).
//!
//! Product states are indexed flux-major, `j * n_photons + n`.

mod catalog;
mod sweep;

pub use catalog::{catalog_from_dressed, transition_catalog, CatalogOptions, Transition, TransitionCatalog};
pub use sweep::{dressed_sweep, Ambiguity, DressedSweep, SweepPoint};

use crate::error::{invalid, Error, Result};
use crate::fluxonium::{diagonalize, BasisConfig, FluxoniumParams, Operator, Spectrum, StateLabel};
use crate::linalg::{eigh_complex, hermiticity_defect, kron, CMatrix, C64};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoupledModel {
    pub fluxonium: FluxoniumParams,
    pub nu_r: f64,
    pub g: f64,
    pub n_flux_levels: usize,
    pub n_photons: usize,
}

impl CoupledModel {
    pub const DEFAULT_FLUX_LEVELS: usize = 18;
    pub const DEFAULT_PHOTONS: usize = 7;

    pub fn new(fluxonium: FluxoniumParams, nu_r: f64, g: f64) -> Result<Self> {
        let m = Self {
            fluxonium,
            nu_r,
            g,
            n_flux_levels: Self::DEFAULT_FLUX_LEVELS,
            n_photons: Self::DEFAULT_PHOTONS,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn with_truncation(mut self, n_flux_levels: usize, n_photons: usize) -> Result<Self> {
        self.n_flux_levels = n_flux_levels;
        self.n_photons = n_photons;
        self.validate()?;
        Ok(self)
    }

    pub fn at_flux(&self, phi_ext: f64) -> Self {
        Self {
            fluxonium: self.fluxonium.at_flux(phi_ext),
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.fluxonium.validate()?;
        if !(self.nu_r.is_finite() && self.nu_r > 0.0) {
            return Err(invalid("nu_r", format!("must be > 0, got {}", self.nu_r)));
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return Err(invalid("g", format!("must be ≥ 0, got {}", self.g)));
        }
        if self.n_flux_levels < 3 {
            return Err(invalid("n_flux_levels", "must be ≥ 3"));
        }
        if self.n_photons < 2 {
            return Err(invalid("n_photons", "must be ≥ 2"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n_flux_levels * self.n_photons
    }

    /// Fluxonium basis settings sufficient for this truncation.
    pub fn basis(&self) -> BasisConfig {
        BasisConfig::with_states(self.n_flux_levels)
    }
}

/// Truncated annihilation operator.
pub fn annihilation(n_photons: usize) -> CMatrix {
    CMatrix::from_fn(n_photons, n_photons, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn truncated_charge(model: &CoupledModel, spec: &Spectrum) -> Result<CMatrix> {
    let nf = model.n_flux_levels;
    if spec.len() < nf {
        return Err(Error::InvalidInput(format!(
            "spectrum has {} states, coupled model needs {nf}",
            spec.len()
        )));
    }
    Ok(spec.operator(Operator::Charge).view((0, 0), (nf, nf)).into_owned())
}

/// Coupled Hamiltonian (GHz) in the product basis of the lowest
/// `n_flux_levels` fluxonium eigenstates and `n_photons` Fock states.
pub fn build_coupled(model: &CoupledModel, spec: &Spectrum) -> Result<CMatrix> {
    model.validate()?;
    let (nf, np) = (model.n_flux_levels, model.n_photons);
    let charge = truncated_charge(model, spec)?;
    let a = annihilation(np);
    let x = &a + a.adjoint();
    let mut h = kron(&charge, &x) * C64::new(model.g, 0.0);
    for j in 0..nf {
        for n in 0..np {
            let k = j * np + n;
            h[(k, k)] += C64::new(spec.energies()[j] + model.nu_r * n as f64, 0.0);
        }
    }
    let defect = hermiticity_defect(&h);
    debug_assert!(defect <= 1e-12 * (1.0 + model.nu_r), "non-Hermitian coupled H: {defect}");
    Ok(h)
}

/// Bare product state |fluxonium label, photon number⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BareState {
    /// Index into the fluxonium spectrum.
    pub level: usize,
    pub label: StateLabel,
    pub photons: usize,
}

impl fmt::Display for BareState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.label, self.photons)
    }
}

/// Dominant bare component of a dressed state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub bare: BareState,
    /// |⟨bare|dressed⟩|².
    pub weight: f64,
}

/// Picks a dressed state either by index or by the bare state it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSelector {
    Index(usize),
    Bare { well: i32, plasmon: usize, photons: usize },
}

impl StateSelector {
    pub fn bare(label: &str, photons: usize) -> Result<Self> {
        let l: StateLabel = label.parse().map_err(Error::InvalidInput)?;
        Ok(Self::Bare {
            well: l.well,
            plasmon: l.plasmon,
            photons,
        })
    }
}

impl FromStr for StateSelector {
    type Err = Error;

    /// `"3"` selects dressed index 3; `"g0/1"` selects the state from |g₀, 1⟩.
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(i) = s.parse::<usize>() {
            return Ok(Self::Index(i));
        }
        let (label, photons) = s
            .split_once('/')
            .ok_or_else(|| Error::InvalidInput(format!("state selector {s:?}: expected <label>/<photons>")))?;
        let photons = photons
            .parse()
            .map_err(|_| Error::InvalidInput(format!("state selector {s:?}: bad photon number")))?;
        Self::bare(label, photons)
    }
}

impl fmt::Display for StateSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Index(i) => write!(f, "{i}"),
            Self::Bare { well, plasmon, photons } => {
                let l = StateLabel { well, plasmon, confidence: 1.0 };
                write!(f, "{l}/{photons}")
            }
        }
    }
}

/// Eigensystem of the coupled Hamiltonian at one flux point.
#[derive(Debug, Clone)]
pub struct DressedSpectrum {
    model: CoupledModel,
    bare: Spectrum,
    charge: CMatrix,
    energies: Vec<f64>,
    vectors: CMatrix,
    provenance: Vec<Provenance>,
}

impl DressedSpectrum {
    pub fn model(&self) -> &CoupledModel {
        &self.model
    }

    pub fn phi_ext(&self) -> f64 {
        self.model.fluxonium.phi_ext
    }

    /// The underlying fluxonium spectrum.
    pub fn bare(&self) -> &Spectrum {
        &self.bare
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Product-basis coefficients, one column per dressed state.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn label(&self, i: usize) -> String {
        self.provenance[i].bare.to_string()
    }

    /// Dressed state whose dominant bare component matches the selector.
    pub fn find(&self, sel: &StateSelector) -> Result<usize> {
        match *sel {
            StateSelector::Index(i) if i < self.len() => Ok(i),
            StateSelector::Index(i) => Err(Error::LabelNotFound(format!("#{i}"))),
            StateSelector::Bare { well, plasmon, photons } => self
                .provenance
                .iter()
                .enumerate()
                .filter(|(_, p)| p.bare.label.matches(well, plasmon) && p.bare.photons == photons)
                .max_by(|a, b| a.1.weight.total_cmp(&b.1.weight))
                .map(|(i, _)| i)
                .ok_or_else(|| Error::LabelNotFound(sel.to_string())),
        }
    }

    /// Dressed index with the largest weight on a given product state.
    pub fn find_bare(&self, level: usize, photons: usize) -> usize {
        let k = level * self.model.n_photons + photons;
        (0..self.len())
            .max_by(|&a, &b| self.vectors[(k, a)].norm_sqr().total_cmp(&self.vectors[(k, b)].norm_sqr()))
            .expect("non-empty")
    }

    fn to_dressed(&self, op: &CMatrix) -> CMatrix {
        self.vectors.adjoint() * op * &self.vectors
    }

    /// n̂ ⊗ 1 in the dressed basis.
    pub fn charge_operator(&self) -> CMatrix {
        let id = CMatrix::identity(self.model.n_photons, self.model.n_photons);
        self.to_dressed(&kron(&self.charge, &id))
    }

    /// 1 ⊗ a in the dressed basis.
    pub fn annihilation_operator(&self) -> CMatrix {
        let id = CMatrix::identity(self.model.n_flux_levels, self.model.n_flux_levels);
        self.to_dressed(&kron(&id, &annihilation(self.model.n_photons)))
    }

    /// 1 ⊗ (a + a†) in the dressed basis.
    pub fn quadrature_operator(&self) -> CMatrix {
        let a = self.annihilation_operator();
        &a + a.adjoint()
    }

    /// Overlap S = (V_self)† (B ⊗ 1) V_other where B maps the other point's
    /// fluxonium eigenbasis into this one's.
    pub(crate) fn overlap(&self, other: &DressedSpectrum) -> CMatrix {
        let nf = self.model.n_flux_levels;
        let np = self.model.n_photons;
        let (va, vb) = (self.bare.eigenvectors(), other.bare.eigenvectors());
        let rows = va.nrows().min(vb.nrows());
        let b = va.rows(0, rows).transpose() * vb.rows(0, rows);
        let b = b.view((0, 0), (nf, nf)).map(|x| C64::new(x, 0.0));
        let id = CMatrix::identity(np, np);
        self.vectors.adjoint() * kron(&b, &id) * &other.vectors
    }
}

/// Diagonalize the coupled model at its own flux.
pub fn dressed_spectrum(model: &CoupledModel) -> Result<DressedSpectrum> {
    model.validate()?;
    let bare = diagonalize(&model.fluxonium, &model.basis())?;
    dressed_from_bare(model, bare)
}

pub(crate) fn dressed_from_bare(model: &CoupledModel, bare: Spectrum) -> Result<DressedSpectrum> {
    let h = build_coupled(model, &bare)?;
    let charge = truncated_charge(model, &bare)?;
    let (energies, vectors) = eigh_complex(h);
    let np = model.n_photons;
    let provenance = (0..energies.len())
        .map(|i| {
            let (k, weight) = vectors
                .column(i)
                .iter()
                .map(|c| c.norm_sqr())
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty");
            let level = k / np;
            Provenance {
                bare: BareState {
                    level,
                    label: bare.labels()[level],
                    photons: k % np,
                },
                weight,
            }
        })
        .collect();
    Ok(DressedSpectrum {
        model: *model,
        bare,
        charge,
        energies,
        vectors,
        provenance,
    })
}
