//! Single-body fluxonium: H = −4E_C ∂²_φ − E_J cos(φ − 2πΦ_ext) + ½E_L φ².
//!
//! The Hamiltonian is represented in a truncated harmonic-oscillator basis.
//! The quadratic part is exact in the ladder operators; the Josephson term is
//! the spectral cosine of the truncated phase operator. Convergence is checked
//! by re-solving with a larger basis.

mod basis;
mod labels;

pub use labels::{label_states, well_center, StateLabel, MIXED_CONFIDENCE};

use crate::error::{invalid, Error, Result};
use crate::linalg::{eigh_real, RMatrix, C64};
use basis::Oscillator;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Circuit energies (GHz) and external flux (units of Φ₀).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxoniumParams {
    pub e_c: f64,
    pub e_j: f64,
    pub e_l: f64,
    pub phi_ext: f64,
}

impl FluxoniumParams {
    pub fn new(e_c: f64, e_j: f64, e_l: f64, phi_ext: f64) -> Result<Self> {
        let p = Self { e_c, e_j, e_l, phi_ext };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("e_c", self.e_c), ("e_j", self.e_j), ("e_l", self.e_l)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        if !self.phi_ext.is_finite() {
            return Err(invalid("phi_ext", "must be finite"));
        }
        Ok(())
    }

    /// Same circuit at a different external flux.
    pub fn at_flux(&self, phi_ext: f64) -> Self {
        Self { phi_ext, ..*self }
    }

    /// Zero-point phase spread of the inductive oscillator, (2E_C/E_L)^¼.
    pub fn inductive_phi_zpf(&self) -> f64 {
        (2.0 * self.e_c / self.e_l).powf(0.25)
    }

    /// Zero-point phase spread of a single well, (2E_C/(E_J + E_L))^¼.
    pub fn plasma_phi_zpf(&self) -> f64 {
        (2.0 * self.e_c / (self.e_j + self.e_l)).powf(0.25)
    }
}

/// Which oscillator sets the basis zero-point scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroPointScale {
    /// E_L-based: the quadratic part of H is diagonal.
    #[default]
    Inductive,
    /// (E_J + E_L)-based: matched to a single well.
    Plasma,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisConfig {
    pub n_basis: usize,
    pub scale: ZeroPointScale,
    /// Number of lowest eigenpairs kept in a [`Spectrum`].
    pub n_states: usize,
}

impl Default for BasisConfig {
    fn default() -> Self {
        Self {
            n_basis: 120,
            scale: ZeroPointScale::Inductive,
            n_states: 12,
        }
    }
}

impl BasisConfig {
    pub fn with_states(n_states: usize) -> Self {
        Self {
            n_states,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_basis < 10 {
            return Err(invalid("n_basis", "must be at least 10"));
        }
        if self.n_states == 0 || self.n_states > self.n_basis {
            return Err(invalid("n_states", "must be in 1..=n_basis"));
        }
        Ok(())
    }

    fn phi_zpf(&self, p: &FluxoniumParams) -> f64 {
        match self.scale {
            ZeroPointScale::Inductive => p.inductive_phi_zpf(),
            ZeroPointScale::Plasma => p.plasma_phi_zpf(),
        }
    }
}

/// Basis padding used by the convergence check.
pub const CONVERGENCE_PAD: usize = 20;
/// Maximum allowed energy change (GHz) between the basis and the padded basis.
pub const CONVERGENCE_TOL: f64 = 1e-6;

/// Fluxonium Hamiltonian in the oscillator basis (GHz, real symmetric).
pub fn build_hamiltonian(params: &FluxoniumParams, basis: &BasisConfig) -> Result<RMatrix> {
    params.validate()?;
    basis.validate()?;
    let osc = Oscillator::new(basis.n_basis, basis.phi_zpf(params));
    Ok(hamiltonian(params, &osc))
}

fn hamiltonian(p: &FluxoniumParams, osc: &Oscillator) -> RMatrix {
    let theta = 2.0 * PI * p.phi_ext;
    let mut h = osc.charge_squared() * (4.0 * p.e_c);
    h += osc.phase_squared() * (0.5 * p.e_l);
    h -= osc.cos_phase(theta) * p.e_j;
    h
}

/// Lowest eigenpairs of the fluxonium with their well/plasmon labels.
#[derive(Debug, Clone)]
pub struct Spectrum {
    params: FluxoniumParams,
    basis: BasisConfig,
    phi_zpf: f64,
    energies: Vec<f64>,
    // n_basis × n_states
    vectors: RMatrix,
    labels: Vec<StateLabel>,
}

impl Spectrum {
    pub fn params(&self) -> &FluxoniumParams {
        &self.params
    }

    /// Basis actually used (after any convergence-driven enlargement).
    pub fn basis(&self) -> &BasisConfig {
        &self.basis
    }

    pub fn phi_zpf(&self) -> f64 {
        self.phi_zpf
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

    /// Basis coefficients, one column per eigenstate.
    pub fn eigenvectors(&self) -> &RMatrix {
        &self.vectors
    }

    pub fn labels(&self) -> &[StateLabel] {
        &self.labels
    }

    /// Transition frequency E_j − E_i.
    pub fn gap(&self, i: usize, j: usize) -> f64 {
        self.energies[j] - self.energies[i]
    }

    /// Index of the lowest state carrying the given (well, plasmon) label.
    pub fn find(&self, well: i32, plasmon: usize) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l.well == well && l.plasmon == plasmon)
    }

    fn oscillator(&self) -> Oscillator {
        Oscillator::new(self.basis.n_basis, self.phi_zpf)
    }

    /// Operator matrix ⟨i|O|j⟩ over all computed states.
    pub fn operator(&self, op: Operator) -> nalgebra::DMatrix<C64> {
        let osc = self.oscillator();
        let v = &self.vectors;
        match op {
            Operator::Charge => {
                let a = v.transpose() * osc.charge_imag() * v;
                a.map(|x| C64::new(0.0, x))
            }
            Operator::Phase => {
                let p = v.transpose() * osc.phase() * v;
                p.map(|x| C64::new(x, 0.0))
            }
        }
    }
}

/// Local operators with eigenbasis matrix elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    /// n̂ = −i d/dφ.
    Charge,
    /// φ̂.
    Phase,
}

fn solve(params: &FluxoniumParams, n_basis: usize, phi_zpf: f64, k: usize) -> (Vec<f64>, RMatrix) {
    let osc = Oscillator::new(n_basis, phi_zpf);
    let (mut vals, vecs) = eigh_real(hamiltonian(params, &osc));
    vals.truncate(k);
    let vecs = vecs.columns(0, k).into_owned();
    (vals, vecs)
}

fn max_change(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Diagonalize and label the lowest `basis.n_states` states.
///
/// The result is re-solved with `n_basis + 20`; if any kept energy moves by
/// more than 1e-6 GHz the basis is doubled once and checked again.
pub fn diagonalize(params: &FluxoniumParams, basis: &BasisConfig) -> Result<Spectrum> {
    params.validate()?;
    basis.validate()?;
    let phi_zpf = basis.phi_zpf(params);
    let k = basis.n_states;

    let mut n = basis.n_basis;
    let mut last = None;
    for _ in 0..2 {
        let (coarse, _) = solve(params, n, phi_zpf, k);
        let (fine, vecs) = solve(params, n + CONVERGENCE_PAD, phi_zpf, k);
        let change = max_change(&coarse, &fine);
        if change < CONVERGENCE_TOL {
            let basis = BasisConfig {
                n_basis: n + CONVERGENCE_PAD,
                ..*basis
            };
            let mut spec = Spectrum {
                params: *params,
                basis,
                phi_zpf,
                energies: fine,
                vectors: vecs,
                labels: Vec::new(),
            };
            spec.labels = label_states(&spec);
            return Ok(spec);
        }
        last = Some((n, change, coarse, fine));
        n *= 2;
    }
    let (n_basis, max_change, coarse, fine) = last.expect("loop ran");
    Err(Error::NotConverged {
        n_basis,
        max_change,
        coarse,
        fine,
    })
}

/// Wavefunction ψ_k(φ) of a computed state on an ascending phase grid.
pub fn eval_wavefunction(spec: &Spectrum, state: usize, grid: &[f64]) -> Result<Vec<C64>> {
    if state >= spec.len() {
        return Err(Error::InvalidInput(format!(
            "state {state} out of range ({} computed)",
            spec.len()
        )));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("phase grid must be strictly ascending".into()));
    }
    let table = spec.oscillator().wavefunctions(grid);
    let psi = table * spec.vectors.column(state);
    Ok(psi.iter().map(|&x| C64::new(x, 0.0)).collect())
}

/// ⟨i|O|j⟩ in the eigenbasis.
pub fn matrix_element(spec: &Spectrum, op: Operator, i: usize, j: usize) -> Result<C64> {
    let k = spec.len();
    if i >= k || j >= k {
        return Err(Error::InvalidInput(format!(
            "state index ({i}, {j}) out of range ({k} computed)"
        )));
    }
    let osc = spec.oscillator();
    let vi = spec.vectors.column(i);
    let vj = spec.vectors.column(j);
    Ok(match op {
        Operator::Charge => C64::new(0.0, vi.dot(&(osc.charge_imag() * vj))),
        Operator::Phase => C64::new(vi.dot(&(osc.phase() * vj)), 0.0),
    })
}

/// Which tunnel-split doublet to measure at half flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Doublet {
    Ground,
    Excited,
}

/// Full energy gap (GHz) of the symmetric/antisymmetric doublet at Φ_ext = Φ₀/2.
///
/// The flux in `params` is ignored. The ground doublet is the lowest pair of
/// states; the excited doublet is the next pair localized in the two
/// degenerate wells. The tunnel coupling in the two-well model is half this
/// gap.
pub fn tunnel_splitting(params: &FluxoniumParams, basis: &BasisConfig, pair: Doublet) -> Result<f64> {
    let basis = BasisConfig {
        n_states: basis.n_states.max(8),
        ..*basis
    };
    let spec = diagonalize(&params.at_flux(0.5), &basis)?;
    if pair == Doublet::Ground {
        return Ok(spec.gap(0, 1));
    }
    let masses = labels::double_well_mass(&spec, 0, 1);
    let inside: Vec<usize> = (0..spec.len()).filter(|&i| masses[i] >= 0.9).collect();
    if inside.len() < 4 || inside[0] != 0 || inside[1] != 1 {
        return Err(Error::DoubletNotFound("excited"));
    }
    let (lo, hi) = (inside[2], inside[3]);
    let gap = spec.gap(lo, hi);
    let below = spec.gap(inside[1], lo);
    let above = inside.get(4).map_or(f64::INFINITY, |&n| spec.gap(hi, n));
    if gap > 0.25 * below.min(above) {
        return Err(Error::DoubletNotFound("excited"));
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn device(phi: f64) -> FluxoniumParams {
        presets::device_params(phi)
    }

    #[test]
    fn harmonic_limit_without_junction() {
        let p = FluxoniumParams { e_c: 0.5, e_j: 1e-12, e_l: 0.3, phi_ext: 0.17 };
        let spec = diagonalize(&p, &BasisConfig::default()).unwrap();
        let w = (8.0 * p.e_l * p.e_c).sqrt();
        for k in 1..spec.len() {
            assert!((spec.gap(k - 1, k) - w).abs() < 1e-9);
        }
    }

    #[test]
    fn periodic_in_one_flux_quantum() {
        let b = BasisConfig::with_states(8);
        let a = diagonalize(&device(0.13), &b).unwrap();
        let c = diagonalize(&device(1.13), &b).unwrap();
        for (x, y) in a.energies().iter().zip(c.energies()) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn even_in_flux() {
        let b = BasisConfig::with_states(10);
        let a = diagonalize(&device(0.21), &b).unwrap();
        let c = diagonalize(&device(-0.21), &b).unwrap();
        for (x, y) in a.energies().iter().zip(c.energies()) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let h = build_hamiltonian(&device(0.3), &BasisConfig::default()).unwrap();
        assert!((&h - h.transpose()).amax() < 1e-12);
    }

    #[test]
    fn eigenvectors_orthonormal() {
        let spec = diagonalize(&device(0.02), &BasisConfig::default()).unwrap();
        let v = spec.eigenvectors();
        let g = v.transpose() * v;
        assert!((g - RMatrix::identity(spec.len(), spec.len())).amax() < 1e-10);
        assert!(spec.energies().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(FluxoniumParams::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(FluxoniumParams::new(1.0, 1.0, 1.0, f64::NAN).is_err());
        let b = BasisConfig { n_basis: 5, ..Default::default() };
        assert!(diagonalize(&device(0.0), &b).is_err());
        let spec = diagonalize(&device(0.0), &BasisConfig::with_states(4)).unwrap();
        assert!(matrix_element(&spec, Operator::Charge, 0, 4).is_err());
        assert!(eval_wavefunction(&spec, 0, &[0.0, 0.0]).is_err());
        assert!(eval_wavefunction(&spec, 9, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn parity_of_zero_flux_wavefunctions() {
        let spec = diagonalize(&device(0.0), &BasisConfig::default()).unwrap();
        let grid: Vec<f64> = (-200..=200).map(|i| i as f64 * 0.05).collect();
        let g0 = eval_wavefunction(&spec, 0, &grid).unwrap();
        for i in 0..grid.len() {
            let j = grid.len() - 1 - i;
            assert!((g0[i].norm() - g0[j].norm()).abs() < 1e-8);
        }
        // The first excited state in the central well is odd.
        let e0 = spec.find(0, 1).unwrap();
        let psi = eval_wavefunction(&spec, e0, &[0.0]).unwrap();
        assert!(psi[0].norm() < 1e-8);
    }

    #[test]
    fn wavefunction_normalized_on_wide_grid() {
        let spec = diagonalize(&device(0.02), &BasisConfig::default()).unwrap();
        let h = 0.01;
        let grid: Vec<f64> = (0..=5000).map(|i| -25.0 + h * i as f64).collect();
        for k in 0..spec.len() {
            let psi = eval_wavefunction(&spec, k, &grid).unwrap();
            let dens: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
            let integral: f64 = dens.windows(2).map(|w| 0.5 * (w[0] + w[1]) * h).sum();
            assert!((integral - 1.0).abs() < 1e-3, "state {k}: {integral}");
        }
    }

    #[test]
    fn charge_matrix_is_hermitian_and_parity_selects() {
        let spec = diagonalize(&device(0.0), &BasisConfig::default()).unwrap();
        let k = spec.len();
        for i in 0..k {
            for j in 0..k {
                let a = matrix_element(&spec, Operator::Charge, i, j).unwrap();
                let b = matrix_element(&spec, Operator::Charge, j, i).unwrap();
                assert!((a - b.conj()).norm() < 1e-12);
            }
        }
        let g0 = spec.find(0, 0).unwrap();
        let f0 = spec.find(0, 2).unwrap();
        let e0 = spec.find(0, 1).unwrap();
        assert!(matrix_element(&spec, Operator::Charge, g0, f0).unwrap().norm() < 1e-8);
        // m = g⟨e₀|n|g₀⟩ ≈ 0.062 GHz
        let m = matrix_element(&spec, Operator::Charge, e0, g0).unwrap() * presets::G_GHZ;
        assert!(m.re.abs() < 1e-12);
        assert!((m.norm() - 0.062).abs() < 0.1 * 0.062, "{m}");
    }

    #[test]
    fn near_degenerate_ground_at_half_flux() {
        let spec = diagonalize(&device(0.5), &BasisConfig::default()).unwrap();
        let tg = spec.gap(0, 1);
        assert!(tg > 0.0 && tg < 1e-3, "{tg}");
        assert!(spec.gap(1, 2) > 4.0);
    }

    #[test]
    fn splitting_identifies_both_doublets() {
        let b = BasisConfig::default();
        let p = device(0.0);
        let g = tunnel_splitting(&p, &b, Doublet::Ground).unwrap();
        let e = tunnel_splitting(&p, &b, Doublet::Excited).unwrap();
        assert!(g > 0.0 && e > 10.0 * g);
    }
}
