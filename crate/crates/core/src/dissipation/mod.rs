//! Driven-dissipative spectroscopy in the truncated dressed basis.
//!
//! Conventions: Hamiltonians are in GHz and enter the master equation as
//! −i2π[H, ρ] with time in ns. The rate constants κ and Γ multiply the
//! dissipators directly (1/ns), so an empty cavity has amplitude decay rate
//! κ/2 and a Lorentzian half-width of κ/4π in GHz.

mod liouvillian;
mod map;

pub use liouvillian::{steady_state, time_evolve, Liouvillian, Trajectory};
pub use map::{single_tone_map, CellFailure, FluxPoint, MapOptions, TransmissionMap};

use crate::coupled::DressedSpectrum;
use crate::error::{invalid, Error, Result};
use crate::linalg::{eigh_complex, hermiticity_defect, CMatrix, C64};
use crate::units::bose_occupation;
use serde::{Deserialize, Serialize};

/// Dissipation and drive parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindbladConfig {
    /// Bath temperature (K).
    pub temperature: f64,
    /// Resonator rate constant (1/ns).
    pub kappa: f64,
    /// Fluxonium rate constant (1/ns).
    pub gamma_q: f64,
    /// Drive amplitude (GHz).
    pub zeta: f64,
    /// Drive frequency (GHz).
    pub omega_d: f64,
    /// Number of lowest dressed states kept in the master equation.
    #[serde(default = "LindbladConfig::default_levels")]
    pub n_levels: usize,
    /// Transitions closer than this (GHz) share one jump operator.
    #[serde(default = "LindbladConfig::default_secular")]
    pub secular_tol: f64,
}

impl LindbladConfig {
    fn default_levels() -> usize {
        16
    }

    fn default_secular() -> f64 {
        1e-6
    }

    /// Device rates at 30 mK with a weak drive at the bare resonator.
    pub fn device() -> Self {
        use crate::presets::*;
        Self {
            temperature: TEMPERATURE_K,
            kappa: KAPPA,
            gamma_q: GAMMA_Q,
            zeta: 1e-4,
            omega_d: NU_R_GHZ,
            n_levels: Self::default_levels(),
            secular_tol: Self::default_secular(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("temperature", self.temperature),
            ("kappa", self.kappa),
            ("gamma_q", self.gamma_q),
            ("zeta", self.zeta),
        ];
        for (name, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("must be ≥ 0, got {v}")));
            }
        }
        if !(self.omega_d.is_finite() && self.omega_d > 0.0) {
            return Err(invalid("omega_d", format!("must be > 0, got {}", self.omega_d)));
        }
        if self.n_levels < 2 {
            return Err(invalid("n_levels", "must be ≥ 2"));
        }
        if !(self.secular_tol > 0.0) {
            return Err(invalid("secular_tol", "must be > 0"));
        }
        Ok(())
    }
}

/// Hermitian, unit-trace matrix over the truncated dressed space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    min_eigenvalue: f64,
}

/// Eigenvalues below this are reported as positivity violations.
pub const POSITIVITY_TOL: f64 = -1e-8;

impl DensityMatrix {
    /// Checks trace (1 ± 1e-8) and hermiticity (1e-10); negative eigenvalues
    /// are recorded, not rejected.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidDensityMatrix("not a square matrix".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > 1e-10 {
            return Err(Error::InvalidDensityMatrix(format!("hermiticity defect {defect:.2e}")));
        }
        let (vals, _) = eigh_complex(matrix.clone());
        Ok(Self {
            matrix,
            min_eigenvalue: vals[0],
        })
    }

    /// Pure state |k⟩⟨k|.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(k, k)] = C64::new(1.0, 0.0);
        Self {
            matrix: m,
            min_eigenvalue: 0.0,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn is_positive(&self) -> bool {
        self.min_eigenvalue >= POSITIVITY_TOL
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|c| c.re).collect()
    }

    /// tr(O ρ).
    pub fn expect(&self, op: &CMatrix) -> C64 {
        (op * &self.matrix).trace()
    }

    /// ½ Σ |λ(ρ − σ)|.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.matrix - &other.matrix;
        let (vals, _) = eigh_complex(diff);
        0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    /// Coupling through 1 ⊗ (a + a†) with rate constant κ.
    Resonator,
    /// Coupling through n̂ ⊗ 1 with rate constant Γ.
    Fluxonium,
}

/// One Lindblad term γ D[A].
#[derive(Debug, Clone, PartialEq)]
pub struct JumpOperator {
    pub op: CMatrix,
    pub rate: f64,
    /// Transition frequency (GHz); positive for decay, negative for excitation.
    pub frequency: f64,
    pub channel: Channel,
}

/// Truncated dressed energies and channel operators shared by every drive
/// frequency at one flux point.
#[derive(Debug, Clone)]
pub struct TruncatedSystem {
    pub energies: Vec<f64>,
    /// 1 ⊗ a.
    pub annihilation: CMatrix,
    /// n̂ ⊗ 1.
    pub charge: CMatrix,
}

impl TruncatedSystem {
    pub fn new(dressed: &DressedSpectrum, n_levels: usize) -> Result<Self> {
        if n_levels > dressed.len() {
            return Err(invalid(
                "n_levels",
                format!("{n_levels} exceeds dressed dimension {}", dressed.len()),
            ));
        }
        let k = n_levels;
        let cut = |m: CMatrix| m.view((0, 0), (k, k)).into_owned();
        let e0 = dressed.energies()[0];
        Ok(Self {
            energies: dressed.energies()[..k].iter().map(|e| e - e0).collect(),
            annihilation: cut(dressed.annihilation_operator()),
            charge: cut(dressed.charge_operator()),
        })
    }

    /// A bare resonator with `n_photons` Fock levels and no qubit.
    pub fn empty_cavity(nu_r: f64, n_photons: usize) -> Self {
        Self {
            energies: (0..n_photons).map(|n| nu_r * n as f64).collect(),
            annihilation: crate::coupled::annihilation(n_photons),
            charge: CMatrix::zeros(n_photons, n_photons),
        }
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn collapse_operators(&self, cfg: &LindbladConfig) -> Vec<JumpOperator> {
        system_collapse_operators(self, cfg)
    }

    pub fn rotating_frame(&self, omega_d: f64, zeta: f64) -> RotatingFrame {
        system_rotating_frame(self, omega_d, zeta)
    }
}

/// Eigenoperator decomposition of both coupling channels with thermal rates.
///
/// For each channel X, the elements X_nm|n⟩⟨m| are grouped by transition
/// frequency ω = E_m − E_n (within `secular_tol`); each group is one jump
/// operator with rate γ·(n̄(ω)+1) for decay and its adjoint with γ·n̄(ω) for
/// excitation. Zero-frequency elements (pure dephasing) are dropped.
pub fn collapse_operators(dressed: &DressedSpectrum, cfg: &LindbladConfig) -> Result<Vec<JumpOperator>> {
    cfg.validate()?;
    let sys = TruncatedSystem::new(dressed, cfg.n_levels)?;
    Ok(sys.collapse_operators(cfg))
}

fn system_collapse_operators(sys: &TruncatedSystem, cfg: &LindbladConfig) -> Vec<JumpOperator> {
    let quadrature = &sys.annihilation + sys.annihilation.adjoint();
    let mut out = Vec::new();
    for (channel, x, gamma) in [
        (Channel::Resonator, &quadrature, cfg.kappa),
        (Channel::Fluxonium, &sys.charge, cfg.gamma_q),
    ] {
        if gamma == 0.0 {
            continue;
        }
        for (omega, op) in eigenoperators(&sys.energies, x, cfg.secular_tol) {
            let nbar = bose_occupation(omega, cfg.temperature);
            out.push(JumpOperator {
                rate: gamma * (nbar + 1.0),
                frequency: omega,
                channel,
                op: op.clone(),
            });
            if nbar > 0.0 {
                out.push(JumpOperator {
                    rate: gamma * nbar,
                    frequency: -omega,
                    channel,
                    op: op.adjoint(),
                });
            }
        }
    }
    out
}

// Lowering parts of X grouped by transition frequency.
fn eigenoperators(energies: &[f64], x: &CMatrix, tol: f64) -> Vec<(f64, CMatrix)> {
    let k = energies.len();
    let scale = x.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for m in 0..k {
        for n in 0..k {
            let omega = energies[m] - energies[n];
            if omega > tol && x[(n, m)].norm() > 1e-14 * scale {
                pairs.push((omega, n, m));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut groups: Vec<(f64, CMatrix)> = Vec::new();
    let mut anchor = f64::NEG_INFINITY;
    for (omega, n, m) in pairs {
        if omega - anchor > tol {
            anchor = omega;
            groups.push((omega, CMatrix::zeros(k, k)));
        }
        groups.last_mut().expect("group opened").1[(n, m)] = x[(n, m)];
    }
    groups
}

/// Static rotating-frame Hamiltonian.
#[derive(Debug, Clone)]
pub struct RotatingFrame {
    /// H_eff (GHz).
    pub hamiltonian: CMatrix,
    /// Drive quanta N_k assigned to each level.
    pub quanta: Vec<i64>,
    /// Co-rotating part of a; tr(a_co ρ) is the demodulated field.
    pub field: CMatrix,
}

/// Moves to the frame rotating at ω_d·N, N_k = round((E_k − E_0)/ω_d), and
/// keeps only drive elements a_ij with N_i = N_j − 1:
/// H_eff = Σ_k (E_k − ω_d N_k)|k⟩⟨k| + ζ(a_co + a_co†).
pub fn rotating_frame(dressed: &DressedSpectrum, cfg: &LindbladConfig) -> Result<RotatingFrame> {
    cfg.validate()?;
    let sys = TruncatedSystem::new(dressed, cfg.n_levels)?;
    Ok(sys.rotating_frame(cfg.omega_d, cfg.zeta))
}

fn system_rotating_frame(sys: &TruncatedSystem, omega_d: f64, zeta: f64) -> RotatingFrame {
    let k = sys.dim();
    let quanta: Vec<i64> = sys.energies.iter().map(|e| (e / omega_d).round() as i64).collect();
    let field = CMatrix::from_fn(k, k, |i, j| {
        if quanta[i] == quanta[j] - 1 {
            sys.annihilation[(i, j)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let mut h = (&field + field.adjoint()) * C64::new(zeta, 0.0);
    for i in 0..k {
        h[(i, i)] += C64::new(sys.energies[i] - omega_d * quanta[i] as f64, 0.0);
    }
    RotatingFrame {
        hamiltonian: h,
        quanta,
        field,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupled::dressed_spectrum;
    use crate::presets::device_model;
    use crate::units::KB_OVER_H_GHZ_PER_K;

    fn cfg() -> LindbladConfig {
        LindbladConfig::device()
    }

    #[test]
    fn zero_temperature_has_no_upward_rates() {
        let d = dressed_spectrum(&device_model(0.0)).unwrap();
        let c = LindbladConfig { temperature: 0.0, ..cfg() };
        let jumps = collapse_operators(&d, &c).unwrap();
        assert!(!jumps.is_empty());
        for j in &jumps {
            assert!(j.frequency > 0.0);
            let expected = match j.channel {
                Channel::Resonator => c.kappa,
                Channel::Fluxonium => c.gamma_q,
            };
            assert_eq!(j.rate, expected);
        }
    }

    #[test]
    fn plasmon_excitation_suppressed_by_occupation() {
        let d = dressed_spectrum(&device_model(0.0)).unwrap();
        let jumps = collapse_operators(&d, &cfg()).unwrap();
        let e0 = d.find(&"e0/0".parse().unwrap()).unwrap();
        let omega = d.energies()[e0] - d.energies()[0];
        let down = jumps
            .iter()
            .find(|j| j.channel == Channel::Fluxonium && (j.frequency - omega).abs() < 1e-6 && j.op[(0, e0)].norm() > 0.0)
            .unwrap();
        let up = jumps
            .iter()
            .find(|j| j.channel == Channel::Fluxonium && (j.frequency + omega).abs() < 1e-6 && j.op[(e0, 0)].norm() > 0.0)
            .unwrap();
        let ratio = up.rate / down.rate;
        let beta = 1.0 / (KB_OVER_H_GHZ_PER_K * 0.030);
        let nbar = 1.0 / ((beta * omega).exp() - 1.0);
        assert!((ratio - nbar / (nbar + 1.0)).abs() < 1e-12);
        let at_5ghz = bose_occupation(5.0, 0.030);
        assert!((at_5ghz - 3.4e-4).abs() < 0.1e-4, "{at_5ghz}");
    }

    #[test]
    fn decoupled_qubit_without_gamma_has_only_photon_jumps() {
        let mut m = device_model(0.1);
        m.g = 0.0;
        let d = dressed_spectrum(&m).unwrap();
        let c = LindbladConfig { gamma_q: 0.0, ..cfg() };
        let jumps = collapse_operators(&d, &c).unwrap();
        assert!(jumps.iter().all(|j| j.channel == Channel::Resonator));
        // one frequency group at ν_r: decay and its thermal partner
        assert_eq!(jumps.len(), 2);
        assert!((jumps[0].frequency - m.nu_r).abs() < 1e-9);
    }

    #[test]
    fn rates_are_nonnegative() {
        let d = dressed_spectrum(&device_model(0.45)).unwrap();
        for j in collapse_operators(&d, &cfg()).unwrap() {
            assert!(j.rate >= 0.0);
        }
    }

    #[test]
    fn undriven_frame_is_shifted_dressed_energies() {
        let d = dressed_spectrum(&device_model(0.2)).unwrap();
        let c = LindbladConfig { zeta: 0.0, omega_d: 4.9, ..cfg() };
        let f = rotating_frame(&d, &c).unwrap();
        let e0 = d.energies()[0];
        for k in 0..c.n_levels {
            let expected = d.energies()[k] - e0 - 4.9 * f.quanta[k] as f64;
            assert!((f.hamiltonian[(k, k)].re - expected).abs() < 1e-12);
        }
        assert!(f.hamiltonian.iter().enumerate().all(|(i, x)| i % (c.n_levels + 1) == 0 || x.norm() == 0.0));
    }

    #[test]
    fn density_matrix_checks() {
        let mut m = CMatrix::identity(3, 3) * C64::new(0.5, 0.0);
        assert!(DensityMatrix::new(m.clone()).is_err());
        m[(2, 2)] = C64::new(0.0, 0.0);
        let rho = DensityMatrix::new(m.clone()).unwrap();
        assert!(rho.is_positive());
        m[(0, 1)] = C64::new(0.0, 0.1);
        assert!(DensityMatrix::new(m.clone()).is_err());
        m[(1, 0)] = C64::new(0.0, -0.1);
        assert!(DensityMatrix::new(m).is_ok());
        // negative eigenvalue is recorded rather than rejected
        let mut bad = CMatrix::zeros(2, 2);
        bad[(0, 0)] = C64::new(1.1, 0.0);
        bad[(1, 1)] = C64::new(-0.1, 0.0);
        let rho = DensityMatrix::new(bad).unwrap();
        assert!(!rho.is_positive());
        assert!((rho.min_eigenvalue() + 0.1).abs() < 1e-12);
    }
}
