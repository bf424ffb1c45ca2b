//! Superoperator assembly, steady state and time evolution.
//!
//! Density matrices are vectorized row-major, vec(ρ)[i·K + j] = ρ_ij, so
//! vec(AρB) = (A ⊗ Bᵀ) vec(ρ).

use super::{DensityMatrix, JumpOperator};
use crate::error::{Error, Result};
use crate::linalg::{kron, CMatrix, C64};
use nalgebra::DVector;
use std::f64::consts::PI;

/// Generator of dρ/dt (1/ns) acting on vec(ρ).
#[derive(Debug, Clone)]
pub struct Liouvillian {
    dim: usize,
    matrix: CMatrix,
}

impl Liouvillian {
    /// L = −i2π(H ⊗ 1 − 1 ⊗ Hᵀ) + Σ γ [A ⊗ Ā − ½ A†A ⊗ 1 − ½ 1 ⊗ (A†A)ᵀ].
    pub fn new(hamiltonian: &CMatrix, jumps: &[JumpOperator]) -> Result<Self> {
        let k = hamiltonian.nrows();
        if !hamiltonian.is_square() {
            return Err(Error::InvalidInput("Hamiltonian must be square".into()));
        }
        if let Some(j) = jumps.iter().find(|j| j.op.shape() != (k, k)) {
            return Err(Error::InvalidInput(format!(
                "jump operator shape {:?} does not match Hamiltonian dimension {k}",
                j.op.shape()
            )));
        }
        let mut l = dissipator(k, jumps);
        l += coherent(hamiltonian);
        Ok(Self { dim: k, matrix: l })
    }

    /// Adds the coherent part to a precomputed dissipator.
    pub(crate) fn from_dissipator(hamiltonian: &CMatrix, dissipator: &CMatrix) -> Self {
        Self {
            dim: hamiltonian.nrows(),
            matrix: dissipator + coherent(hamiltonian),
        }
    }

    /// Hilbert-space dimension K (the superoperator is K² × K²).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// L(ρ) as a K × K matrix.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let v = self.matrix.clone() * vectorize(rho);
        unvectorize(&v, self.dim)
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|r| r.iter().map(|c| c.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// ‖L vec(ρ)‖ / (‖L‖ ‖vec(ρ)‖), Frobenius/Euclidean norms.
    pub fn relative_residual(&self, rho: &DensityMatrix) -> f64 {
        let v = vectorize(rho.matrix());
        let r = &self.matrix * &v;
        r.norm() / (self.matrix.norm() * v.norm()).max(f64::MIN_POSITIVE)
    }
}

fn coherent(h: &CMatrix) -> CMatrix {
    let k = h.nrows();
    let id = CMatrix::identity(k, k);
    (kron(h, &id) - kron(&id, &h.transpose())) * C64::new(0.0, -2.0 * PI)
}

pub(crate) fn dissipator(k: usize, jumps: &[JumpOperator]) -> CMatrix {
    let id = CMatrix::identity(k, k);
    let mut l = CMatrix::zeros(k * k, k * k);
    for j in jumps {
        if j.rate == 0.0 {
            continue;
        }
        let a = &j.op;
        let ada = a.adjoint() * a;
        let g = C64::new(j.rate, 0.0);
        l += kron(a, &a.conjugate()) * g;
        l -= kron(&ada, &id) * (g * 0.5);
        l -= kron(&id, &ada.transpose()) * (g * 0.5);
    }
    l
}

pub(crate) fn vectorize(m: &CMatrix) -> DVector<C64> {
    let k = m.nrows();
    DVector::from_fn(k * k, |idx, _| m[(idx / k, idx % k)])
}

pub(crate) fn unvectorize(v: &DVector<C64>, k: usize) -> CMatrix {
    CMatrix::from_fn(k, k, |i, j| v[i * k + j])
}

// Symmetrize and renormalize accumulated rounding.
fn clean(m: CMatrix) -> CMatrix {
    let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let tr = h.trace().re;
    h / C64::new(tr, 0.0)
}

/// Singular values below this fraction of the largest count as kernel.
const KERNEL_TOL: f64 = 1e-11;

/// Solves L(ρ) = 0 with the first row replaced by tr ρ = 1.
///
/// If the constrained system is singular or the residual is poor, the kernel
/// dimension is measured by SVD and a degenerate kernel is reported.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    let k = l.dim;
    let n = k * k;
    let mut m = l.matrix.clone();
    for c in 0..n {
        m[(0, c)] = C64::new(0.0, 0.0);
    }
    for i in 0..k {
        m[(0, i * k + i)] = C64::new(1.0, 0.0);
    }
    let mut rhs = DVector::zeros(n);
    rhs[0] = C64::new(1.0, 0.0);

    let solution = m.lu().solve(&rhs).filter(|v| v.iter().all(|c| c.re.is_finite() && c.im.is_finite()));
    if let Some(v) = solution {
        let rho = clean(unvectorize(&v, k));
        let resid = (&l.matrix * vectorize(&rho)).norm() / (l.matrix.norm() * vectorize(&rho).norm());
        if resid < 1e-10 {
            return DensityMatrix::new(rho);
        }
    }
    let kernel_dim = kernel_dimension(&l.matrix);
    if kernel_dim > 1 {
        return Err(Error::DegenerateSteadyState { kernel_dim });
    }
    Err(Error::InvalidDensityMatrix(
        "steady-state solve did not reach the residual tolerance".into(),
    ))
}

fn kernel_dimension(m: &CMatrix) -> usize {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s <= KERNEL_TOL * max).count()
}

/// Sampled trajectory ρ(t_k), t_k = k·duration/n_samples, k = 0..=n_samples.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// Propagates with exp(L dt) built from a Taylor series; whole sampling
/// intervals are covered by repeated squaring, so long durations cost
/// O(log(duration/dt)) matrix products.
pub fn time_evolve(
    l: &Liouvillian,
    rho0: &DensityMatrix,
    duration: f64,
    dt: f64,
    n_samples: usize,
) -> Result<Trajectory> {
    if rho0.dim() != l.dim {
        return Err(Error::InvalidInput(format!(
            "initial state dimension {} does not match Liouvillian {}",
            rho0.dim(),
            l.dim
        )));
    }
    if !(duration >= 0.0 && duration.is_finite()) || n_samples == 0 {
        return Err(Error::InvalidInput("duration must be finite and ≥ 0, n_samples ≥ 1".into()));
    }
    let scale = l.norm_inf();
    let limit = if scale > 0.0 { 0.1 / scale } else { f64::INFINITY };
    if !(dt > 0.0) || dt > limit {
        return Err(Error::StepTooLarge { dt, limit });
    }

    let steps_per_sample = ((duration / n_samples as f64) / dt).ceil().max(1.0) as u64;
    let h = duration / n_samples as f64 / steps_per_sample as f64;
    let step = taylor_exp(&l.matrix, h);
    let propagator = matrix_power(&step, steps_per_sample);

    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    let mut v = vectorize(rho0.matrix());
    for s in 1..=n_samples {
        v = &propagator * v;
        let rho = clean(unvectorize(&v, l.dim));
        v = vectorize(&rho);
        times.push(duration * s as f64 / n_samples as f64);
        states.push(DensityMatrix::new(rho)?);
    }
    Ok(Trajectory { times, states })
}

// exp(L h) for ‖L h‖ ≤ 0.1: terms fall below 1e-17 by order 14.
fn taylor_exp(l: &CMatrix, h: f64) -> CMatrix {
    let n = l.nrows();
    let lh = l * C64::new(h, 0.0);
    let mut out = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for order in 1..=14 {
        term = &term * &lh / C64::new(order as f64, 0.0);
        out += &term;
    }
    out
}

fn matrix_power(m: &CMatrix, mut p: u64) -> CMatrix {
    let n = m.nrows();
    let mut result = CMatrix::identity(n, n);
    let mut base = m.clone();
    while p > 0 {
        if p & 1 == 1 {
            result = &result * &base;
        }
        p >>= 1;
        if p > 0 {
            base = &base * &base;
        }
    }
    result
}
