//! Harmonic-oscillator basis with φ = φ_zpf (a + a†) and n = i(a† − a)/(2φ_zpf),
//! so that [φ, n] = i.

use crate::linalg::{eigh_real, RMatrix};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Oscillator {
    pub n: usize,
    pub phi_zpf: f64,
}

impl Oscillator {
    pub fn new(n: usize, phi_zpf: f64) -> Self {
        Self { n, phi_zpf }
    }

    /// a + a†, truncated.
    pub fn ladder_sum(&self) -> RMatrix {
        let mut m = RMatrix::zeros(self.n, self.n);
        for k in 1..self.n {
            let s = (k as f64).sqrt();
            m[(k - 1, k)] = s;
            m[(k, k - 1)] = s;
        }
        m
    }

    /// a† − a, truncated (real antisymmetric).
    pub fn ladder_diff(&self) -> RMatrix {
        let mut m = RMatrix::zeros(self.n, self.n);
        for k in 1..self.n {
            let s = (k as f64).sqrt();
            m[(k, k - 1)] = s;
            m[(k - 1, k)] = -s;
        }
        m
    }

    /// Real matrix `A` such that the charge operator is `n = i·A`.
    pub fn charge_imag(&self) -> RMatrix {
        self.ladder_diff() / (2.0 * self.phi_zpf)
    }

    pub fn phase(&self) -> RMatrix {
        self.ladder_sum() * self.phi_zpf
    }

    /// Exact truncation of n² = (2a†a + 1 − a² − a†²)/(4φ_zpf²).
    pub fn charge_squared(&self) -> RMatrix {
        let mut m = self.quadratic(-1.0);
        m /= 4.0 * self.phi_zpf * self.phi_zpf;
        m
    }

    /// Exact truncation of φ² = φ_zpf² (2a†a + 1 + a² + a†²).
    pub fn phase_squared(&self) -> RMatrix {
        self.quadratic(1.0) * (self.phi_zpf * self.phi_zpf)
    }

    // 2a†a + 1 + s(a² + a†²)
    fn quadratic(&self, s: f64) -> RMatrix {
        let mut m = RMatrix::zeros(self.n, self.n);
        for k in 0..self.n {
            m[(k, k)] = 2.0 * k as f64 + 1.0;
            if k + 2 < self.n {
                let v = s * ((k + 1) as f64 * (k + 2) as f64).sqrt();
                m[(k, k + 2)] = v;
                m[(k + 2, k)] = v;
            }
        }
        m
    }

    /// cos(φ − θ), built from the spectral decomposition of the truncated φ
    /// so that the exponentials e^{±iφ} are exactly unitary in the basis.
    pub fn cos_phase(&self, theta: f64) -> RMatrix {
        let (nodes, vecs) = eigh_real(self.phase());
        let mut scaled = vecs.clone();
        for (j, &x) in nodes.iter().enumerate() {
            let c = (x - theta).cos();
            scaled.column_mut(j).scale_mut(c);
        }
        let m = scaled * vecs.transpose();
        (&m + m.transpose()) * 0.5
    }

    /// Oscillator eigenfunctions ψ_k(φ) on a grid: rows are grid points,
    /// columns basis states. Normalized on the real line in φ.
    pub fn wavefunctions(&self, grid: &[f64]) -> RMatrix {
        let scale = std::f64::consts::SQRT_2 * self.phi_zpf;
        let norm = 1.0 / scale.sqrt();
        let mut out = RMatrix::zeros(grid.len(), self.n);
        for (r, &phi) in grid.iter().enumerate() {
            let x = phi / scale;
            let mut prev = 0.0;
            let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
            out[(r, 0)] = cur * norm;
            for k in 0..self.n.saturating_sub(1) {
                let kf = k as f64;
                let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
                prev = cur;
                cur = next;
                out[(r, k + 1)] = cur * norm;
            }
        }
        out
    }
}
