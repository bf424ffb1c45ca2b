//! Finite-difference reference solver for the fluxonium Hamiltonian.
//!
//! The Hamiltonian is discretized on a uniform phase grid, which turns
//! −4E_C ∂²_φ into a tridiagonal matrix. Eigenvalues come from Sturm-sequence
//! bisection and eigenvectors from inverse iteration, so nothing here shares
//! code with the oscillator-basis solver it checks.

use std::f64::consts::PI;

/// Grid discretization of the fluxonium Hamiltonian.
#[derive(Debug, Clone)]
pub struct GridHamiltonian {
    pub phi: Vec<f64>,
    pub step: f64,
    pub diag: Vec<f64>,
    /// Constant off-diagonal element.
    pub off: f64,
}

impl GridHamiltonian {
    /// Grid over [−half_width, half_width] with `points` samples and the
    /// three-point Laplacian.
    pub fn new(e_c: f64, e_j: f64, e_l: f64, phi_ext: f64, half_width: f64, points: usize) -> Self {
        assert!(points >= 3);
        let step = 2.0 * half_width / (points - 1) as f64;
        let kinetic = 4.0 * e_c / (step * step);
        let phi: Vec<f64> = (0..points).map(|i| -half_width + i as f64 * step).collect();
        let diag = phi
            .iter()
            .map(|&p| 2.0 * kinetic + 0.5 * e_l * p * p - e_j * (p - 2.0 * PI * phi_ext).cos())
            .collect();
        Self { phi, step, diag, off: -kinetic }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for &d in &self.diag[1..] {
            let denom = if q == 0.0 { f64::EPSILON * self.off.abs().max(1.0) } else { q };
            q = d - x - off2 / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The k-th smallest eigenvalue by bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let radius = 2.0 * self.off.abs();
        let mut lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - radius;
        let mut hi = self.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + radius;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * (1.0 + mid.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn lowest(&self, count: usize) -> Vec<f64> {
        (0..count).map(|k| self.eigenvalue(k)).collect()
    }

    /// Eigenvector for a converged eigenvalue by inverse iteration, normalized
    /// so that Σ|ψ|² step = 1.
    pub fn eigenvector(&self, eigenvalue: f64) -> Vec<f64> {
        let n = self.len();
        let shift = eigenvalue + 1e-10 * (1.0 + eigenvalue.abs());
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        for _ in 0..4 {
            v = self.solve_shifted(shift, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        let scale = (1.0 / self.step).sqrt();
        let sign = if v.iter().cloned().fold(0.0, |a: f64, x| if x.abs() > a.abs() { x } else { a }) < 0.0 {
            -1.0
        } else {
            1.0
        };
        v.iter().map(|x| x * scale * sign).collect()
    }

    /// Thomas algorithm for (H − shift)x = rhs.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut b = self.diag[0] - shift;
        c[0] = self.off / b;
        d[0] = rhs[0] / b;
        for i in 1..n {
            b = self.diag[i] - shift - self.off * c[i - 1];
            if b == 0.0 {
                b = 1e-300;
            }
            c[i] = self.off / b;
            d[i] = (rhs[i] - self.off * d[i - 1]) / b;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        x
    }

    /// |⟨a|n̂|b⟩| with n̂ = −i∂_φ approximated by central differences.
    pub fn charge_element(&self, a: &[f64], b: &[f64]) -> f64 {
        let n = self.len();
        let mut sum = 0.0;
        for i in 1..n - 1 {
            sum += a[i] * (b[i + 1] - b[i - 1]) / (2.0 * self.step);
        }
        (sum * self.step).abs()
    }
}

/// Lowest eigenvalues with Richardson extrapolation in the grid step
/// (second-order scheme, so two grids at h and h/2 remove the h² term).
pub fn lowest_levels(e_c: f64, e_j: f64, e_l: f64, phi_ext: f64, count: usize) -> Vec<f64> {
    let half_width = 8.0 * PI;
    let coarse = GridHamiltonian::new(e_c, e_j, e_l, phi_ext, half_width, 2048).lowest(count);
    let fine = GridHamiltonian::new(e_c, e_j, e_l, phi_ext, half_width, 4095).lowest(count);
    coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect()
}
