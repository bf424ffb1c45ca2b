use fluxsim::analytics::*;
use fluxsim::fluxonium::{diagonalize, BasisConfig};
use fluxsim::linalg::C64;
use fluxsim::presets::device_params;
use proptest::prelude::*;
use std::f64::consts::PI;

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-12 {
        let (c, d) = (b - r * (b - a), a + r * (b - a));
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

#[test]
fn stark_minimum_matches_potential_minimum() {
    let p = device_params(0.1);
    let v = |phi: f64| 0.5 * p.e_l * phi * phi - p.e_j * (phi - 2.0 * PI * p.phi_ext).cos();
    let c = 2.0 * PI * p.phi_ext;
    let exact = golden_min(v, c - 1.0, c + 1.0);
    assert!((stark_minimum(&p).unwrap() - exact).abs() < 1e-3);
}

#[test]
fn perturbative_dispersion_values() {
    let r = plasmon_dispersion(&device_params(0.0), 5.072, 4.39, 0.60).unwrap();
    assert!((r.symmetric * 1e3 + 45.0).abs() < 2.0, "{}", r.symmetric);
    assert!((r.antisymmetric_bracket() * 1e3 - 39.0).abs() < 2.0, "{}", r.antisymmetric);
    assert!((r.total.abs() * 1e3 - 84.0).abs() < 3.0, "{}", r.total);
    assert_eq!(r.total, r.symmetric + r.antisymmetric);
}

fn bare_plasmon(phi: f64) -> f64 {
    let s = diagonalize(&device_params(phi), &BasisConfig::default()).unwrap();
    s.gap(s.find(0, 0).unwrap(), s.find(0, 1).unwrap())
}

// least-squares c0 + c2 x² over the flux grid
fn quadratic_fit(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (s1, s2) = xs.iter().fold((0.0, 0.0), |(a, b), x| (a + x * x, b + x.powi(4)));
    let (t0, t1) = xs.iter().zip(ys).fold((0.0, 0.0), |(a, b), (x, y)| (a + y, b + x * x * y));
    (n * t1 - s1 * t0) / (n * s2 - s1 * s1)
}

fn numeric_curvature() -> f64 {
    let xs: Vec<f64> = (0..=20).map(|i| 0.01 * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| bare_plasmon(x)).collect();
    quadratic_fit(&xs, &ys)
}

#[test]
fn numerical_plasmon_curvature_matches_perturbation_theory() {
    let r = plasmon_dispersion(&device_params(0.0), 5.072, 4.39, 0.60).unwrap();
    let c2 = numeric_curvature();
    assert!(c2 < 0.0);
    assert!(((c2 - r.total) / r.total).abs() < 0.15, "{c2} vs {}", r.total);
}

fn model(detuning: f64) -> TwoLevelModel {
    TwoLevelModel { eps_r: 4.95, eps_q: 4.95 + detuning, m: C64::new(0.0, 0.062) }
}

#[test]
fn hybridization_near_zero_flux() {
    let h = hybridize(&model(0.089));
    assert!((h.beta_r_sq - 0.21).abs() < 0.01);
    assert!((h.intensity_ratio / 3.8 - 1.0).abs() < 0.05);
    assert!((h.amplitude_ratios[0].norm() - 1.94).abs() < 0.02);
    assert!(h.amplitude_ratios[0].re.abs() < 1e-12);
    assert!((h.amplitude_ratios[1].norm() - 1.0 / 1.94).abs() < 0.01);
    assert!((h.quadratic_fractions[0] - 0.21).abs() < 0.01);
    assert!((h.quadratic_fractions[1] - 0.79).abs() < 0.01);
    // ratio of quadratic coefficients mirrors the intensity ratio
    let q = h.quadratic_fractions[1] / h.quadratic_fractions[0];
    assert!((q - h.intensity_ratio).abs() < 1e-9);
    assert!(h.quartic_per_a2[0] < 0.0 && h.quartic_per_a2[1] > 0.0);
}

#[test]
fn hybridization_at_half_flux() {
    let a = -numeric_curvature();
    let h = hybridize(&model(0.089 - a / 4.0));
    assert!((h.intensity_ratio / 2.6 - 1.0).abs() < 0.10, "{}", h.intensity_ratio);
}

#[test]
fn t1_relative_rises_toward_half_flux() {
    let grid: Vec<f64> = (0..=40).map(|i| 0.05 + 0.01 * i as f64).collect();
    let t1 = t1_relative(&device_params(0.0), &grid, T1_REFERENCE_FLUX).unwrap();
    assert!(t1.windows(2).all(|w| w[1] > w[0]), "{t1:?}");
    let at_ref = t1_relative(&device_params(0.0), &[T1_REFERENCE_FLUX], T1_REFERENCE_FLUX).unwrap();
    assert!((at_ref[0] - 1.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn hybridize_preserves_trace(eps_r in 4.0..6.0f64, det in -0.5..0.5f64, re in -0.1..0.1f64, im in -0.1..0.1f64) {
        let h = hybridize(&TwoLevelModel { eps_r, eps_q: eps_r + det, m: C64::new(re, im) });
        prop_assert!((h.eigenvalues[0] + h.eigenvalues[1] - 2.0 * eps_r - det).abs() < 1e-12);
        prop_assert!((h.quadratic_fractions[0] + h.quadratic_fractions[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resonant_gap_is_twice_coupling(eps in 4.0..6.0f64, re in -0.1..0.1f64, im in -0.1..0.1f64) {
        let m = C64::new(re, im);
        let h = hybridize(&TwoLevelModel { eps_r: eps, eps_q: eps, m });
        prop_assert!(((h.eigenvalues[1] - h.eigenvalues[0]).abs() - 2.0 * m.norm()).abs() < 1e-12);
    }

    #[test]
    fn antisymmetric_term_even_in_cubic_sign(z in 0.1..1.5f64, e_l in 0.05..1.0f64) {
        let mut p = device_params(0.0);
        p.e_l = e_l;
        let a = plasmon_dispersion(&p, 5.0, 4.4, z).unwrap();
        let b = plasmon_dispersion(&p, 5.0, 4.4, -z).unwrap();
        prop_assert_eq!(a.antisymmetric, b.antisymmetric);
    }

    #[test]
    fn raman_sign(p in -0.1..0.1f64, q in -0.1..0.1f64, d in prop::sample::select(vec![-0.05, -0.01, 0.02, 0.3]), e in prop::sample::select(vec![-0.3, -0.1, 0.2])) {
        let r = raman_rate(&RamanConfig { omega_probe: p, omega_pump: q, delta: d, delta_2gamma: e }).unwrap();
        let s = p * q * q * d * e;
        prop_assert!(r == 0.0 && s == 0.0 || r.signum() == s.signum());
    }
}
