use fluxsim::coupled::{dressed_spectrum, CoupledModel};
use fluxsim::dissipation::{
    steady_state, time_evolve, DensityMatrix, FluxPoint, LindbladConfig, Liouvillian, TruncatedSystem,
};
use fluxsim::linalg::{CMatrix, C64};
use fluxsim::presets::{self, device_model};
use fluxsim::units::KB_OVER_H_GHZ_PER_K;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn device_system(phi: f64, k: usize) -> TruncatedSystem {
    TruncatedSystem::new(&dressed_spectrum(&device_model(phi)).unwrap(), k).unwrap()
}

fn liouvillian(sys: &TruncatedSystem, cfg: &LindbladConfig) -> (Liouvillian, CMatrix) {
    let frame = sys.rotating_frame(cfg.omega_d, cfg.zeta);
    let l = Liouvillian::new(&frame.hamiltonian, &sys.collapse_operators(cfg)).unwrap();
    (l, frame.field)
}

#[test]
fn empty_cavity_lorentzian() {
    let sys = TruncatedSystem::empty_cavity(presets::NU_R_GHZ, 12);
    for temperature in [0.0, 0.030] {
        for detuning in [-0.02, -0.003, 0.0, 0.001, 0.05] {
            let cfg = LindbladConfig {
                temperature,
                omega_d: presets::NU_R_GHZ - detuning,
                n_levels: 12,
                ..LindbladConfig::device()
            };
            let (l, field) = liouvillian(&sys, &cfg);
            let rho = steady_state(&l).unwrap();
            let got = rho.expect(&field);
            let expected = -cfg.zeta / C64::new(detuning, -cfg.kappa / (4.0 * PI));
            assert!((got - expected).norm() < 1e-8 * expected.norm(), "Δ {detuning}: {got} vs {expected}");
        }
    }
}

#[test]
fn undriven_zero_temperature_relaxes_to_ground() {
    let sys = device_system(0.2, 16);
    let cfg = LindbladConfig { temperature: 0.0, zeta: 0.0, ..LindbladConfig::device() };
    let (l, _) = liouvillian(&sys, &cfg);
    let rho = steady_state(&l).unwrap();
    assert!(rho.trace_distance(&DensityMatrix::basis_state(16, 0)) < 1e-10);
}

#[test]
fn trace_preserved_for_device_liouvillian() {
    let sys = device_system(0.45, 12);
    let (l, _) = liouvillian(&sys, &LindbladConfig::device());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let m = CMatrix::from_fn(12, 12, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        assert!(l.apply(&m).trace().norm() < 1e-12);
    }
}

#[test]
fn undriven_steady_state_is_boltzmann() {
    let sys = device_system(0.3, 12);
    let cfg = LindbladConfig { zeta: 0.0, ..LindbladConfig::device() };
    let (l, _) = liouvillian(&sys, &cfg);
    let rho = steady_state(&l).unwrap();
    let beta = 1.0 / (KB_OVER_H_GHZ_PER_K * cfg.temperature);
    let p = rho.populations();
    for k in 1..12 {
        let expected = p[0] * (-beta * sys.energies[k]).exp();
        if expected < 1e-12 {
            continue;
        }
        assert!((p[k] - expected).abs() < 0.01 * expected, "level {k}: {} vs {expected}", p[k]);
    }
    let m = rho.matrix();
    for i in 0..12 {
        for j in 0..12 {
            if i != j {
                assert!(m[(i, j)].norm() < 1e-12);
            }
        }
    }
}

#[test]
fn long_time_evolution_reaches_steady_state() {
    let light = CoupledModel::new(fluxsim::fluxonium::FluxoniumParams::new(1.0, 4.0, 1.0, 0.3).unwrap(), 4.0, 0.1).unwrap();
    let systems = [
        ("empty cavity", TruncatedSystem::empty_cavity(presets::NU_R_GHZ, 6), 1e4),
        ("light fluxonium", TruncatedSystem::new(&dressed_spectrum(&light).unwrap(), 8).unwrap(), 1e8),
        ("device, half flux", device_system(0.5, 8), 1e10),
        ("device, zero flux", device_system(0.0, 12), 1e10),
    ];
    for (name, sys, duration) in systems {
        let k = sys.dim();
        let cfg = LindbladConfig { n_levels: k, omega_d: 4.92, zeta: 1e-3, ..LindbladConfig::device() };
        let (l, _) = liouvillian(&sys, &cfg);
        let ss = steady_state(&l).unwrap();
        let dt = 0.1 / l.norm_inf();
        let traj = time_evolve(&l, &DensityMatrix::basis_state(k, 0), duration, dt, 4).unwrap();
        let dist = traj.last().trace_distance(&ss);
        assert!(dist < 1e-6, "{name}: trace distance {dist:.2e}");
    }
}

// Integrates the lab-frame equation with the full, time-dependent drive
// ζ(a e^{iω_d t} + a† e^{−iω_d t}) by RK4, starting from the rotating-frame
// steady state, and demodulates ⟨a⟩ at ω_d.
#[test]
fn rotating_frame_matches_lab_frame() {
    let sys = device_system(0.0, 8);
    let k = sys.dim();
    let omega_d = 4.9195;
    let cfg = LindbladConfig { n_levels: k, omega_d, ..LindbladConfig::device() };
    let (l, field) = liouvillian(&sys, &cfg);
    let ss = steady_state(&l).unwrap();
    let predicted = ss.expect(&field);

    let jumps = sys.collapse_operators(&cfg);
    let a = &sys.annihilation;
    let h0 = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(k, sys.energies.iter().map(|&e| C64::new(e, 0.0))));
    let rhs = |t: f64, rho: &CMatrix| -> CMatrix {
        let ph = C64::from_polar(1.0, 2.0 * PI * omega_d * t);
        let drive = (a * ph + a.adjoint() * ph.conj()) * C64::new(cfg.zeta, 0.0);
        let h = &h0 + drive;
        let mut d = (&h * rho - rho * &h) * C64::new(0.0, -2.0 * PI);
        for j in &jumps {
            let ada = j.op.adjoint() * &j.op;
            d += (&j.op * rho * j.op.adjoint() - (&ada * rho + rho * &ada) * C64::new(0.5, 0.0)) * C64::new(j.rate, 0.0);
        }
        d
    };

    let dt = 1e-3;
    let period = 1.0 / omega_d;
    let mut rho = ss.matrix().clone();
    let mut t = 0.0;
    let mut sum = C64::new(0.0, 0.0);
    let mut count = 0usize;
    let steps = (40.0 * period / dt).round() as usize;
    for step in 0..steps {
        let k1 = rhs(t, &rho);
        let k2 = rhs(t + dt / 2.0, &(&rho + &k1 * C64::new(dt / 2.0, 0.0)));
        let k3 = rhs(t + dt / 2.0, &(&rho + &k2 * C64::new(dt / 2.0, 0.0)));
        let k4 = rhs(t + dt, &(&rho + &k3 * C64::new(dt, 0.0)));
        rho += (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0);
        t += dt;
        if step >= steps / 2 {
            sum += (a * &rho).trace() * C64::from_polar(1.0, 2.0 * PI * omega_d * t);
            count += 1;
        }
    }
    let lab = sum / count as f64;
    assert!((lab - predicted).norm() < 0.01 * predicted.norm(), "lab {lab} vs rotating {predicted}");
}

#[test]
fn fluxon_drive_mixing_rate_is_quadratic_in_amplitude() {
    let sys = device_system(0.3, 8);
    let f = sys.energies[1];
    let cfg = LindbladConfig { n_levels: 8, omega_d: f, ..LindbladConfig::device() };
    let jumps = sys.collapse_operators(&cfg);
    let rates: Vec<f64> = [0.005, 0.01, 0.02]
        .iter()
        .map(|&zeta| {
            let frame = sys.rotating_frame(f, zeta);
            let l = Liouvillian::new(&frame.hamiltonian, &jumps).unwrap();
            // sample while 1 − 2p is still well above zero
            let t = 4e7 * (0.005 / zeta as f64).powi(2);
            let traj = time_evolve(&l, &DensityMatrix::basis_state(8, 0), t, 0.1 / l.norm_inf(), 1).unwrap();
            let p = traj.last().populations()[1];
            -(1.0 - 2.0 * p).ln() / t / (zeta * zeta)
        })
        .collect();
    for r in &rates[1..] {
        assert!((r - rates[0]).abs() < 0.1 * rates[0], "{rates:?}");
    }
}

#[test]
fn thermal_population_on_the_fluxon_branch_near_half_flux() {
    for phi in [0.45, 0.5] {
        let sys = device_system(phi, 16);
        let (l, _) = liouvillian(&sys, &LindbladConfig::device());
        let rho = steady_state(&l).unwrap();
        assert!(rho.is_positive());
        let d = dressed_spectrum(&device_model(phi)).unwrap();
        let g1 = d.find(&"g1/0".parse().unwrap()).unwrap();
        assert!(rho.populations()[g1] > 0.1, "flux {phi}: {:?}", rho.populations());
    }
}

fn ridge_intensity(p: &FluxPoint, center: f64) -> f64 {
    let (half, n) = (0.04, 400);
    let h = 2.0 * half / n as f64;
    (0..=n)
        .map(|i| {
            let a = p.transmission(center - half + h * i as f64).unwrap();
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            w * a * a * h
        })
        .sum()
}

#[test]
fn two_ridges_near_zero_flux() {
    let d = dressed_spectrum(&device_model(0.0)).unwrap();
    let e = |s: &str| d.energies()[d.find(&s.parse().unwrap()).unwrap()] - d.energies()[0];
    let (r, q) = (e("g0/1"), e("e0/0"));
    assert!((q - r - 0.155).abs() < 0.15 * 0.155);
    let p = FluxPoint::new(&device_model(0.0), &LindbladConfig::device(), 0.0).unwrap();
    let ratio = ridge_intensity(&p, r) / ridge_intensity(&p, q);
    eprintln!("integrated ridge intensity ratio {ratio:.3}");
    assert!((ratio - 3.8).abs() < 0.3 * 3.8);
}

#[test]
fn qubit_ridge_saturates_first() {
    let d = dressed_spectrum(&device_model(0.0)).unwrap();
    let e = |s: &str| d.energies()[d.find(&s.parse().unwrap()).unwrap()] - d.energies()[0];
    let (r, q) = (e("g0/1"), e("e0/0"));
    let peak = |p: &FluxPoint, c: f64| {
        (0..=80).map(|i| p.transmission(c - 0.002 + 5e-5 * i as f64).unwrap()).fold(0.0, f64::max)
    };
    let mut last = 0.0;
    for zeta in [1e-4, 1e-3, 3e-3] {
        let cfg = LindbladConfig { zeta, ..LindbladConfig::device() };
        let p = FluxPoint::new(&device_model(0.0), &cfg, 0.0).unwrap();
        let ratio = peak(&p, r) / peak(&p, q);
        assert!(ratio > last, "ζ {zeta}: resonator/qubit peak ratio {ratio}");
        last = ratio;
    }
}
