use fluxsim::coupled::{
    catalog_from_dressed, dressed_spectrum, dressed_sweep, transition_catalog, CatalogOptions, CoupledModel, StateSelector,
};
use fluxsim::fluxonium::{tunnel_splitting, BasisConfig, Doublet, Operator};
use fluxsim::presets::{self, device_model};

fn find(d: &fluxsim::coupled::DressedSpectrum, s: &str) -> usize {
    d.find(&s.parse::<StateSelector>().unwrap()).unwrap()
}

#[test]
fn resonator_and_plasmon_near_zero_flux() {
    let d = dressed_spectrum(&device_model(0.0)).unwrap();
    let e = d.energies();
    let (g0, r, p) = (find(&d, "g0/0"), find(&d, "g0/1"), find(&d, "e0/0"));
    let resonator = e[r] - e[g0];
    let plasmon = e[p] - e[g0];
    let shift = resonator - presets::NU_R_GHZ;
    let separation = plasmon - resonator;
    eprintln!("dressed resonator {resonator:.6}, shift {shift:.6}, plasmon {plasmon:.6}, separation {separation:.6}");
    // Level repulsion from the plasmon above pushes the resonator line down by ~g²|n|²/Δ.
    assert!(shift < 0.0);
    assert!((shift.abs() - 0.033).abs() < 0.15 * 0.033);
    assert!((separation - 0.155).abs() < 0.15 * 0.155);
}

#[test]
fn jaynes_cummings_gap_at_resonance() {
    // Put the resonator on the bare g0→e0 transition and compare the
    // splitting with 2|g⟨e0|n|g0⟩| from the two-level rotating-wave model.
    let bare = fluxsim::fluxonium::diagonalize(&presets::device_params(0.0), &BasisConfig::with_states(9)).unwrap();
    let (g0, e0) = (bare.find(0, 0).unwrap(), bare.find(0, 1).unwrap());
    let nu = bare.gap(g0, e0);
    let n = bare.operator(Operator::Charge)[(e0, g0)].norm();
    let g = 0.01;
    let model = CoupledModel::new(presets::device_params(0.0), nu, g).unwrap();
    let d = dressed_spectrum(&model).unwrap();
    // Two states sharing one excitation: the second and third dressed levels above g0
    let e = d.energies();
    let mut one_exc: Vec<usize> = (0..d.len())
        .filter(|&i| {
            let b = d.provenance()[i].bare;
            (b.level == e0 && b.photons == 0) || (b.level == g0 && b.photons == 1)
        })
        .collect();
    one_exc.sort();
    assert_eq!(one_exc.len(), 2, "{one_exc:?}");
    let gap = e[one_exc[1]] - e[one_exc[0]];
    let jc = 2.0 * g * n;
    assert!((gap - jc).abs() < 0.05 * jc, "{gap} vs {jc}");
}

#[test]
fn two_photon_f0_line() {
    let cat = transition_catalog(&device_model(0.0), 0.05, &"g0/0".parse().unwrap(), &CatalogOptions::default()).unwrap();
    let f0 = cat.to_label("f0/0").find(|t| t.order == 2).expect("two-photon f0 line");
    eprintln!("two-photon g0→f0 at {:.4} GHz (weight {:.3e})", f0.frequency, f0.weight());
    assert!((f0.frequency - 4.73).abs() < 0.1);
}

#[test]
fn photon_assisted_catalog_from_one_photon() {
    let cat = transition_catalog(&device_model(0.0), 0.2, &"g0/1".parse().unwrap(), &CatalogOptions::default()).unwrap();
    assert!(cat.entries.iter().all(|t| t.initial_label == "g0/1"));
    assert!(cat.to_label("g1/1").any(|t| t.order == 1));
}

#[test]
fn flux_reversal_symmetry() {
    for phi in [0.07, 0.23, 0.41] {
        let a = dressed_spectrum(&device_model(phi)).unwrap();
        let b = dressed_spectrum(&device_model(-phi)).unwrap();
        for (x, y) in a.energies().iter().zip(b.energies()) {
            assert!((x - y).abs() < 1e-9, "{phi}: {x} vs {y}");
        }
    }
}

#[test]
fn truncation_stability() {
    for phi in [0.0, 0.078, 0.3] {
        let base = dressed_spectrum(&device_model(phi)).unwrap();
        let m = device_model(phi);
        let big = m.with_truncation(m.n_flux_levels * 3 / 2, m.n_photons * 3 / 2).unwrap();
        let big = dressed_spectrum(&big).unwrap();
        let worst = base.energies()[..10]
            .iter()
            .zip(big.energies())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        eprintln!("flux {phi}: truncation change {worst:.3e} GHz");
        assert!(worst < 1e-5);
    }
}

#[test]
fn fluxon_line_slope() {
    let grid: Vec<f64> = (0..=30).map(|i| 0.1 + 0.01 * i as f64).collect();
    let sweep = dressed_sweep(&device_model(0.0), &grid).unwrap();
    let first = &sweep.points[0].spectrum;
    let g0 = sweep.track_of(first.bare().find(0, 0).unwrap(), 0);
    let g1 = sweep.track_of(first.bare().find(1, 0).unwrap(), 0);
    let (e0, e1) = (sweep.track_energies(g0), sweep.track_energies(g1));
    let y: Vec<f64> = e0.iter().zip(&e1).map(|(a, b)| b - a).collect();
    let n = grid.len() as f64;
    let (mx, my) = (grid.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = grid.iter().zip(&y).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = grid.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;

    // same fit on the bare fluxonium
    let bare: Vec<f64> = grid
        .iter()
        .map(|&phi| {
            let s = fluxsim::fluxonium::diagonalize(&presets::device_params(phi), &BasisConfig::default()).unwrap();
            s.gap(s.find(0, 0).unwrap(), s.find(1, 0).unwrap())
        })
        .collect();
    let mb = bare.iter().sum::<f64>() / n;
    let bare_slope = grid.iter().zip(&bare).map(|(x, y)| (x - mx) * (y - mb)).sum::<f64>() / sxx;
    eprintln!("dressed fluxon slope {slope:.4}, bare {bare_slope:.4} GHz/Φ0");
    // the line moves toward g0 as the wells approach degeneracy at Φ0/2
    assert!(slope < 0.0);
    assert!((slope - bare_slope).abs() < 0.01 * bare_slope.abs());
    assert!((slope.abs() - 9.59).abs() < 0.05 * 9.59);
}

fn rhombus_separation(g: f64) -> f64 {
    let mut m = device_model(0.5);
    m.g = g;
    let d = dressed_spectrum(&m).unwrap();
    let opts = CatalogOptions { max_order: 1, ..Default::default() };
    // the lower and upper ground-doublet states each reach one member of the
    // excited doublet (bare levels 2 and 3; other wells lie ~9.5 GHz higher)
    let branch = |s: usize| {
        let cat = catalog_from_dressed(&d, &StateSelector::Index(s), &opts).unwrap();
        cat.entries
            .iter()
            .filter(|t| {
                let b = d.provenance()[t.final_state].bare;
                (b.level == 2 || b.level == 3) && b.photons == 0
            })
            .max_by(|a, b| a.weight().total_cmp(&b.weight()))
            .map(|t| t.frequency)
            .unwrap()
    };
    (branch(0) - branch(1)).abs()
}

#[test]
fn rhombus_at_half_flux() {
    let t_e = tunnel_splitting(&presets::device_params(0.5), &BasisConfig::default(), Doublet::Excited).unwrap();
    let t_g = tunnel_splitting(&presets::device_params(0.5), &BasisConfig::default(), Doublet::Ground).unwrap();
    let weak = rhombus_separation(0.005);
    eprintln!("weak-coupling branch separation {weak:.6} vs t_e {t_e:.6}, t_g {t_g:.6}");
    assert!((weak - t_e).abs() < 0.1 * t_e);
    // the resonator, ~150 MHz below the plasmon doublet, repels its two
    // members unequally and narrows the rhombus
    let device = rhombus_separation(presets::G_GHZ);
    eprintln!("device branch separation {device:.6}");
    assert!(device < weak && device > 0.5 * t_e);
}
