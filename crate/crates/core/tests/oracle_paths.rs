mod common;

use riccati_spectra::angular::integrate_angle;
use riccati_spectra::oracle::{eigencondition_mismatch, fd_eigenvalues, propagate_phase, transfer_matrix, PhaseState};
use riccati_spectra::spectrum::find_eigenvalues;
use riccati_spectra::{Domain, IntegratorConfig, PotentialSpec, ProblemSpec, SpectrumConfig};

fn mod_pi_gap(x: f64, y: f64) -> f64 {
    let d = (x - y) / std::f64::consts::PI;
    (d - d.round()).abs() * std::f64::consts::PI
}

#[test]
fn phase_angle_follows_the_angular_flow() {
    let mut rng = common::rng(11);
    let cfg = IntegratorConfig::default();
    for _ in 0..10 {
        let well = common::random_well(&mut rng);
        let (l, r) = common::support(&well);
        let p = well.with_interval(l - 1.0, r + 1.0).unwrap();
        let e = 0.5 * common::well_floor(&p);
        let alpha0 = 0.7;
        let angle = integrate_angle(&p, e, alpha0, &cfg, false).unwrap().alpha;
        let phase =
            propagate_phase(&p, e, PhaseState::new(l - 1.0, alpha0.cos(), alpha0.sin()), r + 1.0, &cfg).unwrap();
        assert!(mod_pi_gap(angle, phase.p.atan2(phase.q)) < 1e-9);
    }
}

/// `det u` is formed from products of size `‖u‖²`, so double precision
/// resolves it to about `ε‖u‖²`. Wells with internal barriers reach
/// `‖u‖ ~ 10⁵`; those are held to the relative bound only.
#[test]
fn transfer_matrices_are_symplectic() {
    let mut rng = common::rng(12);
    let cfg = IntegratorConfig::default();
    let mut well_conditioned = 0;
    for _ in 0..100 {
        let well = common::random_well(&mut rng);
        let e = 0.5 * common::well_floor(&well);
        let u = transfer_matrix(&well, e, &cfg).unwrap();
        let norm2: f64 = u.m.iter().flatten().map(|x| x * x).sum::<f64>() * 2f64.powi(2 * u.log2_scale);
        let err = (u.det() - 1.0).abs();
        assert!(err <= 1e-10 * norm2, "det {} with |u|² {norm2:e}", u.det());
        if norm2 < 1e3 {
            well_conditioned += 1;
            assert!(err < 1e-10, "det {}", u.det());
        }
    }
    assert!(well_conditioned >= 50);
}

#[test]
fn spectrum_levels_satisfy_the_eigencondition() {
    let cfg = SpectrumConfig::default();
    for depth in [-3.0, -8.0] {
        let p =
            ProblemSpec::new(PotentialSpec::SquareWell { depth, left: -0.8, right: 0.9 }, Domain::WholeLine).unwrap();
        let r = find_eigenvalues(&p, depth + 1e-6, -1e-3, &cfg).unwrap();
        assert!(!r.eigenvalues.is_empty());
        for e in &r.eigenvalues {
            let s = eigencondition_mismatch(&p, e.energy, &cfg.integrator).unwrap();
            assert!(s.abs().asin() < 1e-8, "E = {}: {s:e}", e.energy);
        }
    }
}

#[test]
fn truncated_oscillator_matches_fd() {
    let p =
        ProblemSpec::new(PotentialSpec::TruncatedOscillator { omega: 1.0, cutoff_a: 4.0 }, Domain::WholeLine).unwrap();
    let r = find_eigenvalues(&p, 0.0, 7.999, &SpectrumConfig::default()).unwrap();
    let fd = fd_eigenvalues(&p, 7.999, 8000).unwrap();
    assert_eq!(fd.energies.len(), 8);
    for ((e, f), err) in r.eigenvalues.iter().zip(&fd.energies).zip(&fd.error_estimates) {
        assert!((e.energy - f).abs() < 1e-6 + 2.0 * err);
    }
}

#[test]
fn compact_problems_only() {
    let h = ProblemSpec::new(PotentialSpec::Coulomb { charge: 1.0 }, Domain::HalfLine { l: 0 }).unwrap();
    assert!(transfer_matrix(&h, -0.5, &IntegratorConfig::default()).is_err());
    assert!(fd_eigenvalues(&h, 0.1, 1000).is_err());
}
