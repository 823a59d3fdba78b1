use riccati_spectra::spectrum::{find_eigenvalues, reconstruct_eigenfunction};
use riccati_spectra::{Domain, PotentialSpec, ProblemSpec, SpectrumConfig};

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn aligned(psi: &[f64], reference: &[f64]) -> f64 {
    let dot: f64 = psi.iter().zip(reference).map(|(a, b)| a * b).sum();
    let sign = dot.signum();
    psi.iter().zip(reference).map(|(a, b)| (sign * a - b).abs()).fold(0.0, f64::max)
}

#[test]
fn oscillator_ground_state_is_gaussian() {
    let p = ProblemSpec::new(PotentialSpec::HybridOscillator { omega_left: 1.0, omega_right: 1.0 }, Domain::WholeLine)
        .unwrap();
    let cfg = SpectrumConfig::default();
    let r = find_eigenvalues(&p, 0.2, 0.8, &cfg).unwrap();
    let (a, b) = r.problem.explicit_interval().unwrap();
    let t = grid(a, b, 20_001);
    let s = reconstruct_eigenfunction(&p, r.eigenvalues[0].energy, &t, &cfg).unwrap();
    let norm = std::f64::consts::PI.powf(-0.25);
    let exact: Vec<f64> = t.iter().map(|x| norm * (-0.5 * x * x).exp()).collect();
    assert!(aligned(&s.psi, &exact) < 1e-6);
    assert_eq!(s.node_count(), 0);
}

#[test]
fn hydrogen_ground_state_shape() {
    let p = ProblemSpec::new(PotentialSpec::Coulomb { charge: 1.0 }, Domain::HalfLine { l: 0 }).unwrap();
    let cfg = SpectrumConfig::default();
    let r = find_eigenvalues(&p, -0.6, -0.4, &cfg).unwrap();
    let (a, b) = r.problem.explicit_interval().unwrap();
    let t = grid(a, b.min(60.0), 60_001);
    let s = reconstruct_eigenfunction(&p, r.eigenvalues[0].energy, &t, &cfg).unwrap();
    let exact: Vec<f64> = t.iter().map(|x| 2.0 * x * (-x).exp()).collect();
    assert!(aligned(&s.psi, &exact) < 1e-5);
}

#[test]
fn node_count_equals_branch_index() {
    let p =
        ProblemSpec::new(PotentialSpec::TruncatedOscillator { omega: 1.0, cutoff_a: 4.0 }, Domain::WholeLine).unwrap();
    let cfg = SpectrumConfig::default();
    let r = find_eigenvalues(&p, 0.0, 7.999, &cfg).unwrap();
    assert_eq!(r.eigenvalues.len(), 8);
    let t = grid(-12.0, 12.0, 4001);
    for e in &r.eigenvalues {
        let s = reconstruct_eigenfunction(&p, e.energy, &t, &cfg).unwrap();
        assert_eq!(s.node_count(), e.n, "level {}", e.n);
    }
}

#[test]
fn third_excited_state_is_odd() {
    let p =
        ProblemSpec::new(PotentialSpec::TruncatedOscillator { omega: 1.0, cutoff_a: 4.0 }, Domain::WholeLine).unwrap();
    let cfg = SpectrumConfig::default();
    let r = find_eigenvalues(&p, 3.0, 4.0, &cfg).unwrap();
    assert_eq!(r.eigenvalues[0].n, 3);
    let t = grid(-6.0, 6.0, 1201);
    let s = reconstruct_eigenfunction(&p, r.eigenvalues[0].energy, &t, &cfg).unwrap();
    assert_eq!(s.node_count(), 3);
    let n = t.len();
    for i in 0..n / 2 {
        assert!((s.psi[i] + s.psi[n - 1 - i]).abs() < 1e-6);
    }
}

#[test]
fn hydrogen_nodes_follow_branch_index() {
    let p = ProblemSpec::new(PotentialSpec::Coulomb { charge: 1.0 }, Domain::HalfLine { l: 0 }).unwrap();
    let cfg = SpectrumConfig::default();
    let r = find_eigenvalues(&p, -0.6, -0.025, &cfg).unwrap();
    assert_eq!(r.eigenvalues.len(), 4);
    let (a, _) = r.problem.explicit_interval().unwrap();
    let t = grid(a, 80.0, 40_001);
    for e in &r.eigenvalues {
        let s = reconstruct_eigenfunction(&p, e.energy, &t, &cfg).unwrap();
        assert_eq!(s.node_count(), e.n, "level {}", e.n);
    }
}
