mod common;

use proptest::prelude::*;
use riccati_spectra::oracle::{eigencondition_roots, fd_eigenvalues};
use riccati_spectra::spectrum::{count_levels, defect_angle, find_eigenvalues};
use riccati_spectra::{Domain, PotentialSpec, ProblemSpec, SpectrumConfig};

fn truncated(a: f64) -> ProblemSpec {
    ProblemSpec::new(PotentialSpec::TruncatedOscillator { omega: 1.0, cutoff_a: a }, Domain::WholeLine).unwrap()
}

#[test]
fn level_counts() {
    let cfg = SpectrumConfig::default();
    assert_eq!(count_levels(&truncated(2.0), 1.999, &cfg).unwrap(), 2);
    assert_eq!(count_levels(&truncated(4.0), 7.999, &cfg).unwrap(), 8);
    let h = ProblemSpec::new(PotentialSpec::Coulomb { charge: 1.0 }, Domain::HalfLine { l: 0 }).unwrap();
    // E₁₀ = −1/242 ≈ −0.00413 is still below the ceiling.
    assert_eq!(count_levels(&h, -0.004, &cfg).unwrap(), 11);
}

/// The steepest rise of `Γ` between neighbouring levels sits at the level,
/// up to a few percent of the spacing.
#[test]
fn steepest_defect_growth_sits_at_the_levels() {
    let cfg = SpectrumConfig::default();
    let r = find_eigenvalues(&truncated(4.0), 0.0, 7.999, &cfg).unwrap();
    let h = 1e-3;
    for e in &r.eigenvalues {
        let es: Vec<f64> = (-400..=400).map(|k| e.energy + k as f64 * h).filter(|x| *x > 0.0 && *x < 8.0).collect();
        let g: Vec<f64> = es.iter().map(|&x| defect_angle(&r.problem, x, &cfg).unwrap().gamma).collect();
        let i = (0..es.len() - 1).max_by(|&i, &j| (g[i + 1] - g[i]).total_cmp(&(g[j + 1] - g[j]))).unwrap();
        let offset = 0.5 * (es[i] + es[i + 1]) - e.energy;
        assert!(offset.abs() < 0.05, "level {}: steepest at offset {offset}", e.energy);
        if e.n < 4 {
            assert!(offset.abs() <= h, "level {}: steepest at offset {offset}", e.energy);
        }
    }
}

#[test]
fn square_well_three_ways() {
    let p =
        ProblemSpec::new(PotentialSpec::SquareWell { depth: -6.0, left: -1.0, right: 1.5 }, Domain::WholeLine).unwrap();
    let cfg = SpectrumConfig::default();
    let levels: Vec<f64> =
        find_eigenvalues(&p, -5.999, -0.05, &cfg).unwrap().eigenvalues.iter().map(|e| e.energy).collect();
    let roots = eigencondition_roots(&p, -5.999, -0.05, 300, &cfg.integrator).unwrap();
    let fd = fd_eigenvalues(&p, -0.05, 8000).unwrap();
    assert_eq!(levels.len(), roots.len());
    assert_eq!(levels.len(), fd.energies.len());
    for ((a, b), c) in levels.iter().zip(&roots).zip(&fd.energies) {
        assert!((a - b).abs() < 1e-8);
        assert!((a - c).abs() < 1e-6);
    }
}

#[test]
fn explicit_wider_interval_changes_nothing() {
    let cfg = SpectrumConfig::default();
    let auto = find_eigenvalues(&truncated(4.0), 0.0, 7.9, &cfg).unwrap();
    let (a, b) = auto.problem.explicit_interval().unwrap();
    let wide = truncated(4.0).with_interval(2.0 * a, 2.0 * b).unwrap();
    let again = find_eigenvalues(&wide, 0.0, 7.9, &cfg).unwrap();
    for (x, y) in auto.eigenvalues.iter().zip(&again.eigenvalues) {
        assert!((x.energy - y.energy).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn random_wells_match_fd(seed in any::<u64>()) {
        let well = common::random_well(&mut common::rng(seed));
        let cfg = SpectrumConfig::default();
        let floor = common::well_floor(&well) + 1e-6;
        let levels = find_eigenvalues(&well, floor, -0.2, &cfg).unwrap();
        let fd = fd_eigenvalues(&well, -0.2, 8000).unwrap();
        prop_assert_eq!(levels.eigenvalues.len(), fd.energies.len());
        for (e, f) in levels.eigenvalues.iter().zip(&fd.energies) {
            prop_assert!((e.energy - f).abs() < 1e-5);
        }
    }

    #[test]
    fn random_wells_have_increasing_defect(seed in any::<u64>(), e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
        let well = common::random_well(&mut common::rng(seed));
        let (l, r) = common::support(&well);
        let p = well.with_interval(l, r).unwrap();
        let floor = common::well_floor(&p);
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        prop_assume!(hi - lo > 1e-6);
        let cfg = SpectrumConfig::default();
        let g_lo = defect_angle(&p, floor * (1.0 - lo), &cfg).unwrap().gamma;
        let g_hi = defect_angle(&p, floor * (1.0 - hi), &cfg).unwrap().gamma;
        prop_assert!(g_hi > g_lo - 1e-9);
    }
}
