#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use riccati_spectra::{Domain, PotentialSpec, ProblemSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Piecewise-constant well on `[−3, 3]` with zero outside, one to four
/// inner steps at least 0.2 wide, and its deepest step at or below −1.
pub fn random_well(rng: &mut ChaCha8Rng) -> ProblemSpec {
    let steps = rng.gen_range(1..=4usize);
    let breakpoints = loop {
        let mut b: Vec<f64> = (0..=steps).map(|_| rng.gen_range(-3.0..3.0)).collect();
        b.sort_by(f64::total_cmp);
        if b.windows(2).all(|w| w[1] - w[0] >= 0.2) {
            break b;
        }
    };
    let mut values = vec![0.0];
    values.extend((0..steps).map(|_| rng.gen_range(-10.0..3.0)));
    values.push(0.0);
    if values.iter().all(|&v| v > -1.0) {
        values[1] = rng.gen_range(-10.0..-1.0);
    }
    ProblemSpec::new(PotentialSpec::PiecewiseConstant { breakpoints, values }, Domain::WholeLine).unwrap()
}

pub fn well_floor(problem: &ProblemSpec) -> f64 {
    match &problem.potential {
        PotentialSpec::PiecewiseConstant { values, .. } => values.iter().copied().fold(f64::INFINITY, f64::min),
        _ => panic!("not a piecewise-constant well"),
    }
}

pub fn support(problem: &ProblemSpec) -> (f64, f64) {
    let (l, r, _, _) = problem.potential.compact_support().unwrap();
    (l, r)
}
