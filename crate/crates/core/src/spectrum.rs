//! Eigenvalues from the defect angle.
//!
//! For an energy `E` the angle starts on the left decaying direction at `a`
//! and is carried to `b`. The defect angle `Γ(E) = α₋(b, E) − α(b, E)`
//! measures how far it lands from the right decaying direction. `Γ` is
//! strictly increasing in `E` and the eigenvalues are the energies where it
//! crosses a multiple of π; the multiple is the node count of the state.
//!
//! On wide intervals `Γ` is almost a staircase: flat between levels and
//! jumping by π across each one. Bisection on the sign of `Γ − nπ` is the
//! only refinement that stays reliable there.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rayon::prelude::*;

use crate::angular::{integrate_scaled_angle, AngularFlow, IntegratorConfig};
use crate::cues::{BoundaryCue, Side, DEFAULT_TERMS};
use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::problem::{Domain, Interval, ProblemSpec, TailClass};

/// Largest decrease of `Γ` between two energies that is still treated as
/// integrator noise.
pub const MONOTONE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumConfig {
    pub integrator: IntegratorConfig,
    /// Width of the final bisection bracket.
    pub e_tol: f64,
    /// Largest Riccati residual accepted for a cue at the interval ends.
    pub residual_tol: f64,
    /// Required margin `V(t) − E_max` beyond infinite-tail interval ends.
    pub kappa: f64,
    pub scan_samples: usize,
    pub n_terms: usize,
    /// Number of halving passes over scan cells where `Γ` jumps by more
    /// than π/2.
    pub max_refine_depth: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            integrator: IntegratorConfig::default(),
            e_tol: 1e-10,
            residual_tol: 1e-10,
            kappa: 1e-3,
            scan_samples: 64,
            n_terms: DEFAULT_TERMS,
            max_refine_depth: 6,
        }
    }
}

impl SpectrumConfig {
    pub fn validate(&self) -> Result<()> {
        self.integrator.validate()?;
        for (name, v) in [("e_tol", self.e_tol), ("residual_tol", self.residual_tol), ("kappa", self.kappa)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if self.scan_samples < 2 {
            return Err(Error::InvalidConfig(format!("scan_samples must be at least 2, got {}", self.scan_samples)));
        }
        if self.n_terms < 2 {
            return Err(Error::InvalidConfig(format!("n_terms must be at least 2, got {}", self.n_terms)));
        }
        Ok(())
    }
}

/// One evaluation of the defect angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectSample {
    pub energy: f64,
    pub gamma: f64,
    pub alpha_b: f64,
    /// Number of eigenvalues below `energy`.
    pub n_below: usize,
}

impl DefectSample {
    fn new(energy: f64, gamma: f64, alpha_b: f64) -> Self {
        let n_below = if gamma < 0.0 { 0 } else { (gamma / PI).floor() as usize + 1 };
        Self { energy, gamma, alpha_b, n_below }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    /// Branch index, equal to the node count.
    pub n: usize,
    pub energy: f64,
    /// `|Γ(energy) − nπ|` at the reported energy.
    pub gamma_residual: f64,
    /// Final bisection bracket; `Γ(lo) < nπ ≤ Γ(hi)`.
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<Eigenvalue>,
    pub scan: Vec<DefectSample>,
    /// The problem with its interval resolved.
    pub problem: ProblemSpec,
    pub config: SpectrumConfig,
}

/// Grid of energies and the rendered eigenfunction on it.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenfunctionSamples {
    pub t: Vec<f64>,
    pub alpha: Vec<f64>,
    /// `ln ρ` after normalization.
    pub log_rho: Vec<f64>,
    pub psi: Vec<f64>,
}

impl EigenfunctionSamples {
    /// Sign changes of `ψ` across the grid, ignoring exact zeros.
    pub fn node_count(&self) -> usize {
        let signs: Vec<bool> = self.psi.iter().filter(|p| **p != 0.0).map(|p| *p > 0.0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

const MAX_TAIL_EXTENT: f64 = 1e7;
const GROWTH: f64 = 1.5;
const ORIGIN_START: f64 = 1e-2;
const ORIGIN_FLOOR: f64 = 1e-4;

fn check_range(problem: &ProblemSpec, e_min: f64, e_max: f64) -> Result<()> {
    if !(e_min.is_finite() && e_max.is_finite() && e_min <= e_max) {
        return Err(Error::EnergyRange { e_min, e_max });
    }
    let threshold = problem.threshold();
    if !(e_max < threshold) {
        return Err(Error::NotBelowThreshold { energy: e_max, threshold });
    }
    Ok(())
}

fn tail_seed(tail: TailClass, e_max: f64) -> f64 {
    match tail {
        TailClass::OscillatorTail { omega } | TailClass::QuarkTail { omega, .. } => {
            1.0 + (2.0 * e_max.max(omega)).sqrt() / omega
        }
        _ => 10.0,
    }
}

/// Fixes `[a, b]` for the energy range `[e_min, e_max]`. An explicit
/// interval is kept as is. Otherwise constant tails use the edges of the
/// non-constant region, infinite tails grow by a factor 1.5 until both
/// cues meet `residual_tol` at both ends of the range and the potential
/// clears `e_max` by `kappa`, and the origin end shrinks from `1e-2`
/// towards `1e-4`.
pub fn resolve_interval(problem: &ProblemSpec, e_min: f64, e_max: f64, config: &SpectrumConfig) -> Result<ProblemSpec> {
    config.validate()?;
    check_range(problem, e_min, e_max)?;
    if let Interval::Explicit { .. } = problem.interval {
        return Ok(problem.clone());
    }
    let potential = problem.effective_potential();
    let energies = [e_min, e_max];
    let cues = |side| -> Result<Vec<BoundaryCue>> {
        energies.iter().map(|&e| BoundaryCue::new(problem, side, e, config.n_terms)).collect()
    };
    let worst = |cues: &[BoundaryCue], t: f64| cues.iter().map(|c| c.residual(t)).fold(0.0f64, f64::max);
    let support = potential.compact_support();

    let left_cues = cues(Side::Left)?;
    let a = match problem.left_tail {
        TailClass::ConstantLevel { .. } => support.map(|s| s.0).unwrap_or(0.0),
        tail if tail.is_zero_singularity() => {
            let mut a = ORIGIN_START;
            loop {
                let r = worst(&left_cues, a);
                if r < config.residual_tol {
                    break a;
                }
                let next = a / GROWTH;
                if next < ORIGIN_FLOOR {
                    if worst(&left_cues, ORIGIN_FLOOR) < config.residual_tol {
                        break ORIGIN_FLOOR;
                    }
                    return Err(Error::IntervalSelection { residual: r, tol: config.residual_tol, a, b: f64::NAN });
                }
                a = next;
            }
        }
        tail => -grow_tail(&potential, tail_seed(tail, e_max), -1.0, e_max, config, |t| worst(&left_cues, t))?,
    };

    let right_cues = cues(Side::Right)?;
    let mut b = match problem.right_tail {
        TailClass::ConstantLevel { .. } => support.map(|s| s.1).unwrap_or(1.0),
        tail => {
            grow_tail(&potential, tail_seed(tail, e_max).max(a + 1.0), 1.0, e_max, config, |t| worst(&right_cues, t))?
        }
    };
    let mut a = a;
    if b <= a {
        // Zero-width non-constant region.
        a -= 1.0;
        b += 1.0;
    }
    problem.clone().with_interval(a, b)
}

fn grow_tail<F: Fn(f64) -> f64>(
    potential: &PotentialSpec,
    seed: f64,
    direction: f64,
    e_max: f64,
    config: &SpectrumConfig,
    residual: F,
) -> Result<f64> {
    let mut extent = seed;
    loop {
        let t = direction * extent;
        let r = residual(t);
        let margin = potential.evaluate(t)? - e_max;
        if r < config.residual_tol && margin >= config.kappa {
            return Ok(extent);
        }
        extent *= GROWTH;
        if extent > MAX_TAIL_EXTENT {
            return Err(Error::IntervalSelection {
                residual: r,
                tol: config.residual_tol,
                a: if direction < 0.0 { t } else { f64::NAN },
                b: if direction > 0.0 { t } else { f64::NAN },
            });
        }
    }
}

/// A problem with a fixed interval, ready to evaluate `Γ`.
struct Shooter<'a> {
    problem: &'a ProblemSpec,
    potential: PotentialSpec,
    a: f64,
    b: f64,
    config: &'a SpectrumConfig,
}

impl<'a> Shooter<'a> {
    fn new(problem: &'a ProblemSpec, config: &'a SpectrumConfig) -> Result<Self> {
        let (a, b) = problem.require_interval()?;
        Ok(Self { problem, potential: problem.effective_potential(), a, b, config })
    }

    fn defect(&self, energy: f64) -> Result<DefectSample> {
        let threshold = self.problem.threshold();
        if !(energy < threshold) {
            return Err(Error::NotBelowThreshold { energy, threshold });
        }
        let left = BoundaryCue::new(self.problem, Side::Left, energy, self.config.n_terms)?;
        let right = BoundaryCue::new(self.problem, Side::Right, energy, self.config.n_terms)?;
        let flow = AngularFlow::new(&self.potential, energy, &self.config.integrator);
        let alpha_b = flow.propagate(self.a, left.angle(self.a), self.b, false)?.alpha;
        Ok(DefectSample::new(energy, right.angle(self.b) - alpha_b, alpha_b))
    }

    /// Defect angle of the rescaled flow, for equal constant tails at `level`.
    /// Both limiting angles are ±π/4 in that chart.
    fn scaled_defect(&self, energy: f64, level: f64) -> Result<DefectSample> {
        let alpha_b = integrate_scaled_angle(self.problem, energy, level, FRAC_PI_4, &self.config.integrator)?.alpha;
        Ok(DefectSample::new(energy, -FRAC_PI_4 - alpha_b, alpha_b))
    }
}

/// `Γ(E)` for one energy. An `Auto` interval is resolved for `E` alone.
pub fn defect_angle(problem: &ProblemSpec, energy: f64, config: &SpectrumConfig) -> Result<DefectSample> {
    let resolved = resolve_interval(problem, energy, energy, config)?;
    Shooter::new(&resolved, config)?.defect(energy)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

fn check_monotone(samples: &[DefectSample]) -> Result<()> {
    for w in samples.windows(2) {
        if w[1].gamma < w[0].gamma - MONOTONE_SLACK {
            return Err(Error::NonMonotone {
                e_lo: w[0].energy,
                e_hi: w[1].energy,
                gamma_lo: w[0].gamma,
                gamma_hi: w[1].gamma,
            });
        }
    }
    Ok(())
}

fn scan<F>(gamma: &F, e_min: f64, e_max: f64, monotone: bool, config: &SpectrumConfig) -> Result<Vec<DefectSample>>
where
    F: Fn(f64) -> Result<DefectSample> + Sync,
{
    let mut samples: Vec<DefectSample> =
        linspace(e_min, e_max, config.scan_samples).into_par_iter().map(gamma).collect::<Result<_>>()?;
    for _ in 0..config.max_refine_depth {
        let mids: Vec<f64> = samples
            .windows(2)
            .filter(|w| w[1].gamma - w[0].gamma > FRAC_PI_2)
            .map(|w| 0.5 * (w[0].energy + w[1].energy))
            .filter(|m| samples.iter().all(|s| s.energy != *m))
            .collect();
        if mids.is_empty() {
            break;
        }
        let extra: Vec<DefectSample> = mids.into_par_iter().map(gamma).collect::<Result<_>>()?;
        samples.extend(extra);
        samples.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    }
    if monotone {
        check_monotone(&samples)?;
    }
    Ok(samples)
}

fn bisect<F>(
    gamma: &F,
    n: usize,
    lo: DefectSample,
    hi: DefectSample,
    monotone: bool,
    config: &SpectrumConfig,
) -> Result<Eigenvalue>
where
    F: Fn(f64) -> Result<DefectSample>,
{
    let target = n as f64 * PI;
    let (mut lo, mut hi) = (lo, hi);
    while hi.energy - lo.energy > config.e_tol {
        let mid = 0.5 * (lo.energy + hi.energy);
        if mid <= lo.energy || mid >= hi.energy {
            break;
        }
        let s = gamma(mid)?;
        if monotone && (s.gamma < lo.gamma - MONOTONE_SLACK || s.gamma > hi.gamma + MONOTONE_SLACK) {
            let (e_lo, gamma_lo, e_hi, gamma_hi) = if s.gamma < lo.gamma {
                (lo.energy, lo.gamma, mid, s.gamma)
            } else {
                (mid, s.gamma, hi.energy, hi.gamma)
            };
            return Err(Error::NonMonotone { e_lo, e_hi, gamma_lo, gamma_hi });
        }
        if s.gamma < target {
            lo = s;
        } else {
            hi = s;
        }
    }
    let energy = 0.5 * (lo.energy + hi.energy);
    let at = gamma(energy)?;
    Ok(Eigenvalue { n, energy, gamma_residual: (at.gamma - target).abs(), bracket: (lo.energy, hi.energy) })
}

/// Brackets and bisects every branch crossed in `[e_min, e_max]`. With
/// `monotone` unset the scan is only required to cross each multiple of π
/// where `Γ` does, which is all the rescaled angle guarantees.
fn solve<F>(
    gamma: F,
    e_min: f64,
    e_max: f64,
    monotone: bool,
    config: &SpectrumConfig,
) -> Result<(Vec<Eigenvalue>, Vec<DefectSample>)>
where
    F: Fn(f64) -> Result<DefectSample> + Sync,
{
    let samples = scan(&gamma, e_min, e_max, monotone, config)?;
    let first = samples[0].gamma;
    let last = samples[samples.len() - 1].gamma;
    // Branches with Γ(e_min) < nπ ≤ Γ(e_max).
    let n_lo = ((first / PI).floor() + 1.0).max(0.0) as usize;
    let n_hi = if last < 0.0 { None } else { Some((last / PI).floor() as usize) };
    let Some(n_hi) = n_hi.filter(|&h| h >= n_lo) else {
        return Ok((Vec::new(), samples));
    };
    let eigenvalues = (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| {
            let target = n as f64 * PI;
            // Last sample below the target followed by one at or above it.
            let i = samples
                .windows(2)
                .position(|w| w[0].gamma < target && w[1].gamma >= target)
                .expect("the scan ends straddle every counted branch");
            bisect(&gamma, n, samples[i], samples[i + 1], monotone, config)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((eigenvalues, samples))
}

/// All eigenvalues in `[e_min, e_max]`.
pub fn find_eigenvalues(
    problem: &ProblemSpec,
    e_min: f64,
    e_max: f64,
    config: &SpectrumConfig,
) -> Result<SpectrumResult> {
    let resolved = resolve_interval(problem, e_min, e_max, config)?;
    let shooter = Shooter::new(&resolved, config)?;
    let (eigenvalues, scan) = solve(|e| shooter.defect(e), e_min, e_max, true, config)?;
    Ok(SpectrumResult { eigenvalues, scan, problem: resolved, config: *config })
}

/// Same as [`find_eigenvalues`], through the rescaled angle whose limiting
/// directions are ±π/4 for every energy. Needs equal constant tails; the
/// eigenvalue condition becomes `α(a) − α(b) = (n + ½)π`.
pub fn find_eigenvalues_scaled(
    problem: &ProblemSpec,
    e_min: f64,
    e_max: f64,
    config: &SpectrumConfig,
) -> Result<SpectrumResult> {
    let level = match (problem.left_tail, problem.right_tail) {
        (TailClass::ConstantLevel { level: l }, TailClass::ConstantLevel { level: r }) if l == r => l,
        _ => return Err(Error::InvalidProblem("the rescaled flow needs equal constant levels on both sides".into())),
    };
    let resolved = resolve_interval(problem, e_min, e_max, config)?;
    let shooter = Shooter::new(&resolved, config)?;
    let (eigenvalues, scan) = solve(|e| shooter.scaled_defect(e, level), e_min, e_max, false, config)?;
    Ok(SpectrumResult { eigenvalues, scan, problem: resolved, config: *config })
}

/// Number of eigenvalues below `e_ceiling`.
pub fn count_levels(problem: &ProblemSpec, e_ceiling: f64, config: &SpectrumConfig) -> Result<usize> {
    Ok(defect_angle(problem, e_ceiling, config)?.n_below)
}

/// `Γ` on `samples` uniform energies over `[e_min, e_max]`, all on the one
/// interval resolved for the whole range (returned alongside).
pub fn defect_curve(
    problem: &ProblemSpec,
    e_min: f64,
    e_max: f64,
    samples: usize,
    config: &SpectrumConfig,
) -> Result<(ProblemSpec, Vec<DefectSample>)> {
    if samples < 2 {
        return Err(Error::InvalidConfig(format!("a defect curve needs at least two samples, got {samples}")));
    }
    let resolved = resolve_interval(problem, e_min, e_max, config)?;
    let shooter = Shooter::new(&resolved, config)?;
    let curve = linspace(e_min, e_max, samples).into_par_iter().map(|e| shooter.defect(e)).collect::<Result<_>>()?;
    Ok((resolved, curve))
}

/// Position of the last classically allowed grid point, where the two
/// integrations meet.
fn matching_point(potential: &PotentialSpec, energy: f64, a: f64, b: f64) -> Result<f64> {
    const PROBES: usize = 4096;
    for i in (0..=PROBES).rev() {
        let t = a + (b - a) * i as f64 / PROBES as f64;
        if potential.evaluate(t)? <= energy {
            return Ok(t.clamp(a, b));
        }
    }
    Ok(0.5 * (a + b))
}

/// Eigenfunction at an accepted eigenvalue, sampled on `grid` (strictly
/// increasing, inside `[a, b]` when the interval is explicit) and normalized so that the trapezoid rule
/// gives `∫ψ² = 1`. The angle and amplitude are integrated inwards from
/// both ends along the decaying directions and joined at the last turning
/// point.
pub fn reconstruct_eigenfunction(
    problem: &ProblemSpec,
    energy: f64,
    grid: &[f64],
    config: &SpectrumConfig,
) -> Result<EigenfunctionSamples> {
    if grid.len() < 2 {
        return Err(Error::InvalidConfig("eigenfunction grid needs at least two points".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig("eigenfunction grid must be strictly increasing".into()));
    }
    let mut resolved = resolve_interval(problem, energy, energy, config)?;
    let (mut a, mut b) = resolved.require_interval()?;
    let (first, last) = (grid[0], grid[grid.len() - 1]);
    // An automatic interval may grow to cover the grid; moving an end
    // outwards only improves its cue.
    let inside_domain = !matches!(problem.domain, Domain::HalfLine { .. }) || first > 0.0;
    if problem.explicit_interval().is_none() && inside_domain && (first < a || last > b) {
        resolved = resolved.with_interval(a.min(first), b.max(last))?;
        (a, b) = (a.min(first), b.max(last));
    }
    if let Some(&t) = grid.iter().find(|&&t| t < a || t > b) {
        return Err(Error::OutsideInterval { t, a, b });
    }
    let potential = resolved.effective_potential();
    let left = BoundaryCue::new(&resolved, Side::Left, energy, config.n_terms)?;
    let right = BoundaryCue::new(&resolved, Side::Right, energy, config.n_terms)?;
    let flow = AngularFlow::new(&potential, energy, &config.integrator);
    let joint = matching_point(&potential, energy, a, b)?;

    let split = grid.partition_point(|&t| t <= joint);
    let mut forward_out: Vec<f64> = grid[..split].to_vec();
    forward_out.push(joint);
    let mut backward_out: Vec<f64> = grid[split..].iter().rev().copied().collect();
    backward_out.push(joint);

    let forward = flow.trajectory(a, left.angle(a), &forward_out)?;
    let backward = flow.trajectory(b, right.angle(b), &backward_out)?;
    let (fj, bj) = (forward[forward.len() - 1], backward[backward.len() - 1]);
    let turns = ((fj.alpha - bj.alpha) / PI).round();
    let shift = fj.log_rho.unwrap_or(0.0) - bj.log_rho.unwrap_or(0.0);

    let mut t = Vec::with_capacity(grid.len());
    let mut alpha = Vec::with_capacity(grid.len());
    let mut log_rho = Vec::with_capacity(grid.len());
    for s in &forward[..forward.len() - 1] {
        t.push(s.t);
        alpha.push(s.alpha);
        log_rho.push(s.log_rho.unwrap_or(0.0));
    }
    for s in backward[..backward.len() - 1].iter().rev() {
        t.push(s.t);
        alpha.push(s.alpha + turns * PI);
        log_rho.push(s.log_rho.unwrap_or(0.0) + shift);
    }

    let peak = log_rho.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = alpha.iter().zip(&log_rho).map(|(al, lr)| (lr - peak).exp() * al.cos()).collect();
    let norm: f64 =
        t.windows(2).zip(raw.windows(2)).map(|(tw, pw)| 0.5 * (tw[1] - tw[0]) * (pw[0] * pw[0] + pw[1] * pw[1])).sum();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidConfig("eigenfunction grid does not resolve the state".into()));
    }
    let scale = norm.sqrt();
    let psi = raw.iter().map(|p| p / scale).collect();
    let offset = peak - scale.ln();
    let log_rho = log_rho.iter().map(|lr| lr - peak + offset).collect();
    Ok(EigenfunctionSamples { t, alpha, log_rho, psi })
}
