//! Independent checks on the angular solver.
//!
//! Three routes that do not go through the angle equation:
//!
//! * direct integration of the linear system `q' = p`, `p' = 2(V − E)q`,
//! * the transfer matrix `u(b, a)` and its eigencondition
//!   `u·e₊ ∥ e₋` for potentials with constant tails,
//! * a three-point finite-difference discretization of
//!   `−½ψ'' + Vψ = Eψ` with Dirichlet ends, solved by Sturm-sequence
//!   bisection and extrapolated across two grids.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ode::{splits_between, IntegratorConfig, Stepper};
use crate::potentials::PotentialSpec;
use crate::problem::{Domain, ProblemSpec, TailClass};

/// Components are rescaled by a power of two once they leave this range.
const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_BELOW: f64 = 1e-150;

/// Point of the classical phase trajectory. The physical state is
/// `(q, p) · 2^scale_exp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub t: f64,
    pub q: f64,
    pub p: f64,
    pub scale_exp: i32,
}

impl PhaseState {
    pub fn new(t: f64, q: f64, p: f64) -> Self {
        Self { t, q, p, scale_exp: 0 }
    }

    /// Direction angle of `(q, p)` reduced to `(−π/2, π/2]`.
    pub fn angle_mod_pi(&self) -> f64 {
        reduce_mod_pi(self.p.atan2(self.q))
    }
}

pub(crate) fn reduce_mod_pi(angle: f64) -> f64 {
    let r = angle - PI * (angle / PI).round();
    if r <= -PI / 2.0 {
        r + PI
    } else {
        r
    }
}

/// Rescales the whole state by a common power of two.
fn rescale<const N: usize>(y: &mut [f64; N], exp: &mut i32) -> bool {
    let size = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if size > RESCALE_ABOVE || (size < RESCALE_BELOW && size > 0.0) {
        let k = size.log2().round() as i32;
        let factor = 2f64.powi(-k);
        for v in y.iter_mut() {
            *v *= factor;
        }
        *exp += k;
        true
    } else {
        false
    }
}

fn linear_run<const N: usize>(
    potential: &PotentialSpec,
    energy: f64,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    config: &IntegratorConfig,
) -> Result<([f64; N], i32)> {
    config.validate()?;
    let mut rhs = |t: f64, y: &[f64; N]| -> Result<[f64; N]> {
        let w = 2.0 * (potential.evaluate(t)? - energy);
        let mut out = [0.0; N];
        for k in (0..N).step_by(2) {
            out[k] = y[k + 1];
            out[k + 1] = w * y[k];
        }
        Ok(out)
    };
    let mut stepper = Stepper::new(config);
    let mut exp = 0;
    let mut y = y0;
    let mut t = t0;
    let breaks = potential.breakpoints();
    for stop in splits_between(&breaks, t0, t1).into_iter().chain(std::iter::once(t1)) {
        y = stepper.run(&mut rhs, t, y, stop, &mut |y: &mut [f64; N]| rescale(y, &mut exp))?;
        t = stop;
    }
    Ok((y, exp))
}

/// Integrates the linear phase-space system from `start` to `t_end`.
pub fn propagate_phase(
    problem: &ProblemSpec,
    energy: f64,
    start: PhaseState,
    t_end: f64,
    config: &IntegratorConfig,
) -> Result<PhaseState> {
    if !(start.q.is_finite() && start.p.is_finite()) || (start.q == 0.0 && start.p == 0.0) {
        return Err(Error::Oracle(format!("start state ({}, {}) is not a direction", start.q, start.p)));
    }
    let potential = problem.effective_potential();
    let ([q, p], exp) = linear_run(&potential, energy, start.t, [start.q, start.p], t_end, config)?;
    Ok(PhaseState { t: t_end, q, p, scale_exp: start.scale_exp + exp })
}

/// `u(b, a)` stored as `m · 2^log2_scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m: [[f64; 2]; 2],
    pub log2_scale: i32,
}

impl TransferMatrix {
    pub fn det(&self) -> f64 {
        let d = self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0];
        d * 2f64.powi(2 * self.log2_scale)
    }

    /// `u · v`, up to the common scale factor.
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.m[0][0] * v[0] + self.m[0][1] * v[1], self.m[1][0] * v[0] + self.m[1][1] * v[1]]
    }
}

fn compact_levels(problem: &ProblemSpec) -> Result<(f64, f64)> {
    match (problem.left_tail, problem.right_tail) {
        (TailClass::ConstantLevel { level: l }, TailClass::ConstantLevel { level: r }) => Ok((l, r)),
        _ => Err(Error::Oracle("the transfer-matrix check needs constant tails on both sides".into())),
    }
}

fn oracle_interval(problem: &ProblemSpec) -> Result<(f64, f64)> {
    if let Some(ab) = problem.explicit_interval() {
        return Ok(ab);
    }
    match problem.potential.compact_support() {
        Some((l, r, _, _)) if r > l => Ok((l, r)),
        Some((l, r, _, _)) => Ok((l - 1.0, r + 1.0)),
        None => Err(Error::Oracle("problem needs an explicit interval".into())),
    }
}

/// Transfer matrix across the problem's interval (or across the
/// non-constant region when the interval is automatic).
pub fn transfer_matrix(problem: &ProblemSpec, energy: f64, config: &IntegratorConfig) -> Result<TransferMatrix> {
    let (a, b) = oracle_interval(problem)?;
    let potential = problem.effective_potential();
    let ([q1, p1, q2, p2], exp) = linear_run(&potential, energy, a, [1.0, 0.0, 0.0, 1.0], b, config)?;
    Ok(TransferMatrix { m: [[q1, q2], [p1, p2]], log2_scale: exp })
}

/// Signed sine of the angle between `u·e₊` and `e₋`; vanishes at the
/// eigenvalues.
pub fn eigencondition_mismatch(problem: &ProblemSpec, energy: f64, config: &IntegratorConfig) -> Result<f64> {
    let (v_left, v_right) = compact_levels(problem)?;
    if !(energy < v_left.min(v_right)) {
        return Err(Error::NotBelowThreshold { energy, threshold: v_left.min(v_right) });
    }
    let u = transfer_matrix(problem, energy, config)?;
    let w = u.apply([1.0, (2.0 * (v_left - energy)).sqrt()]);
    let e_minus = [1.0, -(2.0 * (v_right - energy)).sqrt()];
    let cross = w[0] * e_minus[1] - w[1] * e_minus[0];
    Ok(cross / (w[0].hypot(w[1]) * e_minus[0].hypot(e_minus[1])))
}

/// Roots of the eigencondition in `[e_min, e_max]`, located by sign
/// changes on `samples` uniform energies and refined by bisection.
pub fn eigencondition_roots(
    problem: &ProblemSpec,
    e_min: f64,
    e_max: f64,
    samples: usize,
    config: &IntegratorConfig,
) -> Result<Vec<f64>> {
    if !(e_min < e_max) || samples < 2 {
        return Err(Error::EnergyRange { e_min, e_max });
    }
    let f = |e: f64| eigencondition_mismatch(problem, e, config);
    let grid: Vec<f64> = (0..samples).map(|i| e_min + (e_max - e_min) * i as f64 / (samples - 1) as f64).collect();
    let values = grid.iter().map(|&e| f(e)).collect::<Result<Vec<f64>>>()?;
    let mut roots = Vec::new();
    for i in 0..samples - 1 {
        let (mut lo, mut hi) = (grid[i], grid[i + 1]);
        let (flo, fhi) = (values[i], values[i + 1]);
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        let s_lo = flo.signum();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid)?.signum() == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    Ok(roots)
}

/// Eigenvalues of a symmetric tridiagonal matrix below `ceiling`, by
/// Sturm-count bisection.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - x - if i == 0 { 0.0 } else { coupling / d };
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin_lower(&self) -> f64 {
        (0..self.diag.len())
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = self.off.get(i).map_or(0.0, |v| v.abs());
                self.diag[i] - left - right
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn eigenvalues_below(&self, ceiling: f64) -> Vec<f64> {
        let n = self.count_below(ceiling);
        let floor = self.gershgorin_lower() - 1.0;
        (0..n)
            .map(|k| {
                let (mut lo, mut hi) = (floor, ceiling);
                while hi - lo > 1e-15 * (lo.abs() + hi.abs()).max(1e-300) {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.count_below(mid) > k {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }
}

/// Finite-difference spectrum on two grids and its extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct FdSpectrum {
    /// Extrapolated eigenvalues `(4 E_fine − E_coarse) / 3`.
    pub energies: Vec<f64>,
    /// `|extrapolated − fine|` per level.
    pub error_estimates: Vec<f64>,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    /// Dirichlet ends.
    pub domain: (f64, f64),
}

// Four-point Gauss–Legendre on [−1, 1].
const GL_NODES: [f64; 4] =
    [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GL_WEIGHTS: [f64; 4] =
    [0.347_854_845_137_453_9, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_9];

fn gauss_average(potential: &PotentialSpec, lo: f64, hi: f64) -> Result<f64> {
    let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let mut total = 0.0;
    for (x, wt) in GL_NODES.iter().zip(GL_WEIGHTS) {
        total += wt * potential.evaluate(c + r * x)?;
    }
    Ok(0.5 * total)
}

/// Nodes of a piecewise-uniform grid with a node on every breakpoint inside
/// `(left, right)`. Each segment gets cells in proportion to its length,
/// times `refine`.
fn fd_nodes(breaks: &[f64], left: f64, right: f64, grid_size: usize, refine: usize) -> Vec<f64> {
    let mut edges = vec![left];
    edges.extend(breaks.iter().copied().filter(|&b| b > left && b < right));
    edges.push(right);
    edges.dedup();
    let total = right - left;
    let mut nodes = vec![left];
    for w in edges.windows(2) {
        let cells = ((grid_size as f64 * (w[1] - w[0]) / total).round() as usize).max(1) * refine;
        let h = (w[1] - w[0]) / cells as f64;
        nodes.extend((1..cells).map(|i| w[0] + i as f64 * h));
        nodes.push(w[1]);
    }
    nodes
}

/// Lumped-mass three-point discretization, symmetrized. Point values of `V`
/// are used except on breakpoint nodes, which take the dual-cell average.
fn fd_matrix(potential: &PotentialSpec, nodes: &[f64]) -> Result<Tridiagonal> {
    let breaks = potential.breakpoints();
    let interior = nodes.len() - 2;
    let mut diag = Vec::with_capacity(interior);
    let mut mass = Vec::with_capacity(interior);
    for i in 1..=interior {
        let (hl, hr) = (nodes[i] - nodes[i - 1], nodes[i + 1] - nodes[i]);
        let m = 0.5 * (hl + hr);
        let t = nodes[i];
        let v = if breaks.contains(&t) {
            (0.5 * hl * gauss_average(potential, t - 0.5 * hl, t)?
                + 0.5 * hr * gauss_average(potential, t, t + 0.5 * hr)?)
                / m
        } else {
            potential.evaluate(t)?
        };
        diag.push(0.5 * (1.0 / hl + 1.0 / hr) / m + v);
        mass.push(m);
    }
    let off = (1..interior).map(|i| -0.5 / (nodes[i + 1] - nodes[i]) / (mass[i - 1] * mass[i]).sqrt()).collect();
    Ok(Tridiagonal { diag, off })
}

/// Finite-difference eigenvalues below `ceiling` of `−½ψ'' + Vψ` on
/// `[left, right]` with `ψ = 0` at both ends. Roughly `grid_size` cells
/// are spread over the segments between breakpoints; the fine grid halves
/// every cell, and the two spectra are extrapolated in `h²`.
pub fn fd_eigenvalues_on(
    potential: &PotentialSpec,
    left: f64,
    right: f64,
    ceiling: f64,
    grid_size: usize,
) -> Result<FdSpectrum> {
    if grid_size < 64 {
        return Err(Error::Oracle(format!("grid_size must be at least 64, got {grid_size}")));
    }
    if !(left < right && left.is_finite() && right.is_finite()) {
        return Err(Error::Oracle(format!("invalid finite-difference domain [{left}, {right}]")));
    }
    let breaks = potential.breakpoints();
    let solve = |refine: usize| -> Result<Vec<f64>> {
        let nodes = fd_nodes(&breaks, left, right, grid_size, refine);
        Ok(fd_matrix(potential, &nodes)?.eigenvalues_below(ceiling))
    };
    let (coarse, fine) = rayon::join(|| solve(1), || solve(2));
    let (coarse, fine) = (coarse?, fine?);
    let n = coarse.len().min(fine.len());
    let energies: Vec<f64> = (0..n).map(|k| (4.0 * fine[k] - coarse[k]) / 3.0).collect();
    let error_estimates = (0..n).map(|k| (energies[k] - fine[k]).abs()).collect();
    Ok(FdSpectrum { energies, error_estimates, coarse, fine, domain: (left, right) })
}

/// WKB decay exponent the eigenfunctions must accumulate beyond the
/// classically allowed region before the Dirichlet wall.
const DECAY_ACTION: f64 = 25.0;

/// Walks outward from `start` until `∫√(2(V − E))` reaches
/// [`DECAY_ACTION`] or `max_extent` has been covered.
fn decay_end(potential: &PotentialSpec, energy: f64, start: f64, direction: f64, max_extent: f64) -> Result<f64> {
    const STEPS: usize = 20_000;
    let h = max_extent / STEPS as f64;
    let mut action = 0.0;
    let mut t = start;
    for _ in 0..STEPS {
        let mid = t + 0.5 * direction * h;
        action += (2.0 * (potential.evaluate(mid)? - energy)).max(0.0).sqrt() * h;
        t += direction * h;
        if action >= DECAY_ACTION {
            break;
        }
    }
    Ok(t)
}

/// Finite-difference oracle for a problem: the working interval (explicit,
/// or the non-constant region / turning region otherwise) is extended on
/// each side until the states below `ceiling` have decayed by `e^-25`.
/// Half-line problems put the left wall at the origin.
pub fn fd_eigenvalues(problem: &ProblemSpec, ceiling: f64, grid_size: usize) -> Result<FdSpectrum> {
    let threshold = problem.threshold();
    if !(ceiling < threshold) {
        return Err(Error::NotBelowThreshold { energy: ceiling, threshold });
    }
    let potential = problem.effective_potential();
    let (a, b) = match problem.explicit_interval() {
        Some(ab) => ab,
        None => match potential.compact_support() {
            Some((l, r, _, _)) => (l, r),
            None => turning_region(&potential, problem.domain, ceiling)?,
        },
    };
    let width = (b - a).max(1.0);
    let cap = (10.0 * width).max(50.0);
    let left = match problem.domain {
        Domain::HalfLine { .. } => 0.0,
        Domain::WholeLine => decay_end(&potential, ceiling, a, -1.0, cap)?,
    };
    let right = decay_end(&potential, ceiling, b, 1.0, cap)?;
    let interior = grid_size;
    if matches!(problem.domain, Domain::HalfLine { .. }) {
        fd_half_line(&potential, right, ceiling, interior)
    } else {
        fd_eigenvalues_on(&potential, left, right, ceiling, interior)
    }
}

fn fd_half_line(potential: &PotentialSpec, right: f64, ceiling: f64, grid_size: usize) -> Result<FdSpectrum> {
    fd_eigenvalues_on(potential, 0.0, right, ceiling, grid_size)
}

/// Smallest interval containing every point with `V(t) ≤ energy`, found by
/// marching outward from the potential minimum region.
fn turning_region(potential: &PotentialSpec, domain: Domain, energy: f64) -> Result<(f64, f64)> {
    let allowed = |t: f64| -> Result<bool> { Ok(potential.evaluate(t)? <= energy) };
    let mut right = 1.0;
    while allowed(right)? || right < 1.0 {
        right *= 1.25;
        if right > 1e7 {
            return Err(Error::Oracle("no turning point on the right".into()));
        }
    }
    let left = match domain {
        Domain::HalfLine { .. } => 0.0,
        Domain::WholeLine => {
            let mut left = -1.0;
            while allowed(left)? {
                left *= 1.25;
                if left < -1e7 {
                    return Err(Error::Oracle("no turning point on the left".into()));
                }
            }
            left
        }
    };
    Ok((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(left: f64, right: f64) -> ProblemSpec {
        ProblemSpec::new(PotentialSpec::SquareWell { depth: 0.0, left, right }, crate::Domain::WholeLine).unwrap()
    }

    #[test]
    fn free_growth_along_expanding_direction() {
        let p = flat(0.0, 3.0);
        let cfg = IntegratorConfig::default();
        let end = propagate_phase(&p, -0.5, PhaseState::new(0.0, 1.0, 1.0), 3.0, &cfg).unwrap();
        let g = 3f64.exp();
        assert!((end.q - g).abs() < 1e-10 * g);
        assert!((end.p - g).abs() < 1e-10 * g);
    }

    #[test]
    fn free_transfer_matrix_is_hyperbolic() {
        let (s, e) = (2.5f64, -0.8f64);
        let k = (2.0 * e.abs()).sqrt();
        let u = transfer_matrix(&flat(0.0, s), e, &IntegratorConfig::default()).unwrap();
        let want = [[(k * s).cosh(), (k * s).sinh() / k], [k * (k * s).sinh(), (k * s).cosh()]];
        for (got, want) in u.m.iter().flatten().zip(want.iter().flatten()) {
            assert!((got - want).abs() < 1e-10 * want.abs().max(1.0));
        }
        assert!((u.det() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rescaling_keeps_direction() {
        let p = flat(0.0, 400.0).with_interval(0.0, 400.0).unwrap();
        let cfg = IntegratorConfig::default();
        let end = propagate_phase(&p, -2.0, PhaseState::new(0.0, 1.0, 0.3), 400.0, &cfg).unwrap();
        assert!(end.scale_exp > 0);
        assert!(end.q.is_finite());
        // Growth direction (1, 2) takes over.
        assert!((end.angle_mod_pi() - 2f64.atan()).abs() < 1e-12);
        let scaled = propagate_phase(&p, -2.0, PhaseState::new(0.0, 1e-200, 3e-201), 400.0, &cfg).unwrap();
        assert!((scaled.angle_mod_pi() - end.angle_mod_pi()).abs() < 1e-12);
    }

    #[test]
    fn tridiagonal_counts_and_values() {
        // Free particle matrix [2 −1; −1 2 ...] has eigenvalues 2 − 2cos(kπ/(n+1)).
        let n = 50;
        let m = Tridiagonal { diag: vec![2.0; n], off: vec![-1.0; n - 1] };
        let want: Vec<f64> = (1..=n).map(|k| 2.0 - 2.0 * (k as f64 * PI / (n + 1) as f64).cos()).collect();
        let got = m.eigenvalues_below(1.1);
        assert_eq!(got.len(), want.iter().filter(|&&w| w < 1.1).count());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-13);
        }
        assert_eq!(m.count_below(-1.0), 0);
        assert_eq!(m.count_below(5.0), n);
    }

    #[test]
    fn particle_in_a_box() {
        let v = PotentialSpec::SquareWell { depth: 0.0, left: 0.0, right: PI };
        let fd = fd_eigenvalues_on(&v, 0.0, PI, 8.5, 400).unwrap();
        assert_eq!(fd.energies.len(), 4);
        for (k, (e, err)) in fd.energies.iter().zip(&fd.error_estimates).enumerate() {
            let exact = ((k + 1) * (k + 1)) as f64 / 2.0;
            assert!((e - exact).abs() <= 2.0 * err + 1e-9, "level {k}: {e} vs {exact}");
            assert!((fd.fine[k] - exact).abs() < (fd.coarse[k] - exact).abs());
        }
    }

    #[test]
    fn hydrogen_ground_state() {
        let c = PotentialSpec::Coulomb { charge: 1.0 };
        let fd = fd_eigenvalues_on(&c, 0.0, 200.0, -0.1, 40_000).unwrap();
        assert!((fd.energies[0] + 0.5).abs() < 1e-6);
        assert!((fd.energies[1] + 0.125).abs() < 1e-6);
        // A wall at t₀ instead of the origin lifts E₀ by ½u'(0)²t₀ = 2t₀.
        let walled = fd_eigenvalues_on(&c, 1e-4, 200.0, -0.1, 40_000).unwrap();
        assert!((walled.energies[0] - fd.energies[0] - 2e-4).abs() < 1e-6);
    }

    #[test]
    fn grid_size_floor() {
        let v = PotentialSpec::SquareWell { depth: 0.0, left: 0.0, right: 1.0 };
        assert!(fd_eigenvalues_on(&v, 0.0, 1.0, 10.0, 63).is_err());
    }

    #[test]
    fn reduce_mod_pi_range() {
        for a in [-7.0, -PI / 2.0, 0.3, PI / 2.0, 11.0] {
            let r = reduce_mod_pi(a);
            assert!(r > -PI / 2.0 && r <= PI / 2.0);
            let k = (a - r) / PI;
            assert!((k - k.round()).abs() < 1e-12);
        }
    }
}
