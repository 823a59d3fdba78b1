//! The angular form of the Riccati equation.
//!
//! With `q = ψ = ρ cos α` and `p = ψ' = ρ sin α` the Schrödinger equation
//! separates into
//!
//! ```text
//! α' = 2[V(t) − E] cos²α − sin²α
//! (ln ρ)' = [V(t) − E + ½] sin 2α
//! ```
//!
//! The angle equation is regular for every α, so α is integrated as a
//! continuous real number and never reduced modulo π. Node counts are read
//! straight off the unwrapped value.

use crate::error::{Error, Result};
pub use crate::ode::IntegratorConfig;
use crate::ode::{integrate_through, splits_between, Stepper};
use crate::potentials::PotentialSpec;
use crate::problem::{Domain, ProblemSpec};

/// Point on an angular trajectory. `log_rho` is present when the amplitude
/// was co-integrated and is relative to the starting point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularState {
    pub t: f64,
    pub alpha: f64,
    pub log_rho: Option<f64>,
}

#[inline]
pub(crate) fn angular_rate(v_minus_e: f64, alpha: f64) -> f64 {
    let (s, c) = alpha.sin_cos();
    2.0 * v_minus_e * c * c - s * s
}

#[inline]
pub(crate) fn log_amplitude_rate(v_minus_e: f64, alpha: f64) -> f64 {
    (v_minus_e + 0.5) * (2.0 * alpha).sin()
}

/// Right side of the angle equation at `t`.
pub fn angular_rhs(potential: &PotentialSpec, energy: f64, t: f64, alpha: f64) -> Result<f64> {
    Ok(angular_rate(potential.evaluate(t)? - energy, alpha))
}

/// Right side of the log-amplitude equation at `t`.
pub fn log_amplitude_rhs(potential: &PotentialSpec, energy: f64, t: f64, alpha: f64) -> Result<f64> {
    Ok(log_amplitude_rate(potential.evaluate(t)? - energy, alpha))
}

/// Angle rate in the rescaled chart `q = λρ cos α`, `p = λ⁻¹ρ sin α` with
/// `λ = (2|E|)^(−1/4)`, where the free decaying/growing directions sit at
/// `∓π/4` for every `E < 0`.
pub fn scaled_angular_rhs(potential: &PotentialSpec, energy: f64, t: f64, alpha: f64) -> Result<f64> {
    if !(energy < 0.0) {
        return Err(Error::ScaledEnergy { energy });
    }
    Ok(scaled_rate(potential.evaluate(t)?, energy, alpha))
}

#[inline]
pub(crate) fn scaled_rate(v: f64, energy: f64, alpha: f64) -> f64 {
    let k = (2.0 * energy.abs()).sqrt();
    let c = alpha.cos();
    k * (2.0 * alpha).cos() + (2.0 / energy.abs()).sqrt() * v * c * c
}

/// Integrates the angle (and optionally `ln ρ`) along a potential between two
/// arbitrary points, stopping at the potential's breakpoints and at every
/// requested output point. Works in either direction.
#[derive(Debug, Clone)]
pub struct AngularFlow<'a> {
    potential: &'a PotentialSpec,
    energy: f64,
    breakpoints: Vec<f64>,
    config: IntegratorConfig,
}

impl<'a> AngularFlow<'a> {
    pub fn new(potential: &'a PotentialSpec, energy: f64, config: &IntegratorConfig) -> Self {
        Self { potential, energy, breakpoints: potential.breakpoints(), config: *config }
    }

    /// Final state at `t1` starting from `alpha0` at `t0`.
    pub fn propagate(&self, t0: f64, alpha0: f64, t1: f64, with_amplitude: bool) -> Result<AngularState> {
        let splits = splits_between(&self.breakpoints, t0, t1);
        if with_amplitude {
            let mut rhs = |t: f64, y: &[f64; 2]| {
                let d = self.potential.evaluate(t)? - self.energy;
                Ok([angular_rate(d, y[0]), log_amplitude_rate(d, y[0])])
            };
            let y = integrate_through(&mut rhs, t0, [alpha0, 0.0], t1, &splits, &self.config)?;
            Ok(AngularState { t: t1, alpha: y[0], log_rho: Some(y[1]) })
        } else {
            let mut rhs = |t: f64, y: &[f64; 1]| Ok([angular_rate(self.potential.evaluate(t)? - self.energy, y[0])]);
            let y = integrate_through(&mut rhs, t0, [alpha0], t1, &splits, &self.config)?;
            Ok(AngularState { t: t1, alpha: y[0], log_rho: None })
        }
    }

    /// States (with amplitude) at each of `outputs`, which must be ordered
    /// in the direction of travel away from `t0`.
    pub fn trajectory(&self, t0: f64, alpha0: f64, outputs: &[f64]) -> Result<Vec<AngularState>> {
        let mut rhs = |t: f64, y: &[f64; 2]| {
            let d = self.potential.evaluate(t)? - self.energy;
            Ok([angular_rate(d, y[0]), log_amplitude_rate(d, y[0])])
        };
        let mut stepper = Stepper::new(&self.config);
        let mut out = Vec::with_capacity(outputs.len());
        let (mut t, mut y) = (t0, [alpha0, 0.0]);
        for &target in outputs {
            for s in splits_between(&self.breakpoints, t, target) {
                y = stepper.run(&mut rhs, t, y, s, &mut |_| false)?;
                t = s;
            }
            y = stepper.run(&mut rhs, t, y, target, &mut |_| false)?;
            t = target;
            out.push(AngularState { t, alpha: y[0], log_rho: Some(y[1]) });
        }
        Ok(out)
    }
}

/// Integrates the angle equation across the problem's (explicit) interval
/// `[a, b]`, starting from `alpha_start` at `a`.
pub fn integrate_angle(
    problem: &ProblemSpec,
    energy: f64,
    alpha_start: f64,
    config: &IntegratorConfig,
    with_amplitude: bool,
) -> Result<AngularState> {
    config.validate()?;
    if !alpha_start.is_finite() {
        return Err(Error::InvalidConfig(format!("alpha_start must be finite, got {alpha_start}")));
    }
    let (a, b) = problem.require_interval()?;
    let potential = problem.effective_potential();
    AngularFlow::new(&potential, energy, config).propagate(a, alpha_start, b, with_amplitude)
}

/// Chart `x = t/(1+t)` used for long half-line integrations.
pub fn chart_x(t: f64) -> f64 {
    t / (1.0 + t)
}

pub fn chart_t(x: f64) -> f64 {
    x / (1.0 - x)
}

/// `dt/dx` in the compactified chart.
pub fn chart_dt_dx(x: f64) -> f64 {
    let d = 1.0 - x;
    1.0 / (d * d)
}

/// Same as [`integrate_angle`] but integrates `dα/dx` in the chart
/// `x = t/(1+t)`, which maps `[0, ∞)` onto `[0, 1)`.
pub fn integrate_angle_transformed(
    problem: &ProblemSpec,
    energy: f64,
    alpha_start: f64,
    config: &IntegratorConfig,
) -> Result<AngularState> {
    config.validate()?;
    if !matches!(problem.domain, Domain::HalfLine { .. }) {
        return Err(Error::InvalidProblem("the t/(1+t) chart needs a half-line problem".into()));
    }
    let (a, b) = problem.require_interval()?;
    let potential = problem.effective_potential();
    let breaks: Vec<f64> = potential.breakpoints().into_iter().filter(|&t| t > 0.0).map(chart_x).collect();
    let (xa, xb) = (chart_x(a), chart_x(b));
    let mut rhs = |x: f64, y: &[f64; 1]| {
        let t = chart_t(x);
        Ok([angular_rate(potential.evaluate(t)? - energy, y[0]) * chart_dt_dx(x)])
    };
    let y = integrate_through(&mut rhs, xa, [alpha_start], xb, &splits_between(&breaks, xa, xb), config)?;
    Ok(AngularState { t: b, alpha: y[0], log_rho: None })
}

/// Integrates the rescaled angle equation over `[a, b]`. Energies and the
/// potential are taken relative to `level`, the common value of both tails.
pub fn integrate_scaled_angle(
    problem: &ProblemSpec,
    energy: f64,
    level: f64,
    alpha_start: f64,
    config: &IntegratorConfig,
) -> Result<AngularState> {
    config.validate()?;
    let e = energy - level;
    if !(e < 0.0) {
        return Err(Error::ScaledEnergy { energy: e });
    }
    let (a, b) = problem.require_interval()?;
    let potential = problem.effective_potential();
    let mut rhs = |t: f64, y: &[f64; 1]| Ok([scaled_rate(potential.evaluate(t)? - level, e, y[0])]);
    let splits = splits_between(&potential.breakpoints(), a, b);
    let y = integrate_through(&mut rhs, a, [alpha_start], b, &splits, config)?;
    Ok(AngularState { t: b, alpha: y[0], log_rho: None })
}
