//! Dormand–Prince 5(4) stepper with embedded error control for small
//! fixed-size systems.

use crate::error::{Error, Result};

/// Step-size control settings for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    pub initial_step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-12, abs_tol: 1e-12, max_steps: 1_000_000, initial_step: 1e-3 }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerances must be positive (rel_tol = {}, abs_tol = {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::InvalidConfig(format!("initial_step must be positive, got {}", self.initial_step)));
        }
        Ok(())
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Fifth-order weights minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Running state of one integration: the step counter and last step size
/// are carried across segments.
#[derive(Debug, Clone)]
pub(crate) struct Stepper {
    cfg: IntegratorConfig,
    pub steps: usize,
    h: f64,
}

impl Stepper {
    pub fn new(cfg: &IntegratorConfig) -> Self {
        Self { cfg: *cfg, steps: 0, h: cfg.initial_step }
    }

    /// Integrates `y' = rhs(t, y)` from `t0` to `t1` (either direction).
    /// `after_step` may rescale the state after each accepted step and
    /// returns `true` if it changed anything.
    pub fn run<const N: usize, F, G>(
        &mut self,
        rhs: &mut F,
        t0: f64,
        y0: [f64; N],
        t1: f64,
        after_step: &mut G,
    ) -> Result<[f64; N]>
    where
        F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
        G: FnMut(&mut [f64; N]) -> bool,
    {
        let span = t1 - t0;
        if span == 0.0 {
            return Ok(y0);
        }
        let dir = span.signum();
        let mut t = t0;
        let mut y = y0;
        let mut h = self.h.abs().min(span.abs());
        let mut k1 = rhs(t, &y)?;
        let (rtol, atol) = (self.cfg.rel_tol, self.cfg.abs_tol);

        loop {
            let remaining = (t1 - t) * dir;
            if remaining <= 0.0 {
                break;
            }
            if self.steps >= self.cfg.max_steps {
                return Err(Error::IntegrationFailure { t, steps: self.steps });
            }
            let last = h >= remaining * (1.0 - 1e-12);
            if last {
                h = remaining;
            }
            let hs = h * dir;

            let k2 = rhs(t + C2 * hs, &axpy(&y, &[(A21, &k1)], hs))?;
            let k3 = rhs(t + C3 * hs, &axpy(&y, &[(A31, &k1), (A32, &k2)], hs))?;
            let k4 = rhs(t + C4 * hs, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], hs))?;
            let k5 = rhs(t + C5 * hs, &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], hs))?;
            let k6 = rhs(t + hs, &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], hs))?;
            let y_new = axpy(&y, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], hs);
            let t_new = if last { t1 } else { t + hs };
            let k7 = rhs(t_new, &y_new)?;
            self.steps += 1;

            let mut err = 0.0f64;
            for i in 0..N {
                let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = atol + rtol * y[i].abs().max(y_new[i].abs());
                err = err.max((e / sc).abs());
            }
            if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                if h <= f64::EPSILON * t.abs().max(1.0) {
                    return Err(Error::IntegrationFailure { t, steps: self.steps });
                }
                h *= 0.1;
                continue;
            }

            if err <= 1.0 {
                t = t_new;
                y = y_new;
                k1 = k7;
                if after_step(&mut y) {
                    k1 = rhs(t, &y)?;
                }
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last {
                    h *= fac;
                    self.h = h;
                }
            } else {
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                if h <= f64::EPSILON * t.abs().max(1.0) {
                    return Err(Error::IntegrationFailure { t, steps: self.steps });
                }
            }
        }
        Ok(y)
    }
}

/// Integrates from `t0` to `t1`, landing exactly on each interior split
/// point (sorted in the direction of travel) so no step straddles one.
pub(crate) fn integrate_through<const N: usize, F>(
    rhs: &mut F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    splits: &[f64],
    cfg: &IntegratorConfig,
) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut stepper = Stepper::new(cfg);
    let mut t = t0;
    let mut y = y0;
    for &s in splits.iter().chain(std::iter::once(&t1)) {
        y = stepper.run(rhs, t, y, s, &mut |_| false)?;
        t = s;
    }
    Ok(y)
}

/// Interior breakpoints strictly between `t0` and `t1`, ordered from `t0`.
pub(crate) fn splits_between(breakpoints: &[f64], t0: f64, t1: f64) -> Vec<f64> {
    let (lo, hi) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
    let mut inside: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > lo && b < hi).collect();
    inside.sort_by(f64::total_cmp);
    inside.dedup();
    if t0 > t1 {
        inside.reverse();
    }
    inside
}
