//! Boundary angles.
//!
//! A decaying solution near one end of the domain is written `ψ = exp ∫f`,
//! where `f = ψ'/ψ = tan α` solves
//!
//! ```text
//! f' + f² = 2[V_eff(t) − E]
//! ```
//!
//! For constant tails `f` is an exact constant. For the oscillator, Coulomb,
//! Yukawa and quark tails and for the `t → 0₊` singularities it is generated
//! as an asymptotic series by matching powers in the identity above. The
//! series are asymptotic rather than convergent, so they are evaluated with
//! smallest-term truncation.

mod laurent;

use std::fmt;

use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::problem::{ProblemSpec, TailClass};
pub(crate) use laurent::Laurent;

pub const DEFAULT_TERMS: usize = 16;

/// Angle of the phase vector `(1, f)`, in `(−π/2, π/2)`.
pub fn cue_angle(f: f64) -> f64 {
    f.atan()
}

/// Boundary angles at both ends of the working interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryAngles {
    /// Direction of the solution decaying to the left, at `a`.
    pub alpha_plus_at_a: f64,
    /// Direction of the solution decaying to the right, at `b`.
    pub alpha_minus_at_b: f64,
    /// `alpha_plus_at_a − alpha_minus_at_b`.
    pub delta: f64,
}

impl BoundaryAngles {
    fn new(alpha_plus_at_a: f64, alpha_minus_at_b: f64) -> Self {
        Self { alpha_plus_at_a, alpha_minus_at_b, delta: alpha_plus_at_a - alpha_minus_at_b }
    }
}

/// Exact limiting angles for a potential that is constant outside `[a, b]`.
pub fn compact_support_angles(energy: f64, v_left: f64, v_right: f64) -> Result<BoundaryAngles> {
    let threshold = v_left.min(v_right);
    if !(energy < threshold) {
        return Err(Error::NotBelowThreshold { energy, threshold });
    }
    Ok(BoundaryAngles::new(cue_angle((2.0 * (v_left - energy)).sqrt()), cue_angle(-(2.0 * (v_right - energy)).sqrt())))
}

/// Where an asymptotic series is anchored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Asymptote {
    Origin,
    PlusInfinity,
    MinusInfinity,
}

impl fmt::Display for Asymptote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Origin => "t -> 0+",
            Self::PlusInfinity => "t -> +inf",
            Self::MinusInfinity => "t -> -inf",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeadingTerm {
    /// `slope · s`
    LinearTerm { slope: f64 },
    /// `value`
    ConstantTerm { value: f64 },
    /// `residue / s`
    PoleTerm { residue: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVariable {
    /// `Σ aᵢ s^(−i)`, used at infinity.
    InverseT,
    /// `Σ aᵢ s^i`, used at the origin.
    DirectT,
}

/// An asymptotic solution `f(s) = leading + Σ aᵢ s^(∓i)` of the Riccati
/// identity. `s = t` except for the left oscillator tail, where `s = −t`
/// and the physical cue is `−f(−t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CueSeries {
    pub leading: LeadingTerm,
    pub coeffs: Vec<f64>,
    pub variable: SeriesVariable,
}

impl CueSeries {
    pub fn n_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn power(&self, i: usize) -> i32 {
        match self.variable {
            SeriesVariable::InverseT => -(i as i32),
            SeriesVariable::DirectT => i as i32,
        }
    }

    pub(crate) fn laurent(&self) -> Laurent {
        let lead = match self.leading {
            LeadingTerm::LinearTerm { slope } => (1, slope),
            LeadingTerm::ConstantTerm { value } => (0, value),
            LeadingTerm::PoleTerm { residue } => (-1, residue),
        };
        Laurent::from_terms(
            std::iter::once(lead).chain(self.coeffs.iter().enumerate().map(|(i, &c)| (self.power(i), c))),
        )
    }

    pub fn value(&self, s: f64) -> f64 {
        self.laurent().eval(s)
    }

    pub fn derivative(&self, s: f64) -> f64 {
        self.laurent().derivative().eval(s)
    }

    /// The first `n` coefficients.
    pub fn truncated(&self, n: usize) -> CueSeries {
        CueSeries { coeffs: self.coeffs[..n.min(self.coeffs.len())].to_vec(), ..self.clone() }
    }

    /// Number of coefficients kept by the smallest-term rule at `s`: terms
    /// are added while their magnitudes keep shrinking. Zero coefficients
    /// are skipped when comparing.
    pub fn optimal_terms(&self, s: f64) -> usize {
        let mut kept = 0;
        let mut previous = f64::INFINITY;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                kept = i + 1;
                continue;
            }
            let size = (c * s.powi(self.power(i))).abs();
            if size > previous {
                break;
            }
            previous = size;
            kept = i + 1;
        }
        kept
    }

    pub fn truncated_at(&self, s: f64) -> CueSeries {
        self.truncated(self.optimal_terms(s))
    }
}

/// The part of `2(V_eff − E)` that is not a finite Laurent polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Remainder {
    None,
    /// `−2 Σ_{m > after} (−λ)^m s^(m−1) / m!`
    ScreenedSeries {
        lambda: f64,
        after: usize,
    },
    /// `−2 e^(−λs) / s`
    ScreenedTail {
        lambda: f64,
    },
}

impl Remainder {
    fn at(&self, s: f64) -> f64 {
        match *self {
            Self::None => 0.0,
            Self::ScreenedTail { lambda } => -2.0 * (-lambda * s).exp() / s,
            Self::ScreenedSeries { lambda, after } => {
                let x = -lambda * s;
                let mut term = 1.0;
                for m in 1..=after + 1 {
                    term *= x / m as f64;
                }
                if x.abs() < 2.0 {
                    let mut sum = 0.0;
                    let mut m = after + 1;
                    while m < after + 400 {
                        sum += term;
                        if term.abs() <= 1e-18 * sum.abs() {
                            break;
                        }
                        m += 1;
                        term *= x / m as f64;
                    }
                    -2.0 * sum / s
                } else {
                    let mut partial = 0.0;
                    let mut t = 1.0;
                    for m in 0..=after {
                        partial += t;
                        t *= x / (m + 1) as f64;
                    }
                    -2.0 * (x.exp() - partial) / s
                }
            }
        }
    }
}

/// `2(V_eff − E)` expanded around an asymptote, in the variable `s`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RiccatiTarget {
    laurent: Laurent,
    remainder: Remainder,
}

impl RiccatiTarget {
    pub fn build(potential: &PotentialSpec, l: u32, energy: f64, at: Asymptote, order: usize) -> Result<Self> {
        use Asymptote::*;
        use PotentialSpec as P;
        let barrier = l as f64 * (l as f64 + 1.0);
        let mut terms = vec![(-2, barrier), (0, -2.0 * energy)];
        let mut remainder = Remainder::None;
        match (potential, at) {
            (P::Coulomb { charge }, Origin | PlusInfinity) => terms.push((-1, -2.0 * charge)),
            (P::Yukawa { screening_lambda }, Origin) => {
                let mut c = -2.0;
                for m in 0..=order {
                    terms.push((m as i32 - 1, c));
                    c *= -screening_lambda / (m + 1) as f64;
                }
                remainder = Remainder::ScreenedSeries { lambda: *screening_lambda, after: order };
            }
            (P::Yukawa { screening_lambda }, PlusInfinity) => {
                remainder = Remainder::ScreenedTail { lambda: *screening_lambda };
            }
            (P::QuarkHybrid { omega }, Origin | PlusInfinity) => {
                terms.extend([(-1, -2.0), (2, omega * omega)]);
            }
            (P::HybridOscillator { omega_right, .. }, PlusInfinity) if l == 0 => {
                terms.push((2, omega_right * omega_right));
            }
            (P::HybridOscillator { omega_left, .. }, MinusInfinity) if l == 0 => {
                terms.push((2, omega_left * omega_left));
            }
            (p, at) => {
                return Err(Error::CueMisuse(format!(
                    "no series cue for the {} potential (l = {l}) at {at}",
                    p.family()
                )))
            }
        }
        Ok(Self { laurent: Laurent::from_terms(terms), remainder })
    }

    /// `f' + f² − 2(V_eff − E)` at `s` for the given (already truncated) series.
    pub fn residual(&self, series: &CueSeries, s: f64) -> f64 {
        let f = series.laurent();
        let polynomial = &(&f.derivative() + &(&f * &f)) - &self.laurent;
        (polynomial.eval(s) - self.remainder.at(s)).abs()
    }

    /// Solves for the first `n_terms` coefficients of the decaying series.
    pub fn solve(&self, at: Asymptote, n_terms: usize) -> Result<CueSeries> {
        if n_terms < 2 {
            return Err(Error::CueMisuse(format!("a cue series needs at least 2 terms, got {n_terms}")));
        }
        let t = &self.laurent;
        match at {
            Asymptote::Origin => self.solve_pole(n_terms),
            _ if t.coeff(2) > 0.0 => self.solve_linear(n_terms),
            _ => self.solve_constant(n_terms),
        }
    }

    // f = −ωs + Σ aᵢ s^(−i)
    fn solve_linear(&self, n: usize) -> Result<CueSeries> {
        let target = &self.laurent;
        if target.high() > Some(2) {
            return Err(Error::CueMisuse("target grows faster than s²".into()));
        }
        let omega = target.coeff(2).sqrt();
        let h = |k: usize| target.coeff(1 - k as i32);
        let mut a = vec![0.0; n];
        a[0] = -target.coeff(1) / (2.0 * omega);
        for s in 1..n {
            let mut num = -h(s);
            if s == 1 {
                num -= omega;
            } else {
                num -= (s - 2) as f64 * a[s - 2];
            }
            num += (0..s).map(|i| a[i] * a[s - 1 - i]).sum::<f64>();
            a[s] = num / (2.0 * omega);
        }
        Ok(CueSeries {
            leading: LeadingTerm::LinearTerm { slope: -omega },
            coeffs: a,
            variable: SeriesVariable::InverseT,
        })
    }

    // f = −k + Σ_{i≥1} cᵢ s^(−i)
    fn solve_constant(&self, n: usize) -> Result<CueSeries> {
        let target = &self.laurent;
        let k2 = target.coeff(0);
        if target.high() > Some(0) {
            return Err(Error::CueMisuse("constant-leading cue needs a bounded target".into()));
        }
        if !(k2 > 0.0) {
            return Err(Error::NotBelowThreshold { energy: -k2 / 2.0, threshold: 0.0 });
        }
        let k = k2.sqrt();
        let h = |s: usize| target.coeff(-(s as i32));
        let mut c = vec![0.0; n];
        for s in 1..n {
            let square: f64 = (1..s).map(|i| c[i] * c[s - i]).sum();
            c[s] = (square - (s - 1) as f64 * c[s - 1] - h(s)) / (2.0 * k);
        }
        Ok(CueSeries {
            leading: LeadingTerm::ConstantTerm { value: -k },
            coeffs: c,
            variable: SeriesVariable::InverseT,
        })
    }

    // f = r/s + Σ aᵢ sⁱ
    fn solve_pole(&self, n: usize) -> Result<CueSeries> {
        let target = &self.laurent;
        if target.low() < Some(-2) {
            return Err(Error::CueMisuse("singularity stronger than 1/t² at the origin".into()));
        }
        let r = 0.5 + (0.25 + target.coeff(-2)).sqrt();
        let mut a = vec![0.0; n];
        for s in 0..n {
            let square: f64 = if s == 0 { 0.0 } else { (0..s).map(|i| a[i] * a[s - 1 - i]).sum() };
            a[s] = (target.coeff(s as i32 - 1) - square) / (s as f64 + 2.0 * r);
        }
        Ok(CueSeries { leading: LeadingTerm::PoleTerm { residue: r }, coeffs: a, variable: SeriesVariable::DirectT })
    }
}

fn target_order(n_terms: usize) -> usize {
    n_terms + 8
}

/// Power-matched cue series for `potential` (with barrier `l`) at `at`.
pub fn cue_series(potential: &PotentialSpec, l: u32, energy: f64, at: Asymptote, n_terms: usize) -> Result<CueSeries> {
    RiccatiTarget::build(potential, l, energy, at, target_order(n_terms))?.solve(at, n_terms)
}

/// Right cue of `½ω²t²`, `f = −ωt + Σ aᵢ t^(−i)`.
pub fn oscillator_cue_coeffs(omega: f64, energy: f64, n_terms: usize) -> Result<CueSeries> {
    if !(omega > 0.0) {
        return Err(Error::CueMisuse(format!("oscillator cue needs omega > 0, got {omega}")));
    }
    let p = PotentialSpec::HybridOscillator { omega_left: omega, omega_right: omega };
    cue_series(&p, 0, energy, Asymptote::PlusInfinity, n_terms)
}

/// Origin cue of `−1/t` with barrier `l`, `f = (l+1)/t + Σ aᵢ tⁱ`.
pub fn coulomb_zero_cue_coeffs(l: u32, energy: f64, n_terms: usize) -> Result<CueSeries> {
    cue_series(&PotentialSpec::Coulomb { charge: 1.0 }, l, energy, Asymptote::Origin, n_terms)
}

/// Origin cue of `−e^(−λt)/t` with barrier `l`.
pub fn yukawa_zero_cue_coeffs(l: u32, energy: f64, lambda: f64, n_terms: usize) -> Result<CueSeries> {
    let p = PotentialSpec::Yukawa { screening_lambda: lambda };
    p.validate()?;
    cue_series(&p, l, energy, Asymptote::Origin, n_terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoulombTailForm {
    /// `−√(−2E − 2/t + l(l+1)/t²)`
    SquareRoot,
    /// `−√(2|E|) + Σ cᵢ t^(−i)` with `n_terms` coefficients (the constant
    /// counts as the first).
    Series { n_terms: usize },
}

/// Right cue of `−1/t` with barrier `l`.
pub fn coulomb_infinity_f(l: u32, energy: f64, t: f64, form: CoulombTailForm) -> Result<f64> {
    if !(energy < 0.0) {
        return Err(Error::NotBelowThreshold { energy, threshold: 0.0 });
    }
    match form {
        CoulombTailForm::SquareRoot => {
            let barrier = l as f64 * (l as f64 + 1.0);
            let radicand = -2.0 * energy - 2.0 / t + barrier / (t * t);
            if !(t > 0.0 && radicand > 0.0) {
                return Err(Error::CueRadicand { t });
            }
            Ok(-radicand.sqrt())
        }
        CoulombTailForm::Series { n_terms } => {
            let series =
                cue_series(&PotentialSpec::Coulomb { charge: 1.0 }, l, energy, Asymptote::PlusInfinity, n_terms)?;
            Ok(series.value(t))
        }
    }
}

const QUARK_TERMS: usize = 4;

fn quark(omega: f64) -> Result<PotentialSpec> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::CueMisuse(format!(
            "the quark cue needs omega > 0 (got {omega}); use the Coulomb cues instead"
        )));
    }
    Ok(PotentialSpec::QuarkHybrid { omega })
}

/// Origin cue of `−1/t + ½ω²t²` with barrier `l`, through the `t³` term.
pub fn quark_cue_zero(l: u32, energy: f64, omega: f64, t: f64) -> Result<f64> {
    Ok(cue_series(&quark(omega)?, l, energy, Asymptote::Origin, QUARK_TERMS)?.value(t))
}

/// Right cue of `−1/t + ½ω²t²` with barrier `l`, through the `t⁻³` term.
pub fn quark_cue_infinity(l: u32, energy: f64, omega: f64, t: f64) -> Result<f64> {
    Ok(cue_series(&quark(omega)?, l, energy, Asymptote::PlusInfinity, QUARK_TERMS)?.value(t))
}

fn expansion_point(series: &CueSeries, t: f64) -> Result<(Asymptote, f64)> {
    match series.variable {
        SeriesVariable::DirectT if t > 0.0 => Ok((Asymptote::Origin, t)),
        SeriesVariable::DirectT => Err(Error::CueMisuse(format!("origin cue checked at t = {t} <= 0"))),
        SeriesVariable::InverseT if t > 0.0 => Ok((Asymptote::PlusInfinity, t)),
        SeriesVariable::InverseT if t < 0.0 => Ok((Asymptote::MinusInfinity, -t)),
        SeriesVariable::InverseT => Err(Error::CueMisuse("tail cue checked at t = 0".into())),
    }
}

/// `|f' + f² − 2(V_eff − E)|` for the series as given, at `t_check`. A
/// negative `t_check` checks a series used as the left cue through
/// `f_left(t) = −f(−t)`.
pub fn verify_cue_residual(
    series: &CueSeries,
    potential: &PotentialSpec,
    l: u32,
    energy: f64,
    t_check: f64,
) -> Result<f64> {
    let (at, s) = expansion_point(series, t_check)?;
    let target = RiccatiTarget::build(potential, l, energy, at, target_order(series.n_terms()))?;
    Ok(target.residual(series, s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone)]
enum CueKind {
    Level { f: f64 },
    Series { series: CueSeries, target: RiccatiTarget, mirrored: bool },
}

/// The decaying cue at one end of a problem, for one energy.
#[derive(Debug, Clone)]
pub struct BoundaryCue {
    kind: CueKind,
}

impl BoundaryCue {
    pub fn new(problem: &ProblemSpec, side: Side, energy: f64, n_terms: usize) -> Result<Self> {
        let tail = match side {
            Side::Left => problem.left_tail,
            Side::Right => problem.right_tail,
        };
        let at = match (tail, side) {
            (TailClass::ConstantLevel { level }, _) => {
                if !(energy < level) {
                    return Err(Error::NotBelowThreshold { energy, threshold: level });
                }
                let k = (2.0 * (level - energy)).sqrt();
                let f = if side == Side::Left { k } else { -k };
                return Ok(Self { kind: CueKind::Level { f } });
            }
            (TailClass::OscillatorTail { .. }, Side::Left) => Asymptote::MinusInfinity,
            (t, Side::Left) if t.is_zero_singularity() => Asymptote::Origin,
            (t, Side::Right) if !t.is_zero_singularity() => Asymptote::PlusInfinity,
            (t, s) => {
                return Err(Error::CueMisuse(format!("tail {t} cannot sit on the {s:?} end")));
            }
        };
        let threshold = tail.threshold();
        if !(energy < threshold) {
            return Err(Error::NotBelowThreshold { energy, threshold });
        }
        let target = RiccatiTarget::build(&problem.potential, problem.l(), energy, at, target_order(n_terms))?;
        let series = target.solve(at, n_terms)?;
        Ok(Self { kind: CueKind::Series { series, target, mirrored: at == Asymptote::MinusInfinity } })
    }

    /// `ψ'/ψ` of the decaying solution at `t`.
    pub fn f(&self, t: f64) -> f64 {
        match &self.kind {
            CueKind::Level { f } => *f,
            CueKind::Series { series, mirrored, .. } => {
                let s = if *mirrored { -t } else { t };
                let v = series.truncated_at(s).value(s);
                if *mirrored {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn angle(&self, t: f64) -> f64 {
        cue_angle(self.f(t))
    }

    /// Riccati residual of the truncated series used by [`Self::f`].
    pub fn residual(&self, t: f64) -> f64 {
        match &self.kind {
            CueKind::Level { .. } => 0.0,
            CueKind::Series { series, target, mirrored } => {
                let s = if *mirrored { -t } else { t };
                target.residual(&series.truncated_at(s), s)
            }
        }
    }

    pub fn series(&self) -> Option<&CueSeries> {
        match &self.kind {
            CueKind::Level { .. } => None,
            CueKind::Series { series, .. } => Some(series),
        }
    }
}

/// Both boundary angles of a problem on `[a, b]`.
pub fn boundary_angles(problem: &ProblemSpec, energy: f64, a: f64, b: f64, n_terms: usize) -> Result<BoundaryAngles> {
    let left = BoundaryCue::new(problem, Side::Left, energy, n_terms)?;
    let right = BoundaryCue::new(problem, Side::Right, energy, n_terms)?;
    Ok(BoundaryAngles::new(left.angle(a), right.angle(b)))
}
