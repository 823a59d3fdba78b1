//! Problem description: a potential, the domain it lives on, the asymptotic
//! class of each end, and the working interval.

use std::fmt;

use crate::error::{Error, Result};
use crate::potentials::{effective_radial, PotentialSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    WholeLine,
    /// Radial problem for `u(t) = t R(t)` with angular momentum `l`.
    HalfLine {
        l: u32,
    },
}

/// Asymptotic behaviour of the potential at one end of the domain. Decides
/// which cue supplies the boundary angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailClass {
    /// `V` equals `level` beyond the working interval.
    ConstantLevel {
        level: f64,
    },
    /// `V ~ ½ω²t²` as `|t| → ∞`.
    OscillatorTail {
        omega: f64,
    },
    /// Coulomb plus centrifugal barrier at `t → ∞`.
    CoulombTail {
        l: u32,
        charge: f64,
    },
    /// Screened Coulomb plus barrier at `t → ∞`.
    YukawaTail {
        l: u32,
        lambda: f64,
    },
    /// `−1/t + ½ω²t²` plus barrier at `t → ∞`.
    QuarkTail {
        omega: f64,
        l: u32,
    },
    /// `−Z/t` singularity with barrier at `t → 0₊`.
    CoulombZeroSingularity {
        l: u32,
        charge: f64,
    },
    YukawaZeroSingularity {
        l: u32,
        lambda: f64,
    },
    QuarkZeroSingularity {
        omega: f64,
        l: u32,
    },
}

impl TailClass {
    /// Energy above which no decaying cue exists at this end.
    pub fn threshold(&self) -> f64 {
        match self {
            Self::ConstantLevel { level } => *level,
            Self::CoulombTail { .. } | Self::YukawaTail { .. } => 0.0,
            Self::OscillatorTail { .. } | Self::QuarkTail { .. } => f64::INFINITY,
            Self::CoulombZeroSingularity { .. }
            | Self::YukawaZeroSingularity { .. }
            | Self::QuarkZeroSingularity { .. } => f64::INFINITY,
        }
    }

    pub fn is_zero_singularity(&self) -> bool {
        matches!(
            self,
            Self::CoulombZeroSingularity { .. }
                | Self::YukawaZeroSingularity { .. }
                | Self::QuarkZeroSingularity { .. }
        )
    }
}

impl fmt::Display for TailClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ConstantLevel { level } => write!(f, "constant({level})"),
            Self::OscillatorTail { omega } => write!(f, "oscillator(omega={omega})"),
            Self::CoulombTail { l, charge } => write!(f, "coulomb(l={l}, charge={charge})"),
            Self::YukawaTail { l, lambda } => write!(f, "yukawa(l={l}, lambda={lambda})"),
            Self::QuarkTail { omega, l } => write!(f, "quark(omega={omega}, l={l})"),
            Self::CoulombZeroSingularity { l, charge } => {
                write!(f, "coulomb_zero(l={l}, charge={charge})")
            }
            Self::YukawaZeroSingularity { l, lambda } => {
                write!(f, "yukawa_zero(l={l}, lambda={lambda})")
            }
            Self::QuarkZeroSingularity { omega, l } => write!(f, "quark_zero(omega={omega}, l={l})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    /// Chosen by the spectrum module from cue residuals.
    Auto,
    Explicit {
        a: f64,
        b: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub potential: PotentialSpec,
    pub domain: Domain,
    pub left_tail: TailClass,
    pub right_tail: TailClass,
    pub interval: Interval,
}

/// Tail classes implied by a potential on a domain.
pub fn natural_tails(potential: &PotentialSpec, domain: Domain) -> Result<(TailClass, TailClass)> {
    use PotentialSpec as P;
    use TailClass as T;
    match (domain, potential) {
        (_, P::EffectiveRadial { .. }) => Err(Error::InvalidProblem(
            "give the bare potential; the half-line domain adds the centrifugal barrier".into(),
        )),
        (Domain::WholeLine, P::HybridOscillator { omega_left, omega_right }) => {
            Ok((T::OscillatorTail { omega: *omega_left }, T::OscillatorTail { omega: *omega_right }))
        }
        (Domain::WholeLine, p) if p.is_half_line() => {
            Err(Error::InvalidProblem(format!("the {} potential is only defined on the half line", p.family())))
        }
        (Domain::WholeLine, p) => {
            let (_, _, left, right) =
                p.compact_support().expect("whole-line families other than the hybrid oscillator are compact");
            Ok((T::ConstantLevel { level: left }, T::ConstantLevel { level: right }))
        }
        (Domain::HalfLine { l }, P::Coulomb { charge }) => {
            Ok((T::CoulombZeroSingularity { l, charge: *charge }, T::CoulombTail { l, charge: *charge }))
        }
        (Domain::HalfLine { l }, P::Yukawa { screening_lambda }) => Ok((
            T::YukawaZeroSingularity { l, lambda: *screening_lambda },
            T::YukawaTail { l, lambda: *screening_lambda },
        )),
        (Domain::HalfLine { l }, P::QuarkHybrid { omega }) => {
            Ok((T::QuarkZeroSingularity { omega: *omega, l }, T::QuarkTail { omega: *omega, l }))
        }
        (Domain::HalfLine { .. }, p) => Err(Error::InvalidProblem(format!(
            "no cue at t -> 0+ is available for the {} potential on the half line",
            p.family()
        ))),
    }
}

impl ProblemSpec {
    /// Builds a problem with the tails implied by the potential and an
    /// automatically chosen interval.
    pub fn new(potential: PotentialSpec, domain: Domain) -> Result<Self> {
        potential.validate()?;
        let (left_tail, right_tail) = natural_tails(&potential, domain)?;
        Ok(Self { potential, domain, left_tail, right_tail, interval: Interval::Auto })
    }

    /// Replaces the tail classes; they must agree with the potential.
    pub fn with_tails(mut self, left: TailClass, right: TailClass) -> Result<Self> {
        let (want_left, want_right) = natural_tails(&self.potential, self.domain)?;
        for (side, got, want) in [("left", left, want_left), ("right", right, want_right)] {
            if got != want {
                return Err(Error::TailMismatch {
                    side,
                    tail: got.to_string(),
                    family: self.potential.family(),
                    expected: want.to_string(),
                });
            }
        }
        self.left_tail = left;
        self.right_tail = right;
        Ok(self)
    }

    pub fn with_interval(mut self, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidProblem(format!("interval needs a < b, got [{a}, {b}]")));
        }
        if matches!(self.domain, Domain::HalfLine { .. }) && a <= 0.0 {
            return Err(Error::InvalidProblem(format!("half-line problems must start at a > 0, got a = {a}")));
        }
        if let Some((left, right, _, _)) = self.potential.compact_support() {
            if a > left || b < right {
                return Err(Error::InvalidProblem(format!(
                    "interval [{a}, {b}] must cover the non-constant region [{left}, {right}]"
                )));
            }
        }
        self.interval = Interval::Explicit { a, b };
        Ok(self)
    }

    pub fn l(&self) -> u32 {
        match self.domain {
            Domain::WholeLine => 0,
            Domain::HalfLine { l } => l,
        }
    }

    /// The potential entering the angular equation (with the centrifugal
    /// barrier on the half line).
    pub fn effective_potential(&self) -> PotentialSpec {
        effective_radial(&self.potential, self.l())
    }

    /// Lowest energy at which one of the tails stops binding.
    pub fn threshold(&self) -> f64 {
        self.left_tail.threshold().min(self.right_tail.threshold())
    }

    /// The explicit interval, if set.
    pub fn explicit_interval(&self) -> Option<(f64, f64)> {
        match self.interval {
            Interval::Explicit { a, b } => Some((a, b)),
            Interval::Auto => None,
        }
    }

    pub(crate) fn require_interval(&self) -> Result<(f64, f64)> {
        self.explicit_interval()
            .ok_or_else(|| Error::InvalidProblem("operation needs an explicit interval; resolve Auto first".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_tails_per_family() {
        let p = ProblemSpec::new(PotentialSpec::TruncatedOscillator { omega: 1.0, cutoff_a: 2.0 }, Domain::WholeLine)
            .unwrap();
        assert_eq!(p.left_tail, TailClass::ConstantLevel { level: 2.0 });
        assert_eq!(p.threshold(), 2.0);

        let h = ProblemSpec::new(PotentialSpec::Coulomb { charge: 1.0 }, Domain::HalfLine { l: 2 }).unwrap();
        assert_eq!(h.left_tail, TailClass::CoulombZeroSingularity { l: 2, charge: 1.0 });
        assert_eq!(h.right_tail, TailClass::CoulombTail { l: 2, charge: 1.0 });
        assert_eq!(h.threshold(), 0.0);
    }

    #[test]
    fn mismatched_tail_is_rejected() {
        let p =
            ProblemSpec::new(PotentialSpec::HybridOscillator { omega_left: 0.5, omega_right: 1.0 }, Domain::WholeLine)
                .unwrap();
        let err = p
            .with_tails(TailClass::OscillatorTail { omega: 0.5 }, TailClass::CoulombTail { l: 0, charge: 1.0 })
            .unwrap_err();
        assert!(matches!(err, Error::TailMismatch { side: "right", .. }));
    }

    #[test]
    fn domain_and_interval_checks() {
        assert!(ProblemSpec::new(PotentialSpec::Coulomb { charge: 1.0 }, Domain::WholeLine).is_err());
        let h = ProblemSpec::new(PotentialSpec::Coulomb { charge: 1.0 }, Domain::HalfLine { l: 0 }).unwrap();
        assert!(h.clone().with_interval(0.0, 10.0).is_err());
        assert!(h.clone().with_interval(5.0, 1.0).is_err());
        assert!(h.with_interval(1e-3, 10.0).is_ok());

        let sq = ProblemSpec::new(PotentialSpec::SquareWell { depth: -2.0, left: -1.0, right: 1.0 }, Domain::WholeLine)
            .unwrap();
        assert!(sq.clone().with_interval(-0.5, 1.0).is_err());
        assert!(sq.with_interval(-3.0, 1.0).is_ok());
    }
}
