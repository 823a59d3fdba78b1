//! Potential families and their evaluation.
//!
//! Units are dimensionless with ħ = m = 1, so the Schrödinger equation reads
//! `−½ψ'' + [V(t) − E]ψ = 0`.

use crate::error::{Error, Result};

/// A one-dimensional potential.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    /// `½ω²t²` for `|t| ≤ a`, frozen at `½ω²a²` beyond.
    TruncatedOscillator { omega: f64, cutoff_a: f64 },
    /// `½ω_l²t²` for `t < 0` and `½ω_r²t²` for `t ≥ 0`.
    HybridOscillator { omega_left: f64, omega_right: f64 },
    /// `depth` on `[left, right)`, zero elsewhere.
    SquareWell { depth: f64, left: f64, right: f64 },
    /// `values[i]` between `breakpoints[i-1]` and `breakpoints[i]`;
    /// `values.len() == breakpoints.len() + 1`.
    PiecewiseConstant { breakpoints: Vec<f64>, values: Vec<f64> },
    /// `−Z/t` on the half line.
    Coulomb { charge: f64 },
    /// `−e^{−λt}/t` on the half line.
    Yukawa { screening_lambda: f64 },
    /// `−1/t + ½ω²t²` on the half line.
    QuarkHybrid { omega: f64 },
    /// Piecewise-linear through `(t, V)` samples, clamped outside the range.
    Tabulated { samples: Vec<(f64, f64)> },
    /// `base(t) + l(l+1)/(2t²)`; built by [`effective_radial`].
    EffectiveRadial { base: Box<PotentialSpec>, l: u32 },
}

impl PotentialSpec {
    pub fn family(&self) -> &'static str {
        match self {
            Self::TruncatedOscillator { .. } => "truncated_oscillator",
            Self::HybridOscillator { .. } => "hybrid_oscillator",
            Self::SquareWell { .. } => "square_well",
            Self::PiecewiseConstant { .. } => "piecewise_constant",
            Self::Coulomb { .. } => "coulomb",
            Self::Yukawa { .. } => "yukawa",
            Self::QuarkHybrid { .. } => "quark_hybrid",
            Self::Tabulated { .. } => "tabulated",
            Self::EffectiveRadial { .. } => "effective_radial",
        }
    }

    /// Families that are only defined for `t > 0`.
    pub fn is_half_line(&self) -> bool {
        matches!(
            self,
            Self::Coulomb { .. } | Self::Yukawa { .. } | Self::QuarkHybrid { .. } | Self::EffectiveRadial { .. }
        )
    }

    /// Checks the parameter invariants of the family.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidPotential(msg));
        let finite = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidPotential(format!("{name} must be finite, got {v}")))
            }
        };
        match self {
            Self::TruncatedOscillator { omega, cutoff_a } => {
                if !(*omega > 0.0 && omega.is_finite()) {
                    return bad(format!("omega must be positive, got {omega}"));
                }
                if !(*cutoff_a > 0.0 && cutoff_a.is_finite()) {
                    return bad(format!("cutoff must be positive, got {cutoff_a}"));
                }
            }
            Self::HybridOscillator { omega_left, omega_right } => {
                for (name, w) in [("omega_left", omega_left), ("omega_right", omega_right)] {
                    if !(*w > 0.0 && w.is_finite()) {
                        return bad(format!("{name} must be positive, got {w}"));
                    }
                }
            }
            Self::SquareWell { depth, left, right } => {
                finite("depth", *depth)?;
                finite("left", *left)?;
                finite("right", *right)?;
                if *depth > 0.0 {
                    return bad(format!("square well depth must be <= 0, got {depth}"));
                }
                if left >= right {
                    return bad(format!("square well needs left < right, got [{left}, {right}]"));
                }
            }
            Self::PiecewiseConstant { breakpoints, values } => {
                if breakpoints.is_empty() {
                    return bad("piecewise constant potential needs at least one breakpoint".into());
                }
                if values.len() != breakpoints.len() + 1 {
                    return bad(format!(
                        "{} breakpoints need {} values, got {}",
                        breakpoints.len(),
                        breakpoints.len() + 1,
                        values.len()
                    ));
                }
                for &v in breakpoints.iter().chain(values) {
                    finite("breakpoints and values", v)?;
                }
                if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("breakpoints must be strictly increasing".into());
                }
            }
            Self::Coulomb { charge } => {
                if !(*charge > 0.0 && charge.is_finite()) {
                    return bad(format!("coulomb charge must be positive, got {charge}"));
                }
            }
            Self::Yukawa { screening_lambda } => {
                if !(*screening_lambda > 0.0 && screening_lambda.is_finite()) {
                    return bad(format!("screening lambda must be positive, got {screening_lambda}"));
                }
            }
            Self::QuarkHybrid { omega } => {
                if !(*omega > 0.0 && omega.is_finite()) {
                    return bad(format!("omega must be positive, got {omega}"));
                }
            }
            Self::Tabulated { samples } => {
                if samples.len() < 2 {
                    return bad("tabulated potential needs at least two samples".into());
                }
                for &(t, v) in samples {
                    finite("tabulated samples", t)?;
                    finite("tabulated samples", v)?;
                }
                if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return bad("tabulated sample positions must be strictly increasing".into());
                }
            }
            Self::EffectiveRadial { base, .. } => base.validate()?,
        }
        Ok(())
    }

    /// Evaluates `V(t)`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if self.is_half_line() && !(t > 0.0) {
            return Err(Error::Domain { family: self.family(), t });
        }
        let v = match self {
            Self::TruncatedOscillator { omega, cutoff_a } => {
                let x = t.abs().min(*cutoff_a);
                0.5 * omega * omega * x * x
            }
            Self::HybridOscillator { omega_left, omega_right } => {
                let w = if t < 0.0 { omega_left } else { omega_right };
                0.5 * w * w * t * t
            }
            Self::SquareWell { depth, left, right } => {
                if t >= *left && t < *right {
                    *depth
                } else {
                    0.0
                }
            }
            Self::PiecewiseConstant { breakpoints, values } => values[breakpoints.partition_point(|&b| b <= t)],
            Self::Coulomb { charge } => -charge / t,
            Self::Yukawa { screening_lambda } => -(-screening_lambda * t).exp() / t,
            Self::QuarkHybrid { omega } => -1.0 / t + 0.5 * omega * omega * t * t,
            Self::Tabulated { samples } => interpolate(samples, t),
            Self::EffectiveRadial { base, l } => base.evaluate(t)? + centrifugal(*l, t),
        };
        Ok(v)
    }

    /// Points where the potential or its derivative is discontinuous.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::TruncatedOscillator { cutoff_a, .. } => vec![-cutoff_a, *cutoff_a],
            Self::HybridOscillator { .. } => vec![0.0],
            Self::SquareWell { left, right, .. } => vec![*left, *right],
            Self::PiecewiseConstant { breakpoints, .. } => breakpoints.clone(),
            Self::Tabulated { samples } => samples.iter().map(|s| s.0).collect(),
            Self::EffectiveRadial { base, .. } => base.breakpoints(),
            Self::Coulomb { .. } | Self::Yukawa { .. } | Self::QuarkHybrid { .. } => Vec::new(),
        }
    }

    /// For potentials that are constant outside a finite interval, returns
    /// `(left, right, V_left, V_right)`.
    pub fn compact_support(&self) -> Option<(f64, f64, f64, f64)> {
        match self {
            Self::TruncatedOscillator { omega, cutoff_a } => {
                let level = 0.5 * omega * omega * cutoff_a * cutoff_a;
                Some((-cutoff_a, *cutoff_a, level, level))
            }
            Self::SquareWell { left, right, .. } => Some((*left, *right, 0.0, 0.0)),
            Self::PiecewiseConstant { breakpoints, values } => {
                Some((breakpoints[0], breakpoints[breakpoints.len() - 1], values[0], values[values.len() - 1]))
            }
            Self::Tabulated { samples } => {
                let (first, last) = (samples[0], samples[samples.len() - 1]);
                Some((first.0, last.0, first.1, last.1))
            }
            _ => None,
        }
    }
}

fn centrifugal(l: u32, t: f64) -> f64 {
    let l = f64::from(l);
    l * (l + 1.0) / (2.0 * t * t)
}

fn interpolate(samples: &[(f64, f64)], t: f64) -> f64 {
    let (first, last) = (samples[0], samples[samples.len() - 1]);
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    let i = samples.partition_point(|s| s.0 <= t);
    let (t0, v0) = samples[i - 1];
    let (t1, v1) = samples[i];
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Adds the centrifugal barrier `l(l+1)/(2t²)` to a half-line potential.
/// `l = 0` returns the potential unchanged.
pub fn effective_radial(potential: &PotentialSpec, l: u32) -> PotentialSpec {
    if l == 0 {
        return potential.clone();
    }
    PotentialSpec::EffectiveRadial { base: Box::new(potential.clone()), l }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn truncated_oscillator_is_frozen_beyond_cutoff() {
        let v = PotentialSpec::TruncatedOscillator { omega: 1.0, cutoff_a: 2.0 };
        assert_eq!(v.evaluate(3.0).unwrap(), 2.0);
        assert_eq!(v.evaluate(-7.5).unwrap(), 2.0);
        assert_eq!(v.evaluate(2.0).unwrap(), 2.0);
        assert_eq!(v.evaluate(1.0).unwrap(), 0.5);
    }

    #[test]
    fn coulomb_and_hybrid_values() {
        let c = PotentialSpec::Coulomb { charge: 1.0 };
        assert_eq!(c.evaluate(2.0).unwrap(), -0.5);
        let h = PotentialSpec::HybridOscillator { omega_left: 0.5, omega_right: 1.0 };
        assert_eq!(h.evaluate(0.0).unwrap(), 0.0);
        assert_eq!(h.evaluate(-2.0).unwrap(), 0.5);
        assert_eq!(h.evaluate(2.0).unwrap(), 2.0);
    }

    #[test]
    fn half_line_families_reject_nonpositive_t() {
        for v in [
            PotentialSpec::Coulomb { charge: 1.0 },
            PotentialSpec::Yukawa { screening_lambda: 0.5 },
            PotentialSpec::QuarkHybrid { omega: 0.1 },
        ] {
            assert!(matches!(v.evaluate(0.0), Err(Error::Domain { .. })));
            assert!(matches!(v.evaluate(-1.0), Err(Error::Domain { .. })));
        }
    }

    #[test]
    fn effective_radial_examples() {
        let c = PotentialSpec::Coulomb { charge: 1.0 };
        assert_eq!(effective_radial(&c, 1).evaluate(1.0).unwrap(), 0.0);
        assert_eq!(effective_radial(&c, 0).evaluate(1.0).unwrap(), -1.0);
        assert_eq!(effective_radial(&c, 0), c);

        let w: f64 = 0.3;
        let q = effective_radial(&PotentialSpec::QuarkHybrid { omega: w }, 2);
        let t: f64 = 1.7;
        let expected = -1.0 / t + 0.5 * w * w * t * t + 6.0 / (2.0 * t * t);
        assert!((q.evaluate(t).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        let bad = [
            PotentialSpec::TruncatedOscillator { omega: 0.0, cutoff_a: 1.0 },
            PotentialSpec::TruncatedOscillator { omega: 1.0, cutoff_a: -1.0 },
            PotentialSpec::Yukawa { screening_lambda: 0.0 },
            PotentialSpec::PiecewiseConstant { breakpoints: vec![1.0, 1.0], values: vec![0.0; 3] },
            PotentialSpec::PiecewiseConstant { breakpoints: vec![0.0, 1.0], values: vec![0.0; 2] },
            PotentialSpec::Tabulated { samples: vec![(0.0, 1.0), (0.0, 2.0)] },
            PotentialSpec::SquareWell { depth: -1.0, left: 1.0, right: 0.0 },
        ];
        for v in bad {
            assert!(v.validate().is_err(), "{v:?} should be rejected");
        }
    }

    #[test]
    fn piecewise_and_tabulated_lookup() {
        let p =
            PotentialSpec::PiecewiseConstant { breakpoints: vec![-1.0, 0.5, 2.0], values: vec![0.0, -3.0, -1.0, 0.25] };
        assert_eq!(p.evaluate(-2.0).unwrap(), 0.0);
        assert_eq!(p.evaluate(0.0).unwrap(), -3.0);
        assert_eq!(p.evaluate(1.0).unwrap(), -1.0);
        assert_eq!(p.evaluate(5.0).unwrap(), 0.25);

        let tab = PotentialSpec::Tabulated { samples: vec![(0.0, 0.0), (1.0, -2.0), (3.0, 0.0)] };
        assert_eq!(tab.evaluate(-1.0).unwrap(), 0.0);
        assert_eq!(tab.evaluate(0.5).unwrap(), -1.0);
        assert_eq!(tab.evaluate(2.0).unwrap(), -1.0);
        assert_eq!(tab.evaluate(9.0).unwrap(), 0.0);
    }

    // Closed forms coded separately from `evaluate`.
    fn reference(v: &PotentialSpec, t: f64) -> f64 {
        match v {
            PotentialSpec::TruncatedOscillator { omega, cutoff_a } => {
                if t.abs() <= *cutoff_a {
                    omega.powi(2) * t.powi(2) / 2.0
                } else {
                    omega.powi(2) * cutoff_a.powi(2) / 2.0
                }
            }
            PotentialSpec::HybridOscillator { omega_left, omega_right } => {
                if t >= 0.0 {
                    (omega_right * t).powi(2) / 2.0
                } else {
                    (omega_left * t).powi(2) / 2.0
                }
            }
            PotentialSpec::Coulomb { charge } => -(charge / t),
            PotentialSpec::Yukawa { screening_lambda } => -(1.0 / t) * (-screening_lambda * t).exp(),
            PotentialSpec::QuarkHybrid { omega } => (omega * t).powi(2) / 2.0 - 1.0 / t,
            _ => unreachable!(),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn families_match_closed_forms(
            w in 0.05f64..3.0,
            cut in 0.5f64..5.0,
            lam in 0.01f64..2.0,
            x in -10.0f64..10.0,
        ) {
            let r = x.abs().max(1e-3);
            let cases = [
                (PotentialSpec::TruncatedOscillator { omega: w, cutoff_a: cut }, x),
                (PotentialSpec::HybridOscillator { omega_left: w, omega_right: cut }, x),
                (PotentialSpec::Coulomb { charge: w }, r),
                (PotentialSpec::Yukawa { screening_lambda: lam }, r),
                (PotentialSpec::QuarkHybrid { omega: w }, r),
            ];
            for (v, t) in cases {
                let got = v.evaluate(t).unwrap();
                let want = reference(&v, t);
                // The quark family is a difference of two terms; measure against their size.
                let scale = match v {
                    PotentialSpec::QuarkHybrid { omega } => (omega * t).powi(2) / 2.0 + 1.0 / t,
                    _ => want.abs().max(f64::MIN_POSITIVE),
                };
                prop_assert!((got - want).abs() <= 1e-14 * scale, "{v:?} at {t}: {got} vs {want}");
            }
        }

        #[test]
        fn truncated_oscillator_is_continuous_at_cutoff(w in 0.1f64..3.0, cut in 0.1f64..5.0) {
            let v = PotentialSpec::TruncatedOscillator { omega: w, cutoff_a: cut };
            for side in [-1.0, 1.0] {
                let inside = v.evaluate(side * cut * (1.0 - 1e-12)).unwrap();
                let outside = v.evaluate(side * cut * (1.0 + 1e-12)).unwrap();
                prop_assert!((inside - outside).abs() <= 1e-10 * outside.max(1.0));
            }
        }

        #[test]
        fn effective_radial_zero_is_identity(t in 1e-3f64..50.0, lam in 0.05f64..2.0) {
            let v = PotentialSpec::Yukawa { screening_lambda: lam };
            prop_assert_eq!(effective_radial(&v, 0).evaluate(t).unwrap(), v.evaluate(t).unwrap());
        }
    }
}
