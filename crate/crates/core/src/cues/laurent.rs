//! Finite Laurent polynomials `Σ c_p s^p` with real coefficients.

use std::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Laurent {
    /// Exponent of `coeffs[0]`.
    low: i32,
    coeffs: Vec<f64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self { low: 0, coeffs: Vec::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, f64)>>(terms: I) -> Self {
        let terms: Vec<(i32, f64)> = terms.into_iter().collect();
        let Some(low) = terms.iter().map(|&(p, _)| p).min() else {
            return Self::zero();
        };
        let high = terms.iter().map(|&(p, _)| p).max().unwrap_or(low);
        let mut coeffs = vec![0.0; (high - low + 1) as usize];
        for (p, c) in terms {
            coeffs[(p - low) as usize] += c;
        }
        Self { low, coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| **c == 0.0).count();
        if lead == self.coeffs.len() {
            return Self::zero();
        }
        self.coeffs.drain(..lead);
        self.low += lead as i32;
        self
    }

    pub fn coeff(&self, p: i32) -> f64 {
        let i = p - self.low;
        if i < 0 {
            return 0.0;
        }
        self.coeffs.get(i as usize).copied().unwrap_or(0.0)
    }

    /// Highest exponent with a nonzero coefficient, `None` for the zero polynomial.
    pub fn high(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    pub fn low(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(i, &c)| (self.low + i as i32, c))
    }

    pub fn derivative(&self) -> Self {
        Self::from_terms(self.terms().filter(|&(p, _)| p != 0).map(|(p, c)| (p - 1, p as f64 * c)))
    }

    pub fn eval(&self, s: f64) -> f64 {
        // Summing the small terms first keeps the rounding at the level of
        // the result rather than the largest term.
        let mut parts: Vec<f64> = self.terms().map(|(p, c)| c * s.powi(p)).collect();
        parts.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
        parts.into_iter().sum()
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        Laurent::from_terms(self.terms().chain(rhs.terms()))
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        Laurent::from_terms(self.terms().chain(rhs.terms().map(|(p, c)| (p, -c))))
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Laurent::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Laurent { low: self.low + rhs.low, coeffs }.trimmed()
    }
}
