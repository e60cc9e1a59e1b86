//! A decimal value paired with a certified absolute error bound.

use super::{floor_log10, ten_pow, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt;

/// An approximation `value` of a real quantity together with an absolute
/// error bound: the true quantity is guaranteed to lie in
/// `[value - error_bound, value + error_bound]`.
///
/// Both fields are exact rationals, so error propagation through arithmetic
/// is itself exact; no rounding ever occurs inside a computation. Values
/// produced by the series and quadrature routines in this module satisfy
/// `error_bound <= 10^-digits * max(1, |value|)` for the requested digit
/// count; [`HighPrecision::certified_digits`] recovers the guarantee that
/// actually holds after further arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct HighPrecision {
    value: Rational,
    error: Rational,
}

impl HighPrecision {
    /// Wrap an exactly-known rational quantity (error bound zero).
    pub fn exact(value: Rational) -> Self {
        HighPrecision {
            value,
            error: Rational::zero(),
        }
    }

    pub fn new(value: Rational, error: Rational) -> Self {
        assert!(!error.is_negative(), "error bound must be non-negative");
        HighPrecision { value, error }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn error_bound(&self) -> &Rational {
        &self.error
    }

    pub fn is_exact(&self) -> bool {
        self.error.is_zero()
    }

    /// Largest `d` such that `error_bound <= 10^-d * max(1, |value|)`,
    /// i.e. the number of decimal digits this value is certified to.
    /// `None` means the value is exact.
    pub fn certified_digits(&self) -> Option<u32> {
        if self.error.is_zero() {
            return None;
        }
        let scale = self.value.abs().max(Rational::one());
        let ratio = &self.error / scale;
        if ratio > Rational::one() {
            return Some(0);
        }
        let l = floor_log10(&ratio);
        let d = if ratio == ten_pow(l) { -l } else { -l - 1 };
        Some(d.max(0) as u32)
    }

    /// Exact lower end of the enclosure.
    pub fn lower(&self) -> Rational {
        &self.value - &self.error
    }

    /// Exact upper end of the enclosure.
    pub fn upper(&self) -> Rational {
        &self.value + &self.error
    }

    pub fn add(&self, other: &Self) -> Self {
        HighPrecision {
            value: &self.value + &other.value,
            error: &self.error + &other.error,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HighPrecision {
            value: &self.value - &other.value,
            error: &self.error + &other.error,
        }
    }

    pub fn neg(&self) -> Self {
        HighPrecision {
            value: -&self.value,
            error: self.error.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let error = self.value.abs() * &other.error
            + other.value.abs() * &self.error
            + &self.error * &other.error;
        HighPrecision {
            value: &self.value * &other.value,
            error,
        }
    }

    /// Add an exactly-known rational.
    pub fn add_rat(&self, r: &Rational) -> Self {
        HighPrecision {
            value: &self.value + r,
            error: self.error.clone(),
        }
    }

    /// Multiply by an exactly-known rational.
    pub fn mul_rat(&self, r: &Rational) -> Self {
        HighPrecision {
            value: &self.value * r,
            error: &self.error * r.abs(),
        }
    }

    /// Divide by an exactly-known nonzero rational.
    pub fn div_rat(&self, r: &Rational) -> Self {
        assert!(!r.is_zero());
        HighPrecision {
            value: &self.value / r,
            error: &self.error / r.abs(),
        }
    }

    /// Interval division. `None` when the divisor's enclosure contains zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let b = other.value.abs();
        if b <= other.error {
            return None;
        }
        let error =
            (&self.error * &b + self.value.abs() * &other.error) / (&b * (&b - &other.error));
        Some(HighPrecision {
            value: &self.value / &other.value,
            error,
        })
    }

    /// Enclosure of `max(x, 0)` for the quantity enclosed by `self`.
    pub fn positive_part(&self) -> Self {
        if self.lower() >= Rational::zero() {
            self.clone()
        } else if self.upper() <= Rational::zero() {
            Self::zero()
        } else {
            // Sign undetermined: true positive part lies in [0, upper].
            let half = self.upper() / (Rational::one() + Rational::one());
            HighPrecision {
                value: half.clone(),
                error: half,
            }
        }
    }

    /// True when the two enclosures are consistent with a common true value:
    /// `|a.value - b.value| <= a.error + b.error`.
    pub fn agrees_with(&self, other: &Self) -> bool {
        (&self.value - &other.value).abs() <= &self.error + &other.error
    }

    /// Certified strict inequality `self < other` with a safety margin:
    /// requires `other.value - self.value > margin * (both error bounds)`.
    pub fn certified_below(&self, other: &Self, margin: u32) -> bool {
        &other.value - &self.value
            > (&self.error + &other.error) * Rational::from_integer(margin.into())
    }
}

impl fmt::Display for HighPrecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.error.is_zero() {
            write!(f, "{} (exact)", self.value)
        } else {
            write!(f, "{} +/- {}", self.value, self.error)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, ratio};

    #[test]
    fn certified_digits_thresholds() {
        let hp = HighPrecision::new(rat(1), ratio(1, 1000));
        assert_eq!(hp.certified_digits(), Some(3));
        let hp = HighPrecision::new(rat(1), ratio(1, 999));
        assert_eq!(hp.certified_digits(), Some(2));
        // scale by max(1, |v|): error 0.01 on value 100 certifies 4 digits
        let hp = HighPrecision::new(rat(100), ratio(1, 100));
        assert_eq!(hp.certified_digits(), Some(4));
        assert_eq!(HighPrecision::exact(rat(5)).certified_digits(), None);
        let hp = HighPrecision::new(rat(1), rat(2));
        assert_eq!(hp.certified_digits(), Some(0));
    }

    #[test]
    fn interval_arithmetic_soundness() {
        let a = HighPrecision::new(rat(3), ratio(1, 10));
        let b = HighPrecision::new(rat(2), ratio(1, 100));
        let p = a.mul(&b);
        // worst case |(3±.1)(2±.01) - 6| = 3*.01 + 2*.1 + .001
        assert_eq!(*p.error_bound(), ratio(231, 1000));
        let q = a.div(&b).unwrap();
        assert!(*q.value() == ratio(3, 2));
        // true quotient range: [2.9/2.01, 3.1/1.99]; both within bound
        assert!((ratio(29, 10) / ratio(201, 100) - q.value()).abs() <= *q.error_bound());
        assert!((ratio(31, 10) / ratio(199, 100) - q.value()).abs() <= *q.error_bound());
        assert!(HighPrecision::new(rat(0), rat(1))
            .div(&HighPrecision::new(rat(0), rat(1)))
            .is_none());
    }

    #[test]
    fn positive_part_cases() {
        let pos = HighPrecision::new(rat(2), rat(1)).positive_part();
        assert_eq!(*pos.value(), rat(2));
        let neg = HighPrecision::new(rat(-3), rat(1)).positive_part();
        assert!(neg.value().is_zero() && neg.error_bound().is_zero());
        let mixed = HighPrecision::new(ratio(-1, 2), rat(1)).positive_part();
        assert_eq!(mixed.lower(), rat(0));
        assert_eq!(mixed.upper(), ratio(1, 2));
    }

    #[test]
    fn comparisons() {
        let a = HighPrecision::new(rat(1), ratio(1, 100));
        let b = HighPrecision::new(rat(2), ratio(1, 100));
        assert!(a.certified_below(&b, 10));
        assert!(!a.certified_below(&b, 100));
        assert!(a.agrees_with(&HighPrecision::new(rat(1) + ratio(1, 200), ratio(1, 100))));
        assert!(!a.agrees_with(&b));
    }
}
