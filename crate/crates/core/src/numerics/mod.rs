//! Exact rational arithmetic and rigorously error-bounded evaluation of the
//! transcendental building blocks: exponential partial sums and tails,
//! Poisson tail probabilities, and definite integrals on `[0, 1]`.
//!
//! All values entering a computation are exact [`Rational`]s; anything
//! involving `e^x` is a [`HighPrecision`] whose error bound is a certificate
//! derived from a closed-form series tail, never a heuristic.

mod exp;
mod highprec;
mod quadrature;

pub(crate) use exp::exp_series_raw;
pub use exp::{exp_eval, exp_partial_sum, exp_tail_integral, poisson_tail};
pub use highprec::HighPrecision;
pub use quadrature::{integrate, IntegrandId};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision exact rational number. Kept in lowest terms with a
/// positive denominator by construction; all arithmetic is exact.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error)]
pub enum NumericsError {
    /// Adaptive quadrature hit its panel budget before reaching the
    /// requested tolerance. Carries the best value and error bound achieved
    /// so callers can still inspect the result.
    #[error(
        "quadrature reached its panel budget: requested tol {}, achieved {}",
        .0.requested,
        .0.achieved
    )]
    QuadratureTolerance(Box<QuadratureDiagnostic>),
}

/// Best-effort result of a quadrature run that missed its tolerance.
#[derive(Debug, Clone)]
pub struct QuadratureDiagnostic {
    pub requested: Rational,
    pub achieved: Rational,
    pub value: Rational,
}

/// Errors from parsing user-supplied decimal or fraction strings.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty number")]
    Empty,
    #[error("invalid number syntax: {0:?}")]
    Invalid(String),
    #[error("scientific notation is not accepted (exact decimal or fraction only): {0:?}")]
    ScientificNotation(String),
    #[error("zero denominator: {0:?}")]
    ZeroDenominator(String),
}

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n / d`, `d != 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Non-negative integer power of a rational, exact.
pub fn pow_u(r: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    let mut base = r.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Binomial coefficient `C(n, k)`, exact; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// `10^e` as an exact rational, `e` possibly negative.
pub fn ten_pow(e: i64) -> Rational {
    let p = BigInt::from(10).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Largest `e` with `10^e <= r`, for `r > 0`.
pub fn floor_log10(r: &Rational) -> i64 {
    assert!(r.is_positive(), "floor_log10 requires a positive argument");
    let dn = r.numer().magnitude().to_str_radix(10).len() as i64;
    let dd = r.denom().magnitude().to_str_radix(10).len() as i64;
    let mut e = dn - dd - 1;
    while ten_pow(e + 1) <= *r {
        e += 1;
    }
    while ten_pow(e) > *r {
        e -= 1;
    }
    e
}

/// Round to `places` decimal places (places may be negative), ties away
/// from zero. Exact: the result is `k / 10^places` for an integer `k`.
pub fn round_decimal(r: &Rational, places: i64) -> Rational {
    let scaled = r * ten_pow(places);
    let (num, den) = (scaled.numer(), scaled.denom());
    let (q, rem) = (
        num.magnitude() / den.magnitude(),
        num.magnitude() % den.magnitude(),
    );
    let mut q = BigInt::from(q);
    if &rem * 2u32 >= *den.magnitude() {
        q += 1;
    }
    if num.is_negative() {
        q = -q;
    }
    Rational::from_integer(q) * ten_pow(-places)
}

/// Parse `"0.5"`, `"-3"`, `"1/2"` style strings into an exact rational.
/// Scientific notation is rejected so that the parse is always exact.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if s.contains(['e', 'E']) {
        return Err(ParseRationalError::ScientificNotation(s.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .parse()
            .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
        let d: BigInt = den
            .parse()
            .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
        if d.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(n, d));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(ParseRationalError::Invalid(s.to_string()));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(ParseRationalError::Invalid(s.to_string()));
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits
            .parse()
            .map_err(|_| ParseRationalError::Invalid(s.to_string()))?
    };
    Ok(rat(sign) * Rational::new(n, BigInt::from(10).pow(frac_part.len() as u32)))
}

/// Fixed-point decimal rendering with `places` decimal places, correctly
/// rounded (ties away from zero).
pub fn decimal_string(r: &Rational, places: u32) -> String {
    let scaled = round_decimal(r, places as i64) * ten_pow(places as i64);
    let int = scaled.to_integer();
    let neg = int.is_negative();
    let digits = int.magnitude().to_str_radix(10);
    let digits = if digits.len() <= places as usize {
        format!(
            "{}{}",
            "0".repeat(places as usize + 1 - digits.len()),
            digits
        )
    } else {
        digits
    };
    let split = digits.len() - places as usize;
    let (ip, fp) = digits.split_at(split);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

/// Render with `sig` significant digits, trailing zeros trimmed; falls back
/// to scientific notation for very small or very large magnitudes.
pub fn sig_decimal_string(r: &Rational, sig: u32) -> String {
    fn trim(s: String) -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let e = floor_log10(&r.abs());
    if (-4..=18).contains(&e) {
        let places = (sig as i64 - 1 - e).max(0);
        trim(decimal_string(r, places as u32))
    } else {
        // mantissa m with |m| in [1, 10); re-derive the exponent after
        // rounding in case the mantissa rounded up to 10.
        let rounded = round_decimal(&(r * ten_pow(-e)), sig as i64 - 1);
        let (mantissa, e) = if rounded.abs() >= rat(10) {
            (rounded / rat(10), e + 1)
        } else {
            (rounded, e)
        };
        format!("{}e{}", trim(decimal_string(&mantissa, sig - 1)), e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_decimal_and_fraction() {
        assert_eq!(parse_rational("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational("3").unwrap(), rat(3));
        assert_eq!(parse_rational(".1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("9/10").unwrap(), ratio(9, 10));
        assert!(matches!(
            parse_rational("1e3"),
            Err(ParseRationalError::ScientificNotation(_))
        ));
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a.b").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn floor_log10_edges() {
        assert_eq!(floor_log10(&rat(1)), 0);
        assert_eq!(floor_log10(&rat(9)), 0);
        assert_eq!(floor_log10(&rat(10)), 1);
        assert_eq!(floor_log10(&ratio(1, 10)), -1);
        assert_eq!(floor_log10(&ratio(99, 100)), -1);
        assert_eq!(floor_log10(&ratio(1, 1000)), -3);
    }

    #[test]
    fn rounding_and_rendering() {
        assert_eq!(decimal_string(&ratio(1, 3), 5), "0.33333");
        assert_eq!(decimal_string(&ratio(2, 3), 5), "0.66667");
        assert_eq!(decimal_string(&ratio(-1, 2), 1), "-0.5");
        assert_eq!(decimal_string(&ratio(5, 100), 1), "0.1"); // tie away from zero
        assert_eq!(decimal_string(&rat(7), 0), "7");
        assert_eq!(sig_decimal_string(&ratio(1, 3), 3), "0.333");
        assert_eq!(sig_decimal_string(&ratio(1, 100000000), 3), "1e-8");
        let tiny = ratio(123, 1) * ten_pow(-12);
        assert_eq!(sig_decimal_string(&tiny, 3), "1.23e-10");
        assert_eq!(sig_decimal_string(&(ten_pow(25) * rat(3)), 2), "3e25");
        assert_eq!(sig_decimal_string(&ratio(5, 8), 15), "0.625");
    }

    #[test]
    fn binomial_factorial() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(7, 0), BigInt::one());
    }

    #[test]
    fn pow_u_basics() {
        assert_eq!(pow_u(&ratio(1, 2), 3), ratio(1, 8));
        assert_eq!(pow_u(&rat(0), 0), rat(1));
        assert_eq!(pow_u(&rat(-2), 3), rat(-8));
    }
}
