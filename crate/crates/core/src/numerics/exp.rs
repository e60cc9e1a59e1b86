//! Exponential partial sums, `e^x` with a certified series tail, Poisson
//! tail probabilities, and the integral form of the series remainder.
//!
//! Series are summed with a single integer recurrence (no per-term gcd):
//! with `x = p/q`, the partial sum through `K` is `N_K / (q^K K!)` where
//! `N_k = N_{k-1} * q k + p^k`. Truncation stops only when the geometric
//! tail bound `|x|^{K+1} / ((K+1)! (1 - |x|/(K+2)))` drops below the target;
//! the returned error bound is that certificate, not a heuristic.

use super::{
    factorial, integrate, pow_u, ten_pow, HighPrecision, IntegrandId, NumericsError, Rational,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exactly `sum_{k=0}^{n} x^k / k!`.
pub fn exp_partial_sum(x: &Rational, n: usize) -> Rational {
    let p = x.numer();
    let q = x.denom();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut pk = BigInt::one();
    for k in 1..=n {
        let qk = q * BigInt::from(k);
        pk *= p;
        num = num * &qk + &pk;
        den *= qk;
    }
    Rational::new(num, den)
}

/// Partial sum of `e^x` with a certified bound on the dropped tail.
///
/// Sums at least `min_terms` terms, then keeps going until the tail bound is
/// at most `10^-target_pow`. Returns the raw (unreduced) numerator and
/// denominator of the partial sum plus the tail bound; the true `e^x` lies
/// within `num/den ± bound`.
fn exp_series_parts(x: &Rational, target_pow: u32, min_terms: usize) -> (BigInt, BigInt, Rational) {
    let p = x.numer().clone();
    let q = x.denom().clone();
    let pa = p.abs();
    let threshold = BigInt::from(10).pow(target_pow);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut pk = BigInt::one();
    let mut pak = BigInt::one();
    let mut k: usize = 0;
    loop {
        // Tail bound after summing through K = k, provided (K+2) q > |p|:
        //   B = (|p|^{K+1} / (q^{K+1} (K+1)!)) * ((K+2) q / ((K+2) q - |p|))
        let pa_next = &pak * &pa;
        let qk1 = &q * BigInt::from(k + 1);
        let den_next = &den * &qk1;
        let kp2q = &q * BigInt::from(k + 2);
        if k >= min_terms && kp2q > pa {
            let slack = &kp2q - &pa;
            // B <= 10^-target  <=>  |p|^{K+1} (K+2) q 10^target <= den_next slack
            if &pa_next * &kp2q * &threshold <= &den_next * &slack {
                let bound = Rational::new(&pa_next * &kp2q, &den_next * &slack);
                return (num, den, bound);
            }
        }
        k += 1;
        pk *= &p;
        pak = pa_next;
        num = num * &qk1 + &pk;
        den = den_next;
    }
}

fn exp_series(x: &Rational, target_pow: u32, min_terms: usize) -> (Rational, Rational) {
    let (num, den, bound) = exp_series_parts(x, target_pow, min_terms);
    (Rational::new(num, den), bound)
}

/// Unreduced fraction `num/den` within `10^-target_pow` of `e^x`, for hot
/// callers that stay in integer arithmetic. `x` itself may be unreduced.
pub(crate) fn exp_series_raw(x: &Rational, target_pow: u32) -> (BigInt, BigInt) {
    if x.is_zero() {
        return (BigInt::one(), BigInt::one());
    }
    let (num, den, _) = exp_series_parts(x, target_pow, 0);
    (num, den)
}

/// `e^x` with error bound at most `10^-(digits+5)`, hence well within the
/// `10^-digits * max(1, |value|)` contract.
pub fn exp_eval(x: &Rational, digits: u32) -> HighPrecision {
    assert!(digits >= 1, "digits must be at least 1");
    if x.is_zero() {
        return HighPrecision::exact(Rational::one());
    }
    let (value, bound) = exp_series(x, digits + 5, 0);
    HighPrecision::new(value, bound)
}

/// `Pr(Poisson(lambda) > n)` computed in the tail-sum form
/// `e^{-lambda} * sum_{j>n} lambda^j / j!`, which keeps every term positive.
pub fn poisson_tail(lambda: &Rational, n: usize, digits: u32) -> HighPrecision {
    assert!(lambda.is_positive(), "lambda must be positive");
    let (full, tail_bound) = exp_series(lambda, digits + 8, n + 1);
    let head = exp_partial_sum(lambda, n);
    // The true tail sum lies in [full - head, full - head + tail_bound].
    let two = Rational::one() + Rational::one();
    let half_bound = tail_bound / two;
    let tail_sum = HighPrecision::new(full - head + &half_bound, half_bound);
    exp_eval(&-lambda.clone(), digits + 3).mul(&tail_sum)
}

/// `(1/n!) * integral_0^x (x - y)^n e^y dy`, evaluated by quadrature after
/// the substitution `y = x t`, i.e. `(x^{n+1}/n!) * integral_0^1 (1-t)^n e^{xt} dt`.
///
/// Must agree with `exp_eval(x) - exp_partial_sum(x, n)` within combined
/// error bounds; that identity is asserted on every call.
pub fn exp_tail_integral(
    x: &Rational,
    n: usize,
    digits: u32,
) -> Result<HighPrecision, NumericsError> {
    if x.is_zero() {
        return Ok(HighPrecision::zero());
    }
    let prefactor = pow_u(x, n + 1) / Rational::from_integer(factorial(n));
    let tol = ten_pow(-(digits as i64 + 2)) / prefactor.abs().max(Rational::one());
    let integral = integrate(&IntegrandId::ExpTail { x: x.clone(), n }, &tol)?;
    let result = integral.mul_rat(&prefactor);

    let series_route = exp_eval(x, digits + 2).add_rat(&-exp_partial_sum(x, n));
    assert!(
        result.agrees_with(&series_route),
        "integral and series evaluations of the exp remainder disagree at x={x}, n={n}"
    );
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{parse_rational, rat, ratio};

    // Reference constants, 50 decimal digits.
    const E_REF: &str = "2.71828182845904523536028747135266249775724709369996";
    const E2_REF: &str = "7.38905609893065022723042746057500781318031557055185";
    const PTAIL_1_3: &str = "0.01898815687615380907860327956943768681117031724862";
    const PTAIL_1_0: &str = "0.63212055882855767840447622983853913255418886896823";
    const PTAIL_MILLI: &str = "0.00099950016662500833194464283234402529764409763992";
    const E_MINUS_1: &str = "1.71828182845904523536028747135266249775724709369996";
    const E2_MINUS_19_3: &str = "1.05572276559731689389709412724167447984698223721851";

    fn close_to(hp: &HighPrecision, reference: &str, tol_pow: i64) {
        let r = parse_rational(reference).unwrap();
        let slack = hp.error_bound() + ten_pow(-tol_pow);
        assert!(
            (hp.value() - &r).abs() <= slack,
            "value {} not within 10^-{tol_pow} of {reference}",
            hp.value()
        );
    }

    #[test]
    fn partial_sums_are_exact() {
        assert_eq!(exp_partial_sum(&rat(2), 3), ratio(19, 3));
        assert_eq!(exp_partial_sum(&rat(0), 5), rat(1));
        assert_eq!(exp_partial_sum(&rat(-1), 2), ratio(1, 2));
        assert_eq!(exp_partial_sum(&ratio(1, 2), 0), rat(1));
    }

    #[test]
    fn exp_eval_matches_reference() {
        let e = exp_eval(&rat(1), 50);
        close_to(&e, E_REF, 49);
        let e2 = exp_eval(&rat(2), 50);
        close_to(&e2, E2_REF, 49);
        // cross-check: exp(1)^2 against exp(2)
        assert!(e.mul(&e).agrees_with(&e2));
        // digits contract
        assert!(*e.error_bound() <= ten_pow(-55) * e.value().abs().max(rat(1)));
        let one = exp_eval(&rat(0), 10);
        assert!(one.is_exact() && *one.value() == rat(1));
    }

    #[test]
    fn exp_eval_negative_argument() {
        let em1 = exp_eval(&rat(-1), 40);
        let e = exp_eval(&rat(1), 40);
        // e^-1 * e^1 = 1
        let product = em1.mul(&e);
        assert!(product.agrees_with(&HighPrecision::exact(rat(1))));
    }

    #[test]
    fn raw_series_matches_reduced_evaluation() {
        // also exercises unreduced fraction inputs, as the quadrature path
        // supplies them
        for (num, den) in [(3i64, 2i64), (-7, 5), (22, 11), (0, 3)] {
            let raw_arg = Rational::new_raw(num.into(), den.into());
            let (n, d) = exp_series_raw(&raw_arg, 30);
            let reduced = exp_eval(&ratio(num, den), 30);
            let raw_value = Rational::new(n, d);
            assert!(
                (raw_value - reduced.value()).abs() <= reduced.error_bound() + &ten_pow(-30),
                "raw series diverges from exp_eval at {num}/{den}"
            );
        }
    }

    #[test]
    fn poisson_tail_reference_values() {
        close_to(&poisson_tail(&rat(1), 3, 40), PTAIL_1_3, 39);
        close_to(&poisson_tail(&rat(1), 0, 40), PTAIL_1_0, 39);
        close_to(&poisson_tail(&ratio(1, 1000), 0, 40), PTAIL_MILLI, 39);
    }

    #[test]
    fn poisson_tail_is_small_for_large_n() {
        let t = poisson_tail(&rat(1), 40, 30);
        assert!(t.value().is_positive());
        assert!(*t.value() < ten_pow(-40));
    }

    #[test]
    fn tail_integral_reference_values() {
        let r = exp_tail_integral(&rat(2), 3, 30).unwrap();
        close_to(&r, E2_MINUS_19_3, 29);
        let r = exp_tail_integral(&rat(1), 0, 30).unwrap();
        close_to(&r, E_MINUS_1, 29);
        let zero = exp_tail_integral(&rat(0), 7, 30).unwrap();
        assert!(zero.is_exact() && zero.value().is_zero());
    }

    #[test]
    fn tail_integral_negative_argument() {
        // x = -1, n = 1: e^-1 - (1 - 1) ... series route checked internally
        let r = exp_tail_integral(&rat(-1), 1, 25).unwrap();
        let series = exp_eval(&rat(-1), 30).add_rat(&-exp_partial_sum(&rat(-1), 1));
        assert!(r.agrees_with(&series));
    }
}
