//! The factorial moment distance `d_alpha` and the total variation distance
//! `d_tv`: generic definitions, closed forms for the censored-matching vs
//! Poisson pair, published bounds, and asymptotic equivalents.
//!
//! For `Z_n(lambda)` against `Poisson(lambda)` the two distances admit both
//! a series closed form and an integral representation; the report type
//! carries both routes and the two must always agree within their combined
//! certified error bounds.

use crate::distributions::{self, FactorialMomentSeq, FinitePmf, MatchingParams};
use crate::numerics::{
    exp_eval, exp_partial_sum, factorial, floor_log10, integrate, poisson_tail, pow_u, rat,
    ten_pow, HighPrecision, IntegrandId, NumericsError, Rational,
};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Quadrature tolerance used for the integral route of every distance
/// report; the acceptance tolerance of the series-vs-integral cross-check.
const QUAD_TOL_POW: i64 = 12;

#[derive(Debug, Error)]
pub enum DistanceError {
    #[error("d_alpha between two infinite moment sequences is not supported")]
    BothSidesInfinite,
    #[error("alpha must be positive, got {0}")]
    AlphaNotPositive(Rational),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// The moment sequence `E(Z(lambda))_k = lambda^k` of a Poisson law, used as
/// the infinite-moment side of generic distances.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonMoments {
    lambda: Rational,
}

impl PoissonMoments {
    pub fn new(lambda: Rational) -> Self {
        assert!(lambda.is_positive(), "lambda must be positive");
        PoissonMoments { lambda }
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn moment(&self, k: usize) -> Rational {
        pow_u(&self.lambda, k)
    }
}

/// One side of a generic factorial-moment distance.
#[derive(Debug, Clone, Copy)]
pub enum MomentSeqRef<'a> {
    Finite(&'a FactorialMomentSeq),
    Poisson(&'a PoissonMoments),
}

/// One side of a generic total variation distance.
#[derive(Debug, Clone, Copy)]
pub enum PmfRef<'a> {
    Finite(&'a FinitePmf),
    Poisson(&'a Rational),
}

/// Exact distance plus two-sided bounds, the independent integral route,
/// the asymptotic equivalent, and the ratio to it.
#[derive(Debug, Clone)]
pub struct DistanceReport {
    pub exact: HighPrecision,
    pub integral_check: HighPrecision,
    pub lower_bound: HighPrecision,
    pub upper_bound: HighPrecision,
    pub asymptotic: HighPrecision,
    pub ratio_to_asymptotic: HighPrecision,
}

impl DistanceReport {
    /// Strict sandwich `lower < exact < upper` certified with the given
    /// error-bound margin multiplier.
    pub fn sandwich_ok(&self, margin: u32) -> bool {
        self.lower_bound.certified_below(&self.exact, margin)
            && self.exact.certified_below(&self.upper_bound, margin)
    }

    /// Series and quadrature routes agree within combined error bounds.
    pub fn series_integral_consistent(&self) -> bool {
        self.exact.agrees_with(&self.integral_check)
    }
}

/// Working precision floor that keeps the distance value, the sandwich gaps
/// (a relative `O(1/n)` effect), and every positive-part sign decision
/// resolvable: the smallest intermediate quantity is of order
/// `asymptotic / 2^n`.
fn effective_digits(requested: u32, asymptotic: &Rational, n: usize) -> u32 {
    let mag = floor_log10(asymptotic);
    let needed = 25 + u32::try_from((-mag).max(0)).unwrap() + (n as u32) * 302 / 1000 + 1;
    requested.max(needed)
}

/// Factorial moment distance of order `alpha`:
/// `d_alpha = sum_{k>=1} (alpha^{k-1} / k!) |E(X1)_k - E(X2)_k|`.
///
/// Finite-finite pairs are summed exactly (zero error bound). Against a
/// Poisson side, the series splits at the finite horizon `K`; the remaining
/// pure-Poisson tail `sum_{k>K} alpha^{k-1} lambda^k / k!` is summed with a
/// certified geometric remainder bound.
pub fn d_alpha_generic(
    m1: MomentSeqRef,
    m2: MomentSeqRef,
    alpha: &Rational,
    digits: u32,
) -> Result<HighPrecision, DistanceError> {
    if !alpha.is_positive() {
        return Err(DistanceError::AlphaNotPositive(alpha.clone()));
    }
    match (m1, m2) {
        (MomentSeqRef::Finite(a), MomentSeqRef::Finite(b)) => {
            let kmax = a.max_order().max(b.max_order());
            let mut total = Rational::zero();
            let mut coeff = Rational::one(); // alpha^{k-1} / k!
            for k in 1..=kmax {
                if k > 1 {
                    coeff = coeff * alpha / rat(k as i64);
                }
                total += coeff.clone() * (a.moment(k) - b.moment(k)).abs();
            }
            Ok(HighPrecision::exact(total))
        }
        (MomentSeqRef::Finite(a), MomentSeqRef::Poisson(p))
        | (MomentSeqRef::Poisson(p), MomentSeqRef::Finite(a)) => {
            let kmax = a.max_order();
            let mut head = Rational::zero();
            let mut coeff = Rational::one();
            for k in 1..=kmax {
                if k > 1 {
                    coeff = coeff * alpha / rat(k as i64);
                }
                head += coeff.clone() * (a.moment(k) - p.moment(k)).abs();
            }
            let tail = poisson_moment_tail(alpha, p.lambda(), kmax, digits);
            Ok(tail.add_rat(&head))
        }
        (MomentSeqRef::Poisson(_), MomentSeqRef::Poisson(_)) => {
            Err(DistanceError::BothSidesInfinite)
        }
    }
}

/// `sum_{k > kmax} alpha^{k-1} lambda^k / k!` with a certified geometric
/// tail bound below `10^-(digits+6)`.
fn poisson_moment_tail(
    alpha: &Rational,
    lambda: &Rational,
    kmax: usize,
    digits: u32,
) -> HighPrecision {
    let target = ten_pow(-(digits as i64 + 6));
    let al = alpha * lambda;
    let mut total = Rational::zero();
    // t_k = alpha^{k-1} lambda^k / k!
    let mut term =
        pow_u(alpha, kmax) * pow_u(lambda, kmax + 1) / Rational::from_integer(factorial(kmax + 1));
    let mut k = kmax + 1;
    loop {
        total += &term;
        // remainder after k: t_{k+1} / (1 - al/(k+2)), valid once al < k+2
        let next = &term * &al / rat(k as i64 + 1);
        let denom_gap = rat(k as i64 + 2) - &al;
        if denom_gap.is_positive() {
            let bound = &next * rat(k as i64 + 2) / &denom_gap;
            if bound <= target {
                let half = bound / rat(2);
                return HighPrecision::new(total + &half, half);
            }
        }
        term = next;
        k += 1;
    }
}

/// Distance report for `d_alpha(Z_n(lambda), Z(lambda))`.
///
/// `exact` comes from the series closed form
/// `(1/alpha) (e^{alpha lambda} - sum_{k<=n} (alpha lambda)^k / k!)`;
/// `integral_check` from
/// `(alpha^n lambda^{n+1} / n!) integral_0^1 (1-y)^n e^{alpha lambda y} dy`.
pub fn d_alpha_matching(
    params: &MatchingParams,
    alpha: &Rational,
    digits: u32,
) -> Result<DistanceReport, DistanceError> {
    d_alpha_matching_with_quad_tol(params, alpha, digits, QUAD_TOL_POW)
}

/// As [`d_alpha_matching`] with an explicit quadrature tolerance
/// `10^-quad_tol_pow` for the integral route (never looser than the
/// default).
pub fn d_alpha_matching_with_quad_tol(
    params: &MatchingParams,
    alpha: &Rational,
    digits: u32,
    quad_tol_pow: i64,
) -> Result<DistanceReport, DistanceError> {
    let quad_tol_pow = quad_tol_pow.max(QUAD_TOL_POW);
    if !alpha.is_positive() {
        return Err(DistanceError::AlphaNotPositive(alpha.clone()));
    }
    let n = params.n();
    let lambda = params.lambda();
    let al = alpha * lambda;
    let n_plus_1_fact = Rational::from_integer(factorial(n + 1));
    let asym = pow_u(alpha, n) * pow_u(lambda, n + 1) / &n_plus_1_fact;
    let digits = effective_digits(digits, &asym, n);

    let exact = exp_eval(&al, digits)
        .add_rat(&-exp_partial_sum(&al, n))
        .div_rat(alpha);

    let prefactor = &asym * rat(n as i64 + 1); // alpha^n lambda^{n+1} / n!
    let integral = integrate(
        &IntegrandId::FmKernel {
            n,
            lambda: lambda.clone(),
            alpha: alpha.clone(),
        },
        &ten_pow(-quad_tol_pow),
    )?;
    let integral_check = integral.mul_rat(&prefactor);

    // asym * (1 + al/(n+2) + al^2 c / ((n+2)(n+3))) with c = 1 (lower) or
    // c = e^{alpha lambda} (upper)
    let quad_coeff = &al * &al / (rat(n as i64 + 2) * rat(n as i64 + 3));
    let base = Rational::one() + &al / rat(n as i64 + 2);
    let lower_bound = HighPrecision::exact(&asym * (&base + &quad_coeff));
    let upper_bound = exp_eval(&al, digits)
        .mul_rat(&quad_coeff)
        .add_rat(&base)
        .mul_rat(&asym);
    let ratio_to_asymptotic = exact.div_rat(&asym);

    Ok(DistanceReport {
        exact,
        integral_check,
        lower_bound,
        upper_bound,
        asymptotic: HighPrecision::exact(asym),
        ratio_to_asymptotic,
    })
}

/// Total variation distance between two laws given by pmfs, or between a
/// finite pmf and a Poisson law.
///
/// Finite-finite: `(1/2) sum_j |p1(j) - p2(j)|`, exact. Finite-Poisson:
/// `sum_{j<=n} (p1(j) - e^{-lambda} lambda^j / j!)^+`; the positive-part
/// form over the finite support is exact because `p1` vanishes beyond `n`.
pub fn tv_generic(p1: &FinitePmf, other: PmfRef, digits: u32) -> HighPrecision {
    match other {
        PmfRef::Finite(p2) => {
            let jmax = p1.n().max(p2.n());
            let zero = Rational::zero();
            let mut total = Rational::zero();
            for j in 0..=jmax {
                let a = p1.probs().get(j).unwrap_or(&zero);
                let b = p2.probs().get(j).unwrap_or(&zero);
                total += (a - b).abs();
            }
            HighPrecision::exact(total / rat(2))
        }
        PmfRef::Poisson(lambda) => {
            let masses = distributions::poisson_pmf_prefix(lambda, p1.n(), digits);
            let mut total = HighPrecision::zero();
            for (p, mass) in p1.probs().iter().zip(&masses) {
                let diff = HighPrecision::exact(p.clone()).sub(mass);
                total = total.add(&diff.positive_part());
            }
            total
        }
    }
}

/// Distance report for `d_tv(Z_n(lambda), Z(lambda))`.
///
/// `exact` comes from the positive-part sum over the censored matching pmf;
/// `integral_check` from
/// `(lambda^{n+1} / (2 n!)) integral_0^1 [y^n + (2-y)^n] e^{-lambda y} dy`.
pub fn tv_matching(params: &MatchingParams, digits: u32) -> Result<DistanceReport, DistanceError> {
    tv_matching_with_quad_tol(params, digits, QUAD_TOL_POW)
}

/// As [`tv_matching`] with an explicit quadrature tolerance
/// `10^-quad_tol_pow` for the integral route (never looser than the
/// default).
pub fn tv_matching_with_quad_tol(
    params: &MatchingParams,
    digits: u32,
    quad_tol_pow: i64,
) -> Result<DistanceReport, DistanceError> {
    let quad_tol_pow = quad_tol_pow.max(QUAD_TOL_POW);
    let n = params.n();
    let lambda = params.lambda();
    let two_pow_n = pow_u(&rat(2), n);
    let asym = &two_pow_n * pow_u(lambda, n + 1) / Rational::from_integer(factorial(n + 1));
    let digits = effective_digits(digits, &asym, n);

    let pmf = distributions::generalized_matching_pmf(params);
    let exact = tv_generic(&pmf, PmfRef::Poisson(lambda), digits);

    let prefactor = pow_u(lambda, n + 1) / (rat(2) * Rational::from_integer(factorial(n)));
    let integral = integrate(
        &IntegrandId::TvKernel {
            n,
            lambda: lambda.clone(),
        },
        &ten_pow(-quad_tol_pow),
    )?;
    let integral_check = integral.mul_rat(&prefactor);

    // lower factor: 1 - (2 lambda/(n+2)) (1 - 2^{-(n+1)})
    // upper adds    (4 lambda^2/((n+2)(n+3))) (1 - (n+3)/2^{n+2})
    let one = Rational::one();
    let lower_factor =
        &one - rat(2) * lambda / rat(n as i64 + 2) * (&one - &one / (&two_pow_n * rat(2)));
    let extra = rat(4) * lambda * lambda / (rat(n as i64 + 2) * rat(n as i64 + 3))
        * (&one - rat(n as i64 + 3) / (&two_pow_n * rat(4)));
    let lower_bound = HighPrecision::exact(&asym * &lower_factor);
    let upper_bound = HighPrecision::exact(&asym * (&lower_factor + &extra));
    let ratio_to_asymptotic = exact.div_rat(&asym);

    Ok(DistanceReport {
        exact,
        integral_check,
        lower_bound,
        upper_bound,
        asymptotic: HighPrecision::exact(asym),
        ratio_to_asymptotic,
    })
}

/// Series-only evaluation of `d_alpha(Z_n(lambda), Z(lambda))`, skipping the
/// quadrature route.
pub fn d_alpha_matching_exact(
    params: &MatchingParams,
    alpha: &Rational,
    digits: u32,
) -> HighPrecision {
    let n = params.n();
    let al = alpha * params.lambda();
    let asym =
        pow_u(alpha, n) * pow_u(params.lambda(), n + 1) / Rational::from_integer(factorial(n + 1));
    let digits = effective_digits(digits, &asym, n);
    exp_eval(&al, digits)
        .add_rat(&-exp_partial_sum(&al, n))
        .div_rat(alpha)
}

/// Positive-part evaluation of `d_tv(Z_n(lambda), Z(lambda))`, skipping the
/// quadrature route.
pub fn tv_matching_exact(params: &MatchingParams, digits: u32) -> HighPrecision {
    let n = params.n();
    let lambda = params.lambda();
    let asym = pow_u(&rat(2), n) * pow_u(lambda, n + 1) / Rational::from_integer(factorial(n + 1));
    let digits = effective_digits(digits, &asym, n);
    let pmf = distributions::generalized_matching_pmf(params);
    tv_generic(&pmf, PmfRef::Poisson(lambda), digits)
}

/// Exact value, two-sided bounds, asymptotic equivalent and rate ratio,
/// without the quadrature cross-check. Backs the table commands, which
/// would otherwise pay for one adaptive integration per row.
#[derive(Debug, Clone)]
pub struct BoundsRow {
    pub exact: HighPrecision,
    pub lower_bound: HighPrecision,
    pub upper_bound: HighPrecision,
    pub asymptotic: Rational,
    pub ratio_to_asymptotic: HighPrecision,
}

impl BoundsRow {
    pub fn sandwich_ok(&self, margin: u32) -> bool {
        self.lower_bound.certified_below(&self.exact, margin)
            && self.exact.certified_below(&self.upper_bound, margin)
    }
}

pub fn d_alpha_matching_bounds(
    params: &MatchingParams,
    alpha: &Rational,
    digits: u32,
) -> Result<BoundsRow, DistanceError> {
    if !alpha.is_positive() {
        return Err(DistanceError::AlphaNotPositive(alpha.clone()));
    }
    let n = params.n();
    let al = alpha * params.lambda();
    let asym =
        pow_u(alpha, n) * pow_u(params.lambda(), n + 1) / Rational::from_integer(factorial(n + 1));
    let digits = effective_digits(digits, &asym, n);
    let exact = exp_eval(&al, digits)
        .add_rat(&-exp_partial_sum(&al, n))
        .div_rat(alpha);
    let quad_coeff = &al * &al / (rat(n as i64 + 2) * rat(n as i64 + 3));
    let base = Rational::one() + &al / rat(n as i64 + 2);
    let lower_bound = HighPrecision::exact(&asym * (&base + &quad_coeff));
    let upper_bound = exp_eval(&al, digits)
        .mul_rat(&quad_coeff)
        .add_rat(&base)
        .mul_rat(&asym);
    let ratio_to_asymptotic = exact.div_rat(&asym);
    Ok(BoundsRow {
        exact,
        lower_bound,
        upper_bound,
        asymptotic: asym,
        ratio_to_asymptotic,
    })
}

pub fn tv_matching_bounds(params: &MatchingParams, digits: u32) -> BoundsRow {
    let n = params.n();
    let lambda = params.lambda();
    let two_pow_n = pow_u(&rat(2), n);
    let asym = &two_pow_n * pow_u(lambda, n + 1) / Rational::from_integer(factorial(n + 1));
    let exact = tv_matching_exact(params, digits);
    let one = Rational::one();
    let lower_factor =
        &one - rat(2) * lambda / rat(n as i64 + 2) * (&one - &one / (&two_pow_n * rat(2)));
    let extra = rat(4) * lambda * lambda / (rat(n as i64 + 2) * rat(n as i64 + 3))
        * (&one - rat(n as i64 + 3) / (&two_pow_n * rat(4)));
    let ratio_to_asymptotic = exact.div_rat(&asym);
    BoundsRow {
        exact,
        lower_bound: HighPrecision::exact(&asym * &lower_factor),
        upper_bound: HighPrecision::exact(&asym * (&lower_factor + &extra)),
        asymptotic: asym,
        ratio_to_asymptotic,
    }
}

/// The published reference bounds on `d_tv(Z_n, Z)` for the classical
/// matching problem.
#[derive(Debug, Clone)]
pub struct ReferenceBounds {
    /// `2^n / n!`
    pub diaconis: Rational,
    /// `2^n / (n+1)!`
    pub dasgupta: Rational,
    /// `(2^n/(n+1)!) (1 + 2/(n+2) + 4 e^2 / ((n+2)(n+3)))`
    pub corollary: HighPrecision,
}

pub fn reference_bounds(n: usize, digits: u32) -> ReferenceBounds {
    assert!(n >= 1);
    let two_pow_n = pow_u(&rat(2), n);
    let diaconis = &two_pow_n / Rational::from_integer(factorial(n));
    let dasgupta = &two_pow_n / Rational::from_integer(factorial(n + 1));
    let corollary = exp_eval(&rat(2), digits)
        .mul_rat(&(rat(4) / (rat(n as i64 + 2) * rat(n as i64 + 3))))
        .add_rat(&(Rational::one() + rat(2) / rat(n as i64 + 2)))
        .mul_rat(&dasgupta);
    ReferenceBounds {
        diaconis,
        dasgupta,
        corollary,
    }
}

/// `min { d_tv(X, Z(lambda)) : X supported in {0, .., n} } = Pr(Z(lambda) > n)`.
///
/// The minimum is attained exactly by the laws whose masses dominate the
/// Poisson masses on `{0, .., n}`. The censored matching model itself only
/// exists for `lambda <= 1`, but the Poisson-tail value (and its minimality)
/// is well-defined for any `lambda > 0` and is returned as such.
pub fn min_tv_over_support(n: usize, lambda: &Rational, digits: u32) -> HighPrecision {
    poisson_tail(lambda, n, digits)
}

/// Ratio `d_tv(Z_n(lambda), Z(lambda)) / d_alpha(Z_n(lambda), Z(lambda))`
/// with propagated error bounds. The denominator is strictly positive for
/// every finite `n`, so the interval division always succeeds.
pub fn tv_fm_ratio(
    params: &MatchingParams,
    alpha: &Rational,
    digits: u32,
) -> Result<HighPrecision, DistanceError> {
    if !alpha.is_positive() {
        return Err(DistanceError::AlphaNotPositive(alpha.clone()));
    }
    let tv = tv_matching_exact(params, digits);
    let fm = d_alpha_matching_exact(params, alpha, digits);
    Ok(tv
        .div(&fm)
        .expect("d_alpha(Z_n, Z) is strictly positive for finite n"))
}
