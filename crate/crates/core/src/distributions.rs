//! Exact construction of the classical matching, censored (generalized)
//! matching, and truncated Poisson pmfs; descending factorial moments; and
//! the moment-inversion formula.
//!
//! Everything here is exact rational arithmetic. The censored matching
//! distribution on `{0, .., n}` has mass
//! `p(j) = (lambda^j / j!) * sum_{i=0}^{n-j} (-lambda)^i / i!`,
//! the law of the number of fixed points of a uniform random permutation
//! after each fixed point is independently kept with probability `lambda`.
//!
//! Only finite-support pmfs are materialized: these all have probability
//! generating functions that are entire, so every operation in this module
//! (moments of any order, inversion from moments) is unconditionally valid.
//! Poisson laws enter elsewhere via prefix mass vectors, tail probabilities
//! and the closed-form moment sequence `lambda^k`, never as a stored pmf.

use crate::numerics::{binomial, exp_eval, factorial, pow_u, rat, HighPrecision, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DistributionError {
    #[error("lambda must satisfy 0 < lambda <= 1, got {0}")]
    LambdaOutOfRange(Rational),
    #[error("n must be at least 1")]
    NTooSmall,
    #[error("pmf entry {index} is negative: {value}")]
    NegativeMass { index: usize, value: Rational },
    #[error("pmf entries sum to {0}, expected exactly 1")]
    MassSumNotOne(Rational),
    #[error("pmf must have at least one entry")]
    EmptySupport,
    #[error("moment sequence must start with moment 0 equal to 1, got {0}")]
    ZerothMomentNotOne(Rational),
    #[error("moment sequence must be non-empty")]
    EmptyMoments,
}

/// Exact probability mass function on `{0, .., n}`. Entries are
/// non-negative rationals summing to exactly 1; trailing zeros are kept so
/// that index alignment with other laws on the same range is explicit.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePmf {
    probs: Vec<Rational>,
    label: String,
}

impl FinitePmf {
    pub fn new(probs: Vec<Rational>, label: impl Into<String>) -> Result<Self, DistributionError> {
        if probs.is_empty() {
            return Err(DistributionError::EmptySupport);
        }
        for (index, p) in probs.iter().enumerate() {
            if p.is_negative() {
                return Err(DistributionError::NegativeMass {
                    index,
                    value: p.clone(),
                });
            }
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(DistributionError::MassSumNotOne(total));
        }
        Ok(FinitePmf {
            probs,
            label: label.into(),
        })
    }

    /// Point mass at `j` on the support `{0, .., n}`.
    pub fn point_mass(j: usize, n: usize) -> Self {
        assert!(j <= n);
        let mut probs = vec![Rational::zero(); n + 1];
        probs[j] = Rational::one();
        FinitePmf {
            probs,
            label: format!("delta_{j}"),
        }
    }

    /// Largest support point, i.e. the pmf lives on `{0, .., n}`.
    pub fn n(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Sequence `k -> E(X)_k` of descending factorial moments, `k = 0..=K`.
/// Moments of orders beyond `K` are implicitly zero, which is exact for any
/// law supported on `{0, .., K}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorialMomentSeq {
    moments: Vec<Rational>,
}

impl FactorialMomentSeq {
    pub fn new(moments: Vec<Rational>) -> Result<Self, DistributionError> {
        match moments.first() {
            None => Err(DistributionError::EmptyMoments),
            Some(m0) if !m0.is_one() => Err(DistributionError::ZerothMomentNotOne(m0.clone())),
            _ => Ok(FactorialMomentSeq { moments }),
        }
    }

    pub fn max_order(&self) -> usize {
        self.moments.len() - 1
    }

    /// `E(X)_k`, taking the implicit zero beyond the stored range.
    pub fn moment(&self, k: usize) -> Rational {
        self.moments.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn moments(&self) -> &[Rational] {
        &self.moments
    }
}

/// Possibly-signed mass sequence produced by moment inversion. `is_pmf`
/// records whether the entries form a genuine pmf (all non-negative, unit
/// sum): inversion of an infeasible moment sequence, such as the censored
/// matching moments with `lambda > 1`, yields negative entries here rather
/// than an error.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMassSeq {
    pub values: Vec<Rational>,
    pub is_pmf: bool,
}

/// Parameters of the censored matching distribution: permutation size `n >= 1`
/// and retention probability `0 < lambda <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingParams {
    n: usize,
    lambda: Rational,
}

impl MatchingParams {
    pub fn new(n: usize, lambda: Rational) -> Result<Self, DistributionError> {
        if n == 0 {
            return Err(DistributionError::NTooSmall);
        }
        if !lambda.is_positive() || lambda > Rational::one() {
            return Err(DistributionError::LambdaOutOfRange(lambda));
        }
        Ok(MatchingParams { n, lambda })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }
}

/// Evaluation route for [`generalized_matching_pmf_with`]; the two must agree
/// entry by entry, exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmfMethod {
    /// `p(j) = (lambda^j / j!) sum_{i=0}^{n-j} (-lambda)^i / i!`
    Direct,
    /// Inclusion-exclusion over the joint match-and-keep events:
    /// `p(j) = sum_{i=j}^{n} (-1)^{i-j} C(i, j) lambda^i / i!`
    InclusionExclusion,
}

/// Pmf of the number of fixed points of a uniform random permutation of
/// `{1, .., n}`: `p(j) = (1/j!) sum_{k=0}^{n-j} (-1)^k / k!`.
/// The entry at `j = n - 1` is always zero.
pub fn classical_matching_pmf(n: usize) -> FinitePmf {
    assert!(n >= 1, "n must be at least 1");
    // alternating_partial[m] = sum_{k=0}^{m} (-1)^k / k!
    let mut alternating_partial = Vec::with_capacity(n + 1);
    let mut acc = Rational::zero();
    let mut sign = BigInt::one();
    for k in 0..=n {
        acc += Rational::new(sign.clone(), factorial(k));
        alternating_partial.push(acc.clone());
        sign = -sign;
    }
    let probs = (0..=n)
        .map(|j| &alternating_partial[n - j] / Rational::from_integer(factorial(j)))
        .collect();
    FinitePmf::new(probs, format!("classical matching n={n}"))
        .expect("classical matching masses form a pmf")
}

/// Censored matching pmf via the default (direct) evaluation route.
pub fn generalized_matching_pmf(params: &MatchingParams) -> FinitePmf {
    generalized_matching_pmf_with(params, PmfMethod::Direct)
}

/// Censored matching pmf via a chosen evaluation route.
pub fn generalized_matching_pmf_with(params: &MatchingParams, method: PmfMethod) -> FinitePmf {
    let n = params.n;
    let lambda = &params.lambda;
    let probs: Vec<Rational> = match method {
        PmfMethod::Direct => {
            // partial[m] = sum_{i=0}^{m} (-lambda)^i / i!
            let neg = -lambda.clone();
            let mut partial = Vec::with_capacity(n + 1);
            let mut acc = Rational::zero();
            let mut term = Rational::one();
            for i in 0..=n {
                if i > 0 {
                    term = term * &neg / rat(i as i64);
                }
                acc += &term;
                partial.push(acc.clone());
            }
            (0..=n)
                .map(|j| pow_u(lambda, j) / Rational::from_integer(factorial(j)) * &partial[n - j])
                .collect()
        }
        PmfMethod::InclusionExclusion => (0..=n)
            .map(|j| {
                let mut acc = Rational::zero();
                for i in j..=n {
                    let term = Rational::from_integer(binomial(i, j)) * pow_u(lambda, i)
                        / Rational::from_integer(factorial(i));
                    if (i - j) % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            })
            .collect(),
    };
    FinitePmf::new(
        probs,
        format!("censored matching n={n} lambda={}", params.lambda),
    )
    .expect("censored matching masses form a pmf for lambda in (0, 1]")
}

/// First `n + 1` Poisson masses `e^{-lambda} lambda^j / j!` with propagated
/// error bounds.
pub fn poisson_pmf_prefix(lambda: &Rational, n: usize, digits: u32) -> Vec<HighPrecision> {
    assert!(lambda.is_positive(), "lambda must be positive");
    let e = exp_eval(&-lambda.clone(), digits);
    let mut masses = Vec::with_capacity(n + 1);
    let mut coeff = Rational::one();
    for j in 0..=n {
        if j > 0 {
            coeff = coeff * lambda / rat(j as i64);
        }
        masses.push(e.mul_rat(&coeff));
    }
    masses
}

/// Descending factorial moments `E(X)_k = sum_j (j)_k p(j)` for `k = 0..=kmax`.
pub fn factorial_moments(pmf: &FinitePmf, kmax: usize) -> FactorialMomentSeq {
    let n = pmf.n();
    // falling[j] holds (j)_k, updated in place as k grows
    let mut falling: Vec<Rational> = vec![Rational::one(); n + 1];
    let mut moments = Vec::with_capacity(kmax + 1);
    moments.push(pmf.probs().iter().sum());
    for k in 1..=kmax {
        let mut total = Rational::zero();
        for (j, f) in falling.iter_mut().enumerate() {
            if !f.is_zero() {
                *f *= rat(j as i64 - k as i64 + 1);
                if !f.is_zero() {
                    total += &*f * &pmf.probs()[j];
                }
            }
        }
        moments.push(total);
    }
    FactorialMomentSeq::new(moments).expect("pmf moments start at 1")
}

/// Closed form for the censored matching factorial moments:
/// `E(Z_n(lambda))_k = lambda^k` for `k <= n`, zero beyond.
pub fn matching_factorial_moment(params: &MatchingParams, k: usize) -> Rational {
    if k <= params.n {
        pow_u(&params.lambda, k)
    } else {
        Rational::zero()
    }
}

/// Moment sequence of the censored matching law up to order `n`, the
/// closed-form counterpart of [`factorial_moments`] applied to its pmf.
pub fn matching_moment_seq(params: &MatchingParams) -> FactorialMomentSeq {
    let moments = (0..=params.n)
        .map(|k| matching_factorial_moment(params, k))
        .collect();
    FactorialMomentSeq::new(moments).expect("moment 0 is 1")
}

/// Invert a finite factorial moment sequence back into masses:
/// `p(j) = sum_{k=j}^{K} ((-1)^{k-j} / k!) C(k, j) m_k`.
///
/// The result is a [`SignedMassSeq`]: infeasible moment sequences (for
/// example `m_k = lambda^k 1{k<=n}` with `lambda > 1`) produce negative
/// entries and `is_pmf = false` instead of an error.
pub fn invert_factorial_moments(m: &FactorialMomentSeq) -> SignedMassSeq {
    let kmax = m.max_order();
    let mut values = Vec::with_capacity(kmax + 1);
    for j in 0..=kmax {
        // (1/j!) sum_{k=j}^{K} (-1)^{k-j} m_k / (k-j)!
        let mut acc = Rational::zero();
        for k in j..=kmax {
            let term = m.moment(k) / Rational::from_integer(factorial(k - j));
            if (k - j) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        values.push(acc / Rational::from_integer(factorial(j)));
    }
    let sum: Rational = values.iter().sum();
    let is_pmf = sum.is_one() && values.iter().all(|v| !v.is_negative());
    SignedMassSeq { values, is_pmf }
}

/// Censored matching pmf derived independently as a binomial thinning of the
/// classical matching pmf:
/// `p(j) = sum_{m=j}^{n} Pr(Z_n = m) C(m, j) lambda^j (1-lambda)^{m-j}`.
pub fn thinning_pmf(params: &MatchingParams) -> FinitePmf {
    let n = params.n;
    let lambda = &params.lambda;
    let drop = Rational::one() - lambda;
    let base = classical_matching_pmf(n);
    let probs: Vec<Rational> = (0..=n)
        .map(|j| {
            let mut acc = Rational::zero();
            for m in j..=n {
                let weight =
                    Rational::from_integer(binomial(m, j)) * pow_u(lambda, j) * pow_u(&drop, m - j);
                acc += weight * &base.probs()[m];
            }
            acc
        })
        .collect();
    FinitePmf::new(probs, format!("thinned classical n={n} lambda={lambda}"))
        .expect("binomial thinning preserves pmf-ness")
}

/// Probability generating function `E u^X = sum_j p(j) u^j`, exact.
pub fn pgf_eval(pmf: &FinitePmf, u: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for p in pmf.probs().iter().rev() {
        acc = acc * u + p;
    }
    acc
}
