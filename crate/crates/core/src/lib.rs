//! Exact and rigorously error-bounded computation of factorial-moment and
//! total-variation distances between matching distributions and Poisson laws.
//!
//! The crate is organized around exact rational arithmetic: every finite sum
//! (pmf entries, factorial moments, partial sums of series) is a
//! [`numerics::Rational`] and is never rounded. Transcendental quantities
//! (`e^x`, Poisson masses, definite integrals) are carried as
//! [`numerics::HighPrecision`] values, a decimal approximation paired with a
//! certified absolute error bound.
//!
//! Modules:
//! - [`numerics`]: rationals, error-bounded values, exponential series with
//!   certified tails, adaptive Gauss-Legendre quadrature.
//! - [`distributions`]: classical and censored matching pmfs, factorial
//!   moments, and the moment-inversion formula.
//! - [`distances`]: the factorial moment distance `d_alpha`, the total
//!   variation distance, closed forms for the matching-vs-Poisson pair, all
//!   reference bounds and asymptotic equivalents.
//! - [`simulation`]: seeded, reproducible Monte Carlo realization of the
//!   censored matching process plus an exhaustive enumeration oracle.
//! - [`checks`]: the named verification suite run by the CLI `verify` command.

pub mod checks;
pub mod distances;
pub mod distributions;
pub mod numerics;
pub mod simulation;

pub use distances::{
    d_alpha_generic, d_alpha_matching, d_alpha_matching_bounds, d_alpha_matching_exact,
    d_alpha_matching_with_quad_tol, min_tv_over_support, reference_bounds, tv_fm_ratio, tv_generic,
    tv_matching, tv_matching_bounds, tv_matching_exact, tv_matching_with_quad_tol, BoundsRow,
    DistanceReport, MomentSeqRef, PmfRef, PoissonMoments,
};
pub use distributions::{
    classical_matching_pmf, factorial_moments, generalized_matching_pmf, invert_factorial_moments,
    matching_factorial_moment, pgf_eval, poisson_pmf_prefix, thinning_pmf, FactorialMomentSeq,
    FinitePmf, MatchingParams, PmfMethod, SignedMassSeq,
};
pub use numerics::{
    exp_eval, exp_partial_sum, exp_tail_integral, integrate, poisson_tail, HighPrecision,
    IntegrandId, Rational,
};
pub use simulation::{
    enumerate_exact, run_monte_carlo, sample_censored_matches, ComparisonStats, EmpiricalPmf,
    SimConfig,
};
