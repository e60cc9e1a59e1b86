//! Acceptance suite: one test per release criterion, each printing a named
//! pass line. Tolerances are pinned in the assertions, not configurable.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use fmdist::checks::{self, CheckConfig, ReportGrid, STRICT_MARGIN};
use fmdist::distributions::{
    classical_matching_pmf, generalized_matching_pmf, thinning_pmf, MatchingParams,
};
use fmdist::numerics::{factorial, parse_rational, pow_u, rat, ratio, ten_pow, Rational};
use fmdist::simulation::{enumerate_exact, run_monte_carlo, SimConfig};
use fmdist::{min_tv_over_support, reference_bounds, tv_generic, PmfRef};
use num_traits::{One, Signed};
use std::sync::OnceLock;

const SEED: u64 = 42;

fn grid() -> &'static ReportGrid {
    static GRID: OnceLock<ReportGrid> = OnceLock::new();
    GRID.get_or_init(|| ReportGrid::build(50))
}

fn pass(criterion: usize, name: &str) {
    println!("acceptance criterion {criterion:2} ({name}): PASS");
}

fn criterion_lambdas() -> Vec<Rational> {
    vec![ratio(1, 10), ratio(1, 2), ratio(9, 10), rat(1)]
}

#[test]
fn criterion_01_matching_factorial_moments_are_lambda_powers() {
    // Exact rational identity E(Z_n(lambda))_k = lambda^k 1{k<=n},
    // n <= 25, k <= n+5, lambda in {1/10, 1/2, 9/10, 1}.
    let outcome = checks::check_matching_factorial_moments();
    assert!(outcome.passed, "{}", outcome.detail);
    pass(1, "matching factorial moments");
}

#[test]
fn criterion_02_pmf_triple_agreement() {
    for lambda in criterion_lambdas() {
        for n in 1..=25 {
            let params = MatchingParams::new(n, lambda.clone()).unwrap();
            let direct = generalized_matching_pmf(&params);
            let thinned = thinning_pmf(&params);
            assert_eq!(
                direct.probs(),
                thinned.probs(),
                "thinning mismatch at n={n}"
            );
            if n <= 8 {
                let enumerated = enumerate_exact(n, &lambda).unwrap();
                assert_eq!(
                    direct.probs(),
                    enumerated.probs(),
                    "enumeration mismatch at n={n}"
                );
            }
        }
    }
    pass(2, "closed form = thinning = enumeration");
}

#[test]
fn criterion_03_moment_inversion_round_trip() {
    // 500 random pmfs with support <= 30 recovered exactly, plus the
    // infeasible lambda=2, n=2 sequence flagged with a -2 mass.
    let outcome = checks::check_moment_inversion_round_trip(SEED);
    assert!(outcome.passed, "{}", outcome.detail);
    pass(3, "moment inversion round trip");
}

#[test]
fn criterion_04_tv_sandwich_and_rate() {
    for (n, lambda, report) in &grid().tv {
        assert!(
            report.sandwich_ok(STRICT_MARGIN),
            "tv sandwich fails at n={n} lambda={lambda}"
        );
    }
    // rate pin at n = 30, lambda = 1: |exact (n+1)!/2^n - 1| <= 2/32 + 0.01
    let (_, _, report) = grid()
        .tv
        .iter()
        .find(|(n, lambda, _)| *n == 30 && lambda.is_one())
        .expect("grid covers n=30 lambda=1");
    let scale = Rational::from_integer(factorial(31)) / pow_u(&rat(2), 30);
    let factor = report.exact.mul_rat(&scale);
    let allowance = ratio(2, 32) + ratio(1, 100);
    assert!(
        (factor.value() - rat(1)).abs() + factor.error_bound() <= allowance,
        "tv rate factor {} too far from 1",
        factor.value()
    );
    pass(4, "tv sandwich and asymptotic rate");
}

#[test]
fn criterion_05_fm_sandwich_and_rate() {
    for (n, lambda, alpha, report) in &grid().fm {
        assert!(
            report.sandwich_ok(STRICT_MARGIN),
            "fm sandwich fails at n={n} lambda={lambda} alpha={alpha}"
        );
    }
    // rate pin at n = 30, alpha = 2, lambda = 1
    let (_, _, _, report) = grid()
        .fm
        .iter()
        .find(|(n, lambda, alpha, _)| *n == 30 && lambda.is_one() && *alpha == rat(2))
        .expect("grid covers n=30 alpha=2 lambda=1");
    let scale = Rational::from_integer(factorial(31)) / pow_u(&rat(2), 30);
    let factor = report.exact.mul_rat(&scale);
    let allowance = ratio(2, 32) + ratio(1, 100);
    assert!(
        (factor.value() - rat(1)).abs() + factor.error_bound() <= allowance,
        "fm rate factor {} too far from 1",
        factor.value()
    );
    pass(5, "fm sandwich and asymptotic rate");
}

#[test]
fn criterion_06_series_integral_agreement() {
    // Quadrature tolerance 10^-12 is pinned inside the report constructors.
    for (n, lambda, report) in &grid().tv {
        assert!(
            report.series_integral_consistent(),
            "tv routes disagree at n={n} lambda={lambda}"
        );
    }
    for (n, lambda, alpha, report) in &grid().fm {
        assert!(
            report.series_integral_consistent(),
            "fm routes disagree at n={n} lambda={lambda} alpha={alpha}"
        );
    }
    pass(6, "series vs integral agreement");
}

#[test]
fn criterion_07_domination_and_monotonicity() {
    let outcome = checks::check_tv_dominated_by_d2(SEED);
    assert!(outcome.passed, "{}", outcome.detail);
    let outcome = checks::check_alpha_monotonicity(SEED);
    assert!(outcome.passed, "{}", outcome.detail);
    pass(7, "d_tv <= d_2 and alpha monotonicity");
}

#[test]
fn criterion_08_minimality_and_tv_attainment() {
    let outcome = checks::check_fm_minimality(SEED, 50);
    assert!(outcome.passed, "{}", outcome.detail);

    // min over laws on {0..3} of d_tv(X, Poisson(1)), 10 digits pinned
    let minimum = min_tv_over_support(3, &rat(1), 50);
    let reference = parse_rational("0.0189881569").unwrap();
    assert!(
        (minimum.value() - &reference).abs() <= minimum.error_bound() + &ten_pow(-10),
        "minimum {} differs from pinned value",
        minimum.value()
    );

    // an explicitly constructed dominating law attains it within 10^-10
    let x = checks::dominating_pmf(3, &rat(1), 50);
    let attained = tv_generic(&x, PmfRef::Poisson(&rat(1)), 50);
    assert!(
        (attained.value() - minimum.value()).abs()
            <= attained.error_bound() + minimum.error_bound() + ten_pow(-10)
    );
    pass(8, "distance minimality and tv attainment");
}

#[test]
fn criterion_09_classical_reference_values() {
    let tv3 = tv_generic(&classical_matching_pmf(3), PmfRef::Poisson(&rat(1)), 50);
    let reference = parse_rational("0.2374739853").unwrap();
    assert!(
        (tv3.value() - &reference).abs() <= tv3.error_bound() + &ten_pow(-9),
        "d_tv(Z_3, Z) = {} differs from pinned value",
        tv3.value()
    );
    let bounds = reference_bounds(3, 50);
    assert_eq!(bounds.dasgupta, ratio(1, 3));
    assert_eq!(bounds.diaconis, ratio(4, 3));
    assert!(
        tv3.upper() < bounds.dasgupta,
        "dasgupta bound must dominate"
    );
    assert!(bounds.dasgupta < bounds.diaconis);
    let corollary_ref = parse_rational("0.7950686").unwrap();
    assert!(
        (bounds.corollary.value() - &corollary_ref).abs()
            <= bounds.corollary.error_bound() + &ten_pow(-6),
        "corollary value {} differs from pinned value",
        bounds.corollary.value()
    );
    assert!(tv3.upper() < bounds.corollary.lower());
    pass(9, "classical-case reference numbers");
}

#[test]
fn criterion_10_ratio_non_domination() {
    let outcome = checks::check_tv_fm_ratio_growth(50);
    assert!(outcome.passed, "{}", outcome.detail);
    pass(10, "tv/fm ratio growth evidence");
}

#[test]
fn criterion_11_monte_carlo_concordance() {
    let params = MatchingParams::new(5, ratio(1, 2)).unwrap();
    let cfg = SimConfig::new(params, 1_000_000, SEED, 1).unwrap();
    let (empirical, stats) = run_monte_carlo(&cfg);
    assert!(stats.pass, "a standardized deviation exceeded 5");
    assert!(
        stats.max_abs_dev < 0.002,
        "max abs deviation {} too large",
        stats.max_abs_dev
    );
    // identical rerun
    let (again, stats_again) = run_monte_carlo(&cfg);
    assert_eq!(empirical, again, "rerun changed the counts");
    assert_eq!(stats.per_bin_z, stats_again.per_bin_z);

    // impossible bin j = n-1 for lambda = 1 stays empty
    let params = MatchingParams::new(3, rat(1)).unwrap();
    let cfg = SimConfig::new(params, 100_000, SEED, 2).unwrap();
    let (empirical, _) = run_monte_carlo(&cfg);
    assert_eq!(
        empirical.counts[2], 0,
        "mass observed on the impossible bin"
    );
    pass(11, "Monte Carlo concordance and reproducibility");
}

#[test]
fn verification_suite_is_green() {
    // The full named check suite (superset of several criteria) must pass.
    let cfg = CheckConfig {
        digits: 50,
        seed: SEED,
        workers: 2,
    };
    let outcomes = checks::run_checks(&cfg, None);
    assert_eq!(outcomes.len(), checks::CHECK_NAMES.len());
    for outcome in &outcomes {
        println!(
            "verification {:32} {} ({})",
            outcome.name,
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    assert!(outcomes.iter().all(|o| o.passed));
}
