//! Named verification suite: every module-level invariant expressed as a
//! pass/fail check with a stable kebab-case name. The CLI `verify` command
//! runs these; the acceptance test suite reuses the same functions.
//!
//! Check names are part of the CLI contract (the `--only` filter matches on
//! substrings), so renames are breaking changes. Details never contain
//! commas, keeping CSV output quoting-free.

use crate::distances::{
    d_alpha_generic, d_alpha_matching, d_alpha_matching_exact, min_tv_over_support, tv_fm_ratio,
    tv_generic, tv_matching, DistanceReport, MomentSeqRef, PmfRef, PoissonMoments,
};
use crate::distributions::{
    classical_matching_pmf, factorial_moments, generalized_matching_pmf,
    generalized_matching_pmf_with, invert_factorial_moments, matching_factorial_moment,
    matching_moment_seq, poisson_pmf_prefix, thinning_pmf, FactorialMomentSeq, FinitePmf,
    MatchingParams, PmfMethod,
};
use crate::numerics::{
    exp_eval, exp_partial_sum, exp_tail_integral, factorial, integrate, poisson_tail, pow_u, rat,
    ratio, ten_pow, HighPrecision, IntegrandId, Rational,
};
use crate::simulation::{
    enumerate_exact, fixed_point_tally, rng::SplitMix64, run_monte_carlo, shuffled_permutation,
    SimConfig,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Margin multiplier for certified strict inequalities: a sandwich claim
/// `a < b` only passes when the gap exceeds ten times the combined error
/// bounds.
pub const STRICT_MARGIN: u32 = 10;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Working precision floor for error-bounded evaluations.
    pub digits: u32,
    /// Seed for every randomized grid.
    pub seed: u64,
    /// Worker count for the simulation checks.
    pub workers: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            digits: 50,
            seed: 42,
            workers: 1,
        }
    }
}

/// All check names, in execution order.
pub const CHECK_NAMES: &[&str] = &[
    "exp-tail-identity",
    "exp-partial-sum-monotonicity",
    "exp-tail-integral-sandwich",
    "poisson-tail-monotonicity",
    "poisson-factorial-moments",
    "matching-pmf-normalization",
    "thinning-equivalence",
    "matching-factorial-moments",
    "moment-inversion-round-trip",
    "classical-support-gap",
    "matching-mean-variance",
    "alpha-monotonicity",
    "tv-dominated-by-d2",
    "fm-sandwich",
    "tv-sandwich",
    "series-integral-agreement",
    "asymptotic-ratio-containment",
    "fm-closed-form-vs-generic",
    "fm-minimality",
    "tv-minimum-attained",
    "min-tv-sandwich",
    "tv-fm-ratio-growth",
    "enumeration-agreement",
    "derangement-tally",
    "simulation-reproducibility",
    "shuffle-uniformity",
    "monte-carlo-concordance",
];

/// Run all checks whose name contains `filter` (all of them when `None`).
pub fn run_checks(cfg: &CheckConfig, filter: Option<&str>) -> Vec<CheckOutcome> {
    let mut grid: Option<ReportGrid> = None;
    CHECK_NAMES
        .iter()
        .filter(|name| filter.is_none_or(|f| name.contains(f)))
        .map(|name| run_named_check(name, cfg, &mut grid))
        .collect()
}

fn run_named_check(
    name: &'static str,
    cfg: &CheckConfig,
    grid: &mut Option<ReportGrid>,
) -> CheckOutcome {
    let needs_grid = matches!(
        name,
        "fm-sandwich"
            | "tv-sandwich"
            | "series-integral-agreement"
            | "asymptotic-ratio-containment"
    );
    if needs_grid && grid.is_none() {
        *grid = Some(ReportGrid::build(cfg.digits));
    }
    let lazy_grid = || grid.as_ref().expect("grid built above");
    match name {
        "exp-tail-identity" => check_exp_tail_identity(),
        "exp-partial-sum-monotonicity" => check_exp_partial_sum_monotonicity(),
        "exp-tail-integral-sandwich" => check_exp_tail_integral_sandwich(),
        "poisson-tail-monotonicity" => check_poisson_tail_monotonicity(cfg.digits),
        "poisson-factorial-moments" => check_poisson_factorial_moments(cfg.digits),
        "matching-pmf-normalization" => check_matching_pmf_normalization(),
        "thinning-equivalence" => check_thinning_equivalence(),
        "matching-factorial-moments" => check_matching_factorial_moments(),
        "moment-inversion-round-trip" => check_moment_inversion_round_trip(cfg.seed),
        "classical-support-gap" => check_classical_support_gap(),
        "matching-mean-variance" => check_matching_mean_variance(),
        "alpha-monotonicity" => check_alpha_monotonicity(cfg.seed),
        "tv-dominated-by-d2" => check_tv_dominated_by_d2(cfg.seed),
        "fm-sandwich" => check_fm_sandwich(lazy_grid()),
        "tv-sandwich" => check_tv_sandwich(lazy_grid()),
        "series-integral-agreement" => check_series_integral_agreement(lazy_grid()),
        "asymptotic-ratio-containment" => check_asymptotic_ratio_containment(lazy_grid()),
        "fm-closed-form-vs-generic" => check_fm_closed_form_vs_generic(cfg.digits),
        "fm-minimality" => check_fm_minimality(cfg.seed, cfg.digits),
        "tv-minimum-attained" => check_tv_minimum_attained(cfg.digits),
        "min-tv-sandwich" => check_min_tv_sandwich(cfg.digits),
        "tv-fm-ratio-growth" => check_tv_fm_ratio_growth(cfg.digits),
        "enumeration-agreement" => check_enumeration_agreement(),
        "derangement-tally" => check_derangement_tally(),
        "simulation-reproducibility" => check_simulation_reproducibility(cfg),
        "shuffle-uniformity" => check_shuffle_uniformity(cfg.seed),
        "monte-carlo-concordance" => check_monte_carlo_concordance(cfg),
        other => unreachable!("unknown check {other}"),
    }
}

// ---------------------------------------------------------------------------
// shared grids

/// Distance reports over the full sandwich grid:
/// `n = 1..=30`, `lambda in {1/10, 1/2, 1}`, and for the factorial-moment
/// metric additionally `alpha in {1/2, 1, 2, 3}`. Built once and shared by
/// every check that consumes it.
pub struct ReportGrid {
    pub fm: Vec<(usize, Rational, Rational, DistanceReport)>,
    pub tv: Vec<(usize, Rational, DistanceReport)>,
}

pub fn grid_lambdas() -> Vec<Rational> {
    vec![ratio(1, 10), ratio(1, 2), rat(1)]
}

pub fn grid_alphas() -> Vec<Rational> {
    vec![ratio(1, 2), rat(1), rat(2), rat(3)]
}

impl ReportGrid {
    pub fn build(digits: u32) -> Self {
        let mut fm = Vec::new();
        let mut tv = Vec::new();
        for lambda in grid_lambdas() {
            for n in 1..=30 {
                let params = MatchingParams::new(n, lambda.clone()).unwrap();
                let report = tv_matching(&params, digits).expect("tv report");
                tv.push((n, lambda.clone(), report));
                for alpha in grid_alphas() {
                    let report = d_alpha_matching(&params, &alpha, digits).expect("fm report");
                    fm.push((n, lambda.clone(), alpha.clone(), report));
                }
            }
        }
        ReportGrid { fm, tv }
    }
}

/// Seeded random pmf with `entries` masses drawn as rationals with
/// denominators at most 1000 and normalized exactly.
pub fn random_pmf_with_entries(rng: &mut SplitMix64, entries: usize) -> FinitePmf {
    loop {
        let raw: Vec<Rational> = (0..entries)
            .map(|_| {
                let den = 1 + rng.below(1000);
                let num = rng.below(den + 1);
                Rational::new(num.into(), den.into())
            })
            .collect();
        let total: Rational = raw.iter().sum();
        if total.is_zero() {
            continue;
        }
        let probs = raw.into_iter().map(|r| r / &total).collect();
        return FinitePmf::new(probs, "random").expect("normalized masses form a pmf");
    }
}

/// Seeded random pmf with support size drawn uniformly from `1..=max_entries`.
pub fn random_finite_pmf(rng: &mut SplitMix64, max_entries: usize) -> FinitePmf {
    let entries = 1 + rng.below(max_entries as u64) as usize;
    random_pmf_with_entries(rng, entries)
}

// ---------------------------------------------------------------------------
// numerics checks

pub fn check_exp_tail_identity() -> CheckOutcome {
    let name = "exp-tail-identity";
    let xs = [
        rat(-4),
        rat(-2),
        rat(-1),
        ratio(-1, 2),
        ratio(1, 2),
        rat(1),
        rat(2),
        rat(4),
    ];
    let ns = [0usize, 1, 2, 5, 10, 20, 40, 60];
    let mut points = 0;
    for x in &xs {
        for &n in &ns {
            let integral = match exp_tail_integral(x, n, 12) {
                Ok(hp) => hp,
                Err(e) => {
                    return CheckOutcome::new(
                        name,
                        false,
                        format!("quadrature failed at x={x} n={n}: {e}"),
                    )
                }
            };
            let series = exp_eval(x, 20).add_rat(&-exp_partial_sum(x, n));
            if !integral.agrees_with(&series) {
                return CheckOutcome::new(name, false, format!("routes disagree at x={x} n={n}"));
            }
            points += 1;
        }
    }
    CheckOutcome::new(
        name,
        true,
        format!("{points} grid points; two routes agree"),
    )
}

pub fn check_exp_partial_sum_monotonicity() -> CheckOutcome {
    let name = "exp-partial-sum-monotonicity";
    for x in [ratio(1, 2), rat(1), rat(3), rat(4)] {
        let e = exp_eval(&x, 40);
        let mut prev = exp_partial_sum(&x, 0);
        for n in 1..=25 {
            let cur = exp_partial_sum(&x, n);
            if cur <= prev {
                return CheckOutcome::new(name, false, format!("not increasing at x={x} n={n}"));
            }
            if cur >= e.lower() {
                return CheckOutcome::new(
                    name,
                    false,
                    format!("partial sum not below e^x at x={x} n={n}"),
                );
            }
            prev = cur;
        }
    }
    CheckOutcome::new(
        name,
        true,
        "partial sums increase strictly to e^x for x > 0",
    )
}

pub fn check_exp_tail_integral_sandwich() -> CheckOutcome {
    let name = "exp-tail-integral-sandwich";
    let e = exp_eval(&rat(1), 40);
    for n in 0..=60usize {
        let f = IntegrandId::ExpTail { x: rat(1), n };
        let integral = match integrate(&f, &ten_pow(-8)) {
            Ok(hp) => hp,
            Err(err) => return CheckOutcome::new(name, false, format!("n={n}: {err}")),
        };
        let lo = ratio(1, n as i64 + 1);
        // conservative upper envelope: use the certified lower end of e
        let hi = &lo * (rat(1) + (e.lower() - rat(1)) / rat(n as i64 + 2));
        if integral.lower() <= lo {
            return CheckOutcome::new(name, false, format!("lower bound fails at n={n}"));
        }
        if integral.upper() >= hi {
            return CheckOutcome::new(name, false, format!("upper bound fails at n={n}"));
        }
    }
    CheckOutcome::new(
        name,
        true,
        "1/(n+1) < I(n) < (1/(n+1))(1+(e-1)/(n+2)) for n <= 60",
    )
}

pub fn check_poisson_tail_monotonicity(digits: u32) -> CheckOutcome {
    let name = "poisson-tail-monotonicity";
    let lambdas = [ratio(1, 10), ratio(1, 2), rat(1), rat(2)];
    for lambda in &lambdas {
        let mut prev = poisson_tail(lambda, 0, digits);
        for n in 1..=20 {
            let cur = poisson_tail(lambda, n, digits);
            if !cur.certified_below(&prev, 1) {
                return CheckOutcome::new(
                    name,
                    false,
                    format!("not decreasing in n at lambda={lambda} n={n}"),
                );
            }
            prev = cur;
        }
    }
    for n in [0usize, 3, 10] {
        for pair in lambdas.windows(2) {
            let small = poisson_tail(&pair[0], n, digits);
            let large = poisson_tail(&pair[1], n, digits);
            if !small.certified_below(&large, 1) {
                return CheckOutcome::new(
                    name,
                    false,
                    format!("not increasing in lambda at n={n}"),
                );
            }
        }
    }
    CheckOutcome::new(name, true, "strictly decreasing in n; increasing in lambda")
}

/// Numerical verification that the Poisson factorial moments are
/// `lambda^k`, using the exact identity
/// `sum_{j>M} (j)_k mass_j = lambda^k Pr(Z > M-k)` for the truncation tail.
pub fn check_poisson_factorial_moments(digits: u32) -> CheckOutcome {
    let name = "poisson-factorial-moments";
    let m = 60usize;
    for lambda in [ratio(1, 10), ratio(1, 2), rat(1)] {
        let masses = poisson_pmf_prefix(&lambda, m, digits);
        for k in 0..=10usize {
            let mut head = HighPrecision::zero();
            for (j, mass) in masses.iter().enumerate() {
                // (j)_k as an exact integer factor
                if j >= k {
                    let mut falling = Rational::one();
                    for i in 0..k {
                        falling *= rat((j - i) as i64);
                    }
                    head = head.add(&mass.mul_rat(&falling));
                }
            }
            let expected = pow_u(&lambda, k);
            let tail = poisson_tail(&lambda, m - k, digits).mul_rat(&expected);
            let total = head.add(&tail);
            if !total.agrees_with(&HighPrecision::exact(expected)) {
                return CheckOutcome::new(
                    name,
                    false,
                    format!("moment {k} of Poisson({lambda}) differs from lambda^k"),
                );
            }
        }
    }
    CheckOutcome::new(name, true, "E(Z(lambda))_k = lambda^k verified to k = 10")
}

// ---------------------------------------------------------------------------
// distribution checks

fn normalization_lambdas() -> Vec<Rational> {
    vec![
        ratio(1, 10),
        ratio(1, 4),
        ratio(1, 2),
        ratio(3, 4),
        ratio(9, 10),
        rat(1),
    ]
}

pub fn check_matching_pmf_normalization() -> CheckOutcome {
    let name = "matching-pmf-normalization";
    for n in 1..=50 {
        for lambda in normalization_lambdas() {
            let params = MatchingParams::new(n, lambda).unwrap();
            let pmf = generalized_matching_pmf(&params);
            let total: Rational = pmf.probs().iter().sum();
            if !total.is_one() || pmf.probs().iter().any(|p| p.is_negative()) {
                return CheckOutcome::new(name, false, format!("invalid pmf at n={n}"));
            }
        }
    }
    CheckOutcome::new(name, true, "exact unit mass and non-negativity; n <= 50")
}

pub fn check_thinning_equivalence() -> CheckOutcome {
    let name = "thinning-equivalence";
    for n in 1..=25 {
        for lambda in normalization_lambdas() {
            let params = MatchingParams::new(n, lambda).unwrap();
            let direct = generalized_matching_pmf(&params);
            let incl = generalized_matching_pmf_with(&params, PmfMethod::InclusionExclusion);
            let thinned = thinning_pmf(&params);
            if direct.probs() != thinned.probs() || direct.probs() != incl.probs() {
                return CheckOutcome::new(name, false, format!("mismatch at n={n}"));
            }
        }
    }
    CheckOutcome::new(
        name,
        true,
        "direct = inclusion-exclusion = thinning; n <= 25",
    )
}

pub fn check_matching_factorial_moments() -> CheckOutcome {
    let name = "matching-factorial-moments";
    for n in 1..=25usize {
        for lambda in [ratio(1, 10), ratio(1, 2), ratio(9, 10), rat(1)] {
            let params = MatchingParams::new(n, lambda).unwrap();
            let pmf = generalized_matching_pmf(&params);
            let moments = factorial_moments(&pmf, n + 5);
            for k in 0..=n + 5 {
                if moments.moment(k) != matching_factorial_moment(&params, k) {
                    return CheckOutcome::new(name, false, format!("moment {k} differs at n={n}"));
                }
            }
        }
    }
    CheckOutcome::new(
        name,
        true,
        "E(Z_n(lambda))_k = lambda^k 1(k<=n) exactly; n <= 25",
    )
}

pub fn check_moment_inversion_round_trip(seed: u64) -> CheckOutcome {
    let name = "moment-inversion-round-trip";
    let mut rng = SplitMix64::stream(seed, 101);
    for trial in 0..500 {
        let pmf = random_finite_pmf(&mut rng, 30);
        let moments = factorial_moments(&pmf, pmf.n());
        let inverted = invert_factorial_moments(&moments);
        if !inverted.is_pmf || inverted.values != pmf.probs() {
            return CheckOutcome::new(name, false, format!("round trip failed on trial {trial}"));
        }
    }
    // infeasible moments lambda = 2, n = 2: negative mass at j = 1
    let infeasible = FactorialMomentSeq::new(vec![rat(1), rat(2), rat(4)]).unwrap();
    let inverted = invert_factorial_moments(&infeasible);
    if inverted.is_pmf || inverted.values[1] != rat(-2) {
        return CheckOutcome::new(name, false, "infeasible case not flagged".to_string());
    }
    CheckOutcome::new(
        name,
        true,
        "500 random pmfs recovered exactly; infeasible case flagged",
    )
}

pub fn check_classical_support_gap() -> CheckOutcome {
    let name = "classical-support-gap";
    for n in 2..=50 {
        if !classical_matching_pmf(n).probs()[n - 1].is_zero() {
            return CheckOutcome::new(name, false, format!("mass at n-1 nonzero for n={n}"));
        }
    }
    CheckOutcome::new(name, true, "mass at n-1 is exactly zero; n <= 50")
}

pub fn check_matching_mean_variance() -> CheckOutcome {
    let name = "matching-mean-variance";
    for n in 2..=40usize {
        for lambda in [ratio(1, 10), ratio(1, 2), ratio(9, 10), rat(1)] {
            let params = MatchingParams::new(n, lambda.clone()).unwrap();
            let moments = factorial_moments(&generalized_matching_pmf(&params), 2);
            let mean = moments.moment(1);
            let variance = moments.moment(2) + &mean - &mean * &mean;
            if mean != lambda || variance != lambda {
                return CheckOutcome::new(name, false, format!("n={n} lambda={lambda}"));
            }
        }
    }
    CheckOutcome::new(name, true, "E = Var = lambda exactly for n >= 2")
}

// ---------------------------------------------------------------------------
// distance checks

pub fn check_alpha_monotonicity(seed: u64) -> CheckOutcome {
    let name = "alpha-monotonicity";
    let alphas = grid_alphas();
    let mut rng = SplitMix64::stream(seed, 102);
    for trial in 0..1000 {
        let p1 = random_finite_pmf(&mut rng, 12);
        let p2 = random_finite_pmf(&mut rng, 12);
        let m1 = factorial_moments(&p1, p1.n());
        let m2 = factorial_moments(&p2, p2.n());
        let mut prev: Option<Rational> = None;
        for alpha in &alphas {
            let d = d_alpha_generic(
                MomentSeqRef::Finite(&m1),
                MomentSeqRef::Finite(&m2),
                alpha,
                30,
            )
            .expect("finite pair");
            let value = d.value().clone();
            if let Some(p) = prev {
                if value < p {
                    return CheckOutcome::new(
                        name,
                        false,
                        format!("d_alpha decreased in alpha on trial {trial}"),
                    );
                }
            }
            prev = Some(value);
        }
    }
    CheckOutcome::new(
        name,
        true,
        "1000 random pairs; d_alpha nondecreasing in alpha",
    )
}

pub fn check_tv_dominated_by_d2(seed: u64) -> CheckOutcome {
    let name = "tv-dominated-by-d2";
    let two = rat(2);
    let mut rng = SplitMix64::stream(seed, 103);
    for trial in 0..1000 {
        let p1 = random_finite_pmf(&mut rng, 12);
        let p2 = random_finite_pmf(&mut rng, 12);
        let tv = tv_generic(&p1, PmfRef::Finite(&p2), 30);
        let m1 = factorial_moments(&p1, p1.n());
        let m2 = factorial_moments(&p2, p2.n());
        let d2 = d_alpha_generic(
            MomentSeqRef::Finite(&m1),
            MomentSeqRef::Finite(&m2),
            &two,
            30,
        )
        .expect("finite pair");
        // both sides exact rationals
        if tv.value() > d2.value() {
            return CheckOutcome::new(name, false, format!("d_tv > d_2 on trial {trial}"));
        }
    }
    CheckOutcome::new(name, true, "1000 random pairs; d_tv <= d_2 exactly")
}

pub fn check_fm_sandwich(grid: &ReportGrid) -> CheckOutcome {
    let name = "fm-sandwich";
    for (n, lambda, alpha, report) in &grid.fm {
        if !report.sandwich_ok(STRICT_MARGIN) {
            return CheckOutcome::new(
                name,
                false,
                format!("sandwich fails at n={n} lambda={lambda} alpha={alpha}"),
            );
        }
    }
    CheckOutcome::new(
        name,
        true,
        format!("{} grid points strictly sandwiched", grid.fm.len()),
    )
}

pub fn check_tv_sandwich(grid: &ReportGrid) -> CheckOutcome {
    let name = "tv-sandwich";
    for (n, lambda, report) in &grid.tv {
        if !report.sandwich_ok(STRICT_MARGIN) {
            return CheckOutcome::new(
                name,
                false,
                format!("sandwich fails at n={n} lambda={lambda}"),
            );
        }
    }
    CheckOutcome::new(
        name,
        true,
        format!("{} grid points strictly sandwiched", grid.tv.len()),
    )
}

pub fn check_series_integral_agreement(grid: &ReportGrid) -> CheckOutcome {
    let name = "series-integral-agreement";
    for (n, lambda, alpha, report) in &grid.fm {
        if !report.series_integral_consistent() {
            return CheckOutcome::new(
                name,
                false,
                format!("fm routes disagree at n={n} lambda={lambda} alpha={alpha}"),
            );
        }
    }
    for (n, lambda, report) in &grid.tv {
        if !report.series_integral_consistent() {
            return CheckOutcome::new(
                name,
                false,
                format!("tv routes disagree at n={n} lambda={lambda}"),
            );
        }
    }
    CheckOutcome::new(
        name,
        true,
        format!(
            "{} reports agree within certified bounds",
            grid.fm.len() + grid.tv.len()
        ),
    )
}

pub fn check_asymptotic_ratio_containment(grid: &ReportGrid) -> CheckOutcome {
    let name = "asymptotic-ratio-containment";
    let one = HighPrecision::exact(rat(1));
    for (n, lambda, report) in &grid.tv {
        // ratio to 2^n lambda^{n+1}/(n+1)! lies in (lower factor, 1)
        let lower_factor = report.lower_bound.value() / report.asymptotic.value();
        if !HighPrecision::exact(lower_factor).certified_below(&report.ratio_to_asymptotic, 1)
            || !report.ratio_to_asymptotic.certified_below(&one, 1)
        {
            return CheckOutcome::new(
                name,
                false,
                format!("tv ratio containment fails at n={n} lambda={lambda}"),
            );
        }
    }
    for (n, lambda, alpha, report) in &grid.fm {
        let lower_factor =
            HighPrecision::exact(report.lower_bound.value() / report.asymptotic.value());
        let upper_factor = report
            .upper_bound
            .div(&report.asymptotic)
            .expect("asymptotic is positive");
        if !lower_factor.certified_below(&report.ratio_to_asymptotic, 1)
            || !report.ratio_to_asymptotic.certified_below(&upper_factor, 1)
        {
            return CheckOutcome::new(
                name,
                false,
                format!("fm ratio containment fails at n={n} lambda={lambda} alpha={alpha}"),
            );
        }
    }
    CheckOutcome::new(name, true, "rate factors contained in their bound windows")
}

pub fn check_fm_closed_form_vs_generic(digits: u32) -> CheckOutcome {
    let name = "fm-closed-form-vs-generic";
    for n in 1..=20usize {
        for lambda in [ratio(1, 2), rat(1)] {
            for alpha in [ratio(1, 2), rat(2)] {
                let params = MatchingParams::new(n, lambda.clone()).unwrap();
                let closed = d_alpha_matching_exact(&params, &alpha, digits);
                let moments = matching_moment_seq(&params);
                let poisson = PoissonMoments::new(lambda.clone());
                let generic = d_alpha_generic(
                    MomentSeqRef::Finite(&moments),
                    MomentSeqRef::Poisson(&poisson),
                    &alpha,
                    digits,
                )
                .expect("finite-poisson pair");
                if !closed.agrees_with(&generic) {
                    return CheckOutcome::new(
                        name,
                        false,
                        format!("mismatch at n={n} lambda={lambda} alpha={alpha}"),
                    );
                }
            }
        }
    }
    CheckOutcome::new(name, true, "definition route matches closed form; n <= 20")
}

pub fn check_fm_minimality(seed: u64, digits: u32) -> CheckOutcome {
    let name = "fm-minimality";
    let lambdas = [ratio(1, 2), ratio(9, 10), rat(1)];
    let alphas = grid_alphas();
    let mut rng = SplitMix64::stream(seed, 104);
    for trial in 0..500usize {
        let n = 3 + (trial % 6);
        let lambda = &lambdas[trial % lambdas.len()];
        let alpha = &alphas[trial % alphas.len()];
        let params = MatchingParams::new(n, lambda.clone()).unwrap();
        let x = random_pmf_with_entries(&mut rng, n + 1);
        let moments = factorial_moments(&x, n);
        let poisson = PoissonMoments::new(lambda.clone());
        let d_x = d_alpha_generic(
            MomentSeqRef::Finite(&moments),
            MomentSeqRef::Poisson(&poisson),
            alpha,
            digits,
        )
        .expect("finite-poisson pair");
        let d_min = d_alpha_matching_exact(&params, alpha, digits);
        let equals_minimizer = x.probs() == generalized_matching_pmf(&params).probs();
        if equals_minimizer {
            if !d_x.agrees_with(&d_min) {
                return CheckOutcome::new(
                    name,
                    false,
                    format!("equality case broken, trial {trial}"),
                );
            }
        } else if !d_min.certified_below(&d_x, 1) {
            return CheckOutcome::new(
                name,
                false,
                format!("random law beats the minimizer on trial {trial} (n={n})"),
            );
        }
    }
    // the minimizer itself attains the infimum
    for n in 3..=8 {
        let params = MatchingParams::new(n, ratio(1, 2)).unwrap();
        let moments = matching_moment_seq(&params);
        let poisson = PoissonMoments::new(ratio(1, 2));
        let d_min_generic = d_alpha_generic(
            MomentSeqRef::Finite(&moments),
            MomentSeqRef::Poisson(&poisson),
            &rat(2),
            digits,
        )
        .expect("finite-poisson pair");
        if !d_min_generic.agrees_with(&d_alpha_matching_exact(&params, &rat(2), digits)) {
            return CheckOutcome::new(name, false, format!("attainment fails at n={n}"));
        }
    }
    CheckOutcome::new(
        name,
        true,
        "500 random laws dominated; matching law attains",
    )
}

/// Dominating construction: masses at `1..=n` are certified rational upper
/// bounds of the Poisson masses, and the Poisson deficit plus every rounding
/// excess is absorbed at `j = 0`, so the constructed pmf dominates the
/// Poisson masses on the whole range.
pub fn dominating_pmf(n: usize, lambda: &Rational, digits: u32) -> FinitePmf {
    let masses = poisson_pmf_prefix(lambda, n, digits);
    let mut probs = vec![Rational::zero(); n + 1];
    let mut rest = Rational::one();
    for j in 1..=n {
        let q = masses[j].upper();
        rest -= &q;
        probs[j] = q;
    }
    probs[0] = rest;
    FinitePmf::new(probs, format!("poisson-dominating n={n} lambda={lambda}"))
        .expect("dominating masses form a pmf")
}

pub fn check_tv_minimum_attained(digits: u32) -> CheckOutcome {
    let name = "tv-minimum-attained";
    for (n, lambda) in [(3usize, rat(1)), (5, ratio(1, 2)), (8, rat(1))] {
        let x = dominating_pmf(n, &lambda, digits);
        // certify domination including at j = 0
        let masses = poisson_pmf_prefix(&lambda, n, digits);
        if x.probs()[0] < masses[0].upper() {
            return CheckOutcome::new(name, false, format!("domination fails at n={n}"));
        }
        let attained = tv_generic(&x, PmfRef::Poisson(&lambda), digits);
        let minimum = min_tv_over_support(n, &lambda, digits);
        if !attained.agrees_with(&minimum) {
            return CheckOutcome::new(name, false, format!("minimum not attained at n={n}"));
        }
    }
    CheckOutcome::new(name, true, "dominating laws attain Pr(Z > n) exactly")
}

pub fn check_min_tv_sandwich(digits: u32) -> CheckOutcome {
    let name = "min-tv-sandwich";
    let e = exp_eval(&rat(1), digits.max(40));
    let e_inv = exp_eval(&rat(-1), digits.max(40));
    for n in 0..=30usize {
        let minimum = min_tv_over_support(n, &rat(1), digits);
        let nf = Rational::from_integer(factorial(n + 1));
        let lo = e_inv.upper() / &nf;
        let hi = e_inv.lower() / &nf * (rat(1) + (e.lower() - rat(1)) / rat(n as i64 + 2));
        if minimum.lower() <= lo || minimum.upper() >= hi {
            return CheckOutcome::new(name, false, format!("sandwich fails at n={n}"));
        }
    }
    CheckOutcome::new(
        name,
        true,
        "e^-1/(n+1)! < min < with (1+(e-1)/(n+2)) factor; n <= 30",
    )
}

pub fn check_tv_fm_ratio_growth(digits: u32) -> CheckOutcome {
    let name = "tv-fm-ratio-growth";
    let mut prev: Option<HighPrecision> = None;
    for n in 10..=25usize {
        let params = MatchingParams::new(n, rat(1)).unwrap();
        let r = tv_fm_ratio(&params, &rat(1), digits).expect("ratio");
        let threshold = HighPrecision::exact(pow_u(&rat(2), n) / rat(2));
        if !threshold.certified_below(&r, 1) {
            return CheckOutcome::new(name, false, format!("ratio below 2^n/2 at n={n}"));
        }
        if let Some(p) = prev {
            if !p.certified_below(&r, 1) {
                return CheckOutcome::new(name, false, format!("ratio not increasing at n={n}"));
            }
        }
        prev = Some(r);
    }
    for n in 5..=20usize {
        let params = MatchingParams::new(n, rat(1)).unwrap();
        let r = tv_fm_ratio(&params, &rat(2), digits).expect("ratio");
        if r.upper() >= rat(1) {
            return CheckOutcome::new(name, false, format!("alpha=2 ratio >= 1 at n={n}"));
        }
    }
    CheckOutcome::new(
        name,
        true,
        "alpha=1 ratio grows past 2^n/2; alpha=2 ratio stays below 1",
    )
}

// ---------------------------------------------------------------------------
// simulation checks

pub fn check_enumeration_agreement() -> CheckOutcome {
    let name = "enumeration-agreement";
    for n in 1..=8usize {
        for lambda in [ratio(1, 10), ratio(1, 3), ratio(1, 2), rat(1)] {
            let params = MatchingParams::new(n, lambda.clone()).unwrap();
            let enumerated = enumerate_exact(n, &lambda).expect("n <= 10");
            if enumerated.probs() != generalized_matching_pmf(&params).probs() {
                return CheckOutcome::new(name, false, format!("mismatch at n={n}"));
            }
        }
    }
    CheckOutcome::new(name, true, "brute force equals closed form exactly; n <= 8")
}

pub fn check_derangement_tally() -> CheckOutcome {
    let name = "derangement-tally";
    // D_n for n = 1..8
    let derangements = [0u64, 1, 2, 9, 44, 265, 1854, 14833];
    for (i, expected) in derangements.iter().enumerate() {
        let n = i + 1;
        let tally = fixed_point_tally(n);
        if tally[0] != *expected {
            return CheckOutcome::new(name, false, format!("derangement count wrong at n={n}"));
        }
        if n >= 2 && tally[n - 1] != 0 {
            return CheckOutcome::new(name, false, format!("n-1 fixed points possible at n={n}"));
        }
        let pmf = enumerate_exact(n, &rat(1)).expect("n <= 10");
        if pmf.probs()[0] != Rational::new(BigInt::from(*expected), factorial(n)) {
            return CheckOutcome::new(name, false, format!("tally share wrong at n={n}"));
        }
    }
    CheckOutcome::new(name, true, "derangement shares D_n/n! reproduced; n <= 8")
}

pub fn check_simulation_reproducibility(cfg: &CheckConfig) -> CheckOutcome {
    let name = "simulation-reproducibility";
    let params = MatchingParams::new(3, rat(1)).unwrap();
    let sim = SimConfig::new(params, 100_000, cfg.seed, 4).unwrap();
    let (a, _) = run_monte_carlo(&sim);
    let (b, _) = run_monte_carlo(&sim);
    if a != b {
        return CheckOutcome::new(name, false, "identical configs produced different counts");
    }
    CheckOutcome::new(name, true, "identical configs reproduce identical counts")
}

pub fn check_shuffle_uniformity(seed: u64) -> CheckOutcome {
    let name = "shuffle-uniformity";
    let samples = 1_000_000u64;
    let mut rng = SplitMix64::stream(seed, 105);
    let mut counts = [0u64; 24];
    for _ in 0..samples {
        let perm = shuffled_permutation(4, &mut rng);
        counts[lehmer_index(&perm)] += 1;
    }
    let p = 1.0 / 24.0;
    let se = (p * (1.0 - p) / samples as f64).sqrt();
    for (idx, &count) in counts.iter().enumerate() {
        let freq = count as f64 / samples as f64;
        if (freq - p).abs() > 5.0 * se {
            return CheckOutcome::new(
                name,
                false,
                format!("permutation {idx} frequency {freq:.6} outside 5 se"),
            );
        }
    }
    CheckOutcome::new(
        name,
        true,
        "all 24 permutations within 5 standard errors of 1/24",
    )
}

fn lehmer_index(perm: &[u32]) -> usize {
    let n = perm.len();
    let mut index = 0usize;
    for i in 0..n {
        let smaller_later = perm[i + 1..].iter().filter(|&&v| v < perm[i]).count();
        index = index * (n - i) + smaller_later;
    }
    index
}

pub fn check_monte_carlo_concordance(cfg: &CheckConfig) -> CheckOutcome {
    let name = "monte-carlo-concordance";
    let params = MatchingParams::new(5, ratio(1, 2)).unwrap();
    let sim = SimConfig::new(params, 1_000_000, cfg.seed, cfg.workers).unwrap();
    let (_, stats) = run_monte_carlo(&sim);
    if !stats.pass {
        return CheckOutcome::new(name, false, "a standardized deviation exceeded 5");
    }
    if stats.max_abs_dev >= 0.002 {
        return CheckOutcome::new(
            name,
            false,
            format!("max deviation {:.5} too large", stats.max_abs_dev),
        );
    }
    // support gap: zero observed mass at j = n-1 when lambda = 1
    let params = MatchingParams::new(3, rat(1)).unwrap();
    let sim = SimConfig::new(params, 100_000, cfg.seed, cfg.workers).unwrap();
    let (empirical, stats) = run_monte_carlo(&sim);
    if empirical.counts[2] != 0 || !stats.pass {
        return CheckOutcome::new(name, false, "mass observed on the impossible bin");
    }
    CheckOutcome::new(name, true, "10^6 draws concordant; impossible bin empty")
}
