//! Stochastic and exhaustive realizations of the censored matching process:
//! uniform random permutations, Bernoulli censoring, empirical pmfs, and an
//! exact enumeration oracle independent of all closed forms.
//!
//! Reproducibility contract: identical `SimConfig` (including `workers`)
//! yields bit-identical results. Worker `w` draws from the stream derived
//! deterministically from `(seed, w)`, and tallies are merged in worker
//! order.

pub mod rng;

use crate::distributions::{generalized_matching_pmf, FinitePmf, MatchingParams};
use crate::numerics::{binomial, factorial, pow_u, Rational};
use num_traits::{One, ToPrimitive, Zero};
use rng::SplitMix64;
use thiserror::Error;

/// Largest `n` accepted by [`enumerate_exact`]; `10! = 3_628_800`
/// permutations is where exhaustive iteration stops being desk-scale.
pub const MAX_ENUMERATION_N: usize = 10;

/// Default standardized-deviation threshold for empirical-vs-exact
/// comparisons; about a `10^-6` false-alarm rate per bin.
pub const DEFAULT_Z_THRESHOLD: f64 = 5.0;

#[derive(Debug, Error, PartialEq)]
pub enum SimulationError {
    #[error("enumeration supports n <= {MAX_ENUMERATION_N}, got {0}")]
    EnumerationTooLarge(usize),
    #[error("samples must be at least 1")]
    ZeroSamples,
    #[error("workers must be at least 1")]
    ZeroWorkers,
}

/// Configuration of a Monte Carlo run of the censored matching process.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: MatchingParams,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SimConfig {
    pub fn new(
        params: MatchingParams,
        samples: u64,
        seed: u64,
        workers: usize,
    ) -> Result<Self, SimulationError> {
        if samples == 0 {
            return Err(SimulationError::ZeroSamples);
        }
        if workers == 0 {
            return Err(SimulationError::ZeroWorkers);
        }
        Ok(SimConfig {
            params,
            samples,
            seed,
            workers,
        })
    }
}

/// Empirical counts of the censored match statistic, indexed `0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalPmf {
    pub counts: Vec<u64>,
    pub total: u64,
}

impl EmpiricalPmf {
    pub fn frequency(&self, j: usize) -> f64 {
        self.counts[j] as f64 / self.total as f64
    }
}

/// Standardized comparison of an empirical pmf against the exact law.
/// `per_bin_z[j]` is `(freq_j - p_j) / sqrt(p_j (1 - p_j) / total)`; bins
/// with `p_j = 0` are skipped (recorded as `0`) but must have zero counts,
/// otherwise the comparison fails outright.
#[derive(Debug, Clone)]
pub struct ComparisonStats {
    pub max_abs_dev: f64,
    pub per_bin_z: Vec<f64>,
    pub pass: bool,
}

/// Uniform random permutation of `{0, .., n-1}` by the unbiased
/// Fisher-Yates shuffle: one bounded draw per swap, indices `n-1` down to `1`.
pub fn shuffled_permutation(n: usize, rng: &mut SplitMix64) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    perm
}

/// One draw of the censored matching statistic: shuffle `{1, .., n}`
/// uniformly, count fixed points, then keep each with probability `lambda`
/// (one draw per fixed point, in increasing index order).
pub fn sample_censored_matches(n: usize, lambda: &Rational, rng: &mut SplitMix64) -> usize {
    let perm = shuffled_permutation(n, rng);
    let mut kept = 0;
    for (i, &v) in perm.iter().enumerate() {
        if v == i as u32 && rng.bernoulli(lambda) {
            kept += 1;
        }
    }
    kept
}

/// Run the Monte Carlo experiment and compare against the exact censored
/// matching pmf at the default z threshold.
pub fn run_monte_carlo(cfg: &SimConfig) -> (EmpiricalPmf, ComparisonStats) {
    run_monte_carlo_with_threshold(cfg, DEFAULT_Z_THRESHOLD)
}

/// As [`run_monte_carlo`] with an explicit z threshold.
pub fn run_monte_carlo_with_threshold(
    cfg: &SimConfig,
    z_threshold: f64,
) -> (EmpiricalPmf, ComparisonStats) {
    let n = cfg.params.n();
    let lambda = cfg.params.lambda().clone();
    let base = cfg.samples / cfg.workers as u64;
    let extra = cfg.samples % cfg.workers as u64;
    let quotas: Vec<u64> = (0..cfg.workers as u64)
        .map(|w| base + u64::from(w < extra))
        .collect();

    let tallies: Vec<Vec<u64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = quotas
            .iter()
            .enumerate()
            .map(|(w, &quota)| {
                let lambda = lambda.clone();
                scope.spawn(move || {
                    let mut rng = SplitMix64::stream(cfg.seed, w as u64);
                    let mut counts = vec![0u64; n + 1];
                    for _ in 0..quota {
                        counts[sample_censored_matches(n, &lambda, &mut rng)] += 1;
                    }
                    counts
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut counts = vec![0u64; n + 1];
    for tally in &tallies {
        for (total, c) in counts.iter_mut().zip(tally) {
            *total += c;
        }
    }
    let empirical = EmpiricalPmf {
        counts,
        total: cfg.samples,
    };
    let exact = generalized_matching_pmf(&cfg.params);
    let stats = compare_to_exact(&empirical, &exact, z_threshold);
    (empirical, stats)
}

/// Standardized deviations of an empirical pmf from an exact one.
pub fn compare_to_exact(
    empirical: &EmpiricalPmf,
    exact: &FinitePmf,
    z_threshold: f64,
) -> ComparisonStats {
    assert_eq!(empirical.counts.len(), exact.probs().len());
    let total = empirical.total as f64;
    let mut max_abs_dev: f64 = 0.0;
    let mut per_bin_z = Vec::with_capacity(exact.probs().len());
    let mut pass = true;
    for (j, p) in exact.probs().iter().enumerate() {
        let freq = empirical.frequency(j);
        // deterministic bins (mass 0 or 1) have no sampling variance:
        // require the exact count and record z = 0
        if p.is_zero() || p.is_one() {
            per_bin_z.push(0.0);
            let expected = if p.is_zero() { 0 } else { empirical.total };
            if empirical.counts[j] != expected {
                pass = false;
            }
            max_abs_dev = max_abs_dev.max((freq - p.to_f64().unwrap_or(0.0)).abs());
            continue;
        }
        let p = p.to_f64().expect("pmf entry fits in f64");
        let dev = freq - p;
        max_abs_dev = max_abs_dev.max(dev.abs());
        let z = dev / (p * (1.0 - p) / total).sqrt();
        if z.abs() > z_threshold {
            pass = false;
        }
        per_bin_z.push(z);
    }
    ComparisonStats {
        max_abs_dev,
        per_bin_z,
        pass,
    }
}

/// Exact censored matching pmf by brute force: iterate all `n!`
/// permutations in lexicographic order, tally fixed-point counts, then apply
/// exact binomial censoring weights. Built with no reference to the
/// closed-form pmf, this is the enumeration oracle for it.
pub fn enumerate_exact(n: usize, lambda: &Rational) -> Result<FinitePmf, SimulationError> {
    if n > MAX_ENUMERATION_N {
        return Err(SimulationError::EnumerationTooLarge(n));
    }
    let tally = fixed_point_tally(n);
    let n_fact = Rational::from_integer(factorial(n));
    let drop = Rational::one() - lambda;
    let probs: Vec<Rational> = (0..=n)
        .map(|j| {
            let mut acc = Rational::zero();
            for (m, &count) in tally.iter().enumerate().skip(j) {
                if count == 0 {
                    continue;
                }
                let share = Rational::from_integer(count.into()) / &n_fact;
                acc += share
                    * Rational::from_integer(binomial(m, j))
                    * pow_u(lambda, j)
                    * pow_u(&drop, m - j);
            }
            acc
        })
        .collect();
    Ok(
        FinitePmf::new(probs, format!("enumerated n={n} lambda={lambda}"))
            .expect("enumeration tally yields a pmf"),
    )
}

/// `tally[m]` = number of permutations of `{0, .., n-1}` with exactly `m`
/// fixed points, via lexicographic iteration.
pub fn fixed_point_tally(n: usize) -> Vec<u64> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut tally = vec![0u64; n + 1];
    loop {
        let fixed = perm
            .iter()
            .enumerate()
            .filter(|(i, &v)| v == *i as u32)
            .count();
        tally[fixed] += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    tally
}

/// In-place lexicographic successor; `false` once the sequence wraps.
fn next_permutation(perm: &mut [u32]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, ratio};

    fn mp(n: usize, num: i64, den: i64) -> MatchingParams {
        MatchingParams::new(n, ratio(num, den)).unwrap()
    }

    #[test]
    fn single_element_always_matches() {
        let mut rng = SplitMix64::new(123);
        for _ in 0..20 {
            assert_eq!(sample_censored_matches(1, &rat(1), &mut rng), 1);
        }
    }

    #[test]
    fn bernoulli_limit_for_n_1() {
        let lambda = ratio(3, 10);
        let mut rng = SplitMix64::stream(5, 0);
        let trials = 200_000;
        let mut ones = 0u64;
        for _ in 0..trials {
            let v = sample_censored_matches(1, &lambda, &mut rng);
            assert!(v <= 1);
            ones += v as u64;
        }
        let freq = ones as f64 / trials as f64;
        assert!((freq - 0.3).abs() < 0.005, "frequency {freq}");
    }

    #[test]
    fn golden_sample_sequence() {
        // Regression pin for the exact draw order (shuffle then censor).
        let mut rng = SplitMix64::stream(42, 0);
        let lambda = ratio(1, 2);
        let draws: Vec<usize> = (0..12)
            .map(|_| sample_censored_matches(5, &lambda, &mut rng))
            .collect();
        assert_eq!(draws, vec![0, 1, 0, 0, 1, 0, 1, 3, 1, 1, 1, 1]);
    }

    #[test]
    fn enumeration_small_cases() {
        let e = enumerate_exact(3, &rat(1)).unwrap();
        assert_eq!(e.probs(), &[ratio(1, 3), ratio(1, 2), rat(0), ratio(1, 6)]);
        let e = enumerate_exact(2, &ratio(1, 2)).unwrap();
        assert_eq!(e.probs(), &[ratio(5, 8), ratio(1, 4), ratio(1, 8)]);
        let e = enumerate_exact(1, &ratio(3, 10)).unwrap();
        assert_eq!(e.probs(), &[ratio(7, 10), ratio(3, 10)]);
        assert_eq!(
            enumerate_exact(11, &rat(1)),
            Err(SimulationError::EnumerationTooLarge(11))
        );
    }

    #[test]
    fn derangement_counts_small_n() {
        // D_n for n = 1..6: 0, 1, 2, 9, 44, 265
        let expected = [0u64, 1, 2, 9, 44, 265];
        for (i, d) in expected.iter().enumerate() {
            let tally = fixed_point_tally(i + 1);
            assert_eq!(tally[0], *d, "derangements of {} elements", i + 1);
            // exactly n-1 fixed points is impossible
            assert_eq!(tally[i], if i == 0 { *d } else { 0 });
        }
    }

    #[test]
    fn monte_carlo_reproducible_across_calls() {
        let cfg = SimConfig::new(mp(4, 1, 2), 20_000, 7, 3).unwrap();
        let (a, sa) = run_monte_carlo(&cfg);
        let (b, sb) = run_monte_carlo(&cfg);
        assert_eq!(a, b);
        assert_eq!(sa.per_bin_z, sb.per_bin_z);
        assert!(sa.pass);
    }

    #[test]
    fn worker_split_changes_stream_but_stays_calibrated() {
        let one = SimConfig::new(mp(3, 1, 1), 50_000, 11, 1).unwrap();
        let four = SimConfig::new(mp(3, 1, 1), 50_000, 11, 4).unwrap();
        let (e1, s1) = run_monte_carlo(&one);
        let (e4, s4) = run_monte_carlo(&four);
        assert!(s1.pass && s4.pass);
        // support gap at j = n-1 for lambda = 1
        assert_eq!(e1.counts[2], 0);
        assert_eq!(e4.counts[2], 0);
        assert_eq!(e1.total, e4.total);
    }

    #[test]
    fn deterministic_bins_have_no_variance() {
        // n = 1, lambda = 1: mass 1 at j = 1, mass 0 at j = 0
        let cfg = SimConfig::new(mp(1, 1, 1), 5_000, 3, 2).unwrap();
        let (empirical, stats) = run_monte_carlo(&cfg);
        assert_eq!(empirical.counts, vec![0, 5_000]);
        assert!(stats.pass);
        assert!(stats.per_bin_z.iter().all(|z| z.is_finite()));
        assert_eq!(stats.max_abs_dev, 0.0);
    }

    #[test]
    fn config_validation() {
        assert_eq!(
            SimConfig::new(mp(2, 1, 2), 0, 1, 1),
            Err(SimulationError::ZeroSamples)
        );
        assert_eq!(
            SimConfig::new(mp(2, 1, 2), 10, 1, 0),
            Err(SimulationError::ZeroWorkers)
        );
    }
}
