//! `fmdist`: pmfs, factorial moments, distances, bound tables, simulations
//! and the verification suite for the censored matching distribution versus
//! Poisson laws, in exact or certified-error arithmetic.
//!
//! Exit codes: 0 success, 1 property/sandwich/simulation failure, 2 usage
//! error.

mod output;

use clap::{Parser, Subcommand, ValueEnum};
use fmdist::checks::{run_checks, CheckConfig};
use fmdist::distributions::{
    classical_matching_pmf, factorial_moments, generalized_matching_pmf, matching_moment_seq,
    poisson_pmf_prefix, FinitePmf, MatchingParams,
};
use fmdist::numerics::{decimal_string, parse_rational, pow_u, Rational};
use fmdist::simulation::{run_monte_carlo_with_threshold, SimConfig, DEFAULT_Z_THRESHOLD};
use fmdist::{
    d_alpha_generic, d_alpha_matching_bounds, d_alpha_matching_with_quad_tol, reference_bounds,
    tv_generic, tv_matching_bounds, tv_matching_with_quad_tol, BoundsRow, MomentSeqRef, PmfRef,
    PoissonMoments,
};
use num_traits::{One, Signed, Zero};
use output::{render_exact, render_hp, render_rat, Format, Table};
use std::path::PathBuf;
use std::process::ExitCode;

/// Working precision exceeds the printed digits by this many digits, so the
/// printing gate (certified error below half an output ulp) always clears.
const PRECISION_HEADROOM: u32 = 35;

/// Strict-inequality margin for sandwich verdicts in tables.
const SANDWICH_MARGIN: u32 = 10;

#[derive(Parser)]
#[command(
    name = "fmdist",
    version,
    about = "Exact factorial-moment and total-variation distances for matching distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = CliFormat::Csv)]
    format: CliFormat,
    /// Significant digits for printed decimals (1..=60)
    #[arg(long, global = true, default_value_t = 15)]
    digits: u32,
    /// Write the table to a file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for simulations and grid commands
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Seed for simulations and randomized verification grids
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PmfKind {
    Classical,
    Generalized,
    PoissonPrefix,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MomentsKind {
    Classical,
    Generalized,
    Poisson,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Fm,
    Tv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Series,
    Integral,
    Generic,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Print a pmf as (index, exact rational, decimal) rows
    Pmf {
        #[arg(long, value_enum)]
        dist: PmfKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Print descending factorial moments of a supported distribution
    Moments {
        #[arg(long, value_enum)]
        dist: MomentsKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        kmax: usize,
    },
    /// One distance report row for the matching law against Poisson
    Dist {
        #[arg(long, value_enum)]
        metric: Metric,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
    },
    /// Bound tables over a range of n; exits nonzero if a sandwich fails
    Bounds {
        #[arg(long, value_enum)]
        metric: Option<Metric>,
        /// Tabulate the published reference bounds instead of a metric
        #[arg(long)]
        reference: bool,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        /// Inclusive range `a:b` with 1 <= a <= b <= 60
        #[arg(long = "n-range")]
        n_range: String,
    },
    /// Monte Carlo run compared against the exact pmf
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        samples: u64,
        /// Standardized-deviation threshold for the pass verdict
        #[arg(long, default_value_t = DEFAULT_Z_THRESHOLD)]
        z_threshold: f64,
    },
    /// Run the named verification suite; exits nonzero on any failure
    Verify {
        /// Only run checks whose name contains this substring
        #[arg(long)]
        only: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code().clamp(0, 2) as u8;
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.digits == 0 || cli.digits > 60 {
        eprintln!("error: --digits must be between 1 and 60");
        return ExitCode::from(2);
    }
    let precision = cli.digits + PRECISION_HEADROOM;
    match run(&cli, precision) {
        Ok((table, code)) => {
            let format = match cli.format {
                CliFormat::Csv => Format::Csv,
                CliFormat::Json => Format::Json,
            };
            let rendered = table.render(format, precision);
            if format == Format::Csv {
                for (key, value) in &table.notes {
                    eprintln!("{key}={value}");
                }
            }
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{rendered}");
            }
            ExitCode::from(code)
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Builds the output table; `Err` is a usage error (exit 2), the returned
/// code is 0 or 1 (verification/sandwich/simulation failure).
fn run(cli: &Cli, precision: u32) -> Result<(Table, u8), String> {
    match &cli.command {
        Command::Pmf { dist, n, lambda } => cmd_pmf(cli, precision, *dist, *n, lambda.as_deref()),
        Command::Moments {
            dist,
            n,
            lambda,
            kmax,
        } => cmd_moments(cli, *dist, *n, lambda.as_deref(), *kmax),
        Command::Dist {
            metric,
            n,
            lambda,
            alpha,
            method,
        } => cmd_dist(
            cli,
            precision,
            *metric,
            *n,
            lambda,
            alpha.as_deref(),
            *method,
        ),
        Command::Bounds {
            metric,
            reference,
            lambda,
            alpha,
            n_range,
        } => cmd_bounds(
            cli,
            precision,
            *metric,
            *reference,
            lambda.as_deref(),
            alpha.as_deref(),
            n_range,
        ),
        Command::Simulate {
            n,
            lambda,
            samples,
            z_threshold,
        } => cmd_simulate(cli, *n, lambda, *samples, *z_threshold),
        Command::Verify { only } => cmd_verify(cli, precision, only.as_deref()),
    }
}

fn parse_lambda_in_unit(text: &str) -> Result<Rational, String> {
    let lambda = parse_rational(text).map_err(|e| e.to_string())?;
    if !lambda.is_positive() || lambda > Rational::from_integer(1.into()) {
        return Err(format!(
            "lambda must lie in (0, 1] for the matching distribution, got {lambda}"
        ));
    }
    Ok(lambda)
}

fn matching_params(n: usize, lambda_text: &str) -> Result<MatchingParams, String> {
    let lambda = parse_lambda_in_unit(lambda_text)?;
    MatchingParams::new(n, lambda).map_err(|e| e.to_string())
}

fn pmf_rows(table: &mut Table, pmf: &FinitePmf, digits: u32) {
    for (j, p) in pmf.probs().iter().enumerate() {
        table.push_row(vec![j.to_string(), render_exact(p), render_rat(p, digits)]);
    }
}

fn cmd_pmf(
    cli: &Cli,
    precision: u32,
    dist: PmfKind,
    n: usize,
    lambda: Option<&str>,
) -> Result<(Table, u8), String> {
    let mut table = Table::new(vec!["j", "exact", "decimal"]);
    table.param("n", n.to_string());
    match dist {
        PmfKind::Classical => {
            if n == 0 {
                return Err("classical pmf requires n >= 1".to_string());
            }
            table.param("dist", "classical");
            pmf_rows(&mut table, &classical_matching_pmf(n), cli.digits);
        }
        PmfKind::Generalized => {
            let lambda = lambda.ok_or("--lambda is required for the generalized pmf")?;
            let params = matching_params(n, lambda)?;
            table.param("dist", "generalized");
            table.param("lambda", render_exact(params.lambda()));
            pmf_rows(&mut table, &generalized_matching_pmf(&params), cli.digits);
        }
        PmfKind::PoissonPrefix => {
            let lambda = lambda.ok_or("--lambda is required for the poisson prefix")?;
            let lambda = parse_rational(lambda).map_err(|e| e.to_string())?;
            if !lambda.is_positive() {
                return Err(format!("lambda must be positive, got {lambda}"));
            }
            table.param("dist", "poisson-prefix");
            table.param("lambda", render_exact(&lambda));
            for (j, mass) in poisson_pmf_prefix(&lambda, n, precision).iter().enumerate() {
                table.push_row(vec![
                    j.to_string(),
                    String::new(),
                    render_hp(mass, cli.digits)?,
                ]);
            }
        }
    }
    Ok((table, 0))
}

fn cmd_moments(
    cli: &Cli,
    dist: MomentsKind,
    n: Option<usize>,
    lambda: Option<&str>,
    kmax: usize,
) -> Result<(Table, u8), String> {
    let mut table = Table::new(vec!["k", "exact", "decimal"]);
    table.param("kmax", kmax.to_string());
    let moments: Vec<Rational> = match dist {
        MomentsKind::Classical => {
            let n = n.ok_or("--n is required for classical moments")?;
            if n == 0 {
                return Err("classical moments require n >= 1".to_string());
            }
            table.param("dist", "classical");
            table.param("n", n.to_string());
            factorial_moments(&classical_matching_pmf(n), kmax)
                .moments()
                .to_vec()
        }
        MomentsKind::Generalized => {
            let n = n.ok_or("--n is required for generalized moments")?;
            let lambda = lambda.ok_or("--lambda is required for generalized moments")?;
            let params = matching_params(n, lambda)?;
            table.param("dist", "generalized");
            table.param("n", n.to_string());
            table.param("lambda", render_exact(params.lambda()));
            factorial_moments(&generalized_matching_pmf(&params), kmax)
                .moments()
                .to_vec()
        }
        MomentsKind::Poisson => {
            let lambda = lambda.ok_or("--lambda is required for poisson moments")?;
            let lambda = parse_rational(lambda).map_err(|e| e.to_string())?;
            if !lambda.is_positive() {
                return Err(format!("lambda must be positive, got {lambda}"));
            }
            table.param("dist", "poisson");
            table.param("lambda", render_exact(&lambda));
            (0..=kmax).map(|k| pow_u(&lambda, k)).collect()
        }
    };
    for (k, m) in moments.iter().enumerate() {
        table.push_row(vec![
            k.to_string(),
            render_exact(m),
            render_rat(m, cli.digits),
        ]);
    }
    Ok((table, 0))
}

const DIST_COLUMNS: [&str; 14] = [
    "metric",
    "n",
    "lambda",
    "alpha",
    "method",
    "exact",
    "integral_check",
    "lower",
    "lower_exact",
    "upper",
    "upper_exact",
    "asymptotic",
    "asymptotic_exact",
    "ratio_to_asymptotic",
];

fn cmd_dist(
    cli: &Cli,
    precision: u32,
    metric: Metric,
    n: usize,
    lambda: &str,
    alpha: Option<&str>,
    method: Method,
) -> Result<(Table, u8), String> {
    let params = matching_params(n, lambda)?;
    let alpha = match (metric, alpha) {
        (Metric::Fm, Some(a)) => {
            let a = parse_rational(a).map_err(|e| e.to_string())?;
            if !a.is_positive() {
                return Err(format!("alpha must be positive, got {a}"));
            }
            Some(a)
        }
        (Metric::Fm, None) => return Err("--alpha is required for the fm metric".to_string()),
        (Metric::Tv, _) => None,
    };
    let mut table = Table::new(DIST_COLUMNS.to_vec());
    table.param("metric", metric_name(metric));
    table.param("n", n.to_string());
    table.param("lambda", render_exact(params.lambda()));
    if let Some(a) = &alpha {
        table.param("alpha", render_exact(a));
    }
    table.param("method", method_name(method));
    let d = cli.digits;
    // the integral route must be printable at d significant digits: its
    // error is (prefactor * quadrature tolerance), so tighten accordingly
    let prefactor_mag = {
        use fmdist::numerics::{factorial, floor_log10, rat};
        let pf = match (&alpha, metric) {
            (Some(a), Metric::Fm) => {
                pow_u(a, n) * pow_u(params.lambda(), n + 1) / Rational::from_integer(factorial(n))
            }
            _ => pow_u(params.lambda(), n + 1) / (rat(2) * Rational::from_integer(factorial(n))),
        };
        if pf >= Rational::from_integer(1.into()) {
            floor_log10(&pf) + 1
        } else {
            0
        }
    };
    let quad_tol_pow = cli.digits as i64 + prefactor_mag + 3;

    let mut cells = vec![String::new(); DIST_COLUMNS.len()];
    cells[0] = metric_name(metric).to_string();
    cells[1] = n.to_string();
    cells[2] = render_exact(params.lambda());
    cells[3] = alpha.as_ref().map(render_exact).unwrap_or_default();
    cells[4] = method_name(method).to_string();

    let bounds_row = |cells: &mut Vec<String>, row: &BoundsRow| -> Result<(), String> {
        cells[5] = render_hp(&row.exact, d)?;
        cells[7] = render_hp(&row.lower_bound, d)?;
        if row.lower_bound.is_exact() {
            cells[8] = render_exact(row.lower_bound.value());
        }
        cells[9] = render_hp(&row.upper_bound, d)?;
        if row.upper_bound.is_exact() {
            cells[10] = render_exact(row.upper_bound.value());
        }
        cells[11] = render_rat(&row.asymptotic, d);
        cells[12] = render_exact(&row.asymptotic);
        cells[13] = render_hp(&row.ratio_to_asymptotic, d)?;
        Ok(())
    };

    match method {
        Method::All => {
            let report = match metric {
                Metric::Fm => d_alpha_matching_with_quad_tol(
                    &params,
                    alpha.as_ref().unwrap(),
                    precision,
                    quad_tol_pow,
                )
                .map_err(|e| e.to_string())?,
                Metric::Tv => tv_matching_with_quad_tol(&params, precision, quad_tol_pow)
                    .map_err(|e| e.to_string())?,
            };
            cells[5] = render_hp(&report.exact, d)?;
            cells[6] = render_hp(&report.integral_check, d)?;
            cells[7] = render_hp(&report.lower_bound, d)?;
            if report.lower_bound.is_exact() {
                cells[8] = render_exact(report.lower_bound.value());
            }
            cells[9] = render_hp(&report.upper_bound, d)?;
            if report.upper_bound.is_exact() {
                cells[10] = render_exact(report.upper_bound.value());
            }
            cells[11] = render_hp(&report.asymptotic, d)?;
            cells[12] = render_exact(report.asymptotic.value());
            cells[13] = render_hp(&report.ratio_to_asymptotic, d)?;
        }
        Method::Series => {
            let row = match metric {
                Metric::Fm => d_alpha_matching_bounds(&params, alpha.as_ref().unwrap(), precision)
                    .map_err(|e| e.to_string())?,
                Metric::Tv => tv_matching_bounds(&params, precision),
            };
            bounds_row(&mut cells, &row)?;
        }
        Method::Integral => {
            let report = match metric {
                Metric::Fm => d_alpha_matching_with_quad_tol(
                    &params,
                    alpha.as_ref().unwrap(),
                    precision,
                    quad_tol_pow,
                )
                .map_err(|e| e.to_string())?,
                Metric::Tv => tv_matching_with_quad_tol(&params, precision, quad_tol_pow)
                    .map_err(|e| e.to_string())?,
            };
            cells[6] = render_hp(&report.integral_check, d)?;
            cells[11] = render_hp(&report.asymptotic, d)?;
            cells[12] = render_exact(report.asymptotic.value());
        }
        Method::Generic => {
            // definition-route value: moment series for fm, positive-part
            // sum for tv
            let value = match metric {
                Metric::Fm => {
                    let moments = matching_moment_seq(&params);
                    let poisson = PoissonMoments::new(params.lambda().clone());
                    d_alpha_generic(
                        MomentSeqRef::Finite(&moments),
                        MomentSeqRef::Poisson(&poisson),
                        alpha.as_ref().unwrap(),
                        precision,
                    )
                    .map_err(|e| e.to_string())?
                }
                Metric::Tv => {
                    let pmf = generalized_matching_pmf(&params);
                    tv_generic(&pmf, PmfRef::Poisson(params.lambda()), precision)
                }
            };
            cells[5] = render_hp(&value, d)?;
        }
    }
    table.push_row(cells);
    Ok((table, 0))
}

fn metric_name(metric: Metric) -> &'static str {
    match metric {
        Metric::Fm => "fm",
        Metric::Tv => "tv",
    }
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::Series => "series",
        Method::Integral => "integral",
        Method::Generic => "generic",
        Method::All => "all",
    }
}

fn parse_n_range(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("range must be a:b, got {text:?}"))?;
    let a: usize = a
        .parse()
        .map_err(|_| format!("invalid range start {a:?}"))?;
    let b: usize = b.parse().map_err(|_| format!("invalid range end {b:?}"))?;
    if a < 1 || a > b || b > 60 {
        return Err(format!("range must satisfy 1 <= a <= b <= 60, got {a}:{b}"));
    }
    Ok((a, b))
}

fn cmd_bounds(
    cli: &Cli,
    precision: u32,
    metric: Option<Metric>,
    reference: bool,
    lambda: Option<&str>,
    alpha: Option<&str>,
    n_range: &str,
) -> Result<(Table, u8), String> {
    let (lo, hi) = parse_n_range(n_range)?;
    let d = cli.digits;
    if reference {
        if metric.is_some() {
            return Err("--reference and --metric are mutually exclusive".to_string());
        }
        let mut table = Table::new(vec![
            "n",
            "diaconis",
            "diaconis_exact",
            "dasgupta",
            "dasgupta_exact",
            "corollary",
        ]);
        table.param("n_range", format!("{lo}:{hi}"));
        for n in lo..=hi {
            let b = reference_bounds(n, precision);
            table.push_row(vec![
                n.to_string(),
                render_rat(&b.diaconis, d),
                render_exact(&b.diaconis),
                render_rat(&b.dasgupta, d),
                render_exact(&b.dasgupta),
                render_hp(&b.corollary, d)?,
            ]);
        }
        return Ok((table, 0));
    }

    let metric = metric.ok_or("one of --metric or --reference is required")?;
    let lambda_text = lambda.ok_or("--lambda is required for bound tables")?;
    let params_lambda = parse_lambda_in_unit(lambda_text)?;
    let alpha = match (metric, alpha) {
        (Metric::Fm, Some(a)) => {
            let a = parse_rational(a).map_err(|e| e.to_string())?;
            if !a.is_positive() {
                return Err(format!("alpha must be positive, got {a}"));
            }
            Some(a)
        }
        (Metric::Fm, None) => return Err("--alpha is required for the fm metric".to_string()),
        (Metric::Tv, _) => None,
    };

    let mut table = Table::new(vec![
        "n",
        "lambda",
        "alpha",
        "exact",
        "lower",
        "upper",
        "asymptotic",
        "ratio_to_asymptotic",
        "sandwich",
    ]);
    table.param("metric", metric_name(metric));
    table.param("lambda", render_exact(&params_lambda));
    if let Some(a) = &alpha {
        table.param("alpha", render_exact(a));
    }
    table.param("n_range", format!("{lo}:{hi}"));

    let ns: Vec<usize> = (lo..=hi).collect();
    let workers = cli.workers.max(1).min(ns.len());
    let rows: Vec<(usize, BoundsRow)> = std::thread::scope(|scope| {
        let chunks: Vec<Vec<usize>> = (0..workers)
            .map(|w| ns.iter().copied().skip(w).step_by(workers).collect())
            .collect();
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                let lambda = params_lambda.clone();
                let alpha = alpha.clone();
                scope.spawn(move || {
                    chunk
                        .into_iter()
                        .map(|n| {
                            let params =
                                MatchingParams::new(n, lambda.clone()).expect("validated above");
                            let row = match &alpha {
                                Some(a) => d_alpha_matching_bounds(&params, a, precision)
                                    .expect("alpha validated above"),
                                None => tv_matching_bounds(&params, precision),
                            };
                            (n, row)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut rows: Vec<(usize, BoundsRow)> = handles
            .into_iter()
            .flat_map(|h| h.join().expect("bounds worker"))
            .collect();
        rows.sort_by_key(|(n, _)| *n);
        rows
    });

    let mut all_pass = true;
    for (n, row) in rows {
        let ok = row.sandwich_ok(SANDWICH_MARGIN);
        all_pass &= ok;
        table.push_row(vec![
            n.to_string(),
            render_exact(&params_lambda),
            alpha.as_ref().map(render_exact).unwrap_or_default(),
            render_hp(&row.exact, d)?,
            render_hp(&row.lower_bound, d)?,
            render_hp(&row.upper_bound, d)?,
            render_rat(&row.asymptotic, d),
            render_hp(&row.ratio_to_asymptotic, d)?,
            if ok { "pass" } else { "fail" }.to_string(),
        ]);
    }
    Ok((table, u8::from(!all_pass)))
}

fn cmd_simulate(
    cli: &Cli,
    n: usize,
    lambda: &str,
    samples: u64,
    z_threshold: f64,
) -> Result<(Table, u8), String> {
    let params = matching_params(n, lambda)?;
    let cfg = SimConfig::new(params.clone(), samples, cli.seed, cli.workers.max(1))
        .map_err(|e| e.to_string())?;
    let (empirical, stats) = run_monte_carlo_with_threshold(&cfg, z_threshold);
    let exact = generalized_matching_pmf(&params);

    let mut table = Table::new(vec![
        "j",
        "count",
        "frequency",
        "exact",
        "exact_decimal",
        "z",
    ]);
    table.param("n", n.to_string());
    table.param("lambda", render_exact(params.lambda()));
    table.param("samples", samples.to_string());
    table.param("seed", cli.seed.to_string());
    table.param("workers", cfg.workers.to_string());
    for (j, p) in exact.probs().iter().enumerate() {
        // deterministic bins carry no standardized deviation
        let z_cell = if p.is_zero() || p.is_one() {
            String::new()
        } else {
            format!("{:.4}", stats.per_bin_z[j])
        };
        let freq = Rational::new(empirical.counts[j].into(), empirical.total.into());
        table.push_row(vec![
            j.to_string(),
            empirical.counts[j].to_string(),
            decimal_string(&freq, 8),
            render_exact(p),
            render_rat(p, cli.digits),
            z_cell,
        ]);
    }
    table.note("max_abs_dev", format!("{:.8}", stats.max_abs_dev));
    table.note("z_threshold", format!("{z_threshold}"));
    table.note("pass", if stats.pass { "true" } else { "false" });
    Ok((table, u8::from(!stats.pass)))
}

fn cmd_verify(cli: &Cli, precision: u32, only: Option<&str>) -> Result<(Table, u8), String> {
    let cfg = CheckConfig {
        digits: precision,
        seed: cli.seed,
        workers: cli.workers.max(1),
    };
    let outcomes = run_checks(&cfg, only);
    if outcomes.is_empty() {
        return Err(format!(
            "no verification check matches {:?}",
            only.unwrap_or("")
        ));
    }
    let mut table = Table::new(vec!["property", "status", "detail"]);
    if let Some(f) = only {
        table.param("only", f);
    }
    table.param("seed", cli.seed.to_string());
    table.param("precision", precision.to_string());
    let mut all_pass = true;
    for outcome in &outcomes {
        all_pass &= outcome.passed;
        table.push_row(vec![
            outcome.name.to_string(),
            if outcome.passed { "pass" } else { "fail" }.to_string(),
            outcome.detail.replace(',', ";"),
        ]);
    }
    Ok((table, u8::from(!all_pass)))
}
