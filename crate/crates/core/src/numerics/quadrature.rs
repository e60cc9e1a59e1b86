//! Adaptive Gauss-Legendre quadrature on `[0, 1]` for the three smooth
//! integrand families the distance formulas need.
//!
//! Control: order-16 and order-8 estimates per panel, bisection while they
//! disagree, with the tolerance budget split proportionally to panel width.
//! Nodes and weights are computed once per working precision by Newton
//! iteration in exact rational arithmetic; each node is certified by an
//! exact sign change of the Legendre polynomial within `±delta`, and that
//! `delta` enters the reported error bound through a perturbation allowance.

use super::exp_series_raw;
use super::{
    floor_log10, rat, ten_pow, HighPrecision, NumericsError, QuadratureDiagnostic, Rational,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// One of the integrand families `y -> poly(y) * e^{c y}` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegrandId {
    /// `(1 - y)^n e^{x y}`
    ExpTail { x: Rational, n: usize },
    /// `(1 - y)^n e^{alpha lambda y}`
    FmKernel {
        n: usize,
        lambda: Rational,
        alpha: Rational,
    },
    /// `[y^n + (2 - y)^n] e^{-lambda y}`
    TvKernel { n: usize, lambda: Rational },
}

impl IntegrandId {
    fn exp_coefficient(&self) -> Rational {
        match self {
            IntegrandId::ExpTail { x, .. } => x.clone(),
            IntegrandId::FmKernel { lambda, alpha, .. } => alpha * lambda,
            IntegrandId::TvKernel { lambda, .. } => -lambda.clone(),
        }
    }

    /// Rational upper bound on the polynomial factor over `[0, 1]`.
    fn poly_sup(&self) -> Rational {
        match self {
            IntegrandId::ExpTail { .. } | IntegrandId::FmKernel { .. } => Rational::one(),
            IntegrandId::TvKernel { n, .. } => {
                Rational::from_integer(BigInt::one() + (BigInt::one() << *n))
            }
        }
    }

    /// Rational upper bound on `|f|` over `[0, 1]` (uses `e^t <= 3^ceil(t)`).
    fn sup_bound(&self) -> Rational {
        self.poly_sup() * exp_sup_bound(&self.exp_coefficient())
    }

    /// Crude rational upper bound on `|f'|` over `[0, 1]`; only scales the
    /// (tiny) node-perturbation allowance.
    fn deriv_bound(&self) -> Rational {
        let c = self.exp_coefficient();
        let n = match self {
            IntegrandId::ExpTail { n, .. }
            | IntegrandId::FmKernel { n, .. }
            | IntegrandId::TvKernel { n, .. } => *n,
        };
        (c.abs() + rat(n as i64 + 1)) * self.poly_sup() * exp_sup_bound(&c) * rat(2)
    }
}

/// `e^{max(c, 0)} <= 3^{ceil(max(c, 0))}`, exactly representable.
fn exp_sup_bound(c: &Rational) -> Rational {
    if c.is_positive() {
        let exp = c.ceil().to_integer();
        // arguments beyond 10^6 are far outside this crate's domain
        let exp = u32::try_from(&exp).expect("exponential argument out of range");
        Rational::from_integer(BigInt::from(3).pow(exp))
    } else {
        Rational::one()
    }
}

struct GaussRule {
    /// Node/weight pairs on `(-1, 1)`.
    points: Vec<(Rational, Rational)>,
    /// Certified bound on the distance of each stored node to the true root.
    delta: Rational,
}

/// Legendre `P_order` and its derivative at a rational point with `|x| < 1`.
fn legendre_pair(order: usize, x: &Rational) -> (Rational, Rational) {
    let mut prev = Rational::one();
    let mut cur = x.clone();
    for k in 2..=order {
        let next = (rat(2 * k as i64 - 1) * x * &cur - rat(k as i64 - 1) * &prev) / rat(k as i64);
        prev = cur;
        cur = next;
    }
    let deriv = rat(order as i64) * (x * &cur - &prev) / (x * x - Rational::one());
    (cur, deriv)
}

fn build_rule(order: usize, prec: u32) -> GaussRule {
    assert!(order >= 2 && order.is_multiple_of(2));
    let step_tol = ten_pow(-(prec as i64 + 3));
    let delta = ten_pow(-(prec as i64));
    let mut points = Vec::with_capacity(order);
    let mut worst_delta = delta.clone();
    for i in 1..=order / 2 {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (order as f64 + 0.5)).cos();
        let mut x = Rational::from_float(guess).expect("finite cosine guess");
        for iter in 0..200 {
            let (value, deriv) = legendre_pair(order, &x);
            let step = value / deriv;
            x = super::round_decimal(&(&x - &step), prec as i64 + 5);
            if step.abs() <= step_tol {
                break;
            }
            assert!(iter < 199, "Newton iteration failed to converge");
        }
        let x = super::round_decimal(&x, prec as i64);
        // Certify the root by an exact sign change within ±d.
        let mut d = delta.clone();
        let mut certified = false;
        for _ in 0..8 {
            let (lo, _) = legendre_pair(order, &(&x - &d));
            let (hi, _) = legendre_pair(order, &(&x + &d));
            if !lo.is_zero() && !hi.is_zero() && lo.is_positive() != hi.is_positive() {
                certified = true;
                break;
            }
            d = &d * rat(2);
        }
        assert!(certified, "failed to certify Gauss-Legendre node");
        if d > worst_delta {
            worst_delta = d;
        }
        let (_, deriv) = legendre_pair(order, &x);
        let weight = rat(2) / ((Rational::one() - &x * &x) * (&deriv * &deriv));
        // store the weight on the same 10^-prec grid as the node; the
        // rounding is covered by the weight-perturbation allowance
        let weight = super::round_decimal(&weight, prec as i64);
        points.push((-&x, weight.clone()));
        points.push((x, weight));
    }
    GaussRule {
        points,
        delta: worst_delta,
    }
}

type RuleCache = Mutex<HashMap<(usize, u32), Arc<GaussRule>>>;

fn gauss_rule(order: usize, prec: u32) -> Arc<GaussRule> {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry((order, prec))
        .or_insert_with(|| Arc::new(build_rule(order, prec)))
        .clone()
}

/// One rule application on `[a, b]`. Returns the quadrature value; the
/// caller accounts for evaluation error analytically from the exp contract.
///
/// The inner loop runs entirely on scaled integers: nodes and weights are
/// exact multiples of `10^-prec`, the polynomial factor is an integer over
/// `10^(n prec)`, and the `e^{c y}` series value is used as an unreduced
/// integer fraction. Each term is rounded once onto the `10^-quantum` grid,
/// so no rational reduction happens per node.
fn apply_rule(
    f: &IntegrandId,
    rule: &GaussRule,
    a: &Rational,
    b: &Rational,
    prec: u32,
    eval_digits: u32,
    quantum: i64,
) -> Rational {
    let two = rat(2);
    let half = (b - a) / &two;
    let mid = (a + b) / &two;
    let coeff = f.exp_coefficient();
    let scale = BigInt::from(10).pow(prec);
    let n = match f {
        IntegrandId::ExpTail { n, .. }
        | IntegrandId::FmKernel { n, .. }
        | IntegrandId::TvKernel { n, .. } => *n,
    };
    let poly_den = BigInt::from(10).pow(prec * n as u32);
    let quantum_scale = BigInt::from(10).pow(quantum as u32);
    let mut sum_scaled = BigInt::zero();
    for (node, weight) in &rule.points {
        let y = super::round_decimal(&(&mid + &half * node), prec as i64);
        let y_scaled = (&y * Rational::from_integer(scale.clone())).to_integer();
        let w_scaled = (weight * Rational::from_integer(scale.clone())).to_integer();
        let poly = match f {
            IntegrandId::ExpTail { .. } | IntegrandId::FmKernel { .. } => {
                (&scale - &y_scaled).pow(n as u32)
            }
            IntegrandId::TvKernel { .. } => {
                y_scaled.pow(n as u32) + (&scale * BigInt::from(2) - &y_scaled).pow(n as u32)
            }
        };
        let arg = Rational::new_raw(coeff.numer() * &y_scaled, coeff.denom() * &scale);
        let (exp_num, exp_den) = exp_series_raw(&arg, eval_digits + 5);
        // term = (w poly exp_num) / (10^prec poly_den exp_den), rounded to
        // the 10^-quantum grid
        let term_num = w_scaled * poly * exp_num * &quantum_scale;
        let term_den = &scale * &poly_den * exp_den;
        sum_scaled += div_round(&term_num, &term_den);
    }
    half * Rational::new(sum_scaled, quantum_scale)
}

/// Nearest-integer division, ties away from zero; `den > 0`.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    use num_integer::Integer;
    let (q, r) = num.div_rem(den);
    if r.magnitude() * 2u32 >= *den.magnitude() {
        if num.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Adaptive quadrature of `f` over `[0, 1]` with certified absolute error
/// at most `tol` on success.
pub fn integrate(f: &IntegrandId, tol: &Rational) -> Result<HighPrecision, NumericsError> {
    integrate_with_limit(f, tol, 4096)
}

fn integrate_with_limit(
    f: &IntegrandId,
    tol: &Rational,
    max_panels: usize,
) -> Result<HighPrecision, NumericsError> {
    assert!(tol.is_positive(), "tolerance must be positive");
    let one = Rational::one();
    let tol_digits: u32 = if *tol >= one {
        0
    } else {
        (-floor_log10(tol)) as u32
    };
    let sup = f.sup_bound();
    let mag: u32 = if sup >= one {
        (floor_log10(&sup) + 1) as u32
    } else {
        0
    };
    let eval_digits = tol_digits + 12 + mag;
    // round the rule precision up to coarse steps so the node cache is shared
    let prec = (eval_digits + 10).div_ceil(8) * 8;
    let quantum = (tol_digits + 22 + mag) as i64;
    let rule16 = gauss_rule(16, prec);
    let rule8 = gauss_rule(8, prec);

    // Per unit width: node/weight perturbation allowance plus the exp-series
    // evaluation error. delta covers both the certified node enclosure and
    // the rounding of the mapped abscissa; 10^7 is a generous envelope for
    // the weight sensitivity of these low-order rules.
    let delta = rule16.delta.clone().max(rule8.delta.clone()) + ten_pow(-(prec as i64));
    let slop_unit = &delta * (f.deriv_bound() * rat(2) + &sup * rat(10_000_000))
        + (f.poly_sup() + &one) * ten_pow(-(eval_digits as i64 + 5));
    // Quantizing panel sums to the 10^-quantum grid costs a fixed amount per
    // panel, independent of its width.
    let quant_per_panel = rat(25) * ten_pow(-quantum);

    let mut stack = vec![(Rational::zero(), one.clone())];
    let mut value = Rational::zero();
    let mut total_err = Rational::zero();
    let mut panels: usize = 0;
    let mut exhausted = false;
    while let Some((a, b)) = stack.pop() {
        panels += 1;
        let width = &b - &a;
        let i16v = apply_rule(f, &rule16, &a, &b, prec, eval_digits, quantum);
        let i8v = apply_rule(f, &rule8, &a, &b, prec, eval_digits, quantum);
        let panel_err = (&i16v - &i8v).abs() + &slop_unit * &width + &quant_per_panel;
        if panel_err <= tol * &width || panels + stack.len() >= max_panels {
            if panel_err > tol * &width {
                exhausted = true;
            }
            value += i16v;
            total_err += panel_err;
        } else {
            let mid = (&a + &b) / rat(2);
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
    }
    if exhausted {
        Err(NumericsError::QuadratureTolerance(Box::new(
            QuadratureDiagnostic {
                requested: tol.clone(),
                achieved: total_err,
                value,
            },
        )))
    } else {
        Ok(HighPrecision::new(value, total_err))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{parse_rational, ratio};

    const TWO_ONE_MINUS_EINV: &str = "1.26424111765711535680895245967707826510837773793646";
    const E_MINUS_ONE: &str = "1.71828182845904523536028747135266249775724709369996";

    fn assert_close(hp: &HighPrecision, reference: &str, tol_pow: i64) {
        let r = parse_rational(reference).unwrap();
        assert!(
            (hp.value() - &r).abs() <= hp.error_bound() + ten_pow(-tol_pow),
            "quadrature value {} not within 10^-{} of {}",
            hp.value(),
            tol_pow,
            reference
        );
    }

    #[test]
    fn tv_kernel_linear_case() {
        // n = 1, lambda = 1: integrand is 2 e^{-y}, integral 2 (1 - 1/e)
        let f = IntegrandId::TvKernel {
            n: 1,
            lambda: rat(1),
        };
        let result = integrate(&f, &ten_pow(-12)).unwrap();
        assert!(*result.error_bound() <= ten_pow(-12));
        assert_close(&result, TWO_ONE_MINUS_EINV, 12);
    }

    #[test]
    fn fm_kernel_degenerate_case() {
        // n = 0, alpha = lambda = 1: integral of e^y is e - 1
        let f = IntegrandId::FmKernel {
            n: 0,
            lambda: rat(1),
            alpha: rat(1),
        };
        let result = integrate(&f, &ten_pow(-12)).unwrap();
        assert_close(&result, E_MINUS_ONE, 12);
    }

    #[test]
    fn exp_tail_kernel_large_n_sandwich() {
        // 1/(n+1) < I < (1/(n+1)) (1 + (e-1)/(n+2)) at x = 1, n = 50
        let n = 50;
        let f = IntegrandId::ExpTail { x: rat(1), n };
        let result = integrate(&f, &ten_pow(-10)).unwrap();
        let lo = ratio(1, n as i64 + 1);
        let e_minus_1 = parse_rational(E_MINUS_ONE).unwrap();
        let hi = &lo * (rat(1) + e_minus_1 / rat(n as i64 + 2));
        assert!(result.lower() > lo, "lower sandwich bound violated");
        assert!(result.upper() < hi, "upper sandwich bound violated");
    }

    #[test]
    fn polynomial_exactness_sanity() {
        // (1 - y)^8 with x = 0: closed form 1/9, should converge immediately
        let f = IntegrandId::ExpTail { x: rat(0), n: 8 };
        let result = integrate(&f, &ten_pow(-20)).unwrap();
        assert!((result.value() - ratio(1, 9)).abs() <= result.error_bound() + &ten_pow(-20));
    }

    #[test]
    fn panel_limit_reports_achieved_bound() {
        // High-degree polynomial factor with a panel budget too small to
        // resolve it: the diagnostic error must carry the achieved bound.
        let f = IntegrandId::ExpTail { x: rat(1), n: 40 };
        let err = integrate_with_limit(&f, &ten_pow(-30), 2).unwrap_err();
        let NumericsError::QuadratureTolerance(diag) = err;
        assert_eq!(diag.requested, ten_pow(-30));
        assert!(diag.achieved > ten_pow(-30));
        // the value is still a rough estimate of the true integral
        let series = crate::numerics::exp_eval(&rat(1), 30)
            .add_rat(&-crate::numerics::exp_partial_sum(&rat(1), 40));
        let pf = Rational::from_integer(crate::numerics::factorial(40)).recip() * rat(1);
        assert!((diag.value * pf - series.value()).abs() < ratio(1, 1000));
    }
}
