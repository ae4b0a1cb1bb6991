//! Test-only oracles, independent of the library's quadrature.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

const STEP: f64 = 1.0 / 128.0;
const T_MAX: f64 = 4.5;

/// Double-exponential (tanh-sinh) rule on [a, b].
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let k_max = (T_MAX / STEP) as i64;
    let mut sum = 0.0;
    for k in -k_max..=k_max {
        let t = k as f64 * STEP;
        let u = FRAC_PI_2 * t.sinh();
        let x = c + h * u.tanh();
        let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if x > a && x < b && w > 0.0 {
            sum += w * f(x);
        }
    }
    sum * h * STEP
}

/// Double-exponential (exp-sinh) rule on [0, ∞).
pub fn exp_sinh(f: impl Fn(f64) -> f64) -> f64 {
    let k_max = (T_MAX / STEP) as i64;
    let mut sum = 0.0;
    for k in -k_max..=k_max {
        let t = k as f64 * STEP;
        let x = (FRAC_PI_2 * t.sinh()).exp();
        let w = FRAC_PI_2 * t.cosh() * x;
        if x.is_finite() && x > 0.0 {
            let y = f(x);
            if y != 0.0 {
                sum += w * y;
            }
        }
    }
    sum * STEP
}

/// −p log p where q = 1 − p is known accurately.
pub fn neg_plogp(p: f64, q: f64) -> f64 {
    if p <= 0.0 || q <= 0.0 {
        0.0
    } else if p > 0.5 {
        -p * (-q).ln_1p()
    } else {
        -p * p.ln()
    }
}

/// cdf and survival function of the six reference rows, re-typed here.
pub fn row_cdf(row: usize, x: f64) -> (f64, f64) {
    match row {
        1 => (-(-x).exp_m1(), (-x).exp()),
        2 => (x, 1.0 - x),
        3 => {
            let f = (2.0 - 2.0 / x - 2.0 * x.ln()).exp();
            (f, 1.0 - f)
        }
        4 => {
            let s = (x + 1.0).powi(-3);
            (1.0 - s, s)
        }
        5 => (x * x, 1.0 - x * x),
        6 => {
            let e = -1.0 / x.exp_m1();
            (e.exp(), -e.exp_m1())
        }
        _ => panic!("row {row}"),
    }
}

pub fn row_bounded(row: usize) -> bool {
    matches!(row, 2 | 3 | 5)
}

/// ∫ g over the support of `row`.
pub fn over_support(row: usize, g: impl Fn(f64) -> f64) -> f64 {
    if row_bounded(row) {
        tanh_sinh(g, 0.0, 1.0)
    } else {
        exp_sinh(g)
    }
}

/// [CRE, CE, WCRE, WCE] of a reference row by the oracle rule.
pub fn oracle_entropies(row: usize) -> [f64; 4] {
    let residual = |x: f64| {
        let (f, s) = row_cdf(row, x);
        neg_plogp(s, f)
    };
    let past = |x: f64| {
        let (f, s) = row_cdf(row, x);
        neg_plogp(f, s)
    };
    let cre = over_support(row, residual);
    let ce = over_support(row, past);
    let wcre = over_support(row, |x| x * residual(x));
    let wce = over_support(row, |x| x * past(x));
    [cre, ce, wcre, wce]
}

/// E(X_{n:n}) or E(X_{1:n}) from survival integrals.
pub fn oracle_extreme_mean(row: usize, n: i32, largest: bool) -> f64 {
    over_support(row, |x| {
        let (f, s) = row_cdf(row, x);
        if largest {
            1.0 - f.powi(n)
        } else {
            s.powi(n)
        }
    })
}
