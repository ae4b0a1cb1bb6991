//! Series constants of the bound theorems, certified by integral
//! enclosures of their tails and computed once per process.

use std::f64::consts::SQRT_2;
use std::sync::OnceLock;

use super::special::{central_binomial, complete_beta, ln_central_binomial};
use crate::sum::CompensatedSum;

/// Target width of the tail enclosure.
pub const CONSTANT_ACCURACY: f64 = 1e-6;

/// `value` lies in `[lower, upper]`, an interval of width below
/// [`CONSTANT_ACCURACY`] containing the infinite sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedConstant {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Number of explicitly summed terms.
    pub terms: usize,
}

/// Sums `term(1..=N)` and encloses `Σ_{n>N} term(n)` in
/// `[tail_lower(N), tail_upper(N)]`, growing N until the enclosure is
/// narrower than [`CONSTANT_ACCURACY`].
fn certify(term: impl Fn(usize) -> f64, tail_lower: impl Fn(usize) -> f64, tail_upper: impl Fn(usize) -> f64) -> CertifiedConstant {
    let mut acc = CompensatedSum::<f64>::new();
    let mut n = 0;
    loop {
        n += 1;
        acc.add(term(n));
        let (lo, hi) = (tail_lower(n), tail_upper(n));
        if hi - lo < CONSTANT_ACCURACY {
            let s = acc.value();
            return CertifiedConstant {
                value: s + 0.5 * (lo + hi),
                lower: s + lo,
                upper: s + hi,
                terms: n,
            };
        }
    }
}

/// ∫_x^∞ dt / ((t+1)√(2t+1)) = 2 atan(1/√(2x+1)).
pub fn hdg_tail_integral(x: f64) -> f64 {
    2.0 * (1.0 / (2.0 * x + 1.0).sqrt()).atan()
}

/// ∫_x^∞ dt / (t √(t+1)) = ln((u+1)/(u-1)), u = √(x+1).
pub fn range_tail_integral(x: f64) -> f64 {
    let u = (x + 1.0).sqrt();
    (2.0 / (u - 1.0)).ln_1p()
}

/// ∫_x^∞ dt / (t √(2t+1)) = ln((v+1)/(v-1)), v = √(2x+1).
pub fn symmetric_tail_integral(x: f64) -> f64 {
    let v = (2.0 * x + 1.0).sqrt();
    (2.0 / (v - 1.0)).ln_1p()
}

/// Term of the symmetric-law series: (1/n) √(1/(2n+1) − B(n+1, n+1)).
pub fn symmetric_term(n: usize) -> f64 {
    let nf = n as f64;
    let b = complete_beta::<f64>(n + 1);
    (1.0 / (2.0 * nf + 1.0) - b).max(0.0).sqrt() / nf
}

/// c(n) = [2 (1 − 1/C(2n−2, n−1)) / (2n−1)]^½, with c(1) = 0.
pub fn c_of_n(n: usize) -> f64 {
    assert!(n >= 1, "c(n) needs n >= 1");
    let k = n - 1;
    let inv_binom = if k > 30 {
        (-ln_central_binomial::<f64>(k)).exp()
    } else {
        1.0 / central_binomial::<f64>(k)
    };
    (2.0 * (1.0 - inv_binom) / (2.0 * n as f64 - 1.0)).sqrt()
}

/// Σ_{n≥1} 1/((n+1)√(2n+1)) ≈ 1.21.
pub fn hdg_constant() -> &'static CertifiedConstant {
    static C: OnceLock<CertifiedConstant> = OnceLock::new();
    C.get_or_init(|| {
        certify(
            |n| {
                let n = n as f64;
                1.0 / ((n + 1.0) * (2.0 * n + 1.0).sqrt())
            },
            |n| hdg_tail_integral(n as f64 + 1.0),
            |n| hdg_tail_integral(n as f64),
        )
    })
}

/// Σ_{n≥1} √2/(n√(n+1)) ≈ 3.09.
pub fn range_constant() -> &'static CertifiedConstant {
    static C: OnceLock<CertifiedConstant> = OnceLock::new();
    C.get_or_init(|| {
        certify(
            |n| {
                let n = n as f64;
                SQRT_2 / (n * (n + 1.0).sqrt())
            },
            |n| SQRT_2 * range_tail_integral(n as f64 + 1.0),
            |n| SQRT_2 * range_tail_integral(n as f64),
        )
    })
}

/// (1/√2) Σ_{n≥1} (1/n)√(1/(2n+1) − B(n+1,n+1)).
pub fn symmetric_constant() -> &'static CertifiedConstant {
    static C: OnceLock<CertifiedConstant> = OnceLock::new();
    C.get_or_init(|| {
        // (2n+1) B(n+1, n+1) is decreasing, so past N every term is at
        // least √(1 − ε_N) times the comparison function
        let eps = |n: usize| (2.0 * n as f64 + 3.0) * complete_beta::<f64>(n + 2);
        let raw = certify(
            symmetric_term,
            |n| (1.0 - eps(n)).max(0.0).sqrt() * symmetric_tail_integral(n as f64 + 1.0),
            |n| symmetric_tail_integral(n as f64),
        );
        scale(raw, 1.0 / SQRT_2)
    })
}

/// (1/2) Σ_{n≥1} c(n+1)/n, the constant of the bounded-support symmetric
/// bound as obtained from μ_{n+1:n+1} ≤ ½σ(n+1)c(n+1) + μ.
pub fn symmetric_bounded_constant() -> &'static CertifiedConstant {
    static C: OnceLock<CertifiedConstant> = OnceLock::new();
    C.get_or_init(|| {
        // c(n+1)/n = √2 √(1 − 1/C(2n,n)) / (n √(2n+1))
        let factor = |n: usize| {
            let k = n + 1;
            let inv = if k > 30 {
                (-ln_central_binomial::<f64>(k)).exp()
            } else {
                1.0 / central_binomial::<f64>(k)
            };
            (1.0 - inv).sqrt()
        };
        let raw = certify(
            |n| c_of_n(n + 1) / n as f64,
            |n| factor(n) * SQRT_2 * symmetric_tail_integral(n as f64 + 1.0),
            |n| SQRT_2 * symmetric_tail_integral(n as f64),
        );
        scale(raw, 0.5)
    })
}

fn scale(c: CertifiedConstant, k: f64) -> CertifiedConstant {
    CertifiedConstant {
        value: c.value * k,
        lower: c.lower * k,
        upper: c.upper * k,
        terms: c.terms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(term: impl Fn(usize) -> f64, n: usize) -> f64 {
        let mut acc = CompensatedSum::<f64>::new();
        for k in 1..=n {
            acc.add(term(k));
        }
        acc.value()
    }

    #[test]
    fn tail_integrals_match_quadrature() {
        use crate::quadrature::{integrate, Tolerance};
        let tol = Tolerance::default();
        for x in [1.0, 7.5, 100.0] {
            let q = integrate(|t: f64| 1.0 / ((t + 1.0) * (2.0 * t + 1.0).sqrt()), x, f64::INFINITY, &tol).unwrap();
            assert!((q.value - hdg_tail_integral(x)).abs() < 1e-9, "{x}: {q:?} vs {}", hdg_tail_integral(x));
            let q = integrate(|t: f64| 1.0 / (t * (t + 1.0).sqrt()), x, f64::INFINITY, &tol).unwrap();
            assert!((q.value - range_tail_integral(x)).abs() < 1e-9);
            let q = integrate(|t: f64| 1.0 / (t * (2.0 * t + 1.0).sqrt()), x, f64::INFINITY, &tol).unwrap();
            assert!((q.value - symmetric_tail_integral(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn enclosures_contain_long_partial_sums() {
        // a partial sum to 2e6 terms is a lower bound; adding the upper
        // tail integral gives an upper bound
        let n = 2_000_000;
        let c1 = hdg_constant();
        let s = brute_force(|k| 1.0 / ((k as f64 + 1.0) * (2.0 * k as f64 + 1.0).sqrt()), n);
        assert!(s <= c1.upper);
        assert!(s + hdg_tail_integral(n as f64) >= c1.lower);
        assert!(c1.upper - c1.lower < CONSTANT_ACCURACY);

        let c4 = range_constant();
        let s = brute_force(|k| SQRT_2 / (k as f64 * (k as f64 + 1.0).sqrt()), n);
        assert!(s <= c4.upper);
        assert!(s + SQRT_2 * range_tail_integral(n as f64) >= c4.lower);
    }

    #[test]
    fn constants_near_displayed_values() {
        assert!((hdg_constant().value - 1.21).abs() < 0.01);
        assert!((range_constant().value - 3.09).abs() < 0.01);
    }

    #[test]
    fn c_of_n_examples() {
        assert_eq!(c_of_n(1), 0.0);
        assert!((c_of_n(2) - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((c_of_n(5) - (2.0 * (1.0 - 1.0 / 70.0) / 9.0f64).sqrt()).abs() < 1e-15);
        // continuity across the log-space switch
        assert!((c_of_n(31) / c_of_n(32) - ((2.0 * 32.0 - 1.0) / (2.0 * 31.0 - 1.0f64)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn symmetric_constants_enclose_partial_sums() {
        let ab = symmetric_constant();
        let partial = brute_force(symmetric_term, 20_000) / SQRT_2;
        assert!(partial <= ab.upper);
        let dn = symmetric_bounded_constant();
        let partial = 0.5 * brute_force(|n| c_of_n(n + 1) / n as f64, 20_000);
        assert!(partial <= dn.upper);
        assert!(dn.upper - dn.lower < CONSTANT_ACCURACY);
    }

    #[test]
    fn concurrent_first_use_is_idempotent() {
        let handles: Vec<_> = (0..8).map(|_| std::thread::spawn(|| *symmetric_constant())).collect();
        let values: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] == w[1]));
    }
}
