//! Special functions needed by the moment bounds and the closed-form
//! order-statistic moments.

use crate::real::Real;
use crate::sum::compensated_sum;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of |Γ(x)| (Lanczos approximation, g = 7).
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // reflection
        let pi = T::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::from_usize_lossy(i));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    half * (T::lit(2.0) * T::PI()).ln() + (x + half) * t.ln() - t + acc.ln()
}

/// Complete beta function B(a, b) for positive arguments.
pub fn beta<T: Real>(a: T, b: T) -> T {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

/// B(n, n) = Γ(n)² / Γ(2n).
pub fn complete_beta<T: Real>(n: usize) -> T {
    assert!(n >= 1, "complete_beta needs n >= 1");
    let n = T::from_usize_lossy(n);
    (T::lit(2.0) * ln_gamma(n) - ln_gamma(n + n)).exp()
}

/// ln C(2k, k).
pub fn ln_central_binomial<T: Real>(k: usize) -> T {
    let k1 = T::from_usize_lossy(k) + T::one();
    ln_gamma(k1 + k1 - T::one()) - T::lit(2.0) * ln_gamma(k1)
}

/// C(2k, k), exact product for small k and log space above 30.
pub fn central_binomial<T: Real>(k: usize) -> T {
    if k > 30 {
        return ln_central_binomial::<T>(k).exp();
    }
    // C(2k, k) = prod_{i=1}^{k} (k + i) / i, every partial product an integer
    let mut c = 1u128;
    for i in 1..=k as u128 {
        c = c * (k as u128 + i) / i;
    }
    T::from_u128(c).expect("central binomial representable")
}

#[allow(clippy::excessive_precision)]
const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
const ASYMPTOTIC_FROM: usize = 64;

/// Harmonic number H_n = Σ_{k≤n} 1/k.
pub fn harmonic<T: Real>(n: usize) -> T {
    if n <= ASYMPTOTIC_FROM {
        return compensated_sum((1..=n).map(|k| T::one() / T::from_usize_lossy(k)));
    }
    let x = T::from_usize_lossy(n);
    let inv2 = T::one() / (x * x);
    x.ln() + T::lit(EULER_GAMMA) + T::lit(0.5) / x
        - inv2 * (T::lit(1.0 / 12.0) - inv2 * (T::lit(1.0 / 120.0) - inv2 * T::lit(1.0 / 252.0)))
}

/// Second-order harmonic number H_n^{(2)} = Σ_{k≤n} 1/k².
pub fn harmonic2<T: Real>(n: usize) -> T {
    if n <= ASYMPTOTIC_FROM {
        return compensated_sum((1..=n).rev().map(|k| {
            let k = T::from_usize_lossy(k);
            T::one() / (k * k)
        }));
    }
    let x = T::from_usize_lossy(n);
    let inv = T::one() / x;
    let inv2 = inv * inv;
    // Σ_{k>n} 1/k² by Euler–Maclaurin
    let tail = inv
        * (T::one()
            - inv * (T::lit(0.5)
                - inv * (T::lit(1.0 / 6.0) - inv2 * (T::lit(1.0 / 30.0) - inv2 * T::lit(1.0 / 42.0)))));
    T::PI() * T::PI() / T::lit(6.0) - tail
}
