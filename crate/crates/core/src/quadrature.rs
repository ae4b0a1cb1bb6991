//! Adaptive Gauss–Kronrod integration on finite and infinite ranges, plus
//! the guarded `u log u` kernel the entropy integrands are built from.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::distributions::Distribution;
use crate::real::Real;
use crate::sum::CompensatedSum;

// 21-point Kronrod abscissae on [-1, 1] (non-negative half, descending).
// The odd entries are the 10-point Gauss abscissae.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_008_914,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

const INITIAL_PIECES: usize = 4;
const EVALS_PER_RULE: usize = 21;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("integrand returned {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },
    #[error("invalid integration range [{lower}, {upper}]")]
    InvalidRange { lower: f64, upper: f64 },
    #[error("tolerances must be strictly positive")]
    InvalidTolerance,
}

/// Requested accuracy: the integral is accepted once the error estimate
/// drops below `max(abs_tol, rel_tol * |value|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_evaluations: usize,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        let floor = T::lit(256.0) * T::epsilon();
        let t = T::lit(1e-10).max(floor);
        Self {
            abs_tol: t,
            rel_tol: t,
            max_evaluations: 1_000_000,
        }
    }
}

impl<T: Real> Tolerance<T> {
    pub fn new(abs_tol: T, rel_tol: T, max_evaluations: usize) -> Result<Self, QuadratureError> {
        if !(abs_tol > T::zero() && rel_tol > T::zero() && max_evaluations > 0) {
            return Err(QuadratureError::InvalidTolerance);
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_evaluations,
        })
    }

    /// Same absolute and relative tolerance.
    pub fn uniform(tol: T) -> Result<Self, QuadratureError> {
        Self::new(tol, tol, Self::default().max_evaluations)
    }

    fn target(&self, value: T) -> T {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralResult<T> {
    pub value: T,
    pub abs_error_estimate: T,
    pub evaluations: usize,
    pub converged: bool,
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real> Eq for Segment<T> {}
impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn gauss_kronrod<T: Real, F: FnMut(T) -> Result<T, QuadratureError>>(
    f: &mut F,
    a: T,
    b: T,
) -> Result<(T, T), QuadratureError> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let abs_half = half_len.abs();

    let mut fv = [T::zero(); 21];
    fv[10] = f(center)?;
    for j in 0..10 {
        let dx = half_len * T::lit(XGK[j]);
        fv[j] = f(center - dx)?;
        fv[20 - j] = f(center + dx)?;
    }

    let mut kronrod = fv[10] * T::lit(WGK[10]);
    let mut gauss = T::zero();
    let mut res_abs = fv[10].abs() * T::lit(WGK[10]);
    for j in 0..10 {
        let w = T::lit(WGK[j]);
        kronrod = kronrod + w * (fv[j] + fv[20 - j]);
        res_abs = res_abs + w * (fv[j].abs() + fv[20 - j].abs());
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * (fv[j] + fv[20 - j]);
        }
    }
    let mean = kronrod * half;
    let mut res_asc = T::lit(WGK[10]) * (fv[10] - mean).abs();
    for j in 0..10 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv[j] - mean).abs() + (fv[20 - j] - mean).abs());
    }

    let value = kronrod * half_len;
    res_abs = res_abs * abs_half;
    res_asc = res_asc * abs_half;
    let mut err = ((kronrod - gauss) * half_len).abs();
    if res_asc != T::zero() && err != T::zero() {
        let scaled = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = res_asc * scaled.min(T::one());
    }
    let roundoff = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        err = err.max(roundoff);
    }
    Ok((value, err))
}

fn adaptive<T: Real, F: FnMut(T) -> Result<T, QuadratureError>>(
    mut f: F,
    a: T,
    b: T,
    tol: &Tolerance<T>,
) -> Result<IntegralResult<T>, QuadratureError> {
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment<T>> = Vec::new();
    let mut evaluations = 0;

    let pieces = T::from_usize_lossy(INITIAL_PIECES);
    for i in 0..INITIAL_PIECES {
        let lo = a + (b - a) * T::from_usize_lossy(i) / pieces;
        let hi = if i + 1 == INITIAL_PIECES {
            b
        } else {
            a + (b - a) * T::from_usize_lossy(i + 1) / pieces
        };
        let (value, error) = gauss_kronrod(&mut f, lo, hi)?;
        evaluations += EVALS_PER_RULE;
        heap.push(Segment {
            a: lo,
            b: hi,
            value,
            error,
        });
    }

    let totals = |heap: &BinaryHeap<Segment<T>>, frozen: &[Segment<T>]| {
        let mut v = CompensatedSum::new();
        let mut e = CompensatedSum::new();
        for s in heap.iter().chain(frozen.iter()) {
            v.add(s.value);
            e.add(s.error);
        }
        (v.value(), e.value())
    };

    let (mut value, mut error) = totals(&heap, &frozen);
    let mut since_resum = 0;
    loop {
        if error <= tol.target(value) {
            return Ok(IntegralResult {
                value,
                abs_error_estimate: error,
                evaluations,
                converged: true,
            });
        }
        if evaluations + 2 * EVALS_PER_RULE > tol.max_evaluations {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = T::lit(0.5) * (worst.a + worst.b);
        let resolution = T::lit(4.0) * T::epsilon() * mid.abs().max(T::min_positive_value());
        if (worst.b - worst.a).abs() <= resolution || mid == worst.a || mid == worst.b {
            frozen.push(worst);
            continue;
        }
        let (v1, e1) = gauss_kronrod(&mut f, worst.a, mid)?;
        let (v2, e2) = gauss_kronrod(&mut f, mid, worst.b)?;
        evaluations += 2 * EVALS_PER_RULE;
        value = value + (v1 + v2 - worst.value);
        error = error + (e1 + e2 - worst.error);
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        since_resum += 1;
        if since_resum == 64 {
            (value, error) = totals(&heap, &frozen);
            since_resum = 0;
        }
    }
    let (value, error) = totals(&heap, &frozen);
    Ok(IntegralResult {
        value,
        abs_error_estimate: error,
        evaluations,
        converged: error <= tol.target(value),
    })
}

fn checked<T: Real>(x: T, y: T) -> Result<T, QuadratureError> {
    if y.is_finite() {
        Ok(y)
    } else {
        Err(QuadratureError::NonFinite {
            x: x.to_f64_lossy(),
            value: y.to_f64_lossy(),
        })
    }
}

/// Integrates `f` over `[lower, upper]`; either limit may be infinite.
pub fn integrate<T: Real, F: FnMut(T) -> T>(
    f: F,
    lower: T,
    upper: T,
    tol: &Tolerance<T>,
) -> Result<IntegralResult<T>, QuadratureError> {
    integrate_scaled(f, lower, upper, T::one(), tol)
}

/// Like [`integrate`], with `scale` setting where an infinite range is
/// mapped: `x = a + scale * (1 - w) / w` for `w` in (0, 1]. A scale near the
/// bulk of the integrand (e.g. a median) keeps the mapped integrand smooth.
pub fn integrate_scaled<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    lower: T,
    upper: T,
    scale: T,
    tol: &Tolerance<T>,
) -> Result<IntegralResult<T>, QuadratureError> {
    if !(tol.abs_tol > T::zero() && tol.rel_tol > T::zero()) {
        return Err(QuadratureError::InvalidTolerance);
    }
    if lower.is_nan() || upper.is_nan() || lower > upper || (lower == upper && lower.is_infinite()) {
        return Err(QuadratureError::InvalidRange {
            lower: lower.to_f64_lossy(),
            upper: upper.to_f64_lossy(),
        });
    }
    if lower == upper {
        return Ok(IntegralResult {
            value: T::zero(),
            abs_error_estimate: T::zero(),
            evaluations: 0,
            converged: true,
        });
    }
    let s = if scale.is_finite() && scale > T::zero() {
        scale
    } else {
        T::one()
    };
    // the infinite end sits at w = 0, where floating point resolves
    // arbitrarily small intervals, so algebraic tails bisect cleanly
    let jacobian = |w: T| ((T::one() - w) / w, s / (w * w));
    match (lower.is_finite(), upper.is_finite()) {
        (true, true) => adaptive(
            |x| {
                let y = f(x);
                checked(x, y)
            },
            lower,
            upper,
            tol,
        ),
        (true, false) => adaptive(
            |t| {
                let (u, dx) = jacobian(t);
                let x = lower + s * u;
                let y = f(x);
                checked(x, y)?;
                checked(x, if y == T::zero() { y } else { y * dx })
            },
            T::zero(),
            T::one(),
            tol,
        ),
        (false, true) => adaptive(
            |t| {
                let (u, dx) = jacobian(t);
                let x = upper - s * u;
                let y = f(x);
                checked(x, y)?;
                checked(x, if y == T::zero() { y } else { y * dx })
            },
            T::zero(),
            T::one(),
            tol,
        ),
        (false, false) => adaptive(
            |t| {
                let (u, dx) = jacobian(t);
                let xr = s * u;
                let xl = -xr;
                let yr = checked(xr, f(xr))?;
                let yl = checked(xl, f(xl))?;
                let y = yr + yl;
                checked(xr, if y == T::zero() { y } else { y * dx })
            },
            T::zero(),
            T::one(),
            tol,
        ),
    }
}

/// `u log u` on [0, 1] with the continuous extension 0 at u = 0.
///
/// Arguments within 1e-12 outside the unit interval are clamped; anything
/// further out is a domain error.
pub fn xlogx<T: Real>(u: T) -> crate::Result<T> {
    let slack = T::lit(1e-12);
    if u.is_nan() || u < -slack || u > T::one() + slack {
        return Err(crate::Error::Domain {
            what: "xlogx argument",
            value: u.to_f64_lossy(),
        });
    }
    let u = u.max(T::zero()).min(T::one());
    Ok(if u == T::zero() { T::zero() } else { u * u.ln() })
}

/// `-p log p` where `p + q = 1` and both halves are known accurately.
///
/// Uses `ln_1p(-q)` when `p` is near 1 so the result keeps full relative
/// precision on both tails of a distribution.
#[inline]
pub fn neg_xlogx_split<T: Real>(p: T, q: T) -> T {
    let p = p.max(T::zero()).min(T::one());
    if p == T::zero() {
        return T::zero();
    }
    let ln_p = if p > T::lit(0.5) {
        (-q.max(T::zero())).ln_1p()
    } else {
        p.ln()
    };
    -p * ln_p
}

/// Integrates a function over the support of `dist`, mapping an infinite
/// upper limit with the distribution median as scale.
pub fn integrate_over_support<T: Real, F: FnMut(T) -> T>(
    dist: &Distribution<T>,
    f: F,
    tol: &Tolerance<T>,
) -> Result<IntegralResult<T>, QuadratureError> {
    let support = dist.support();
    integrate_scaled(f, support.lower, support.upper, dist.characteristic_scale(), tol)
}

/// ∫ g(x) dx over the support via the substitution x = Q(p):
/// ∫₀¹ g(Q(p)) / f(Q(p)) dp. Requires a density.
pub fn integrate_by_quantile<T: Real, G: FnMut(T) -> T>(
    dist: &Distribution<T>,
    mut g: G,
    tol: &Tolerance<T>,
) -> crate::Result<IntegralResult<T>> {
    // surface the capability error before integrating
    dist.pdf(dist.support().lower)?;
    let mut failure = None;
    let result = integrate(
        |p| match dist.quantile(p).and_then(|x| Ok((x, dist.pdf(x)?))) {
            Ok((x, density)) if density > T::zero() => g(x) / density,
            Ok(_) => T::zero(),
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        },
        T::zero(),
        T::one(),
        tol,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(result),
    }
}

/// ∫ g over [lower, Q(1 - tail_prob)] plus the tail approximated as
/// g(L) / h(L), h the hazard rate (exact for exponential-type tails where
/// g decays like the survival function).
pub fn integrate_truncated_with_tail<T: Real, G: FnMut(T) -> T>(
    dist: &Distribution<T>,
    mut g: G,
    tail_prob: T,
    tol: &Tolerance<T>,
) -> crate::Result<IntegralResult<T>> {
    let lower = dist.support().lower;
    let cutoff = dist.quantile(T::one() - tail_prob)?;
    let body = integrate(&mut g, lower, cutoff, tol)?;
    let hazard = dist.pdf(cutoff)? / dist.sf(cutoff);
    let tail = if hazard > T::zero() { g(cutoff) / hazard } else { T::zero() };
    Ok(IntegralResult {
        value: body.value + tail,
        ..body
    })
}
