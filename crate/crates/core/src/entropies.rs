//! The four cumulative information measures, evaluated from their defining
//! integrals (or, for empirical laws, as exact sums over sample gaps).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_over_support, neg_xlogx_split, Tolerance};
use crate::real::Real;
use crate::sum::CompensatedSum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyKind {
    /// −∫ F̄ log F̄
    Cre,
    /// −∫ F log F
    Ce,
    /// −∫ x F̄ log F̄
    Wcre,
    /// −∫ x F log F
    Wce,
}

impl EntropyKind {
    pub const ALL: [EntropyKind; 4] = [Self::Cre, Self::Ce, Self::Wcre, Self::Wce];

    pub fn name(self) -> &'static str {
        match self {
            Self::Cre => "cre",
            Self::Ce => "ce",
            Self::Wcre => "wcre",
            Self::Wce => "wce",
        }
    }

    pub fn is_weighted(self) -> bool {
        matches!(self, Self::Wcre | Self::Wce)
    }

    /// Residual (survival-based) rather than past (cdf-based) measure.
    pub fn is_residual(self) -> bool {
        matches!(self, Self::Cre | Self::Wcre)
    }
}

impl fmt::Display for EntropyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntropyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cre" => Ok(Self::Cre),
            "ce" => Ok(Self::Ce),
            "wcre" => Ok(Self::Wcre),
            "wce" => Ok(Self::Wce),
            other => Err(Error::Usage(format!("unknown measure {other:?} (expected cre, ce, wcre, wce)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Quadrature,
    Series,
    Plugin,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyValue<T> {
    pub kind: EntropyKind,
    pub value: T,
    pub method: Method,
    pub error_estimate: T,
    pub warnings: Vec<String>,
}

/// Boundary products (e.g. x F̄ log F̄) larger than this at the outermost
/// evaluation point are reported.
pub const BOUNDARY_WARNING_THRESHOLD: f64 = 1e-6;
const BOUNDARY_TAIL_PROB: f64 = 1e-12;

/// −u log u with u = F̄ (residual kinds) or u = F.
fn kernel<T: Real>(dist: &Distribution<T>, kind: EntropyKind, x: T) -> T {
    let (f, s) = (dist.cdf(x), dist.sf(x));
    if kind.is_residual() {
        neg_xlogx_split(s, f)
    } else {
        neg_xlogx_split(f, s)
    }
}

fn integrand<T: Real>(dist: &Distribution<T>, kind: EntropyKind, x: T) -> T {
    let k = kernel(dist, kind, x);
    if kind.is_weighted() {
        x * k
    } else {
        k
    }
}

fn boundary_warning<T: Real>(dist: &Distribution<T>, kind: EntropyKind) -> Option<String> {
    if dist.support().upper.is_finite() {
        return None;
    }
    let x = dist.quantile(T::one() - T::lit(BOUNDARY_TAIL_PROB)).ok()?;
    // integration-by-parts boundary term: x u log u, or x²/2 u log u when weighted
    let product = if kind.is_weighted() {
        x * x / T::lit(2.0) * kernel(dist, kind, x)
    } else {
        x * kernel(dist, kind, x)
    };
    (product.abs().to_f64_lossy() > BOUNDARY_WARNING_THRESHOLD).then(|| {
        format!(
            "{kind}: boundary term {:.3e} at x = {:.6e} exceeds {BOUNDARY_WARNING_THRESHOLD:e}; \
             the vanishing-limit hypothesis may not hold",
            product.to_f64_lossy(),
            x.to_f64_lossy()
        )
    })
}

fn require_nonnegative_support<T: Real>(dist: &Distribution<T>) -> Result<()> {
    if dist.has_nonnegative_support() {
        Ok(())
    } else {
        Err(Error::NegativeSupport(dist.to_string()))
    }
}

/// Evaluates `kind` by adaptive quadrature of its defining integral.
///
/// Empirical laws are dispatched to [`empirical_plugin`].
pub fn entropy<T: Real>(dist: &Distribution<T>, kind: EntropyKind, tol: &Tolerance<T>) -> Result<EntropyValue<T>> {
    require_nonnegative_support(dist)?;
    if dist.is_empirical() {
        return empirical_plugin(dist, kind);
    }
    let r = integrate_over_support(dist, |x| integrand(dist, kind, x), tol)?;
    if !r.converged {
        return Err(Error::NotConverged {
            what: format!("{kind} of {dist}"),
            best_estimate: r.value.to_f64_lossy(),
            error_estimate: r.abs_error_estimate.to_f64_lossy(),
        });
    }
    Ok(EntropyValue {
        kind,
        // every integrand is pointwise non-negative
        value: r.value.max(T::zero()),
        method: Method::Quadrature,
        error_estimate: r.abs_error_estimate,
        warnings: boundary_warning(dist, kind).into_iter().collect(),
    })
}

pub fn cre<T: Real>(dist: &Distribution<T>, tol: &Tolerance<T>) -> Result<EntropyValue<T>> {
    entropy(dist, EntropyKind::Cre, tol)
}

pub fn ce<T: Real>(dist: &Distribution<T>, tol: &Tolerance<T>) -> Result<EntropyValue<T>> {
    entropy(dist, EntropyKind::Ce, tol)
}

pub fn wcre<T: Real>(dist: &Distribution<T>, tol: &Tolerance<T>) -> Result<EntropyValue<T>> {
    entropy(dist, EntropyKind::Wcre, tol)
}

pub fn wce<T: Real>(dist: &Distribution<T>, tol: &Tolerance<T>) -> Result<EntropyValue<T>> {
    entropy(dist, EntropyKind::Wce, tol)
}

/// Plug-in value of `kind` for an empirical law: the step cdf makes every
/// integrand piecewise constant (times x for the weighted forms), so the
/// integral is an exact finite sum over the gaps between distinct values.
pub fn empirical_plugin<T: Real>(dist: &Distribution<T>, kind: EntropyKind) -> Result<EntropyValue<T>> {
    let sample = dist.empirical_sample().ok_or(Error::Usage(format!(
        "plug-in estimation needs an empirical distribution, got {dist}"
    )))?;
    let gaps = sample.gaps();
    let mut warnings = Vec::new();
    if gaps.is_empty() {
        warnings.push(format!("{kind}: fewer than 2 distinct sample values; entropy is 0"));
    }
    let mut acc = CompensatedSum::new();
    for (left, right, f) in gaps {
        let u = if kind.is_residual() {
            neg_xlogx_split(T::one() - f, f)
        } else {
            neg_xlogx_split(f, T::one() - f)
        };
        let width = if kind.is_weighted() {
            (right * right - left * left) / T::lit(2.0)
        } else {
            right - left
        };
        acc.add(u * width);
    }
    Ok(EntropyValue {
        kind,
        value: acc.value(),
        method: Method::Plugin,
        error_estimate: T::zero(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    #[test]
    fn exponential_closed_forms() {
        let d = Distribution::exponential(1.0).unwrap();
        assert!((cre(&d, &tol()).unwrap().value - 1.0).abs() < 1e-9);
        let expected_ce = std::f64::consts::PI.powi(2) / 6.0 - 1.0;
        assert!((ce(&d, &tol()).unwrap().value - expected_ce).abs() < 1e-9);
        // −∫ x e^{-x} log e^{-x} = ∫ x² e^{-x} = 2
        assert!((wcre(&d, &tol()).unwrap().value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn uniform_closed_forms() {
        let d = Distribution::uniform(1.0).unwrap();
        assert!((cre(&d, &tol()).unwrap().value - 0.25).abs() < 1e-10);
        assert!((ce(&d, &tol()).unwrap().value - 0.25).abs() < 1e-10);
        assert!((wcre(&d, &tol()).unwrap().value - 5.0 / 36.0).abs() < 1e-10);
        assert!((wce(&d, &tol()).unwrap().value - 1.0 / 9.0).abs() < 1e-10);
    }

    #[test]
    fn power_law_ce() {
        // −∫₀¹ x² log x² dx = 2/9
        let d = Distribution::power(2.0).unwrap();
        assert!((ce(&d, &tol()).unwrap().value - 2.0 / 9.0).abs() < 1e-10);
    }

    #[test]
    fn reciprocal_exponential_row() {
        let d = Distribution::<f64>::reciprocal_exponential();
        assert!((cre(&d, &tol()).unwrap().value - 0.1549).abs() < 1e-3);
    }

    #[test]
    fn rejects_negative_support() {
        let n = Distribution::<f64>::standard_normal();
        assert!(matches!(cre(&n, &tol()), Err(Error::NegativeSupport(_))));
    }

    #[test]
    fn nonnegative_on_catalog() {
        for r in 1..=6 {
            let d = Distribution::<f64>::table1_row(r).unwrap();
            for k in EntropyKind::ALL {
                let v = entropy(&d, k, &tol()).unwrap();
                assert!(v.value >= 0.0);
                assert_eq!(v.method, Method::Quadrature);
            }
        }
    }

    #[test]
    fn scale_covariance() {
        for a in [0.5, 2.0] {
            let e1 = Distribution::exponential(1.0).unwrap();
            let ea = Distribution::exponential(1.0 / a).unwrap();
            let u1 = Distribution::uniform(1.0).unwrap();
            let ua = Distribution::uniform(a).unwrap();
            for (base, scaled) in [(&e1, &ea), (&u1, &ua)] {
                let c1 = cre(base, &tol()).unwrap().value;
                let ca = cre(scaled, &tol()).unwrap().value;
                assert!((ca - a * c1).abs() < 1e-7);
                let w1 = wcre(base, &tol()).unwrap().value;
                let wa = wcre(scaled, &tol()).unwrap().value;
                assert!((wa - a * a * w1).abs() < 1e-7);
            }
        }
        // narrow uniform
        let eps = 1e-3;
        let w = wcre(&Distribution::uniform(eps).unwrap(), &tol()).unwrap().value;
        assert!((w - eps * eps * 5.0 / 36.0).abs() < 1e-12);
        let w = wce(&Distribution::uniform(3.0).unwrap(), &tol()).unwrap().value;
        assert!((w - 1.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_law_has_equal_cre_and_ce() {
        for a in [1.0, 3.0] {
            let u = Distribution::uniform(a).unwrap();
            let c = cre(&u, &tol()).unwrap().value;
            let p = ce(&u, &tol()).unwrap().value;
            assert!((c - p).abs() < 1e-8);
        }
    }

    #[test]
    fn boundary_warning_for_slow_tails_only() {
        let l = Distribution::<f64>::lomax3();
        let w = wcre(&l, &tol()).unwrap();
        assert_eq!(w.warnings.len(), 1, "{:?}", w.warnings);
        let e = Distribution::exponential(1.0).unwrap();
        for k in EntropyKind::ALL {
            assert!(entropy(&e, k, &tol()).unwrap().warnings.is_empty());
        }
    }

    #[test]
    fn plugin_two_point_sample() {
        let d = Distribution::empirical(vec![0.0f64, 1.0]).unwrap();
        let v = empirical_plugin(&d, EntropyKind::Cre).unwrap();
        assert!((v.value - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(v.method, Method::Plugin);
        // CE is the same by symmetry of the two-point law
        let c = empirical_plugin(&d, EntropyKind::Ce).unwrap();
        assert!((c.value - v.value).abs() < 1e-15);
        // weighted: ∫₀¹ x dx · ½ log 2
        let w = empirical_plugin(&d, EntropyKind::Wcre).unwrap();
        assert!((w.value - 0.25 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn plugin_degenerate_sample_warns() {
        let d = Distribution::empirical(vec![2.0f64; 3]).unwrap();
        let v = empirical_plugin(&d, EntropyKind::Cre).unwrap();
        assert_eq!(v.value, 0.0);
        assert_eq!(v.warnings.len(), 1);
        // the quadrature entry point dispatches empirical laws to the plug-in
        assert_eq!(cre(&d, &tol()).unwrap().method, Method::Plugin);
    }

    #[test]
    fn plugin_rejects_analytic_laws() {
        let d = Distribution::exponential(1.0f64).unwrap();
        assert!(empirical_plugin(&d, EntropyKind::Cre).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("WCRE".parse::<EntropyKind>().unwrap(), EntropyKind::Wcre);
        assert!("h".parse::<EntropyKind>().is_err());
    }
}
