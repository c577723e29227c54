//! Cross-checks between evaluation paths, and the two demonstrations of
//! where the closed form stops describing the integral.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{eval_p, eval_s, eval_s_unchecked, eval_spec};
use crate::error::{Error, Result};
use crate::params::{
    canonicalize_theta, classify_domain, complex_literal, normalize, DomainKind, DomainStatus,
    IntegrandSpec, NormalizedForm, UpperLimit,
};
use crate::partial_fractions::{integral_at, integral_closed};
use crate::quadrature::{quad_t_domain_with, quad_x_domain_with, Rule};
use crate::series::{series_contracted, series_imaginary, TOL_FLOOR};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Agree,
    Disagree,
    Skipped(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Agree => f.write_str("Agree"),
            Verdict::Disagree => f.write_str("Disagree"),
            Verdict::Skipped(r) => write!(f, "Skipped({r})"),
        }
    }
}

/// One verification point. Values are real parts; `max_abs_err` is taken
/// over the complex values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub spec: IntegrandSpec,
    pub normalized: NormalizedForm,
    pub domain: DomainStatus,
    pub closed: Option<f64>,
    pub pf: Option<f64>,
    pub quad: Option<f64>,
    pub series: Option<f64>,
    pub max_abs_err: f64,
    pub verdict: Verdict,
}

fn upper_factor(upper: UpperLimit) -> Option<f64> {
    match upper {
        UpperLimit::One => Some(1.0),
        UpperLimit::Infinity => Some(2.0),
        UpperLimit::Finite(_) => None,
    }
}

/// An independent way of evaluating a spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    Pf,
    Quad,
    Series,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Closed, Method::Pf, Method::Quad, Method::Series];

    pub fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Pf => "pf",
            Method::Quad => "quad",
            Method::Series => "series",
        }
    }
}

/// Largest substitution power tried to make rational exponents integer.
pub const MAX_PF_SCALE: u32 = 64;
/// Largest degree handed to the decomposition after rescaling.
pub const MAX_PF_DEGREE: f64 = 256.0;

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() <= 1e-12 * x.abs().max(1.0)
}

/// Smallest λ with λn and λp integer, if the exponents are rational with a
/// small denominator.
fn integer_scale(spec: &IntegrandSpec) -> Option<u32> {
    if spec.p.im != 0.0 {
        return None;
    }
    (1..=MAX_PF_SCALE).find(|&l| {
        let lf = f64::from(l);
        lf * spec.n <= MAX_PF_DEGREE && is_integer(lf * spec.n) && is_integer(lf * spec.p.re)
    })
}

/// Partial fractions, after the substitution `x = y^λ` that turns rational
/// exponents into integers: `value(n, p; X) = λ · value(λn, λp; X^(1/λ))`.
fn pf_value(spec: &IntegrandSpec) -> Result<Complex64> {
    let lambda = integer_scale(spec).ok_or_else(|| Error::NotIntegerExponents {
        n: spec.n,
        p: crate::params::format_complex(spec.p),
    })?;
    let lf = f64::from(lambda);
    let upper = match spec.upper {
        UpperLimit::Finite(x) => UpperLimit::from_value(x.powf(1.0 / lf))?,
        other => other,
    };
    let scaled = IntegrandSpec::new(
        (lf * spec.n).round(),
        Complex64::new((lf * spec.p.re).round(), 0.0),
        spec.theta,
        spec.zeta,
        upper,
    )?;
    let v = match scaled.upper {
        UpperLimit::One => integral_at(&scaled, 1.0),
        UpperLimit::Finite(x) if x <= 1.0 => integral_at(&scaled, x),
        UpperLimit::Infinity => integral_closed(&scaled),
        UpperLimit::Finite(x) => {
            return Err(Error::Domain(format!("partial fractions need X ≤ 1 or ∞, got X = {}", x.powf(lf))))
        }
    }?;
    Ok(Complex64::new(lf * v, 0.0))
}

/// `C(p) − cos ζ · C(0)` with `C` the contracted series, over (0, 1].
fn series_value(spec: &IntegrandSpec, tol: f64) -> Result<Complex64> {
    let factor = upper_factor(spec.upper)
        .ok_or_else(|| Error::Domain("series need upper limit 1 or ∞".into()))?;
    let stol = TOL_FLOOR.max(tol / 10.0);
    let c_p = if spec.p.im == 0.0 {
        series_contracted(spec.n, spec.p.re, spec.theta, stol)?
    } else if spec.p.re == 0.0 {
        series_imaginary(spec.n, spec.p.im, spec.theta, stol)?
    } else {
        return Err(Error::Domain("series need p real or purely imaginary".into()));
    };
    let c_0 = (PI - spec.theta) / (spec.n * spec.theta.sin());
    Ok(Complex64::new(factor * (c_p.value - spec.zeta.cos() * c_0), 0.0))
}

/// Evaluate a spec in the valid domain by one method.
pub fn eval_method(spec: &IntegrandSpec, method: Method, tol: f64) -> Result<Complex64> {
    let domain = classify_domain(spec);
    match domain.kind {
        DomainKind::SingularTheta => return Err(Error::SingularTheta),
        DomainKind::Excluded => {
            let d = domain.detail.trim_start_matches("Excluded: ");
            return Err(Error::Excluded(d.to_string()));
        }
        DomainKind::ParadoxOnly => return Err(Error::Domain(domain.detail)),
        DomainKind::Valid | DomainKind::BoundaryA => {}
    }
    match method {
        Method::Closed => eval_spec(spec).map(|v| v.value),
        Method::Pf if domain.kind == DomainKind::BoundaryA => {
            Err(Error::Domain("partial fractions do not cover θ = π".into()))
        }
        Method::Pf => pf_value(spec),
        Method::Quad => quad_x_domain_with(spec, spec.upper, Rule::DoubleExponential).map(|r| r.value),
        Method::Series => series_value(spec, tol),
    }
}

/// Formal closed value with θ taken literally, for specs outside (0, 2π).
fn formal_value(spec: &IntegrandSpec) -> Option<Complex64> {
    let factor = upper_factor(spec.upper)?;
    let nf = normalize(spec);
    eval_s_unchecked(nf.a, nf.b, nf.c).ok().map(|v| v.value * (factor * nf.scale))
}

fn max_pairwise(values: &[Complex64]) -> f64 {
    let mut m = 0.0f64;
    for (i, x) in values.iter().enumerate() {
        for y in &values[i + 1..] {
            m = m.max((x - y).norm());
        }
    }
    m
}

/// Evaluate a spec by every applicable path and compare.
pub fn verify_point(spec: &IntegrandSpec, tol: f64) -> EvalReport {
    let domain = classify_domain(spec);
    let normalized = normalize(spec);
    let skipped = |reason: String| EvalReport {
        spec: *spec,
        normalized,
        domain: domain.clone(),
        closed: None,
        pf: None,
        quad: None,
        series: None,
        max_abs_err: 0.0,
        verdict: Verdict::Skipped(reason),
    };
    let (closed, pf, series) = match domain.kind {
        DomainKind::SingularTheta | DomainKind::Excluded => return skipped(domain.detail.clone()),
        DomainKind::ParadoxOnly => (formal_value(spec), None, None),
        DomainKind::Valid | DomainKind::BoundaryA => (
            eval_method(spec, Method::Closed, tol).ok(),
            eval_method(spec, Method::Pf, tol).ok(),
            eval_method(spec, Method::Series, tol).ok(),
        ),
    };
    let quad = quad_x_domain_with(spec, spec.upper, Rule::DoubleExponential)
        .ok()
        .map(|r| r.value);
    let populated: Vec<Complex64> = [closed, pf, quad, series].into_iter().flatten().collect();
    let max_abs_err = max_pairwise(&populated);
    let verdict = if populated.len() < 2 {
        Verdict::Skipped("fewer than two evaluation paths apply".into())
    } else if max_abs_err <= tol {
        Verdict::Agree
    } else {
        Verdict::Disagree
    };
    EvalReport {
        spec: *spec,
        normalized,
        domain,
        closed: closed.map(|z| z.re),
        pf: pf.map(|z| z.re),
        quad: quad.map(|z| z.re),
        series: series.map(|z| z.re),
        max_abs_err,
        verdict,
    }
}

/// [`verify_point`] over a grid; reports come back in input order.
pub fn verify_grid(specs: &[IntegrandSpec], tol: f64) -> Vec<EvalReport> {
    specs.par_iter().map(|s| verify_point(s, tol)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParadoxKind {
    Periodicity,
    ImaginaryN,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParadoxReport {
    pub kind: ParadoxKind,
    #[serde(serialize_with = "complex_literal::serialize")]
    pub formula_value: Complex64,
    pub oracle_value: Option<f64>,
    pub mismatch: Option<f64>,
    /// Periodicity: mismatch left after reducing θ into (0, 2π).
    pub restored_mismatch: Option<f64>,
    /// ImaginaryN: first zero of the denominator on the integration path, in
    /// the variable `t = −m log x`.
    pub pole_location: Option<f64>,
    pub manifests: bool,
    pub explanation: String,
}

/// Mismatch above which the periodicity paradox counts as manifest.
pub const PARADOX_THRESHOLD: f64 = 0.05;

/// Evaluate the closed form at `θ + 2πk` without reducing the angle and
/// compare with the integral, which depends on θ only through cos θ.
pub fn paradox_periodicity(spec: &IntegrandSpec, k: i64) -> Result<ParadoxReport> {
    let factor = upper_factor(spec.upper)
        .ok_or_else(|| Error::Domain("periodicity check needs upper limit 1 or ∞".into()))?;
    let (theta_c, _) = canonicalize_theta(spec.theta)?;
    let canonical = spec.with_theta(theta_c);
    let nf = normalize(&canonical);
    let shifted_a = nf.a - Complex64::new(TAU * k as f64, 0.0);
    let formula = eval_s_unchecked(shifted_a, nf.b, nf.c)?.value * (factor * nf.scale);
    let restored = eval_s(nf.a, nf.b, nf.c)?.value * (factor * nf.scale);
    let oracle = quad_x_domain_with(&canonical, spec.upper, Rule::DoubleExponential)?.value;
    let mismatch = (formula - oracle).norm();
    let restored_mismatch = (restored - oracle).norm();
    let manifests = if k == 0 {
        mismatch < 1e-9
    } else {
        mismatch > PARADOX_THRESHOLD
    };
    let explanation = format!(
        "closed form at θ = {} (shift k = {k}) gives {}, the integral is {}; \
         the formula is single-valued only for θ in (0, 2π), where it gives {}",
        theta_c + TAU * k as f64,
        formula.re,
        oracle.re,
        restored.re
    );
    Ok(ParadoxReport {
        kind: ParadoxKind::Periodicity,
        formula_value: formula,
        oracle_value: Some(oracle.re),
        mismatch: Some(mismatch),
        restored_mismatch: Some(restored_mismatch),
        pole_location: None,
        manifests,
        explanation,
    })
}

/// The formal value of the integral with n = mi (upper limit 1, ζ = π/2).
///
/// The formula returns the purely imaginary `−(i/m) P(π − θ, ip/m)`, while
/// `x^(2n) − 2xⁿ cos θ + 1 = 0` has real roots `x = e^{−t/m}` wherever
/// `cos t = cos θ`, so the integral itself does not exist.
pub fn paradox_imaginary_n(m: f64, p: f64, theta: f64) -> Result<ParadoxReport> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidParameter(format!("m must be positive, got {m}")));
    }
    if !p.is_finite() {
        return Err(Error::InvalidParameter("p must be finite".into()));
    }
    let (theta_c, _) = canonicalize_theta(theta)?;
    let a = Complex64::new(PI - theta_c, 0.0);
    let p_val = eval_p(a, Complex64::new(0.0, p / m))?.value;
    let formula = Complex64::new(0.0, -1.0 / m) * p_val;
    let pole = if theta_c <= PI { theta_c } else { TAU - theta_c };
    let manifests = formula.im.abs() > 0.01 && formula.re.abs() < 1e-12 * (1.0 + formula.im.abs());
    let explanation = format!(
        "with n = {m}i the formula gives the imaginary value {}i, but the denominator \
         vanishes at t = {pole} (x = {}) on the path, so the integral diverges",
        formula.im,
        (-pole / m).exp()
    );
    Ok(ParadoxReport {
        kind: ParadoxKind::ImaginaryN,
        formula_value: formula,
        oracle_value: None,
        mismatch: None,
        restored_mismatch: None,
        pole_location: Some(pole),
        manifests,
        explanation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuationPoint {
    #[serde(serialize_with = "complex_literal::serialize")]
    pub a: Complex64,
    #[serde(serialize_with = "complex_literal::serialize")]
    pub b: Complex64,
    #[serde(serialize_with = "complex_literal::serialize")]
    pub closed: Complex64,
    #[serde(serialize_with = "complex_literal::serialize")]
    pub quad: Complex64,
    pub abs_err: f64,
}

/// `P(a, b)` against the t-domain integral for complex a on the grid
/// `Re a ∈ re_values`, `Im a ∈ im_values`.
pub fn continuation_check(re_values: &[f64], im_values: &[f64], b: Complex64) -> Result<Vec<ContinuationPoint>> {
    let grid: Vec<Complex64> = re_values
        .iter()
        .flat_map(|&r| im_values.iter().map(move |&i| Complex64::new(r, i)))
        .collect();
    grid.par_iter()
        .map(|&a| {
            let closed = eval_s(a, b, FRAC_PI_2)?.value;
            let quad = quad_t_domain_with(a, b, FRAC_PI_2, Rule::DoubleExponential)?.value;
            Ok(ContinuationPoint { a, b, closed, quad, abs_err: (closed - quad).norm() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn spec(n: f64, p: f64, theta: f64, zeta: f64) -> IntegrandSpec {
        IntegrandSpec::real(n, p, theta, zeta).unwrap()
    }

    #[test]
    fn all_paths_agree() {
        let r = verify_point(&spec(2.0, 1.0, FRAC_PI_2, FRAC_PI_2), 1e-9);
        assert_eq!(r.verdict, Verdict::Agree);
        assert!(r.closed.is_some() && r.pf.is_some() && r.quad.is_some() && r.series.is_some());
        assert!((r.closed.unwrap() - PI / (2.0 * SQRT_2)).abs() < 1e-14);
    }

    #[test]
    fn excluded_is_skipped() {
        let r = verify_point(&spec(1.0, 1.5, FRAC_PI_2, FRAC_PI_2), 1e-9);
        assert_eq!(r.verdict, Verdict::Skipped("Excluded: Re(p−n) ≥ 0".into()));
        assert!(r.quad.is_none());
    }

    #[test]
    fn trivial_point() {
        let r = verify_point(&spec(1.0, 0.0, FRAC_PI_2, FRAC_PI_2), 1e-9);
        assert_eq!(r.verdict, Verdict::Agree);
        assert!((r.closed.unwrap() - FRAC_PI_2).abs() < 1e-14);
        assert!((r.quad.unwrap() - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn uncanonical_theta_disagrees() {
        let r = verify_point(&spec(1.0, 0.5, FRAC_PI_2 + TAU, FRAC_PI_2), 1e-9);
        assert_eq!(r.domain.kind, DomainKind::ParadoxOnly);
        assert_eq!(r.verdict, Verdict::Disagree);
    }

    #[test]
    fn rational_exponents_use_pf() {
        let r = verify_point(&spec(1.0, 0.5, FRAC_PI_2, FRAC_PI_2), 1e-9);
        assert!((r.pf.unwrap() - PI / SQRT_2).abs() < 1e-12);
        let s = spec(1.5, -0.25, 2.0, 0.4).with_upper(UpperLimit::Finite(0.6));
        let r = verify_point(&s, 1e-9);
        assert!(r.pf.is_some() && r.verdict == Verdict::Agree, "{r:?}");
        assert!(verify_point(&spec(1.0, 0.1 * PI, 1.0, 1.0), 1e-9).pf.is_none());
    }

    #[test]
    fn imaginary_p_point() {
        let s = IntegrandSpec::new(2.0, Complex64::new(0.0, 1.0), 1.1, 0.7, UpperLimit::One).unwrap();
        let r = verify_point(&s, 1e-9);
        assert_eq!(r.verdict, Verdict::Agree);
        assert!(r.series.is_some() && r.pf.is_none());
    }

    #[test]
    fn periodicity() {
        let s = spec(1.0, 0.5, FRAC_PI_2, FRAC_PI_2);
        let r = paradox_periodicity(&s, 1).unwrap();
        assert!(r.manifests && r.mismatch.unwrap() > PARADOX_THRESHOLD);
        assert!(r.restored_mismatch.unwrap() < 1e-9);
        let r = paradox_periodicity(&s, 0).unwrap();
        assert!(r.manifests && r.mismatch.unwrap() < 1e-9);
        let r = paradox_periodicity(&spec(2.0, 1.0, 1.0, FRAC_PI_2), -1).unwrap();
        assert!(r.manifests && r.restored_mismatch.unwrap() < 1e-9);
    }

    #[test]
    fn imaginary_n() {
        let r = paradox_imaginary_n(1.0, 0.5, FRAC_PI_2).unwrap();
        assert!(r.manifests);
        assert_eq!(r.formula_value.re, 0.0);
        assert!((r.pole_location.unwrap() - FRAC_PI_2).abs() < 1e-15);
        let r = paradox_imaginary_n(2.0, 1.0, 1.0).unwrap();
        assert!(r.manifests && r.pole_location.unwrap() == 1.0);
        let r = paradox_imaginary_n(1.0, 0.5, 5.0).unwrap();
        assert!((r.pole_location.unwrap() - (TAU - 5.0)).abs() < 1e-15);
        // the same numbers with a real exponent n = m are an ordinary valid point
        let control = verify_point(&spec(1.0, 0.5, FRAC_PI_2, FRAC_PI_2), 1e-9);
        assert_eq!(control.verdict, Verdict::Agree);
    }

    #[test]
    fn continuation() {
        let pts = continuation_check(&[-2.4, 0.0, 2.4], &[-1.0, 0.5], Complex64::new(0.35, 0.1)).unwrap();
        assert_eq!(pts.len(), 6);
        for p in pts {
            assert!(p.abs_err < 1e-9, "{p:?}");
        }
    }

    #[test]
    fn grid_order_is_input_order() {
        let specs: Vec<_> = (1..6).map(|i| spec(1.0, 0.1 * i as f64, 1.0, 2.0)).collect();
        let reports = verify_grid(&specs, 1e-9);
        for (s, r) in specs.iter().zip(&reports) {
            assert_eq!(&r.spec, s);
        }
    }
}
