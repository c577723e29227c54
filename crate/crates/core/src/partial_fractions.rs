//! Partial fractions over the quadratic factors of `x^(2n) − 2xⁿ cos θ + 1`.
//!
//! For integer n and p the fraction
//!
//! ```text
//!   G(x) = x^(n−1) (x^p + x^(−p) − 2 cos ζ) / (x^(2n) − 2xⁿ cos θ + 1)
//! ```
//!
//! splits as `Σ_k P_k / (x² − 2x cos ω_k + 1)` with `ω_k = (θ + 2kπ)/n` and
//! `P_k = 2 sin ω_k (cos pω_k − cos ζ)/(n sin θ)`. Each piece integrates to an
//! arctangent, and the n arctangents at x = 1 assemble into `(Q − R cos ζ)/(n sin θ)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::sinc;
use crate::error::{Error, Result};
use crate::params::{
    canonicalize_theta, classify_domain, DomainKind, IntegrandSpec, UpperLimit, BOUNDARY_A_EPS,
};
use crate::quadrature::{integrate_half_line, Profile, Rule};
use crate::trig_sums::assembly_parts;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialTerm {
    pub k: usize,
    pub omega: f64,
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub spec: IntegrandSpec,
    pub terms: Vec<PartialTerm>,
}

/// `ω_k = (θ + 2kπ)/n` for k = 0..n−1, ascending.
pub fn roots_omega(n: u32, theta: f64) -> Vec<f64> {
    let nf = f64::from(n);
    (0..n).map(|k| (theta + 2.0 * f64::from(k) * PI) / nf).collect()
}

fn integer_exponents(spec: &IntegrandSpec) -> Result<(u32, f64)> {
    let bad = || Error::NotIntegerExponents { n: spec.n, p: crate::params::format_complex(spec.p) };
    if !spec.has_integer_exponents() || spec.n < 1.0 || spec.n > f64::from(u32::MAX) {
        return Err(bad());
    }
    Ok((spec.n as u32, spec.p.re))
}

/// `P = 2 sin ω (cos pω − cos ζ)/(n sin θ)`.
pub fn coefficient_p(omega: f64, spec: &IntegrandSpec) -> Result<f64> {
    let (n, p) = integer_exponents(spec)?;
    let (theta, _) = canonicalize_theta(spec.theta)?;
    if (theta - PI).abs() <= BOUNDARY_A_EPS {
        return Err(Error::Domain("θ = π: the quadratic factors coincide in pairs".into()));
    }
    let num = 2.0 * omega.sin() * ((p * omega).cos() - spec.zeta.cos());
    Ok(num / (f64::from(n) * theta.sin()))
}

/// All n simple fractions of a spec with integer exponents, `|p| < n` and
/// canonical θ ≠ π.
pub fn decompose(spec: &IntegrandSpec) -> Result<Decomposition> {
    let (n, p) = integer_exponents(spec)?;
    let status = classify_domain(spec);
    match status.kind {
        DomainKind::Valid => {}
        DomainKind::Excluded => return Err(Error::Excluded(format!("p = {p} is not below n = {n}"))),
        DomainKind::SingularTheta => return Err(Error::SingularTheta),
        DomainKind::BoundaryA => {
            return Err(Error::Domain("θ = π: the quadratic factors coincide in pairs".into()))
        }
        DomainKind::ParadoxOnly => {
            return Err(Error::Domain(format!("θ = {} must lie in (0, 2π)", spec.theta)))
        }
    }
    let terms = roots_omega(n, spec.theta)
        .into_iter()
        .enumerate()
        .map(|(k, omega)| Ok(PartialTerm { k, omega, coeff: coefficient_p(omega, spec)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition { spec: *spec, terms })
}

/// `x^(n−1)(x^p + x^(−p) − 2 cos ζ)/(x^(2n) − 2xⁿ cos θ + 1)`.
pub fn original_fraction(spec: &IntegrandSpec, x: f64) -> f64 {
    let (n, p) = (spec.n, spec.p.re);
    let xn = x.powf(n);
    x.powf(n - 1.0) * (x.powf(p) + x.powf(-p) - 2.0 * spec.zeta.cos())
        / (xn * xn - 2.0 * xn * spec.theta.cos() + 1.0)
}

fn simple_fractions(d: &Decomposition, x: f64) -> impl Iterator<Item = f64> + '_ {
    d.terms
        .iter()
        .map(move |t| t.coeff / (x * x - 2.0 * x * t.omega.cos() + 1.0))
}

/// Sum of the simple fractions at x.
pub fn reconstruct(d: &Decomposition, x: f64) -> f64 {
    simple_fractions(d, x).sum()
}

/// `|reconstruct − G| / Σ|term|`: the residual relative to the size of the
/// terms being summed, which is what roundoff in the sum is proportional to.
pub fn reconstruction_residual(d: &Decomposition, x: f64) -> f64 {
    let mass: f64 = simple_fractions(d, x).map(f64::abs).sum();
    let diff = (reconstruct(d, x) - original_fraction(&d.spec, x)).abs();
    if mass == 0.0 {
        diff
    } else {
        diff / mass
    }
}

/// Residue form of the coefficient at the root `e^{iω}`:
/// `(x^p + x^(−p) − 2 cos ζ)(x − 1/x) / (n (xⁿ − x^(−n)))`.
pub fn residue_coefficient(omega: f64, spec: &IntegrandSpec) -> Complex64 {
    let x = Complex64::from_polar(1.0, omega);
    let (n, p) = (spec.n, spec.p.re);
    let num = x.powf(p) + x.powf(-p) - 2.0 * spec.zeta.cos();
    num * (x - x.inv()) / (n * (x.powf(n) - x.powf(-n)))
}

/// `∫₀^x sin ω dy / (y² − 2y cos ω + 1)`, continuous in x and 0 at x = 0.
///
/// Equals `(π − ω)/2` at x = 1.
pub fn antiderivative_term(omega: f64, x: f64) -> Result<f64> {
    if !(omega > 0.0 && omega < TAU) {
        return Err(Error::Branch(format!("ω = {omega} lies outside (0, 2π)")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("x = {x} lies outside [0, 1]")));
    }
    Ok((x * omega.sin()).atan2(1.0 - x * omega.cos()))
}

/// `∫₀^X` of the integrand through the arctangent antiderivatives.
pub fn integral_at(spec: &IntegrandSpec, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("X = {x} lies outside (0, 1]")));
    }
    let d = decompose(spec)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let (p, cz) = (spec.p.re, spec.zeta.cos());
    let scale = 2.0 / (spec.n * spec.theta.sin());
    let mut total = 0.0;
    for t in &d.terms {
        total += ((p * t.omega).cos() - cz) * antiderivative_term(t.omega, x)?;
    }
    Ok(scale * total)
}

/// `(Q − R cos ζ)/(n sin θ)`, doubled for the upper limit ∞.
pub fn integral_closed(spec: &IntegrandSpec) -> Result<f64> {
    let factor = match spec.upper {
        UpperLimit::One => 1.0,
        UpperLimit::Infinity => 2.0,
        UpperLimit::Finite(x) => {
            return Err(Error::Domain(format!("upper limit must be 1 or ∞, got {x}")))
        }
    };
    let (n, p) = integer_exponents(spec)?;
    decompose(spec)?;
    let parts = assembly_parts(n, p, spec.theta)?;
    let value = (parts.q - parts.r * spec.zeta.cos()) / (spec.n * spec.theta.sin());
    Ok(factor * value)
}

/// `∫₀¹ x^(n−1) dx / (x^(2n) − 2xⁿ cos θ + 1) = (π − θ)/(2n sin θ)`.
pub fn p_zero_reduction(n: u32, theta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let (theta, _) = canonicalize_theta(theta)?;
    let a = Complex64::new(PI - theta, 0.0);
    Ok(1.0 / (2.0 * f64::from(n) * sinc(a).re))
}

/// Both sides of
///
/// ```text
///   ∫₀^X (x^(n+p) + x^(n−p))/(1 + xⁿ)² dx/x
///     = (X^(n−p) − X^p)/(n(1 + Xⁿ)) + (p/n) ∫₀^X (x^(n−p) + x^p)/(1 + xⁿ) dx/x
/// ```
///
/// each integral computed by quadrature.
pub fn vii_reduction_identity(n: u32, p: f64, x: f64) -> Result<(f64, f64)> {
    let nf = f64::from(n);
    if !(p > 0.0 && p < nf) {
        return Err(Error::InvalidParameter(format!("need 0 < p < n, got p = {p}, n = {n}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("X = {x} lies outside (0, 1]")));
    }
    if x == 0.0 {
        return Ok((0.0, 0.0));
    }
    let ln_x = x.ln();
    // y = X e^{−u}, dy/y = −du
    let pow = move |alpha: f64, u: f64| (alpha * (ln_x - u)).exp();
    let feature = 1f64.min(ln_x.hypot(PI / nf));
    let lhs_kernel = move |u: f64| {
        let d = 1.0 + pow(nf, u);
        (pow(nf + p, u) + pow(nf - p, u)) / (d * d)
    };
    let rhs_kernel = move |u: f64| (pow(nf - p, u) + pow(p, u)) / (1.0 + pow(nf, u));
    let lhs = integrate_half_line(lhs_kernel, 0.0, Profile::new(nf - p, feature, 0.0), Rule::DoubleExponential)?;
    let inner = integrate_half_line(
        rhs_kernel,
        0.0,
        Profile::new(p.min(nf - p), feature, 0.0),
        Rule::DoubleExponential,
    )?;
    let boundary = (x.powf(nf - p) - x.powf(p)) / (nf * (1.0 + x.powf(nf)));
    Ok((lhs.value, boundary + p / nf * inner.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    fn spec(n: f64, p: f64, theta: f64, zeta: f64) -> IntegrandSpec {
        IntegrandSpec::real(n, p, theta, zeta).unwrap()
    }

    #[test]
    fn roots() {
        let r = roots_omega(2, FRAC_PI_2);
        assert!((r[0] - FRAC_PI_4).abs() < 1e-15 && (r[1] - 5.0 * FRAC_PI_4).abs() < 1e-15);
        assert_eq!(roots_omega(1, 1.0), vec![1.0]);
        for w in roots_omega(4, 2.0) {
            assert!(((4.0 * w).cos() - 2f64.cos()).abs() < 1e-12);
            assert!(((4.0 * w).sin() - 2f64.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn coefficients() {
        let s = spec(2.0, 1.0, FRAC_PI_2, FRAC_PI_2);
        let c = coefficient_p(FRAC_PI_4, &s).unwrap();
        assert!((c - 0.5).abs() < 1e-15);
        // vanishing numerator when cos pω = cos ζ
        let s = spec(3.0, 2.0, 1.0, 0.8);
        assert!(coefficient_p(0.4, &s).unwrap().abs() < 1e-15);
        let s = spec(3.0, 2.0, 1.0, 0.7);
        for w in roots_omega(3, 1.0) {
            let c = coefficient_p(w, &s).unwrap();
            let res = residue_coefficient(w, &s);
            assert!((res.re - c).abs() < 1e-12 && res.im.abs() < 1e-12);
        }
        assert!(matches!(coefficient_p(1.0, &spec(2.0, 1.0, 0.0, 1.0)), Err(Error::SingularTheta)));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&spec(1.0, 0.0, 1.3, 0.6)).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!((d.terms[0].coeff - 2.0 * (1.0 - 0.6f64.cos())).abs() < 1e-15);

        let d = decompose(&spec(2.0, 1.0, FRAC_PI_2, FRAC_PI_2)).unwrap();
        assert_eq!(d.terms.len(), 2);
        assert!((d.terms[0].coeff - 0.5).abs() < 1e-15);

        let d = decompose(&spec(3.0, 1.0, 1.0, 1.0)).unwrap();
        assert!(reconstruction_residual(&d, 0.5) < 1e-12);
    }

    #[test]
    fn decompose_errors() {
        assert!(matches!(decompose(&spec(2.0, 3.0, 1.0, 1.0)), Err(Error::Excluded(_))));
        assert!(matches!(decompose(&spec(2.0, 2.0, 1.0, 1.0)), Err(Error::Excluded(_))));
        assert!(matches!(decompose(&spec(2.5, 1.0, 1.0, 1.0)), Err(Error::NotIntegerExponents { .. })));
        assert!(matches!(decompose(&spec(3.0, 0.5, 1.0, 1.0)), Err(Error::NotIntegerExponents { .. })));
        assert!(matches!(decompose(&spec(3.0, 1.0, PI, 1.0)), Err(Error::Domain(_))));
        assert!(matches!(decompose(&spec(3.0, 1.0, 1.0 + TAU, 1.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn reconstruction_matches() {
        for (s, x) in [
            (spec(2.0, 1.0, FRAC_PI_2, FRAC_PI_2), 0.5),
            (spec(5.0, 3.0, 2.2, 0.4), 0.9),
            (spec(1.0, 0.0, 0.3, 3.0), 0.2),
        ] {
            let d = decompose(&s).unwrap();
            assert!(reconstruction_residual(&d, x) < 1e-12);
            let rel = (reconstruct(&d, x) - original_fraction(&s, x)).abs() / original_fraction(&s, x).abs();
            assert!(rel < 1e-12);
        }
    }

    #[test]
    fn antiderivative() {
        assert_eq!(antiderivative_term(2.0, 0.0).unwrap(), 0.0);
        assert!((antiderivative_term(FRAC_PI_2, 1.0).unwrap() - FRAC_PI_4).abs() < 1e-15);
        for w in [0.1, 1.0, 3.0, 4.0, 6.2] {
            assert!((antiderivative_term(w, 1.0).unwrap() - (PI - w) / 2.0).abs() < 1e-14);
        }
        assert!(matches!(antiderivative_term(0.0, 0.5), Err(Error::Branch(_))));
        assert!(matches!(antiderivative_term(7.0, 0.5), Err(Error::Branch(_))));
        let w = 2.5f64;
        let q = crate::quadrature::integrate_interval(
            |y: f64| w.sin() / (y * y - 2.0 * y * w.cos() + 1.0),
            0.0,
            0.7,
            Rule::GaussDoubling,
        )
        .unwrap();
        assert!((antiderivative_term(w, 0.7).unwrap() - q.value).abs() < 1e-14);
    }

    #[test]
    fn closed_and_at_agree() {
        let s = spec(2.0, 1.0, FRAC_PI_2, FRAC_PI_2);
        let target = PI / (2.0 * SQRT_2);
        assert!((integral_closed(&s).unwrap() - target).abs() < 1e-14);
        assert!((integral_at(&s, 1.0).unwrap() - target).abs() < 1e-14);
        assert_eq!(integral_at(&s, 0.0).unwrap(), 0.0);
        let inf = integral_closed(&s.with_upper(UpperLimit::Infinity)).unwrap();
        assert_eq!(inf, 2.0 * integral_closed(&s).unwrap());

        let s = spec(1.0, 0.0, FRAC_PI_2, FRAC_PI_2);
        assert!((integral_closed(&s).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn p_zero() {
        assert!((p_zero_reduction(1, FRAC_PI_2).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!((p_zero_reduction(2, FRAC_PI_2).unwrap() - PI / 8.0).abs() < 1e-15);
        assert!((p_zero_reduction(1, PI).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(p_zero_reduction(1, 0.0), Err(Error::SingularTheta)));
    }

    #[test]
    fn reduction_identity() {
        assert_eq!(vii_reduction_identity(2, 1.0, 0.0).unwrap(), (0.0, 0.0));
        let (l, r) = vii_reduction_identity(2, 1.0, 1.0).unwrap();
        assert!((l - FRAC_PI_4).abs() < 1e-12 && (r - FRAC_PI_4).abs() < 1e-12);
        let (l, r) = vii_reduction_identity(3, 1.4, 0.8).unwrap();
        assert!((l - r).abs() < 1e-10);
        assert!(vii_reduction_identity(2, 2.0, 0.5).is_err());
    }
}
