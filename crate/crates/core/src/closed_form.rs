//! Closed-form values.
//!
//! Everything reduces to the master formula
//!
//! ```text
//!   S(a, b, c) = π sin(ab) / (sin a · sin πb) + a cos c / sin a
//! ```
//!
//! which equals `∫₀^∞ (cosh bt + cos c)/(cosh t + cos a) dt` on the strip
//! `|Re a| < π`, `|Re b| < 1`. The removable singularities at `a = 0` and
//! `b = 0` are taken care of by writing both fractions through `sinc`, so the
//! formula is evaluated without cancellation right up to the limit points.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{classify_domain, complex_literal, normalize, IntegrandSpec, UpperLimit};

/// Radius inside which a parameter is reported as sitting on its limit point.
pub const EPS_LIM: f64 = 1e-8;
/// Threshold on `|sin πb|` below which `b` is treated as a pole.
pub const EPS_POLE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitApplied {
    None,
    AZero,
    BZero,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedValue {
    #[serde(serialize_with = "complex_literal::serialize")]
    pub value: Complex64,
    pub limit_applied: LimitApplied,
}

/// `sin z / z`, with the even Taylor polynomial close to the origin.
pub fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < EPS_LIM {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

fn check_strip(a: Complex64, b: Complex64) -> Result<()> {
    if !(a.re.abs() < PI) {
        return Err(Error::Domain(format!("|Re a| = {} is not below π", a.re.abs())));
    }
    if !(b.re.abs() < 1.0) {
        return Err(Error::Domain(format!("|Re b| = {} is not below 1", b.re.abs())));
    }
    Ok(())
}

fn eval_parts(a: Complex64, b: Complex64, cos_c: f64) -> Result<ClosedValue> {
    let a_zero = a.norm() < EPS_LIM;
    let b_zero = b.norm() < EPS_LIM;
    let pi_b = b * PI;
    if !b_zero && pi_b.sin().norm() < EPS_POLE {
        return Err(Error::NearPole(pi_b.sin().norm()));
    }
    let sinc_a = sinc(a);
    if sinc_a.norm() == 0.0 {
        return Err(Error::Domain(format!("sin a vanishes at a = {a}")));
    }
    let ratio = sinc(a * b) / (sinc_a * sinc(pi_b));
    let value = ratio + cos_c / sinc_a;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Domain(format!("closed form overflows at a = {a}, b = {b}")));
    }
    let limit_applied = match (a_zero, b_zero) {
        (false, false) => LimitApplied::None,
        (true, false) => LimitApplied::AZero,
        (false, true) => LimitApplied::BZero,
        (true, true) => LimitApplied::Both,
    };
    Ok(ClosedValue { value, limit_applied })
}

/// Master formula `S(a, b, c)` on the validity strip.
pub fn eval_s(a: Complex64, b: Complex64, c: f64) -> Result<ClosedValue> {
    check_strip(a, b)?;
    eval_parts(a, b, c.cos())
}

/// The master formula evaluated without the strip check.
///
/// Outside the strip the result is the formal value of the expression, which
/// in general is not the value of the integral. Only the periodicity demonstrator and
/// reports on uncanonicalized inputs use it.
pub fn eval_s_unchecked(a: Complex64, b: Complex64, c: f64) -> Result<ClosedValue> {
    eval_parts(a, b, c.cos())
}

/// `P(a, b) = π sin(ab)/(sin a sin πb)`, i.e. `S` with `cos c = 0`.
pub fn eval_p(a: Complex64, b: Complex64) -> Result<ClosedValue> {
    check_strip(a, b)?;
    eval_parts(a, b, 0.0)
}

fn check_real_b(b: f64) -> Result<()> {
    if b.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("|b| = {} is not below 1", b.abs())))
    }
}

/// `(π/2) sec(πb/2)`: the right-angle case θ = ζ = π/2, per unit n.
pub fn eval_sec_case(b: f64) -> Result<f64> {
    check_real_b(b)?;
    Ok(eval_p(Complex64::new(FRAC_PI_2, 0.0), Complex64::new(b, 0.0))?.value.re)
}

/// `(π/2) tan(πb/2) = ∫₀^∞ sinh bt / sinh t dt`.
pub fn eval_tan_case(b: f64) -> Result<f64> {
    check_real_b(b)?;
    Ok(FRAC_PI_2 * (FRAC_PI_2 * b).tan())
}

/// `∫₀^∞ cos qt / (cosh t + cos a) dt = π sinh(aq) / (sin a sinh πq)`.
///
/// `a = 0` is accepted and returns the limit `πq / sinh πq`.
pub fn eval_sech_transform(a: f64, q: f64) -> Result<f64> {
    if !(a.abs() < PI) {
        return Err(Error::Domain(format!("|a| = {} is not below π", a.abs())));
    }
    if !q.is_finite() {
        return Err(Error::Domain("q must be finite".into()));
    }
    Ok(eval_p(Complex64::new(a, 0.0), Complex64::new(0.0, q))?.value.re)
}

/// `∫₀^∞ cos 2qt / cosh² t dt = πq / sinh πq`.
pub fn eval_sech2_transform(q: f64) -> f64 {
    let x = PI * q.abs();
    if x > 700.0 {
        // sinh overflows; the value is below 1e-300 anyway
        return 2.0 * x * (-x).exp();
    }
    eval_p(Complex64::new(0.0, 0.0), Complex64::new(0.0, q))
        .map(|v| v.value.re)
        .unwrap_or(0.0)
}

/// `∫₀^∞ cosh bt / cosh² (t/2) dt / 2 = πb / sin πb`, the θ = π value.
pub fn eval_theta_pi_limit(b: Complex64) -> Result<ClosedValue> {
    eval_p(Complex64::new(0.0, 0.0), b)
}

fn log_f(f: Complex64) -> Result<Complex64> {
    if f.norm() == 0.0 || !(f.re.is_finite() && f.im.is_finite()) {
        return Err(Error::Domain(format!("f = {f} must be finite and nonzero")));
    }
    if !(f.arg().abs() < PI) || (f.im == 0.0 && f.re < 0.0) {
        return Err(Error::Domain(format!("|arg f| must be below π, got f = {f}")));
    }
    Ok(f.ln())
}

/// `π (f^b − f^(−b)) / ((f − 1/f) sin πb)`, the master `P` at `a = i log f`.
///
/// Equals `∫₀^∞ cosh bt / (cosh t + (f + 1/f)/2) dt`.
pub fn eval_f_form(f: Complex64, b: Complex64) -> Result<ClosedValue> {
    let a = Complex64::i() * log_f(f)?;
    eval_p(a, b)
}

/// `2π sin(q log f) / ((f − 1/f)(e^(πq) − e^(−πq)))`.
///
/// Equals `∫₀^∞ cos(q log x) / (x + f + 1/f) dx/x` over (0, 1], i.e.
/// `∫₀^∞ cos qt / (2 cosh t + f + 1/f) dt`.
pub fn eval_f_cos_form(f: f64, q: f64) -> Result<f64> {
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::Domain(format!("f must be positive, got {f}")));
    }
    let a = Complex64::new(0.0, f.ln());
    Ok(eval_p(a, Complex64::new(0.0, q))?.value.re / 2.0)
}

/// Closed value of the x-domain integral for a spec with upper limit 1 or ∞.
///
/// θ is used as given: specs that are not Valid or BoundaryA are rejected.
pub fn eval_spec(spec: &IntegrandSpec) -> Result<ClosedValue> {
    let status = classify_domain(spec);
    if !status.is_evaluable() {
        return Err(match status.kind {
            crate::params::DomainKind::SingularTheta => Error::SingularTheta,
            crate::params::DomainKind::Excluded => {
                Error::Excluded(status.detail.trim_start_matches("Excluded: ").to_string())
            }
            _ => Error::Domain(status.detail),
        });
    }
    let factor = match spec.upper {
        UpperLimit::One => 1.0,
        UpperLimit::Infinity => 2.0,
        UpperLimit::Finite(x) => {
            return Err(Error::Domain(format!(
                "no closed form for the finite upper limit {x}"
            )))
        }
    };
    let nf = normalize(spec);
    let v = eval_s(nf.a, nf.b, nf.c)?;
    Ok(ClosedValue { value: v.value * (factor * nf.scale), ..v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{E, SQRT_2};

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * (1.0 + y.abs())
    }

    #[test]
    fn master_formula_examples() {
        let v = eval_s(r(FRAC_PI_2), r(0.0), FRAC_PI_2).unwrap();
        assert!(close(v.value.re, FRAC_PI_2, 1e-15));
        assert_eq!(v.limit_applied, LimitApplied::BZero);

        let v = eval_s(r(0.0), r(0.5), FRAC_PI_2).unwrap();
        assert!(close(v.value.re, FRAC_PI_2, 1e-15));
        assert_eq!(v.limit_applied, LimitApplied::AZero);

        // t-domain quadrature at 30 digits
        let v = eval_s(r(1.0), r(0.3), 2.0).unwrap();
        assert!(close(v.value.re, 0.869_220_409_851_700_4, 1e-14));
    }

    #[test]
    fn p_examples() {
        assert!(close(eval_p(r(FRAC_PI_2), r(0.5)).unwrap().value.re, PI / SQRT_2, 1e-15));
        assert!(close(eval_p(r(1.0), r(0.0)).unwrap().value.re, 1.0 / 1f64.sin(), 1e-15));
        assert!(close(eval_p(r(1.0), r(0.3)).unwrap().value.re, 1.363_767_273_689_372_2, 1e-14));
    }

    #[test]
    fn strip_and_pole_errors() {
        assert!(matches!(eval_s(r(PI), r(0.1), 0.0), Err(Error::Domain(_))));
        assert!(matches!(eval_s(r(0.5), r(1.0), 0.0), Err(Error::Domain(_))));
        assert!(matches!(eval_s(r(0.5), r(1.0 - 1e-12), 0.0), Err(Error::NearPole(_))));
        assert!(eval_s_unchecked(r(0.5 - 2.0 * PI), r(0.5), 1.0).is_ok());
    }

    #[test]
    fn sec_and_tan_cases() {
        assert!(close(eval_sec_case(0.0).unwrap(), FRAC_PI_2, 1e-15));
        assert!(close(eval_sec_case(0.5).unwrap(), PI / SQRT_2, 1e-15));
        assert!(close(eval_sec_case(2.0 / 3.0).unwrap(), PI, 1e-15));
        assert!(eval_sec_case(1.0).is_err());

        assert_eq!(eval_tan_case(0.0).unwrap(), 0.0);
        assert!(close(eval_tan_case(0.5).unwrap(), FRAC_PI_2, 1e-15));
        assert!(close(eval_tan_case(1.0 / 3.0).unwrap(), 0.906_899_682_117_108_9, 1e-15));
        assert!(eval_tan_case(-1.0).is_err());
    }

    #[test]
    fn sech_transforms() {
        assert!(close(eval_sech_transform(FRAC_PI_2, 0.0).unwrap(), FRAC_PI_2, 1e-15));
        assert!(close(eval_sech_transform(FRAC_PI_2, 1.0).unwrap(), 0.626_020_165_626_073_8, 1e-14));
        assert!(close(eval_sech_transform(1.0, 2.0).unwrap(), 0.050_573_192_552_086_34, 1e-13));
        assert!(close(eval_sech_transform(0.0, 1.0).unwrap(), PI / PI.sinh(), 1e-15));
        assert!(eval_sech_transform(PI, 1.0).is_err());

        assert_eq!(eval_sech2_transform(0.0), 1.0);
        assert!(close(eval_sech2_transform(1.0), 0.272_029_054_982_133_16, 1e-14));
        assert_eq!(eval_sech2_transform(-1.0), eval_sech2_transform(1.0));
        assert!(eval_sech2_transform(1e3) >= 0.0);
    }

    #[test]
    fn theta_pi_limit() {
        assert_eq!(eval_theta_pi_limit(r(0.0)).unwrap().value.re, 1.0);
        assert!(close(eval_theta_pi_limit(r(0.5)).unwrap().value.re, FRAC_PI_2, 1e-15));
        assert!(close(eval_theta_pi_limit(r(0.9)).unwrap().value.re, 9.149_766_646_167_47, 1e-14));
        assert!(matches!(eval_theta_pi_limit(r(1.0 - 1e-13)), Err(Error::NearPole(_))));
    }

    #[test]
    fn f_forms() {
        let near_one = eval_f_form(r(1.0), r(0.4)).unwrap().value.re;
        assert!(close(near_one, 0.4 * PI / (0.4 * PI).sin(), 1e-15));
        assert!(close(eval_f_form(r(2.0), r(0.5)).unwrap().value.re, 1.480_960_979_386_122, 1e-14));
        assert!(close(eval_f_form(r(E), r(0.5)).unwrap().value.re, 1.393_011_845_472_541_7, 1e-14));
        assert!(eval_f_form(r(-1.0), r(0.5)).is_err());
        assert!(eval_f_form(r(0.0), r(0.5)).is_err());

        let f = 3.0f64;
        assert!(close(eval_f_cos_form(f, 0.0).unwrap(), f.ln() / (f - 1.0 / f), 1e-15));
        assert!(eval_f_cos_form(PI.exp(), 1.0).unwrap().abs() < 1e-15);
        assert!(close(eval_f_cos_form(2.0, 1.0).unwrap(), 0.115_877_354_777_183_83, 1e-14));
        assert!(close(eval_f_cos_form(1.0, 1.0).unwrap(), 0.5 * PI / PI.sinh(), 1e-15));
        assert!(eval_f_cos_form(0.0, 1.0).is_err());
    }

    #[test]
    fn spec_values() {
        let spec = IntegrandSpec::real(1.0, 0.5, FRAC_PI_2, FRAC_PI_2).unwrap();
        let one = eval_spec(&spec).unwrap().value.re;
        assert!(close(one, PI / SQRT_2, 1e-15));
        let inf = eval_spec(&spec.with_upper(UpperLimit::Infinity)).unwrap().value.re;
        assert_eq!(inf, 2.0 * one);
        let bad = IntegrandSpec::real(1.0, 1.5, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!(matches!(eval_spec(&bad), Err(Error::Excluded(_))));
        assert!(eval_spec(&spec.with_theta(FRAC_PI_2 + 2.0 * PI)).is_err());
    }

    #[test]
    fn limit_continuity_in_a() {
        let b = r(0.37);
        let target = eval_theta_pi_limit(b).unwrap().value.re;
        let mut prev = f64::INFINITY;
        for k in 3..=8 {
            let d = (eval_p(r(10f64.powi(-k)), b).unwrap().value.re - target).abs();
            assert!(d <= prev, "k = {k}: {d} > {prev}");
            prev = d;
        }
        assert!(prev < 1e-15);
    }

    proptest! {
        #[test]
        fn p_is_s_at_right_angle(a in -3.1f64..3.1, b in -0.99f64..0.99) {
            let p = eval_p(r(a), r(b)).unwrap().value;
            let s = eval_s(r(a), r(b), FRAC_PI_2).unwrap().value;
            prop_assert!((p - s).norm() < 1e-13 * (1.0 + p.norm()));
        }

        #[test]
        fn p_even_in_a_and_b(a in -3.1f64..3.1, b in -0.99f64..0.99) {
            let p = eval_p(r(a), r(b)).unwrap().value.re;
            let tol = 1e-13 * (1.0 + p.abs());
            prop_assert!((eval_p(r(-a), r(b)).unwrap().value.re - p).abs() < tol);
            prop_assert!((eval_p(r(a), r(-b)).unwrap().value.re - p).abs() < tol);
        }

        #[test]
        fn imaginary_b_is_sech_transform(a in 0.01f64..3.1, q in -3.0f64..3.0) {
            let p = eval_p(r(a), Complex64::new(0.0, q)).unwrap().value.re;
            let s = PI * (a * q).sinh() / (a.sin() * (PI * q).sinh());
            let s = if q == 0.0 { a / a.sin() } else { s };
            prop_assert!((p - s).abs() < 1e-12 * (1.0 + s.abs()));
        }

        #[test]
        fn real_inputs_give_real_values(a in -3.1f64..3.1, b in -0.99f64..0.99, c in -4.0f64..4.0) {
            let v = eval_s(r(a), r(b), c).unwrap().value;
            prop_assert!(v.im.abs() < 1e-13 * (1.0 + v.re.abs()));
        }

        #[test]
        fn sec_case_matches_p(b in -0.99f64..0.99) {
            let sec = FRAC_PI_2 / (FRAC_PI_2 * b).cos();
            prop_assert!((eval_sec_case(b).unwrap() - sec).abs() < 1e-13 * sec);
        }
    }
}
