//! Problem parameters: the x-domain integrand, its normalized hyperbolic form,
//! angle canonicalization and domain classification.
//!
//! The integral under study is
//!
//! ```text
//!   ∫₀^X (x^(n+p) − 2xⁿ cos ζ + x^(n−p)) / (x^(2n) − 2xⁿ cos θ + 1) dx/x
//! ```
//!
//! With `xⁿ = e^(−t)` the interval (0, 1] maps onto [0, ∞) and the integral
//! becomes `(1/n) ∫₀^∞ (cosh bt + cos c) / (cosh t + cos a) dt` with
//! `a = π − θ`, `b = p/n`, `c = π − ζ`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Low-order part of 2π (2π − TAU in f64) for two-term angle reduction.
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// Distance from a multiple of 2π below which θ is treated as singular.
pub const SINGULAR_THETA_EPS: f64 = 1e-12;

/// Radius around θ = π that is classified `BoundaryA` (a → 0 limit path).
pub const BOUNDARY_A_EPS: f64 = 1e-8;

/// Upper limit of the x-domain integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpperLimit {
    One,
    Infinity,
    /// Finite upper limit `X > 0`.
    Finite(f64),
}

impl UpperLimit {
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => return Ok(UpperLimit::Infinity),
            _ => {}
        }
        let x: f64 = t
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad upper limit '{s}'")))?;
        UpperLimit::from_value(x)
    }

    pub fn from_value(x: f64) -> Result<Self> {
        if x == 1.0 {
            Ok(UpperLimit::One)
        } else if x == f64::INFINITY {
            Ok(UpperLimit::Infinity)
        } else if x.is_finite() && x > 0.0 {
            Ok(UpperLimit::Finite(x))
        } else {
            Err(Error::InvalidParameter(format!(
                "upper limit must be positive, got {x}"
            )))
        }
    }

    /// Finite limit value, `None` for infinity.
    pub fn value(&self) -> Option<f64> {
        match *self {
            UpperLimit::One => Some(1.0),
            UpperLimit::Infinity => None,
            UpperLimit::Finite(x) => Some(x),
        }
    }
}

impl fmt::Display for UpperLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperLimit::One => write!(f, "1"),
            UpperLimit::Infinity => write!(f, "inf"),
            UpperLimit::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for UpperLimit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            UpperLimit::One => s.serialize_str("1"),
            UpperLimit::Infinity => s.serialize_str("inf"),
            UpperLimit::Finite(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for UpperLimit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        let r = Repr::deserialize(d)?;
        let out = match r {
            Repr::Num(x) => UpperLimit::from_value(x),
            Repr::Text(t) => UpperLimit::parse(&t),
        };
        out.map_err(serde::de::Error::custom)
    }
}

/// Parse a complex literal: `RE`, `RE+IMi`, `RE-IMi` or `IMi` (no spaces).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::InvalidParameter(format!("bad complex literal '{s}'"));
    let t = s.trim();
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        let re: f64 = t.parse().map_err(|_| bad())?;
        return Ok(Complex64::new(re, 0.0));
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let imag_part = |txt: &str| -> Result<f64> {
        match txt {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => txt.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => {
            let re: f64 = body[..i].parse().map_err(|_| bad())?;
            let im = imag_part(&body[i..])?;
            Ok(Complex64::new(re, im))
        }
        None => Ok(Complex64::new(0.0, imag_part(body)?)),
    }
}

/// Inverse of [`parse_complex`]; real values print without an imaginary part.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 || z.im.is_sign_negative() {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub(crate) mod complex_literal {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if z.im == 0.0 {
            s.serialize_f64(z.re)
        } else {
            s.serialize_str(&format_complex(*z))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(Complex64::new(x, 0.0)),
            Repr::Text(t) => parse_complex(&t).map_err(serde::de::Error::custom),
        }
    }
}

/// The x-domain problem statement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrandSpec {
    pub n: f64,
    #[serde(with = "complex_literal")]
    pub p: Complex64,
    pub theta: f64,
    pub zeta: f64,
    pub upper: UpperLimit,
}

impl IntegrandSpec {
    pub fn new(n: f64, p: Complex64, theta: f64, zeta: f64, upper: UpperLimit) -> Result<Self> {
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidParameter(format!("n must be positive, got {n}")));
        }
        if !(p.re.is_finite() && p.im.is_finite() && theta.is_finite() && zeta.is_finite()) {
            return Err(Error::InvalidParameter("non-finite parameter".into()));
        }
        if let UpperLimit::Finite(x) = upper {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::InvalidParameter(format!("upper limit must be positive, got {x}")));
            }
        }
        Ok(Self { n, p, theta, zeta, upper })
    }

    /// Real-exponent constructor with upper limit 1.
    pub fn real(n: f64, p: f64, theta: f64, zeta: f64) -> Result<Self> {
        Self::new(n, Complex64::new(p, 0.0), theta, zeta, UpperLimit::One)
    }

    pub fn with_upper(mut self, upper: UpperLimit) -> Self {
        self.upper = upper;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    /// Copy with θ reduced into (0, 2π), plus whether a shift happened.
    pub fn canonical(&self) -> Result<(IntegrandSpec, bool)> {
        let (theta, shifted) = canonicalize_theta(self.theta)?;
        Ok((IntegrandSpec { theta, ..*self }, shifted))
    }

    /// True when p is real (imaginary part exactly zero).
    pub fn has_real_p(&self) -> bool {
        self.p.im == 0.0
    }

    /// True when both exponents are integers and p is real.
    pub fn has_integer_exponents(&self) -> bool {
        self.has_real_p() && self.n.fract() == 0.0 && self.p.re.fract() == 0.0
    }
}

/// The t-domain problem statement `scale · ∫₀^∞ (cosh bt + cos c)/(cosh t + cos a) dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedForm {
    #[serde(with = "complex_literal")]
    pub a: Complex64,
    #[serde(with = "complex_literal")]
    pub b: Complex64,
    pub c: f64,
    pub scale: f64,
}

impl NormalizedForm {
    /// Recover `(n, p, θ, ζ)`.
    pub fn denormalize(&self) -> (f64, Complex64, f64, f64) {
        let n = 1.0 / self.scale;
        (n, self.b * n, PI - self.a.re, PI - self.c)
    }
}

/// Pure arithmetic map to `(a, b, c, scale)`.
///
/// θ is used as stored in the spec; callers that want the canonical angle
/// call [`IntegrandSpec::canonical`] first.
pub fn normalize(spec: &IntegrandSpec) -> NormalizedForm {
    NormalizedForm {
        a: Complex64::new(PI - spec.theta, 0.0),
        b: spec.p / spec.n,
        c: PI - spec.zeta,
        scale: 1.0 / spec.n,
    }
}

/// Reduce θ into the open interval (0, 2π).
///
/// Returns the reduced angle and whether it differs from the input. Uses a
/// two-term reduction of 2π so the reduced angle stays within an ulp of the
/// exact residue for moderate |θ|.
pub fn canonicalize_theta(theta: f64) -> Result<(f64, bool)> {
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("theta must be finite, got {theta}")));
    }
    let (r, shifted) = if theta > 0.0 && theta < TAU {
        (theta, false)
    } else {
        let k = (theta / TAU).floor();
        let mut r = (-k).mul_add(TAU, theta) - k * TAU_LO;
        if r < 0.0 {
            r += TAU;
        } else if r >= TAU {
            r -= TAU;
        }
        (r, true)
    };
    if r < SINGULAR_THETA_EPS || TAU - r < SINGULAR_THETA_EPS {
        return Err(Error::SingularTheta);
    }
    Ok((r, shifted))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainKind {
    Valid,
    /// θ = π: a → 0, evaluated through the limit formula.
    BoundaryA,
    SingularTheta,
    /// |Re p| ≥ n: the integral diverges at an endpoint.
    Excluded,
    /// θ outside (0, 2π) as given: the closed form only reproduces the
    /// integral after canonicalization.
    ParadoxOnly,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DomainKind::Valid => "Valid",
            DomainKind::BoundaryA => "BoundaryA",
            DomainKind::SingularTheta => "SingularTheta",
            DomainKind::Excluded => "Excluded",
            DomainKind::ParadoxOnly => "ParadoxOnly",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainStatus {
    pub kind: DomainKind,
    pub detail: String,
}

impl DomainStatus {
    fn new(kind: DomainKind, detail: impl Into<String>) -> Self {
        Self { kind, detail: detail.into() }
    }

    /// Whether the closed form applies (possibly through the a → 0 limit).
    pub fn is_evaluable(&self) -> bool {
        matches!(self.kind, DomainKind::Valid | DomainKind::BoundaryA)
    }
}

/// Classify a spec against the validity conditions. θ is taken as given.
pub fn classify_domain(spec: &IntegrandSpec) -> DomainStatus {
    if !(spec.n.is_finite() && spec.n > 0.0) {
        return DomainStatus::new(DomainKind::Excluded, format!("Excluded: n = {} is not positive", spec.n));
    }
    let theta_c = match canonicalize_theta(spec.theta) {
        Ok((t, _)) => t,
        Err(Error::SingularTheta) => {
            return DomainStatus::new(
                DomainKind::SingularTheta,
                "SingularTheta: θ ≡ 0 (mod 2π), the integral is infinite",
            )
        }
        Err(e) => return DomainStatus::new(DomainKind::Excluded, format!("Excluded: {e}")),
    };
    if spec.p.re >= spec.n {
        return DomainStatus::new(DomainKind::Excluded, "Excluded: Re(p−n) ≥ 0");
    }
    if -spec.p.re >= spec.n {
        return DomainStatus::new(DomainKind::Excluded, "Excluded: Re(−p−n) ≥ 0");
    }
    if !(spec.theta > 0.0 && spec.theta < TAU) {
        return DomainStatus::new(
            DomainKind::ParadoxOnly,
            format!("ParadoxOnly: θ = {} lies outside (0, 2π); canonical value {theta_c}", spec.theta),
        );
    }
    if (theta_c - PI).abs() <= BOUNDARY_A_EPS {
        return DomainStatus::new(DomainKind::BoundaryA, "BoundaryA: θ = π, a → 0 limit");
    }
    DomainStatus::new(DomainKind::Valid, "Valid")
}

/// A spec and its image under `(n, p) → (λn, λp)`; the integral over (0, 1]
/// scales by `1/λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleCheck {
    pub lambda: f64,
    pub original: IntegrandSpec,
    pub scaled: IntegrandSpec,
}

impl ScaleCheck {
    pub fn new(original: IntegrandSpec, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("scale factor must be positive, got {lambda}")));
        }
        let scaled = IntegrandSpec {
            n: lambda * original.n,
            p: original.p * lambda,
            ..original
        };
        Ok(Self { lambda, original, scaled })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalize_examples() {
        let f = normalize(&IntegrandSpec::real(1.0, 0.0, FRAC_PI_2, FRAC_PI_2).unwrap());
        assert_eq!((f.a, f.b, f.c, f.scale), (c(FRAC_PI_2, 0.0), c(0.0, 0.0), FRAC_PI_2, 1.0));

        let f = normalize(&IntegrandSpec::real(2.0, 1.0, PI, FRAC_PI_2).unwrap());
        assert_eq!((f.a, f.b, f.c, f.scale), (c(0.0, 0.0), c(0.5, 0.0), FRAC_PI_2, 0.5));

        let spec = IntegrandSpec::new(2.0, c(0.0, 1.0), FRAC_PI_2, FRAC_PI_2, UpperLimit::One).unwrap();
        let f = normalize(&spec);
        assert_eq!((f.a, f.b, f.c, f.scale), (c(FRAC_PI_2, 0.0), c(0.0, 0.5), FRAC_PI_2, 0.5));
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize_theta(FRAC_PI_2).unwrap(), (FRAC_PI_2, false));
        let (t, s) = canonicalize_theta(FRAC_PI_2 + TAU).unwrap();
        assert!(s && (t - FRAC_PI_2).abs() < 1e-15);
        let (t, s) = canonicalize_theta(-PI / 3.0).unwrap();
        assert!(s && (t - 5.0 * PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn canonicalize_rejects_multiples_of_two_pi() {
        for theta in [0.0, TAU, -TAU, 2.0 * TAU, 10.0 * TAU] {
            assert_eq!(canonicalize_theta(theta), Err(Error::SingularTheta), "θ = {theta}");
        }
        assert!(matches!(canonicalize_theta(f64::NAN), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn classify_examples() {
        let k = |n, p, th| classify_domain(&IntegrandSpec::real(n, p, th, FRAC_PI_2).unwrap()).kind;
        assert_eq!(k(1.0, 0.5, FRAC_PI_2), DomainKind::Valid);
        assert_eq!(k(1.0, 1.5, FRAC_PI_2), DomainKind::Excluded);
        assert_eq!(k(1.0, -1.0, FRAC_PI_2), DomainKind::Excluded);
        assert_eq!(k(2.0, 1.0, PI), DomainKind::BoundaryA);
        assert_eq!(k(2.0, 1.0, 0.0), DomainKind::SingularTheta);
        assert_eq!(k(2.0, 1.0, FRAC_PI_2 + TAU), DomainKind::ParadoxOnly);
        let d = classify_domain(&IntegrandSpec::real(1.0, 1.5, FRAC_PI_2, FRAC_PI_2).unwrap());
        assert_eq!(d.detail, "Excluded: Re(p−n) ≥ 0");
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("1.5-0.25i").unwrap(), c(1.5, -0.25));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex("-1e-3-2e-1i").unwrap(), c(-1e-3, -0.2));
        for bad in ["", "1 + 2i", "abc", "1+xi", "i1"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
        for z in [c(0.3, 0.0), c(0.0, -1.25), c(-2.0, 0.5), c(1e-20, -3e10)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn upper_limit_parsing() {
        assert_eq!(UpperLimit::parse("1").unwrap(), UpperLimit::One);
        assert_eq!(UpperLimit::parse("inf").unwrap(), UpperLimit::Infinity);
        assert_eq!(UpperLimit::parse("0.5").unwrap(), UpperLimit::Finite(0.5));
        assert!(UpperLimit::parse("-1").is_err());
        assert!(UpperLimit::parse("0").is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = IntegrandSpec::new(2.5, c(0.3, -0.2), 1.1, 0.4, UpperLimit::Finite(0.5)).unwrap();
        let js = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<IntegrandSpec>(&js).unwrap(), spec);
        let back: IntegrandSpec =
            serde_json::from_str(r#"{"n":1,"p":0.5,"theta":1.0,"zeta":2.0,"upper":"inf"}"#).unwrap();
        assert_eq!(back.upper, UpperLimit::Infinity);
    }

    #[test]
    fn scale_check_construction() {
        let spec = IntegrandSpec::real(1.5, 0.4, 1.0, 2.0).unwrap();
        let sc = ScaleCheck::new(spec, 2.7).unwrap();
        assert_eq!(sc.scaled.n, 2.7 * 1.5);
        assert_eq!(sc.scaled.p.re, 2.7 * 0.4);
        assert!(ScaleCheck::new(spec, 0.0).is_err());
    }

    #[test]
    fn constructor_rejects_bad_n() {
        assert!(IntegrandSpec::real(0.0, 0.0, 1.0, 1.0).is_err());
        assert!(IntegrandSpec::real(-1.0, 0.0, 1.0, 1.0).is_err());
        assert!(IntegrandSpec::real(f64::NAN, 0.0, 1.0, 1.0).is_err());
    }
}
