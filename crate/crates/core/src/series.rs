//! Sine series for the one-sided and two-sided integrals over (0, 1].
//!
//! Expanding `1/(xⁿ − 2 cos θ + x^(−n)) = Σ_{k≥1} x^(nk) sin kθ / sin θ` and
//! integrating term by term gives, with `b = p/n` and `s_k = sin kθ / sin θ`,
//!
//! ```text
//!   one-sided   ∫₀¹ x^p/(xⁿ − 2cos θ + x^(−n)) dx/x  = (1/n) Σ s_k / (k + b)
//!   contracted  the sum of the ±p one-sided series   = (2/n) Σ k s_k / (k² − b²)
//! ```
//!
//! Both converge only conditionally. Subtracting the sawtooth series
//! `Σ sin kθ / k = (π − θ)/2` leaves remainders with coefficients of order
//! k⁻² and k⁻³, which are summed directly up to a rigorous Abel tail bound.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::canonicalize_theta;

/// Smallest tolerance the series operations accept.
pub const TOL_FLOOR: f64 = 1e-10;
/// Distance from 0 and 2π inside which the series are refused.
pub const THETA_MARGIN: f64 = 1e-3;
/// Hard cap on the number of remainder terms.
pub const MAX_TERMS: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: u64,
    pub tail_estimate: f64,
    pub accelerated: bool,
}

/// `Σ_{k=0}^{K−1} x^k sin((k+1)θ)`, the expansion of `sin θ/(1 − 2x cos θ + x²)`.
pub fn recurrent_series_partial(theta: f64, x: f64, terms: u64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!("|x| = {} is not below 1", x.abs())));
    }
    let mut sum = 0.0;
    let mut xk = 1.0;
    for k in 0..terms {
        sum += xk * ((k + 1) as f64 * theta).sin();
        xk *= x;
        if xk == 0.0 {
            break;
        }
    }
    Ok(sum)
}

/// Remainder coefficients `c_k`, all positive and decreasing for k ≥ 1.
#[derive(Debug, Clone, Copy)]
enum Remainder {
    /// `1/(k(k + b))`
    OneSided(f64),
    /// `1/(k(k² − b²))`
    Contracted(f64),
    /// `1/(k(k² + β²))`
    Imaginary(f64),
}

impl Remainder {
    fn coeff(self, k: f64) -> f64 {
        match self {
            Remainder::OneSided(b) => 1.0 / (k * (k + b)),
            Remainder::Contracted(b) => 1.0 / (k * (k * k - b * b)),
            Remainder::Imaginary(q) => 1.0 / (k * (k * k + q * q)),
        }
    }

    /// Upper bound for `Σ_{k>m} c_k` by `∫_m^∞ c(x) dx`.
    fn tail_sum(self, m: f64) -> f64 {
        match self {
            Remainder::OneSided(b) if b.abs() < 1e-12 => 1.0 / m,
            Remainder::OneSided(b) => (b / m).ln_1p() / b,
            Remainder::Contracted(b) if b.abs() < 1e-8 => 0.5 / (m * m),
            Remainder::Contracted(b) => -(-(b * b) / (m * m)).ln_1p() / (2.0 * b * b),
            Remainder::Imaginary(q) if q.abs() < 1e-8 => 0.5 / (m * m),
            Remainder::Imaginary(q) => ((q * q) / (m * m)).ln_1p() / (2.0 * q * q),
        }
    }
}

/// Bound on `|Σ_{k>K} s_k c_k|` from summation by parts against the partial
/// sums of `s_k`.
fn abel_tail(rem: Remainder, theta: f64, k: u64) -> f64 {
    let half = 0.5 * theta;
    let s2 = half.sin().powi(2);
    let ch = half.cos().abs();
    let kf = k as f64;
    let next = rem.coeff(kf + 1.0);
    let bounded = if ch > 0.0 { next / (s2 * ch) } else { f64::INFINITY };
    let growing = ((2.0 * kf + 3.0) * next + rem.tail_sum(kf + 1.0)) / (2.0 * s2);
    bounded.min(growing)
}

fn check_theta(theta: f64) -> Result<f64> {
    let (t, _) = canonicalize_theta(theta).map_err(|_| {
        Error::SlowConvergence(format!("θ = {theta} is a multiple of 2π"))
    })?;
    if t < THETA_MARGIN || TAU - t < THETA_MARGIN {
        return Err(Error::SlowConvergence(format!(
            "θ = {t} lies within {THETA_MARGIN} of a multiple of 2π"
        )));
    }
    Ok(t)
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol >= TOL_FLOOR) {
        return Err(Error::ToleranceUnreachable(format!(
            "tol = {tol:e} is below the floor {TOL_FLOOR:e}"
        )));
    }
    Ok(())
}

fn check_exponent(n: f64, p: f64) -> Result<()> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::InvalidParameter(format!("n must be positive, got {n}")));
    }
    if !(p.abs() < n) {
        return Err(Error::Excluded(format!("|p| = {} is not below n = {n}", p.abs())));
    }
    Ok(())
}

/// `anchor + prefactor · Σ_{k≥1} s_k c_k`, truncated where the tail bound
/// drops below tol/2.
fn anchored(theta: f64, anchor: f64, prefactor: f64, rem: Remainder, tol: f64) -> Result<SeriesResult> {
    let bound = |k: u64| prefactor.abs() * abel_tail(rem, theta, k);
    let target = 0.5 * tol;
    let terms = if bound(0) <= target {
        0
    } else {
        let mut hi = 1u64;
        while bound(hi) > target {
            if hi > MAX_TERMS {
                return Err(Error::ToleranceUnreachable(format!(
                    "more than {MAX_TERMS} terms needed at θ = {theta}"
                )));
            }
            hi *= 2;
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if bound(mid) <= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let sin_theta = theta.sin();
    // Neumaier summation
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in 1..=terms {
        let kf = k as f64;
        let term = (kf * theta).sin() / sin_theta * rem.coeff(kf);
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
    }
    let value = anchor + prefactor * (sum + comp);
    Ok(SeriesResult { value, terms_used: terms, tail_estimate: bound(terms), accelerated: true })
}

/// `(1/sin θ) Σ_{k≥1} sin kθ / (kn + p)`.
pub fn series_one_sided(n: f64, p: f64, theta: f64, tol: f64) -> Result<SeriesResult> {
    check_exponent(n, p)?;
    check_tol(tol)?;
    let theta = check_theta(theta)?;
    let b = p / n;
    let anchor = (PI - theta) / (2.0 * n * theta.sin());
    anchored(theta, anchor, -b / n, Remainder::OneSided(b), tol)
}

/// `(2n/sin θ) Σ_{k≥1} k sin kθ / (k²n² − p²)`.
pub fn series_contracted(n: f64, p: f64, theta: f64, tol: f64) -> Result<SeriesResult> {
    check_exponent(n, p)?;
    check_tol(tol)?;
    let theta = check_theta(theta)?;
    let b = p / n;
    let anchor = (PI - theta) / (n * theta.sin());
    anchored(theta, anchor, 2.0 * b * b / n, Remainder::Contracted(b), tol)
}

/// `(2n/sin θ) Σ_{k≥1} k sin kθ / (k²n² + q²)`: the contracted series at p = iq.
pub fn series_imaginary(n: f64, q: f64, theta: f64, tol: f64) -> Result<SeriesResult> {
    check_exponent(n, 0.0)?;
    check_tol(tol)?;
    if !q.is_finite() {
        return Err(Error::InvalidParameter("q must be finite".into()));
    }
    let theta = check_theta(theta)?;
    let beta = q / n;
    let anchor = (PI - theta) / (n * theta.sin());
    anchored(theta, anchor, -2.0 * beta * beta / n, Remainder::Imaginary(beta), tol)
}

/// `π sinh((π − θ)q/n) / (n sin θ sinh(πq/n))`, the closed sum of the
/// imaginary series.
pub fn imaginary_closed(n: f64, q: f64, theta: f64) -> f64 {
    let beta = q / n;
    if beta == 0.0 {
        return (PI - theta) / (n * theta.sin());
    }
    PI * ((PI - theta) * beta).sinh() / (n * theta.sin() * (PI * beta).sinh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    #[test]
    fn recurrent() {
        assert_eq!(recurrent_series_partial(1.3, 0.0, 5).unwrap(), 1.3f64.sin());
        let v = recurrent_series_partial(FRAC_PI_2, 0.5, 60).unwrap();
        assert!((v - 0.8).abs() < 1e-15);
        let (th, x) = (1.0f64, -0.9f64);
        let lhs = th.sin() / (1.0 - 2.0 * x * th.cos() + x * x);
        let v = recurrent_series_partial(th, x, 400).unwrap();
        assert!((v - lhs).abs() < 0.9f64.powi(400) / (1.0 - 0.9) / th.sin().abs().max(1e-3) + 1e-14);
        assert!(recurrent_series_partial(1.0, 1.0, 3).is_err());
    }

    #[test]
    fn one_sided_examples() {
        let r = series_one_sided(1.0, 0.0, FRAC_PI_2, 1e-8).unwrap();
        assert_eq!(r.terms_used, 0);
        assert!((r.value - FRAC_PI_4).abs() < 1e-15);
        let r = series_one_sided(2.0, 1.0, 1.0, 1e-8).unwrap();
        assert!(r.tail_estimate <= 0.5e-8);
        assert!(r.terms_used > 0);
    }

    #[test]
    fn contracted_examples() {
        let r = series_contracted(1.0, 0.5, FRAC_PI_2, 1e-8).unwrap();
        assert!((r.value - PI / SQRT_2).abs() < 1e-8);
        let r = series_contracted(1.0, 0.0, 1.0, 1e-8).unwrap();
        assert!((r.value - (PI - 1.0) / 1f64.sin()).abs() < 1e-15);
        let closed = |n: f64, p: f64, th: f64| PI * (p / n * (PI - th)).sin() / (n * th.sin() * (PI * p / n).sin());
        let r = series_contracted(3.0, 2.0, 2.0, 1e-8).unwrap();
        assert!((r.value - closed(3.0, 2.0, 2.0)).abs() < 1e-8);
    }

    #[test]
    fn imaginary_examples() {
        let r = series_imaginary(1.0, 0.0, 1.0, 1e-8).unwrap();
        assert!((r.value - (PI - 1.0) / 1f64.sin()).abs() < 1e-15);
        let r = series_imaginary(1.0, 1.0, FRAC_PI_2, 1e-8).unwrap();
        assert!((r.value - 0.626_020_165_626_073_8).abs() < 1e-8);
        let r = series_imaginary(2.0, 1.5, 1.2, 1e-8).unwrap();
        assert!((r.value - imaginary_closed(2.0, 1.5, 1.2)).abs() < 1e-8);
    }

    #[test]
    fn contracted_is_sum_of_one_sided() {
        let (n, p, th, tol) = (2.0, 0.7, 2.3, 1e-9);
        let c = series_contracted(n, p, th, tol).unwrap().value;
        let s = series_one_sided(n, p, th, tol).unwrap().value + series_one_sided(n, -p, th, tol).unwrap().value;
        assert!((c - s).abs() < 2.0 * tol);
    }

    #[test]
    fn refusals() {
        assert!(matches!(series_contracted(1.0, 0.5, 1e-4, 1e-8), Err(Error::SlowConvergence(_))));
        assert!(matches!(series_contracted(1.0, 0.5, TAU - 1e-4, 1e-8), Err(Error::SlowConvergence(_))));
        assert!(matches!(series_contracted(1.0, 0.5, 1.0, 1e-12), Err(Error::ToleranceUnreachable(_))));
        assert!(matches!(series_one_sided(1.0, 0.9, PI, 1e-10), Err(Error::ToleranceUnreachable(_))));
        assert!(matches!(series_one_sided(1.0, 1.0, 1.0, 1e-8), Err(Error::Excluded(_))));
    }

    #[test]
    fn tail_estimate_bounds_error() {
        for &(n, p, th) in &[(1.0, 0.9, 2.5), (2.0, -1.3, 0.4), (1.5, 0.2, 5.9)] {
            let r = series_contracted(n, p, th, 1e-9).unwrap();
            let closed = PI * (p / n * (PI - th)).sin() / (n * th.sin() * (PI * p / n).sin());
            assert!((r.value - closed).abs() <= r.tail_estimate + 1e-13, "{n} {p} {th}");
        }
    }
}
