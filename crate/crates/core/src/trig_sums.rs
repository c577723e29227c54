//! Finite trigonometric sums in closed form.
//!
//! With `count = n` terms:
//!
//! ```text
//!   t = Σ_{j=1..n} cos(α + 2jβ)
//!   u = Σ_{j=1..n} j cos(α + 2jβ)
//!   v = Σ_{j=1..n} sin(α + (2j−1)β)
//!   V = Σ_{j=1..n} (a + jb) cos(α + 2jβ)
//! ```
//!
//! All closed forms telescope through products with `sin β`, so they
//! require `|sin β| > EPS_DEN`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

pub const EPS_DEN: f64 = 1e-12;

/// Low-order part of π (π − PI in f64).
const PI_LO: f64 = 1.224_646_799_147_353_2e-16;

/// `α + mβ = r + kπ` with `|r| ≤ π/2`, returning `(r, (−1)^k)`.
///
/// The product `mβ` and the sum are kept exact until the reduction, so `r`
/// has full relative precision even when it is tiny. The closed forms divide
/// by `sin β`, which amplifies any angle error.
fn reduced_angle(alpha: f64, m: f64, beta: f64) -> (f64, f64) {
    let hi = m * beta;
    let lo = m.mul_add(beta, -hi);
    let s = hi + alpha;
    let bv = s - hi;
    let err = (hi - (s - bv)) + (alpha - bv);
    let k = (s / PI).round();
    let r = (-k).mul_add(PI, s) - k * PI_LO + (lo + err);
    let sign = if k.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    (r, sign)
}

fn sin_of(alpha: f64, m: f64, beta: f64) -> f64 {
    let (r, sign) = reduced_angle(alpha, m, beta);
    sign * r.sin()
}

fn cos_of(alpha: f64, m: f64, beta: f64) -> f64 {
    let (r, sign) = reduced_angle(alpha, m, beta);
    sign * r.cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigSumSpec {
    pub alpha: f64,
    pub beta: f64,
    pub count: u32,
    pub coeff_a: f64,
    pub coeff_b: f64,
}

impl TrigSumSpec {
    pub fn new(alpha: f64, beta: f64, count: u32) -> Self {
        Self { alpha, beta, count, coeff_a: 1.0, coeff_b: 0.0 }
    }

    pub fn with_coeffs(mut self, coeff_a: f64, coeff_b: f64) -> Self {
        self.coeff_a = coeff_a;
        self.coeff_b = coeff_b;
        self
    }

    fn sin_beta(&self) -> Result<f64> {
        if self.count == 0 {
            return Err(Error::InvalidParameter("count must be at least 1".into()));
        }
        let s = self.beta.sin();
        if s.abs() <= EPS_DEN {
            return Err(Error::DegenerateBeta(s.abs()));
        }
        Ok(s)
    }

    fn n(&self) -> f64 {
        f64::from(self.count)
    }

    /// `sin(α + (2n+1)β)`
    fn top_sin(&self) -> f64 {
        sin_of(self.alpha, 2.0 * self.n() + 1.0, self.beta)
    }

    /// `cos α − cos(α + 2nβ)`, in product form to avoid cancellation
    fn cos_gap(&self) -> f64 {
        let n = self.n();
        2.0 * sin_of(self.alpha, n, self.beta) * sin_of(0.0, n, self.beta)
    }

    /// `sin(α + (2n+1)β) − sin(α + β)`, in product form
    fn sin_gap(&self) -> f64 {
        let n = self.n();
        2.0 * cos_of(self.alpha, n + 1.0, self.beta) * sin_of(0.0, n, self.beta)
    }
}

pub fn cosine_sum_t(spec: &TrigSumSpec) -> Result<f64> {
    let s = spec.sin_beta()?;
    Ok(spec.sin_gap() / (2.0 * s))
}

pub fn weighted_cosine_sum_u(spec: &TrigSumSpec) -> Result<f64> {
    let s = spec.sin_beta()?;
    Ok(spec.n() * spec.top_sin() / (2.0 * s) - spec.cos_gap() / (4.0 * s * s))
}

pub fn sine_sum_v(spec: &TrigSumSpec) -> Result<f64> {
    let s = spec.sin_beta()?;
    Ok(spec.cos_gap() / (2.0 * s))
}

pub fn arithmetic_cosine_sum_v(spec: &TrigSumSpec) -> Result<f64> {
    let s = spec.sin_beta()?;
    let (a, b, n) = (spec.coeff_a, spec.coeff_b, spec.n());
    let top = spec.top_sin();
    Ok(a * spec.sin_gap() / (2.0 * s) + b * n * top / (2.0 * s)
        - b * spec.cos_gap() / (4.0 * s * s))
}

fn check_count(n: u32) -> Result<f64> {
    if n == 0 {
        Err(Error::InvalidParameter("n must be at least 1".into()))
    } else {
        Ok(f64::from(n))
    }
}

/// `Q = Σ_{j=0..n−1} ((n − 2j)π − θ)/n · cos(p(θ + 2jπ)/n)`, summed in
/// closed form as an arithmetic-weighted cosine progression.
///
/// Exact for every real p with `sin(pπ/n) ≠ 0`.
pub fn sum_q(n: u32, p: f64, theta: f64) -> Result<f64> {
    let nf = check_count(n)?;
    let spec = TrigSumSpec {
        alpha: -p * (2.0 * PI - theta) / nf,
        beta: PI * p / nf,
        count: n,
        coeff_a: ((nf + 2.0) * PI - theta) / nf,
        coeff_b: -2.0 * PI / nf,
    };
    arithmetic_cosine_sum_v(&spec)
}

/// `π sin(p(π − θ)/n) / sin(pπ/n)`: the value of [`sum_q`] after dropping
/// whole turns `2πp`, which is legitimate only for integer p.
pub fn sum_q_simplified(n: u32, p: f64, theta: f64) -> Result<f64> {
    let nf = check_count(n)?;
    let s = (PI * p / nf).sin();
    if s.abs() <= EPS_DEN {
        return Err(Error::DegenerateBeta(s.abs()));
    }
    Ok(PI * (p * (PI - theta) / nf).sin() / s)
}

/// `R = Σ_{j=0..n−1} ((n − 2j)π − θ)/n = π − θ`.
pub fn sum_r(n: u32, theta: f64) -> Result<f64> {
    check_count(n)?;
    Ok(PI - theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssemblyParts {
    pub q: f64,
    pub r: f64,
}

/// Q and R for the decomposition assembly; at p = 0 the cosine weights are
/// all 1 and Q coincides with R.
pub fn assembly_parts(n: u32, p: f64, theta: f64) -> Result<AssemblyParts> {
    let r = sum_r(n, theta)?;
    let q = if p == 0.0 { r } else { sum_q(n, p, theta)? };
    Ok(AssemblyParts { q, r })
}
