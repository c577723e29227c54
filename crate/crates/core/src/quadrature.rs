//! Numerical oracle.
//!
//! Two independent rules over the same panel layout:
//!
//! * `DoubleExponential`: tanh-sinh on finite panels, halving the step until
//!   two successive levels agree; the whole line uses a single sinh-sinh map.
//! * `GaussDoubling`: Gauss-Legendre on the same panels, doubling the degree.
//!
//! Half-line integrals are truncated at `T = ln(1e16/d)/d` past the origin,
//! where `d` is the exponential decay rate of the kernel, so the discarded
//! tail is below `1e-16/d` relative to the kernel's size at the origin.
//! Panels are summed in a fixed order, so results are bit-reproducible.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::num::NonZeroUsize;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{canonicalize_theta, IntegrandSpec, UpperLimit};

/// Integrand evaluations allowed per integral.
pub const MAX_EVALS: usize = 2_000_000;
/// Per-panel stopping tolerance relative to the panel's L1 mass.
pub const REL_TOL: f64 = 1e-13;

const TAU_MAX: f64 = 3.5;
const DE_H0: f64 = 0.5;
const DE_MIN_LEVEL: u32 = 2;
const DE_MAX_LEVEL: u32 = 7;
const DE_LINE_MAX_LEVEL: u32 = 13;
const GAUSS_DEGREES: [usize; 6] = [16, 32, 64, 128, 256, 512];
const MAX_BISECTIONS: u32 = 40;
const MAX_PANEL_WIDTH: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    DoubleExponential,
    GaussDoubling,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult<T = f64> {
    pub value: T,
    pub abs_err_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult<Complex64> {
    pub fn re(self) -> QuadResult<f64> {
        QuadResult {
            value: self.value.re,
            abs_err_estimate: self.abs_err_estimate,
            evaluations: self.evaluations,
        }
    }
}

impl<T: QuadValue> QuadResult<T> {
    fn scaled(self, k: f64) -> Self {
        QuadResult {
            value: self.value * k,
            abs_err_estimate: self.abs_err_estimate * k.abs(),
            evaluations: self.evaluations,
        }
    }
}

/// Scalar types the rules can accumulate.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Shape information used to lay out panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    /// Exponential decay rate as t → +∞.
    pub decay_pos: f64,
    /// Exponential decay rate as t → −∞.
    pub decay_neg: f64,
    /// Distance from the origin to the nearest complex singularity.
    pub feature: f64,
    /// Oscillation frequency on the real line.
    pub freq: f64,
}

impl Profile {
    pub fn new(decay: f64, feature: f64, freq: f64) -> Self {
        Self { decay_pos: decay, decay_neg: decay, feature, freq }
    }

    fn mirrored(&self) -> Self {
        Self { decay_pos: self.decay_neg, decay_neg: self.decay_pos, ..*self }
    }

    fn max_width(&self) -> f64 {
        if self.freq > 0.0 {
            MAX_PANEL_WIDTH.min(2.0 * PI / self.freq)
        } else {
            MAX_PANEL_WIDTH
        }
    }
}

fn truncation(decay: f64) -> f64 {
    (1e16 / decay).ln() / decay
}

struct Budget {
    used: usize,
}

impl Budget {
    fn charge(&mut self, k: usize) -> Result<()> {
        self.used += k;
        if self.used > MAX_EVALS {
            Err(Error::BudgetExceeded(self.used))
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Copy)]
struct Acc<T> {
    value: T,
    err: f64,
    l1: f64,
}

impl<T: QuadValue> Acc<T> {
    fn zero() -> Self {
        Acc { value: T::zero(), err: 0.0, l1: 0.0 }
    }
    fn add(self, o: Self) -> Self {
        Acc { value: self.value + o.value, err: self.err + o.err, l1: self.l1 + o.l1 }
    }
}

fn check_finite<T: QuadValue>(v: T, x: f64) -> Result<T> {
    if v.magnitude().is_finite() {
        Ok(v)
    } else {
        Err(Error::NonIntegrable(format!("integrand is not finite at {x}")))
    }
}

/// tanh-sinh node at τ on [lo, hi]: returns (x, weight).
fn de_node(lo: f64, hi: f64, tau: f64) -> (f64, f64) {
    let r = 0.5 * (hi - lo);
    let u = FRAC_PI_2 * tau.sinh();
    let ch = u.cosh();
    let w = r * FRAC_PI_2 * tau.cosh() / (ch * ch);
    // distance to the nearer endpoint, without cancellation
    let gap = r * (-u.abs()).exp() / ch;
    let x = if tau >= 0.0 { hi - gap } else { lo + gap };
    (x, w)
}

fn de_panel<T: QuadValue, F: Fn(f64) -> T>(f: &F, lo: f64, hi: f64, b: &mut Budget) -> Result<Option<Acc<T>>> {
    let kmax = (TAU_MAX / DE_H0).ceil() as i64;
    let mut sum = T::zero();
    let mut l1 = 0.0;
    for k in -kmax..=kmax {
        let (x, w) = de_node(lo, hi, k as f64 * DE_H0);
        let v = check_finite(f(x), x)? * w;
        sum = sum + v;
        l1 += v.magnitude();
    }
    b.charge((2 * kmax + 1) as usize)?;
    let mut h = DE_H0;
    let mut prev = sum * h;
    for level in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        let m = (TAU_MAX / h).ceil() as i64;
        let mut count = 0;
        let mut k = -m + if m % 2 == 0 { 1 } else { 0 };
        while k <= m {
            let (x, w) = de_node(lo, hi, k as f64 * h);
            let v = check_finite(f(x), x)? * w;
            sum = sum + v;
            l1 += v.magnitude();
            count += 1;
            k += 2;
        }
        b.charge(count)?;
        let cur = sum * h;
        let diff = (cur - prev).magnitude();
        let mass = l1 * h;
        if level >= DE_MIN_LEVEL && diff <= REL_TOL * mass {
            return Ok(Some(Acc { value: cur, err: diff, l1: mass }));
        }
        prev = cur;
    }
    Ok(None)
}

fn gauss_rules() -> &'static [GaussLegendre] {
    static RULES: OnceLock<Vec<GaussLegendre>> = OnceLock::new();
    RULES.get_or_init(|| {
        GAUSS_DEGREES
            .iter()
            .map(|&d| GaussLegendre::new(NonZeroUsize::new(d).expect("nonzero degree")))
            .collect()
    })
}

fn gauss_apply<T: QuadValue, F: Fn(f64) -> T>(
    f: &F,
    rule: &GaussLegendre,
    lo: f64,
    hi: f64,
) -> Result<(T, f64)> {
    let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let mut sum = T::zero();
    let mut l1 = 0.0;
    for &(x, w) in rule.as_node_weight_pairs() {
        let t = c + r * x;
        let v = check_finite(f(t), t)? * (w * r);
        sum = sum + v;
        l1 += v.magnitude();
    }
    Ok((sum, l1))
}

fn gauss_panel<T: QuadValue, F: Fn(f64) -> T>(f: &F, lo: f64, hi: f64, b: &mut Budget) -> Result<Option<Acc<T>>> {
    let rules = gauss_rules();
    let (mut prev, _) = gauss_apply(f, &rules[0], lo, hi)?;
    b.charge(GAUSS_DEGREES[0])?;
    for (rule, &deg) in rules.iter().zip(GAUSS_DEGREES.iter()).skip(1) {
        let (cur, l1) = gauss_apply(f, rule, lo, hi)?;
        b.charge(deg)?;
        let diff = (cur - prev).magnitude();
        if diff <= REL_TOL * l1 {
            return Ok(Some(Acc { value: cur, err: diff, l1 }));
        }
        prev = cur;
    }
    Ok(None)
}

/// One panel, bisected until each piece converges.
fn panel<T: QuadValue, F: Fn(f64) -> T>(
    f: &F,
    lo: f64,
    hi: f64,
    rule: Rule,
    b: &mut Budget,
    depth: u32,
) -> Result<Acc<T>> {
    if hi == lo {
        return Ok(Acc::zero());
    }
    let got = match rule {
        Rule::DoubleExponential => de_panel(f, lo, hi, b)?,
        Rule::GaussDoubling => gauss_panel(f, lo, hi, b)?,
    };
    match got {
        Some(acc) => Ok(acc),
        None if depth < MAX_BISECTIONS => {
            let mid = 0.5 * (lo + hi);
            let left = panel(f, lo, mid, rule, b, depth + 1)?;
            let right = panel(f, mid, hi, rule, b, depth + 1)?;
            Ok(left.add(right))
        }
        None => Err(Error::ToleranceUnreachable(format!(
            "panel [{lo}, {hi}] did not converge after {MAX_BISECTIONS} bisections"
        ))),
    }
}

/// Breakpoints from `start` to `end` (start < end), growing geometrically
/// from `w0` up to `wmax`.
fn graded(start: f64, end: f64, w0: f64, wmax: f64) -> Vec<f64> {
    let mut pts = vec![start];
    let mut w = w0.min(wmax);
    let mut x = start;
    while x < end {
        x = (x + w).min(end);
        if end - x < 0.25 * w {
            x = end;
        }
        pts.push(x);
        w = (2.0 * w).min(wmax);
    }
    pts
}

fn sum_panels<T: QuadValue, F: Fn(f64) -> T>(f: &F, pts: &[f64], rule: Rule, b: &mut Budget) -> Result<Acc<T>> {
    let mut acc = Acc::zero();
    for w in pts.windows(2) {
        acc = acc.add(panel(f, w[0], w[1], rule, b, 0)?);
    }
    Ok(acc)
}

fn half_line_acc<T: QuadValue, F: Fn(f64) -> T>(
    f: &F,
    lo: f64,
    prof: &Profile,
    rule: Rule,
    b: &mut Budget,
) -> Result<Acc<T>> {
    let wmax = prof.max_width();
    let feature = prof.feature.max(1e-300);
    let end = lo.max(0.0) + truncation(prof.decay_pos);
    let mut acc = Acc::zero();
    if lo < 0.0 {
        // [lo, 0]: grade outward from the origin, integrate left to right
        let g = |s: f64| f(-s);
        let mut pts = graded(0.0, -lo, feature.min(1.0), wmax);
        pts.reverse();
        let mut left = Acc::zero();
        for w in pts.windows(2) {
            left = left.add(panel(&g, w[1], w[0], rule, b, 0)?);
        }
        acc = acc.add(left);
    }
    let start = lo.max(0.0);
    let w0 = 1f64.min(start.hypot(feature));
    acc = acc.add(sum_panels(f, &graded(start, end, w0, wmax), rule, b)?);
    Ok(acc)
}

fn finish<T: QuadValue>(acc: Acc<T>, b: Budget) -> QuadResult<T> {
    QuadResult { value: acc.value, abs_err_estimate: acc.err, evaluations: b.used }
}

/// `∫_lo^∞ f(t) dt` for an integrand with the given profile.
pub fn integrate_half_line<T: QuadValue, F: Fn(f64) -> T>(
    f: F,
    lo: f64,
    prof: Profile,
    rule: Rule,
) -> Result<QuadResult<T>> {
    check_profile(&prof)?;
    let mut b = Budget { used: 0 };
    let acc = half_line_acc(&f, lo, &prof, rule, &mut b)?;
    Ok(finish(acc, b))
}

/// `∫_lo^hi f(x) dx` on a finite interval with regular endpoints.
pub fn integrate_interval<T: QuadValue, F: Fn(f64) -> T>(
    f: F,
    lo: f64,
    hi: f64,
    rule: Rule,
) -> Result<QuadResult<T>> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParameter("interval ends must be finite".into()));
    }
    let mut b = Budget { used: 0 };
    let (l, h, sign) = if lo <= hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };
    let pts = graded(l, h, (h - l).min(MAX_PANEL_WIDTH), MAX_PANEL_WIDTH);
    let acc = sum_panels(&f, &pts, rule, &mut b)?;
    Ok(finish(acc, b).scaled(sign))
}

/// `∫_{−∞}^{∞} f(t) dt`.
///
/// The double-exponential rule uses one sinh-sinh map over the whole line;
/// the Gauss rule integrates the two half lines separately.
pub fn integrate_whole_line<T: QuadValue, F: Fn(f64) -> T>(
    f: F,
    prof: Profile,
    rule: Rule,
) -> Result<QuadResult<T>> {
    check_profile(&prof)?;
    let mut b = Budget { used: 0 };
    let acc = match rule {
        Rule::GaussDoubling => {
            let right = half_line_acc(&f, 0.0, &prof, rule, &mut b)?;
            let g = |t: f64| f(-t);
            let left = half_line_acc(&g, 0.0, &prof.mirrored(), rule, &mut b)?;
            right.add(left)
        }
        Rule::DoubleExponential => sinh_sinh(&f, &prof, &mut b)?,
    };
    Ok(finish(acc, b))
}

fn check_profile(prof: &Profile) -> Result<()> {
    if !(prof.decay_pos > 0.0 && prof.decay_neg > 0.0) {
        return Err(Error::NonIntegrable("kernel does not decay".into()));
    }
    Ok(())
}

fn sinh_sinh<T: QuadValue, F: Fn(f64) -> T>(f: &F, prof: &Profile, b: &mut Budget) -> Result<Acc<T>> {
    let sigma = prof.feature.clamp(1e-300, 1.0);
    let tau_of = |t_end: f64| ((2.0 / PI) * (t_end / sigma).asinh()).asinh();
    let tau_pos = tau_of(truncation(prof.decay_pos));
    let tau_neg = tau_of(truncation(prof.decay_neg));
    let node = |tau: f64| {
        let v = FRAC_PI_2 * tau.sinh();
        (sigma * v.sinh(), sigma * v.cosh() * FRAC_PI_2 * tau.cosh())
    };
    let mut sum = T::zero();
    let mut l1 = 0.0;
    let mut h = DE_H0;
    let eval_range = |h: f64, step: i64, first: i64, sum: &mut T, l1: &mut f64, b: &mut Budget| -> Result<()> {
        let kneg = -((tau_neg / h).ceil() as i64);
        let kpos = (tau_pos / h).ceil() as i64;
        let mut k = kneg;
        if step == 2 && k.rem_euclid(2) != first {
            k += 1;
        }
        let mut count = 0;
        while k <= kpos {
            let (t, w) = node(k as f64 * h);
            let v = check_finite(f(t), t)? * w;
            *sum = *sum + v;
            *l1 += v.magnitude();
            count += 1;
            k += step;
        }
        b.charge(count)
    };
    eval_range(h, 1, 0, &mut sum, &mut l1, b)?;
    let mut prev = sum * h;
    for level in 1..=DE_LINE_MAX_LEVEL {
        h *= 0.5;
        eval_range(h, 2, 1, &mut sum, &mut l1, b)?;
        let cur = sum * h;
        let diff = (cur - prev).magnitude();
        if level >= DE_MIN_LEVEL && diff <= REL_TOL * l1 * h {
            return Ok(Acc { value: cur, err: diff, l1: l1 * h });
        }
        prev = cur;
    }
    Err(Error::ToleranceUnreachable(
        "sinh-sinh rule did not converge at the finest level".into(),
    ))
}

/// `(cosh bt + cos c)/(cosh t + cos a)` scaled by `2e^{−|t|}` top and bottom.
fn cosh_kernel(t: f64, a_cos: Complex64, b: Complex64, c_cos: f64) -> Complex64 {
    let s = t.abs();
    let e1 = (-s).exp();
    let num = ((b - 1.0) * s).exp() + ((-b - 1.0) * s).exp() + 2.0 * c_cos * e1;
    let den = 1.0 + e1 * e1 + 2.0 * a_cos * e1;
    num / den
}

fn t_profile(a: Complex64, b: Complex64) -> Profile {
    let feature = (PI - a.re.abs()).max(0.0);
    Profile::new(1.0 - b.re.abs(), feature, b.im.abs())
}

fn check_t_strip(a: Complex64, b: Complex64) -> Result<()> {
    if !(a.re.abs() < PI) {
        return Err(Error::Domain(format!("|Re a| = {} is not below π", a.re.abs())));
    }
    if !(b.re.abs() < 1.0) {
        return Err(Error::Domain(format!("|Re b| = {} is not below 1", b.re.abs())));
    }
    Ok(())
}

/// `∫₀^∞ (cosh bt + cos c)/(cosh t + cos a) dt`.
pub fn quad_t_domain(a: f64, b: Complex64, c: f64) -> Result<QuadResult<Complex64>> {
    quad_t_domain_with(Complex64::new(a, 0.0), b, c, Rule::DoubleExponential)
}

/// As [`quad_t_domain`] with a complex `a` and a chosen rule.
pub fn quad_t_domain_with(a: Complex64, b: Complex64, c: f64, rule: Rule) -> Result<QuadResult<Complex64>> {
    check_t_strip(a, b)?;
    let a_cos = a.cos();
    let c_cos = c.cos();
    integrate_half_line(|t| cosh_kernel(t, a_cos, b, c_cos), 0.0, t_profile(a, b), rule)
}

/// Both one-sided kernels `∫_{−∞}^{∞} e^{±bt}/(cosh t + cos a) dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoSided {
    pub plus: QuadResult,
    pub minus: QuadResult,
}

pub fn quad_two_sided(a: f64, b: f64) -> Result<TwoSided> {
    quad_two_sided_with(a, b, Rule::DoubleExponential)
}

pub fn quad_two_sided_with(a: f64, b: f64, rule: Rule) -> Result<TwoSided> {
    if !(a.abs() < PI) || !(b.abs() < 1.0) {
        return Err(Error::Domain(format!("(a, b) = ({a}, {b}) lies outside the strip")));
    }
    let a_cos = a.cos();
    let one_sided = |sign: f64| {
        let bb = sign * b;
        let kernel = move |t: f64| {
            let s = t.abs();
            let e1 = (-s).exp();
            let den = 1.0 + e1 * e1 + 2.0 * a_cos * e1;
            let rate = if t >= 0.0 { bb - 1.0 } else { -bb - 1.0 };
            2.0 * (rate * s).exp() / den
        };
        let prof = Profile {
            decay_pos: 1.0 - bb,
            decay_neg: 1.0 + bb,
            feature: PI - a.abs(),
            freq: 0.0,
        };
        integrate_whole_line(kernel, prof, rule)
    };
    Ok(TwoSided { plus: one_sided(1.0)?, minus: one_sided(-1.0)? })
}

/// x-domain integrand after `xⁿ = e^{−s}`, written with cos θ and cos ζ.
fn x_kernel(s: f64, b: Complex64, cos_theta: f64, cos_zeta: f64) -> Complex64 {
    if s >= 0.0 {
        let e = (-s).exp();
        let num = ((-1.0 - b) * s).exp() + ((b - 1.0) * s).exp() - 2.0 * cos_zeta * e;
        num / (e * e - 2.0 * cos_theta * e + 1.0)
    } else {
        // multiply through by x^(−2n) = e^{2s}
        let e = s.exp();
        let num = ((1.0 - b) * s).exp() + ((1.0 + b) * s).exp() - 2.0 * cos_zeta * e;
        num / (1.0 - 2.0 * cos_theta * e + e * e)
    }
}

fn x_profile(spec: &IntegrandSpec) -> Result<(Complex64, Profile)> {
    if spec.p.re.abs() >= spec.n {
        return Err(Error::NonIntegrable(format!(
            "|Re p| = {} is not below n = {}",
            spec.p.re.abs(),
            spec.n
        )));
    }
    let theta = match canonicalize_theta(spec.theta) {
        Ok((t, _)) => t,
        Err(Error::SingularTheta) => {
            return Err(Error::NonIntegrable("cos θ = 1: double pole at x = 1".into()))
        }
        Err(e) => return Err(e),
    };
    let b = spec.p / spec.n;
    let feature = theta.min(2.0 * PI - theta);
    Ok((b, Profile::new(1.0 - b.re.abs(), feature, b.im.abs())))
}

/// `∫₀^X (x^(n+p) − 2xⁿ cos ζ + x^(n−p))/(x^(2n) − 2xⁿ cos θ + 1) dx/x`
/// for real p, with the double-exponential rule.
pub fn quad_x_domain(spec: &IntegrandSpec, x: f64) -> Result<QuadResult> {
    if !spec.has_real_p() {
        return Err(Error::Domain("quad_x_domain takes real p".into()));
    }
    let upper = UpperLimit::from_value(x)?;
    Ok(quad_x_domain_with(spec, upper, Rule::DoubleExponential)?.re())
}

/// The x-domain integral for any upper limit, complex p and either rule.
///
/// Infinity is integrated over the whole line in s, not by doubling.
pub fn quad_x_domain_with(spec: &IntegrandSpec, upper: UpperLimit, rule: Rule) -> Result<QuadResult<Complex64>> {
    let (b, prof) = x_profile(spec)?;
    let (ct, cz) = (spec.theta.cos(), spec.zeta.cos());
    let kernel = move |s: f64| x_kernel(s, b, ct, cz);
    let res = match upper {
        UpperLimit::Infinity => integrate_whole_line(kernel, prof, rule)?,
        UpperLimit::One => integrate_half_line(kernel, 0.0, prof, rule)?,
        UpperLimit::Finite(x) => integrate_half_line(kernel, -spec.n * x.ln(), prof, rule)?,
    };
    Ok(res.scaled(1.0 / spec.n))
}

/// `∫ cos(q log x)/(xⁿ − 2 cos θ + x^(−n)) dx/x` over (0, 1] or (0, ∞),
/// with `q = Im p`. ζ does not enter.
pub fn quad_cos_log(spec: &IntegrandSpec, upper: UpperLimit) -> Result<QuadResult> {
    quad_cos_log_with(spec, upper, Rule::DoubleExponential)
}

pub fn quad_cos_log_with(spec: &IntegrandSpec, upper: UpperLimit, rule: Rule) -> Result<QuadResult> {
    if spec.p.re != 0.0 {
        return Err(Error::Domain(format!("p must be purely imaginary, got Re p = {}", spec.p.re)));
    }
    let theta = match canonicalize_theta(spec.theta) {
        Ok((t, _)) => t,
        Err(_) => return Err(Error::Domain("θ ≡ 0 (mod 2π): the kernel has a double pole".into())),
    };
    let beta = spec.p.im / spec.n;
    let ct = theta.cos();
    // 1/(2 cosh s − 2 cos θ), scaled by e^{−|s|}
    let kernel = move |s: f64| {
        let e = (-s.abs()).exp();
        (beta * s).cos() * e / (1.0 + e * e - 2.0 * ct * e)
    };
    let prof = Profile::new(1.0, theta.min(2.0 * PI - theta), beta.abs());
    let res = match upper {
        UpperLimit::One => integrate_half_line(kernel, 0.0, prof, rule)?,
        UpperLimit::Infinity => integrate_whole_line(kernel, prof, rule)?,
        UpperLimit::Finite(x) => {
            return Err(Error::Domain(format!("upper limit must be 1 or ∞, got {x}")))
        }
    };
    Ok(res.scaled(1.0 / spec.n))
}

/// `(∫₀^Z m/cos(mz) dz, −ln tan(π/4 − mZ/2))`.
pub fn quad_sec_antiderivative_check(m: f64, z: f64) -> Result<(f64, f64)> {
    if !(m > 0.0 && m.is_finite() && z >= 0.0 && z.is_finite()) {
        return Err(Error::InvalidParameter(format!("need m > 0 and Z ≥ 0, got m = {m}, Z = {z}")));
    }
    let mz = m * z;
    if mz >= FRAC_PI_2 - 1e-3 {
        return Err(Error::PoleTooClose(mz));
    }
    if z == 0.0 {
        return Ok((0.0, 0.0));
    }
    let lhs = integrate_interval(|x: f64| m / (m * x).cos(), 0.0, z, Rule::DoubleExponential)?.value;
    let rhs = -(FRAC_PI_4 - 0.5 * mz).tan().ln();
    Ok((lhs, rhs))
}
