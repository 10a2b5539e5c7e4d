//! Integrals `∫ exp(-p(x)) dx` for coercive polynomials, the closed-form
//! envelope for quartics with global minimum 0 at the origin, sublevel-set
//! measures and band widths on intervals of convexity.

use serde::{Deserialize, Serialize};

use crate::domain::NumericConfig;
use crate::error::{Error, Result};
use crate::poly::{bisect, Polynomial};
use crate::quadrature::integrate_breakpoints;
use crate::report::{SweepAccumulator, SweepReport};

/// Largest admissible inflection-gap ratio, `1 + sqrt(3)`.
pub const ALPHA_MAX: f64 = 2.732_050_807_568_877;

/// `beta x^4 + gamma x^3 + delta x^2`, non-negative with its global minimum at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenericQuartic {
    beta: f64,
    gamma: f64,
    delta: f64,
}

impl GenericQuartic {
    pub fn new(beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::NotAdmissible(format!("beta must be positive, got {beta}")));
        }
        if !(delta >= 0.0) || !delta.is_finite() || !gamma.is_finite() {
            return Err(Error::NotAdmissible(format!(
                "delta must be non-negative and gamma finite, got gamma = {gamma}, delta = {delta}"
            )));
        }
        // x^2 + (gamma/beta) x + delta/beta >= 0  <=>  gamma^2 <= 4 beta delta.
        let bound = 4.0 * beta * delta;
        if gamma * gamma > bound * (1.0 + 1e-9) {
            return Err(Error::NotAdmissible(format!(
                "global minimum is not at the origin: gamma^2 = {} > 4 beta delta = {bound}",
                gamma * gamma
            )));
        }
        Ok(Self { beta, gamma, delta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eval(&self, x: f64) -> f64 {
        x * x * ((self.beta * x + self.gamma) * x + self.delta)
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(vec![0.0, 0.0, self.delta, self.gamma, self.beta])
    }

    /// `p'' >= 0` everywhere, i.e. `3 gamma^2 <= 8 beta delta`.
    pub fn is_convex(&self) -> bool {
        3.0 * self.gamma * self.gamma <= 8.0 * self.beta * self.delta
    }
}

impl From<&GenericQuartic> for Polynomial {
    fn from(q: &GenericQuartic) -> Self {
        q.polynomial()
    }
}

/// A non-convex admissible quartic written through its inflection points:
/// `p''(x) = B (x - A)(x - (1 + alpha) A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalQuartic {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
}

impl CanonicalQuartic {
    pub fn new(a: f64, b: f64, alpha: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && alpha > 0.0) || !(a.is_finite() && b.is_finite()) {
            return Err(Error::NotAdmissible(format!(
                "need A, B, alpha > 0, got A = {a}, B = {b}, alpha = {alpha}"
            )));
        }
        if alpha > ALPHA_MAX * (1.0 + 1e-12) {
            return Err(Error::NotAdmissible(format!(
                "alpha = {alpha} exceeds 1 + sqrt(3); the quartic would go negative"
            )));
        }
        Ok(Self { a, b, alpha })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (a, al) = (self.a, self.alpha);
        self.b / 12.0 * x * x * (x * x - 2.0 * a * (2.0 + al) * x + 6.0 * a * a * (1.0 + al))
    }

    pub fn to_generic(&self) -> GenericQuartic {
        let (a, b, al) = (self.a, self.b, self.alpha);
        GenericQuartic {
            beta: b / 12.0,
            gamma: -b * a * (2.0 + al) / 6.0,
            delta: b * a * a * (1.0 + al) / 2.0,
        }
    }

    /// `(A, (1 + alpha) A)`.
    pub fn inflection_points(&self) -> (f64, f64) {
        (self.a, (1.0 + self.alpha) * self.a)
    }

    /// Whether `p'` has three real roots (with multiplicity), from the sign of
    /// the discriminant `3 A^2 (3 alpha^2 - 4 alpha - 4)` of its quadratic factor.
    pub fn derivative_has_three_roots(&self) -> bool {
        let al = self.alpha;
        3.0 * self.a * self.a * (3.0 * al * al - 4.0 * al - 4.0) >= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub integral: f64,
    pub envelope: f64,
    pub ratio: f64,
    pub sublevel_measure: f64,
}

/// A quadrature value carried in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogIntegral {
    pub log_value: f64,
    /// Estimated relative error, quadrature plus truncation.
    pub rel_error: f64,
}

impl LogIntegral {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// `∫ exp(-s (p(x) - min p)) dx` for a fixed coercive `p` and varying scale `s`.
///
/// The critical points of `p` are computed once. Each evaluation integrates
/// over the components of `{s (p - min p) <= cutoff}`, split at the critical
/// points so every panel carries a monotone integrand.
#[derive(Debug, Clone)]
pub struct ExpNegIntegral {
    poly: Polynomial,
    derivative: Polynomial,
    critical: Vec<f64>,
    min_value: f64,
}

impl ExpNegIntegral {
    pub fn new(poly: Polynomial) -> Result<Self> {
        if !poly.is_coercive() || poly.coeffs().iter().any(|c| !c.is_finite()) {
            return Err(Error::NonCoercive);
        }
        let derivative = poly.derivative();
        let critical = derivative.real_roots();
        let min_value = critical.iter().map(|&c| poly.eval(c)).fold(f64::INFINITY, f64::min);
        Ok(Self {
            poly,
            derivative,
            critical,
            min_value,
        })
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    pub fn critical_points(&self) -> &[f64] {
        &self.critical
    }

    /// `log ∫ exp(-scale * p(x)) dx`.
    pub fn log_integral(&self, scale: f64, cfg: &NumericConfig) -> LogIntegral {
        let cutoff = cfg.exponent_cutoff;
        let level = self.min_value + cutoff / scale;
        let parts = self.poly.sublevel_intervals(&self.critical, level);
        let min = self.min_value;
        let integrand = |x: f64| (-scale * (self.poly.eval(x) - min)).exp();

        let mut total = 0.0;
        let mut error = 0.0;
        let mut points = Vec::with_capacity(self.critical.len() + 2);
        for &(a, b) in &parts {
            points.clear();
            points.push(a);
            points.extend(self.critical.iter().copied().filter(|&c| c > a && c < b));
            points.push(b);
            let est = integrate_breakpoints(integrand, &points, cfg);
            total += est.value;
            error += est.abs_error;
        }

        // Mass outside the sublevel set: the outer tails decay at least as fast
        // as exp(-cutoff - s p'(end) (x - end)); gaps are bounded by their length.
        let floor = (-cutoff).exp();
        if let (Some(first), Some(last)) = (parts.first(), parts.last()) {
            for end in [first.0, last.1] {
                let slope = (scale * self.derivative.eval(end)).abs();
                if slope > 0.0 {
                    error += floor / slope;
                }
            }
            for w in parts.windows(2) {
                error += floor * (w[1].0 - w[0].1);
            }
        }

        LogIntegral {
            log_value: -scale * min + total.ln(),
            rel_error: error / total,
        }
    }
}

/// `∫ exp(-p(x)) dx` over the real line.
pub fn integrate_exp_neg(poly: &Polynomial, cfg: &NumericConfig) -> Result<f64> {
    Ok(log_integrate_exp_neg(poly, cfg)?.value())
}

pub fn log_integrate_exp_neg(poly: &Polynomial, cfg: &NumericConfig) -> Result<LogIntegral> {
    Ok(ExpNegIntegral::new(poly.clone())?.log_integral(1.0, cfg))
}

/// `[beta^(1/4) + |gamma|^(1/3) + delta^(1/2)]^(-1)`.
pub fn envelope_estimate(q: &GenericQuartic) -> f64 {
    1.0 / (q.beta.powf(0.25) + q.gamma.abs().cbrt() + q.delta.sqrt())
}

pub fn envelope_report(q: &GenericQuartic, cfg: &NumericConfig) -> Result<EnvelopeReport> {
    let poly = q.polynomial();
    let integral = integrate_exp_neg(&poly, cfg)?;
    let envelope = envelope_estimate(q);
    Ok(EnvelopeReport {
        integral,
        envelope,
        ratio: integral / envelope,
        sublevel_measure: sublevel_measure(&poly, 1.0)?,
    })
}

/// Canonical form of a non-convex admissible quartic, reflecting `x -> -x`
/// when needed so the quartic is convex on `x <= 0`. Convex input gives `None`.
pub fn to_canonical(q: &GenericQuartic) -> Option<CanonicalQuartic> {
    // p'' = 12 beta x^2 + 6 gamma x + 2 delta
    let disc = 36.0 * q.gamma * q.gamma - 96.0 * q.beta * q.delta;
    if disc <= 0.0 || q.delta <= 0.0 {
        return None;
    }
    let g = q.gamma.abs();
    let outer = (6.0 * g + disc.sqrt()) / (24.0 * q.beta);
    // The product of the inflection points is delta / (6 beta).
    let inner = q.delta / (6.0 * q.beta * outer);
    let alpha = ((outer - inner) / inner).min(ALPHA_MAX);
    Some(CanonicalQuartic {
        a: inner,
        b: 12.0 * q.beta,
        alpha,
    })
}

/// Total length of `{x : p(x) <= level}`.
pub fn sublevel_measure(poly: &Polynomial, level: f64) -> Result<f64> {
    if !poly.is_coercive() {
        return Err(Error::NonCoercive);
    }
    let critical = poly.derivative().real_roots();
    Ok(poly
        .sublevel_intervals(&critical, level)
        .iter()
        .map(|(a, b)| b - a)
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Right,
    Left,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Right => 1.0,
            Direction::Left => -1.0,
        }
    }
}

/// Distance from `x0` to the point where `p` has risen by 1, moving in
/// `direction`; when `end` is given and `p(end) < p(x0) + 1`, the full length
/// `|end - x0|`.
///
/// Requires `p` convex with `p'` of the direction's sign on the ray (checked on
/// a sample grid).
pub fn band_width(poly: &Polynomial, x0: f64, direction: Direction, end: Option<f64>) -> Result<f64> {
    if !poly.is_coercive() {
        return Err(Error::NonCoercive);
    }
    let sign = direction.sign();
    let target = poly.eval(x0) + 1.0;
    let reach = match end {
        Some(e) => {
            if (e - x0) * sign <= 0.0 {
                return Err(Error::NotMonotone { x0 });
            }
            e
        }
        None => {
            let mut step = 1.0;
            let mut guard = 0;
            while poly.eval(x0 + sign * step) < target {
                step *= 2.0;
                guard += 1;
                if guard > 1100 {
                    return Err(Error::NotMonotone { x0 });
                }
            }
            x0 + sign * step
        }
    };

    let first = poly.derivative();
    let second = first.derivative();
    let scale = 1.0 + first.abs_coefficients().eval(reach.abs().max(x0.abs()));
    const SAMPLES: usize = 64;
    for i in 1..SAMPLES {
        let x = x0 + (reach - x0) * i as f64 / SAMPLES as f64;
        if sign * first.eval(x) < -1e-12 * scale || second.eval(x) < -1e-12 * scale {
            return Err(Error::NotMonotone { x0 });
        }
    }

    if poly.eval(reach) < target {
        return Ok((reach - x0).abs());
    }
    let f = |x: f64| poly.eval(x) - target;
    let (lo, hi) = if sign > 0.0 { (x0, reach) } else { (reach, x0) };
    let root = bisect(&f, lo, hi, f(lo));
    Ok((root - x0).abs())
}

/// Smallest ratio `p(x) / sum |a_k| x^k` over a grid of `(0, a]`.
pub fn bnw_lower_constant_check(poly: &Polynomial, a: f64) -> SweepReport {
    const GRID: usize = 4000;
    let majorant = poly.abs_coefficients();
    let mut acc = SweepAccumulator::new();
    for i in 1..=GRID {
        let x = a * i as f64 / GRID as f64;
        acc.observe(poly.eval(x) / majorant.eval(x), &[("x", x)]);
    }
    acc.finish(|lo, _| lo > 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub a: f64,
    pub integral: f64,
    pub naive_envelope: f64,
    pub ratio: f64,
}

/// `x^2 (x - a)^4` against the degree-six analogue of the quartic envelope.
pub fn counterexample_degree6(a: f64, cfg: &NumericConfig) -> Result<CounterexampleReport> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::NotAdmissible(format!("need a > 1, got {a}")));
    }
    let a2 = a * a;
    let poly = Polynomial::new(vec![0.0, 0.0, a2 * a2, -4.0 * a2 * a, 6.0 * a2, -4.0 * a, 1.0]);
    let integral = integrate_exp_neg(&poly, cfg)?;
    let sum: f64 = poly.coeffs()[2..]
        .iter()
        .enumerate()
        .map(|(i, c)| c.abs().powf(1.0 / (i + 2) as f64))
        .sum();
    let naive_envelope = 1.0 / sum;
    Ok(CounterexampleReport {
        a,
        integral,
        naive_envelope,
        ratio: integral / naive_envelope,
    })
}
