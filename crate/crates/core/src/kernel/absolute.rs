use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::domain::{NumericConfig, PointPair, QuarticCurve};
use crate::error::{Error, Result};
use crate::kernel::classify::{classify, sigma_branch};
use crate::kernel::exponent::{exponent_A, inf_exponent};
use crate::kernel::n_integral::CenteredN;
use crate::legendre::lambda_of_eta;
use crate::quadrature::integrate_breakpoints;

/// Exponents `a` of the three envelope pieces `tau^a`, `tau^(1/3)|lambda|^(1/3)`
/// and `tau^(1/2)(3 lambda^2 + p)^(1/2)`.
const PIECES: [f64; 3] = [0.25, 1.0 / 3.0, 0.5];

/// Decay rate `k` of the absolute integrand, `|eta|^(-k)` with `k = 3 + 4m/3 - n`.
pub fn tail_exponent(n: u32, m: u32) -> f64 {
    3.0 + 4.0 * m as f64 / 3.0 - n as f64
}

/// `∫_0^∞ tau^(m+1) exp(-tau X) D(eta, tau) d tau` in closed form.
fn envelope_tau_integral(curve: &QuarticCurve, lambda: f64, x_total: f64, m: u32) -> f64 {
    let coeffs = [1.0, lambda.abs().cbrt(), curve.b_second(lambda).max(0.0).sqrt()];
    let ln_x = x_total.ln();
    PIECES
        .iter()
        .zip(coeffs)
        .map(|(&a, c)| {
            let s = m as f64 + 2.0 + a;
            c * (ln_gamma(s) - s * ln_x).exp()
        })
        .sum()
}

/// The tau-integrated absolute integrand at a single `eta`, with `1/N`
/// replaced by its envelope:
/// `|eta|^n sum_a c_a(eta) Gamma(m + 2 + a) / (delta + A)^(m + 2 + a)`.
///
/// Returns `+inf` when `delta + A <= 0`.
pub fn abs_integrand_eta(curve: &QuarticCurve, x: f64, r: f64, delta: f64, n: u32, m: u32, eta: f64) -> f64 {
    let x_total = delta + exponent_A(curve, x, r, eta);
    if !(x_total > 0.0) {
        return f64::INFINITY;
    }
    let lambda = lambda_of_eta(curve, eta);
    eta.abs().powi(n as i32) * envelope_tau_integral(curve, lambda, x_total, m)
}

/// Breakpoints in tau for `tau^(m+1) exp(-tau X) / N`: geometric around the
/// peak `(m + 3/2) / X`, then uniform steps of half a period when the phase
/// `omega tau` winds more than once before the cutoff.
pub(crate) fn tau_breakpoints(x_total: f64, m: u32, cutoff: f64, omega: f64) -> Vec<f64> {
    let peak = (m as f64 + 1.5) / x_total;
    let tau_max = (cutoff + 4.0 * (m as f64 + 2.0)) / x_total;
    let mut pts = Vec::with_capacity(32);
    pts.push(0.0);
    for j in (1..=10).rev() {
        pts.push(peak * 0.5f64.powi(j));
    }
    let mut t = peak;
    while t < tau_max {
        pts.push(t);
        t *= 2.0;
    }
    pts.push(tau_max);
    let turns = (omega.abs() * tau_max / std::f64::consts::PI).ceil();
    if turns > 2.0 {
        let count = turns.min(4000.0) as usize;
        pts.extend((1..count).map(|i| tau_max * i as f64 / count as f64));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
    }
    pts
}

/// The exact-N counterpart of [`abs_integrand_eta`]: the tau integral is done
/// by quadrature against `N(eta, tau)` itself.
#[allow(clippy::too_many_arguments)]
pub fn abs_integrand_eta_exact(
    curve: &QuarticCurve,
    x: f64,
    r: f64,
    delta: f64,
    n: u32,
    m: u32,
    eta: f64,
    cfg: &NumericConfig,
) -> Result<f64> {
    let x_total = delta + exponent_A(curve, x, r, eta);
    if !(x_total > 0.0) {
        return Ok(f64::INFINITY);
    }
    let centered = CenteredN::new(curve, eta)?;
    let pts = tau_breakpoints(x_total, m, cfg.exponent_cutoff, 0.0);
    let scale = envelope_tau_integral(curve, centered.lambda0(), x_total, m);
    let inner = NumericConfig {
        abs_tol: 1e-3 * cfg.rel_tol * scale,
        ..*cfg
    };
    let m1 = m as f64 + 1.0;
    let est = integrate_breakpoints(
        |tau: f64| {
            let (log_n, _) = centered.log_reduced(tau, cfg);
            (m1 * tau.ln() - tau * x_total - log_n).exp()
        },
        &pts,
        &inner,
    );
    Ok(eta.abs().powi(n as i32) * est.value)
}

/// Where the mass in `eta` sits for a given pair: graded breakpoints around
/// the minimizer of `A`, plus the points where `A` loses smoothness.
#[derive(Debug, Clone)]
pub(crate) struct EtaLayout {
    pub a_star: f64,
    pub points: Vec<f64>,
    pub radius: f64,
}

pub(crate) fn default_radius(curve: &QuarticCurve, x: f64, r: f64, delta: f64, eta_star: f64) -> f64 {
    let spread = 4.0 * (x.abs() + r.abs()).powi(3);
    let q = curve.q().abs();
    100f64
        .max(2.0 * eta_star.abs() + 10.0)
        .max(2.0 * q + 10.0)
        .max(spread)
        .max((100.0 * (1.0 + delta)).powf(0.75))
}

pub(crate) fn eta_layout(curve: &QuarticCurve, x: f64, r: f64, delta: f64, radius: Option<f64>) -> Result<EtaLayout> {
    let (eta_star, a_star) = inf_exponent(curve, x, r)?;
    let radius = radius.unwrap_or_else(|| default_radius(curve, x, r, delta, eta_star));
    let gap = delta + a_star;
    let mut points = vec![-radius, eta_star, radius];

    if gap > 0.0 {
        for sign in [-1.0, 1.0] {
            // A is convex: double until it has risen by the gap.
            let mut w = 1e-12 * (1.0 + eta_star.abs());
            while w < radius && exponent_A(curve, x, r, eta_star + sign * w) - a_star < gap {
                w *= 2.0;
            }
            while w < radius {
                points.push(eta_star + sign * w);
                w *= 2.0;
            }
        }
    }
    for extra in [curve.q(), curve.b_prime(x), curve.b_prime(r)] {
        if extra.abs() < radius {
            points.push(extra);
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * (1.0 + b.abs()));
    Ok(EtaLayout { a_star, points, radius })
}

fn check_delta(delta: f64) -> Result<()> {
    if delta >= 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidPoint(format!(
            "delta must be non-negative and finite, got {delta}"
        )))
    }
}

/// `+inf` when the boundary integral is known to diverge: singular pairs at
/// `delta = 0`, or a tail that is not integrable.
fn known_divergent(curve: &QuarticCurve, x: f64, r: f64, delta: f64, n: u32, m: u32) -> Result<bool> {
    check_delta(delta)?;
    if tail_exponent(n, m) <= 1.0 {
        return Ok(true);
    }
    if delta == 0.0 {
        return Ok(classify(curve, &PointPair::boundary(x, r))?.verdict.is_singular());
    }
    Ok(false)
}

fn integrate_eta<F: FnMut(f64) -> f64>(mut f: F, layout: &EtaLayout, k: f64, cfg: &NumericConfig) -> f64 {
    let est = integrate_breakpoints(&mut f, &layout.points, cfg);
    // Power-law tails beyond the radius: ∫_R^∞ f(R) (eta/R)^(-k) = f(R) R / (k - 1).
    let radius = layout.radius;
    let tail = (f(radius) + f(-radius)) * radius / (k - 1.0);
    est.value + tail
}

/// `∫ abs_integrand_eta d eta`, the majorant of the kernel integral with
/// `n` powers of `eta` and `m` extra powers of `tau`.
pub fn abs_kernel_integral(
    curve: &QuarticCurve,
    x: f64,
    r: f64,
    delta: f64,
    n: u32,
    m: u32,
    cfg: &NumericConfig,
) -> Result<f64> {
    if known_divergent(curve, x, r, delta, n, m)? {
        return Ok(f64::INFINITY);
    }
    let layout = eta_layout(curve, x, r, delta, None)?;
    if !(delta + layout.a_star > 0.0) {
        return Ok(f64::INFINITY);
    }
    let f = |eta: f64| abs_integrand_eta(curve, x, r, delta, n, m, eta);
    Ok(integrate_eta(f, &layout, tail_exponent(n, m), cfg))
}

/// [`abs_kernel_integral`] with the exact `N` in place of its envelope.
pub fn abs_kernel_integral_exact(
    curve: &QuarticCurve,
    x: f64,
    r: f64,
    delta: f64,
    n: u32,
    m: u32,
    cfg: &NumericConfig,
) -> Result<f64> {
    if known_divergent(curve, x, r, delta, n, m)? {
        return Ok(f64::INFINITY);
    }
    let layout = eta_layout(curve, x, r, delta, None)?;
    if !(delta + layout.a_star > 0.0) {
        return Ok(f64::INFINITY);
    }
    let mut failure = None;
    let f = |eta: f64| match abs_integrand_eta_exact(curve, x, r, delta, n, m, eta, cfg) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let value = integrate_eta(f, &layout, tail_exponent(n, m), cfg);
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceProbe {
    /// Descending.
    pub deltas: Vec<f64>,
    pub s_values: Vec<f64>,
    /// Least-squares slope of `log S` against `log delta`.
    pub fitted_exponent: f64,
    pub increasing: bool,
}

/// `abs_kernel_integral` with `n = m = 0` along `delta -> 0+` at a singular pair.
pub fn divergence_probe(
    curve: &QuarticCurve,
    x: f64,
    r: f64,
    deltas: &[f64],
    cfg: &NumericConfig,
) -> Result<DivergenceProbe> {
    if sigma_branch(curve, x, r).is_none() {
        return Err(Error::NotSingularPair { x, r });
    }
    if deltas.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(Error::InvalidPoint("probe deltas must be positive and finite".into()));
    }
    let mut deltas = deltas.to_vec();
    deltas.sort_by(|a, b| b.total_cmp(a));
    let s_values = deltas
        .iter()
        .map(|&d| abs_kernel_integral(curve, x, r, d, 0, 0, cfg))
        .collect::<Result<Vec<_>>>()?;
    let increasing = s_values.windows(2).all(|w| w[1] > w[0]);
    Ok(DivergenceProbe {
        fitted_exponent: log_log_slope(&deltas, &s_values),
        deltas,
        s_values,
        increasing,
    })
}

pub(crate) fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return f64::NAN;
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    fn curve() -> QuarticCurve {
        QuarticCurve::new(-1.0, 0.0).unwrap()
    }

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    #[test]
    fn gamma_table_at_origin() {
        // delta + A = 1 at eta = 0 for x = r = 0 with delta = 1/2.
        let got = abs_integrand_eta(&curve(), 0.0, 0.0, 0.5, 0, 0, 0.0);
        let want = gamma(2.25) + gamma(7.0 / 3.0) + 2f64.sqrt() * gamma(2.5);
        assert!((got - want).abs() < 1e-13 * want);
    }

    #[test]
    fn pole_gives_infinity() {
        assert_eq!(abs_integrand_eta(&curve(), 1.0, 1.0, 0.0, 0, 0, 0.0), f64::INFINITY);
    }

    #[test]
    fn tail_law() {
        for &(n, m) in &[(0u32, 0u32), (1, 1), (0, 2)] {
            let k = tail_exponent(n, m);
            let scaled: Vec<f64> = [1e3, 1e4, 1e5, 1e6]
                .iter()
                .flat_map(|&e: &f64| [e, -e])
                .map(|e| abs_integrand_eta(&curve(), 0.5, -0.2, 0.1, n, m, e) * e.abs().powf(k))
                .collect();
            let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = scaled.iter().cloned().fold(0.0, f64::max);
            assert!(
                lo > 0.0 && hi.is_finite() && hi / lo < 2.0,
                "(n, m) = ({n}, {m}): {scaled:?}"
            );
        }
    }

    /// Trapezoid on a sinh-mapped grid, independent of the breakpoint layout.
    fn mapped_oracle(x: f64, r: f64, delta: f64, n: u32, m: u32) -> f64 {
        let (lo, hi, steps) = (-30.0, 30.0, 600_000);
        let h = (hi - lo) / steps as f64;
        let mut sum = 0.0;
        for i in 0..=steps {
            let v: f64 = lo + h * i as f64;
            let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
            let eta = 0.01 * v.sinh();
            sum += w * 0.01 * v.cosh() * abs_integrand_eta(&curve(), x, r, delta, n, m, eta);
        }
        sum * h
    }

    #[test]
    fn integral_matches_mapped_trapezoid() {
        for &(x, r, delta, n, m) in &[
            (0.0, 0.0, 0.0, 0u32, 0u32),
            (0.4, -1.3, 0.2, 1, 2),
            (2.0, 2.0, 0.05, 0, 0),
        ] {
            let got = abs_kernel_integral(&curve(), x, r, delta, n, m, &cfg()).unwrap();
            let want = mapped_oracle(x, r, delta, n, m);
            assert!((got - want).abs() < 1e-6 * want, "({x}, {r}, {delta}): {got} vs {want}");
        }
    }

    #[test]
    fn singular_pairs_diverge() {
        assert!(abs_kernel_integral(&curve(), 2.0, 2.0, 0.0, 0, 0, &cfg())
            .unwrap()
            .is_infinite());
        assert!(abs_kernel_integral(&curve(), 1.0, -1.0, 0.0, 0, 0, &cfg())
            .unwrap()
            .is_infinite());
        assert!(abs_kernel_integral(&curve(), 0.0, 0.0, 0.0, 0, 0, &cfg())
            .unwrap()
            .is_finite());
    }

    #[test]
    fn monotone_in_delta() {
        let a = abs_kernel_integral(&curve(), 2.0, 2.0, 0.1, 0, 0, &cfg()).unwrap();
        let b = abs_kernel_integral(&curve(), 2.0, 2.0, 0.01, 0, 0, &cfg()).unwrap();
        assert!(a < b);
    }

    #[test]
    fn interior_pairs_converge_for_all_orders() {
        for m in 0..=4u32 {
            for n in 0..=m {
                let v = abs_kernel_integral(&curve(), 0.7, -2.1, 0.3, n, m, &cfg()).unwrap();
                assert!(v.is_finite() && v > 0.0, "(n, m) = ({n}, {m})");
            }
        }
    }

    #[test]
    fn exact_n_is_comparable_to_envelope() {
        let c = cfg().with_rel_tol(1e-6);
        for &eta in &[-20.0, -1.0, 0.0, 0.3, 4.0, 60.0] {
            let env = abs_integrand_eta(&curve(), 0.5, 0.5, 0.2, 0, 1, eta);
            let exact = abs_integrand_eta_exact(&curve(), 0.5, 0.5, 0.2, 0, 1, eta, &c).unwrap();
            let ratio = exact / env;
            assert!(ratio > 0.05 && ratio < 20.0, "eta {eta}: {ratio}");
        }
    }

    #[test]
    fn probe_rejects_regular_pair() {
        assert_eq!(
            divergence_probe(&curve(), 0.0, 0.0, &[0.1], &cfg()),
            Err(Error::NotSingularPair { x: 0.0, r: 0.0 })
        );
    }

    #[test]
    fn probes_blow_up() {
        let deltas = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];
        for &(x, r) in &[(2.0, 2.0), (1.0, -1.0)] {
            let probe = divergence_probe(&curve(), x, r, &deltas, &cfg()).unwrap();
            assert!(probe.increasing, "{probe:?}");
            assert!(probe.fitted_exponent < -1.0, "{probe:?}");
        }
    }
}
