//! Seeded property sweeps over every quantitative estimate, each summarized
//! as one or more [`SweepReport`]s.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{NumericConfig, PointPair, QuarticCurve};
use crate::error::{Error, Result};
use crate::kernel::{
    abs_kernel_integral, asymptotic_A_check, classify, divergence_probe, exponent_A, inf_exponent, local_A_structure,
    n_integral, n_integral_uncentered, sigma_branch,
};
use crate::laplace::{
    counterexample_degree6, envelope_estimate, integrate_exp_neg, sublevel_measure, CanonicalQuartic, GenericQuartic,
    ALPHA_MAX,
};
use crate::legendre::{b_star, b_star_star, lambda_of_eta};
use crate::report::{SweepAccumulator, SweepReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    Envelope,
    Sublevel,
    Legendre,
    NComparability,
    AsymptoticA,
    LocalA,
    Divergence,
    Counterexample6,
    Region,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Envelope,
        Suite::Sublevel,
        Suite::Legendre,
        Suite::NComparability,
        Suite::AsymptoticA,
        Suite::LocalA,
        Suite::Divergence,
        Suite::Counterexample6,
        Suite::Region,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Envelope => "envelope",
            Suite::Sublevel => "sublevel",
            Suite::Legendre => "legendre",
            Suite::NComparability => "n-comparability",
            Suite::AsymptoticA => "asymptoticA",
            Suite::LocalA => "localA",
            Suite::Divergence => "divergence",
            Suite::Counterexample6 => "counterexample6",
            Suite::Region => "region",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidConfig {
                field: "verify.suites",
                reason: format!(
                    "unknown suite {s:?}; expected one of {}",
                    Suite::ALL.map(Suite::name).join(", ")
                ),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random quartics drawn by the envelope and sublevel suites.
    pub samples: usize,
    pub counterexample_a: Vec<f64>,
    /// Required `ratio(a_max) / ratio(a_min)` in the counterexample suite.
    pub counterexample_min_growth: f64,
    pub probe_deltas: Vec<f64>,
    /// Probe values at the smallest delta must exceed this.
    pub probe_floor: f64,
    /// Points per axis of the boundary grid in the region suite.
    pub region_points: usize,
    pub region_rel_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: 1000,
            counterexample_a: vec![2.0, 4.0, 8.0, 16.0],
            counterexample_min_growth: 8.0,
            probe_deltas: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5],
            probe_floor: 1e6,
            region_points: 101,
            region_rel_tol: 1e-5,
        }
    }
}

impl VerifyOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &'static str, reason: &str| {
            Err(Error::InvalidConfig {
                field,
                reason: reason.into(),
            })
        };
        if self.samples == 0 {
            return bad("verify.samples", "must be positive");
        }
        if self.counterexample_a.len() < 2 || self.counterexample_a.iter().any(|a| !(*a > 1.0)) {
            return bad("verify.counterexample_a", "needs at least two values, all > 1");
        }
        if self.probe_deltas.is_empty() || self.probe_deltas.iter().any(|d| !(*d > 0.0)) {
            return bad("verify.probe_deltas", "needs at least one value, all > 0");
        }
        if self.region_points < 2 {
            return bad("verify.region_points", "must be at least 2");
        }
        if !(self.region_rel_tol > 0.0) {
            return bad("verify.region_rel_tol", "must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(flatten)]
    pub report: SweepReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<(&str, SweepReport)>) -> Self {
        let checks: Vec<Check> = checks
            .into_iter()
            .map(|(name, report)| Check {
                name: name.to_string(),
                report,
            })
            .collect();
        Self {
            suite: suite.name().to_string(),
            pass: checks.iter().all(|c| c.report.pass),
            checks,
        }
    }

    pub fn check(&self, name: &str) -> Option<&SweepReport> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.report)
    }
}

pub fn run_suite(suite: Suite, curve: &QuarticCurve, opts: &VerifyOptions, cfg: &NumericConfig) -> Result<SuiteReport> {
    opts.validate()?;
    cfg.validate()?;
    let checks = match suite {
        Suite::Envelope => envelope_suite(opts, cfg)?,
        Suite::Sublevel => sublevel_suite(opts, cfg)?,
        Suite::Legendre => legendre_suite(curve)?,
        Suite::NComparability => n_comparability_suite(curve, cfg)?,
        Suite::AsymptoticA => asymptotic_a_suite(curve, opts)?,
        Suite::LocalA => local_a_suite(curve)?,
        Suite::Divergence => divergence_suite(curve, opts, cfg)?,
        Suite::Counterexample6 => counterexample_suite(opts, cfg)?,
        Suite::Region => region_suite(curve, opts, cfg)?,
    };
    Ok(SuiteReport::new(suite, checks))
}

/// An admissible quartic with `beta` over eight decades. A few samples sit
/// on the boundary cases `delta = 0` and `gamma^2 = 4 beta delta` (double-touch minimum).
pub fn random_quartic(rng: &mut ChaCha8Rng) -> GenericQuartic {
    let beta = 10f64.powf(rng.gen_range(-4.0..=4.0));
    let kind = rng.gen_range(0..20);
    let delta = if kind == 0 {
        0.0
    } else {
        10f64.powf(rng.gen_range(-4.0..=4.0))
    };
    let u = match kind {
        0 => 0.0,
        1 => 1.0,
        2 => -1.0,
        _ => rng.gen_range(-1.0..=1.0),
    };
    let gamma = u * 2.0 * (beta * delta).sqrt();
    // Shrink by one ulp-scale factor so rounding never breaks admissibility.
    GenericQuartic::new(beta, gamma * (1.0 - 1e-15), delta).expect("sampled quartic is admissible")
}

fn quartic_params(q: &GenericQuartic) -> [(&'static str, f64); 3] {
    [("beta", q.beta()), ("gamma", q.gamma()), ("delta", q.delta())]
}

fn envelope_suite(opts: &VerifyOptions, cfg: &NumericConfig) -> Result<Vec<(&'static str, SweepReport)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut ratio = SweepAccumulator::new();
    for _ in 0..opts.samples {
        let q = random_quartic(&mut rng);
        let integral = integrate_exp_neg(&q.polynomial(), cfg)?;
        ratio.observe(integral / envelope_estimate(&q), &quartic_params(&q));
    }

    // p((1 + alpha) A) >= p(A) and p(A) / (B A^4) bounded below.
    let mut inflection = SweepAccumulator::new();
    let mut lower = SweepAccumulator::new();
    for _ in 0..opts.samples {
        let a = 10f64.powf(rng.gen_range(-2.0..=2.0));
        let b = 10f64.powf(rng.gen_range(-2.0..=2.0));
        let alpha = rng.gen_range(1e-6..=ALPHA_MAX);
        let c = CanonicalQuartic::new(a, b, alpha)?;
        let (a1, a2) = c.inflection_points();
        let params = [("A", a), ("B", b), ("alpha", alpha)];
        inflection.observe(c.eval(a2) / c.eval(a1), &params);
        lower.observe(c.eval(a1) / (b * a.powi(4)), &params);
    }

    // p' has three real roots iff alpha >= 2.
    let mut extrema = SweepAccumulator::new();
    for i in 1..=1000 {
        let alpha = ALPHA_MAX * i as f64 / 1000.0;
        let c = CanonicalQuartic::new(1.0, 12.0, alpha)?;
        let roots = c.to_generic().polynomial().derivative().real_roots().len();
        let predicted = c.derivative_has_three_roots();
        let agrees = (alpha - 2.0).abs() < 1e-3 || predicted == (alpha >= 2.0) && (roots == 3) == (alpha > 2.0);
        extrema.observe(if agrees { 1.0 } else { 0.0 }, &[("alpha", alpha)]);
    }

    Ok(vec![
        ("ratio", ratio.finish(|lo, hi| lo > 0.0 && hi / lo <= 100.0)),
        ("canonical_inflection", inflection.finish(|lo, _| lo >= 1.0 - 1e-12)),
        ("canonical_lower_constant", lower.finish(|lo, _| lo > 0.0)),
        ("three_extrema", extrema.finish(|lo, _| lo == 1.0)),
    ])
}

fn sublevel_suite(opts: &VerifyOptions, cfg: &NumericConfig) -> Result<Vec<(&'static str, SweepReport)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut acc = SweepAccumulator::new();
    for _ in 0..opts.samples {
        let q = random_quartic(&mut rng);
        let p = q.polynomial();
        let ratio = integrate_exp_neg(&p, cfg)? / sublevel_measure(&p, 1.0)?;
        acc.observe(ratio, &quartic_params(&q));
    }
    let floor = (-1.0f64).exp();
    Ok(vec![("ratio", acc.finish(|lo, hi| lo >= floor && hi.is_finite()))])
}

fn legendre_suite(curve: &QuarticCurve) -> Result<Vec<(&'static str, SweepReport)>> {
    const GRID: usize = 10_000;
    let (lo, hi) = (curve.q() - 20.0, curve.q() + 20.0);
    let eta = |i: usize| lo + (hi - lo) * i as f64 / (GRID - 1) as f64;

    let mut monotone = SweepAccumulator::new();
    for i in 1..GRID {
        let step = lambda_of_eta(curve, eta(i)) - lambda_of_eta(curve, eta(i - 1));
        monotone.observe(step, &[("eta", eta(i))]);
    }

    let mut derivative = SweepAccumulator::new();
    let h = 1e-6;
    for i in 0..GRID {
        let e = eta(i);
        if (e - curve.q()).abs() < 1e-4 {
            continue;
        }
        let fd = (lambda_of_eta(curve, e + h) - lambda_of_eta(curve, e - h)) / (2.0 * h);
        let l = lambda_of_eta(curve, e);
        derivative.observe(fd * curve.b_second(l), &[("eta", e)]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut convex = SweepAccumulator::new();
    for _ in 0..GRID {
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(lo..hi);
        let gap = 0.5 * (b_star(curve, a) + b_star(curve, b)) - b_star(curve, 0.5 * (a + b));
        convex.observe(gap, &[("eta_a", a), ("eta_b", b)]);
    }

    let mut asymptotic = SweepAccumulator::new();
    for e in [1e9, -1e9] {
        let ratio = lambda_of_eta(curve, e) / (e - curve.q()).cbrt();
        asymptotic.observe(ratio, &[("eta", e)]);
    }

    // b** against the double-tangent hull.
    let s = curve.sqrt_neg_p();
    let mut hull = SweepAccumulator::new();
    for i in 0..=400 {
        let xi = -3.0 * s + 6.0 * s * i as f64 / 400.0;
        let want = if xi.abs() >= s {
            curve.b(xi)
        } else {
            curve.q() * xi - curve.p() * curve.p() / 4.0
        };
        let got = b_star_star(curve, xi)?;
        hull.observe((got - want).abs() / (1.0 + want.abs()), &[("xi", xi)]);
    }

    Ok(vec![
        ("lambda_monotone", monotone.finish(|lo, _| lo >= 0.0)),
        (
            "lambda_derivative",
            derivative.finish(|lo, hi| lo >= 1.0 - 1e-5 && hi <= 1.0 + 1e-5),
        ),
        ("b_star_midpoint_convex", convex.finish(|lo, _| lo >= -1e-12)),
        (
            "lambda_asymptotic",
            asymptotic.finish(|lo, hi| lo >= 0.99 && hi <= 1.01),
        ),
        ("biconjugate_hull", hull.finish(|_, hi| hi <= 1e-9)),
    ])
}

/// `eta` in `[-50, 50]` (with `q`) crossed with `tau` log-spaced over `[1e-2, 1e3]`.
pub fn n_comparability_grid(curve: &QuarticCurve) -> Vec<(f64, f64)> {
    let mut etas: Vec<f64> = (0..=20).map(|i| -50.0 + 5.0 * i as f64).collect();
    etas.push(curve.q());
    let taus: Vec<f64> = (0..=20).map(|j| 10f64.powf(-2.0 + 0.25 * j as f64)).collect();
    etas.iter().flat_map(|&e| taus.iter().map(move |&t| (e, t))).collect()
}

fn n_comparability_suite(curve: &QuarticCurve, cfg: &NumericConfig) -> Result<Vec<(&'static str, SweepReport)>> {
    let mut ratio = SweepAccumulator::new();
    for (eta, tau) in n_comparability_grid(curve) {
        let n = n_integral(curve, eta, tau, cfg)?;
        ratio.observe(n.ratio(), &[("eta", eta), ("tau", tau)]);
    }
    let mut routes = SweepAccumulator::new();
    for i in 0..5 {
        for j in 0..5 {
            let eta = -10.0 + 5.0 * i as f64 + 0.37;
            let tau = 10f64.powi(j - 2);
            let a = n_integral(curve, eta, tau, cfg)?;
            let b = n_integral_uncentered(curve, eta, tau, cfg)?;
            routes.observe((a.log_value - b.log_value).exp(), &[("eta", eta), ("tau", tau)]);
        }
    }
    Ok(vec![
        ("ratio", ratio.finish(|lo, hi| lo > 0.0 && hi / lo <= 100.0)),
        (
            "centered_vs_uncentered",
            routes.finish(|lo, hi| lo >= 1.0 - 1e-6 && hi <= 1.0 + 1e-6),
        ),
    ])
}

fn asymptotic_a_suite(curve: &QuarticCurve, opts: &VerifyOptions) -> Result<Vec<(&'static str, SweepReport)>> {
    let s = curve.sqrt_neg_p();
    let mut limit = SweepAccumulator::new();
    for (x, r) in [(0.0, 0.0), (3.0, -7.0), (2.0 * s, 2.0 * s), (s, -s)] {
        let check = asymptotic_A_check(curve, x, r);
        let (pos, neg) = check.limit();
        limit.observe(pos, &[("x", x), ("r", r), ("eta", 1e9)]);
        limit.observe(neg, &[("x", x), ("r", r), ("eta", -1e9)]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut nonneg = SweepAccumulator::new();
    for _ in 0..100_000 {
        let x = rng.gen_range(-5.0..5.0);
        let r = rng.gen_range(-5.0..5.0);
        let eta = curve.q() + rng.gen_range(-200.0..200.0);
        nonneg.observe(exponent_A(curve, x, r, eta), &[("x", x), ("r", r), ("eta", eta)]);
    }

    // min over an eta grid against b(x) + b(r) - 2 b**((x + r) / 2).
    let mut infimum = SweepAccumulator::new();
    for _ in 0..20 {
        let x = rng.gen_range(-3.0..3.0);
        let r = rng.gen_range(-3.0..3.0);
        let (eta_star, _) = inf_exponent(curve, x, r)?;
        let want = curve.b(x) + curve.b(r) - 2.0 * b_star_star(curve, 0.5 * (x + r))?;
        let grid_min = (0..=20_000)
            .map(|i| eta_star - 1.0 + 2.0 * i as f64 / 20_000.0)
            .map(|eta| exponent_A(curve, x, r, eta))
            .fold(f64::INFINITY, f64::min);
        infimum.observe((grid_min - want).abs(), &[("x", x), ("r", r)]);
    }

    Ok(vec![
        ("ratio_at_1e9", limit.finish(|lo, hi| lo >= 1.485 && hi <= 1.515)),
        ("A_nonnegative", nonneg.finish(|lo, _| lo >= -1e-12)),
        ("inf_A_identity", infimum.finish(|_, hi| hi <= 1e-6)),
    ])
}

fn local_a_suite(curve: &QuarticCurve) -> Result<Vec<(&'static str, SweepReport)>> {
    let s = curve.sqrt_neg_p();
    let q = curve.q();
    let grid: Vec<f64> = (0..=4000).map(|i| q - 100.0 + 0.05 * i as f64).collect();
    Ok(vec![
        ("diagonal", local_A_structure(curve, 2.0 * s, 2.0 * s, &grid)?),
        ("edge_plus", local_A_structure(curve, s, s, &grid)?),
        ("edge_minus", local_A_structure(curve, -s, -s, &grid)?),
        ("antidiagonal", local_A_structure(curve, s, -s, &grid)?),
    ])
}

fn divergence_suite(
    curve: &QuarticCurve,
    opts: &VerifyOptions,
    cfg: &NumericConfig,
) -> Result<Vec<(&'static str, SweepReport)>> {
    let s = curve.sqrt_neg_p();
    let mut out = Vec::new();
    for (name, x, r) in [("probe_diagonal", 2.0 * s, 2.0 * s), ("probe_antidiagonal", s, -s)] {
        let probe = divergence_probe(curve, x, r, &opts.probe_deltas, cfg)?;
        let mut acc = SweepAccumulator::new();
        for (d, v) in probe.deltas.iter().zip(&probe.s_values) {
            acc.observe(*v, &[("delta", *d)]);
        }
        let last = *probe.s_values.last().unwrap();
        let floor = opts.probe_floor;
        let mut report = acc.finish(|_, _| probe.increasing && last > floor);
        report
            .worst_case_params
            .insert("fitted_exponent".into(), probe.fitted_exponent);
        out.push((name, report));
    }

    // A diagonal point with a finite boundary integral next to an
    // off-diagonal one with a divergent integral.
    let mut contrast = SweepAccumulator::new();
    let finite = abs_kernel_integral(curve, 0.0, 0.0, 0.0, 0, 0, cfg)?;
    let divergent = abs_kernel_integral(curve, s, -s, 0.0, 0, 0, cfg)?;
    contrast.observe(finite, &[("x", 0.0), ("r", 0.0)]);
    let mut report = contrast.finish(|lo, _| lo.is_finite() && divergent.is_infinite());
    report.worst_case_params.insert("off_diagonal_value".into(), divergent);
    out.push(("contrast", report));
    Ok(out)
}

fn counterexample_suite(opts: &VerifyOptions, cfg: &NumericConfig) -> Result<Vec<(&'static str, SweepReport)>> {
    let mut a_values = opts.counterexample_a.clone();
    a_values.sort_by(f64::total_cmp);
    let mut ratios = Vec::with_capacity(a_values.len());
    let mut acc = SweepAccumulator::new();
    for &a in &a_values {
        let r = counterexample_degree6(a, cfg)?;
        acc.observe(r.ratio, &[("a", a)]);
        ratios.push(r.ratio);
    }
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let growth = ratios[ratios.len() - 1] / ratios[0];
    let min_growth = opts.counterexample_min_growth;
    let mut report = acc.finish(|_, _| increasing && growth >= min_growth);
    report.worst_case_params.insert("growth".into(), growth);
    Ok(vec![("ratio", report)])
}

/// Boundary grid over `[-2 sqrt(-p), 2 sqrt(-p)]^2`, which contains `±sqrt(-p)`
/// exactly when the point count is `4j + 1`.
pub fn region_grid(curve: &QuarticCurve, points: usize) -> Vec<f64> {
    let s = curve.sqrt_neg_p();
    let (lo, hi) = (-2.0 * s, 2.0 * s);
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn region_suite(
    curve: &QuarticCurve,
    opts: &VerifyOptions,
    cfg: &NumericConfig,
) -> Result<Vec<(&'static str, SweepReport)>> {
    let loose = cfg.with_rel_tol(opts.region_rel_tol);
    let grid = region_grid(curve, opts.region_points);
    let mut margins = SweepAccumulator::new();
    let mut integrals = SweepAccumulator::new();
    let mut sigma = SweepAccumulator::new();
    for &x in &grid {
        for &r in &grid {
            let params = [("x", x), ("r", r)];
            let cls = classify(curve, &PointPair::boundary(x, r))?;
            if sigma_branch(curve, x, r).is_some() {
                sigma.observe(cls.margin, &params);
            } else {
                margins.observe(cls.margin, &params);
                integrals.observe(abs_kernel_integral(curve, x, r, 0.0, 0, 0, &loose)?, &params);
            }
        }
    }
    Ok(vec![
        ("non_sigma_margin", margins.finish(|lo, _| lo > 0.0)),
        (
            "non_sigma_abs_integral",
            integrals.finish(|lo, hi| lo > 0.0 && hi.is_finite()),
        ),
        ("sigma_margin", sigma.finish(|_, hi| hi <= 1e-8)),
    ])
}
