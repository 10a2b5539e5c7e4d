use std::cell::RefCell;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{NumericConfig, PointPair, QuarticCurve};
use crate::error::{Error, Result};
use crate::kernel::absolute::{abs_integrand_eta, abs_kernel_integral, eta_layout, tail_exponent, tau_breakpoints};
use crate::kernel::classify::{classify, Verdict};
use crate::kernel::exponent::exponent_A;
use crate::kernel::n_integral::CenteredN;
use crate::quadrature::integrate_breakpoints;

/// Highest total derivative order accepted by [`szego_derivative_eval`].
pub const MAX_DERIVATIVE_ORDER: u32 = 6;

/// Orders of `d/dz1`, `d/d(conj w1)`, `d/dz2` and `d/d(conj w2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MultiIndex {
    pub i1: u32,
    pub j1: u32,
    pub i2: u32,
    pub j2: u32,
}

impl MultiIndex {
    pub fn new(i1: u32, j1: u32, i2: u32, j2: u32) -> Self {
        Self { i1, j1, i2, j2 }
    }

    pub fn order(&self) -> u32 {
        self.i1 + self.j1 + self.i2 + self.j2
    }

    /// Powers of `eta` brought down by the derivative.
    pub fn eta_power(&self) -> u32 {
        self.i1 + self.j1
    }

    /// `i^i2 (-i)^j2`.
    fn phase(&self) -> Complex64 {
        Complex64::i().powu(self.i2) * (-Complex64::i()).powu(self.j2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    /// Quadrature error plus the bound on the truncated eta tails.
    pub abs_error: f64,
    /// The absolute majorant from the envelope of `N`.
    pub abs_bound: f64,
    pub margin: f64,
}

/// `S(z, w) = ∫∫_{tau > 0} tau exp(eta tau (z1 + conj w1) + i tau (z2 - conj w2)) / N(eta, tau)`,
/// with the overall constant set to 1.
pub fn szego_eval(curve: &QuarticCurve, pair: &PointPair, cfg: &NumericConfig) -> Result<Complex64> {
    Ok(szego_eval_detailed(curve, pair, MultiIndex::default(), cfg)?.value)
}

/// `d^i1/dz1 d^j1/d(conj w1) d^i2/dz2 d^j2/d(conj w2) S(z, w)`.
#[allow(clippy::too_many_arguments)]
pub fn szego_derivative_eval(
    curve: &QuarticCurve,
    pair: &PointPair,
    i1: u32,
    j1: u32,
    i2: u32,
    j2: u32,
    cfg: &NumericConfig,
) -> Result<Complex64> {
    Ok(szego_eval_detailed(curve, pair, MultiIndex::new(i1, j1, i2, j2), cfg)?.value)
}

pub fn szego_eval_detailed(
    curve: &QuarticCurve,
    pair: &PointPair,
    index: MultiIndex,
    cfg: &NumericConfig,
) -> Result<KernelValue> {
    if index.order() > MAX_DERIVATIVE_ORDER {
        return Err(Error::InvalidConfig {
            field: "derivative",
            reason: format!(
                "total order must be at most {MAX_DERIVATIVE_ORDER}, got {}",
                index.order()
            ),
        });
    }
    let cls = classify(curve, pair)?;
    if cls.verdict != Verdict::Converges {
        return Err(Error::NotInConvergenceRegion { margin: cls.margin });
    }

    let (x, r, delta) = (pair.x, pair.r, pair.delta());
    let n = index.eta_power();
    let m = index.order();
    let k = tail_exponent(n, m);
    let abs_bound = abs_kernel_integral(curve, x, r, delta, n, m, cfg)?;

    // Push the eta truncation out until the majorant's tail is negligible.
    let abs_at = |eta: f64| abs_integrand_eta(curve, x, r, delta, n, m, eta);
    let tail = |radius: f64| (abs_at(radius) + abs_at(-radius)) * radius / (k - 1.0);
    let mut radius = eta_layout(curve, x, r, delta, None)?.radius;
    while tail(radius) > 1e-3 * cfg.rel_tol * abs_bound && radius < 1e12 {
        radius *= 2.0;
    }
    let layout = eta_layout(curve, x, r, delta, Some(radius))?;

    let dy = pair.y - pair.s;
    let dt = pair.t - pair.u;
    let phase = index.phase();
    let m1 = m as f64 + 1.0;
    let failure: RefCell<Option<Error>> = RefCell::new(None);

    let integrand = |eta: f64| -> Complex64 {
        let x_total = delta + exponent_A(curve, x, r, eta);
        let centered = match CenteredN::new(curve, eta) {
            Ok(c) => c,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                return Complex64::new(f64::NAN, f64::NAN);
            }
        };
        let omega = dt + eta * dy;
        let pts = tau_breakpoints(x_total, m, cfg.exponent_cutoff, omega);
        let scale = abs_integrand_eta(curve, x, r, delta, 0, m, eta);
        let inner = NumericConfig {
            abs_tol: 1e-3 * cfg.rel_tol * scale,
            ..*cfg
        };
        let est = integrate_breakpoints(
            |tau: f64| {
                let (log_n, _) = centered.log_reduced(tau, cfg);
                let modulus = (m1 * tau.ln() - tau * x_total - log_n).exp();
                Complex64::from_polar(modulus, tau * omega)
            },
            &pts,
            &inner,
        );
        est.value * eta.powi(n as i32)
    };

    let outer = NumericConfig {
        abs_tol: 1e-3 * cfg.rel_tol * abs_bound,
        ..*cfg
    };
    let est = integrate_breakpoints(integrand, &layout.points, &outer);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(KernelValue {
        value: phase * est.value,
        abs_error: est.abs_error + tail(radius),
        abs_bound,
        margin: cls.margin,
    })
}
