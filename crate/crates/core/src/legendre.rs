//! Critical points of `B_eta(lambda) = eta lambda - b(lambda)`, the argmax map
//! `lambda(eta)`, the Legendre transform `b*` and the biconjugate `b**`.

use serde::{Deserialize, Serialize};

use crate::cubic::{solve_depressed, CubicRoots};
use crate::domain::QuarticCurve;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    SingleMax,
    TwoMaxPlusDominant,
    TwoMaxMinusDominant,
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalStructure {
    pub regime: Regime,
    pub lambda_minus: Option<f64>,
    pub lambda_plus: Option<f64>,
    /// The local minimum between the two maxima, when there are two.
    pub lambda_middle: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegendreValue {
    pub eta: f64,
    pub lambda_of_eta: f64,
    pub b_star: f64,
}

/// Roots of `B'_eta = 0`, i.e. `lambda^3 + p lambda - (eta - q) = 0`, classified.
pub fn critical_points(curve: &QuarticCurve, eta: f64) -> CriticalStructure {
    let shift = eta - curve.q();
    if shift == 0.0 {
        let s = curve.sqrt_neg_p();
        return CriticalStructure {
            regime: Regime::Tie,
            lambda_minus: Some(-s),
            lambda_plus: Some(s),
            lambda_middle: Some(0.0),
        };
    }
    match solve_depressed(curve.p(), shift) {
        CubicRoots::One(t) => CriticalStructure {
            regime: Regime::SingleMax,
            lambda_minus: (shift < 0.0).then_some(t),
            lambda_plus: (shift > 0.0).then_some(t),
            lambda_middle: None,
        },
        CubicRoots::Three([lo, mid, hi]) => CriticalStructure {
            regime: if shift > 0.0 {
                Regime::TwoMaxPlusDominant
            } else {
                Regime::TwoMaxMinusDominant
            },
            lambda_minus: Some(lo),
            lambda_plus: Some(hi),
            lambda_middle: Some(mid),
        },
    }
}

/// Location of the global maximum of `B_eta`; at the tie `eta = q` the
/// right-hand choice `+sqrt(-p)` is taken, so the map is right-continuous.
pub fn lambda_of_eta(curve: &QuarticCurve, eta: f64) -> f64 {
    let shift = eta - curve.q();
    if shift == 0.0 {
        return curve.sqrt_neg_p();
    }
    let roots = solve_depressed(curve.p(), shift);
    if shift > 0.0 {
        roots.largest()
    } else {
        roots.smallest()
    }
}

/// `b*(eta) = sup_lambda [eta lambda - b(lambda)]`.
pub fn b_star(curve: &QuarticCurve, eta: f64) -> f64 {
    curve.tilted(eta, lambda_of_eta(curve, eta))
}

pub fn legendre_value(curve: &QuarticCurve, eta: f64) -> LegendreValue {
    let lambda = lambda_of_eta(curve, eta);
    LegendreValue {
        eta,
        lambda_of_eta: lambda,
        b_star: curve.tilted(eta, lambda),
    }
}

/// `b**(xi) = sup_eta [xi eta - b*(eta)]`, the convex envelope of `b`.
///
/// Outside the double tangent, `|xi| >= sqrt(-p)`, the envelope is `b` itself
/// and is returned exactly; inside it is maximized numerically.
pub fn b_star_star(curve: &QuarticCurve, xi: f64) -> Result<f64> {
    if xi.abs() >= curve.sqrt_neg_p() {
        return Ok(curve.b(xi));
    }
    biconjugate_maximizer(curve, xi).map(|(_, value)| value.min(curve.b(xi)))
}

/// Search interval `[-R, R]` for the maximizer of `eta -> xi eta - b*(eta)`.
pub fn biconjugate_bracket(curve: &QuarticCurve, xi: f64) -> f64 {
    (2.0 * curve.q().abs() + 10.0).max(4.0 * (xi.abs() + 1.0).powi(3))
}

/// Maximizer and maximum of the concave map `eta -> xi eta - b*(eta)`.
///
/// The maximizer is also where `A(x, r, .)` attains its infimum when
/// `xi = (x + r) / 2`.
pub fn biconjugate_maximizer(curve: &QuarticCurve, xi: f64) -> Result<(f64, f64)> {
    if !xi.is_finite() {
        return Err(Error::BracketFailure { xi });
    }
    let radius = biconjugate_bracket(curve, xi);
    let objective = |eta: f64| xi * eta - b_star(curve, eta);
    let width = 1e-12 * (1.0 + radius);
    let (eta, value) = golden_max(objective, -radius, radius, width);
    if (eta - (-radius)).abs() <= 2.0 * width || (radius - eta).abs() <= 2.0 * width {
        return Err(Error::BracketFailure { xi });
    }
    // b* has its only kink at q, where the maximizer sits for |xi| < sqrt(-p);
    // golden section converges there only to the bracket width.
    let q = curve.q();
    let at_kink = objective(q);
    if at_kink >= value {
        return Ok((q, at_kink));
    }
    Ok((eta, value))
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, width: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > width {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
        if !(x1 > lo && x2 < hi) {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
