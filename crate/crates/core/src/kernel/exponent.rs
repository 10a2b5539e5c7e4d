use serde::{Deserialize, Serialize};

use crate::domain::QuarticCurve;
use crate::error::{Error, Result};
use crate::legendre::{b_star, biconjugate_maximizer, lambda_of_eta};
use crate::report::{SweepAccumulator, SweepReport};

/// `A(x, r, eta) = b(x) + b(r) - eta (x + r) + 2 b*(eta)`, which is non-negative.
#[allow(non_snake_case)]
pub fn exponent_A(curve: &QuarticCurve, x: f64, r: f64, eta: f64) -> f64 {
    let (bx, br, bs) = (curve.b(x), curve.b(r), b_star(curve, eta));
    let linear = eta * (x + r);
    let a = bx + br - linear + 2.0 * bs;
    let scale = 1.0 + bx.abs() + br.abs() + linear.abs() + 2.0 * bs.abs();
    if a < 0.0 && a > -1e-12 * scale {
        0.0
    } else {
        a
    }
}

/// `(eta*, min A)`: the infimum over `eta` is `b(x) + b(r) - 2 b**((x + r) / 2)`,
/// attained where the biconjugate search at the midpoint peaks.
pub fn inf_exponent(curve: &QuarticCurve, x: f64, r: f64) -> Result<(f64, f64)> {
    let (eta, _) = biconjugate_maximizer(curve, 0.5 * (x + r))?;
    Ok((eta, exponent_A(curve, x, r, eta)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticACheck {
    pub etas: Vec<f64>,
    /// `A / eta^(4/3)` at `+eta`.
    pub positive: Vec<f64>,
    /// `A / |eta|^(4/3)` at `-eta`.
    pub negative: Vec<f64>,
}

impl AsymptoticACheck {
    /// Ratios at the largest `|eta|`, both signs.
    pub fn limit(&self) -> (f64, f64) {
        (*self.positive.last().unwrap(), *self.negative.last().unwrap())
    }
}

/// `A / |eta|^(4/3)` at `|eta| = 1e3, 1e6, 1e9`; tends to 3/2.
#[allow(non_snake_case)]
pub fn asymptotic_A_check(curve: &QuarticCurve, x: f64, r: f64) -> AsymptoticACheck {
    let etas = vec![1e3, 1e6, 1e9];
    let ratio = |eta: f64| exponent_A(curve, x, r, eta) / eta.abs().powf(4.0 / 3.0);
    AsymptoticACheck {
        positive: etas.iter().map(|&e| ratio(e)).collect(),
        negative: etas.iter().map(|&e| ratio(-e)).collect(),
        etas,
    }
}

/// The three ways a boundary pair can sit in the singular set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaCase {
    /// `x = r`, `|x| > sqrt(-p)`.
    Diagonal,
    /// `x = r = ±sqrt(-p)`.
    DiagonalEdge,
    /// `x = -r`, `|x| = sqrt(-p)`.
    Antidiagonal,
}

pub(crate) fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

pub fn sigma_case(curve: &QuarticCurve, x: f64, r: f64) -> Result<SigmaCase> {
    let s = curve.sqrt_neg_p();
    let on_edge = |v: f64| same(v.abs(), s);
    if same(x, r) && on_edge(x) {
        Ok(SigmaCase::DiagonalEdge)
    } else if same(x, r) && x.abs() > s {
        Ok(SigmaCase::Diagonal)
    } else if same(x, -r) && on_edge(x) && on_edge(r) {
        Ok(SigmaCase::Antidiagonal)
    } else {
        Err(Error::WrongCase { x, r })
    }
}

/// Bounds of `A` against its model vanishing profile near the zero `eta0`.
///
/// Diagonal pairs compare against `(eta - eta0)^2 (1 + |eta|)^(-2/3)` with
/// `eta0 = b'(x)`; at `x = ±sqrt(-p)` only the half-line on the side of `x`
/// is used. Antidiagonal pairs compare against `|eta - q| (1 + |eta|)^(1/3)`.
/// Grid points within `1e-4 (1 + |eta0|)` of `eta0` are skipped, since the
/// ratio there is dominated by roundoff in `A`.
#[allow(non_snake_case)]
pub fn local_A_structure(curve: &QuarticCurve, x: f64, r: f64, eta_grid: &[f64]) -> Result<SweepReport> {
    let case = sigma_case(curve, x, r)?;
    let q = curve.q();
    let eta0 = match case {
        SigmaCase::Diagonal => curve.b_prime(x),
        SigmaCase::DiagonalEdge | SigmaCase::Antidiagonal => q,
    };
    let exclusion = 1e-4 * (1.0 + eta0.abs());
    let mut acc = SweepAccumulator::new();
    for &eta in eta_grid {
        if (eta - eta0).abs() < exclusion {
            continue;
        }
        let model = match case {
            SigmaCase::Diagonal => (eta - eta0).powi(2) * (1.0 + eta.abs()).powf(-2.0 / 3.0),
            SigmaCase::DiagonalEdge => {
                if (eta - q) * x < 0.0 {
                    continue;
                }
                (eta - q).powi(2) * (1.0 + eta.abs()).powf(-2.0 / 3.0)
            }
            SigmaCase::Antidiagonal => (eta - q).abs() * (1.0 + eta.abs()).cbrt(),
        };
        acc.observe(exponent_A(curve, x, r, eta) / model, &[("eta", eta)]);
    }
    Ok(acc.finish(|lo, hi| lo > 0.0 && hi.is_finite()))
}

/// `A(x, x, eta)` in factored form, `(x - l)^2 (x^2 + 2 l x + 3 l^2 + 2p) / 2`
/// with `l = lambda(eta)`.
pub fn diagonal_a_factored(curve: &QuarticCurve, x: f64, eta: f64) -> f64 {
    let l = lambda_of_eta(curve, eta);
    0.5 * (x - l).powi(2) * (x * x + 2.0 * l * x + 3.0 * l * l + 2.0 * curve.p())
}
