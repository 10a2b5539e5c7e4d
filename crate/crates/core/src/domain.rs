//! Boundary curve, boundary-adapted point pairs and quadrature settings.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// The quartic `b(x) = x^4/4 + p x^2/2 + q x` with `p < 0`, whose
/// supergraph `{Im z2 > b(Re z1)}` defines the tube domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct QuarticCurve {
    p: f64,
    q: f64,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    p: f64,
    q: f64,
}

impl TryFrom<RawCurve> for QuarticCurve {
    type Error = Error;

    fn try_from(raw: RawCurve) -> Result<Self> {
        QuarticCurve::new(raw.p, raw.q)
    }
}

impl From<QuarticCurve> for RawCurve {
    fn from(c: QuarticCurve) -> Self {
        RawCurve { p: c.p, q: c.q }
    }
}

impl QuarticCurve {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p < 0.0) || !p.is_finite() || !q.is_finite() {
            return Err(Error::InvalidCurve { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `sqrt(-p)`: the abscissae `±sqrt(-p)` are where the double tangent touches `b`.
    pub fn sqrt_neg_p(&self) -> f64 {
        (-self.p).sqrt()
    }

    pub fn b(&self, x: f64) -> f64 {
        let x2 = x * x;
        0.25 * x2 * x2 + 0.5 * self.p * x2 + self.q * x
    }

    pub fn b_prime(&self, x: f64) -> f64 {
        x * x * x + self.p * x + self.q
    }

    pub fn b_second(&self, x: f64) -> f64 {
        3.0 * x * x + self.p
    }

    pub fn b_third(&self, x: f64) -> f64 {
        6.0 * x
    }

    /// `B_eta(lambda) = eta * lambda - b(lambda)`.
    pub fn tilted(&self, eta: f64, lambda: f64) -> f64 {
        eta * lambda - self.b(lambda)
    }

    /// `sqrt(4(-p)^3 / 27)`: for `|eta - q|` strictly below this the tilted
    /// quartic has two local maxima.
    pub fn discriminant_threshold(&self) -> f64 {
        (4.0 * (-self.p).powi(3) / 27.0).sqrt()
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(vec![0.0, self.q, 0.5 * self.p, 0.0, 0.25])
    }
}

pub fn eval_b(curve: &QuarticCurve, x: f64) -> f64 {
    curve.b(x)
}

#[allow(non_snake_case)]
pub fn eval_B(curve: &QuarticCurve, eta: f64, lambda: f64) -> f64 {
    curve.tilted(eta, lambda)
}

/// Two points of the closed domain in boundary-adapted coordinates:
/// `z = (x + iy, t + i b(x) + i h)` and `w = (r + is, u + i b(r) + i k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointPair {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub h: f64,
    pub r: f64,
    pub s: f64,
    pub u: f64,
    pub k: f64,
}

impl PointPair {
    #[allow(clippy::too_many_arguments)]
    pub fn new(x: f64, y: f64, t: f64, h: f64, r: f64, s: f64, u: f64, k: f64) -> Result<Self> {
        let pair = Self { x, y, t, h, r, s, u, k };
        pair.validate()?;
        Ok(pair)
    }

    /// Pair of boundary points `(x, 0, 0)` and `(r, 0, 0)`.
    pub fn boundary(x: f64, r: f64) -> Self {
        Self {
            x,
            y: 0.0,
            t: 0.0,
            h: 0.0,
            r,
            s: 0.0,
            u: 0.0,
            k: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [self.x, self.y, self.t, self.h, self.r, self.s, self.u, self.k];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPoint("all coordinates must be finite".into()));
        }
        if self.h < 0.0 || self.k < 0.0 {
            return Err(Error::InvalidPoint(format!(
                "heights must be non-negative (h = {}, k = {})",
                self.h, self.k
            )));
        }
        Ok(())
    }

    /// `h + k`.
    pub fn delta(&self) -> f64 {
        self.h + self.k
    }

    pub fn is_interior(&self) -> bool {
        self.h > 0.0 && self.k > 0.0
    }

    pub fn is_boundary(&self) -> bool {
        self.h == 0.0 && self.k == 0.0
    }

    /// The pair `(w, z)`.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.r,
            y: self.s,
            t: self.u,
            h: self.k,
            r: self.x,
            s: self.y,
            u: self.t,
            k: self.h,
        }
    }

    /// Raw complex components `([z1, z2], [w1, w2])`.
    pub fn to_complex(&self, curve: &QuarticCurve) -> ([Complex64; 2], [Complex64; 2]) {
        let z = [
            Complex64::new(self.x, self.y),
            Complex64::new(self.t, curve.b(self.x) + self.h),
        ];
        let w = [
            Complex64::new(self.r, self.s),
            Complex64::new(self.u, curve.b(self.r) + self.k),
        ];
        (z, w)
    }

    pub fn from_complex(curve: &QuarticCurve, z: [Complex64; 2], w: [Complex64; 2]) -> Result<Self> {
        let x = z[0].re;
        let r = w[0].re;
        Self::new(
            x,
            z[0].im,
            z[1].re,
            z[1].im - curve.b(x),
            r,
            w[0].im,
            w[1].re,
            w[1].im - curve.b(r),
        )
    }
}

/// Tolerances shared by every quadrature-backed operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Integrands below `exp(-exponent_cutoff)` relative to their peak are truncated.
    pub exponent_cutoff: f64,
    /// Maximum bisection depth of an adaptive panel.
    pub max_subdivisions: u32,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            exponent_cutoff: 40.0,
            max_subdivisions: 60,
        }
    }
}

impl NumericConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |field: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig {
                    field,
                    reason: format!("must be positive, got {v}"),
                })
            }
        };
        positive("numeric.rel_tol", self.rel_tol)?;
        positive("numeric.abs_tol", self.abs_tol)?;
        positive("numeric.exponent_cutoff", self.exponent_cutoff)?;
        if self.exponent_cutoff < 20.0 {
            return Err(Error::InvalidConfig {
                field: "numeric.exponent_cutoff",
                reason: format!("must be at least 20, got {}", self.exponent_cutoff),
            });
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidConfig {
                field: "numeric.max_subdivisions",
                reason: "must be positive".into(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> QuarticCurve {
        QuarticCurve::new(-1.0, 0.0).unwrap()
    }

    #[test]
    fn b_examples() {
        let c = curve();
        assert_eq!(eval_b(&c, 0.0), 0.0);
        assert_eq!(eval_b(&c, 1.0), -0.25);
        assert_eq!(eval_b(&c, -1.0), -0.25);
    }

    #[test]
    fn tilted_examples() {
        let c = curve();
        assert_eq!(eval_B(&c, 0.0, 1.0), 0.25);
        assert_eq!(eval_B(&c, 2.0, 1.0), 2.25);
        let other = QuarticCurve::new(-3.7, 2.2).unwrap();
        assert_eq!(eval_B(&other, 11.0, 0.0), 0.0);
    }

    #[test]
    fn rejects_convex_curves() {
        assert!(matches!(QuarticCurve::new(0.0, 0.0), Err(Error::InvalidCurve { .. })));
        assert!(QuarticCurve::new(1.0, 0.0).is_err());
        assert!(QuarticCurve::new(f64::NAN, 0.0).is_err());
        assert!(QuarticCurve::new(-1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn even_when_q_vanishes() {
        let c = QuarticCurve::new(-2.5, 0.0).unwrap();
        for i in 0..=200 {
            let x = -10.0 + 0.1 * i as f64;
            assert_eq!(c.b(x), c.b(-x));
        }
    }

    #[test]
    fn tilted_is_linear_in_eta() {
        let c = QuarticCurve::new(-1.3, 0.4).unwrap();
        for &(eta, lambda) in &[(0.5, 2.0), (-3.0, 0.25), (7.0, -1.5)] {
            let diff = c.tilted(eta, lambda) - c.tilted(0.0, lambda);
            assert!((diff - eta * lambda).abs() <= 1e-12 * (1.0 + (eta * lambda).abs()));
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let c = QuarticCurve::new(-1.7, 0.3).unwrap();
        let step = 1e-5;
        for i in 0..=400 {
            let x = -10.0 + 0.05 * i as f64;
            let fd = (c.b(x + step) - c.b(x - step)) / (2.0 * step);
            let exact = c.b_prime(x);
            let scale = exact.abs().max(1.0);
            assert!((fd - exact).abs() / scale < 1e-6, "x = {x}: {fd} vs {exact}");
        }
    }

    #[test]
    fn polynomial_agrees_with_b() {
        let c = QuarticCurve::new(-2.0, 1.5).unwrap();
        let poly = c.polynomial();
        for &x in &[-3.0, -0.5, 0.0, 0.7, 2.9] {
            assert!((poly.eval(x) - c.b(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_round_trip() {
        let c = QuarticCurve::new(-1.0, 0.2).unwrap();
        let pair = PointPair::new(0.3, -0.2, 1.0, 0.5, -1.1, 0.4, 0.0, 0.25).unwrap();
        let (z, w) = pair.to_complex(&c);
        let back = PointPair::from_complex(&c, z, w).unwrap();
        assert!((back.h - pair.h).abs() < 1e-15);
        assert!((back.k - pair.k).abs() < 1e-15);
        assert_eq!(back.x, pair.x);
        assert_eq!(pair.swapped().swapped(), pair);
    }

    #[test]
    fn rejects_points_below_boundary() {
        assert!(PointPair::new(0.0, 0.0, 0.0, -1e-3, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(PointPair::boundary(1.0, 2.0).is_boundary());
        assert_eq!(
            PointPair::new(0.0, 0.0, 0.0, 0.2, 0.0, 0.0, 0.0, 0.3).unwrap().delta(),
            0.5
        );
    }

    #[test]
    fn config_validation() {
        assert!(NumericConfig::default().validate().is_ok());
        let bad = NumericConfig {
            exponent_cutoff: 10.0,
            ..Default::default()
        };
        assert!(matches!(
            bad.validate(),
            Err(Error::InvalidConfig {
                field: "numeric.exponent_cutoff",
                ..
            })
        ));
        let bad = NumericConfig {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
