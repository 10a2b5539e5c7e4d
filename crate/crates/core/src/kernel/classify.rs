use serde::{Deserialize, Serialize};

use crate::domain::{PointPair, QuarticCurve};
use crate::error::{Error, Result};
use crate::kernel::exponent::same;
use crate::legendre::b_star_star;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Converges,
    SigmaDiagonal,
    SigmaAntidiagonal,
}

impl Verdict {
    pub fn is_singular(self) -> bool {
        self != Verdict::Converges
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Converges => "Converges",
            Verdict::SigmaDiagonal => "SigmaDiagonal",
            Verdict::SigmaAntidiagonal => "SigmaAntidiagonal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelClassification {
    pub verdict: Verdict,
    /// `h + k + b(x) + b(r) - 2 b**((x + r) / 2)`.
    pub margin: f64,
}

/// Slack allowed on the margin of a singular pair, which is zero in exact arithmetic.
pub fn margin_tolerance(curve: &QuarticCurve, x: f64, r: f64) -> f64 {
    1e-10 * (1.0 + curve.b(x).abs() + curve.b(r).abs())
}

/// Which branch of the singular set `(x, r)` lies on, ignoring heights.
pub fn sigma_branch(curve: &QuarticCurve, x: f64, r: f64) -> Option<Verdict> {
    let s = curve.sqrt_neg_p();
    if same(x.abs(), s) && same(r.abs(), s) {
        Some(Verdict::SigmaAntidiagonal)
    } else if same(x, r) && x.abs() > s {
        Some(Verdict::SigmaDiagonal)
    } else {
        None
    }
}

pub fn margin(curve: &QuarticCurve, pair: &PointPair) -> Result<f64> {
    let hull = b_star_star(curve, 0.5 * (pair.x + pair.r))?;
    Ok(pair.delta() + curve.b(pair.x) + curve.b(pair.r) - 2.0 * hull)
}

/// Decide whether the kernel integral converges absolutely at `pair`.
///
/// Boundary pairs off the singular set must have a positive margin and
/// singular pairs a margin within [`margin_tolerance`] of zero; anything else
/// is reported as [`Error::Inconsistent`].
pub fn classify(curve: &QuarticCurve, pair: &PointPair) -> Result<KernelClassification> {
    pair.validate()?;
    let margin = margin(curve, pair)?;
    let branch = if pair.is_boundary() {
        sigma_branch(curve, pair.x, pair.r)
    } else {
        None
    };
    let inconsistent = Error::Inconsistent {
        x: pair.x,
        r: pair.r,
        margin,
    };
    match branch {
        Some(verdict) => {
            if margin > margin_tolerance(curve, pair.x, pair.r) {
                return Err(inconsistent);
            }
            Ok(KernelClassification { verdict, margin })
        }
        None if margin > 0.0 => Ok(KernelClassification {
            verdict: Verdict::Converges,
            margin,
        }),
        None => Err(inconsistent),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> QuarticCurve {
        QuarticCurve::new(-1.0, 0.0).unwrap()
    }

    #[test]
    fn examples() {
        let c = classify(&curve(), &PointPair::boundary(0.0, 0.0)).unwrap();
        assert_eq!(c.verdict, Verdict::Converges);
        assert!((c.margin - 0.5).abs() < 1e-14);
        let c = classify(&curve(), &PointPair::boundary(2.0, 2.0)).unwrap();
        assert_eq!(c.verdict, Verdict::SigmaDiagonal);
        let c = classify(&curve(), &PointPair::boundary(1.0, -1.0)).unwrap();
        assert_eq!(c.verdict, Verdict::SigmaAntidiagonal);
    }

    #[test]
    fn edge_points_are_antidiagonal() {
        for &(x, r) in &[(1.0, 1.0), (-1.0, -1.0), (-1.0, 1.0)] {
            let c = classify(&curve(), &PointPair::boundary(x, r)).unwrap();
            assert_eq!(c.verdict, Verdict::SigmaAntidiagonal, "({x}, {r})");
            assert!(c.margin.abs() <= 1e-10);
        }
    }

    #[test]
    fn heights_lift_singular_pairs() {
        let mut pair = PointPair::boundary(2.0, 2.0);
        pair.h = 1e-3;
        let c = classify(&curve(), &pair).unwrap();
        assert_eq!(c.verdict, Verdict::Converges);
        assert!((c.margin - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn margin_equals_height_plus_hull_gap() {
        let tilted = QuarticCurve::new(-2.0, 0.5).unwrap();
        for &(x, r) in &[(0.3, -0.2), (1.9, 0.4), (-3.0, 2.5)] {
            let pair = PointPair::new(x, 0.0, 0.0, 0.2, r, 0.0, 0.0, 0.1).unwrap();
            let m = margin(&tilted, &pair).unwrap();
            let hull = b_star_star(&tilted, 0.5 * (x + r)).unwrap();
            assert!((m - (0.3 + tilted.b(x) + tilted.b(r) - 2.0 * hull)).abs() < 1e-14);
        }
    }

    #[test]
    fn openness_off_sigma() {
        // Margins stay positive under small perturbations of non-singular pairs.
        for &(x, r) in &[(0.0, 0.0), (1.5, -0.3), (-2.0, 0.7), (0.9, 0.9)] {
            for i in -5..=5 {
                let e = 1e-3 * i as f64;
                let c = classify(&curve(), &PointPair::boundary(x + e, r - e)).unwrap();
                assert_eq!(c.verdict, Verdict::Converges);
            }
        }
    }

    #[test]
    fn rejects_negative_heights() {
        let mut pair = PointPair::boundary(0.0, 0.0);
        pair.k = -1.0;
        assert!(matches!(classify(&curve(), &pair), Err(Error::InvalidPoint(_))));
    }
}
