//! Real roots of the depressed cubic `t^3 + p t - c = 0`.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CubicRoots {
    /// `4(-p)^3 <= 27 c^2`: one sign-changing real root.
    One(f64),
    /// `4(-p)^3 > 27 c^2`: three distinct real roots, ascending.
    Three([f64; 3]),
}

impl CubicRoots {
    pub fn smallest(&self) -> f64 {
        match *self {
            CubicRoots::One(t) => t,
            CubicRoots::Three(r) => r[0],
        }
    }

    pub fn largest(&self) -> f64 {
        match *self {
            CubicRoots::One(t) => t,
            CubicRoots::Three(r) => r[2],
        }
    }
}

/// `4(-p)^3 > 27 c^2`, the three-real-root condition.
pub fn has_three_roots(p: f64, c: f64) -> bool {
    4.0 * (-p).powi(3) > 27.0 * c * c
}

/// Trigonometric solution on the three-root branch, Cardano otherwise;
/// each root gets one Newton step.
pub fn solve_depressed(p: f64, c: f64) -> CubicRoots {
    if has_three_roots(p, c) {
        // t = 2m cos(theta) with m = sqrt(-p/3) turns the cubic into cos(3 theta) = c / (2 m^3).
        let m = (-p / 3.0).sqrt();
        let arg = (c / (2.0 * m * m * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut roots = [
            2.0 * m * (theta - 4.0 * PI / 3.0).cos(),
            2.0 * m * (theta - 2.0 * PI / 3.0).cos(),
            2.0 * m * theta.cos(),
        ];
        for t in roots.iter_mut() {
            *t = polish(p, c, *t);
        }
        roots.sort_by(f64::total_cmp);
        CubicRoots::Three(roots)
    } else {
        let half = 0.5 * c;
        let disc = half * half + p * p * p / 27.0;
        let sq = disc.max(0.0).sqrt();
        // Pick the sign that avoids cancellation; the partner term is -p / (3u).
        let u = (half + sq.copysign(half)).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        CubicRoots::One(polish(p, c, t))
    }
}

fn polish(p: f64, c: f64, t: f64) -> f64 {
    let f = t * t * t + p * t - c;
    let df = 3.0 * t * t + p;
    if df == 0.0 {
        return t;
    }
    let next = t - f / df;
    if next.is_finite() {
        next
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn residual(p: f64, c: f64, t: f64) -> f64 {
        (t * t * t + p * t - c).abs()
    }

    #[test]
    fn three_roots_of_lambda_cubed_minus_three_lambda() {
        let CubicRoots::Three(r) = solve_depressed(-3.0, 0.0) else {
            panic!()
        };
        let s3 = 3f64.sqrt();
        assert!((r[0] + s3).abs() < 1e-15);
        assert!(r[1].abs() < 1e-15);
        assert!((r[2] - s3).abs() < 1e-15);
    }

    #[test]
    fn discriminant_boundary_is_single_branch() {
        // lambda^3 - 3 lambda - 2 = (lambda - 2)(lambda + 1)^2
        assert!(!has_three_roots(-3.0, 2.0));
        let CubicRoots::One(t) = solve_depressed(-3.0, 2.0) else {
            panic!()
        };
        assert!((t - 2.0).abs() < 1e-14);
    }

    #[test]
    fn large_argument() {
        let t = solve_depressed(-1.0, 1e9).largest();
        assert!(residual(-1.0, 1e9, t) <= 1e-6 * 1e9 * f64::EPSILON.sqrt());
        assert!((t / 1e3 - 1.0).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn roots_satisfy_the_cubic(p in -20.0f64..-1e-3, c in -200.0f64..200.0) {
            let scale = 1.0 + c.abs() + p.abs().powf(1.5);
            match solve_depressed(p, c) {
                CubicRoots::One(t) => prop_assert!(residual(p, c, t) < 1e-11 * scale),
                CubicRoots::Three(r) => {
                    prop_assert!(r[0] < r[1] && r[1] < r[2]);
                    for t in r {
                        prop_assert!(residual(p, c, t) < 1e-9 * scale);
                    }
                }
            }
        }
    }
}
