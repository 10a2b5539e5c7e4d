//! Dense real polynomials with bisection-based real root isolation.
//!
//! Roots are located recursively: the real roots of `p'` split the line into
//! intervals on which `p` is monotone, and each sign change on such an interval
//! is refined by bisection to full floating-point resolution. Roots of even
//! multiplicity (no sign change) are not reported.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    /// Ascending coefficients, trailing zeros stripped.
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    /// Even degree with positive leading coefficient.
    pub fn is_coercive(&self) -> bool {
        self.degree() >= 2 && self.degree().is_multiple_of(2) && self.leading() > 0.0
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::new(vec![0.0]);
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// `p(x) - c`.
    pub fn minus_constant(&self, c: f64) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] -= c;
        Polynomial::new(coeffs)
    }

    pub fn scaled(&self, factor: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Sum of `|a_k| x^k`.
    pub fn abs_coefficients(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c.abs()).collect())
    }

    /// Fujiwara bound: every complex root lies in `|z| <= bound`.
    pub fn root_bound(&self) -> f64 {
        let n = self.degree();
        if n == 0 {
            return 0.0;
        }
        let lead = self.leading().abs();
        let mut bound: f64 = 0.0;
        for k in 1..=n {
            let c = self.coeffs[n - k].abs() / lead;
            let term = if k == n {
                (0.5 * c).powf(1.0 / k as f64)
            } else {
                c.powf(1.0 / k as f64)
            };
            bound = bound.max(term);
        }
        2.0 * bound
    }

    /// All real roots at which the polynomial changes sign, ascending.
    pub fn real_roots(&self) -> Vec<f64> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        // Factor out x^m so that roots at the origin are exact.
        let zeros = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        if zeros > 0 {
            let reduced = Polynomial::new(self.coeffs[zeros..].to_vec());
            let mut roots = reduced.real_roots();
            if zeros % 2 == 1 {
                roots.push(0.0);
                roots.sort_by(f64::total_cmp);
            }
            return roots;
        }
        if n == 1 {
            return vec![-self.coeffs[0] / self.coeffs[1]];
        }
        let critical = self.derivative().real_roots();
        self.roots_between_critical(&critical, 0.0)
    }

    /// Sign-changing roots of `p(x) = level`, given the sign-changing critical
    /// points of `p` (ascending).
    pub fn level_crossings(&self, critical: &[f64], level: f64) -> Vec<f64> {
        self.roots_between_critical(critical, level)
    }

    fn roots_between_critical(&self, critical: &[f64], level: f64) -> Vec<f64> {
        let shifted_bound = self.minus_constant(level).root_bound();
        let extent = critical.iter().fold(shifted_bound, |m, c| m.max(c.abs()));
        let outer = 2.0 * extent + 1.0;
        let mut knots = Vec::with_capacity(critical.len() + 2);
        knots.push(-outer);
        knots.extend_from_slice(critical);
        knots.push(outer);

        let f = |x: f64| self.eval(x) - level;
        let mut roots: Vec<f64> = Vec::new();
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            if !(b > a) {
                continue;
            }
            let (fa, fb) = (f(a), f(b));
            if fa == 0.0 {
                push_unique(&mut roots, a);
            }
            if fa * fb < 0.0 {
                push_unique(&mut roots, bisect(&f, a, b, fa));
            }
        }
        let last = *knots.last().unwrap();
        if f(last) == 0.0 {
            push_unique(&mut roots, last);
        }
        roots
    }

    /// Intervals where `p(x) <= level`, for a coercive polynomial.
    ///
    /// `critical` must hold the sign-changing critical points of `p`.
    pub fn sublevel_intervals(&self, critical: &[f64], level: f64) -> Vec<(f64, f64)> {
        let crossings = self.level_crossings(critical, level);
        let (lo, hi) = match (crossings.first(), crossings.last()) {
            (Some(&lo), Some(&hi)) if hi > lo => (lo, hi),
            _ => return Vec::new(),
        };
        let mut knots = crossings;
        knots.extend(critical.iter().copied().filter(|&c| c > lo && c < hi));
        knots.sort_by(f64::total_cmp);
        knots.dedup();

        let mut out: Vec<(f64, f64)> = Vec::new();
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a < lo || b > hi {
                continue;
            }
            if self.eval(0.5 * (a + b)) <= level {
                match out.last_mut() {
                    Some(last) if last.1 == a => last.1 = b,
                    _ => out.push((a, b)),
                }
            }
        }
        out
    }
}

fn push_unique(roots: &mut Vec<f64>, x: f64) {
    if roots.last().is_none_or(|&last| last != x) {
        roots.push(x);
    }
}

/// Bisection on a bracketing interval until the midpoint is no longer
/// representable strictly inside it.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..2200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}x")?,
                _ => write!(f, "{c}x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_roots(roots: &[f64], lead: f64) -> Polynomial {
        let mut coeffs = vec![lead];
        for &r in roots {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            coeffs = next;
        }
        Polynomial::new(coeffs)
    }

    #[test]
    fn basic_algebra() {
        let p = Polynomial::new(vec![1.0, -2.0, 0.0, 4.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 3);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 32.0);
        assert_eq!(p.derivative().coeffs(), &[-2.0, 0.0, 12.0]);
        assert_eq!(p.to_string(), "4x^3 + -2x + 1");
        assert!(!p.is_coercive());
        assert!(Polynomial::new(vec![0.0, 0.0, 1.0]).is_coercive());
    }

    #[test]
    fn roots_of_known_quartic() {
        let p = from_roots(&[-3.0, -0.5, 1.0, 2.5], 0.25);
        let roots = p.real_roots();
        assert_eq!(roots.len(), 4);
        for (got, want) in roots.iter().zip([-3.0, -0.5, 1.0, 2.5]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn root_at_origin_is_exact() {
        // x (x^2 - 4)
        let p = Polynomial::new(vec![0.0, -4.0, 0.0, 1.0]);
        assert_eq!(p.real_roots(), vec![-2.0, 0.0, 2.0]);
        // x^2 has no sign change
        assert!(Polynomial::new(vec![0.0, 0.0, 1.0]).real_roots().is_empty());
    }

    #[test]
    fn sublevel_of_double_well() {
        // (x^2 - 1)^2 = x^4 - 2x^2 + 1, level 0.25 gives two components.
        let p = Polynomial::new(vec![1.0, 0.0, -2.0, 0.0, 1.0]);
        let crit = p.derivative().real_roots();
        let parts = p.sublevel_intervals(&crit, 0.25);
        assert_eq!(parts.len(), 2);
        let a = (0.5f64).sqrt();
        let b = (1.5f64).sqrt();
        assert!((parts[0].0 + b).abs() < 1e-12 && (parts[0].1 + a).abs() < 1e-12);
        assert!((parts[1].0 - a).abs() < 1e-12 && (parts[1].1 - b).abs() < 1e-12);
        // Above the barrier the components merge.
        let merged = p.sublevel_intervals(&crit, 2.0);
        assert_eq!(merged.len(), 1);
    }

    proptest! {
        #[test]
        fn recovers_separated_roots(
            mut roots in proptest::collection::vec(-50.0f64..50.0, 1..6),
            lead in prop_oneof![0.01f64..100.0, -100.0f64..-0.01],
        ) {
            roots.sort_by(f64::total_cmp);
            roots.dedup_by(|a, b| (*a - *b).abs() < 0.5);
            let p = from_roots(&roots, lead);
            let found = p.real_roots();
            prop_assert_eq!(found.len(), roots.len());
            for (got, want) in found.iter().zip(&roots) {
                prop_assert!((got - want).abs() < 1e-7 * (1.0 + want.abs()), "{} vs {}", got, want);
            }
        }
    }
}
