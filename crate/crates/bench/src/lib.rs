//! Fixtures shared by the benchmarks in `benches/`.

use szego_core::{NumericConfig, PointPair, QuarticCurve};

/// `b(x) = x^4/4 - x^2/2`.
pub fn unit_curve() -> QuarticCurve {
    QuarticCurve::new(-1.0, 0.0).expect("p < 0")
}

/// An interior pair well inside the convergence region.
pub fn interior_pair() -> PointPair {
    PointPair::new(0.3, 0.1, 0.2, 0.5, -0.4, -0.2, 0.1, 0.5).expect("heights are positive")
}

/// The looser tolerance used by region sweeps.
pub fn sweep_config() -> NumericConfig {
    NumericConfig::default().with_rel_tol(1e-5)
}
