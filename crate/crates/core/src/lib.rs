//! Numerics for the Szegő kernel of tube domains over quartic curves
//! `b(x) = x^4/4 + p x^2/2 + q x` with `p < 0`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cubic;
pub mod domain;
pub mod error;
pub mod kernel;
pub mod laplace;
pub mod legendre;
pub mod poly;
pub mod quadrature;
pub mod report;
pub mod verify;

pub use domain::{eval_B, eval_b, NumericConfig, PointPair, QuarticCurve};
pub use error::{Error, Result};
pub use kernel::{KernelClassification, MultiIndex, Verdict};
pub use laplace::{CanonicalQuartic, GenericQuartic};
pub use poly::Polynomial;
pub use report::{SweepAccumulator, SweepReport};
pub use verify::{Suite, SuiteReport, VerifyOptions};
