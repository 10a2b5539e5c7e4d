use crate::domain::{NumericConfig, QuarticCurve};
use crate::error::{Error, Result};
use crate::laplace::{ExpNegIntegral, GenericQuartic};
use crate::legendre::lambda_of_eta;
use crate::poly::Polynomial;

/// `N(eta, tau) = ∫ exp(2 tau [eta lambda - b(lambda)]) d lambda`, stored in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NEvaluation {
    pub eta: f64,
    pub tau: f64,
    /// `exp(log_value)`; may be `+inf` when only the logarithm is representable.
    pub value: f64,
    pub log_value: f64,
    /// `exp(2 tau b*(eta)) / D(eta, tau)`.
    pub envelope: f64,
    pub log_envelope: f64,
    pub rel_error: f64,
}

impl NEvaluation {
    /// `value / envelope`, computed without overflow.
    pub fn ratio(&self) -> f64 {
        (self.log_value - self.log_envelope).exp()
    }
}

/// `D = tau^(1/4) + tau^(1/3) |lambda|^(1/3) + tau^(1/2) (3 lambda^2 + p)^(1/2)`.
pub fn envelope_denominator(curve: &QuarticCurve, lambda: f64, tau: f64) -> f64 {
    let curvature = curve.b_second(lambda).max(0.0);
    tau.powf(0.25) + (tau * lambda.abs()).cbrt() + (tau * curvature).sqrt()
}

/// The shape of the centered exponent at a fixed `eta`:
/// `2[b(lambda0 + y) - b(lambda0) - b'(lambda0) y]`, so that
/// `N = exp(2 tau b*(eta)) ∫ exp(-tau P(y)) dy`.
#[derive(Debug, Clone)]
pub struct CenteredN {
    eta: f64,
    lambda0: f64,
    b_star: f64,
    shape: GenericQuartic,
    integral: ExpNegIntegral,
}

impl CenteredN {
    pub fn new(curve: &QuarticCurve, eta: f64) -> Result<Self> {
        let lambda0 = lambda_of_eta(curve, eta);
        let shape = GenericQuartic::new(0.5, 2.0 * lambda0, curve.b_second(lambda0))?;
        let integral = ExpNegIntegral::new(shape.polynomial())?;
        Ok(Self {
            eta,
            lambda0,
            b_star: curve.tilted(eta, lambda0),
            shape,
            integral,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn b_star(&self) -> f64 {
        self.b_star
    }

    /// `(beta, gamma, delta) = (1/2, 2 lambda0, 3 lambda0^2 + p)`; multiply by tau.
    pub fn shape(&self) -> &GenericQuartic {
        &self.shape
    }

    /// `(log ∫ exp(-tau P), relative error)`, i.e. `log N - 2 tau b*(eta)`.
    pub fn log_reduced(&self, tau: f64, cfg: &NumericConfig) -> (f64, f64) {
        let est = self.integral.log_integral(tau, cfg);
        (est.log_value, est.rel_error)
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidPoint(format!(
            "tau must be positive and finite, got {tau}"
        )))
    }
}

fn evaluation(
    curve: &QuarticCurve,
    eta: f64,
    tau: f64,
    lambda0: f64,
    b_star: f64,
    log_value: f64,
    rel_error: f64,
) -> NEvaluation {
    let log_envelope = 2.0 * tau * b_star - envelope_denominator(curve, lambda0, tau).ln();
    NEvaluation {
        eta,
        tau,
        value: log_value.exp(),
        log_value,
        envelope: log_envelope.exp(),
        log_envelope,
        rel_error,
    }
}

/// `N(eta, tau)` from the quartic centered at `lambda(eta)`.
pub fn n_integral(curve: &QuarticCurve, eta: f64, tau: f64, cfg: &NumericConfig) -> Result<NEvaluation> {
    check_tau(tau)?;
    let centered = CenteredN::new(curve, eta)?;
    let (log_reduced, rel_error) = centered.log_reduced(tau, cfg);
    Ok(evaluation(
        curve,
        eta,
        tau,
        centered.lambda0,
        centered.b_star,
        2.0 * tau * centered.b_star + log_reduced,
        rel_error,
    ))
}

/// `N(eta, tau)` straight from `2 tau [b(lambda) - eta lambda]`, without
/// using `lambda(eta)` for the integral itself.
pub fn n_integral_uncentered(curve: &QuarticCurve, eta: f64, tau: f64, cfg: &NumericConfig) -> Result<NEvaluation> {
    check_tau(tau)?;
    let q = curve.q();
    let exponent = Polynomial::new(vec![0.0, 2.0 * (q - eta), curve.p(), 0.0, 0.5]);
    let est = ExpNegIntegral::new(exponent)?.log_integral(tau, cfg);
    let lambda0 = lambda_of_eta(curve, eta);
    Ok(evaluation(
        curve,
        eta,
        tau,
        lambda0,
        curve.tilted(eta, lambda0),
        est.log_value,
        est.rel_error,
    ))
}
