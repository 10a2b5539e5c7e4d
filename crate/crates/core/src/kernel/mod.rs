//! The inner integral `N(eta, tau)`, the exponent `A(x, r, eta)`, convergence
//! classification, absolute majorants, divergence probes and evaluation of
//! the kernel and its derivatives.

mod absolute;
mod classify;
mod exponent;
mod n_integral;
mod szego;

pub use absolute::{
    abs_integrand_eta, abs_integrand_eta_exact, abs_kernel_integral, abs_kernel_integral_exact, divergence_probe,
    tail_exponent, DivergenceProbe,
};
pub use classify::{classify, margin, margin_tolerance, sigma_branch, KernelClassification, Verdict};
pub use exponent::{
    asymptotic_A_check, diagonal_a_factored, exponent_A, inf_exponent, local_A_structure, sigma_case, AsymptoticACheck,
    SigmaCase,
};
pub use n_integral::{envelope_denominator, n_integral, n_integral_uncentered, CenteredN, NEvaluation};
pub use szego::{
    szego_derivative_eval, szego_eval, szego_eval_detailed, KernelValue, MultiIndex, MAX_DERIVATIVE_ORDER,
};
