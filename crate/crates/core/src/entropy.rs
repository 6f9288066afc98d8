//! Steady-state entropy production rate.
//!
//! Three equivalent evaluations are provided: the mode-resolved form
//! ([`entropy_production`]), the literal trace formula over the irreversible
//! part of the drift ([`entropy_production_trace`]) and the form in terms of the
//! off-diagonal covariance elements ([`entropy_production_offdiagonal`]). The
//! last one is only valid for a zero-temperature optical bath.

use nalgebra::Matrix4;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, DiffusionMatrix, EffectiveParams};

/// Relative distance of `kappa^2 - chi^2 cos^2(phi)` from zero below which the
/// off-diagonal form is reported as divergent.
pub const DIVERGENCE_RTOL: f64 = 1e-6;

/// Entropy production split into cavity and mechanical contributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyBreakdown {
    pub pi_s: f64,
    pub mu_a: f64,
    pub mu_b: f64,
}

/// Mode-resolved entropy production
/// `mu_a = 2k((V11 + V22)/(2n_a + 1) - 1)`, `mu_b = 2g((V33 + V44)/(2n_b + 1) - 1)`.
pub fn entropy_production(v: &CovarianceMatrix, p: &EffectiveParams) -> EntropyBreakdown {
    let mu_a = 2.0 * p.kappa * ((v.v(1, 1) + v.v(2, 2)) / (2.0 * p.n_a + 1.0) - 1.0);
    let mu_b = 2.0 * p.gamma * ((v.v(3, 3) + v.v(4, 4)) / (2.0 * p.n_b + 1.0) - 1.0);
    EntropyBreakdown {
        pi_s: mu_a + mu_b,
        mu_a,
        mu_b,
    }
}

/// Irreversible (damping) part of the drift, `diag(-k, -k, -g, -g)`.
pub fn irreversible_drift(p: &EffectiveParams) -> Matrix4<f64> {
    Matrix4::from_diagonal(&[-p.kappa, -p.kappa, -p.gamma, -p.gamma].into())
}

/// `2 Tr(A_irr^T D^-1 A_irr V) + Tr(A_irr)`.
pub fn entropy_production_trace(
    v: &CovarianceMatrix,
    a_irr: &Matrix4<f64>,
    d: &DiffusionMatrix,
) -> Result<f64> {
    let d_inv = d.matrix().try_inverse().ok_or(Error::SingularDiffusion)?;
    Ok(2.0 * (a_irr.transpose() * d_inv * a_irr * v.matrix()).trace() + a_irr.trace())
}

/// Entropy production written through `V12`, `V14` and `V23`.
///
/// Near the point `kappa^2 = chi^2 cos^2(phi)` the value is returned inside
/// [`Error::DivergentDenominator`] so callers can still inspect it.
pub fn entropy_production_offdiagonal(v: &CovarianceMatrix, p: &EffectiveParams) -> Result<f64> {
    if p.n_a != 0.0 {
        return Err(Error::NotSupported(
            "off-diagonal entropy production requires n_a = 0",
        ));
    }
    let (k, g, cc) = (p.kappa, p.coupling_g, p.chi_cos());
    let denominator = k * k - cc * cc;
    // chi cos(phi) (delta + k tan(phi)) written without the tangent.
    let v12_coeff = 4.0 * k * (cc * p.delta_a + k * p.chi_sin()) / denominator;
    let value = 2.0 * k * cc * cc / denominator
        + v12_coeff * v.v(1, 2)
        + 2.0 * g / (2.0 * p.n_b + 1.0) * v.v(1, 4)
        + 2.0 * k * g / (k + cc) * v.v(2, 3);
    if denominator.abs() < DIVERGENCE_RTOL * k * k {
        return Err(Error::DivergentDenominator { denominator, value });
    }
    Ok(value)
}

/// True when the parameters sit within [`DIVERGENCE_RTOL`] of `kappa^2 = chi^2 cos^2(phi)`.
pub fn near_divergence(p: &EffectiveParams) -> bool {
    let cc = p.chi_cos();
    (p.kappa * p.kappa - cc * cc).abs() < DIVERGENCE_RTOL * p.kappa * p.kappa
}
