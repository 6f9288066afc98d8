//! Full analysis of a single parameter point.

use serde::Serialize;

use crate::correlations::{self, DiscordResult, OptimizerSettings};
use crate::entropy::{self, EntropyBreakdown};
use crate::error::Result;
use crate::gaussian::{self, CovarianceMatrix, EffectiveParams};
use crate::lyapunov;

/// Entropy production below this is reported as a sign violation.
pub const NEGATIVE_PI_TOL: f64 = 1e-9;

/// Which of the more expensive quantities to evaluate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Quantities {
    pub mutual_info: bool,
    pub discord: bool,
    pub symplectic: bool,
}

impl Quantities {
    pub fn all() -> Self {
        Self {
            mutual_info: true,
            discord: true,
            symplectic: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub params: EffectiveParams,
    pub stable: bool,
    /// Largest real part of the drift spectrum.
    pub spectral_abscissa: f64,
    #[serde(skip)]
    pub covariance: Option<CovarianceMatrix>,
    pub entropy: Option<EntropyBreakdown>,
    pub symplectic: Option<(f64, f64)>,
    pub mutual_info: Option<f64>,
    pub discord: Option<DiscordResult>,
    /// Parameters within the relative window of `kappa^2 = chi^2 cos^2(phi)`.
    pub near_divergence: bool,
    /// Total entropy production below `-1e-9`.
    pub negative_pi_s: bool,
    /// Numerical failure at a point that passed the stability test.
    pub failure: Option<String>,
}

impl PointReport {
    fn empty(params: EffectiveParams, stable: bool, spectral_abscissa: f64) -> Self {
        Self {
            params,
            stable,
            spectral_abscissa,
            covariance: None,
            entropy: None,
            symplectic: None,
            mutual_info: None,
            discord: None,
            near_divergence: entropy::near_divergence(&params),
            negative_pi_s: false,
            failure: None,
        }
    }
}

/// Stability check, Lyapunov solve and the requested quantities.
///
/// Fails only on invalid parameters; unstable points and numerical failures
/// are recorded in the report.
pub fn analyze(
    p: &EffectiveParams,
    what: Quantities,
    opt: &OptimizerSettings,
) -> Result<PointReport> {
    p.validate()?;
    let a = gaussian::build_drift(p);
    let d = gaussian::build_diffusion_for(p)?;
    let abscissa = a.spectral_abscissa();
    let stable = a.is_stable();
    let mut report = PointReport::empty(*p, stable, abscissa);
    if !stable {
        return Ok(report);
    }
    let v = match lyapunov::solve_steady_covariance(&a, &d) {
        Ok(v) => v,
        Err(e) => {
            report.failure = Some(e.to_string());
            return Ok(report);
        }
    };
    let e = entropy::entropy_production(&v, p);
    report.negative_pi_s = e.pi_s < -NEGATIVE_PI_TOL;
    report.entropy = Some(e);
    report.covariance = Some(v);

    let mut record = |r: Result<()>| {
        if let Err(e) = r {
            report.failure.get_or_insert_with(|| e.to_string());
        }
    };
    let mut symplectic = None;
    let mut mutual_info = None;
    let mut discord = None;
    if what.symplectic {
        record(gaussian::symplectic_eigenvalues(&v).map(|nu| symplectic = Some(nu)));
    }
    if what.mutual_info {
        record(correlations::mutual_information(&v).map(|i| mutual_info = Some(i)));
    }
    if what.discord {
        record(correlations::gaussian_discord(&v, opt).map(|r| discord = Some(r)));
    }
    report.symplectic = symplectic;
    report.mutual_info = mutual_info;
    report.discord = discord;
    Ok(report)
}
