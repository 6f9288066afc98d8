//! Two-mode Gaussian model: dimensionless parameters, drift and diffusion
//! matrices of the linearized quadrature dynamics, and covariance-matrix
//! physicality checks.
//!
//! Quadratures are ordered `(x_a, p_a, x_b, p_b)` and every rate or detuning
//! is measured in units of the mechanical frequency. The vacuum variance is
//! `1/2`, so a covariance matrix is physical iff all of its symplectic
//! eigenvalues are at least `1/2`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vacuum variance of a single quadrature.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Parameters of the linearized cavity + mechanics model, all in units of `omega_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    /// Cavity detuning.
    pub delta_a: f64,
    /// Mechanical frequency (the unit of every other rate, normally 1).
    pub omega_b: f64,
    /// Cavity decay rate.
    pub kappa: f64,
    /// Mechanical damping rate.
    pub gamma: f64,
    /// Effective optomechanical coupling, taken real and non-negative.
    pub coupling_g: f64,
    /// Magnitude of the parametric nonlinearity.
    pub chi_mag: f64,
    /// Phase of the parametric nonlinearity, radians.
    pub phi: f64,
    /// Thermal occupation of the mechanical bath.
    pub n_b: f64,
    /// Thermal occupation of the optical bath.
    pub n_a: f64,
}

impl Default for EffectiveParams {
    fn default() -> Self {
        Self {
            delta_a: 1.0,
            omega_b: 1.0,
            kappa: 0.5,
            gamma: 0.01,
            coupling_g: 0.1,
            chi_mag: 0.0,
            phi: 0.8 * PI,
            n_b: 10.0,
            n_a: 0.0,
        }
    }
}

/// Names of the [`EffectiveParams`] fields, used to address sweep axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamName {
    DeltaA,
    OmegaB,
    Kappa,
    Gamma,
    CouplingG,
    ChiMag,
    Phi,
    NB,
    NA,
}

impl ParamName {
    pub const ALL: [ParamName; 9] = [
        ParamName::DeltaA,
        ParamName::OmegaB,
        ParamName::Kappa,
        ParamName::Gamma,
        ParamName::CouplingG,
        ParamName::ChiMag,
        ParamName::Phi,
        ParamName::NB,
        ParamName::NA,
    ];

    /// Column name used in output files.
    pub fn as_str(self) -> &'static str {
        match self {
            ParamName::DeltaA => "delta_a",
            ParamName::OmegaB => "omega_b",
            ParamName::Kappa => "kappa",
            ParamName::Gamma => "gamma",
            ParamName::CouplingG => "coupling_g",
            ParamName::ChiMag => "chi",
            ParamName::Phi => "phi",
            ParamName::NB => "n_b",
            ParamName::NA => "n_a",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "delta_a" => Some(ParamName::DeltaA),
            "omega_b" => Some(ParamName::OmegaB),
            "kappa" => Some(ParamName::Kappa),
            "gamma" => Some(ParamName::Gamma),
            "coupling_g" | "g" | "G" => Some(ParamName::CouplingG),
            "chi" | "chi_mag" => Some(ParamName::ChiMag),
            "phi" => Some(ParamName::Phi),
            "n_b" => Some(ParamName::NB),
            "n_a" => Some(ParamName::NA),
            _ => None,
        }
    }
}

impl Serialize for ParamName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl EffectiveParams {
    pub fn get(&self, name: ParamName) -> f64 {
        match name {
            ParamName::DeltaA => self.delta_a,
            ParamName::OmegaB => self.omega_b,
            ParamName::Kappa => self.kappa,
            ParamName::Gamma => self.gamma,
            ParamName::CouplingG => self.coupling_g,
            ParamName::ChiMag => self.chi_mag,
            ParamName::Phi => self.phi,
            ParamName::NB => self.n_b,
            ParamName::NA => self.n_a,
        }
    }

    pub fn set(&mut self, name: ParamName, value: f64) {
        let slot = match name {
            ParamName::DeltaA => &mut self.delta_a,
            ParamName::OmegaB => &mut self.omega_b,
            ParamName::Kappa => &mut self.kappa,
            ParamName::Gamma => &mut self.gamma,
            ParamName::CouplingG => &mut self.coupling_g,
            ParamName::ChiMag => &mut self.chi_mag,
            ParamName::Phi => &mut self.phi,
            ParamName::NB => &mut self.n_b,
            ParamName::NA => &mut self.n_a,
        };
        *slot = value;
    }

    pub fn with(mut self, name: ParamName, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn validate(&self) -> Result<()> {
        for name in ParamName::ALL {
            let value = self.get(name);
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name: name.as_str(),
                    value,
                    reason: "must be finite",
                });
            }
        }
        let positive = [
            (ParamName::OmegaB, self.omega_b),
            (ParamName::Kappa, self.kappa),
            (ParamName::Gamma, self.gamma),
        ];
        for (name, value) in positive {
            if value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: name.as_str(),
                    value,
                    reason: "must be strictly positive",
                });
            }
        }
        let non_negative = [
            (ParamName::CouplingG, self.coupling_g),
            (ParamName::ChiMag, self.chi_mag),
            (ParamName::NB, self.n_b),
            (ParamName::NA, self.n_a),
        ];
        for (name, value) in non_negative {
            if value < 0.0 {
                return Err(Error::InvalidParameter {
                    name: name.as_str(),
                    value,
                    reason: "must be non-negative",
                });
            }
        }
        Ok(())
    }

    /// `chi * cos(phi)`, the part of the nonlinearity that modifies the cavity damping.
    pub fn chi_cos(&self) -> f64 {
        self.chi_mag * self.phi.cos()
    }

    pub fn chi_sin(&self) -> f64 {
        self.chi_mag * self.phi.sin()
    }
}

/// Drift matrix of the quadrature Langevin equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(Matrix4<f64>);

impl DriftMatrix {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn to_dynamic(&self) -> DMatrix<f64> {
        to_dynamic(&self.0)
    }
}

/// Diagonal diffusion matrix of the quadrature noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix(Matrix4<f64>);

impl DiffusionMatrix {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn to_dynamic(&self) -> DMatrix<f64> {
        to_dynamic(&self.0)
    }

    pub fn diagonal(&self) -> [f64; 4] {
        [
            self.0[(0, 0)],
            self.0[(1, 1)],
            self.0[(2, 2)],
            self.0[(3, 3)],
        ]
    }
}

pub(crate) fn to_dynamic(m: &Matrix4<f64>) -> DMatrix<f64> {
    DMatrix::from_iterator(4, 4, m.iter().copied())
}

/// Symmetrized second moments `V_ij = <{du_i, du_j}>/2` of the two-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix4<f64>);

impl CovarianceMatrix {
    /// Accepts `m` if it is symmetric to within `1e-12` relative; the stored
    /// matrix is exactly symmetric.
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let scale = m.amax().max(f64::MIN_POSITIVE);
        let asymmetry = (m - m.transpose()).amax();
        if !m.iter().all(|x| x.is_finite()) || asymmetry > 1e-12 * scale {
            return Err(Error::NotSymmetric { asymmetry });
        }
        Ok(Self((m + m.transpose()) * 0.5))
    }

    pub fn from_dynamic(m: &DMatrix<f64>) -> Result<Self> {
        if m.shape() != (4, 4) {
            return Err(Error::DimensionMismatch {
                expected: 4,
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        Self::new(Matrix4::from_iterator(m.iter().copied()))
    }

    pub fn from_diagonal(d: [f64; 4]) -> Self {
        Self(Matrix4::from_diagonal(&d.into()))
    }

    /// Two uncorrelated vacuum modes.
    pub fn vacuum() -> Self {
        Self::from_diagonal([VACUUM_VARIANCE; 4])
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn to_dynamic(&self) -> DMatrix<f64> {
        to_dynamic(&self.0)
    }

    /// 1-based element access matching the usual `V_ij` notation.
    pub fn v(&self, i: usize, j: usize) -> f64 {
        self.0[(i - 1, j - 1)]
    }

    /// Cavity block.
    pub fn va(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// Mechanical block.
    pub fn vb(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// Cross-correlation block, cavity rows by mechanical columns.
    pub fn c(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0 * factor)
    }

    pub fn from_blocks(va: &Matrix2<f64>, vb: &Matrix2<f64>, c: &Matrix2<f64>) -> Result<Self> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(va);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(vb);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(c);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c.transpose());
        Self::new(m)
    }
}

/// Block-diagonal symplectic form for `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm(DMatrix<f64>);

impl SymplecticForm {
    pub fn new(modes: usize) -> Self {
        let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
        for k in 0..modes {
            omega[(2 * k, 2 * k + 1)] = 1.0;
            omega[(2 * k + 1, 2 * k)] = -1.0;
        }
        Self(omega)
    }

    pub fn two_mode() -> Self {
        Self::new(2)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// Drift matrix of the linearized dynamics, rows and columns ordered `(x_a, p_a, x_b, p_b)`.
pub fn build_drift(p: &EffectiveParams) -> DriftMatrix {
    let (cc, cs) = (p.chi_cos(), p.chi_sin());
    let (k, d, g, gm, w) = (p.kappa, p.delta_a, p.coupling_g, p.gamma, p.omega_b);
    #[rustfmt::skip]
    let a = Matrix4::new(
        -k + cc, d + cs,  0.0, 0.0,
        -d + cs, -k - cc, g,   0.0,
        0.0,     0.0,     -gm, w,
        g,       0.0,     -w,  -gm,
    );
    DriftMatrix(a)
}

/// Diffusion matrix `diag(k(2n_a+1), k(2n_a+1), g(2n_b+1), g(2n_b+1))`.
pub fn build_diffusion(kappa: f64, gamma: f64, n_b: f64, n_a: f64) -> Result<DiffusionMatrix> {
    let checks = [
        ("kappa", kappa, kappa > 0.0, "must be strictly positive"),
        ("gamma", gamma, gamma > 0.0, "must be strictly positive"),
        ("n_b", n_b, n_b >= 0.0, "must be non-negative"),
        ("n_a", n_a, n_a >= 0.0, "must be non-negative"),
    ];
    for (name, value, ok, reason) in checks {
        if !ok || !value.is_finite() {
            return Err(Error::InvalidParameter {
                name,
                value,
                reason,
            });
        }
    }
    let cav = kappa * (2.0 * n_a + 1.0);
    let mech = gamma * (2.0 * n_b + 1.0);
    Ok(DiffusionMatrix(Matrix4::from_diagonal(
        &[cav, cav, mech, mech].into(),
    )))
}

pub fn build_diffusion_for(p: &EffectiveParams) -> Result<DiffusionMatrix> {
    build_diffusion(p.kappa, p.gamma, p.n_b, p.n_a)
}

/// Symplectic spectrum of an even-dimensional symmetric positive definite
/// matrix, ascending, one value per mode.
pub fn symplectic_spectrum(v: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = v.nrows();
    if n != v.ncols() || !n.is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: n + n % 2,
            rows: v.nrows(),
            cols: v.ncols(),
        });
    }
    let scale = v.amax().max(f64::MIN_POSITIVE);
    let asymmetry = (v - v.transpose()).amax();
    if asymmetry > 1e-12 * scale {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let sym = (v + v.transpose()) * 0.5;
    if sym.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    let omega = SymplecticForm::new(n / 2);
    // Eigenvalues of Omega V come in pairs +-i nu.
    let mut mags: Vec<f64> = (omega.matrix() * &sym)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.im.abs())
        .collect();
    mags.sort_by(f64::total_cmp);
    Ok(mags
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect())
}

/// The two symplectic eigenvalues `(nu_1, nu_2)`, `nu_1 <= nu_2`.
pub fn symplectic_eigenvalues(v: &CovarianceMatrix) -> Result<(f64, f64)> {
    let nu = symplectic_spectrum(&v.to_dynamic())?;
    Ok((nu[0], nu[1]))
}

/// Uncertainty-relation check: smallest symplectic eigenvalue at least `1/2 - tol`.
pub fn check_physical(v: &CovarianceMatrix, tol: f64) -> bool {
    symplectic_eigenvalues(v).is_ok_and(|(nu_min, _)| nu_min >= VACUUM_VARIANCE - tol)
}
