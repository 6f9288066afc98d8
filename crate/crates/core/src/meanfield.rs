//! Classical steady state of the driven cavity and conversion of physical
//! inputs (SI units, angular frequencies in rad/s) into [`EffectiveParams`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::EffectiveParams;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

const FIXED_POINT_RTOL: f64 = 1e-12;
const MAX_ITERATIONS: usize = 10_000;
const DAMPING: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Cavity frequency, rad/s.
    pub omega_c: f64,
    /// Laser frequency, rad/s.
    pub omega_l: f64,
    /// Mechanical frequency, rad/s.
    pub omega_b: f64,
    /// Resonator mass, kg.
    pub mass: f64,
    /// Cavity length, m.
    pub length: f64,
    /// Laser power, W.
    pub laser_power: f64,
    /// Bath temperature, K.
    pub temperature: f64,
    /// Cavity decay rate, rad/s.
    pub kappa: f64,
    /// Mechanical damping rate, rad/s.
    pub gamma: f64,
    /// Kerr / parametric strength, rad/s.
    pub xi: f64,
    /// Drive phase, rad.
    pub theta: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("omega_c", self.omega_c),
            ("omega_l", self.omega_l),
            ("omega_b", self.omega_b),
            ("mass", self.mass),
            ("length", self.length),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be strictly positive",
                });
            }
        }
        let non_negative = [
            ("laser_power", self.laser_power),
            ("temperature", self.temperature),
            ("xi", self.xi),
        ];
        for (name, value) in non_negative {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be non-negative",
                });
            }
        }
        if !self.theta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: self.theta,
                reason: "must be finite",
            });
        }
        Ok(())
    }

    /// Bare detuning `omega_c - omega_l`.
    pub fn detuning(&self) -> f64 {
        self.omega_c - self.omega_l
    }

    /// Complex drive `|eta| e^{i theta}`.
    pub fn drive(&self) -> Complex64 {
        Complex64::from_polar(drive_amplitude(self), self.theta)
    }
}

/// Single-photon optomechanical coupling `sqrt(hbar/(M omega_b)) omega_c / L`.
pub fn coupling_from_physical(p: &PhysicalParams) -> f64 {
    (HBAR / (p.mass * p.omega_b)).sqrt() * p.omega_c / p.length
}

/// Drive rate `sqrt(2 kappa R / (hbar omega_l))`.
pub fn drive_amplitude(p: &PhysicalParams) -> f64 {
    (2.0 * p.kappa * p.laser_power / (HBAR * p.omega_l)).sqrt()
}

/// Bose-Einstein occupation at temperature `t` (K) of a mode at `omega_b` (rad/s).
pub fn thermal_occupation(t: f64, omega_b: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega_b / (K_B * t)).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanFieldMode {
    /// Take the effective detuning equal to the bare one.
    Approximate,
    /// Iterate the detuning shift to self-consistency.
    SelfConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFields {
    pub a_s: Complex64,
    pub b_s: Complex64,
    /// Effective detuning, rad/s.
    pub delta_tilde: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Relative change of the detuning in the last fixed-point step.
    pub residual: f64,
}

fn amplitudes(p: &PhysicalParams, g: f64, delta_tilde: f64) -> (Complex64, Complex64) {
    let a_s = p.drive() / Complex64::new(p.kappa, delta_tilde);
    let b_s = -g * a_s.norm_sqr() / Complex64::new(p.gamma, p.omega_b);
    (a_s, b_s)
}

fn shifted_detuning(p: &PhysicalParams, g: f64, a_s: Complex64, b_s: Complex64) -> f64 {
    p.detuning() + 2.0 * g * b_s.re + 2.0 * p.xi * a_s.norm_sqr()
}

pub fn solve_mean_field(p: &PhysicalParams, mode: MeanFieldMode) -> Result<MeanFields> {
    p.validate()?;
    let g = coupling_from_physical(p);
    let delta = p.detuning();
    match mode {
        MeanFieldMode::Approximate => {
            let (a_s, b_s) = amplitudes(p, g, delta);
            Ok(MeanFields {
                a_s,
                b_s,
                delta_tilde: delta,
                converged: true,
                iterations: 0,
                residual: 0.0,
            })
        }
        MeanFieldMode::SelfConsistent => {
            // The detuning scale keeps the relative test meaningful at zero detuning.
            let scale = delta.abs().max(p.kappa);
            let mut delta_tilde = delta;
            let mut residual = f64::INFINITY;
            let mut iterations = 0;
            while iterations < MAX_ITERATIONS {
                iterations += 1;
                let (a_s, b_s) = amplitudes(p, g, delta_tilde);
                let target = shifted_detuning(p, g, a_s, b_s);
                residual = (target - delta_tilde).abs() / scale;
                if residual < FIXED_POINT_RTOL {
                    delta_tilde = target;
                    break;
                }
                delta_tilde += DAMPING * (target - delta_tilde);
            }
            let (a_s, b_s) = amplitudes(p, g, delta_tilde);
            let final_residual = (shifted_detuning(p, g, a_s, b_s) - delta_tilde).abs() / scale;
            Ok(MeanFields {
                a_s,
                b_s,
                delta_tilde,
                converged: residual < FIXED_POINT_RTOL && final_residual < FIXED_POINT_RTOL,
                iterations,
                residual: final_residual,
            })
        }
    }
}

/// Drive phase that makes the cavity amplitude real and positive for a given
/// effective detuning: `arg(kappa + i delta_tilde)`.
pub fn real_amplitude_phase(kappa: f64, delta_tilde: f64) -> f64 {
    delta_tilde.atan2(kappa)
}

/// Dimensionless model parameters, in units of the mechanical frequency.
///
/// `G = |g a_s|`, `chi = -2 i xi a_s^2` with `phi = arg(chi)`; `phi` is stored
/// as 0 when `chi` vanishes.
pub fn effective_params(mf: &MeanFields, p: &PhysicalParams) -> Result<EffectiveParams> {
    if !mf.converged {
        return Err(Error::UnconvergedMeanField {
            iterations: mf.iterations,
        });
    }
    let g = coupling_from_physical(p);
    let chi = Complex64::new(0.0, -2.0 * p.xi) * mf.a_s * mf.a_s;
    let chi_mag = chi.norm();
    let phi = if chi_mag > 0.0 {
        chi.im.atan2(chi.re)
    } else {
        0.0
    };
    let w = p.omega_b;
    Ok(EffectiveParams {
        delta_a: mf.delta_tilde / w,
        omega_b: 1.0,
        kappa: p.kappa / w,
        gamma: p.gamma / w,
        coupling_g: g * mf.a_s.norm() / w,
        chi_mag: chi_mag / w,
        phi,
        n_b: thermal_occupation(p.temperature, w),
        n_a: 0.0,
    })
}
