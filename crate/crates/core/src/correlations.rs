//! Rényi-2 entropies, Gaussian Rényi-2 mutual information and Gaussian
//! discord with measurements on the mechanical mode.
//!
//! Absolute entropies are evaluated on `sigma = 2 V`, in which the vacuum has
//! unit determinant and pure states have zero entropy. Mutual information and
//! discord do not depend on that choice.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Dim, Matrix, Matrix2, Matrix4, RawStorage};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{symplectic_spectrum, to_dynamic, CovarianceMatrix, VACUUM_VARIANCE};
use crate::simplex::{self, SimplexOptions};

/// Tolerance on the uncertainty relation used to accept input states.
pub const PHYSICAL_TOL: f64 = 1e-9;

/// Negative discord values larger than this in magnitude are flagged when clipped.
pub const CLIP_TOL: f64 = 1e-9;

/// Pure single-mode Gaussian measurement seed: a squeezed vacuum with
/// squeezing `lambda` rotated by `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementSeed {
    pub lambda: f64,
    pub theta: f64,
}

impl MeasurementSeed {
    pub fn new(lambda: f64, theta: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must be positive and finite",
            });
        }
        Ok(Self {
            lambda,
            theta: theta.rem_euclid(PI),
        })
    }

    /// Seed covariance for a given vacuum variance; its determinant is `vacuum^2`.
    pub fn covariance_with_vacuum(&self, vacuum: f64) -> Matrix2<f64> {
        let (s, c) = self.theta.sin_cos();
        let rot = Matrix2::new(c, -s, s, c);
        rot * Matrix2::new(vacuum * self.lambda, 0.0, 0.0, vacuum / self.lambda) * rot.transpose()
    }

    /// `(1/2) R(theta) diag(lambda, 1/lambda) R(theta)^T`.
    pub fn covariance(&self) -> Matrix2<f64> {
        self.covariance_with_vacuum(VACUUM_VARIANCE)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizerSettings {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_points: usize,
    pub theta_points: usize,
    /// Relative tolerance of the simplex refinement.
    pub refine_rtol: f64,
    pub max_iterations: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            lambda_min: 1e-3,
            lambda_max: 1e3,
            lambda_points: 40,
            theta_points: 20,
            refine_rtol: 1e-9,
            max_iterations: 2000,
        }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_min > 0.0 && self.lambda_max > self.lambda_min) {
            return Err(Error::InvalidSettings(
                "need 0 < lambda_min < lambda_max".into(),
            ));
        }
        if self.lambda_points < 2 || self.theta_points < 1 {
            return Err(Error::InvalidSettings(
                "need at least 2 lambda points and 1 theta point".into(),
            ));
        }
        if !(self.refine_rtol > 0.0) {
            return Err(Error::InvalidSettings(
                "refine_rtol must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Discord together with the optimizer diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct DiscordResult {
    /// Discord, clipped at zero.
    pub discord: f64,
    /// Discord before clipping.
    pub raw: f64,
    pub mutual_information: f64,
    /// One-way classical correlation `I - D` (before clipping).
    pub classical: f64,
    pub seed: MeasurementSeed,
    /// Best `(1/2) ln det` of the conditional state over the coarse grid.
    pub grid_minimum: f64,
    /// Best value after simplex refinement, never above `grid_minimum`.
    pub refined_minimum: f64,
    pub converged: bool,
    /// Set when clipping removed more than [`CLIP_TOL`].
    pub clipped: bool,
}

fn to_dmatrix<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(m: &Matrix<f64, R, C, S>) -> DMatrix<f64> {
    DMatrix::from_iterator(m.nrows(), m.ncols(), m.iter().copied())
}

/// `(1/2) ln det(2 V)` of a covariance block; zero for pure states.
pub fn renyi2_entropy<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(
    v: &Matrix<f64, R, C, S>,
) -> Result<f64> {
    let sigma = to_dmatrix(v) * 2.0;
    if !sigma.is_square() {
        return Err(Error::DimensionMismatch {
            expected: sigma.nrows(),
            rows: sigma.nrows(),
            cols: sigma.ncols(),
        });
    }
    let chol = sigma.cholesky().ok_or(Error::NotPositiveDefinite)?;
    // ln det = 2 sum ln L_ii
    Ok(chol.l_dirty().diagonal().iter().map(|x| x.ln()).sum())
}

fn ensure_physical(v: &Matrix4<f64>, vacuum: f64) -> Result<()> {
    let nu = symplectic_spectrum(&to_dynamic(v))?;
    let nu_min = nu[0] * VACUUM_VARIANCE / vacuum;
    if nu_min < VACUUM_VARIANCE - PHYSICAL_TOL {
        return Err(Error::NonPhysical {
            min_eigenvalue: nu_min,
        });
    }
    Ok(())
}

fn half_ln_det2(m: &Matrix2<f64>) -> f64 {
    0.5 * m.determinant().ln()
}

/// `(1/2) ln(det V_a det V_b / det V)`.
pub fn mutual_information(v: &CovarianceMatrix) -> Result<f64> {
    ensure_physical(v.matrix(), VACUUM_VARIANCE)?;
    Ok(mutual_information_unchecked(v.matrix()))
}

fn mutual_information_unchecked(v: &Matrix4<f64>) -> f64 {
    let va = v.fixed_view::<2, 2>(0, 0).into_owned();
    let vb = v.fixed_view::<2, 2>(2, 2).into_owned();
    0.5 * (va.determinant().ln() + vb.determinant().ln() - v.determinant().ln())
}

fn conditional_block(v: &Matrix4<f64>, seed: &MeasurementSeed, vacuum: f64) -> Matrix2<f64> {
    let va = v.fixed_view::<2, 2>(0, 0).into_owned();
    let vb = v.fixed_view::<2, 2>(2, 2).into_owned();
    let c = v.fixed_view::<2, 2>(0, 2).into_owned();
    // In the seed's principal frame the seed only adds to the diagonal, so the
    // inverse below stays accurate for extreme squeezing.
    let (sn, cs) = seed.theta.sin_cos();
    let rot = Matrix2::new(cs, -sn, sn, cs);
    let m = rot.transpose() * vb * rot;
    let (p, q, r) = (
        m[(0, 0)] + vacuum * seed.lambda,
        0.5 * (m[(0, 1)] + m[(1, 0)]),
        m[(1, 1)] + vacuum / seed.lambda,
    );
    let det = p * r - q * q;
    let inv = Matrix2::new(r, -q, -q, p) / det;
    let cr = c * rot;
    let out = va - cr * inv * cr.transpose();
    (out + out.transpose()) * 0.5
}

/// Covariance of the cavity mode after a Gaussian measurement with seed `m`
/// on the mechanical mode: `V_a - C (V_b + sigma_m)^-1 C^T`.
pub fn conditional_covariance(v: &CovarianceMatrix, m: &MeasurementSeed) -> Matrix2<f64> {
    conditional_block(v.matrix(), m, VACUUM_VARIANCE)
}

/// Gaussian Rényi-2 discord with measurements on the mechanical mode.
pub fn gaussian_discord(v: &CovarianceMatrix, opt: &OptimizerSettings) -> Result<DiscordResult> {
    discord_with_vacuum(&(v.matrix() * 2.0), 1.0, opt)
}

/// Discord of a covariance matrix written in a convention with the given
/// vacuum variance. Every log-determinant is taken literally on `v`, and the
/// measurement seeds are scaled to the same vacuum.
pub fn discord_with_vacuum(
    v: &Matrix4<f64>,
    vacuum: f64,
    opt: &OptimizerSettings,
) -> Result<DiscordResult> {
    opt.validate()?;
    ensure_physical(v, vacuum)?;

    let vb = v.fixed_view::<2, 2>(2, 2).into_owned();
    let base = half_ln_det2(&vb) - 0.5 * v.determinant().ln();
    let objective = |log_lambda: f64, theta: f64| -> f64 {
        let seed = MeasurementSeed {
            lambda: log_lambda.clamp(-50.0, 50.0).exp(),
            theta,
        };
        half_ln_det2(&conditional_block(v, &seed, vacuum))
    };

    let (ln_min, ln_max) = (opt.lambda_min.ln(), opt.lambda_max.ln());
    let ln_step = (ln_max - ln_min) / (opt.lambda_points - 1) as f64;
    let theta_step = PI / opt.theta_points as f64;
    let mut best = (f64::INFINITY, ln_min, 0.0);
    for i in 0..opt.lambda_points {
        let ll = ln_min + ln_step * i as f64;
        for j in 0..opt.theta_points {
            let th = theta_step * j as f64;
            let f = objective(ll, th);
            if f < best.0 {
                best = (f, ll, th);
            }
        }
    }
    let grid_minimum = best.0;

    let refined = simplex::minimize(
        |x| objective(x[0], x[1]),
        &[best.1, best.2],
        &[ln_step, theta_step],
        &SimplexOptions {
            f_rtol: opt.refine_rtol,
            f_atol: 1e-15,
            x_tol: 1e-6,
            max_iterations: opt.max_iterations,
        },
    );
    let (refined_minimum, ll, th) = if refined.f <= grid_minimum {
        (refined.f, refined.x[0], refined.x[1])
    } else {
        best
    };

    let raw = base + refined_minimum;
    let mutual_information = mutual_information_unchecked(v);
    Ok(DiscordResult {
        discord: raw.max(0.0),
        raw,
        mutual_information,
        classical: mutual_information - raw,
        seed: MeasurementSeed {
            lambda: ll.clamp(-50.0, 50.0).exp(),
            theta: th.rem_euclid(PI),
        },
        grid_minimum,
        refined_minimum,
        converged: refined.converged,
        clipped: raw < -CLIP_TOL,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Closed-form minimum of `det` of the conditional state over all Gaussian
    /// measurements on mode b (Adesso & Datta), in the unit-vacuum convention.
    /// Only the local symplectic invariants enter.
    pub(crate) fn min_conditional_det(sigma: &Matrix4<f64>) -> f64 {
        let a = sigma.fixed_view::<2, 2>(0, 0).determinant();
        let b = sigma.fixed_view::<2, 2>(2, 2).determinant();
        let c = sigma.fixed_view::<2, 2>(0, 2).determinant();
        let d = sigma.determinant();
        if (d - a * b).powi(2) <= (1.0 + b) * c * c * (a + d) {
            let root = (c * c + (b - 1.0) * (d - a)).sqrt();
            (2.0 * c * c + (b - 1.0) * (d - a) + 2.0 * c.abs() * root) / (b - 1.0).powi(2)
        } else {
            (a * b - c * c + d
                - (c.powi(4) + (d - a * b).powi(2) - 2.0 * c * c * (a * b + d)).sqrt())
                / (2.0 * b)
        }
    }

    pub(crate) fn closed_form_discord(v: &CovarianceMatrix) -> f64 {
        let s = v.matrix() * 2.0;
        let b = s.fixed_view::<2, 2>(2, 2).determinant();
        0.5 * b.ln() - 0.5 * s.determinant().ln() + 0.5 * min_conditional_det(&s).ln()
    }

    /// Two-mode squeezed thermal state, a standard correlated test state.
    pub(crate) fn squeezed_thermal(na: f64, nb: f64, r: f64) -> CovarianceMatrix {
        // Thermal product state transformed by a two-mode squeezer S(r).
        let t = Matrix4::from_diagonal(&[na + 0.5, na + 0.5, nb + 0.5, nb + 0.5].into());
        let (c, s) = (r.cosh(), r.sinh());
        #[rustfmt::skip]
        let sq = Matrix4::new(
            c, 0.0, s, 0.0,
            0.0, c, 0.0, -s,
            s, 0.0, c, 0.0,
            0.0, -s, 0.0, c,
        );
        CovarianceMatrix::new(sq * t * sq.transpose()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!(
            renyi2_entropy(&(Matrix2::<f64>::identity() * 0.5))
                .unwrap()
                .abs()
                < 1e-15
        );
        let thermal = Matrix2::new(10.5, 0.0, 0.0, 10.5);
        assert_relative_eq!(
            renyi2_entropy(&thermal).unwrap(),
            21f64.ln(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            renyi2_entropy(&thermal).unwrap(),
            3.044522437723423,
            max_relative = 1e-14
        );
        let pure = squeezed_thermal(0.0, 0.0, 0.8);
        assert!(renyi2_entropy(pure.matrix()).unwrap().abs() < 1e-12);
        assert!(matches!(
            renyi2_entropy(&Matrix2::new(1.0, 0.0, 0.0, -1.0)),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn product_states_have_no_correlations() {
        let v = CovarianceMatrix::from_diagonal([0.7, 1.9, 10.5, 10.5]);
        assert!(mutual_information(&v).unwrap().abs() < 1e-14);
        let d = gaussian_discord(&v, &OptimizerSettings::default()).unwrap();
        assert!(d.discord.abs() < 1e-12 && d.raw.abs() < 1e-12);
        let seed = MeasurementSeed::new(3.0, 0.4).unwrap();
        assert_eq!(conditional_covariance(&v, &seed), v.va());
    }

    #[test]
    fn mutual_information_scale_invariant() {
        let v = squeezed_thermal(0.3, 2.0, 0.6);
        let i1 = mutual_information(&v).unwrap();
        let i2 = mutual_information_unchecked(&v.scaled(2.0).matrix().clone_owned());
        assert!(i1 > 0.0);
        assert_relative_eq!(i1, i2, max_relative = 1e-13);
    }

    #[test]
    fn heterodyne_conditional_matches_dense() {
        let v = squeezed_thermal(0.2, 1.5, 0.5);
        let seed = MeasurementSeed::new(1.0, 0.0).unwrap();
        let cond = conditional_covariance(&v, &seed);
        // The conditional block is the Schur complement of [[Va, C], [C^T, Vb + I/2]],
        // whose inverse is the (a, a) block of the full inverse.
        let mut ext = DMatrix::<f64>::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                ext[(i, j)] = v.matrix()[(i, j)];
            }
        }
        ext[(2, 2)] += 0.5;
        ext[(3, 3)] += 0.5;
        let inv = ext.try_inverse().unwrap();
        let schur_inv = inv.view((0, 0), (2, 2)).into_owned();
        let dense = schur_inv.try_inverse().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(cond[(i, j)], dense[(i, j)], max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn discord_matches_closed_form() {
        for (na, nb, r) in [
            (0.0, 0.0, 0.3),
            (0.5, 3.0, 0.7),
            (2.0, 0.1, 1.1),
            (10.0, 10.0, 0.2),
        ] {
            let v = squeezed_thermal(na, nb, r);
            let d = gaussian_discord(&v, &OptimizerSettings::default()).unwrap();
            let oracle = closed_form_discord(&v);
            assert!(
                (d.discord - oracle).abs() <= 1e-7 * oracle.abs().max(1e-3),
                "{na} {nb} {r}: {} vs {oracle}",
                d.discord
            );
            assert!(d.refined_minimum <= d.grid_minimum);
            assert!(d.discord <= d.mutual_information + 1e-9);
        }
    }

    #[test]
    fn pure_state_discord_equals_entanglement_entropy() {
        // For pure states J = I/2 and D = S2(a).
        let v = squeezed_thermal(0.0, 0.0, 0.6);
        let d = gaussian_discord(&v, &OptimizerSettings::default()).unwrap();
        let s_a = renyi2_entropy(&v.va()).unwrap();
        assert_relative_eq!(d.discord, s_a, max_relative = 1e-7);
        assert_relative_eq!(d.mutual_information, 2.0 * s_a, max_relative = 1e-12);
    }

    #[test]
    fn rejects_unphysical_state() {
        let v = CovarianceMatrix::from_diagonal([0.1, 0.1, 1.0, 1.0]);
        assert!(matches!(
            mutual_information(&v),
            Err(Error::NonPhysical { .. })
        ));
        assert!(gaussian_discord(&v, &OptimizerSettings::default()).is_err());
    }

    #[test]
    fn seed_is_pure() {
        let m = MeasurementSeed::new(7.3, 2.0).unwrap();
        assert_relative_eq!(m.covariance().determinant(), 0.25, max_relative = 1e-14);
        assert!(MeasurementSeed::new(0.0, 1.0).is_err());
        assert!(MeasurementSeed::new(1.0, 4.0).unwrap().theta < PI);
    }

    #[test]
    fn extreme_seeds_reach_homodyne_limit() {
        let v = squeezed_thermal(0.7, 3.0, 0.6);
        let (va, vb, c) = (v.va(), v.vb(), v.c());
        // Sharp x_b measurement: V_a - c_x c_x^T / V_b11.
        let cx = c.column(0);
        let homodyne = va - cx * cx.transpose() / vb[(0, 0)];
        let sharp =
            conditional_covariance(&v, &MeasurementSeed::new((-50.0f64).exp(), 0.0).unwrap());
        assert_relative_eq!(sharp, homodyne, max_relative = 1e-12);
        // Same limit reached from the other end with the axes swapped.
        let swapped =
            conditional_covariance(&v, &MeasurementSeed::new(50.0f64.exp(), PI / 2.0).unwrap());
        assert_relative_eq!(swapped, homodyne, max_relative = 1e-9);
    }

    fn random_state() -> impl Strategy<Value = CovarianceMatrix> {
        (
            0.0..5.0f64,
            0.0..5.0f64,
            0.0..1.2f64,
            0.0..PI,
            0.0..PI,
            -0.8..0.8f64,
            -0.8..0.8f64,
        )
            .prop_map(|(na, nb, r, ta, tb, sa, sb)| {
                let base = squeezed_thermal(na, nb, r);
                // Local rotation and squeezing on each mode keep the state physical.
                let local = |t: f64, s: f64| {
                    let (sn, cs) = t.sin_cos();
                    Matrix2::new(cs, -sn, sn, cs) * Matrix2::new(s.exp(), 0.0, 0.0, (-s).exp())
                };
                let mut l = Matrix4::zeros();
                l.fixed_view_mut::<2, 2>(0, 0).copy_from(&local(ta, sa));
                l.fixed_view_mut::<2, 2>(2, 2).copy_from(&local(tb, sb));
                let m = l * base.matrix() * l.transpose();
                CovarianceMatrix::new((m + m.transpose()) * 0.5).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn measurement_never_increases_uncertainty(v in random_state()) {
            let det_a = v.va().determinant();
            for i in 0..12 {
                let lambda = 10f64.powf(-3.0 + 0.5 * i as f64);
                for j in 0..8 {
                    let seed = MeasurementSeed::new(lambda, PI * j as f64 / 8.0).unwrap();
                    let c = conditional_covariance(&v, &seed);
                    prop_assert!(c.determinant() <= det_a * (1.0 + 1e-12));
                    prop_assert!(c.cholesky().is_some());
                }
            }
        }

        #[test]
        fn discord_bounds_and_convention(v in random_state()) {
            let opt = OptimizerSettings::default();
            let d = gaussian_discord(&v, &opt).unwrap();
            prop_assert!(d.discord >= 0.0);
            prop_assert!(d.mutual_information >= -1e-12);
            prop_assert!(d.discord <= d.mutual_information + 1e-9);
            prop_assert!(d.refined_minimum <= d.grid_minimum);
            for c in [1.0, 2.0, 4.0] {
                let scaled = discord_with_vacuum(&(v.matrix() * c), 0.5 * c, &opt).unwrap();
                prop_assert!((scaled.raw - d.raw).abs() <= 1e-9);
                prop_assert!((scaled.mutual_information - d.mutual_information).abs() <= 1e-9);
            }
        }

        #[test]
        fn renyi_additive_over_direct_sums(v in random_state(), w in random_state()) {
            let joint = CovarianceMatrix::from_blocks(&v.va(), &w.vb(), &Matrix2::zeros()).unwrap();
            let sum = renyi2_entropy(&v.va()).unwrap() + renyi2_entropy(&w.vb()).unwrap();
            prop_assert!((renyi2_entropy(joint.matrix()).unwrap() - sum).abs() <= 1e-12 * sum.abs().max(1.0));
        }
    }
}
