//! Hurwitz stability and the steady-state Lyapunov equation `A V + V A^T = -D`.
//!
//! The solver vectorizes the matrix equation into `(I (x) A + A (x) I) vec(V) = -vec(D)`
//! and solves it with a fully pivoted LU factorization. It works for any
//! dimension but is meant for the small systems of few-mode Gaussian models.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, DiffusionMatrix, DriftMatrix};

/// Relative tolerance on the stability margin, scaled by `||A||_F`.
pub const STABILITY_RTOL: f64 = 1e-10;

/// Bound on `||A V + V A^T + D||_F / ||D||_F` accepted from the solver.
pub const RESIDUAL_RTOL: f64 = 1e-10;

const PIVOT_RTOL: f64 = 1e-14;

/// Largest real part of the spectrum of `a`.
pub fn spectral_abscissa(a: &DMatrix<f64>) -> f64 {
    a.complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Hurwitz test with the default tolerance `1e-10 * ||A||_F`.
pub fn is_stable(a: &DMatrix<f64>) -> bool {
    is_stable_with_tol(a, STABILITY_RTOL * a.norm())
}

/// True iff every eigenvalue of `a` has real part below `-tol`.
pub fn is_stable_with_tol(a: &DMatrix<f64>, tol: f64) -> bool {
    a.is_square() && spectral_abscissa(a) < -tol
}

impl DriftMatrix {
    pub fn is_stable(&self) -> bool {
        is_stable(&self.to_dynamic())
    }

    pub fn spectral_abscissa(&self) -> f64 {
        spectral_abscissa(&self.to_dynamic())
    }
}

/// `||A V + V A^T + D||_F`.
pub fn lyapunov_residual(a: &DMatrix<f64>, v: &DMatrix<f64>, d: &DMatrix<f64>) -> f64 {
    (a * v + v * a.transpose() + d).norm()
}

/// Solves `A V + V A^T = -D` for a Hurwitz `A`, returning a symmetric `V`
/// whose relative residual is at most [`RESIDUAL_RTOL`].
pub fn solve_lyapunov(a: &DMatrix<f64>, d: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if !a.is_square() || d.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: d.nrows(),
            cols: d.ncols(),
        });
    }
    if !is_stable(a) {
        return Err(Error::UnstableSystem {
            abscissa: spectral_abscissa(a),
        });
    }

    let eye = DMatrix::<f64>::identity(n, n);
    let op = eye.kronecker(a) + a.kronecker(&eye);
    let rhs = -DVector::from_iterator(n * n, d.iter().copied());

    let lu = op.clone().full_piv_lu();
    let u_diag = lu.u().diagonal().abs();
    let pivot_ratio = u_diag.min() / u_diag.max();
    if !(pivot_ratio > PIVOT_RTOL) {
        return Err(Error::SingularSystem { pivot_ratio });
    }
    let mut x = lu
        .solve(&rhs)
        .ok_or(Error::SingularSystem { pivot_ratio })?;

    let bound = RESIDUAL_RTOL * d.norm();
    let mut v = symmetrized(&x, n);
    let mut residual = lyapunov_residual(a, &v, d);
    // A couple of refinement sweeps recover the last digits near the stability boundary.
    for _ in 0..3 {
        if residual <= bound {
            break;
        }
        let r = &rhs - &op * &x;
        if let Some(dx) = lu.solve(&r) {
            x += dx;
        }
        v = symmetrized(&x, n);
        residual = lyapunov_residual(a, &v, d);
    }
    if residual > bound {
        return Err(Error::ResidualBound { residual, bound });
    }
    Ok(v)
}

fn symmetrized(x: &DVector<f64>, n: usize) -> DMatrix<f64> {
    let v = DMatrix::from_column_slice(n, n, x.as_slice());
    (&v + v.transpose()) * 0.5
}

/// Steady-state covariance of the two-mode model.
pub fn solve_steady_covariance(a: &DriftMatrix, d: &DiffusionMatrix) -> Result<CovarianceMatrix> {
    let v = solve_lyapunov(&a.to_dynamic(), &d.to_dynamic())?;
    CovarianceMatrix::from_dynamic(&v)
}

/// Routh-Hurwitz test on the characteristic polynomial. Slower and less
/// robust than the eigenvalue criterion; kept as an independent cross-check.
pub mod routh_hurwitz {
    use nalgebra::DMatrix;

    /// Coefficients `[1, c_1, ..., c_n]` of `det(s I - A) = s^n + c_1 s^(n-1) + ... + c_n`
    /// by the Faddeev-LeVerrier recursion.
    pub fn characteristic_polynomial(a: &DMatrix<f64>) -> Vec<f64> {
        let n = a.nrows();
        let eye = DMatrix::<f64>::identity(n, n);
        let mut coeffs = vec![1.0];
        let mut m = DMatrix::<f64>::zeros(n, n);
        for k in 1..=n {
            m = a * &m + &eye * coeffs[k - 1];
            let c = -(a * &m).trace() / k as f64;
            coeffs.push(c);
        }
        coeffs
    }

    /// Leading principal minors of the Hurwitz matrix of a monic polynomial.
    pub fn hurwitz_minors(coeffs: &[f64]) -> Vec<f64> {
        let n = coeffs.len() - 1;
        let coeff = |k: isize| -> f64 {
            if k < 0 || k as usize > n {
                0.0
            } else {
                coeffs[k as usize]
            }
        };
        let mut h = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = coeff(2 * (j as isize) - (i as isize) + 1);
            }
        }
        (1..=n)
            .map(|k| h.view((0, 0), (k, k)).into_owned().determinant())
            .collect()
    }

    /// All Hurwitz minors strictly positive.
    pub fn is_hurwitz(a: &DMatrix<f64>) -> bool {
        let coeffs = characteristic_polynomial(a);
        hurwitz_minors(&coeffs).iter().all(|&m| m > 0.0)
    }
}
