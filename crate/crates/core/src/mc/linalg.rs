use nalgebra::DMatrix;

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-10;
const NEGATIVE_TOL: f64 = 1e-8;

/// Natural-log determinant of a symmetric PSD matrix, with the number of
/// eigenvalues that were slightly negative and clamped to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub ln: f64,
    pub clamped: usize,
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Domain(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
    }
    let scale = max_abs(m).max(1.0);
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if worst > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric(worst));
    }
    Ok(())
}

/// Eigenvalue route. Eigenvalues below `-1e-8 * ||M||` are an error; smaller
/// negative ones are clamped to zero and counted.
pub fn logdet_psd_detailed(m: &DMatrix<f64>) -> Result<LogDet> {
    check_symmetric(m)?;
    if m.nrows() == 0 {
        return Ok(LogDet { ln: 0.0, clamped: 0 });
    }
    let norm = m.norm();
    let eig = m.clone().symmetric_eigen();
    let mut ln = 0.0;
    let mut clamped = 0;
    for &lambda in eig.eigenvalues.iter() {
        if lambda < -NEGATIVE_TOL * norm {
            return Err(Error::NotPsd { eigenvalue: lambda, norm });
        }
        if lambda <= 0.0 {
            clamped += 1;
        }
        ln += lambda.max(0.0).ln();
    }
    Ok(LogDet { ln, clamped })
}

pub fn logdet_psd(m: &DMatrix<f64>) -> Result<f64> {
    logdet_psd_detailed(m).map(|d| d.ln)
}

/// Cholesky route; requires strict positive definiteness.
pub fn logdet_cholesky(m: &DMatrix<f64>) -> Result<f64> {
    check_symmetric(m)?;
    let norm = m.norm();
    let chol = m.clone().cholesky().ok_or(Error::NotPsd { eigenvalue: f64::NAN, norm })?;
    Ok(2.0 * chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>())
}
