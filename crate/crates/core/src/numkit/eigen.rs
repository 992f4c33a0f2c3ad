//! Dense eigensolvers for small and moderate matrices.

#[allow(unused_imports)]
use num_traits::Float;
use super::linalg::{hermitian_deviation, max_abs, CMat, CVec};
use crate::{Error, Result, C64};
use alloc::vec::Vec;
use nalgebra::linalg::{Schur, SymmetricEigen};

/// Relative asymmetry accepted by [`hermitian_eigen`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues in ascending order with unit-norm eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

/// Full eigendecomposition of a dense Hermitian matrix.
pub fn hermitian_eigen(matrix: &CMat) -> Result<HermitianEigen> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
    }
    let (row, col, deviation) = hermitian_deviation(matrix);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { row, col, deviation });
    }
    let n = matrix.nrows();
    // symmetrize so the solver sees an exactly Hermitian input
    let sym = CMat::from_fn(n, n, |i, j| (matrix[(i, j)] + matrix[(j, i)].conj()) * 0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(src);
        let nrm = v.norm();
        vectors.set_column(dst, &(v / C64::new(nrm, 0.0)));
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigenpairs of a small general complex matrix (Schur form plus triangular
/// back substitution). Vectors are unit-norm; order follows the Schur diagonal.
pub fn general_eigen(matrix: &CMat) -> Result<Vec<(C64, CVec)>> {
    let n = matrix.nrows();
    if n != matrix.ncols() {
        return Err(Error::DimensionMismatch { expected: n, got: matrix.ncols() });
    }
    let scale = max_abs(matrix).max(f64::MIN_POSITIVE);
    let (q, t) = Schur::try_new(matrix.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Convergence(alloc::string::String::from("Schur decomposition did not converge")))?
        .unpack();
    let tiny = f64::EPSILON * scale;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lam = t[(k, k)];
        let mut y = CVec::zeros(n);
        y[k] = C64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = C64::new(0.0, 0.0);
            for l in j + 1..=k {
                s += t[(j, l)] * y[l];
            }
            let mut d = t[(j, j)] - lam;
            if d.norm() < tiny {
                d = C64::new(tiny, 0.0);
            }
            y[j] = -s / d;
        }
        let v = &q * y;
        let nrm = v.norm();
        out.push((lam, v / C64::new(nrm, 0.0)));
    }
    Ok(out)
}
