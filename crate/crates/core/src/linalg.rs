//! Small dense linear-algebra helpers shared by the modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::{Error, Result, C64};

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted
/// ascending and eigenvector columns permuted to match.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

pub fn hermitian_eigen(matrix: &DMatrix<C64>) -> Result<HermitianEigen> {
    if !matrix.is_square() {
        return Err(Error::InvalidInput(format!(
            "eigen-decomposition needs a square matrix, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let dim = matrix.nrows();
    let eig = SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, 0).ok_or_else(|| {
        Error::NumericalQuality("Hermitian eigensolver failed to converge".into())
    })?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Singular values in descending order.
pub fn singular_values(matrix: &DMatrix<C64>) -> Result<Vec<f64>> {
    if matrix.nrows() == 0 || matrix.ncols() == 0 {
        return Ok(Vec::new());
    }
    let svd = nalgebra::linalg::SVD::try_new(matrix.clone(), false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::NumericalQuality("singular value decomposition failed".into()))?;
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in residual");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &DMatrix<C64>) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn identity(dim: usize) -> DMatrix<C64> {
    DMatrix::identity(dim, dim)
}

/// `max |A* A - 1|` entrywise.
pub fn unitarity_residual(a: &DMatrix<C64>) -> f64 {
    max_abs_diff(&(a.adjoint() * a), &identity(a.ncols()))
}

/// `max |A - A*|` entrywise.
pub fn hermiticity_residual(a: &DMatrix<C64>) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

pub fn diagonal(values: &[C64]) -> DMatrix<C64> {
    DMatrix::from_diagonal(&DVector::from_column_slice(values))
}
