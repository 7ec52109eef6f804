//! Dense least-squares and rank utilities on top of nalgebra's SVD.
//!
//! Every rank decision in the library goes through [`rank_from_singular_values`]
//! with a relative threshold, so solver diagnostics and the algebra-dimension
//! computations agree on what "numerically zero" means.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value cutoff used for all rank decisions.
pub const RANK_REL_TOL: f64 = 1e-8;

/// Outcome of a least-squares solve with diagnostics attached.
#[derive(Debug, Clone)]
pub struct LstsqSolution {
    pub solution: DVector<f64>,
    /// Max-abs entry of `A·x − b`.
    pub residual_inf: f64,
    pub rank: usize,
    /// `ncols − rank`: dimension of the solution set's direction space.
    pub nullspace_dim: usize,
    pub sigma_max: f64,
}

/// Minimum-norm least-squares solution of `A·x ≈ b` via SVD, with rank
/// determined by singular values above `RANK_REL_TOL · σ_max`.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> LstsqSolution {
    let ncols = a.ncols();
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = if sigma_max > 0.0 {
        RANK_REL_TOL * sigma_max
    } else {
        f64::INFINITY
    };
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > cutoff)
        .count();
    let solution = svd
        .solve(b, cutoff)
        .unwrap_or_else(|_| DVector::zeros(ncols));
    let residual = a * &solution - b;
    LstsqSolution {
        residual_inf: residual.amax(),
        rank,
        nullspace_dim: ncols - rank,
        sigma_max,
        solution,
    }
}

/// Rank of a matrix with the library-wide relative threshold.
pub fn rank(a: &DMatrix<f64>) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let svd = a.clone().svd(false, false);
    rank_from_singular_values(svd.singular_values.as_slice())
}

pub fn rank_from_singular_values(sigma: &[f64]) -> usize {
    let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > RANK_REL_TOL * sigma_max).count()
}

/// Column-major vectorization of a matrix.
pub fn vec_of(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

/// Matrix whose columns are the vectorizations of `mats`.
pub fn stack_columns(mats: &[DMatrix<f64>]) -> DMatrix<f64> {
    assert!(!mats.is_empty());
    let rows = mats[0].nrows() * mats[0].ncols();
    let mut out = DMatrix::zeros(rows, mats.len());
    for (c, m) in mats.iter().enumerate() {
        out.set_column(c, &vec_of(m));
    }
    out
}

/// Best-approximation residual (max-abs) of `target` against the span of
/// `basis`, all treated as vectors.
pub fn span_residual(basis: &[DMatrix<f64>], target: &DMatrix<f64>) -> f64 {
    if basis.is_empty() {
        return target.amax();
    }
    let a = stack_columns(basis);
    let b = vec_of(target);
    lstsq(&a, &b).residual_inf
}

/// Dimension of the span of `mats` as vectors.
pub fn span_dimension(mats: &[DMatrix<f64>]) -> usize {
    if mats.is_empty() {
        return 0;
    }
    rank(&stack_columns(mats))
}
