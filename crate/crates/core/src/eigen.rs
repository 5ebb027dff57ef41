//! Dense Hermitian eigensolver with a residual contract.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Lowest eigenpairs of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns match `eigenvalues`.
    pub eigenvectors: Option<CMatrix>,
    /// `||H v - E v||` per reported pair.
    pub residuals: Vec<f64>,
    pub dimension: usize,
    /// Infinity norm of the input.
    pub matrix_norm: f64,
}

impl SpectrumResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |a, &b| a.max(b))
    }
}

const MAX_SWEEPS: usize = 10_000;

pub fn inf_norm(h: &CMatrix) -> f64 {
    h.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest `|H_ij - conj(H_ji)|` relative to the infinity norm.
pub fn relative_asymmetry(h: &CMatrix) -> f64 {
    let n = h.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..=i {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    let norm = inf_norm(h);
    if norm == 0.0 {
        worst
    } else {
        worst / norm
    }
}

/// The `n_lowest` smallest eigenvalues, with eigenvectors when `vectors` is set.
///
/// Residuals are always computed and must satisfy `||Hv - Ev|| <= 1e-9 ||H||`.
pub fn eigensolve(h: &CMatrix, n_lowest: usize, vectors: bool) -> Result<SpectrumResult> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::InvalidArgument(format!("matrix is {}x{}, not square", n, h.ncols())));
    }
    if n_lowest > n {
        return Err(Error::InvalidArgument(format!("asked for {n_lowest} eigenvalues of a {n}x{n} matrix")));
    }
    let norm = inf_norm(h);
    if !norm.is_finite() {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let eig = nalgebra::SymmetricEigen::try_new(h.clone(), f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| Error::ConvergenceFailure(format!("no convergence in {MAX_SWEEPS} sweeps at dimension {n}")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    order.truncate(n_lowest);

    let mut values = Vec::with_capacity(n_lowest);
    let mut residuals = Vec::with_capacity(n_lowest);
    let mut vecs = CMatrix::zeros(n, n_lowest);
    for (c, &idx) in order.iter().enumerate() {
        let lam = eig.eigenvalues[idx];
        let v = eig.eigenvectors.column(idx);
        let r = (h * v - v * Complex64::new(lam, 0.0)).norm();
        if !(r <= 1e-9 * norm.max(f64::MIN_POSITIVE)) {
            return Err(Error::ConvergenceFailure(format!(
                "residual {r:.3e} of eigenvalue {lam:.6e} exceeds 1e-9 * {norm:.3e}"
            )));
        }
        values.push(lam);
        residuals.push(r);
        vecs.set_column(c, &v);
    }
    Ok(SpectrumResult {
        eigenvalues: values,
        eigenvectors: vectors.then_some(vecs),
        residuals,
        dimension: n,
        matrix_norm: norm,
    })
}
