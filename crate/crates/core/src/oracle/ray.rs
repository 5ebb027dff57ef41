//! Central equation in the plane-wave basis along the `K1` ray.

use num_complex::Complex64;

use super::{Basis, DiscretizedHamiltonian};
use crate::bloch::{coupling, BandModel, BlochVector};
use crate::eigen::CMatrix;
use crate::error::{Error, Result};

/// Components `k + j K1`, `j = -n_harmonics..=n_harmonics`; the diagonal is
/// `|k + j K1|^2 - a + V(0)` and entry `(i, j)` is `V((i - j) K1; k_s + j tau)`.
pub fn assemble_perturbed(model: &BandModel, k: BlochVector, n_harmonics: usize) -> Result<DiscretizedHamiltonian> {
    if n_harmonics < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 harmonics, got {n_harmonics}")));
    }
    let spec = &model.spec;
    let n = n_harmonics as i32;
    let dim = 2 * n_harmonics + 1;
    let v0 = model.diagonal_shift();
    let mut h = CMatrix::zeros(dim, dim);
    for col in -n..=n {
        let q = k.k_s + col as f64 * spec.tau();
        let c = (col + n) as usize;
        h[(c, c)] = Complex64::new(model.free_energy(k, col) + v0, 0.0);
        for row in (col - 3).max(-n)..=(col + 3).min(n) {
            if row != col {
                h[((row + n) as usize, c)] = coupling(spec, model.form, row - col, q);
            }
        }
    }
    Ok(DiscretizedHamiltonian {
        matrix: h,
        basis: Basis::PlaneWaveRay { n_harmonics },
        k,
    })
}
