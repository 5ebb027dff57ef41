//! Brute-force reference spectra: finite-difference discretizations of the
//! full operator and the plane-wave central equation, solved densely.

mod grid;
mod ray;

pub use grid::{assemble_full, assemble_full_with_limit, assemble_mode_restricted, assemble_sector, assemble_surface_gauge};
pub use ray::assemble_perturbed;

use rayon::prelude::*;

use crate::bloch::{BandModel, BandSource, BandStructure, BlochVector, ReciprocalVector};
use crate::eigen::{self, CMatrix, SpectrumResult};
use crate::error::{Error, Result};
use crate::helix::HelixSpec;

/// Dimension guard for dense assembly.
pub const DEFAULT_MAX_DIM: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Grid2D { n_s: usize, n_phi: usize },
    Sector { n_s: usize, n_phi: usize, sector: i64 },
    ModeRestricted { n_s: usize, n_phi: usize },
    PlaneWaveRay { n_harmonics: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedHamiltonian {
    pub matrix: CMatrix,
    pub basis: Basis,
    pub k: BlochVector,
}

impl DiscretizedHamiltonian {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn relative_asymmetry(&self) -> f64 {
        eigen::relative_asymmetry(&self.matrix)
    }

    pub fn eigensolve(&self, n_lowest: usize) -> Result<SpectrumResult> {
        eigen::eigensolve(&self.matrix, n_lowest.min(self.dimension()), false)
    }
}

/// Grid and basis sizes of the oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub n_s: usize,
    pub n_phi: usize,
    pub n_harmonics: usize,
    pub bands: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            n_s: 64,
            n_phi: 64,
            n_harmonics: 7,
            bands: 2,
        }
    }
}

/// Lowest `bands` eigenvalues at `k` from the chosen source.
pub fn energies_at(model: &BandModel, k: BlochVector, source: BandSource, opts: &OracleOptions) -> Result<Vec<f64>> {
    match source {
        BandSource::TwoBand => {
            let (a, b) = model.two_band_energies(k, ReciprocalVector::k1())?;
            Ok(vec![a, b].into_iter().take(opts.bands).collect())
        }
        BandSource::FirstOrder => {
            let n = opts.n_harmonics as i32;
            let v0 = model.diagonal_shift();
            let mut e: Vec<f64> = (-n..=n).map(|j| model.free_energy(k, j) + v0).collect();
            e.sort_by(f64::total_cmp);
            e.truncate(opts.bands);
            Ok(e)
        }
        BandSource::OraclePerturbed => {
            Ok(assemble_perturbed(model, k, opts.n_harmonics)?.eigensolve(opts.bands)?.eigenvalues)
        }
        BandSource::OracleFull => {
            Ok(assemble_sector(&model.spec, k, opts.n_s, opts.n_phi, 0)?.eigensolve(opts.bands)?.eigenvalues)
        }
    }
}

/// Band energies along `path`, evaluated in parallel and collected in path order.
pub fn band_sweep(model: &BandModel, path: &[BlochVector], source: BandSource, opts: &OracleOptions) -> Result<BandStructure> {
    let energies: Result<Vec<Vec<f64>>> = path.par_iter().map(|&k| energies_at(model, k, source, opts)).collect();
    BandStructure::new(path.to_vec(), energies?, source)
}

/// Gap between the two lowest levels at the zone boundary `-K1/2`.
pub fn zone_boundary_gap(model: &BandModel, source: BandSource, opts: &OracleOptions) -> Result<f64> {
    let k = BlochVector::zone_boundary(&model.spec);
    let e = energies_at(model, k, source, &OracleOptions { bands: 2, ..*opts })?;
    Ok(e[1] - e[0])
}

/// Lowest eigenvalue of the full operator at `k` in the ray sector.
pub fn ground_state(spec: &HelixSpec, k: BlochVector, n_s: usize, n_phi: usize) -> Result<f64> {
    Ok(assemble_sector(spec, k, n_s, n_phi, 0)?.eigensolve(1)?.eigenvalues[0])
}

/// Eliminates the `h^2` and `h^4` error terms from values at `h`, `h/2`, `h/4`.
pub fn richardson3(e_h: f64, e_h2: f64, e_h4: f64) -> f64 {
    (64.0 * e_h4 - 20.0 * e_h2 + e_h) / 45.0
}

/// Observed convergence order from values at `h`, `h/2`, `h/4`.
pub fn observed_order(e_h: f64, e_h2: f64, e_h4: f64) -> f64 {
    ((e_h - e_h2) / (e_h2 - e_h4)).abs().log2()
}

/// One transverse level of the straight-tube check.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderRow {
    pub n: i32,
    pub exact: f64,
    /// Lowest eigenvalue per grid size.
    pub raw: Vec<(usize, f64)>,
    pub extrapolated: f64,
    pub raw_rel_error: f64,
    pub extrapolated_rel_error: f64,
}

/// Straight tube at `k_s = 0`: lowest level in each transverse mode on grids
/// `g`, `2g`, `4g`, extrapolated to zero spacing.
pub fn cylinder_check(rho0: f64, tau: f64, levels: &[i32], base_grid: usize) -> Result<Vec<CylinderRow>> {
    let spec = HelixSpec::new(0.0, tau, rho0, 0.0)?;
    let grids = [base_grid, 2 * base_grid, 4 * base_grid];
    levels
        .par_iter()
        .map(|&n| {
            let exact = crate::bloch::cylinder_limit_energy(&spec, n, 0, None)?;
            let k = BlochVector::new(0.0, n as f64);
            let mut raw = Vec::with_capacity(3);
            for &g in &grids {
                let e = assemble_mode_restricted(&spec, k, g, g)?.eigensolve(1)?.eigenvalues[0];
                raw.push((g, e));
            }
            let extrapolated = richardson3(raw[0].1, raw[1].1, raw[2].1);
            Ok(CylinderRow {
                n,
                exact,
                raw_rel_error: ((raw[0].1 - exact) / exact).abs(),
                extrapolated_rel_error: ((extrapolated - exact) / exact).abs(),
                raw,
                extrapolated,
            })
        })
        .collect()
}

/// Sorted spectrum of every sector, which equals the dense grid spectrum.
pub fn all_sectors(spec: &HelixSpec, k: BlochVector, n_s: usize, n_phi: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n_s * n_phi);
    for l in 0..n_s as i64 {
        let h = assemble_sector(spec, k, n_s, n_phi, l)?;
        out.extend(h.eigensolve(n_phi)?.eigenvalues);
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// `Err` unless every eigenvalue matches within `tol`.
pub fn compare_spectra(a: &[f64], b: &[f64], tol: f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!("spectra differ in length: {} vs {}", a.len(), b.len())));
    }
    let worst = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    if worst <= tol {
        Ok(worst)
    } else {
        Err(Error::InvalidArgument(format!("spectra differ by {worst:.3e} > {tol:.3e}")))
    }
}
