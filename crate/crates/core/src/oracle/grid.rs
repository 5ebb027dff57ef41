//! Second-order finite differences of the flux-form operator on the unit cell.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Basis, DiscretizedHamiltonian, DEFAULT_MAX_DIM};
use crate::bloch::BlochVector;
use crate::eigen::CMatrix;
use crate::error::{Error, Result};
use crate::field::CellGrid;
use crate::geometry;
use crate::helix::HelixSpec;
use crate::operators;

/// Coefficients of `-d_s(p d_s) - d_varphi(r d_varphi) + v` sampled on the grid.
struct Stencil {
    grid: CellGrid,
    /// `p` at `(s_i + ds/2, phi_j)`, row-major.
    p_half: Vec<f64>,
    /// `r` at `(s_i, phi_j + dphi/2)`.
    r_half: Vec<f64>,
    v: Vec<f64>,
    /// Node weights of the generalized problem.
    weight: Option<Vec<f64>>,
}

fn nodes(grid: &CellGrid, ds: f64, dphi: f64, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len());
    for i in 0..grid.n_s {
        for j in 0..grid.n_phi {
            out.push(f(grid.s(i) + ds, grid.phi(j) + dphi));
        }
    }
    out
}

impl Stencil {
    fn flat_gauge(spec: &HelixSpec, grid: CellGrid) -> Self {
        let inv_h2 = |s: f64, phi: f64| geometry::metric_h(spec, s, phi).powi(-2);
        Self {
            grid,
            p_half: nodes(&grid, 0.5 * grid.ds(), 0.0, inv_h2),
            r_half: vec![1.0; grid.len()],
            v: nodes(&grid, 0.0, 0.0, |s, phi| operators::v_eff(spec, s, phi)),
            weight: None,
        }
    }

    fn surface_gauge(spec: &HelixSpec, grid: CellGrid) -> Self {
        let h = |s: f64, phi: f64| geometry::metric_h(spec, s, phi);
        let dphi = PI / grid.n_phi as f64;
        Self {
            grid,
            p_half: nodes(&grid, 0.5 * grid.ds(), 0.0, |s, phi| 1.0 / h(s, phi)),
            r_half: nodes(&grid, 0.0, dphi, h),
            v: nodes(&grid, 0.0, 0.0, |s, phi| h(s, phi) * geometry::v_curv(spec, s, phi)),
            weight: Some(nodes(&grid, 0.0, 0.0, h)),
        }
    }

    /// Dense matrix with Bloch phases `e^{i alpha}` on the s-seam and `e^{i beta}` on the varphi-seam.
    fn dense(&self, alpha: f64, beta: f64) -> CMatrix {
        let g = &self.grid;
        let (ns, np) = (g.n_s, g.n_phi);
        let (ds2, dv2) = (g.ds() * g.ds(), g.dvarphi() * g.dvarphi());
        let mut h = CMatrix::zeros(g.len(), g.len());
        for i in 0..ns {
            for j in 0..np {
                let row = g.index(i, j);
                let p_plus = self.p_half[row];
                let p_minus = self.p_half[g.index((i + ns - 1) % ns, j)];
                let r_plus = self.r_half[row];
                let r_minus = self.r_half[g.index(i, (j + np - 1) % np)];
                h[(row, row)] += Complex64::new((p_plus + p_minus) / ds2 + (r_plus + r_minus) / dv2 + self.v[row], 0.0);

                let fwd = if i + 1 == ns { alpha } else { 0.0 };
                h[(row, g.index((i + 1) % ns, j))] -= Complex64::from_polar(p_plus / ds2, fwd);
                let bwd = if i == 0 { -alpha } else { 0.0 };
                h[(row, g.index((i + ns - 1) % ns, j))] -= Complex64::from_polar(p_minus / ds2, bwd);

                let up = if j + 1 == np { beta } else { 0.0 };
                h[(row, g.index(i, (j + 1) % np))] -= Complex64::from_polar(r_plus / dv2, up);
                let down = if j == 0 { -beta } else { 0.0 };
                h[(row, g.index(i, (j + np - 1) % np))] -= Complex64::from_polar(r_minus / dv2, down);
            }
        }
        if let Some(w) = &self.weight {
            for r in 0..g.len() {
                for c in 0..g.len() {
                    h[(r, c)] /= (w[r] * w[c]).sqrt();
                }
            }
        }
        h
    }
}

fn phases(grid: &CellGrid, k: BlochVector) -> (f64, f64) {
    (k.k_s * grid.period_s, 2.0 * PI * k.n)
}

fn guard(dim: usize, limit: usize) -> Result<()> {
    if dim > limit {
        Err(Error::TooLarge { dim, limit })
    } else {
        Ok(())
    }
}

/// Dense flux-form discretization of the full operator on an `n_s x n_phi` cell.
pub fn assemble_full(spec: &HelixSpec, k: BlochVector, n_s: usize, n_phi: usize) -> Result<DiscretizedHamiltonian> {
    assemble_full_with_limit(spec, k, n_s, n_phi, DEFAULT_MAX_DIM)
}

pub fn assemble_full_with_limit(
    spec: &HelixSpec,
    k: BlochVector,
    n_s: usize,
    n_phi: usize,
    limit: usize,
) -> Result<DiscretizedHamiltonian> {
    let spec = revalidate(spec)?;
    let grid = CellGrid::unit_cell(&spec, n_s, n_phi)?;
    guard(grid.len(), limit)?;
    let (alpha, beta) = phases(&grid, k);
    Ok(DiscretizedHamiltonian {
        matrix: Stencil::flat_gauge(&spec, grid).dense(alpha, beta),
        basis: Basis::Grid2D { n_s, n_phi },
        k,
    })
}

/// Surface-gauge operator `-d_s(h^-1 d_s) - d_varphi(h d_varphi) + h V_curv` with weight `h`,
/// symmetrized as `W^-1/2 A W^-1/2`. Same spectrum as [`assemble_full`] up to discretization error.
pub fn assemble_surface_gauge(
    spec: &HelixSpec,
    k: BlochVector,
    n_s: usize,
    n_phi: usize,
) -> Result<DiscretizedHamiltonian> {
    let spec = revalidate(spec)?;
    let grid = CellGrid::unit_cell(&spec, n_s, n_phi)?;
    guard(grid.len(), DEFAULT_MAX_DIM)?;
    let (alpha, beta) = phases(&grid, k);
    Ok(DiscretizedHamiltonian {
        matrix: Stencil::surface_gauge(&spec, grid).dense(alpha, beta),
        basis: Basis::Grid2D { n_s, n_phi },
        k,
    })
}

/// Block of [`assemble_full`] with screw eigenvalue index `sector`.
///
/// The coefficients are invariant under `(s, phi) -> (s + ds, phi + sgn(tau) m dphi)`
/// with `m = n_phi / n_s`. Sector `l` collects the eigenvectors with
/// `Phi(i + 1, j + sgn(tau) m) = mu Phi(i, j)`,
/// `mu = exp(i (k_s L + sgn(tau) 2 pi n + 2 pi l) / n_s)`; sector 0 holds the
/// states with helical momentum `k_s + n tau`. The union of all sectors
/// reproduces the full spectrum.
pub fn assemble_sector(
    spec: &HelixSpec,
    k: BlochVector,
    n_s: usize,
    n_phi: usize,
    sector: i64,
) -> Result<DiscretizedHamiltonian> {
    let spec = revalidate(spec)?;
    let grid = CellGrid::unit_cell(&spec, n_s, n_phi)?;
    if !n_phi.is_multiple_of(n_s) {
        return Err(Error::InvalidGrid(format!(
            "sector reduction needs n_phi to be a multiple of n_s, got {n_s} x {n_phi}"
        )));
    }
    guard(n_phi, DEFAULT_MAX_DIM)?;
    let sigma: i64 = if spec.tau() > 0.0 { 1 } else { -1 };
    let m = (n_phi / n_s) as i64;
    let (alpha, beta) = phases(&grid, k);
    let mu_arg = (alpha + sigma as f64 * beta + 2.0 * PI * sector as f64) / n_s as f64;
    let np = n_phi as i64;
    let (ds2, dv2) = (grid.ds() * grid.ds(), grid.dvarphi() * grid.dvarphi());
    let ds = grid.ds();

    // psi(j) for j outside [0, n_phi) picks up the twist exp(i beta) per wrap.
    let wrap = |j: i64| -> (usize, f64) {
        let p = j.div_euclid(np);
        (j.rem_euclid(np) as usize, p as f64 * beta)
    };

    let mut h = CMatrix::zeros(n_phi, n_phi);
    for j in 0..n_phi {
        let (s0, phi) = (0.0, grid.phi(j));
        let p_plus = geometry::metric_h(&spec, s0 + 0.5 * ds, phi).powi(-2);
        let p_minus = geometry::metric_h(&spec, s0 - 0.5 * ds, phi).powi(-2);
        let v = operators::v_eff(&spec, s0, phi);
        h[(j, j)] += Complex64::new((p_plus + p_minus) / ds2 + 2.0 / dv2 + v, 0.0);

        let ji = j as i64;
        let (c, ph) = wrap(ji - sigma * m);
        h[(j, c)] -= Complex64::from_polar(p_plus / ds2, mu_arg + ph);
        let (c, ph) = wrap(ji + sigma * m);
        h[(j, c)] -= Complex64::from_polar(p_minus / ds2, -mu_arg + ph);
        let (c, ph) = wrap(ji + 1);
        h[(j, c)] -= Complex64::from_polar(1.0 / dv2, ph);
        let (c, ph) = wrap(ji - 1);
        h[(j, c)] -= Complex64::from_polar(1.0 / dv2, ph);
    }
    Ok(DiscretizedHamiltonian {
        matrix: h,
        basis: Basis::Sector { n_s, n_phi, sector },
        k,
    })
}

/// Projection of the grid operator onto the transverse grid mode `exp(i n phi)`, `n = k.n`.
///
/// Coefficients are replaced by their cross-section averages, which is exact
/// when they do not depend on `phi` (the straight tube).
pub fn assemble_mode_restricted(
    spec: &HelixSpec,
    k: BlochVector,
    n_s: usize,
    n_phi: usize,
) -> Result<DiscretizedHamiltonian> {
    let spec = revalidate(spec)?;
    let grid = CellGrid::unit_cell(&spec, n_s, n_phi)?;
    guard(n_s, DEFAULT_MAX_DIM)?;
    let (alpha, _) = phases(&grid, k);
    let (ds, ds2, dv2) = (grid.ds(), grid.ds() * grid.ds(), grid.dvarphi() * grid.dvarphi());
    let mean = |f: &dyn Fn(f64) -> f64| (0..n_phi).map(|j| f(grid.phi(j))).sum::<f64>() / n_phi as f64;
    let p_half: Vec<f64> = (0..n_s)
        .map(|i| mean(&|phi| geometry::metric_h(&spec, grid.s(i) + 0.5 * ds, phi).powi(-2)))
        .collect();
    let v: Vec<f64> = (0..n_s)
        .map(|i| mean(&|phi| operators::v_eff(&spec, grid.s(i), phi)))
        .collect();
    let transverse = (2.0 - 2.0 * (k.n * 2.0 * PI / n_phi as f64).cos()) / dv2;

    let mut h = CMatrix::zeros(n_s, n_s);
    for i in 0..n_s {
        let p_minus = p_half[(i + n_s - 1) % n_s];
        h[(i, i)] += Complex64::new((p_half[i] + p_minus) / ds2 + transverse + v[i], 0.0);
        let fwd = if i + 1 == n_s { alpha } else { 0.0 };
        h[(i, (i + 1) % n_s)] -= Complex64::from_polar(p_half[i] / ds2, fwd);
        let bwd = if i == 0 { -alpha } else { 0.0 };
        h[(i, (i + n_s - 1) % n_s)] -= Complex64::from_polar(p_minus / ds2, bwd);
    }
    Ok(DiscretizedHamiltonian {
        matrix: h,
        basis: Basis::ModeRestricted { n_s, n_phi },
        k,
    })
}

fn revalidate(spec: &HelixSpec) -> Result<HelixSpec> {
    HelixSpec::new(spec.kappa(), spec.tau(), spec.rho0(), spec.s0())
}
