//! Regular sampling of one unit cell of the tube.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry;
use crate::helix::HelixSpec;
use crate::operators::{self, Perturbation};

/// Uniform periodic grid over `[0, period_s) x [-period_varphi/2, period_varphi/2)`.
///
/// Node `(i, j)` sits at `s_i = i * period_s / n_s` and
/// `varphi_j = -period_varphi / 2 + j * period_varphi / n_phi`; the periodic
/// images at the far edges are not stored. Storage is row-major with `j`
/// fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGrid {
    pub n_s: usize,
    pub n_phi: usize,
    pub period_s: f64,
    pub period_varphi: f64,
}

impl CellGrid {
    pub fn new(n_s: usize, n_phi: usize, period_s: f64, period_varphi: f64) -> Result<Self> {
        if n_s < 2 || n_phi < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 nodes per direction, got {n_s} x {n_phi}"
            )));
        }
        if !(period_s > 0.0 && period_s.is_finite() && period_varphi > 0.0 && period_varphi.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "periods must be positive and finite, got {period_s} x {period_varphi}"
            )));
        }
        Ok(Self {
            n_s,
            n_phi,
            period_s,
            period_varphi,
        })
    }

    /// Unit cell of `spec`: one helical period in `s`, the full cross-section in `varphi`.
    pub fn unit_cell(spec: &HelixSpec, n_s: usize, n_phi: usize) -> Result<Self> {
        Self::new(n_s, n_phi, spec.s_period()?, spec.varphi_period())
    }

    pub fn len(&self) -> usize {
        self.n_s * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ds(&self) -> f64 {
        self.period_s / self.n_s as f64
    }

    pub fn dvarphi(&self) -> f64 {
        self.period_varphi / self.n_phi as f64
    }

    pub fn s(&self, i: usize) -> f64 {
        i as f64 * self.ds()
    }

    pub fn varphi(&self, j: usize) -> f64 {
        -0.5 * self.period_varphi + j as f64 * self.dvarphi()
    }

    /// Cross-section angle of column `j`, in `[-pi, pi)`.
    pub fn phi(&self, j: usize) -> f64 {
        -PI + 2.0 * PI * j as f64 / self.n_phi as f64
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_phi + j
    }

    /// Area element of the flat `(s, varphi)` rectangle rule.
    pub fn cell_area(&self) -> f64 {
        self.ds() * self.dvarphi()
    }

    /// Index of the node at `(-s_i, -varphi_j)` modulo the cell.
    pub fn reflect(&self, i: usize, j: usize) -> (usize, usize) {
        ((self.n_s - i) % self.n_s, (self.n_phi - j) % self.n_phi)
    }
}

/// Real samples over a [`CellGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2D {
    pub grid: CellGrid,
    pub values: Vec<f64>,
}

impl ScalarField2D {
    pub fn from_fn(grid: CellGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.n_s {
            let s = grid.s(i);
            for j in 0..grid.n_phi {
                values.push(f(s, grid.phi(j)));
            }
        }
        Self { grid, values }
    }

    pub fn n_s(&self) -> usize {
        self.grid.n_s
    }

    pub fn n_phi(&self) -> usize {
        self.grid.n_phi
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.grid.n_phi;
        &self.values[i * n..(i + 1) * n]
    }

    /// `(i, j)` of the smallest sample; the first one wins on ties.
    pub fn argmin(&self) -> (usize, usize) {
        let mut best = 0;
        for (k, v) in self.values.iter().enumerate() {
            if *v < self.values[best] {
                best = k;
            }
        }
        (best / self.grid.n_phi, best % self.grid.n_phi)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Quantities that can be sampled over the unit cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    H,
    VCurv,
    VKin,
    VEff,
    /// Multiplicative part of the first-order perturbation.
    V1(Perturbation),
}

fn evaluate(spec: &HelixSpec, quantity: Quantity, s: f64, phi: f64) -> f64 {
    match quantity {
        Quantity::H => geometry::metric_h(spec, s, phi),
        Quantity::VCurv => geometry::v_curv(spec, s, phi),
        Quantity::VKin => operators::v_kin(spec, s, phi),
        Quantity::VEff => operators::v_eff(spec, s, phi),
        Quantity::V1(form) => form.multiplicative(spec, spec.helical_phase(s, phi)),
    }
}

/// Samples `quantity` over the unit cell `[0, 2 pi / |tau|) x [-pi rho0, pi rho0)`.
pub fn sample_field(spec: &HelixSpec, quantity: Quantity, n_s: usize, n_phi: usize) -> Result<ScalarField2D> {
    let grid = CellGrid::unit_cell(spec, n_s, n_phi)?;
    Ok(ScalarField2D::from_fn(grid, |s, phi| evaluate(spec, quantity, s, phi)))
}

/// Like [`sample_field`] with an explicit `s`-period, for `tau = 0`.
pub fn sample_field_with_period(
    spec: &HelixSpec,
    quantity: Quantity,
    n_s: usize,
    n_phi: usize,
    period_s: f64,
) -> Result<ScalarField2D> {
    let grid = CellGrid::new(n_s, n_phi, period_s, spec.varphi_period())?;
    Ok(ScalarField2D::from_fn(grid, |s, phi| evaluate(spec, quantity, s, phi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_nodes() {
        let g = CellGrid::new(4, 8, 2.0 * PI, 2.0 * PI * 0.1).unwrap();
        assert_eq!(g.s(2), PI);
        assert!((g.varphi(0) + PI * 0.1).abs() < 1e-15);
        assert!((g.varphi(4)).abs() < 1e-15);
        assert_eq!(g.phi(0), -PI);
        assert_eq!(g.reflect(0, 0), (0, 0));
        assert_eq!(g.reflect(1, 3), (3, 5));
        assert!(CellGrid::new(1, 8, 1.0, 1.0).is_err());
        assert!(CellGrid::new(2, 2, 0.0, 1.0).is_err());
    }

    #[test]
    fn straight_tube_h_is_one() {
        let spec = HelixSpec::new(0.0, 1.0, 0.5, 0.0).unwrap();
        let f = sample_field(&spec, Quantity::H, 8, 6).unwrap();
        assert!(f.values.iter().all(|&v| v == 1.0));
        assert_eq!(f.values.len(), 48);
    }

    #[test]
    fn v_eff_outer_rim_below_inner_rim() {
        let spec = HelixSpec::from_epsilon(1.0, 1.0, 0.1).unwrap();
        let f = sample_field(&spec, Quantity::VEff, 16, 64).unwrap();
        let row = f.row(0);
        assert!(row[32] < row[0]);
        // The row minimum sits at the sides of the cross-section, not on the rim.
        let jmin = (0..row.len()).min_by(|&a, &b| row[a].total_cmp(&row[b])).unwrap();
        let p = f.grid.phi(jmin).abs();
        assert!(p > 1.5 && p < 1.8, "{p}");
    }

    #[test]
    fn h_reflection_symmetry() {
        let spec = HelixSpec::new(1.0, 1.3, 0.3, 0.0).unwrap();
        let f = sample_field(&spec, Quantity::H, 24, 20).unwrap();
        for i in 0..24 {
            for j in 0..20 {
                let (ri, rj) = f.grid.reflect(i, j);
                assert!((f.get(i, j) - f.get(ri, rj)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_torsion_needs_period() {
        let spec = HelixSpec::new(1.0, 0.0, 0.1, 0.0).unwrap();
        assert_eq!(sample_field(&spec, Quantity::H, 8, 8), Err(Error::DegeneratePeriod));
        let f = sample_field_with_period(&spec, Quantity::H, 8, 8, 2.0 * PI).unwrap();
        assert!(f.is_finite());
    }
}
