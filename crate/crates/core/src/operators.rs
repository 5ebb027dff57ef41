//! Kinetic operators on the tube surface.
//!
//! On the surface the Schroedinger operator is the Laplace-Beltrami operator
//! of the metric `dvarphi^2 + h^2 ds^2` plus the curvature potential. The
//! substitution `Phi = sqrt(h) Psi` moves the problem to the flat measure
//! `ds dvarphi`:
//!
//! ```text
//! -sqrt(h) Delta (Phi / sqrt(h)) = -d_s(h^-2 d_s Phi) - d_varphi^2 Phi + V_kin Phi
//! ```
//!
//! The flux form on the right is self-adjoint under the flat inner product and
//! is the form every discretization in this crate uses.
//!
//! Energies are in natural units `E_nat = 2 mu E / hbar^2` (length^-2).

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{CellGrid, ScalarField2D};
use crate::geometry;
use crate::helix::HelixSpec;
use crate::spectral::{Axis, Spectral};

/// Which wave function a [`WaveField`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// Surface wave function, normalized with the area element `h ds dvarphi`.
    Psi,
    /// `sqrt(h) Psi`, normalized with the flat element `ds dvarphi`.
    Phi,
}

/// Complex samples of a wave function over a [`CellGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub grid: CellGrid,
    pub values: Vec<Complex64>,
    pub gauge: Gauge,
    /// Bloch wavevector `(k_s, k_varphi)`; zero for periodic fields.
    pub bloch: [f64; 2],
}

impl WaveField {
    pub fn from_fn(grid: CellGrid, gauge: Gauge, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.n_s {
            for j in 0..grid.n_phi {
                values.push(f(grid.s(i), grid.phi(j)));
            }
        }
        Self {
            grid,
            values,
            gauge,
            bloch: [0.0, 0.0],
        }
    }

    /// Declares the Bloch wavevector. The stored values must already carry the
    /// factor `exp(i (k_s s + k_varphi varphi))`; see [`WaveField::bloch_wave`].
    pub fn with_bloch(mut self, bloch: [f64; 2]) -> Self {
        self.bloch = bloch;
        self
    }

    /// Multiplies a periodic field by `exp(i (k_s s + k_varphi varphi))` and records the wavevector.
    pub fn bloch_wave(mut self, bloch: [f64; 2]) -> Self {
        let g = self.grid;
        for i in 0..g.n_s {
            for j in 0..g.n_phi {
                self.values[g.index(i, j)] *= Complex64::from_polar(1.0, bloch[0] * g.s(i) + bloch[1] * g.varphi(j));
            }
        }
        self.bloch = bloch;
        self
    }

    /// Random trigonometric polynomial with `|m_s| <= max_s`, `|m_phi| <= max_phi`.
    pub fn random_band_limited<R: Rng>(
        grid: CellGrid,
        gauge: Gauge,
        max_s: i64,
        max_phi: i64,
        rng: &mut R,
    ) -> Self {
        let mut coeffs = Vec::new();
        for ms in -max_s..=max_s {
            for mp in -max_phi..=max_phi {
                let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                coeffs.push((ms as f64, mp as f64, c));
            }
        }
        let ks = 2.0 * std::f64::consts::PI / grid.period_s;
        Self::from_fn(grid, gauge, |s, phi| {
            coeffs
                .iter()
                .map(|&(ms, mp, c)| c * Complex64::from_polar(1.0, ms * ks * s + mp * phi))
                .sum()
        })
    }

    pub fn real(&self) -> ScalarField2D {
        ScalarField2D {
            grid: self.grid,
            values: self.values.iter().map(|z| z.re).collect(),
        }
    }

    pub fn imag(&self) -> ScalarField2D {
        ScalarField2D {
            grid: self.grid,
            values: self.values.iter().map(|z| z.im).collect(),
        }
    }

    /// Norm in the measure declared by the gauge.
    pub fn norm(&self, spec: &HelixSpec) -> f64 {
        let g = &self.grid;
        let mut acc = 0.0;
        for i in 0..g.n_s {
            for j in 0..g.n_phi {
                let w = match self.gauge {
                    Gauge::Psi => geometry::metric_h(spec, g.s(i), g.phi(j)),
                    Gauge::Phi => 1.0,
                };
                acc += w * self.values[g.index(i, j)].norm_sqr();
            }
        }
        (acc * g.cell_area()).sqrt()
    }

    pub fn normalize(&mut self, spec: &HelixSpec) -> Result<()> {
        let n = self.norm(spec);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidArgument(format!("cannot normalize a field of norm {n}")));
        }
        self.values.iter_mut().for_each(|z| *z /= n);
        Ok(())
    }

    /// Flat inner product `<self, other> = int conj(self) other ds dvarphi`.
    pub fn inner(&self, other: &WaveField) -> Complex64 {
        let acc: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        acc * self.grid.cell_area()
    }

    /// Flat L2 norm, independent of the gauge tag.
    pub fn l2(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    fn like(&self, values: Vec<Complex64>) -> Self {
        Self {
            grid: self.grid,
            values,
            gauge: self.gauge,
            bloch: self.bloch,
        }
    }

    pub fn sub(&self, other: &WaveField) -> WaveField {
        self.like(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &WaveField) -> WaveField {
        self.like(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: Complex64) -> WaveField {
        self.like(self.values.iter().map(|a| a * c).collect())
    }
}

/// Constants of the expanded equation `Phi_ss + Phi_varphivarphi + k_eff^2 Phi = V1 Phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    pub a: f64,
    pub epsilon: f64,
}

impl EffectiveParams {
    pub fn new(spec: &HelixSpec) -> Self {
        Self {
            a: spec.a(),
            epsilon: spec.epsilon(),
        }
    }

    pub fn k_eff_sq(&self, energy: f64) -> f64 {
        self.a + energy
    }
}

/// First-order perturbation `V1` of the expanded equation.
///
/// Both forms share the structure
/// `V1 = f(x) + w eps (cos x d_s^2 - tau sin x d_s) = f(x) + w eps d_s(cos x d_s)`
/// with `x = tau (s - s0) - phi`:
///
/// * `Published`: `f = eps kappa^2 (cos x + cos^2 x - cos^3 x) / 2`, `w = 1`.
/// * `Consistent`: `f = eps (kappa^2 - tau^2) cos x / 2`, `w = 2`; this is the
///   term linear in `eps` of the full operator with `rho0 = eps / kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Perturbation {
    #[default]
    Published,
    Consistent,
}

impl Perturbation {
    /// Multiplicative part `f(x)`.
    pub fn multiplicative(&self, spec: &HelixSpec, x: f64) -> f64 {
        let eps = spec.epsilon();
        let k2 = spec.kappa() * spec.kappa();
        let c = x.cos();
        match self {
            Perturbation::Published => 0.5 * eps * k2 * (c + c * c - c * c * c),
            Perturbation::Consistent => 0.5 * eps * (k2 - spec.tau() * spec.tau()) * c,
        }
    }

    /// Weight `w` of the derivative term.
    pub fn derivative_weight(&self) -> f64 {
        match self {
            Perturbation::Published => 1.0,
            Perturbation::Consistent => 2.0,
        }
    }

    /// Coefficient of `e^{i j x}` in `f(x)`.
    pub fn multiplicative_harmonic(&self, spec: &HelixSpec, j: i32) -> f64 {
        let eps = spec.epsilon();
        let k2 = spec.kappa() * spec.kappa();
        match self {
            // cos x + cos^2 x - cos^3 x = 1/2 + (1/8)(e^{ix}+e^{-ix}) + (1/4)(e^{2ix}+..) - (1/8)(e^{3ix}+..)
            Perturbation::Published => {
                let c = match j.abs() {
                    0 => 0.5,
                    1 => 0.125,
                    2 => 0.25,
                    3 => -0.125,
                    _ => 0.0,
                };
                0.5 * eps * k2 * c
            }
            Perturbation::Consistent => {
                if j.abs() == 1 {
                    0.25 * eps * (k2 - spec.tau() * spec.tau())
                } else {
                    0.0
                }
            }
        }
    }
}

/// `h` and its first and second partial derivatives in `s` and `varphi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricDerivatives {
    pub h: f64,
    pub h_s: f64,
    pub h_ss: f64,
    pub h_v: f64,
    pub h_vv: f64,
}

pub fn metric_derivatives(spec: &HelixSpec, s: f64, phi: f64) -> MetricDerivatives {
    let eps = spec.epsilon();
    let (k, t, r) = (spec.kappa(), spec.tau(), spec.rho0());
    let (sn, c) = (geometry::rotation_angle(spec, s) + phi).sin_cos();
    MetricDerivatives {
        h: 1.0 + eps * c,
        h_s: eps * t * sn,
        h_ss: -eps * t * t * c,
        h_v: -k * sn,
        h_vv: -k * c / r,
    }
}

/// Potential generated by the substitution `Phi = sqrt(h) Psi`.
pub fn v_kin(spec: &HelixSpec, s: f64, phi: f64) -> f64 {
    let d = metric_derivatives(spec, s, phi);
    let h = d.h;
    0.5 * d.h_vv / h - 0.25 * d.h_v * d.h_v / (h * h) + 0.5 * d.h_ss / (h * h * h)
        - 1.25 * d.h_s * d.h_s / (h * h * h * h)
}

/// Effective potential `V_kin + V_curv` of the flat-measure equation.
pub fn v_eff(spec: &HelixSpec, s: f64, phi: f64) -> f64 {
    v_kin(spec, s, phi) + geometry::v_curv(spec, s, phi)
}

/// Spectral realization of the surface operators on one grid.
pub struct SurfaceOperators {
    spec: HelixSpec,
    spectral: Spectral,
    h: Vec<f64>,
    h_s: Vec<f64>,
    h_v: Vec<f64>,
    v_kin: Vec<f64>,
    v_curv: Vec<f64>,
    phase: Vec<f64>,
}

fn mul(a: &[f64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, z)| z * *x).collect()
}

impl SurfaceOperators {
    pub fn new(spec: &HelixSpec, grid: CellGrid) -> Self {
        let mut h = Vec::with_capacity(grid.len());
        let mut h_s = Vec::with_capacity(grid.len());
        let mut h_v = Vec::with_capacity(grid.len());
        let mut vk = Vec::with_capacity(grid.len());
        let mut vc = Vec::with_capacity(grid.len());
        let mut phase = Vec::with_capacity(grid.len());
        for i in 0..grid.n_s {
            for j in 0..grid.n_phi {
                let (s, phi) = (grid.s(i), grid.phi(j));
                let d = metric_derivatives(spec, s, phi);
                h.push(d.h);
                h_s.push(d.h_s);
                h_v.push(d.h_v);
                vk.push(v_kin(spec, s, phi));
                vc.push(geometry::v_curv(spec, s, phi));
                phase.push(spec.helical_phase(s, phi));
            }
        }
        Self {
            spec: *spec,
            spectral: Spectral::new(grid),
            h,
            h_s,
            h_v,
            v_kin: vk,
            v_curv: vc,
            phase,
        }
    }

    /// Adds a constant to the sampled `V_kin`. Negative control for the verification suite.
    pub fn with_vkin_offset(mut self, offset: f64) -> Self {
        self.v_kin.iter_mut().for_each(|v| *v += offset);
        self
    }

    pub fn grid(&self) -> &CellGrid {
        self.spectral.grid()
    }

    fn check(&self, f: &WaveField, gauge: Gauge) -> Result<()> {
        if f.gauge != gauge {
            return Err(Error::GaugeMismatch {
                expected: gauge,
                found: f.gauge,
            });
        }
        if f.grid != *self.grid() {
            return Err(Error::InvalidGrid("field grid differs from operator grid".into()));
        }
        Ok(())
    }

    fn d(&self, f: &WaveField, values: &[Complex64], axis: Axis, order: u32) -> Vec<Complex64> {
        self.spectral.derivative(values, f.bloch, axis, order)
    }

    /// `-Delta Psi` in divergence form `-(1/h) d_s(h^-1 d_s Psi) - (1/h) d_varphi(h d_varphi Psi)`.
    pub fn laplace_beltrami(&self, psi: &WaveField) -> Result<WaveField> {
        self.check(psi, Gauge::Psi)?;
        let inv_h: Vec<f64> = self.h.iter().map(|h| 1.0 / h).collect();
        let ps = self.d(psi, &psi.values, Axis::S, 1);
        let flux_s = self.d(psi, &mul(&inv_h, &ps), Axis::S, 1);
        let pv = self.d(psi, &psi.values, Axis::Varphi, 1);
        let flux_v = self.d(psi, &mul(&self.h, &pv), Axis::Varphi, 1);
        let out = (0..flux_s.len()).map(|k| -(flux_s[k] + flux_v[k]) * inv_h[k]).collect();
        Ok(psi.like(out))
    }

    /// `-Delta Psi` in expanded coefficient form.
    pub fn laplace_beltrami_expanded(&self, psi: &WaveField) -> Result<WaveField> {
        self.check(psi, Gauge::Psi)?;
        let ps = self.d(psi, &psi.values, Axis::S, 1);
        let pss = self.d(psi, &psi.values, Axis::S, 2);
        let pv = self.d(psi, &psi.values, Axis::Varphi, 1);
        let pvv = self.d(psi, &psi.values, Axis::Varphi, 2);
        let out = (0..ps.len())
            .map(|k| {
                let h = self.h[k];
                -pss[k] / (h * h) - pvv[k] - pv[k] * (self.h_v[k] / h) + ps[k] * (self.h_s[k] / (h * h * h))
            })
            .collect();
        Ok(psi.like(out))
    }

    /// `-d_s(h^-2 d_s Phi) - d_varphi^2 Phi` on a flat-gauge field.
    fn flux_kinetic(&self, phi: &WaveField) -> Vec<Complex64> {
        let inv_h2: Vec<f64> = self.h.iter().map(|h| 1.0 / (h * h)).collect();
        let ps = self.d(phi, &phi.values, Axis::S, 1);
        let flux = self.d(phi, &mul(&inv_h2, &ps), Axis::S, 1);
        let pvv = self.d(phi, &phi.values, Axis::Varphi, 2);
        flux.iter().zip(&pvv).map(|(a, b)| -(a + b)).collect()
    }

    /// `-d_s(h^-2 d_s Phi) - d_varphi^2 Phi + V_kin Phi`.
    pub fn transformed_kinetic(&self, phi: &WaveField) -> Result<WaveField> {
        self.check(phi, Gauge::Phi)?;
        let mut out = self.flux_kinetic(phi);
        for (k, z) in out.iter_mut().enumerate() {
            *z += phi.values[k] * self.v_kin[k];
        }
        Ok(phi.like(out))
    }

    /// `-sqrt(h) Delta (Phi / sqrt(h))`, evaluated through the surface operator.
    pub fn conjugated_laplace_beltrami(&self, phi: &WaveField) -> Result<WaveField> {
        self.check(phi, Gauge::Phi)?;
        let mut psi = phi.like(phi.values.iter().zip(&self.h).map(|(z, h)| z / h.sqrt()).collect());
        psi.gauge = Gauge::Psi;
        let mut out = self.laplace_beltrami(&psi)?;
        out.values.iter_mut().zip(&self.h).for_each(|(z, h)| *z *= h.sqrt());
        out.gauge = Gauge::Phi;
        Ok(out)
    }

    /// Flux-form operator `-d_s(h^-2 d_s) - d_varphi^2 + V_eff` acting on `Phi`.
    pub fn transformed_operator(&self, phi: &WaveField) -> Result<WaveField> {
        self.check(phi, Gauge::Phi)?;
        let mut out = self.flux_kinetic(phi);
        for (k, z) in out.iter_mut().enumerate() {
            *z += phi.values[k] * (self.v_kin[k] + self.v_curv[k]);
        }
        Ok(phi.like(out))
    }

    /// Same operator in the expanded form `-h^-2 Phi_ss + 2 (h_s / h^3) Phi_s - Phi_vv + V_eff Phi`.
    pub fn transformed_operator_expanded(&self, phi: &WaveField) -> Result<WaveField> {
        self.check(phi, Gauge::Phi)?;
        let ps = self.d(phi, &phi.values, Axis::S, 1);
        let pss = self.d(phi, &phi.values, Axis::S, 2);
        let pvv = self.d(phi, &phi.values, Axis::Varphi, 2);
        let out = (0..ps.len())
            .map(|k| {
                let h = self.h[k];
                -pss[k] / (h * h) + ps[k] * (2.0 * self.h_s[k] / (h * h * h)) - pvv[k]
                    + phi.values[k] * (self.v_kin[k] + self.v_curv[k])
            })
            .collect();
        Ok(phi.like(out))
    }

    /// `V_curv Psi`, pointwise.
    pub fn curvature_potential(&self, psi: &WaveField) -> WaveField {
        psi.like(mul(&self.v_curv, &psi.values))
    }

    /// Flat Laplacian `Phi_ss + Phi_vv`.
    pub fn flat_laplacian(&self, phi: &WaveField) -> WaveField {
        let pss = self.d(phi, &phi.values, Axis::S, 2);
        let pvv = self.d(phi, &phi.values, Axis::Varphi, 2);
        phi.like(pss.iter().zip(&pvv).map(|(a, b)| a + b).collect())
    }

    /// Action of `V1` on a flat-gauge field.
    pub fn v1_apply(&self, form: Perturbation, phi: &WaveField) -> Result<WaveField> {
        self.check(phi, Gauge::Phi)?;
        let eps = self.spec.epsilon();
        let tau = self.spec.tau();
        let w = form.derivative_weight();
        let ps = self.d(phi, &phi.values, Axis::S, 1);
        let pss = self.d(phi, &phi.values, Axis::S, 2);
        let out = (0..ps.len())
            .map(|k| {
                let x = self.phase[k];
                let (sx, cx) = x.sin_cos();
                phi.values[k] * form.multiplicative(&self.spec, x) + (pss[k] * cx - ps[k] * (tau * sx)) * (w * eps)
            })
            .collect();
        Ok(phi.like(out))
    }
}

/// `-Delta Psi` on the surface (divergence form, spectral derivatives).
pub fn apply_laplace_beltrami(spec: &HelixSpec, psi: &WaveField) -> Result<WaveField> {
    SurfaceOperators::new(spec, psi.grid).laplace_beltrami(psi)
}

/// Flux-form operator of the flat-measure equation, without the energy term.
pub fn apply_transformed_operator(spec: &HelixSpec, phi: &WaveField) -> Result<WaveField> {
    SurfaceOperators::new(spec, phi.grid).transformed_operator(phi)
}

/// Action of the published first-order perturbation.
pub fn v1_apply(spec: &HelixSpec, phi: &WaveField) -> Result<WaveField> {
    SurfaceOperators::new(spec, phi.grid).v1_apply(Perturbation::Published, phi)
}
