//! Bloch waves on the helical tube: reciprocal lattice, central-equation
//! couplings, the two-band model near the zone boundary and derived
//! quantities.
//!
//! Plane waves are `exp(i (k_s s + k_varphi varphi))` with
//! `k_varphi = n / rho0`. The perturbation depends on `(s, phi)` only through
//! `x = tau (s - s0) - phi`, so it couples a component `k` only to `k + j K1`
//! with `K1 = (tau, -1/rho0)`.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::helix::HelixSpec;
use crate::operators::Perturbation;

/// Lattice vector `(m_s tau, m_phi / rho0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReciprocalVector {
    pub m_s: i32,
    pub m_phi: i32,
}

impl ReciprocalVector {
    pub fn new(m_s: i32, m_phi: i32) -> Self {
        Self { m_s, m_phi }
    }

    /// `K1 = (tau, -1/rho0)`, the direction the perturbation couples along.
    pub fn k1() -> Self {
        Self::ray(1)
    }

    /// `j K1`.
    pub fn ray(j: i32) -> Self {
        Self { m_s: j, m_phi: -j }
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.m_s, -self.m_phi)
    }

    /// `Some(j)` when `self = j K1`.
    pub fn ray_multiple(&self) -> Option<i32> {
        (self.m_phi == -self.m_s).then_some(self.m_s)
    }

    pub fn components(&self, spec: &HelixSpec) -> [f64; 2] {
        [self.m_s as f64 * spec.tau(), self.m_phi as f64 / spec.rho0()]
    }

    pub fn norm_sq(&self, spec: &HelixSpec) -> f64 {
        let [a, b] = self.components(spec);
        a * a + b * b
    }
}

/// Bloch wavevector: longitudinal quasi-momentum `k_s` and transverse index `n`.
///
/// `n` is an integer for single-valued wave functions on the tube; the zone
/// boundary `-K1/2` sits at `n = 1/2`, so half-integers are accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub k_s: f64,
    pub n: f64,
}

impl BlochVector {
    pub fn new(k_s: f64, n: f64) -> Self {
        Self { k_s, n }
    }

    /// `-K1 / 2 = (-tau/2, 1/(2 rho0))`.
    pub fn zone_boundary(spec: &HelixSpec) -> Self {
        Self::new(-0.5 * spec.tau(), 0.5)
    }

    pub fn from_components(spec: &HelixSpec, k: [f64; 2]) -> Self {
        Self::new(k[0], k[1] * spec.rho0())
    }

    pub fn components(&self, spec: &HelixSpec) -> [f64; 2] {
        [self.k_s, self.n / spec.rho0()]
    }

    pub fn shifted(&self, spec: &HelixSpec, m: ReciprocalVector) -> Self {
        Self::new(self.k_s + m.m_s as f64 * spec.tau(), self.n + m.m_phi as f64)
    }

    pub fn norm_sq(&self, spec: &HelixSpec) -> f64 {
        let [a, b] = self.components(spec);
        a * a + b * b
    }

    /// `k_s + n tau`, conserved by every coupling.
    pub fn helical_momentum(&self, spec: &HelixSpec) -> f64 {
        self.k_s + self.n * spec.tau()
    }

    /// Moves `k_s` into `[-|tau|/2, |tau|/2)`, shifting `n` so that the
    /// helical momentum is unchanged.
    pub fn reduced(&self, spec: &HelixSpec) -> Self {
        let t = spec.tau().abs();
        if t == 0.0 {
            return *self;
        }
        let l = ((self.k_s + 0.5 * t) / t).floor();
        Self::new(self.k_s - l * t, self.n + spec.tau().signum() * l)
    }
}

/// Coefficient of `exp(i j K1.r)` in the action of the perturbation on a
/// plane wave with longitudinal wavenumber `q`.
pub fn coupling(spec: &HelixSpec, form: Perturbation, j: i32, q: f64) -> Complex64 {
    let tau = spec.tau();
    let g = 0.5 * form.derivative_weight() * spec.epsilon();
    let deriv = match j {
        1 => g * q * (q + tau),
        -1 => g * q * (q - tau),
        _ => 0.0,
    };
    let amp = form.multiplicative_harmonic(spec, j) - deriv;
    amp * Complex64::from_polar(1.0, -(j as f64) * tau * spec.s0())
}

/// Couplings of one source component, `j = -3..=3`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTable {
    pub q_s: f64,
    /// Diagonal shift, the `j = 0` entry.
    pub diagonal: Complex64,
    entries: [Complex64; 7],
}

impl CouplingTable {
    pub fn get(&self, j: i32) -> Complex64 {
        if j.abs() > 3 {
            Complex64::default()
        } else {
            self.entries[(j + 3) as usize]
        }
    }

    /// Coupling for an arbitrary lattice vector; zero off the `K1` ray.
    pub fn get_vector(&self, m: ReciprocalVector) -> Complex64 {
        m.ray_multiple().map_or(Complex64::default(), |j| self.get(j))
    }
}

pub fn coupling_coefficients(spec: &HelixSpec, form: Perturbation, q_s: f64) -> CouplingTable {
    let mut entries = [Complex64::default(); 7];
    for (idx, e) in entries.iter_mut().enumerate() {
        *e = coupling(spec, form, idx as i32 - 3, q_s);
    }
    CouplingTable {
        q_s,
        diagonal: entries[3],
        entries,
    }
}

/// Where a band structure came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandSource {
    TwoBand,
    FirstOrder,
    OraclePerturbed,
    OracleFull,
}

impl BandSource {
    pub fn tag(&self) -> &'static str {
        match self {
            BandSource::TwoBand => "TWO_BAND",
            BandSource::FirstOrder => "FIRST_ORDER",
            BandSource::OraclePerturbed => "ORACLE_PERTURBED",
            BandSource::OracleFull => "ORACLE_FULL",
        }
    }
}

/// Energies along a path of Bloch vectors, ascending at each point.
#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    pub path: Vec<BlochVector>,
    pub energies: Vec<Vec<f64>>,
    pub source: BandSource,
}

impl BandStructure {
    pub fn new(path: Vec<BlochVector>, mut energies: Vec<Vec<f64>>, source: BandSource) -> Result<Self> {
        if path.len() != energies.len() {
            return Err(Error::InvalidArgument("path and energy lists differ in length".into()));
        }
        for e in &mut energies {
            if e.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument("non-finite band energy".into()));
            }
            e.sort_by(f64::total_cmp);
        }
        Ok(Self { path, energies, source })
    }

    pub fn band(&self, index: usize) -> Vec<f64> {
        self.energies.iter().map(|e| e[index]).collect()
    }
}

/// Straight segment in `k_s` at fixed transverse index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KPath {
    pub start: f64,
    pub end: f64,
    pub count: usize,
    pub n: f64,
}

impl KPath {
    /// Zone centre to the zone edge `-tau/2` at `n = 0`, 101 points.
    pub fn default_for(spec: &HelixSpec) -> Self {
        Self {
            start: 0.0,
            end: -0.5 * spec.tau(),
            count: 101,
            n: 0.0,
        }
    }

    pub fn points(&self) -> Vec<BlochVector> {
        match self.count {
            0 => Vec::new(),
            1 => vec![BlochVector::new(self.start, self.n)],
            c => (0..c)
                .map(|i| {
                    let t = i as f64 / (c - 1) as f64;
                    BlochVector::new(self.start + t * (self.end - self.start), self.n)
                })
                .collect(),
        }
    }
}

/// Two-band and first-order treatment of the expanded equation for one spec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandModel {
    pub spec: HelixSpec,
    pub form: Perturbation,
    /// Resonance threshold for [`BandModel::first_order_u`].
    pub resonance_tolerance: f64,
    /// Step of the finite-difference mass tensor, in units of `|tau|`.
    pub mass_step: f64,
}

/// `A1 - g u` and `A2 - g u` with `u = k_s (k_s + j tau)`: the two factors of `U^2`.
struct USquared {
    a1: f64,
    a2: f64,
    g: f64,
    j: f64,
}

impl USquared {
    fn u(&self, tau: f64, k: f64) -> (f64, f64, f64) {
        (k * (k + self.j * tau), 2.0 * k + self.j * tau, 2.0)
    }

    fn value(&self, tau: f64, k: f64) -> [f64; 3] {
        let (u, du, ddu) = self.u(tau, k);
        let f1 = self.a1 - self.g * u;
        let f2 = self.a2 - self.g * u;
        let s = self.a1 + self.a2 - 2.0 * self.g * u;
        [f1 * f2, -self.g * du * s, -self.g * ddu * s + 2.0 * self.g * self.g * du * du]
    }
}

impl BandModel {
    pub fn new(spec: HelixSpec) -> Self {
        Self {
            spec,
            form: Perturbation::Published,
            resonance_tolerance: 1e-6 * spec.tau() * spec.tau(),
            mass_step: 1e-4,
        }
    }

    pub fn with_form(mut self, form: Perturbation) -> Self {
        self.form = form;
        self
    }

    pub fn a(&self) -> f64 {
        self.spec.a()
    }

    /// Unperturbed energy `|k + j K1|^2 - a`.
    pub fn free_energy(&self, k: BlochVector, j: i32) -> f64 {
        k.shifted(&self.spec, ReciprocalVector::ray(j)).norm_sq(&self.spec) - self.a()
    }

    pub fn couplings(&self, q_s: f64) -> CouplingTable {
        coupling_coefficients(&self.spec, self.form, q_s)
    }

    /// Diagonal shift `V(0)`.
    pub fn diagonal_shift(&self) -> f64 {
        coupling(&self.spec, self.form, 0, 0.0).re
    }

    /// First-order amplitude of the component `k + K_m` in a wave started at `k`.
    pub fn first_order_u(&self, k: BlochVector, m: ReciprocalVector, energy: f64) -> Result<Complex64> {
        let k_eff_sq = self.a() + energy;
        let denom = k_eff_sq - k.shifted(&self.spec, m).norm_sq(&self.spec);
        if denom.abs() <= self.resonance_tolerance {
            return Err(Error::NearResonance {
                denominator: denom.abs(),
                tolerance: self.resonance_tolerance,
            });
        }
        let v = self.couplings(k.k_s).get_vector(m);
        Ok(v / denom)
    }

    fn ray_index(m: ReciprocalVector) -> Result<i32> {
        match m.ray_multiple() {
            Some(j) if j != 0 => Ok(j),
            _ => Err(Error::OffRay {
                m_s: m.m_s,
                m_phi: m.m_phi,
            }),
        }
    }

    fn u_parts(&self, j: i32) -> USquared {
        let g = if j.abs() == 1 {
            0.5 * self.form.derivative_weight() * self.spec.epsilon()
        } else {
            0.0
        };
        USquared {
            a1: self.form.multiplicative_harmonic(&self.spec, j),
            a2: self.form.multiplicative_harmonic(&self.spec, -j),
            g,
            j: j as f64,
        }
    }

    /// `U^2 = V(K_m; k_s) V(-K_m; k_s + m_s tau)`.
    pub fn u_squared(&self, k: BlochVector, m: ReciprocalVector) -> Result<f64> {
        let j = Self::ray_index(m)?;
        let q1 = k.k_s + j as f64 * self.spec.tau();
        let p = coupling(&self.spec, self.form, j, k.k_s) * coupling(&self.spec, self.form, -j, q1);
        Ok(p.re)
    }

    /// Roots of the two-band determinant, `E1 <= E2`.
    pub fn two_band_energies(&self, k: BlochVector, m: ReciprocalVector) -> Result<(f64, f64)> {
        let u2 = self.u_squared(k, m)?;
        let v0 = self.diagonal_shift();
        let a = k.norm_sq(&self.spec) - self.a() + v0;
        let b = k.shifted(&self.spec, m).norm_sq(&self.spec) - self.a() + v0;
        if u2 == 0.0 {
            return Ok((a.min(b), a.max(b)));
        }
        let mean = 0.5 * (a + b);
        let root = (0.25 * (a - b) * (a - b) + u2).max(0.0).sqrt();
        Ok((mean - root, mean + root))
    }

    /// Analytic Hessian of a two-band root in `(k_s, k_varphi)`; `band` 0 is the lower root.
    pub fn two_band_hessian(&self, k: BlochVector, m: ReciprocalVector, band: usize) -> Result<Matrix2<f64>> {
        let j = Self::ray_index(m)?;
        let km = m.components(&self.spec);
        let kv = k.components(&self.spec);
        let delta = -2.0 * (kv[0] * km[0] + kv[1] * km[1]) - (km[0] * km[0] + km[1] * km[1]);
        let [p, dp, ddp] = self.u_parts(j).value(self.spec.tau(), k.k_s);
        let d = 0.25 * delta * delta + p;
        if d <= 0.0 {
            return Err(Error::NearResonance {
                denominator: d,
                tolerance: 0.0,
            });
        }
        let grad_delta = [-2.0 * km[0], -2.0 * km[1]];
        let grad_d = [0.5 * delta * grad_delta[0] + dp, 0.5 * delta * grad_delta[1]];
        let hess_d = Matrix2::new(
            2.0 * km[0] * km[0] + ddp,
            2.0 * km[0] * km[1],
            2.0 * km[1] * km[0],
            2.0 * km[1] * km[1],
        );
        let gd = nalgebra::Vector2::new(grad_d[0], grad_d[1]);
        let hess_root = hess_d / (2.0 * d.sqrt()) - gd * gd.transpose() / (4.0 * d.powf(1.5));
        let sign = match band {
            0 => -1.0,
            1 => 1.0,
            _ => return Err(Error::InvalidArgument(format!("two-band model has bands 0 and 1, got {band}"))),
        };
        Ok(Matrix2::identity() * 2.0 + hess_root * sign)
    }

    /// Two-band gap `2 |U|` at the zone boundary `-K1/2`.
    pub fn zone_boundary_gap(&self) -> f64 {
        let k = BlochVector::zone_boundary(&self.spec);
        let (e1, e2) = self
            .two_band_energies(k, ReciprocalVector::k1())
            .expect("K1 is on the ray");
        e2 - e1
    }

    /// Expansion of the two roots at `k = -K_m/2 + G K_m/|K_m|`, valid for `K_m^2 G^2 < 0.1 U^2`.
    pub fn near_boundary_expansion(&self, g: f64, m: ReciprocalVector) -> Result<(f64, f64)> {
        let km = m.components(&self.spec);
        let k2 = km[0] * km[0] + km[1] * km[1];
        let boundary = BlochVector::from_components(&self.spec, [-0.5 * km[0], -0.5 * km[1]]);
        let u2 = self.u_squared(boundary, m)?;
        let ratio = k2 * g * g / u2.abs();
        if !(ratio < 0.1) {
            return Err(Error::OutOfValidity { ratio });
        }
        let u = u2.abs().sqrt();
        let base = g * g + 0.25 * k2 - self.a() + self.diagonal_shift();
        let split = if g == 0.0 { u } else { u + k2 * g * g / (2.0 * u) };
        Ok((base - split, base + split))
    }

    /// Point `-K_m/2 + G K_m/|K_m|`.
    pub fn near_boundary_point(&self, g: f64, m: ReciprocalVector) -> BlochVector {
        let km = m.components(&self.spec);
        let len = (km[0] * km[0] + km[1] * km[1]).sqrt();
        BlochVector::from_components(
            &self.spec,
            [-0.5 * km[0] + g * km[0] / len, -0.5 * km[1] + g * km[1] / len],
        )
    }

    fn band_energy(&self, k: [f64; 2], band: usize) -> Result<f64> {
        let (e1, e2) = self.two_band_energies(BlochVector::from_components(&self.spec, k), ReciprocalVector::k1())?;
        Ok(if band == 0 { e1 } else { e2 })
    }

    fn fd_hessian(&self, k: [f64; 2], band: usize, h: f64) -> Result<Matrix2<f64>> {
        let e = |dx: f64, dy: f64| self.band_energy([k[0] + dx, k[1] + dy], band);
        let e0 = e(0.0, 0.0)?;
        let hxx = (e(h, 0.0)? - 2.0 * e0 + e(-h, 0.0)?) / (h * h);
        let hyy = (e(0.0, h)? - 2.0 * e0 + e(0.0, -h)?) / (h * h);
        let hxy = (e(h, h)? - e(h, -h)? - e(-h, h)? + e(-h, -h)?) / (4.0 * h * h);
        Ok(Matrix2::new(hxx, hxy, hxy, hyy))
    }

    /// Finite-difference Hessian of a two-band root along `K1`, Richardson-extrapolated once.
    pub fn numerical_hessian(&self, k: BlochVector, band: usize) -> Result<Matrix2<f64>> {
        if band > 1 {
            return Err(Error::InvalidArgument(format!("two-band model has bands 0 and 1, got {band}")));
        }
        let h = self.mass_step * self.spec.tau().abs().max(f64::MIN_POSITIVE);
        let kc = k.components(&self.spec);
        let coarse = self.fd_hessian(kc, band, h)?;
        let fine = self.fd_hessian(kc, band, 0.5 * h)?;
        Ok((fine * 4.0 - coarse) / 3.0)
    }

    /// Effective mass tensor `m*/mu = 2 H^-1` in `(k_s, k_varphi)` axes.
    pub fn effective_mass(&self, k: BlochVector, band: usize) -> Result<Matrix2<f64>> {
        let hess = self.numerical_hessian(k, band)?;
        let det = hess.determinant();
        let t2 = self.spec.tau() * self.spec.tau();
        if det.abs() < 1e-12 * t2 * t2 {
            return Err(Error::SingularMass { det });
        }
        Ok(hess.try_inverse().ok_or(Error::SingularMass { det })? * 2.0)
    }
}

/// Straight-tube energy `(n^2 - 1/4)/rho0^2 + (l pi / L)^2`; `length = None` drops the longitudinal term.
pub fn cylinder_limit_energy(spec: &HelixSpec, n: i32, l: u32, length: Option<f64>) -> Result<f64> {
    if spec.kappa() != 0.0 {
        return Err(Error::InvalidArgument("cylinder limit requires kappa = 0".into()));
    }
    let inv = 1.0 / spec.rho0();
    let transverse = (n as f64 * n as f64 - 0.25) * inv * inv;
    match length {
        None => Ok(transverse),
        Some(len) if len > 0.0 && len.is_finite() => {
            let q = l as f64 * std::f64::consts::PI / len;
            Ok(transverse + q * q)
        }
        Some(len) => Err(Error::InvalidArgument(format!("cylinder length must be positive, got {len}"))),
    }
}

/// Least-squares line `gap = slope * x + intercept` with `x = epsilon kappa^2 / 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

/// Fits gap against `epsilon kappa^2 / 4`. Needs at least four `(epsilon, gap)` points.
pub fn gap_scaling(points: &[(f64, f64)], kappa: f64) -> Result<GapFit> {
    if points.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "gap scaling needs at least 4 points, got {}",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|(e, _)| e * kappa * kappa / 4.0).collect();
    let ys: Vec<f64> = points.iter().map(|(_, g)| *g).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(GapFit {
        slope,
        intercept,
        r_squared,
        residual: (ss_res / n).sqrt(),
    })
}
