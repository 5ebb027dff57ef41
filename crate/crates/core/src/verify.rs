//! Invariant checks run by the `verify` command.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bloch::BlochVector;
use crate::error::Result;
use crate::field::{CellGrid, Quantity};
use crate::geometry;
use crate::helix::HelixSpec;
use crate::operators::{self, Gauge, Perturbation, SurfaceOperators, WaveField};
use crate::oracle;
use crate::spectral::{signed_mode, Spectral};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    pub measured: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn at_most(name: &'static str, measured: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            tolerance,
            measured,
            passed: measured <= tolerance,
            detail,
        }
    }

    fn at_least(name: &'static str, measured: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            tolerance,
            measured,
            passed: measured >= tolerance,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub n_s: usize,
    pub n_phi: usize,
    pub fields: usize,
    pub seed: u64,
    /// Constant added to `V_kin` in the identity check; zero except in negative controls.
    pub vkin_offset: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n_s: 64,
            n_phi: 64,
            fields: 20,
            seed: 2024,
            vkin_offset: 0.0,
        }
    }
}

/// `||lhs - rhs|| / ||Phi||`, worst over random band-limited fields.
pub fn operator_identity_residual(spec: &HelixSpec, opts: &VerifyOptions) -> Result<f64> {
    let grid = CellGrid::unit_cell(spec, opts.n_s, opts.n_phi)?;
    let ops = SurfaceOperators::new(spec, grid).with_vkin_offset(opts.vkin_offset);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..opts.fields {
        let phi = WaveField::random_band_limited(grid, Gauge::Phi, 4, 4, &mut rng);
        let lhs = ops.conjugated_laplace_beltrami(&phi)?;
        let rhs = ops.transformed_kinetic(&phi)?;
        worst = worst.max(lhs.sub(&rhs).l2() / phi.l2());
    }
    Ok(worst)
}

/// Divergence form against expanded form of both operators.
pub fn expanded_form_residual(spec: &HelixSpec, opts: &VerifyOptions) -> Result<f64> {
    let grid = CellGrid::unit_cell(spec, opts.n_s, opts.n_phi)?;
    let ops = SurfaceOperators::new(spec, grid);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..opts.fields.min(5) {
        let psi = WaveField::random_band_limited(grid, Gauge::Psi, 4, 4, &mut rng);
        let d = ops.laplace_beltrami(&psi)?.sub(&ops.laplace_beltrami_expanded(&psi)?);
        worst = worst.max(d.l2() / psi.l2());
        let mut phi = psi.clone();
        phi.gauge = Gauge::Phi;
        let d = ops.transformed_operator(&phi)?.sub(&ops.transformed_operator_expanded(&phi)?);
        worst = worst.max(d.l2() / phi.l2());
    }
    Ok(worst)
}

/// Largest Fourier coefficient of the multiplicative perturbation off the `K1` ray,
/// divided by `epsilon kappa^2`.
pub fn off_ray_magnitude(spec: &HelixSpec, form: Perturbation, n_s: usize, n_phi: usize) -> Result<f64> {
    let f = crate::field::sample_field(spec, Quantity::V1(form), n_s, n_phi)?;
    let sp = Spectral::new(f.grid);
    let mut data: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    sp.forward(&mut data);
    let sigma = if spec.tau() > 0.0 { 1 } else { -1 };
    let norm = f.grid.len() as f64;
    let mut worst: f64 = 0.0;
    for i in 0..n_s {
        for j in 0..n_phi {
            let (ms, mp) = (signed_mode(i, n_s), signed_mode(j, n_phi));
            if mp != -sigma * ms {
                worst = worst.max(data[f.grid.index(i, j)].norm() / norm);
            }
        }
    }
    let scale = spec.epsilon() * spec.kappa() * spec.kappa();
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

/// Weingarten eigenvalues, first fundamental form and `M`, `K` consistency over the cell.
pub fn geometry_residuals(spec: &HelixSpec) -> Result<(f64, f64)> {
    let mut weingarten: f64 = 0.0;
    let mut fff: f64 = 0.0;
    let d = 1e-5;
    let period = if spec.tau() != 0.0 { spec.s_period()? } else { 2.0 * PI };
    for i in 0..8 {
        for j in 0..8 {
            let s = period * i as f64 / 8.0;
            let phi = -PI + 2.0 * PI * j as f64 / 8.0;
            let c = geometry::principal_curvatures(spec, s, phi);
            let ev = geometry::symmetric_eigenvalues_2x2(&geometry::weingarten(spec, s, phi));
            let mut closed = [c.kappa1, c.kappa2];
            closed.sort_by(f64::total_cmp);
            weingarten = weingarten.max((ev[0] - closed[0]).abs()).max((ev[1] - closed[1]).abs());

            let r = spec.rho0();
            let x_s = (geometry::surface_point(spec, s + d, phi)? - geometry::surface_point(spec, s - d, phi)?) / (2.0 * d);
            let x_v = (geometry::surface_point(spec, s, phi + d / r)? - geometry::surface_point(spec, s, phi - d / r)?)
                / (2.0 * d);
            let h = geometry::metric_h(spec, s, phi);
            fff = fff
                .max((x_v.norm_squared() - 1.0).abs())
                .max((x_s.norm_squared() - h * h).abs())
                .max(x_s.dot(&x_v).abs());
        }
    }
    Ok((weingarten, fff))
}

/// Largest `|h(s, phi) - h(-s, -phi)|` on the sampled cell.
pub fn reflection_residual(spec: &HelixSpec, n_s: usize, n_phi: usize) -> Result<f64> {
    let f = crate::field::sample_field(spec, Quantity::H, n_s, n_phi)?;
    let mut worst: f64 = 0.0;
    for i in 0..n_s {
        for j in 0..n_phi {
            let (ri, rj) = f.grid.reflect(i, j);
            worst = worst.max((f.get(i, j) - f.get(ri, rj)).abs());
        }
    }
    Ok(worst)
}

/// Convergence order of the ground state on `n`, `2n`, `4n` square grids.
pub fn grid_convergence_order(spec: &HelixSpec, n: usize) -> Result<f64> {
    let k = BlochVector::new(0.0, 0.0);
    let e: Result<Vec<f64>> = [n, 2 * n, 4 * n].iter().map(|&g| oracle::ground_state(spec, k, g, g)).collect();
    let e = e?;
    Ok(oracle::observed_order(e[0], e[1], e[2]))
}

/// Lowest eigenvalues of the surface gauge and flat gauge on `n x n` and `2n x 2n`.
pub fn gauge_mismatch(spec: &HelixSpec, n: usize, levels: usize) -> Result<(f64, f64)> {
    let k = BlochVector::new(0.0, 0.0);
    let diff = |g: usize| -> Result<f64> {
        let a = oracle::assemble_full(spec, k, g, g)?.eigensolve(levels)?.eigenvalues;
        let b = oracle::assemble_surface_gauge(spec, k, g, g)?.eigensolve(levels)?.eigenvalues;
        Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
    };
    Ok((diff(n)?, diff(2 * n)?))
}

/// Runs every check for `spec`.
pub fn run(spec: &HelixSpec, opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let eps = spec.epsilon();
    let grid_note = format!("grid {}x{}", opts.n_s, opts.n_phi);

    checks.push(Check::at_most("embedding", eps, 1.0 - f64::EPSILON, format!("epsilon = {eps}")));

    let r = operator_identity_residual(spec, opts)?;
    checks.push(Check::at_most(
        "operator_identity",
        r,
        1e-8,
        format!("{} random band-limited fields, {grid_note}", opts.fields),
    ));

    let r = expanded_form_residual(spec, opts)?;
    checks.push(Check::at_most("expanded_forms", r, 1e-8, grid_note.clone()));

    let (w, f) = geometry_residuals(spec)?;
    checks.push(Check::at_most("weingarten_eigenvalues", w, 1e-12, "8x8 sample points".into()));
    checks.push(Check::at_most("first_fundamental_form", f, 1e-8, "central differences, step 1e-5".into()));

    let r = reflection_residual(spec, opts.n_s, opts.n_phi)?;
    checks.push(Check::at_most("reflection_symmetry", r, 4.0 * f64::EPSILON, grid_note.clone()));

    let r = off_ray_magnitude(spec, Perturbation::Published, opts.n_s, opts.n_phi)?;
    checks.push(Check::at_most("ray_selection", r, 1e-12, "relative to epsilon kappa^2".into()));

    let worst_gap = (1..=18)
        .map(|j| {
            let s = HelixSpec::from_epsilon(1.0, 1.0, 0.05 * j as f64)?;
            Ok(operators::v_eff(&s, 0.0, 0.0) - operators::v_eff(&s, 0.0, PI))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check {
        name: "potential_inequality",
        tolerance: 0.0,
        measured: worst_gap,
        passed: worst_gap < 0.0,
        detail: "max of v_eff(0,0) - v_eff(0,pi) over epsilon = 0.05..0.9".into(),
    });

    let h = oracle::assemble_sector(spec, BlochVector::new(0.0, 0.0), opts.n_s, opts.n_phi, 0)?;
    let mut asym = h.relative_asymmetry();
    let small = oracle::assemble_full(spec, BlochVector::new(0.3 * spec.tau(), 0.5), 8, 8)?;
    asym = asym.max(small.relative_asymmetry());
    checks.push(Check::at_most("hermiticity", asym, 1e-12, "ray sector and 8x8 dense".into()));

    let rows = oracle::cylinder_check(1.0, 1.0, &[0, 1, 2, 3], 64)?;
    let worst = rows.iter().map(|r| r.extrapolated_rel_error).fold(0.0, f64::max);
    checks.push(Check::at_most(
        "cylinder_limit",
        worst,
        1e-6,
        "kappa = 0, rho0 = 1, n = 0..3, grids 64/128/256 extrapolated".into(),
    ));

    let probe = HelixSpec::new(eps.max(0.05), spec.tau(), 1.0, 0.0)?;
    let order = grid_convergence_order(&probe, 32)?;
    checks.push(Check::at_least(
        "grid_convergence",
        order,
        1.9,
        format!("kappa = {}, tau = {}, rho0 = 1, grids 32/64/128", probe.kappa(), probe.tau()),
    ));

    let (coarse, fine) = gauge_mismatch(spec, 12, 3)?;
    checks.push(Check::at_most(
        "gauge_equivalence",
        fine / coarse.max(f64::MIN_POSITIVE),
        0.5,
        format!("lowest 3 levels differ by {coarse:.3e} (12x12) and {fine:.3e} (24x24)"),
    ));

    Ok(VerifyReport { checks })
}
