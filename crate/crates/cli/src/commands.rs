use std::f64::consts::PI;

use serde_json::{json, Value};

use helitube::bloch::{BandModel, BandSource, BlochVector};
use helitube::oracle::{self, OracleOptions};
use helitube::verify::{self, VerifyOptions};
use helitube::{gap_scaling, geometry, operators, Error, HelixSpec};

use crate::config::RunConfig;
use crate::output::{json_num, write_atomic, Csv};

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Verification(String),
    Solver(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Config(_) => 2,
            Failure::Solver(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Verification(m) | Failure::Solver(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(_)
            | Error::EmbeddingViolation(_)
            | Error::DegenerateCurve
            | Error::DegeneratePeriod
            | Error::InvalidGrid(_)
            | Error::TooLarge { .. }
            | Error::InvalidArgument(_) => Failure::Config(e.to_string()),
            _ => Failure::Solver(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn write(cfg: &RunConfig, name: &str, text: &str) -> Outcome {
    write_atomic(&cfg.out, name, text)
        .map(|_| ())
        .map_err(|e| Failure::Config(format!("cannot write {name} to {}: {e}", cfg.out.display())))
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn s_period(spec: &HelixSpec) -> Result<f64, Failure> {
    match spec.s_period() {
        Ok(p) => Ok(p),
        // A torus closes after one turn of the base circle.
        Err(Error::DegeneratePeriod) if spec.kappa() > 0.0 => Ok(2.0 * PI / spec.kappa()),
        Err(e) => Err(e.into()),
    }
}

fn nodes(cfg: &RunConfig, spec: &HelixSpec) -> Result<Vec<(f64, f64)>, Failure> {
    let period = s_period(spec)?;
    let grid = helitube::CellGrid::new(cfg.n_s, cfg.n_phi, period, spec.varphi_period())?;
    Ok((0..grid.n_s)
        .flat_map(|i| (0..grid.n_phi).map(move |j| (grid.s(i), grid.phi(j))))
        .collect())
}

pub fn geometry_cmd(cfg: &RunConfig, spec: &HelixSpec) -> Outcome {
    let mut csv = Csv::new(&["s", "phi", "x", "y", "z", "h", "kappa1", "kappa2", "M", "K"]);
    for (s, phi) in nodes(cfg, spec)? {
        let p = geometry::surface_sample(spec, s, phi)?;
        let c = p.curvatures;
        csv.row(&[s, phi, p.point.x, p.point.y, p.point.z, p.h, c.kappa1, c.kappa2, c.mean, c.gauss]);
    }
    write(cfg, "geometry.csv", &csv.into_string())
}

pub fn potential_cmd(cfg: &RunConfig, spec: &HelixSpec) -> Outcome {
    let f = cfg.units.factor();
    let mut csv = Csv::new(&["s", "phi", "v_curv", "v_kin", "v_eff"]);
    for (s, phi) in nodes(cfg, spec)? {
        let vc = geometry::v_curv(spec, s, phi);
        let vk = operators::v_kin(spec, s, phi);
        csv.row(&[s, phi, f * vc, f * vk, f * (vc + vk)]);
    }
    write(cfg, "potential.csv", &csv.into_string())
}

fn oracle_options(cfg: &RunConfig) -> OracleOptions {
    OracleOptions {
        n_s: cfg.n_s,
        n_phi: cfg.n_phi,
        n_harmonics: cfg.harmonics,
        bands: 2,
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn bands_cmd(cfg: &RunConfig, spec: &HelixSpec) -> Outcome {
    let model = BandModel::new(*spec).with_form(cfg.perturbation);
    let opts = oracle_options(cfg);
    let path = cfg.kpath(spec).points();
    let two = oracle::band_sweep(&model, &path, BandSource::TwoBand, &opts)?;
    let pert = oracle::band_sweep(&model, &path, BandSource::OraclePerturbed, &opts)?;
    let full = oracle::band_sweep(&model, &path, BandSource::OracleFull, &opts)?;

    let f = cfg.units.factor();
    let mut csv = Csv::new(&[
        "k_s",
        "n",
        "E_twoband_1",
        "E_twoband_2",
        "E_oracle_pert_1",
        "E_oracle_pert_2",
        "E_oracle_full_1",
        "E_oracle_full_2",
    ]);
    for (i, k) in path.iter().enumerate() {
        let (t, p, o) = (&two.energies[i], &pert.energies[i], &full.energies[i]);
        csv.row(&[k.k_s, k.n, f * t[0], f * t[1], f * p[0], f * p[1], f * o[0], f * o[1]]);
    }
    write(cfg, "bands.csv", &csv.into_string())?;

    let gap_two = model.zone_boundary_gap();
    let gap_pert = oracle::zone_boundary_gap(&model, BandSource::OraclePerturbed, &opts)?;
    let gap_full = oracle::zone_boundary_gap(&model, BandSource::OracleFull, &opts)?;
    let boundary = BlochVector::zone_boundary(spec);
    let u2 = model.u_squared(boundary, helitube::ReciprocalVector::k1())?;
    let eps = spec.epsilon();
    let summary = json!({
        "a": json_num(f * spec.a()),
        "epsilon": json_num(eps),
        "kappa": json_num(spec.kappa()),
        "tau": json_num(spec.tau()),
        "rho0": json_num(spec.rho0()),
        "units": cfg.units.label(),
        "perturbation": format!("{:?}", cfg.perturbation).to_lowercase(),
        "grid": [cfg.n_s, cfg.n_phi],
        "harmonics": cfg.harmonics,
        "path_points": path.len(),
        "gap_point": {"k_s": json_num(boundary.k_s), "n": json_num(boundary.n)},
        "gaps": {
            "two_band": json_num(f * gap_two),
            "oracle_perturbed": json_num(f * gap_pert),
            "oracle_full": json_num(f * gap_full),
        },
        "eps_kappa2_over_4": json_num(f * eps * spec.kappa() * spec.kappa() / 4.0),
        "u_squared_negative": u2 < 0.0,
        "agreement": {
            "gap_rel_diff_two_band_vs_oracle_perturbed": json_num(rel(gap_two, gap_pert)),
            "gap_rel_diff_oracle_full_vs_oracle_perturbed": json_num(rel(gap_full, gap_pert)),
            "max_abs_two_band_minus_oracle_perturbed": json_num(f * max_abs_diff(&two.band(0), &pert.band(0)).max(max_abs_diff(&two.band(1), &pert.band(1)))),
            "max_abs_oracle_full_minus_oracle_perturbed_band1": json_num(f * max_abs_diff(&full.band(0), &pert.band(0))),
        },
    });
    write(cfg, "summary.json", &json_text(&summary))
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        (a - b).abs() / b.abs()
    }
}

pub fn gap_scan_cmd(cfg: &RunConfig, spec: &HelixSpec) -> Outcome {
    if cfg.eps_sweep.is_empty() {
        return Err(Failure::Config("eps_sweep is empty".into()));
    }
    let opts = oracle_options(cfg);
    let f = cfg.units.factor();
    let (kappa, tau) = (spec.kappa(), spec.tau());
    let mut csv = Csv::new(&["epsilon", "gap_twoband", "gap_oracle", "ratio_to_eps_kappa2_over_4"]);
    let mut two_pts = Vec::new();
    let mut oracle_pts = Vec::new();
    for &eps in &cfg.eps_sweep {
        let s = if eps == 0.0 {
            HelixSpec::new(0.0, tau, spec.rho0(), spec.s0())?
        } else {
            HelixSpec::from_epsilon(kappa, tau, eps)?.with_s0(spec.s0())?
        };
        let model = BandModel::new(s).with_form(cfg.perturbation);
        let g2 = model.zone_boundary_gap();
        let go = oracle::zone_boundary_gap(&model, BandSource::OraclePerturbed, &opts)?;
        let scale = eps * kappa * kappa / 4.0;
        let ratio = if scale > 0.0 { g2 / scale } else { f64::NAN };
        csv.row(&[eps, f * g2, f * go, ratio]);
        two_pts.push((eps, g2));
        oracle_pts.push((eps, go));
    }
    write(cfg, "gapscan.csv", &csv.into_string())?;

    let fit = |pts: &[(f64, f64)]| match gap_scaling(pts, kappa) {
        Ok(g) => json!({
            "slope": json_num(g.slope),
            "intercept": json_num(g.intercept),
            "r_squared": json_num(g.r_squared),
            "residual": json_num(g.residual),
        }),
        Err(_) => Value::Null,
    };
    let report = json!({
        "x": "epsilon * kappa^2 / 4",
        "kappa": json_num(kappa),
        "tau": json_num(tau),
        "points": cfg.eps_sweep.len(),
        "fit_two_band": fit(&two_pts),
        "fit_oracle": fit(&oracle_pts),
    });
    write(cfg, "gapscan.json", &json_text(&report))
}

pub fn cylinder_check_cmd(cfg: &RunConfig, spec: &HelixSpec) -> Outcome {
    let tau = if spec.tau() == 0.0 { 1.0 } else { spec.tau() };
    let rows = oracle::cylinder_check(spec.rho0(), tau, &[0, 1, 2, 3], cfg.n_s)?;
    let mut worst: f64 = 0.0;
    for r in &rows {
        println!(
            "n = {}  exact = {}  raw({}) = {}  extrapolated = {}  rel_err = {:.3e}",
            r.n,
            crate::output::num(r.exact),
            r.raw[0].0,
            crate::output::num(r.raw[0].1),
            crate::output::num(r.extrapolated),
            r.extrapolated_rel_error
        );
        worst = worst.max(r.extrapolated_rel_error);
    }
    println!("max_relative_error = {worst:.3e}");
    if worst <= 1e-6 {
        Ok(())
    } else {
        Err(Failure::Verification(format!("cylinder limit error {worst:.3e} > 1e-6")))
    }
}

pub fn verify_cmd(cfg: &RunConfig, spec: &HelixSpec) -> Outcome {
    let opts = VerifyOptions {
        n_s: cfg.n_s,
        n_phi: cfg.n_phi,
        vkin_offset: cfg.vkin_offset,
        ..Default::default()
    };
    let report = verify::run(spec, &opts)?;
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "passed": c.passed,
                "tolerance": json_num(c.tolerance),
                "measured": json_num(c.measured),
                "detail": c.detail,
            })
        })
        .collect();
    let doc = json!({
        "passed": report.passed(),
        "epsilon": json_num(spec.epsilon()),
        "grid": [cfg.n_s, cfg.n_phi],
        "checks": checks,
    });
    write(cfg, "verify.json", &json_text(&doc))?;
    for c in &report.checks {
        println!("{} {} measured={:.3e} tol={:.3e}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.measured, c.tolerance);
    }
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
        Err(Failure::Verification(format!("failed checks: {}", names.join(", "))))
    }
}
