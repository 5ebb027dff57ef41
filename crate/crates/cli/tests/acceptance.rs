//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use helitube::bloch::{BandModel, BandSource, BlochVector, ReciprocalVector};
use helitube::geometry::{metric_h, principal_curvatures};
use helitube::operators::v_eff;
use helitube::oracle::{self, OracleOptions};
use helitube::verify::{self, VerifyOptions};
use helitube::{gap_scaling, HelixSpec, Perturbation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn unit(eps: f64) -> HelixSpec {
    HelixSpec::from_epsilon(1.0, 1.0, eps).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: helitube::Error) -> String {
    e.to_string()
}

fn cylinder_limit() -> Outcome {
    let t = Instant::now();
    let rows = oracle::cylinder_check(1.0, 1.0, &[0, 1, 2, 3], 64).map_err(err)?;
    let extrap = rows.iter().map(|r| r.extrapolated_rel_error).fold(0.0, f64::max);
    let raw = rows.iter().map(|r| r.raw_rel_error).fold(0.0, f64::max);
    let secs = t.elapsed().as_secs_f64();
    check(
        (extrap <= 1e-6 || raw <= 1e-3) && secs < 30.0,
        format!("extrapolated rel err {extrap:.2e}, raw 64x64 rel err {raw:.2e}, {secs:.1} s"),
    )
}

fn potential_inequality() -> Outcome {
    let mut bad = Vec::new();
    for j in 1..=18 {
        let eps = 0.05 * j as f64;
        let spec = unit(eps);
        if !(v_eff(&spec, 0.0, 0.0) < v_eff(&spec, 0.0, PI)) {
            bad.push(eps);
        }
    }
    check(bad.is_empty(), format!("v_eff(0,0) < v_eff(0,pi) at 18 epsilons, violations {bad:?}"))
}

fn operator_identity() -> Outcome {
    let r = verify::operator_identity_residual(&unit(0.1), &VerifyOptions::default()).map_err(err)?;
    check(r <= 1e-8, format!("worst relative residual {r:.2e} over 20 fields"))
}

fn ray_selection() -> Outcome {
    let mut worst: f64 = 0.0;
    for form in [Perturbation::Published, Perturbation::Consistent] {
        for spec in [unit(0.1), HelixSpec::new(1.5, -0.7, 0.2, 0.3).unwrap()] {
            worst = worst.max(verify::off_ray_magnitude(&spec, form, 64, 64).map_err(err)?);
        }
    }
    check(worst <= 1e-12, format!("off-ray magnitude / (eps kappa^2) = {worst:.2e}"))
}

fn gap_scaling_check() -> Outcome {
    let t = Instant::now();
    let opts = OracleOptions::default();
    let gaps = |eps: f64| -> Result<(f64, f64), String> {
        let model = BandModel::new(unit(eps));
        let two = model.zone_boundary_gap();
        let orc = oracle::zone_boundary_gap(&model, BandSource::OraclePerturbed, &opts).map_err(err)?;
        Ok((two, orc))
    };
    let mut two = Vec::new();
    let mut orc = Vec::new();
    for eps in [0.01, 0.02, 0.03, 0.04, 0.05] {
        let (a, b) = gaps(eps)?;
        two.push((eps, a));
        orc.push((eps, b));
    }
    let positive = two.iter().chain(&orc).all(|&(_, g)| g > 0.0);
    let fit_two = gap_scaling(&two, 1.0).map_err(err)?;
    let fit_orc = gap_scaling(&orc, 1.0).map_err(err)?;
    let mut rel = Vec::new();
    for eps in [0.05, 0.025, 0.0125] {
        let (a, b) = gaps(eps)?;
        rel.push((a - b).abs() / b);
    }
    let shrinking = rel.windows(2).all(|w| w[1] < w[0]);
    let slope_ok = |s: f64| (0.5..=2.0).contains(&s);
    let secs = t.elapsed().as_secs_f64();
    check(
        positive
            && fit_two.r_squared >= 0.999
            && fit_orc.r_squared >= 0.999
            && slope_ok(fit_two.slope)
            && slope_ok(fit_orc.slope)
            && rel[0] <= 0.1
            && shrinking
            && secs < 120.0,
        format!(
            "R^2 {:.6}/{:.6}, slope/(kappa^2/4) {:.4}/{:.4}, rel diff {:.2e} -> {:.2e} -> {:.2e}, {secs:.1} s",
            fit_two.r_squared, fit_orc.r_squared, fit_two.slope, fit_orc.slope, rel[0], rel[1], rel[2]
        ),
    )
}

fn curvature_advantage() -> Outcome {
    let spec = unit(0.05);
    let flat = HelixSpec::new(0.0, 1.0, spec.rho0(), 0.0).unwrap();
    let k = BlochVector::new(0.0, 0.0);
    let e = oracle::ground_state(&spec, k, 64, 64).map_err(err)?;
    let e0 = oracle::ground_state(&flat, k, 64, 64).map_err(err)?;
    let deficit = e0 - e;
    let target = 0.25 * spec.kappa() * spec.kappa();
    check(
        e < e0 && (deficit - target).abs() <= 0.25 * target,
        format!("E_helix {e:.6}, E_straight {e0:.6}, deficit {deficit:.4} vs kappa^2/4 = {target}"),
    )
}

fn two_band_consistency() -> Outcome {
    let free = BandModel::new(HelixSpec::new(0.0, 1.0, 0.3, 0.0).unwrap());
    let mut exact = true;
    for i in 0..=20 {
        let k = BlochVector::new(-0.5 * i as f64 / 20.0, 0.5 * (i % 3) as f64);
        let (e1, e2) = free.two_band_energies(k, ReciprocalVector::k1()).map_err(err)?;
        let (a, b) = (free.free_energy(k, 0), free.free_energy(k, 1));
        exact &= e1 == a.min(b) && e2 == a.max(b);
    }
    let model = BandModel::new(unit(0.05));
    let m = ReciprocalVector::k1();
    let u2 = model.u_squared(BlochVector::zone_boundary(&model.spec), m).map_err(err)?;
    let k2 = m.norm_sq(&model.spec);
    let mut within = true;
    let mut worst: f64 = 0.0;
    for f in [0.0, 0.1, 0.2, 0.3] {
        let g = f * u2.sqrt() / k2.sqrt();
        let (a, b) = model.near_boundary_expansion(g, m).map_err(err)?;
        let (e1, e2) = model.two_band_energies(model.near_boundary_point(g, m), m).map_err(err)?;
        let e = (a - e1).abs().max((b - e2).abs()) / u2.sqrt();
        within &= e <= k2 * g * g / u2 + 1e-12;
        worst = worst.max(e);
    }
    check(
        exact && within,
        format!("free roots exact: {exact}; near-boundary error / |U| at most {worst:.2e}, within K^2 G^2 / U^2"),
    )
}

fn effective_mass() -> Outcome {
    let model = BandModel::new(unit(0.05));
    let m = ReciprocalVector::k1();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut used = 0;
    while used < 10 {
        let k = BlochVector::new(rng.random_range(-1.0..0.0), rng.random_range(0.0..1.0));
        if (model.free_energy(k, 0) - model.free_energy(k, 1)).abs() < 1e-2 {
            continue;
        }
        for band in 0..2 {
            let a = model.two_band_hessian(k, m, band).map_err(err)?;
            let n = model.numerical_hessian(k, band).map_err(err)?;
            worst = worst.max((a - n).norm() / a.norm());
        }
        used += 1;
    }
    check(worst <= 1e-4, format!("worst relative Hessian difference {worst:.2e} at 10 points, both bands"))
}

fn geometry_suite() -> Outcome {
    let mut w: f64 = 0.0;
    let mut fff: f64 = 0.0;
    let mut refl: f64 = 0.0;
    let torus = HelixSpec::new(1.0, 0.0, 0.4, 0.0).unwrap();
    for spec in [unit(0.1), HelixSpec::new(0.6, -1.8, 0.4, 0.0).unwrap(), torus] {
        let (a, b) = verify::geometry_residuals(&spec).map_err(err)?;
        w = w.max(a);
        fff = fff.max(b);
        if spec.tau() != 0.0 {
            refl = refl.max(verify::reflection_residual(&spec, 64, 64).map_err(err)?);
        }
    }
    let (ns, np) = (128, 128);
    let (ls, lp) = (2.0 * PI / torus.kappa(), 2.0 * PI * torus.rho0());
    let mut total = 0.0;
    for i in 0..ns {
        for j in 0..np {
            let s = ls * i as f64 / ns as f64;
            let phi = -PI + 2.0 * PI * j as f64 / np as f64;
            total += principal_curvatures(&torus, s, phi).gauss * metric_h(&torus, s, phi);
        }
    }
    total *= (ls / ns as f64) * (lp / np as f64);
    check(
        w <= 1e-12 && fff <= 1e-8 && refl <= 4.0 * f64::EPSILON && total.abs() <= 1e-8,
        format!(
            "Weingarten {w:.1e}, first form {fff:.1e}, reflection {refl:.1e}, torus total curvature {:.1e}",
            total.abs()
        ),
    )
}

fn determinism() -> Outcome {
    let base = std::env::temp_dir().join(format!("helitube-accept-{}", std::process::id()));
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let out = base.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_helitube"))
            .arg("bands")
            .arg("--out")
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("bands exited with {status}"));
        }
        std::fs::read(out.join("bands.csv")).map_err(|e| e.to_string())
    };
    let a = run("a")?;
    let b = run("b")?;
    let _ = std::fs::remove_dir_all(&base);
    check(a == b && !a.is_empty(), format!("bands.csv {} bytes, identical: {}", a.len(), a == b))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 cylinder limit", cylinder_limit),
        ("2 potential inequality", potential_inequality),
        ("3 operator identity", operator_identity),
        ("4 ray selection", ray_selection),
        ("5 gap existence and linear scaling", gap_scaling_check),
        ("6 curvature energy advantage", curvature_advantage),
        ("7 two-band internal consistency", two_band_consistency),
        ("8 effective mass", effective_mass),
        ("9 geometry suite", geometry_suite),
        ("10 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(d) => println!("PASS {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL {name}: {d}");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
