use std::f64::consts::PI;

use helitube::geometry::{self, principal_curvatures, surface_point, symmetric_eigenvalues_2x2, weingarten};
use helitube::verify;
use helitube::HelixSpec;
use nalgebra::Matrix2;

fn eigen_sorted(m: Matrix2<f64>) -> [f64; 2] {
    let e = m.complex_eigenvalues();
    let mut v = [e[0].re, e[1].re];
    v.sort_by(f64::total_cmp);
    v
}

/// Shape operator from finite differences of the embedding, in `(s, phi)` coordinates.
fn shape_operator_fd(spec: &HelixSpec, s: f64, phi: f64) -> Matrix2<f64> {
    let d = 1e-4;
    let x = |a: f64, b: f64| surface_point(spec, a, b).unwrap();
    let x0 = x(s, phi);
    let xs = (x(s + d, phi) - x(s - d, phi)) / (2.0 * d);
    let xp = (x(s, phi + d) - x(s, phi - d)) / (2.0 * d);
    let xss = (x(s + d, phi) - 2.0 * x0 + x(s - d, phi)) / (d * d);
    let xpp = (x(s, phi + d) - 2.0 * x0 + x(s, phi - d)) / (d * d);
    let xsp = (x(s + d, phi + d) - x(s + d, phi - d) - x(s - d, phi + d) + x(s - d, phi - d)) / (4.0 * d * d);
    let n = xs.cross(&xp).normalize();
    let first = Matrix2::new(xs.dot(&xs), xs.dot(&xp), xp.dot(&xs), xp.dot(&xp));
    let second = Matrix2::new(xss.dot(&n), xsp.dot(&n), xsp.dot(&n), xpp.dot(&n));
    first.try_inverse().unwrap() * second
}

#[test]
fn curvatures_match_embedding() {
    for spec in [
        HelixSpec::new(1.0, 0.7, 0.3, 0.0).unwrap(),
        HelixSpec::new(0.4, -1.2, 0.5, 0.9).unwrap(),
    ] {
        for &(s, phi) in &[(0.0, 0.0), (0.8, 1.9), (2.3, -2.4)] {
            let c = principal_curvatures(&spec, s, phi);
            let mut closed = [c.kappa1, c.kappa2];
            closed.sort_by(f64::total_cmp);
            let fd = eigen_sorted(shape_operator_fd(&spec, s, phi));
            let flipped = [-fd[1], -fd[0]];
            let err = |v: [f64; 2]| (v[0] - closed[0]).abs().max((v[1] - closed[1]).abs());
            assert!(err(fd).min(err(flipped)) <= 1e-5, "{fd:?} vs {closed:?}");
        }
    }
}

#[test]
fn weingarten_eigenvalues_are_principal_curvatures() {
    let (w, fff) = verify::geometry_residuals(&HelixSpec::new(1.0, 1.0, 0.1, 0.0).unwrap()).unwrap();
    assert!(w <= 1e-12 && fff <= 1e-8, "{w:e} {fff:e}");
    let spec = HelixSpec::new(2.0, 0.5, 0.2, 0.0).unwrap();
    let ev = symmetric_eigenvalues_2x2(&weingarten(&spec, 0.3, 0.4));
    let c = principal_curvatures(&spec, 0.3, 0.4);
    assert!((ev[0] - c.kappa2).abs() <= 1e-12 && (ev[1] - c.kappa1).abs() <= 1e-12);
}

#[test]
fn torus_total_curvature_vanishes() {
    let spec = HelixSpec::new(1.0, 0.0, 0.4, 0.0).unwrap();
    let (ns, np) = (128, 128);
    let (ls, lp) = (2.0 * PI / spec.kappa(), 2.0 * PI * spec.rho0());
    let mut total = 0.0;
    for i in 0..ns {
        for j in 0..np {
            let s = ls * i as f64 / ns as f64;
            let phi = -PI + 2.0 * PI * j as f64 / np as f64;
            let k = principal_curvatures(&spec, s, phi).gauss;
            total += k * geometry::metric_h(&spec, s, phi);
        }
    }
    total *= (ls / ns as f64) * (lp / np as f64);
    assert!(total.abs() <= 1e-8, "{total:e}");
}

#[test]
fn metric_factor_is_reflection_symmetric() {
    let spec = HelixSpec::new(1.0, 1.0, 0.3, 0.0).unwrap();
    assert!(verify::reflection_residual(&spec, 32, 32).unwrap() <= 4.0 * f64::EPSILON);
}

#[test]
fn outer_rim_at_reference_point() {
    let spec = HelixSpec::new(1.0, 1.0, 0.2, 0.0).unwrap();
    let axis_dist = |p: helitube::Vec3| p.x.hypot(p.y);
    let outer = axis_dist(surface_point(&spec, 0.0, 0.0).unwrap());
    let inner = axis_dist(surface_point(&spec, 0.0, PI).unwrap());
    assert!(outer > inner);
    assert_eq!(geometry::metric_h(&spec, 0.0, 0.0), 1.2);
}
