//! Frames, embedding and curvature of the helical tube surface.
//!
//! The base curve is the canonical circular helix
//!
//! ```text
//! x(s) = (R cos(alpha s), R sin(alpha s), p alpha s),   alpha = sqrt(kappa^2 + tau^2)
//! ```
//!
//! with `R = kappa / (kappa^2 + tau^2)` and `p = tau / (kappa^2 + tau^2)`. The
//! cross-section disc is carried by the rotation-minimizing frame `(t, N, B)`,
//! obtained from the Frenet frame by rotating `(n, b)` through
//! `theta(s) = -tau (s - s0)`. The surface is
//!
//! ```text
//! X(s, phi) = x(s) - rho0 (sin(phi) B + cos(phi) N)
//! ```
//!
//! so `phi = 0` sits on the outer rim at `s = s0` (the Frenet normal points
//! towards the helix axis). The induced metric is `dvarphi^2 + h^2 ds^2` with
//! `varphi = rho0 phi` and `h = 1 + epsilon cos(theta + phi)`.

use nalgebra::{Matrix2, Vector3};

use crate::error::{Error, Result};
use crate::helix::HelixSpec;

pub type Vec3 = Vector3<f64>;

/// Frame vectors at arclength `s`.
///
/// `normal_fw` and `binormal_fw` are the rotated (Fermi-Walker) pair. For a
/// frame produced by [`frenet_frame`] they coincide with `n` and `b` and
/// `theta` is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSample {
    pub s: f64,
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub normal_fw: Vec3,
    pub binormal_fw: Vec3,
    pub theta: f64,
}

/// Principal, mean and Gauss curvature at a surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvatures {
    pub kappa1: f64,
    pub kappa2: f64,
    pub mean: f64,
    pub gauss: f64,
}

/// Every geometric quantity at one `(s, phi)` node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub s: f64,
    pub phi: f64,
    pub varphi: f64,
    pub point: Vec3,
    pub h: f64,
    pub curvatures: Curvatures,
    pub v_curv: f64,
}

/// Rotation angle `theta(s) = -int_{s0}^{s} tau ds'` for constant torsion.
pub fn rotation_angle(spec: &HelixSpec, s: f64) -> f64 {
    -spec.tau() * (s - spec.s0())
}

fn helix_rate(spec: &HelixSpec) -> Result<f64> {
    let alpha = spec.kappa().hypot(spec.tau());
    if alpha == 0.0 {
        Err(Error::DegenerateCurve)
    } else {
        Ok(alpha)
    }
}

/// Point on the base helix.
pub fn base_point(spec: &HelixSpec, s: f64) -> Result<Vec3> {
    let alpha = helix_rate(spec)?;
    let (r, p) = (spec.helix_radius(), spec.pitch());
    let (sn, cs) = (alpha * s).sin_cos();
    Ok(Vec3::new(r * cs, r * sn, p * alpha * s))
}

/// Analytic Frenet frame of the canonical helix.
pub fn frenet_frame(spec: &HelixSpec, s: f64) -> Result<FrameSample> {
    let alpha = helix_rate(spec)?;
    let (r, p) = (spec.helix_radius(), spec.pitch());
    let (sn, cs) = (alpha * s).sin_cos();
    let t = Vec3::new(-r * alpha * sn, r * alpha * cs, p * alpha);
    let n = Vec3::new(-cs, -sn, 0.0);
    let b = Vec3::new(p * alpha * sn, -p * alpha * cs, r * alpha);
    Ok(FrameSample {
        s,
        t,
        n,
        b,
        normal_fw: n,
        binormal_fw: b,
        theta: 0.0,
    })
}

/// Frenet frame with `(N, B)` rotated through [`rotation_angle`].
pub fn rotated_frame(spec: &HelixSpec, s: f64) -> Result<FrameSample> {
    let mut frame = frenet_frame(spec, s)?;
    let theta = rotation_angle(spec, s);
    let (sn, cs) = theta.sin_cos();
    frame.normal_fw = cs * frame.n + sn * frame.b;
    frame.binormal_fw = -sn * frame.n + cs * frame.b;
    frame.theta = theta;
    Ok(frame)
}

/// Embedding `X(s, phi)` of the tube surface.
pub fn surface_point(spec: &HelixSpec, s: f64, phi: f64) -> Result<Vec3> {
    let frame = rotated_frame(spec, s)?;
    let x = base_point(spec, s)?;
    let (sn, cs) = phi.sin_cos();
    Ok(x - spec.rho0() * (sn * frame.binormal_fw + cs * frame.normal_fw))
}

/// Metric factor `h = 1 + rho0 kappa cos(theta(s) + phi)`.
pub fn metric_h(spec: &HelixSpec, s: f64, phi: f64) -> f64 {
    1.0 + spec.epsilon() * (rotation_angle(spec, s) + phi).cos()
}

/// Weingarten map in the `(varphi, s)` coordinate basis.
pub fn weingarten(spec: &HelixSpec, s: f64, phi: f64) -> Matrix2<f64> {
    let h = metric_h(spec, s, phi);
    let k2 = spec.kappa() * (rotation_angle(spec, s) + phi).cos() / h;
    Matrix2::new(1.0 / spec.rho0(), 0.0, 0.0, k2)
}

/// Principal curvatures and their mean/Gauss combinations.
///
/// The mean curvature is taken as `(kappa1 + kappa2) / 2`. The opposite sign
/// convention `-tr(W)/2` changes nothing downstream because the curvature
/// potential only sees `(kappa1 - kappa2)^2`.
pub fn principal_curvatures(spec: &HelixSpec, s: f64, phi: f64) -> Curvatures {
    let h = metric_h(spec, s, phi);
    let kappa1 = 1.0 / spec.rho0();
    let kappa2 = spec.kappa() * (rotation_angle(spec, s) + phi).cos() / h;
    Curvatures {
        kappa1,
        kappa2,
        mean: 0.5 * (kappa1 + kappa2),
        gauss: kappa1 * kappa2,
    }
}

/// Curvature-induced potential `-(M^2 - K) = -1 / (4 rho0^2 h^2)` in units
/// where `hbar^2 / 2 mu` is absorbed.
pub fn v_curv(spec: &HelixSpec, s: f64, phi: f64) -> f64 {
    let h = metric_h(spec, s, phi);
    let r = spec.rho0();
    -0.25 / (r * r * h * h)
}

/// All geometric quantities at `(s, phi)`.
pub fn surface_sample(spec: &HelixSpec, s: f64, phi: f64) -> Result<SurfaceSample> {
    Ok(SurfaceSample {
        s,
        phi,
        varphi: spec.rho0() * phi,
        point: surface_point(spec, s, phi)?,
        h: metric_h(spec, s, phi),
        curvatures: principal_curvatures(spec, s, phi),
        v_curv: v_curv(spec, s, phi),
    })
}

/// Eigenvalues of a real symmetric 2x2 matrix in ascending order.
pub fn symmetric_eigenvalues_2x2(m: &Matrix2<f64>) -> [f64; 2] {
    let half_tr = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let half_diff = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    let off = 0.5 * (m[(0, 1)] + m[(1, 0)]);
    let r = half_diff.hypot(off);
    [half_tr - r, half_tr + r]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec(k: f64, t: f64, r: f64) -> HelixSpec {
        HelixSpec::new(k, t, r, 0.0).unwrap()
    }

    fn assert_vec(a: Vec3, b: Vec3, tol: f64) {
        assert!((a - b).norm() < tol, "{a:?} vs {b:?}");
    }

    #[test]
    fn rotation_angle_examples() {
        assert_eq!(rotation_angle(&spec(1.0, 1.0, 0.1), PI), -PI);
        assert_eq!(rotation_angle(&spec(1.0, 0.0, 0.1), 5.0), 0.0);
        let s = HelixSpec::new(1.0, 2.0, 0.1, 1.0).unwrap();
        assert_eq!(rotation_angle(&s, 3.0), -4.0);
    }

    #[test]
    fn unit_circle_frame() {
        let f = frenet_frame(&spec(1.0, 0.0, 0.1), 0.0).unwrap();
        assert_vec(f.t, Vec3::new(0.0, 1.0, 0.0), 1e-15);
        assert_vec(f.n, Vec3::new(-1.0, 0.0, 0.0), 1e-15);
        assert_vec(base_point(&spec(1.0, 0.0, 0.1), 0.0).unwrap(), Vec3::new(1.0, 0.0, 0.0), 1e-15);
    }

    #[test]
    fn degenerate_curve_is_rejected() {
        let s = spec(0.0, 0.0, 0.1);
        assert_eq!(frenet_frame(&s, 0.0), Err(Error::DegenerateCurve));
        assert_eq!(rotated_frame(&s, 0.0), Err(Error::DegenerateCurve));
        assert_eq!(surface_point(&s, 0.0, 0.0), Err(Error::DegenerateCurve));
    }

    #[test]
    fn frame_orthonormal_at_two_pi() {
        let f = rotated_frame(&spec(0.5, 0.5, 0.1), 2.0 * PI).unwrap();
        for (u, v) in [(f.t, f.n), (f.t, f.b), (f.n, f.b), (f.t, f.normal_fw), (f.t, f.binormal_fw), (f.normal_fw, f.binormal_fw)] {
            assert!(u.dot(&v).abs() < 1e-12);
        }
        for u in [f.t, f.n, f.b, f.normal_fw, f.binormal_fw] {
            assert!((u.norm() - 1.0).abs() < 1e-12);
        }
        assert_vec(f.t.cross(&f.n), f.b, 1e-12);
    }

    #[test]
    fn rotated_frame_coincides_at_reference_point() {
        let f = rotated_frame(&spec(1.0, 1.0, 0.1), 0.0).unwrap();
        assert_eq!(f.theta, 0.0);
        assert_vec(f.normal_fw, f.n, 1e-15);
        assert_vec(f.binormal_fw, f.b, 1e-15);
        let flat = rotated_frame(&spec(1.0, 0.0, 0.1), 3.7).unwrap();
        assert_vec(flat.normal_fw, flat.n, 1e-15);
    }

    #[test]
    fn rotated_frame_half_turn_flips_normal() {
        let f = rotated_frame(&spec(1.0, 1.0, 0.1), PI).unwrap();
        assert!((f.theta + PI).abs() < 1e-15);
        assert_vec(f.normal_fw, -f.n, 1e-12);
        assert_vec(f.binormal_fw, -f.b, 1e-12);
    }

    #[test]
    fn surface_point_examples() {
        let s = spec(1.0, 1.0, 0.1);
        let x0 = base_point(&s, 0.0).unwrap();
        let f = frenet_frame(&s, 0.0).unwrap();
        assert_vec(surface_point(&s, 0.0, 0.0).unwrap(), x0 - 0.1 * f.n, 1e-15);
        assert_vec(surface_point(&s, 0.0, PI / 2.0).unwrap(), x0 - 0.1 * f.b, 1e-15);
    }

    #[test]
    fn torus_points_lie_in_annulus() {
        let s = spec(1.0, 0.0, 0.1);
        for i in 0..37 {
            for j in 0..19 {
                let p = surface_point(&s, i as f64 * 0.17, -PI + j as f64 * 0.33).unwrap();
                let rho = p.x.hypot(p.y);
                assert!((0.9 - 1e-12..=1.1 + 1e-12).contains(&rho), "rho = {rho}");
                assert!(p.z.abs() <= 0.1 + 1e-12);
            }
        }
    }

    #[test]
    fn metric_h_examples() {
        let s = spec(1.0, 1.0, 0.1);
        assert!((metric_h(&s, 0.0, 0.0) - 1.1).abs() < 1e-15);
        assert!((metric_h(&s, 0.0, PI) - 0.9).abs() < 1e-15);
        assert_eq!(metric_h(&spec(0.0, 1.0, 0.1), 2.3, 1.1), 1.0);
    }

    #[test]
    fn weingarten_examples() {
        let s = spec(1.0, 1.0, 0.1);
        let w = weingarten(&s, 0.0, 0.0);
        assert_eq!(w[(0, 1)], 0.0);
        assert_eq!(w[(1, 0)], 0.0);
        assert!((w[(0, 0)] - 10.0).abs() < 1e-12);
        assert!((w[(1, 1)] - 1.0 / 1.1).abs() < 1e-12);
        let cyl = weingarten(&spec(0.0, 1.0, 0.1), 0.3, 0.4);
        assert!((cyl[(0, 0)] - 10.0).abs() < 1e-12);
        assert_eq!(cyl[(1, 1)], 0.0);
    }

    #[test]
    fn principal_curvature_examples() {
        let s = spec(1.0, 1.0, 0.1);
        let c = principal_curvatures(&s, 0.0, PI);
        assert!((c.kappa1 - 10.0).abs() < 1e-12);
        assert!((c.kappa2 + 1.0 / 0.9).abs() < 1e-12);
        assert_eq!(c.mean, 0.5 * (c.kappa1 + c.kappa2));
        assert_eq!(c.gauss, c.kappa1 * c.kappa2);
    }

    #[test]
    fn v_curv_examples() {
        assert!((v_curv(&spec(0.0, 1.0, 1.0), 0.4, 2.0) + 0.25).abs() < 1e-15);
        let v = v_curv(&spec(1.0, 1.0, 0.1), 0.0, 0.0);
        assert!((v + 1.0 / (4.0 * 0.01 * 1.21)).abs() < 1e-12);
        assert!((v + 20.661157024793388).abs() < 1e-11);
    }

    #[test]
    fn surface_normal_is_outward() {
        // X - x = rho0 * nu, so the outer rim at s0 sits opposite the Frenet normal.
        let s = spec(1.0, 1.0, 0.1);
        let x = base_point(&s, 0.0).unwrap();
        let p = surface_point(&s, 0.0, 0.0).unwrap();
        let f = frenet_frame(&s, 0.0).unwrap();
        assert!((p - x).dot(&f.n) < 0.0);
        assert!(metric_h(&s, 0.0, 0.0) > metric_h(&s, 0.0, PI));
    }

    #[test]
    fn sym_eig_2x2() {
        let m = Matrix2::new(2.0, 1.0, 1.0, 2.0);
        let e = symmetric_eigenvalues_2x2(&m);
        assert!((e[0] - 1.0).abs() < 1e-15 && (e[1] - 3.0).abs() < 1e-15);
    }
}
