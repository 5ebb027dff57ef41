//! Problem parameters for a helical tube.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Curvature, torsion and radius of a tube wound around a circular helix.
///
/// All downstream quantities are functions of these four numbers. The
/// constructor enforces `rho0 > 0`, `kappa >= 0` and the embedding condition
/// `epsilon = rho0 * kappa < 1`, which keeps the metric factor `h` positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelixSpec {
    kappa: f64,
    tau: f64,
    rho0: f64,
    s0: f64,
}

impl HelixSpec {
    pub fn new(kappa: f64, tau: f64, rho0: f64, s0: f64) -> Result<Self> {
        for (name, v) in [("kappa", kappa), ("tau", tau), ("rho0", rho0), ("s0", s0)] {
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!("{name} must be finite, got {v}")));
            }
        }
        if rho0 <= 0.0 {
            return Err(Error::InvalidSpec(format!("rho0 must be positive, got {rho0}")));
        }
        if kappa < 0.0 {
            return Err(Error::InvalidSpec(format!("kappa must be non-negative, got {kappa}")));
        }
        let eps = rho0 * kappa;
        if eps >= 1.0 {
            return Err(Error::EmbeddingViolation(eps));
        }
        Ok(Self { kappa, tau, rho0, s0 })
    }

    /// Parameters with `rho0 = epsilon / kappa`.
    pub fn from_epsilon(kappa: f64, tau: f64, epsilon: f64) -> Result<Self> {
        if kappa <= 0.0 {
            return Err(Error::InvalidSpec(
                "kappa must be positive to derive rho0 from epsilon".into(),
            ));
        }
        Self::new(kappa, tau, epsilon / kappa, 0.0)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn epsilon(&self) -> f64 {
        self.rho0 * self.kappa
    }

    /// Copy with a different curvature, keeping `tau`, `rho0` and `s0`.
    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        Self::new(kappa, self.tau, self.rho0, self.s0)
    }

    pub fn with_s0(&self, s0: f64) -> Result<Self> {
        Self::new(self.kappa, self.tau, self.rho0, s0)
    }

    /// Radius of the circular helix traced by the base curve.
    pub fn helix_radius(&self) -> f64 {
        let q = self.kappa * self.kappa + self.tau * self.tau;
        if q > 0.0 {
            self.kappa / q
        } else {
            0.0
        }
    }

    /// Pitch parameter `p`: the helix rises by `2 pi p` per turn.
    pub fn pitch(&self) -> f64 {
        let q = self.kappa * self.kappa + self.tau * self.tau;
        if q > 0.0 {
            self.tau / q
        } else {
            0.0
        }
    }

    /// Spectral offset `a = (1/rho0^2 + kappa^2) / 4` of the expanded equation.
    pub fn a(&self) -> f64 {
        let inv = 1.0 / self.rho0;
        0.25 * (inv * inv + self.kappa * self.kappa)
    }

    /// Length of one unit cell along the base curve, `2 pi / |tau|`.
    pub fn s_period(&self) -> Result<f64> {
        if self.tau == 0.0 {
            Err(Error::DegeneratePeriod)
        } else {
            Ok(2.0 * PI / self.tau.abs())
        }
    }

    /// Circumference of the cross-section, `2 pi rho0`.
    pub fn varphi_period(&self) -> f64 {
        2.0 * PI * self.rho0
    }

    /// Phase `x = tau (s - s0) - phi` on which every coefficient of the
    /// problem depends. Equals `-(theta(s) + phi)`.
    pub fn helical_phase(&self, s: f64, phi: f64) -> f64 {
        self.tau * (s - self.s0) - phi
    }
}
