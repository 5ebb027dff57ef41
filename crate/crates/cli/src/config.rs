//! Run configuration: defaults, `key = value` files and flag overrides.

use std::path::{Path, PathBuf};

use helitube::{HelixSpec, KPath, Perturbation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Units {
    Natural,
    /// Particle mass in kg; lengths are read as nanometres.
    Physical(f64),
}

impl Units {
    /// `hbar^2 / (2 mu)` per nm^-2, in joules.
    pub fn factor(&self) -> f64 {
        const HBAR: f64 = 1.054_571_817e-34;
        match self {
            Units::Natural => 1.0,
            Units::Physical(mu) => HBAR * HBAR / (2.0 * mu) * 1e18,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Units::Natural => "natural".into(),
            Units::Physical(mu) => format!("physical:{mu:e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kappa: f64,
    pub tau: f64,
    pub rho0: f64,
    pub s0: f64,
    pub n_s: usize,
    pub n_phi: usize,
    pub harmonics: usize,
    /// `None` means the default path for the helix.
    pub kpath: Option<(f64, f64, usize)>,
    pub transverse_n: f64,
    pub eps_sweep: Vec<f64>,
    pub out: PathBuf,
    pub units: Units,
    pub perturbation: Perturbation,
    pub vkin_offset: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            tau: 1.0,
            rho0: 0.1,
            s0: 0.0,
            n_s: 64,
            n_phi: 64,
            harmonics: 7,
            kpath: None,
            transverse_n: 0.0,
            eps_sweep: vec![0.01, 0.02, 0.03, 0.04, 0.05],
            out: PathBuf::from("."),
            units: Units::Natural,
            perturbation: Perturbation::Published,
            vkin_offset: 0.0,
        }
    }
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.trim().parse().map_err(|_| format!("{key}: cannot parse '{v}'"))
}

pub fn parse_grid(v: &str) -> Result<(usize, usize), String> {
    let (a, b) = v
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("grid: expected NxM, got '{v}'"))?;
    Ok((number("grid", a)?, number("grid", b)?))
}

pub fn parse_kpath(v: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("kpath: expected a:b:n, got '{v}'"));
    }
    Ok((number("kpath", parts[0])?, number("kpath", parts[1])?, number("kpath", parts[2])?))
}

pub fn parse_list(v: &str) -> Result<Vec<f64>, String> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| number("eps-sweep", s)).collect()
}

pub fn parse_units(v: &str) -> Result<Units, String> {
    match v.trim() {
        "natural" => Ok(Units::Natural),
        other => match other.strip_prefix("physical:") {
            Some(mu) => {
                let mu: f64 = number("units", mu)?;
                if mu > 0.0 && mu.is_finite() {
                    Ok(Units::Physical(mu))
                } else {
                    Err(format!("units: mass must be positive, got {mu}"))
                }
            }
            None => Err(format!("units: expected natural or physical:<mu>, got '{other}'")),
        },
    }
}

pub fn parse_perturbation(v: &str) -> Result<Perturbation, String> {
    match v.trim() {
        "published" => Ok(Perturbation::Published),
        "consistent" => Ok(Perturbation::Consistent),
        other => Err(format!("perturbation: expected published or consistent, got '{other}'")),
    }
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "kappa" => self.kappa = number(key, value)?,
            "tau" => self.tau = number(key, value)?,
            "rho0" => self.rho0 = number(key, value)?,
            "s0" => self.s0 = number(key, value)?,
            "grid" => (self.n_s, self.n_phi) = parse_grid(value)?,
            "n_s" => self.n_s = number(key, value)?,
            "n_phi" => self.n_phi = number(key, value)?,
            "harmonics" => self.harmonics = number(key, value)?,
            "kpath" => self.kpath = Some(parse_kpath(value)?),
            "transverse_n" => self.transverse_n = number(key, value)?,
            "eps_sweep" => self.eps_sweep = parse_list(value)?,
            "out" => self.out = PathBuf::from(value.trim()),
            "units" => self.units = parse_units(value)?,
            "perturbation" => self.perturbation = parse_perturbation(value)?,
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            self.set(k.trim(), v.trim()).map_err(|e| format!("line {}: {e}", lineno + 1))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        self.apply_text(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn spec(&self) -> Result<HelixSpec, String> {
        HelixSpec::new(self.kappa, self.tau, self.rho0, self.s0).map_err(|e| e.to_string())
    }

    pub fn validate(&self) -> Result<HelixSpec, String> {
        let spec = self.spec()?;
        if self.n_s < 2 || self.n_phi < 2 {
            return Err(format!("grid must be at least 2x2, got {}x{}", self.n_s, self.n_phi));
        }
        if self.harmonics < 3 {
            return Err(format!("harmonics must be at least 3, got {}", self.harmonics));
        }
        if let Some((_, _, n)) = self.kpath {
            if n == 0 {
                return Err("kpath needs at least one point".into());
            }
        }
        if self.eps_sweep.iter().any(|e| !(0.0..1.0).contains(e)) {
            return Err("eps_sweep values must lie in [0, 1)".into());
        }
        Ok(spec)
    }

    pub fn kpath(&self, spec: &HelixSpec) -> KPath {
        match self.kpath {
            Some((start, end, count)) => KPath {
                start,
                end,
                count,
                n: self.transverse_n,
            },
            None => KPath {
                n: self.transverse_n,
                ..KPath::default_for(spec)
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_text() {
        let mut c = RunConfig::default();
        c.apply_text("# fig parameters\nkappa = 0.5  # comment\ngrid = 32x16\neps_sweep = 0.1, 0.2\nunits = physical:9.1e-31\n")
            .unwrap();
        assert_eq!(c.kappa, 0.5);
        assert_eq!((c.n_s, c.n_phi), (32, 16));
        assert_eq!(c.eps_sweep, vec![0.1, 0.2]);
        assert_eq!(c.units, Units::Physical(9.1e-31));
    }

    #[test]
    fn rejects_bad_text() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("kappa 1").is_err());
        assert!(c.apply_text("colour = red").is_err());
        assert!(c.apply_text("tau = x").is_err());
        assert!(parse_kpath("0:1").is_err());
        assert!(parse_units("physical:-1").is_err());
    }

    #[test]
    fn validation() {
        let c = RunConfig {
            kappa: 10.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        assert!(RunConfig::default().validate().is_ok());
    }

    #[test]
    fn electron_factor() {
        // hbar^2 / (2 m_e) = 6.1e-21 J nm^2 = 0.0381 eV nm^2
        let f = Units::Physical(9.109_383_7e-31).factor();
        assert!((f / 6.1042e-21 - 1.0).abs() < 1e-3);
    }
}
