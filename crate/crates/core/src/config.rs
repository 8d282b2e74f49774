//! Run configuration: defaults, JSON file, and command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::degrees::OmegaMode;
use crate::error::{Error, Result};
use crate::model::PotentialParams;
use crate::spectrum::SpectralReport;
use crate::symmetry::Parity;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub sigma: f64,
    pub l_max: usize,
    pub omega_mode: OmegaMode,
    /// Largest Fourier index for which the atlas evaluates `omega`.
    pub omega_l_max: usize,
    /// Labelled eigenvalues replacing the computed spectrum, e.g.
    /// `"0:-10.4,1:43.0,3-:19.6"`, or `"reference"`.
    pub eigenvalues: Option<String>,
    /// Crossings as `j,l` or `j,l,+`.
    pub crossings: Vec<String>,
    /// Orbit amplitude as a fraction of `r0`.
    pub eps: f64,
    pub dt: f64,
    /// Normalized periods for the energy-drift run.
    pub periods: usize,
    /// Modes to simulate, same syntax as `crossings`.
    pub modes: Vec<String>,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = PotentialParams::reference();
        Self {
            n: p.n,
            a: p.a,
            b: p.b,
            sigma: p.sigma,
            l_max: 6,
            omega_mode: OmegaMode::PaperStyle,
            omega_l_max: 1,
            eigenvalues: None,
            crossings: Vec::new(),
            eps: 0.05,
            dt: 1e-3,
            periods: 100,
            modes: Vec::new(),
            out_dir: None,
        }
    }
}

/// Eigenvalues of the six-particle reference ring as labelled in the
/// literature, in `(component, parity, mu)` form.
pub const REFERENCE_EIGENVALUES: [(usize, Option<Parity>, f64); 5] = [
    (0, None, -10.36657914),
    (1, None, 43.00585474),
    (3, Some(Parity::Minus), 19.58406142),
    (2, Some(Parity::Minus), 7.633501334),
    (2, Some(Parity::Plus), 11.42339623),
];

/// Radius quoted alongside [`REFERENCE_EIGENVALUES`].
pub const REFERENCE_R0: f64 = 1.836545792;

/// A crossing or mode selector `j,l[,sign]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selector {
    pub j: usize,
    pub l: usize,
    pub sign: Option<Parity>,
}

impl std::str::FromStr for Selector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("selector {s:?} is not of the form j,l or j,l,+"));
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(bad());
        }
        let j = parts[0].parse().map_err(|_| bad())?;
        let l = parts[1].parse().map_err(|_| bad())?;
        let sign = match parts.get(2) {
            None => None,
            Some(&"+") => Some(Parity::Plus),
            Some(&"-") => Some(Parity::Minus),
            Some(_) => return Err(bad()),
        };
        if l == 0 {
            return Err(Error::Config(format!(
                "selector {s:?}: l must be at least 1"
            )));
        }
        Ok(Selector { j, l, sign })
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn params(&self) -> Result<PotentialParams> {
        PotentialParams::new(self.n, self.a, self.b, self.sigma)
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        if self.n > crate::symmetry::MAX_N {
            return Err(Error::Config(format!(
                "n = {} exceeds the supported maximum {}",
                self.n,
                crate::symmetry::MAX_N
            )));
        }
        if self.l_max == 0 || self.omega_l_max == 0 {
            return Err(Error::Config(
                "l_max and omega_l_max must be at least 1".into(),
            ));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::Config(format!(
                "eps = {} must lie in (0, 1)",
                self.eps
            )));
        }
        if !(self.dt > 0.0 && self.dt < 0.1) {
            return Err(Error::Config(format!(
                "dt = {} must lie in (0, 0.1)",
                self.dt
            )));
        }
        for s in self.crossings.iter().chain(&self.modes) {
            s.parse::<Selector>()?;
        }
        if let Some(e) = &self.eigenvalues {
            parse_eigenvalues(e, self.n)?;
        }
        Ok(())
    }

    pub fn crossing_selectors(&self) -> Result<Vec<Selector>> {
        self.crossings.iter().map(|s| s.parse()).collect()
    }

    pub fn mode_selectors(&self) -> Result<Vec<Selector>> {
        self.modes.iter().map(|s| s.parse()).collect()
    }

    /// Spectrum given by `eigenvalues`, if any.
    pub fn supplied_spectrum(&self) -> Result<Option<SpectralReport>> {
        match &self.eigenvalues {
            None => Ok(None),
            Some(e) => {
                let list = parse_eigenvalues(e, self.n)?;
                let r0 = if e.trim() == "reference" {
                    REFERENCE_R0
                } else {
                    f64::NAN
                };
                Ok(Some(SpectralReport::from_labelled(self.n, r0, &list)?))
            }
        }
    }
}

/// `"reference"` or a list `j[sign]:mu` separated by commas.
pub fn parse_eigenvalues(s: &str, n: usize) -> Result<Vec<(usize, Option<Parity>, f64)>> {
    if s.trim() == "reference" {
        if n != 6 {
            return Err(Error::Config(
                "reference eigenvalues exist for n = 6 only".into(),
            ));
        }
        return Ok(REFERENCE_EIGENVALUES.to_vec());
    }
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let bad = || {
            Error::Config(format!(
                "eigenvalue entry {item:?} is not of the form j:mu or j+:mu"
            ))
        };
        let (label, mu) = item.split_once(':').ok_or_else(bad)?;
        let mu: f64 = mu.trim().parse().map_err(|_| bad())?;
        let label = label.trim();
        let (j, sign) = if let Some(j) = label.strip_suffix('+') {
            (j, Some(Parity::Plus))
        } else if let Some(j) = label.strip_suffix('-') {
            (j, Some(Parity::Minus))
        } else {
            (label, None)
        };
        let j: usize = j.parse().map_err(|_| bad())?;
        if j > n / 2 || !mu.is_finite() {
            return Err(bad());
        }
        out.push((j, sign, mu));
    }
    if out.is_empty() {
        return Err(Error::Config("empty eigenvalue list".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_reference_ring() {
        let c = RunConfig::default();
        assert_eq!(c.params().unwrap(), PotentialParams::reference());
        c.validate().unwrap();
    }

    #[test]
    fn json_keys() {
        let c: RunConfig =
            serde_json::from_str(r#"{"n": 5, "A": 0, "B": 0, "sigma": 0, "crossings": ["1,1"]}"#)
                .unwrap();
        assert_eq!(c.n, 5);
        assert_eq!(c.l_max, 6);
        assert!(serde_json::from_str::<RunConfig>(r#"{"m": 5}"#).is_err());
    }

    #[test]
    fn selectors() {
        assert_eq!(
            "2,1,+".parse::<Selector>().unwrap(),
            Selector {
                j: 2,
                l: 1,
                sign: Some(Parity::Plus)
            }
        );
        assert!("2".parse::<Selector>().is_err());
        assert!("2,0".parse::<Selector>().is_err());
        assert_eq!(parse_eigenvalues("0:-1.5, 3-:2", 6).unwrap().len(), 2);
    }
}
