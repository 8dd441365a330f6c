//! Flat `key = value` scenario files with dotted section keys.
//!
//! Every key has a default; a file and then command-line flags override entries.
//! The merged map is what gets echoed into CSV headers.

use cpshift_asymptotics::Contribution;
use cpshift_atom::{hydrogen_dipole, RydbergKind, RydbergTransition};
use cpshift_core::{Complex3Vector, Error, Handedness, MediumSpec, MirrorSign, Result, TransitionSpec};
use cpshift_greens::BlockKind;
use cpshift_quad::QuadratureConfig;
use cpshift_shifts::ShiftOptions;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

const DEFAULTS: &[(&str, &str)] = &[
    ("medium.kind", "perfect-conductor"),
    ("medium.sign", "minus"),
    ("medium.handedness", "left"),
    ("medium.eps2", "2"),
    ("medium.eps2_im", "0"),
    ("medium.mu2", "1"),
    ("medium.mu2_im", "0"),
    ("medium.delta", "0.22"),
    ("medium.kappa2", "0.3"),
    ("medium.kappa2_im", "0"),
    ("transition.source", "rydberg"),
    ("transition.n_bar", "20"),
    ("transition.kind", "m1_circular"),
    ("transition.axis", "1,0,0"),
    ("transition.dipole", "0,0,7.0710678118654752e-30,0,7.0710678118654752e-30,0"),
    ("transition.omega_nk", "0"),
    ("kinematics.grid", "sweep"),
    ("kinematics.z_a", "1e-6"),
    ("kinematics.z_min", "1e-8"),
    ("kinematics.z_max", "1e-5"),
    ("kinematics.points", "31"),
    ("kinematics.spacing", "log"),
    ("kinematics.v_x", "0"),
    ("kinematics.v_y", "0"),
    ("numerics.rel_tol", "1e-8"),
    ("numerics.abs_tol", "1e-30"),
    ("numerics.max_subdivisions", "2000"),
    ("numerics.h_rel", "1e-4"),
    ("compare.regime", "nonretarded"),
    ("compare.contribution", "nonresonant"),
    ("greens.block", "plain"),
    ("greens.frequency", "real"),
    ("greens.omega", "1e14"),
    ("greens.method", "auto"),
    ("fresnel.omega", "1e14"),
    ("fresnel.frequency", "real"),
    ("fresnel.q_min", "0"),
    ("fresnel.q_max", "3"),
    ("fresnel.points", "61"),
    ("output.path", "-"),
];

/// Raw key/value settings with every known key present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl Default for RawConfig {
    fn default() -> Self {
        Self { entries: DEFAULTS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect() }
    }
}

impl RawConfig {
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        match self.entries.get_mut(key) {
            Some(slot) => {
                *slot = value.into();
                Ok(())
            }
            None => Err(Error::InvalidInput(format!("unknown key '{key}'"))),
        }
    }

    pub fn get(&self, key: &str) -> &str {
        self.entries.get(key).map(String::as_str).expect("all keys carry defaults")
    }

    /// Applies the lines of a config document. `#` starts a comment; a key may appear once.
    pub fn merge_str(&mut self, text: &str) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("line {}: expected 'key = value'", no + 1)))?;
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::InvalidInput(format!("line {}: duplicate key '{key}'", no + 1)));
            }
            self.set(key, value.trim())
                .map_err(|_| Error::InvalidInput(format!("line {}: unknown key '{key}'", no + 1)))?;
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.get(key);
        raw.trim()
            .parse()
            .map_err(|e| Error::InvalidInput(format!("key '{key}': cannot parse '{raw}': {e}")))
    }

    fn list(&self, key: &str, len: usize) -> Result<Vec<f64>> {
        let raw = self.get(key);
        let vals: std::result::Result<Vec<f64>, _> = raw.split(',').map(|s| s.trim().parse::<f64>()).collect();
        match vals {
            Ok(v) if v.len() == len => Ok(v),
            _ => Err(Error::InvalidInput(format!("key '{key}': expected {len} comma-separated numbers, got '{raw}'"))),
        }
    }

    fn positive(&self, key: &str) -> Result<f64> {
        let x: f64 = self.parse(key)?;
        if x.is_finite() && x > 0.0 {
            Ok(x)
        } else {
            Err(Error::InvalidInput(format!("key '{key}': must be finite and > 0, got {x}")))
        }
    }

    fn choice<'a>(&self, key: &str, options: &[&'a str]) -> Result<&'a str> {
        let raw = self.get(key).trim().to_ascii_lowercase();
        options
            .iter()
            .find(|o| **o == raw)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("key '{key}': expected one of {options:?}, got '{raw}'")))
    }

    fn keyed(key: &'static str, e: Error) -> Error {
        match e {
            Error::InvalidInput(msg) if msg.starts_with("key '") => Error::InvalidInput(msg),
            other => Error::InvalidInput(format!("key '{key}': {other}")),
        }
    }

    pub fn medium(&self) -> Result<MediumSpec> {
        let kind = self.choice(
            "medium.kind",
            &["perfect-conductor", "conductor", "nonreciprocal-mirror", "topological-insulator", "ti", "chiral-mirror", "isotropic-chiral", "chiral"],
        )?;
        let cplx = |re: &str, im: &str| -> Result<Complex64> { Ok(Complex64::new(self.parse(re)?, self.parse(im)?)) };
        Ok(match kind {
            "perfect-conductor" | "conductor" => MediumSpec::PerfectConductor,
            "nonreciprocal-mirror" => MediumSpec::NonreciprocalMirror(
                match self.choice("medium.sign", &["minus", "plus", "-1", "+1", "1"])? {
                    "minus" | "-1" => MirrorSign::Minus,
                    _ => MirrorSign::Plus,
                },
            ),
            "chiral-mirror" => MediumSpec::ChiralMirror(match self.choice("medium.handedness", &["left", "right"])? {
                "left" => Handedness::Left,
                _ => Handedness::Right,
            }),
            "topological-insulator" | "ti" => {
                MediumSpec::topological_insulator(self.parse("medium.eps2")?, self.parse("medium.mu2")?, self.parse("medium.delta")?)
                    .map_err(|e| Self::keyed("medium.kind", e))?
            }
            _ => MediumSpec::isotropic_chiral(
                cplx("medium.eps2", "medium.eps2_im")?,
                cplx("medium.mu2", "medium.mu2_im")?,
                cplx("medium.kappa2", "medium.kappa2_im")?,
            )
            .map_err(|e| Self::keyed("medium.kind", e))?,
        })
    }

    pub fn transition(&self) -> Result<TransitionSpec> {
        let omega: f64 = self.parse("transition.omega_nk")?;
        match self.choice("transition.source", &["rydberg", "explicit"])? {
            "rydberg" => {
                let kind: RydbergKind = self.parse("transition.kind")?;
                let axis = self.list("transition.axis", 3)?;
                let t = RydbergTransition::new(self.parse("transition.n_bar")?, kind, [axis[0], axis[1], axis[2]])
                    .map_err(|e| Self::keyed("transition.n_bar", e))?;
                hydrogen_dipole(&t).with_omega(omega).map_err(|e| Self::keyed("transition.omega_nk", e))
            }
            _ => {
                let c = self.list("transition.dipole", 6)?;
                let d = Complex3Vector::new(Complex64::new(c[0], c[1]), Complex64::new(c[2], c[3]), Complex64::new(c[4], c[5]));
                TransitionSpec::new(d, omega, "explicit").map_err(|e| Self::keyed("transition.dipole", e))
            }
        }
    }

    pub fn velocity(&self) -> Result<[f64; 2]> {
        Ok([self.parse("kinematics.v_x")?, self.parse("kinematics.v_y")?])
    }

    pub fn z_grid(&self) -> Result<Vec<f64>> {
        if self.choice("kinematics.grid", &["sweep", "single"])? == "single" {
            return Ok(vec![self.positive("kinematics.z_a")?]);
        }
        let (lo, hi) = (self.positive("kinematics.z_min")?, self.positive("kinematics.z_max")?);
        if lo >= hi {
            return Err(Error::InvalidInput(format!("key 'kinematics.z_max': must exceed z_min ({hi} <= {lo})")));
        }
        let n: usize = self.parse("kinematics.points")?;
        if n < 2 {
            return Err(Error::InvalidInput("key 'kinematics.points': must be >= 2".into()));
        }
        let log = self.choice("kinematics.spacing", &["log", "linear"])? == "log";
        Ok(grid(lo, hi, n, log))
    }

    pub fn shift_options(&self) -> Result<ShiftOptions> {
        let quad = QuadratureConfig {
            rel_tol: self.positive("numerics.rel_tol")?,
            abs_tol: self.positive("numerics.abs_tol")?,
            max_subdivisions: self.parse("numerics.max_subdivisions")?,
            ..QuadratureConfig::default()
        };
        quad.validate().map_err(|e| Self::keyed("numerics.max_subdivisions", e))?;
        let h_rel = self.positive("numerics.h_rel")?;
        if !(1e-7..=1e-3).contains(&h_rel) {
            return Err(Error::InvalidInput(format!("key 'numerics.h_rel': must lie in [1e-7, 1e-3], got {h_rel}")));
        }
        Ok(ShiftOptions { quad, h_rel, ..ShiftOptions::default() })
    }

    pub fn regime(&self) -> Result<RegimeChoice> {
        Ok(match self.choice("compare.regime", &["retarded", "nonretarded", "full"])? {
            "retarded" => RegimeChoice::Retarded,
            "nonretarded" => RegimeChoice::Nonretarded,
            _ => RegimeChoice::Full,
        })
    }

    pub fn contribution(&self) -> Result<Contribution> {
        self.parse("compare.contribution")
    }

    pub fn greens_block(&self) -> Result<BlockKind> {
        Ok(match self.choice("greens.block", &["plain", "curl-left", "curl-right", "lateral"])? {
            "plain" => BlockKind::Plain,
            "curl-left" => BlockKind::CurlLeft,
            "curl-right" => BlockKind::CurlRight,
            _ => BlockKind::Lateral,
        })
    }

    pub fn greens_method(&self) -> Result<GreensMethod> {
        Ok(match self.choice("greens.method", &["auto", "numeric", "closed"])? {
            "auto" => GreensMethod::Auto,
            "numeric" => GreensMethod::Numeric,
            _ => GreensMethod::Closed,
        })
    }

    /// Complex evaluation frequency ω or iξ from a `<section>.omega`/`<section>.frequency` pair.
    pub fn frequency(&self, section: &'static str) -> Result<Complex64> {
        let (okey, fkey) = match section {
            "greens" => ("greens.omega", "greens.frequency"),
            _ => ("fresnel.omega", "fresnel.frequency"),
        };
        let w = self.positive(okey)?;
        Ok(match self.choice(fkey, &["real", "imaginary"])? {
            "real" => Complex64::new(w, 0.0),
            _ => Complex64::new(0.0, w),
        })
    }

    pub fn fresnel_grid(&self) -> Result<Vec<f64>> {
        let lo: f64 = self.parse("fresnel.q_min")?;
        let hi: f64 = self.parse("fresnel.q_max")?;
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidInput(format!("key 'fresnel.q_max': need 0 <= q_min < q_max, got {lo}, {hi}")));
        }
        let n: usize = self.parse("fresnel.points")?;
        if n < 2 {
            return Err(Error::InvalidInput("key 'fresnel.points': must be >= 2".into()));
        }
        Ok(grid(lo, hi, n, false))
    }

    pub fn output(&self) -> Option<PathBuf> {
        match self.get("output.path").trim() {
            "" | "-" => None,
            p => Some(PathBuf::from(p)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeChoice {
    Retarded,
    Nonretarded,
    /// Whole range, compared against the exact closed form (ideal mirrors only).
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreensMethod {
    Auto,
    Numeric,
    Closed,
}

pub fn grid(lo: f64, hi: f64, n: usize, log: bool) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            if i == n - 1 {
                hi
            } else if log {
                (lo.ln() + t * (hi.ln() - lo.ln())).exp()
            } else {
                lo + t * (hi - lo)
            }
        })
        .collect()
}
