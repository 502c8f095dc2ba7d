//! Atomic and molecular species, and their dynamic polarizability along the
//! imaginary frequency axis in the single-oscillator approximation
//!
//! ```text
//! α(iξ) = α(0) / (1 + ξ²/ω₀²)
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{ev_to_rad_per_s, POLARIZABILITY_AU_NM3};

/// One species: static polarizability (a.u.) and characteristic frequency (eV).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub name: String,
    pub alpha0: f64,
    pub omega0: f64,
}

impl AtomSpec {
    pub fn new(name: impl Into<String>, alpha0: f64, omega0: f64) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(Error::Validation("atom name must not be empty".into()));
        }
        if !(alpha0 > 0.0 && alpha0.is_finite()) {
            return Err(Error::Validation(format!(
                "{name}: static polarizability must be positive, got {alpha0}"
            )));
        }
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(Error::Validation(format!(
                "{name}: oscillator frequency must be positive, got {omega0}"
            )));
        }
        Ok(AtomSpec {
            name,
            alpha0,
            omega0,
        })
    }

    /// Precomputes the oscillator in internal units.
    pub fn oscillator(&self) -> Oscillator {
        Oscillator {
            alpha0_nm3: self.alpha0 * POLARIZABILITY_AU_NM3,
            omega0: ev_to_rad_per_s(self.omega0),
        }
    }
}

/// Single-oscillator polarizability in internal units: α(0) in nm³, ω₀ in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub alpha0_nm3: f64,
    pub omega0: f64,
}

impl Oscillator {
    /// α(iξ) in nm³; no argument checking, for use inside integrands.
    #[inline]
    pub fn at(&self, xi: f64) -> f64 {
        let r = xi / self.omega0;
        self.alpha0_nm3 / (1.0 + r * r)
    }
}

/// α(iξ) in nm³ for `atom` at imaginary frequency `xi` (rad/s).
pub fn polarizability(atom: &AtomSpec, xi: f64) -> Result<f64> {
    if xi.is_nan() || xi < 0.0 {
        return Err(Error::Domain(format!(
            "imaginary frequency must be non-negative, got {xi}"
        )));
    }
    Ok(atom.oscillator().at(xi))
}

/// A set of species keyed by name.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomCatalog {
    entries: BTreeMap<String, AtomSpec>,
}

impl AtomCatalog {
    pub fn empty() -> Self {
        AtomCatalog {
            entries: BTreeMap::new(),
        }
    }

    /// H, H2, He* (metastable) and Na.
    pub fn builtin() -> Self {
        let mut c = Self::empty();
        for (name, alpha0, omega0) in [
            ("H", 4.50, 11.65),
            ("H2", 5.439, 14.09),
            ("He*", 315.63, 1.18),
            ("Na", 162.68, 1.55),
        ] {
            c.insert(AtomSpec::new(name, alpha0, omega0).expect("built-in atom data"))
                .expect("built-in names are unique");
        }
        c
    }

    pub fn insert(&mut self, spec: AtomSpec) -> Result<()> {
        if self.entries.contains_key(&spec.name) {
            return Err(Error::Validation(format!(
                "duplicate atom name `{}`",
                spec.name
            )));
        }
        self.entries.insert(spec.name.clone(), spec);
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Result<&AtomSpec> {
        self.entries.get(name).ok_or_else(|| Error::NotFound {
            name: name.to_string(),
            available: self.names(),
        })
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AtomSpec> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses records of the form `name, alpha0_au, omega0_eV`, one per line.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse_records(text: &str) -> Result<Vec<AtomSpec>> {
        let mut out = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Config(format!(
                    "line {}: expected `name, alpha0_au, omega0_eV`, got `{line}`",
                    lineno + 1
                )));
            }
            let num = |s: &str, what: &str| {
                s.parse::<f64>().map_err(|_| {
                    Error::Config(format!("line {}: bad {what} `{s}`", lineno + 1))
                })
            };
            out.push(AtomSpec::new(
                fields[0],
                num(fields[1], "alpha0_au")?,
                num(fields[2], "omega0_eV")?,
            )?);
        }
        Ok(out)
    }

    /// Built-ins plus the records in `path`.
    pub fn with_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut c = Self::builtin();
        for spec in Self::parse_records(&text)? {
            c.insert(spec)?;
        }
        Ok(c)
    }
}

impl Default for AtomCatalog {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Looks up `name` in `catalog`.
pub fn lookup<'a>(catalog: &'a AtomCatalog, name: &str) -> Result<&'a AtomSpec> {
    catalog.lookup(name)
}
