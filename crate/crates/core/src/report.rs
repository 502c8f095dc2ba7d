//! Output formats: CSV curves and tables, JSON documents and two-column plot
//! data. Every file begins with a provenance block; in text formats it is a
//! run of `# key: value` comment lines.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lifshitz::QuadratureConfig;
use crate::sweep::{C3Curve, CurvePoint, GapSweep, RatioTable};
use crate::units::C3_AU_EV_NM3;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Unit convention for C3 columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OutputUnits {
    #[default]
    #[serde(rename = "au")]
    AtomicUnits,
    #[serde(rename = "eV-nm")]
    EvNm,
}

impl OutputUnits {
    /// Multiplier taking C3 from a.u. to these units.
    pub fn c3_scale(self) -> f64 {
        match self {
            OutputUnits::AtomicUnits => 1.0,
            OutputUnits::EvNm => C3_AU_EV_NM3,
        }
    }

    pub fn c3_suffix(self) -> &'static str {
        match self {
            OutputUnits::AtomicUnits => "au",
            OutputUnits::EvNm => "eV_nm3",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OutputUnits::AtomicUnits => "au",
            OutputUnits::EvNm => "eV-nm",
        }
    }
}

impl FromStr for OutputUnits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "au" | "a.u." => Ok(OutputUnits::AtomicUnits),
            "ev-nm" | "ev_nm" => Ok(OutputUnits::EvNm),
            _ => Err(Error::Config(format!("unknown units `{s}` (expected au or eV-nm)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown format `{s}` (expected csv or json)"))),
        }
    }
}

/// Metadata written at the top of every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub code_version: String,
    pub atom: Option<String>,
    pub model: Option<String>,
    pub delta_ev: Option<f64>,
    pub temperature_k: Option<f64>,
    pub units: OutputUnits,
    pub quadrature: QuadratureConfig,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(quadrature: QuadratureConfig) -> Self {
        Provenance {
            code_version: CODE_VERSION.to_string(),
            atom: None,
            model: None,
            delta_ev: None,
            temperature_k: None,
            units: OutputUnits::AtomicUnits,
            quadrature,
            extra: BTreeMap::new(),
        }
    }

    pub fn for_curve(curve: &C3Curve, quadrature: QuadratureConfig) -> Self {
        let mut p = Self::new(quadrature);
        p.atom = Some(curve.atom.clone());
        p.model = Some(curve.model.clone());
        p.delta_ev = curve.delta;
        p.temperature_k = Some(curve.temperature);
        p
    }

    pub fn units(mut self, units: OutputUnits) -> Self {
        self.units = units;
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.extra.insert(key.into(), value.to_string());
        self
    }

    /// Flattened `(key, value)` pairs in a fixed order.
    pub fn lines(&self) -> Vec<(String, String)> {
        let q = &self.quadrature;
        let mut out = vec![("code_version".to_string(), self.code_version.clone())];
        let mut opt = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k.to_string(), v));
            }
        };
        opt("atom", self.atom.clone());
        opt("model", self.model.clone());
        opt("delta_eV", self.delta_ev.map(|d| d.to_string()));
        opt("temperature_K", self.temperature_k.map(|t| t.to_string()));
        out.push(("units".into(), self.units.as_str().into()));
        out.push(("quadrature.rel_tol".into(), q.rel_tol.to_string()));
        out.push(("quadrature.y_max".into(), q.y_max.to_string()));
        out.push(("quadrature.max_subdivisions".into(), q.max_subdivisions.to_string()));
        out.push((
            "quadrature.matsubara_term_rel_cutoff".into(),
            q.matsubara_term_rel_cutoff.to_string(),
        ));
        out.push((
            "quadrature.max_matsubara_terms".into(),
            q.max_matsubara_terms.to_string(),
        ));
        out.extend(self.extra.iter().map(|(k, v)| (k.clone(), v.clone())));
        out
    }

    pub fn write_comments<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        for (k, v) in self.lines() {
            writeln!(w, "# {k}: {v}")?;
        }
        Ok(())
    }
}

/// Parsed text file: comment metadata plus data rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TextTable {
    pub metadata: BTreeMap<String, String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl TextTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Reads `# key: value` metadata, a header line and rows of numbers.
/// `sep` of `None` splits on whitespace.
pub fn read_text_table<R: BufRead>(r: R, sep: Option<char>) -> Result<TextTable> {
    let mut metadata = BTreeMap::new();
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    let split = |line: &str| -> Vec<String> {
        match sep {
            Some(c) => line.split(c).map(|s| s.trim().to_string()).collect(),
            None => line.split_whitespace().map(str::to_string).collect(),
        }
    };
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once(':') {
                metadata.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        match &header {
            None => header = Some(split(line)),
            Some(h) => {
                let fields = split(line);
                if fields.len() != h.len() {
                    return Err(Error::Validation(format!(
                        "line {}: expected {} fields, got {}",
                        lineno + 1,
                        h.len(),
                        fields.len()
                    )));
                }
                let row = fields
                    .iter()
                    .map(|f| {
                        f.parse::<f64>().map_err(|_| {
                            Error::Validation(format!("line {}: bad number `{f}`", lineno + 1))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
            }
        }
    }
    Ok(TextTable {
        metadata,
        header: header.ok_or_else(|| Error::Validation("missing header line".into()))?,
        rows,
    })
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Curve CSV: `a_nm,c3_au,energy_eV,rel_err`.
pub fn write_curve_csv<W: Write + ?Sized>(w: &mut W, curve: &C3Curve, prov: &Provenance) -> Result<()> {
    prov.write_comments(w)?;
    let bad: Vec<String> = curve
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.converged)
        .map(|(i, _)| i.to_string())
        .collect();
    if !bad.is_empty() {
        writeln!(w, "# unconverged_points: {}", bad.join(" "))?;
    }
    let s = prov.units.c3_scale();
    writeln!(w, "a_nm,c3_{},energy_eV,rel_err", prov.units.c3_suffix())?;
    for p in &curve.points {
        writeln!(w, "{},{},{},{}", num(p.a), num(p.c3 * s), num(p.energy), num(p.rel_err))?;
    }
    Ok(())
}

/// Inverse of [`write_curve_csv`]; C3 is returned in a.u.
pub fn read_curve_csv<R: BufRead>(r: R) -> Result<(BTreeMap<String, String>, C3Curve)> {
    let t = read_text_table(r, Some(','))?;
    let scale = if t.header.get(1).map(String::as_str) == Some("c3_eV_nm3") {
        C3_AU_EV_NM3
    } else {
        1.0
    };
    if t.header.len() != 4 || t.header[0] != "a_nm" || t.header[2] != "energy_eV" {
        return Err(Error::Validation(format!("not a curve file: header {:?}", t.header)));
    }
    let bad: Vec<usize> = t
        .metadata
        .get("unconverged_points")
        .map(|s| s.split_whitespace().filter_map(|i| i.parse().ok()).collect())
        .unwrap_or_default();
    let points = t
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| CurvePoint {
            a: r[0],
            c3: if scale == 1.0 { r[1] } else { r[1] / scale },
            energy: r[2],
            rel_err: r[3],
            converged: !bad.contains(&i),
        })
        .collect();
    let meta = |k: &str| t.metadata.get(k).cloned().unwrap_or_default();
    let curve = C3Curve {
        atom: meta("atom"),
        model: meta("model"),
        delta: t.metadata.get("delta_eV").and_then(|s| s.parse().ok()),
        temperature: t
            .metadata
            .get("temperature_K")
            .and_then(|s| s.parse().ok())
            .unwrap_or(0.0),
        points,
    };
    Ok((t.metadata, curve))
}

pub fn write_ratio_csv<W: Write + ?Sized>(w: &mut W, table: &RatioTable, prov: &Provenance) -> Result<()> {
    let prov = prov
        .clone()
        .with("numerator", &table.numerator)
        .with("denominator", &table.denominator);
    prov.write_comments(w)?;
    let (s, u) = (prov.units.c3_scale(), prov.units.c3_suffix());
    writeln!(w, "a_nm,c3_numerator_{u},c3_denominator_{u},ratio")?;
    for r in &table.rows {
        writeln!(
            w,
            "{},{},{},{}",
            num(r.a),
            num(r.c3_numerator * s),
            num(r.c3_denominator * s),
            num(r.ratio)
        )?;
    }
    Ok(())
}

pub fn write_gap_csv<W: Write + ?Sized>(w: &mut W, sweep: &GapSweep, prov: &Provenance) -> Result<()> {
    let mut prov = prov
        .clone()
        .with("separation_nm", sweep.separation)
        .with("spread", sweep.spread)
        .with("plateau_threshold", sweep.plateau_threshold);
    if let Some(d) = sweep.plateau_delta {
        prov = prov.with("plateau_delta_eV", d);
    }
    prov.write_comments(w)?;
    let (s, u) = (prov.units.c3_scale(), prov.units.c3_suffix());
    writeln!(w, "delta_eV,c3_{u},c3_tenth_delta_{u}")?;
    for p in &sweep.points {
        writeln!(w, "{},{},{}", num(p.delta), num(p.c3 * s), num(p.c3_tenth * s))?;
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct Document<T> {
    provenance: Provenance,
    data: T,
}

/// `{"provenance": …, "data": …}`, pretty-printed.
pub fn write_json<W: Write + ?Sized, T: Serialize + Clone>(w: &mut W, data: &T, prov: &Provenance) -> Result<()> {
    let doc = Document {
        provenance: prov.clone(),
        data: data.clone(),
    };
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_json<R: std::io::Read, T: DeserializeOwned>(r: R) -> Result<(Provenance, T)> {
    let doc: Document<T> = serde_json::from_reader(r)?;
    Ok((doc.provenance, doc.data))
}

/// Two whitespace-separated columns with a provenance block and a column line.
pub fn write_plot_data<W: Write + ?Sized>(
    w: &mut W,
    columns: (&str, &str),
    points: &[(f64, f64)],
    prov: &Provenance,
) -> Result<()> {
    prov.write_comments(w)?;
    writeln!(w, "{} {}", columns.0, columns.1)?;
    for &(x, y) in points {
        writeln!(w, "{} {}", num(x), num(y))?;
    }
    Ok(())
}

/// Creates `path` (and missing parent directories) and hands a buffered
/// writer to `body`.
pub fn write_file<F>(path: impl AsRef<Path>, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Copy of `curve` with C3 expressed in `units`.
pub fn curve_in_units(curve: &C3Curve, units: OutputUnits) -> C3Curve {
    let s = units.c3_scale();
    let mut c = curve.clone();
    for p in &mut c.points {
        p.c3 *= s;
    }
    c
}

pub fn ratio_table_in_units(table: &RatioTable, units: OutputUnits) -> RatioTable {
    let s = units.c3_scale();
    let mut t = table.clone();
    for r in &mut t.rows {
        r.c3_numerator *= s;
        r.c3_denominator *= s;
    }
    t
}

pub fn gap_sweep_in_units(sweep: &GapSweep, units: OutputUnits) -> GapSweep {
    let s = units.c3_scale();
    let mut g = sweep.clone();
    for p in &mut g.points {
        p.c3 *= s;
        p.c3_tenth *= s;
    }
    g
}
