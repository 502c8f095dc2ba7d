//! Command-line front end.
//!
//! Options may also come from a `key = value` file given by `--config`; the
//! command line wins. Exit status is 1 for invalid input, 2 when the numerics
//! fail to converge and 0 otherwise.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::atoms::{AtomCatalog, AtomSpec};
use crate::error::{Error, Result};
use crate::fit::{default_fit_grid, fit, FIT_GRID_POINTS};
use crate::graphene::GrapheneModel;
use crate::lifshitz::{c3, LifshitzRequest, QuadratureConfig};
use crate::reference::REFERENCE_GAP;
use crate::report::{
    curve_in_units, gap_sweep_in_units, ratio_table_in_units, write_curve_csv, write_gap_csv,
    write_json, write_ratio_csv, OutputFormat, OutputUnits, Provenance,
};
use crate::reproduce::{reproduce, summary_text};
use crate::sweep::{
    default_gap_grid, default_separation_grid, log_grid, model_ratio_table, sweep_gap,
    sweep_separation, REFERENCE_SEPARATIONS,
};

/// Environment variable naming an extra atom file loaded on top of the built-ins.
pub const ATOM_CONFIG_ENV: &str = "GRAPHENE_VDW_ATOMS";

#[derive(Debug, Parser)]
#[command(name = "graphene-vdw", version, about = "Atom-graphene van der Waals coefficients from Lifshitz theory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// C3 and E at one separation.
    Eval,
    /// C3 over a separation grid.
    Sweep,
    /// Hydrodynamic/Dirac ratio table.
    Ratio,
    /// Dirac C3 over a grid of gap parameters.
    Gapsweep,
    /// Fit the phenomenological potential to a computed curve.
    Fit,
    /// Recompute all published tables into a directory.
    Reproduce,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Atom or molecule name (H, H2, He*, Na or one from --atom-config).
    #[arg(long, global = true)]
    pub atom: Option<String>,
    /// hydrodynamic or dirac.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Gap parameter of the Dirac model (eV), default 0.1.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Separation (nm).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Temperature (K), default 0.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub temp: Option<f64>,
    /// Separations (nm): `lo:hi:n` for a log grid or a comma list.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Gap parameters (eV) for gapsweep, same syntax as --grid.
    #[arg(long, global = true)]
    pub delta_grid: Option<String>,
    /// Output file, or directory for reproduce.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// au or eV-nm.
    #[arg(long, global = true)]
    pub units: Option<String>,
    /// Target relative error of C3, default 1e-8
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Upper limit of the y = 2qa integral, default 60
    #[arg(long, global = true)]
    pub y_max: Option<f64>,
    /// Subdivision budget per integral, default 2000
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
    /// Relative size below which a Matsubara term is dropped, default 1e-10
    #[arg(long, global = true)]
    pub matsubara_cutoff: Option<f64>,
    /// Cap on Matsubara terms, default 2e7
    #[arg(long, global = true)]
    pub max_matsubara_terms: Option<usize>,
    /// Extra atoms, one `name, alpha0_au, omega0_eV` per line.
    #[arg(long, global = true, env = ATOM_CONFIG_ENV)]
    pub atom_config: Option<PathBuf>,
    /// Key-value file supplying any of these options.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for sweeps (default: available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Hydrodynamic,
    Dirac,
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hydrodynamic" | "hydro" => Ok(ModelKind::Hydrodynamic),
            "dirac" => Ok(ModelKind::Dirac),
            _ => Err(Error::Config(format!(
                "unknown model `{s}` (expected hydrodynamic or dirac)"
            ))),
        }
    }
}

/// Fully resolved and validated options for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub atom: Option<String>,
    pub model: Option<ModelKind>,
    pub delta: Option<f64>,
    pub separation: Option<f64>,
    pub temperature: f64,
    pub grid: Option<Vec<f64>>,
    pub delta_grid: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub units: OutputUnits,
    pub quadrature: QuadratureConfig,
    pub atom_config: Option<PathBuf>,
    pub jobs: Option<usize>,
}

/// Parses `key = value` lines; `#` starts a comment. Keys use the long flag
/// names, with `-` and `_` interchangeable.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("config line {}: unknown key `{}`", i + 1, k.trim())));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

const KNOWN_KEYS: [&str; 17] = [
    "atom",
    "model",
    "delta",
    "a",
    "temp",
    "grid",
    "delta-grid",
    "out",
    "format",
    "units",
    "rel-tol",
    "y-max",
    "max-subdivisions",
    "matsubara-cutoff",
    "max-matsubara-terms",
    "atom-config",
    "jobs",
];

/// Parses `lo:hi:n` (log-spaced) or `x1,x2,...`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("bad grid `{spec}` (use lo:hi:n or a comma list)"));
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [lo, hi, n] => {
            let lo: f64 = lo.parse().map_err(|_| bad())?;
            let hi: f64 = hi.parse().map_err(|_| bad())?;
            let n: usize = n.parse().map_err(|_| bad())?;
            if !(lo > 0.0 && hi > lo && n >= 1) {
                return Err(bad());
            }
            Ok(log_grid(lo, hi, n))
        }
        [_] => spec
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
            .collect(),
        _ => Err(bad()),
    }
}

impl RunConfig {
    /// Merges command-line options over those of the config file and validates.
    pub fn resolve(command: Command, cli: &Options) -> Result<Self> {
        let file = match &cli.config {
            Some(p) => parse_config_file(&fs::read_to_string(p).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", p.display()))
            })?)?,
            None => BTreeMap::new(),
        };
        let raw = |cli_value: Option<String>, key: &str| cli_value.or_else(|| file.get(key).cloned());
        fn parse<T: FromStr>(v: Option<String>, key: &str) -> Result<Option<T>> {
            v.map(|s| {
                s.parse::<T>()
                    .map_err(|_| Error::Config(format!("bad value `{s}` for {key}")))
            })
            .transpose()
        }
        let s = |x: Option<f64>| x.map(|v| v.to_string());
        let u = |x: Option<usize>| x.map(|v| v.to_string());

        let mut quadrature = QuadratureConfig::default();
        if let Some(v) = parse(raw(s(cli.rel_tol), "rel-tol"), "rel-tol")? {
            quadrature.rel_tol = v;
        }
        if let Some(v) = parse(raw(s(cli.y_max), "y-max"), "y-max")? {
            quadrature.y_max = v;
        }
        if let Some(v) = parse(raw(u(cli.max_subdivisions), "max-subdivisions"), "max-subdivisions")? {
            quadrature.max_subdivisions = v;
        }
        if let Some(v) = parse(raw(s(cli.matsubara_cutoff), "matsubara-cutoff"), "matsubara-cutoff")? {
            quadrature.matsubara_term_rel_cutoff = v;
        }
        if let Some(v) = parse(
            raw(u(cli.max_matsubara_terms), "max-matsubara-terms"),
            "max-matsubara-terms",
        )? {
            quadrature.max_matsubara_terms = v;
        }

        let cfg = RunConfig {
            command,
            atom: raw(cli.atom.clone(), "atom"),
            model: parse(raw(cli.model.clone(), "model"), "model")?,
            delta: parse(raw(s(cli.delta), "delta"), "delta")?,
            separation: parse(raw(s(cli.a), "a"), "a")?,
            temperature: parse(raw(s(cli.temp), "temp"), "temp")?.unwrap_or(0.0),
            grid: raw(cli.grid.clone(), "grid").map(|g| parse_grid(&g)).transpose()?,
            delta_grid: raw(cli.delta_grid.clone(), "delta-grid")
                .map(|g| parse_grid(&g))
                .transpose()?,
            out: raw(cli.out.as_ref().map(|p| p.display().to_string()), "out").map(PathBuf::from),
            format: parse(raw(cli.format.clone(), "format"), "format")?.unwrap_or_default(),
            units: parse(raw(cli.units.clone(), "units"), "units")?.unwrap_or_default(),
            quadrature,
            atom_config: raw(
                cli.atom_config.as_ref().map(|p| p.display().to_string()),
                "atom-config",
            )
            .map(PathBuf::from),
            jobs: parse(raw(u(cli.jobs), "jobs"), "jobs")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Validation(format!("{:?} needs {what}", self.command).to_lowercase()))
            }
        };
        if self.model == Some(ModelKind::Hydrodynamic) && self.delta.is_some() {
            return Err(Error::Validation(
                "--delta applies only to the dirac model".into(),
            ));
        }
        if self.jobs == Some(0) {
            return Err(Error::Validation("--jobs must be positive".into()));
        }
        self.quadrature.validate()?;
        match self.command {
            Command::Eval => {
                need(self.atom.is_some(), "--atom")?;
                need(self.model.is_some(), "--model")?;
                need(self.separation.is_some(), "--a")?;
            }
            Command::Sweep | Command::Fit => {
                need(self.atom.is_some(), "--atom")?;
                need(self.model.is_some(), "--model")?;
            }
            Command::Ratio => {
                need(self.atom.is_some(), "--atom")?;
                if self.model == Some(ModelKind::Hydrodynamic) {
                    return Err(Error::Validation("ratio compares both models; omit --model".into()));
                }
            }
            Command::Gapsweep => {
                need(self.atom.is_some(), "--atom")?;
                need(self.separation.is_some(), "--a")?;
                if self.model == Some(ModelKind::Hydrodynamic) {
                    return Err(Error::Validation("gapsweep uses the dirac model".into()));
                }
                if self.delta.is_some() {
                    return Err(Error::Validation("gapsweep takes --delta-grid, not --delta".into()));
                }
            }
            Command::Reproduce => {}
        }
        if self.command == Command::Fit && self.temperature != 0.0 {
            return Err(Error::Validation("fit uses zero-temperature curves".into()));
        }
        if let Some(d) = self.delta {
            GrapheneModel::dirac(d)?;
        }
        Ok(())
    }

    fn catalog(&self) -> Result<AtomCatalog> {
        match &self.atom_config {
            Some(p) => AtomCatalog::with_file(p).map_err(|e| match e {
                Error::Io(io) => Error::Config(format!("cannot read atom config {}: {io}", p.display())),
                other => other,
            }),
            None => Ok(AtomCatalog::builtin()),
        }
    }

    fn atom_spec(&self, catalog: &AtomCatalog) -> Result<AtomSpec> {
        catalog
            .lookup(self.atom.as_deref().unwrap_or_default())
            .cloned()
    }

    fn graphene_model(&self) -> Result<GrapheneModel> {
        match self.model {
            Some(ModelKind::Hydrodynamic) => Ok(GrapheneModel::hydrodynamic()),
            _ => GrapheneModel::dirac(self.delta.unwrap_or(REFERENCE_GAP)),
        }
    }
}

fn emit<F>(out_path: Option<&Path>, stdout: &mut dyn Write, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out_path {
        Some(p) => crate::report::write_file(p, |w| body(w)),
        None => body(stdout),
    }
}

/// Executes a resolved configuration, printing to `stdout`.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    // output is buffered so the worker pool never holds the caller's writer
    let mut buf = Vec::new();
    let result = pool.install(|| run_inner(cfg, &mut buf));
    stdout.write_all(&buf)?;
    result
}

fn run_inner(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let catalog = cfg.catalog()?;
    let q = cfg.quadrature;
    let units = cfg.units;
    match cfg.command {
        Command::Eval => {
            let a = cfg.separation.expect("validated");
            let req = LifshitzRequest::new(cfg.atom_spec(&catalog)?, cfg.graphene_model()?, a)
                .at_temperature(cfg.temperature)
                .with_quadrature(q);
            let res = c3(&req)?;
            match cfg.format {
                OutputFormat::Json => {
                    let mut prov = Provenance::new(q).units(units);
                    prov.atom = Some(res.atom.clone());
                    prov.model = Some(res.model.label());
                    prov.delta_ev = res.model.gap();
                    prov.temperature_k = Some(res.temperature);
                    let mut shown = res.clone();
                    shown.c3 *= units.c3_scale();
                    emit(cfg.out.as_deref(), stdout, |w| write_json(w, &shown, &prov))?;
                }
                OutputFormat::Csv => {
                    let c3_unit = match units {
                        OutputUnits::AtomicUnits => "a.u.",
                        OutputUnits::EvNm => "eV nm^3",
                    };
                    writeln!(stdout, "C3 = {:.10e} {c3_unit}", res.c3 * units.c3_scale())?;
                    writeln!(stdout, "E = {:.10e} eV", res.energy)?;
                    writeln!(stdout, "est_rel_error = {:.3e}", res.est_rel_error)?;
                    if let Some(n) = res.matsubara_terms {
                        writeln!(stdout, "matsubara_terms = {n}")?;
                    }
                    for w in &res.warnings {
                        writeln!(stdout, "warning: {w:?}")?;
                    }
                }
            }
        }
        Command::Sweep => {
            let grid = cfg.grid.clone().unwrap_or_else(default_separation_grid);
            let curve = sweep_separation(&cfg.atom_spec(&catalog)?, &cfg.graphene_model()?, &grid, cfg.temperature, &q)?;
            let prov = Provenance::for_curve(&curve, q).units(units);
            emit(cfg.out.as_deref(), stdout, |w| match cfg.format {
                OutputFormat::Csv => write_curve_csv(w, &curve, &prov),
                OutputFormat::Json => write_json(w, &curve_in_units(&curve, units), &prov),
            })?;
            let bad = curve.points.iter().filter(|p| !p.converged).count();
            if bad > 0 {
                eprintln!("warning: {bad} point(s) did not reach the requested tolerance");
            }
        }
        Command::Ratio => {
            let grid = cfg.grid.clone().unwrap_or_else(|| REFERENCE_SEPARATIONS.to_vec());
            let delta = cfg.delta.unwrap_or(REFERENCE_GAP);
            let table = model_ratio_table(&cfg.atom_spec(&catalog)?, delta, &grid, &q)?;
            let mut prov = Provenance::new(q).units(units);
            prov.atom = Some(table.atom.clone());
            prov.delta_ev = Some(delta);
            emit(cfg.out.as_deref(), stdout, |w| match cfg.format {
                OutputFormat::Csv => write_ratio_csv(w, &table, &prov),
                OutputFormat::Json => write_json(w, &ratio_table_in_units(&table, units), &prov),
            })?;
        }
        Command::Gapsweep => {
            let grid = cfg.delta_grid.clone().unwrap_or_else(default_gap_grid);
            let a = cfg.separation.expect("validated");
            let sweep = sweep_gap(&cfg.atom_spec(&catalog)?, a, &grid, &q)?;
            let mut prov = Provenance::new(q).units(units);
            prov.atom = Some(sweep.atom.clone());
            prov.model = Some("dirac".into());
            emit(cfg.out.as_deref(), stdout, |w| match cfg.format {
                OutputFormat::Csv => write_gap_csv(w, &sweep, &prov),
                OutputFormat::Json => write_json(w, &gap_sweep_in_units(&sweep, units), &prov),
            })?;
        }
        Command::Fit => {
            let grid = cfg.grid.clone().unwrap_or_else(|| default_fit_grid(FIT_GRID_POINTS));
            let curve = sweep_separation(&cfg.atom_spec(&catalog)?, &cfg.graphene_model()?, &grid, 0.0, &q)?;
            let report = fit(&curve)?;
            let p = report.potential;
            writeln!(stdout, "C4 = {:.6} a.u.", p.c4)?;
            writeln!(stdout, "l = {:.6} nm", p.l)?;
            match report.sub_1pct_range {
                Some((lo, hi)) => writeln!(stdout, "sub-1% range = [{lo:.3}, {hi:.3}] nm")?,
                None => writeln!(stdout, "sub-1% range = none")?,
            }
            writeln!(
                stdout,
                "max deviation = {:.3}% at {:.3} nm",
                report.max_rel_deviation, report.max_deviation_at
            )?;
            if let Some(path) = &cfg.out {
                let prov = Provenance::for_curve(&curve, q);
                crate::report::write_file(path, |w| write_json(w, &report, &prov))?;
            }
        }
        Command::Reproduce => {
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("reproduction"));
            let checks = reproduce(&dir, &catalog, &q)?;
            write!(stdout, "{}", summary_text(&checks))?;
            writeln!(stdout, "outputs written to {}", dir.display())?;
        }
    }
    Ok(())
}

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        2
    } else {
        1
    }
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = RunConfig::resolve(cli.command, &cli.options)
        .and_then(|cfg| run(&cfg, &mut io::stdout().lock()));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(args: &[&str]) -> Result<RunConfig> {
        let cli = Cli::try_parse_from(std::iter::once("graphene-vdw").chain(args.iter().copied()))
            .expect("parses");
        RunConfig::resolve(cli.command, &cli.options)
    }

    #[test]
    fn grid_specs() {
        assert_eq!(parse_grid("3,5,10").unwrap(), vec![3.0, 5.0, 10.0]);
        let g = parse_grid("3:100:5").unwrap();
        assert_eq!((g.len(), g[0], g[4]), (5, 3.0, 100.0));
        assert!(parse_grid("3:1:5").is_err());
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn delta_with_hydrodynamic_is_rejected() {
        let e = resolve(&["eval", "--atom", "H", "--model", "hydrodynamic", "--delta", "0.1", "--a", "5"])
            .unwrap_err();
        assert!(matches!(e, Error::Validation(_)));
        assert_eq!(exit_code(&e), 1);
    }

    #[test]
    fn eval_requires_separation() {
        assert!(resolve(&["eval", "--atom", "H", "--model", "dirac"]).is_err());
        let cfg = resolve(&["eval", "--atom", "H", "--model", "dirac", "--a", "5"]).unwrap();
        assert_eq!(cfg.graphene_model().unwrap(), GrapheneModel::dirac(0.1).unwrap());
    }

    #[test]
    fn out_of_range_gap_is_rejected() {
        assert!(resolve(&["eval", "--atom", "H", "--model", "dirac", "--delta", "0.5", "--a", "5"]).is_err());
        assert!(resolve(&["eval", "--atom", "H", "--model", "dirac", "--delta", "-1", "--a", "5"]).is_err());
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "# defaults\natom = Na\nmodel = dirac\na = 7\nrel_tol = 1e-7\n").unwrap();
        let cfg = resolve(&["eval", "--config", path.to_str().unwrap(), "--a", "9"]).unwrap();
        assert_eq!(cfg.atom.as_deref(), Some("Na"));
        assert_eq!(cfg.separation, Some(9.0));
        assert_eq!(cfg.quadrature.rel_tol, 1e-7);
        fs::write(&path, "colour = blue\n").unwrap();
        assert!(matches!(
            resolve(&["eval", "--config", path.to_str().unwrap()]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn unknown_atom_reports_catalog() {
        let cfg = resolve(&["eval", "--atom", "Xx", "--model", "dirac", "--a", "5"]).unwrap();
        let mut sink = Vec::new();
        let e = run(&cfg, &mut sink).unwrap_err();
        assert!(matches!(e, Error::NotFound { .. }));
        assert_eq!(exit_code(&e), 1);
    }

    #[test]
    fn eval_prints_c3_and_energy() {
        let cfg = resolve(&["eval", "--atom", "H", "--model", "hydro", "--a", "10", "--units", "eV-nm"]).unwrap();
        let mut sink = Vec::new();
        run(&cfg, &mut sink).unwrap();
        let text = String::from_utf8(sink).unwrap();
        assert!(text.contains("eV nm^3"));
        assert!(text.contains("E = -"));
    }
}
