use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use legendrian_pinching::catalog::{self, CatalogEntry, Expected};
use legendrian_pinching::immersion::{JetOptions, DEFAULT_H};
use legendrian_pinching::pinching::{pinching_report_with, PinchReport};
use legendrian_pinching::report::{
    fmt_f64, identity_suite, scan_csv_row, scan_entry, Check, Envelope, Tolerances, SCAN_CSV_HEADER,
};
use legendrian_pinching::spectrum::{theta, AdaptedSpectrum, ThetaOptions, TOL_LAGRANGE};
use legendrian_pinching::tensor::{SymCubic, TOL_TRACE};

#[derive(Parser, Debug)]
#[command(name = "lpinch", version, about = "Pinching checks for minimal Legendrian submanifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "LPINCH_THREADS")]
    #[serde(skip)]
    threads: Option<usize>,
    #[arg(long = "tol-identity", global = true)]
    tol_identity: Option<f64>,
    #[arg(long = "tol-ineq", global = true)]
    tol_ineq: Option<f64>,
    #[arg(long = "tol-fd", global = true)]
    tol_fd: Option<f64>,
    #[arg(long = "tol-invariant", global = true)]
    tol_invariant: Option<f64>,
    #[arg(long = "tol-lagrange", global = true)]
    tol_lagrange: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Random-tensor property sweeps.
    Identities {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Maximum of the cubic form in a tensor file, with its adapted spectrum.
    Theta {
        file: PathBuf,
        /// Cross-check against the dense sphere grid (n <= 4).
        #[arg(long)]
        oracle: bool,
    },
    /// Finite-difference scan of a catalog immersion.
    Scan {
        name: String,
        /// Points per axis, either one value or one per axis (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "8")]
        grid: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_H)]
        h: f64,
        #[arg(long)]
        richardson: bool,
    },
    /// List catalog entries with their expected values.
    Catalog,
    /// Aggregate JSON reports written by earlier runs.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Serialize)]
struct RunConfig<'a> {
    command: &'a str,
    n: Option<usize>,
    samples: Option<usize>,
    grid: Option<Vec<usize>>,
    h: Option<f64>,
    richardson: Option<bool>,
    input: Option<String>,
    seed: u64,
    format: Format,
    tolerances: Tolerances,
    tol_lagrange: f64,
}

impl<'a> RunConfig<'a> {
    fn new(command: &'a str, common: &Common, tol: Tolerances, tol_lagrange: f64) -> Self {
        RunConfig {
            command,
            n: None,
            samples: None,
            grid: None,
            h: None,
            richardson: None,
            input: None,
            seed: common.seed,
            format: common.format,
            tolerances: tol,
            tol_lagrange,
        }
    }
}

/// Rejected configuration: exit status 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

struct Output {
    json: String,
    csv_header: Vec<String>,
    csv_rows: Vec<Vec<String>>,
    failures: Vec<String>,
}

fn output<C: Serialize, R: Serialize>(
    config: C,
    records: Vec<R>,
    failures: Vec<String>,
    header: &[&str],
    rows: Vec<Vec<String>>,
) -> Result<Output, Usage> {
    let env = Envelope::new(config, records, failures.clone());
    let mut json = serde_json::to_string_pretty(&env)?;
    json.push('\n');
    Ok(Output {
        json,
        csv_header: header.iter().map(|s| s.to_string()).collect(),
        csv_rows: rows,
        failures,
    })
}

fn tolerances(c: &Common) -> Tolerances {
    let mut t = Tolerances::default();
    t.identity = c.tol_identity.unwrap_or(t.identity);
    t.ineq = c.tol_ineq.unwrap_or(t.ineq);
    t.fd = c.tol_fd.unwrap_or(t.fd);
    t.invariant = c.tol_invariant.unwrap_or(t.invariant);
    t
}

fn run_identities(common: &Common, n: usize, samples: usize) -> Result<Output, Usage> {
    if n == 0 || samples == 0 {
        return Err(Usage("--n and --samples must be positive".into()));
    }
    let tol = tolerances(common);
    let checks: Vec<Check> = identity_suite(n, samples, common.seed, &tol)?;
    let failures = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{}: worst {:e} (tolerance {:e})", c.name, c.worst, c.tolerance))
        .collect();
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.pass.to_string(),
                fmt_f64(c.worst),
                fmt_f64(c.tolerance),
                c.samples.to_string(),
            ]
        })
        .collect();
    let mut config = RunConfig::new("identities", common, tol, tol_lagrange(common));
    config.n = Some(n);
    config.samples = Some(samples);
    output(config, checks, failures, &["name", "pass", "worst", "tolerance", "samples"], rows)
}

fn tol_lagrange(c: &Common) -> f64 {
    c.tol_lagrange.unwrap_or(TOL_LAGRANGE)
}

#[derive(Serialize)]
struct ThetaRecord {
    n: usize,
    norm_sq: f64,
    traceless: bool,
    spectrum: AdaptedSpectrum,
    report: Option<PinchReport>,
}

fn run_theta(common: &Common, file: &PathBuf, oracle: bool) -> Result<Output, Usage> {
    let text = fs::read_to_string(file).map_err(|e| Usage(format!("{}: {e}", file.display())))?;
    let sigma = SymCubic::from_text(&text).map_err(|e| Usage(format!("{}: {e}", file.display())))?;
    let opts = ThetaOptions {
        oracle,
        seed: common.seed,
        ..ThetaOptions::default()
    };
    let tol = tolerances(common);
    let tl = tol_lagrange(common);
    let mut failures = Vec::new();
    let spectrum = match theta(&sigma, &opts) {
        Ok(s) => s,
        Err(e) => {
            failures.push(e.to_string());
            let config = RunConfig::new("theta", common, tol, tl);
            return output(config, Vec::<ThetaRecord>::new(), failures, &[], vec![]);
        }
    };
    let scale = 1.0 + sigma.norm_sq().sqrt();
    if spectrum.lagrange_residual > tl * scale {
        failures.push(format!("lagrange residual {:e}", spectrum.lagrange_residual));
    }
    if let Some(gap) = spectrum.oracle_rel_gap {
        if gap > 1e-4 {
            failures.push(format!("optimizer and grid oracle differ by {gap:e} (relative)"));
        }
    }
    let traceless = sigma.is_traceless(TOL_TRACE);
    let report = if traceless {
        let r = pinching_report_with(&sigma, &spectrum)?;
        failures.extend(r.violations.iter().cloned());
        Some(r)
    } else {
        None
    };
    let row = vec![
        sigma.dim().to_string(),
        fmt_f64(spectrum.theta),
        spectrum.mu.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(";"),
        spectrum.e1.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(";"),
        fmt_f64(spectrum.lagrange_residual),
        fmt_f64(sigma.norm_sq()),
        report.as_ref().map(|r| fmt_f64(r.gap_main)).unwrap_or_default(),
    ];
    let record = ThetaRecord {
        n: sigma.dim(),
        norm_sq: sigma.norm_sq(),
        traceless,
        spectrum,
        report,
    };
    let mut config = RunConfig::new("theta", common, tol, tl);
    config.n = Some(sigma.dim());
    config.input = Some(file.display().to_string());
    output(
        config,
        vec![record],
        failures,
        &["n", "theta", "mu", "e1", "lagrange_residual", "norm_sq", "gap_main"],
        vec![row],
    )
}

fn run_scan(common: &Common, name: &str, grid: &[usize], h: f64, richardson: bool) -> Result<Output, Usage> {
    let entry: CatalogEntry = catalog::lookup(name)?;
    let n = entry.immersion.n;
    let res: Vec<usize> = match grid.len() {
        1 => vec![grid[0]; n],
        l if l == n => grid.to_vec(),
        _ => return Err(Usage(format!("--grid needs 1 or {n} values, got {}", grid.len()))),
    };
    if h.is_nan() || h <= 0.0 {
        return Err(Usage(format!("--h must be positive, got {h}")));
    }
    let tol = tolerances(common);
    let opts = JetOptions { h, richardson };
    let (points, failures) = scan_entry(&entry, &res, &opts, &tol)?;
    let rows = points.iter().map(scan_csv_row).collect();
    let mut config = RunConfig::new("scan", common, tol, tol_lagrange(common));
    config.n = Some(n);
    config.grid = Some(res);
    config.h = Some(h);
    config.richardson = Some(richardson);
    config.input = Some(name.to_string());
    output(config, points, failures, &SCAN_CSV_HEADER, rows)
}

#[derive(Serialize)]
struct CatalogRecord {
    name: String,
    n: usize,
    ambient_n: usize,
    axes: Vec<legendrian_pinching::immersion::ChartAxis>,
    expected: Expected,
}

fn run_catalog(common: &Common) -> Result<Output, Usage> {
    let mut records = Vec::new();
    for name in catalog::names() {
        let e = catalog::lookup(&name)?;
        records.push(CatalogRecord {
            name,
            n: e.immersion.n,
            ambient_n: e.immersion.ambient_n,
            axes: e.immersion.axes.clone(),
            expected: e.expected,
        });
    }
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let rows = records
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.n.to_string(),
                r.ambient_n.to_string(),
                opt(r.expected.norm_sq),
                opt(r.expected.theta),
                r.expected.minimal.map(|b| b.to_string()).unwrap_or_default(),
                r.expected.legendrian.to_string(),
            ]
        })
        .collect();
    let config = RunConfig::new("catalog", common, tolerances(common), tol_lagrange(common));
    output(
        config,
        records,
        vec![],
        &["name", "n", "ambient_n", "norm_sq", "theta", "minimal", "legendrian"],
        rows,
    )
}

#[derive(Serialize)]
struct FileSummary {
    file: String,
    command: String,
    records: usize,
    pass: bool,
    failures: Vec<String>,
}

fn run_report(common: &Common, files: &[PathBuf]) -> Result<Output, Usage> {
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for f in files {
        let text = fs::read_to_string(f).map_err(|e| Usage(format!("{}: {e}", f.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", f.display())))?;
        let bad = || Usage(format!("{}: not a report document", f.display()));
        let summary = v.get("summary").ok_or_else(bad)?;
        let pass = summary.get("pass").and_then(Value::as_bool).ok_or_else(bad)?;
        let fails: Vec<String> = summary
            .get("failures")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(|x| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string()))
            .collect();
        let command = v
            .pointer("/config/command")
            .and_then(Value::as_str)
            .unwrap_or("unknown")
            .to_string();
        let count = v.get("records").and_then(Value::as_array).map_or(0, Vec::len);
        let file = f.display().to_string();
        failures.extend(fails.iter().map(|m| format!("{file}: {m}")));
        if !pass && fails.is_empty() {
            failures.push(format!("{file}: marked as failing"));
        }
        records.push(FileSummary {
            file,
            command,
            records: count,
            pass,
            failures: fails,
        });
    }
    let rows = records
        .iter()
        .map(|r| {
            vec![
                r.file.clone(),
                r.command.clone(),
                r.pass.to_string(),
                r.records.to_string(),
                r.failures.len().to_string(),
            ]
        })
        .collect();
    let config = RunConfig::new("report", common, tolerances(common), tol_lagrange(common));
    output(config, records, failures, &["file", "command", "pass", "records", "failures"], rows)
}

fn render(out: &Output, format: Format) -> Result<String, Usage> {
    match format {
        Format::Json => Ok(out.json.clone()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&out.csv_header)?;
            for row in &out.csv_rows {
                w.write_record(row)?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| Usage(e.to_string()))?)?)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Usage> {
    let c = &cli.common;
    if let Some(t) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Usage(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Identities { n, samples } => run_identities(c, *n, *samples),
        Command::Theta { file, oracle } => run_theta(c, file, *oracle),
        Command::Scan {
            name,
            grid,
            h,
            richardson,
        } => run_scan(c, name, grid, *h, *richardson),
        Command::Catalog => run_catalog(c),
        Command::Report { files } => run_report(c, files),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(Usage(msg)) => {
            eprintln!("lpinch: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = match render(&out, cli.common.format) {
        Ok(t) => t,
        Err(Usage(msg)) => {
            eprintln!("lpinch: {msg}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.common.out {
        Some(path) => fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("lpinch: cannot write report: {e}");
        return ExitCode::from(2);
    }
    for f in &out.failures {
        eprintln!("FAIL {f}");
    }
    if out.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
