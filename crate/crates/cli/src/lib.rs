//! Command-line front end: reads a JSON run configuration and writes
//! ladders, grid scans, validation reports, series partial sums or the disk
//! geometry as CSV or JSON.

pub mod config;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fpladder::characteristic::{disk_geometry, eval_f, f_prime, DiskGeometry};
use fpladder::jost::{check_admissibility, DEFAULT_ADMISSIBILITY_THRESHOLD};
use fpladder::ladder::{solve_ladder, Classification, LadderEntry};
use fpladder::oracle::{cross_validate, ValidationSummary};
use fpladder::series::SeriesEngine;
use fpladder::{BipartiteProblem, Complex};
use serde::Deserialize;
use serde_json::{json, Value};

pub use config::RunConfig;
use table::Table;

pub const LADDER_HEADER: [&str; 11] = [
    "n",
    "a_n",
    "k_re",
    "k_im",
    "lambda_re",
    "lambda_im",
    "iterations",
    "residual",
    "classification",
    "apriori_bound",
    "certified",
];

pub const SCAN_HEADER: [&str; 6] = ["k_re", "k_im", "F_re", "F_im", "abs_F_minus_1", "abs_F_prime"];

pub const SERIES_HEADER: [&str; 7] = ["n", "order", "center", "value_re", "value_im", "bound", "useful"];

pub const VERIFY_HEADER: [&str; 7] = [
    "n",
    "winding",
    "newton_re",
    "newton_im",
    "newton_iterations",
    "distance_to_ladder",
    "agrees",
];

/// Newton roots must land this close to the ladder value.
pub const VERIFY_TOL: f64 = 1e-12;

/// Ring radius for `F'` in grid scans.
const SCAN_RING: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "fpladder", version, about = "Complex wavenumber ladders of bipartite potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the ladder k_n over the configured index range.
    Solve(Common),
    /// Tabulate F and |F'| on a rectangular grid of k.
    Scan {
        #[command(flatten)]
        common: Common,
        /// re_min re_max im_min im_max
        #[arg(long, num_args = 4, allow_negative_numbers = true, required = true,
              value_names = ["RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"])]
        rect: Vec<f64>,
        /// Nodes along the real and imaginary axes.
        #[arg(long, num_args = 2, required = true, value_names = ["N_RE", "N_IM"])]
        grid: Vec<usize>,
    },
    /// Check each ladder entry by root counting and Newton's method.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Ladder CSV from `solve` to check instead of solving afresh.
        #[arg(long)]
        ladder: Option<PathBuf>,
    },
    /// Partial sums of both series for k_n at the configured order.
    Series(Common),
    /// Certified radius, derivative bound, contraction margin and N.
    Radius(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// How a command finished when it did not hit a hard error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// Some items failed; the rest were written.
    Partial,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Complete => 0,
            Status::Partial => 2,
        }
    }
}

enum Output {
    Table(Table),
    /// JSON document, with the table used for CSV output.
    Document(Value, Table),
}

pub fn run(cli: Cli) -> anyhow::Result<Status> {
    let (common, result) = match &cli.command {
        Command::Solve(c) => (c, solve(&RunConfig::load(&c.config)?)),
        Command::Scan { common, rect, grid } => (
            common,
            scan(&RunConfig::load(&common.config)?, rect, grid),
        ),
        Command::Verify { common, ladder } => (
            common,
            verify(&RunConfig::load(&common.config)?, ladder.as_deref()),
        ),
        Command::Series(c) => (c, series(&RunConfig::load(&c.config)?)),
        Command::Radius(c) => (c, radius(&RunConfig::load(&c.config)?)),
    };
    let (output, status) = result?;
    write_output(&output, common)?;
    Ok(status)
}

fn write_output(output: &Output, common: &Common) -> anyhow::Result<()> {
    let mut sink: Box<dyn Write> = match &common.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match (common.format, output) {
        (Format::Csv, Output::Table(t) | Output::Document(_, t)) => t.write_csv(&mut sink)?,
        (Format::Json, Output::Table(t)) => write_json(&mut sink, &t.to_json())?,
        (Format::Json, Output::Document(doc, _)) => write_json(&mut sink, doc)?,
    }
    sink.flush()?;
    Ok(())
}

fn write_json(sink: &mut dyn Write, value: &Value) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *sink, value)?;
    writeln!(sink)?;
    Ok(())
}

fn admissible_problem(config: &RunConfig) -> anyhow::Result<BipartiteProblem> {
    let problem = config.problem()?;
    let report = check_admissibility(&problem, DEFAULT_ADMISSIBILITY_THRESHOLD);
    if !report.admissible() {
        bail!("problem is not admissible: {}", report.failures().join("; "));
    }
    Ok(problem)
}

fn geometry(config: &RunConfig, problem: &BipartiteProblem) -> anyhow::Result<DiskGeometry> {
    let g = disk_geometry(problem, &config.geometry_options())
        .context("cannot determine the certified disk")?;
    if !g.is_contracting() {
        eprintln!(
            "warning: contraction margin {:.3} is not below 1; no index is certified",
            g.contraction_margin
        );
    }
    Ok(g)
}

fn report_failures<E: std::fmt::Display>(failures: &[(i64, E)]) {
    for (n, e) in failures {
        eprintln!("n = {n}: {e}");
    }
}

/// Partial when something failed but something was produced; a hard error
/// when everything failed.
fn status_of(produced: usize, failed: usize) -> anyhow::Result<Status> {
    match (produced, failed) {
        (_, 0) => Ok(Status::Complete),
        (0, _) => bail!("all {failed} indices failed"),
        _ => Ok(Status::Partial),
    }
}

pub fn ladder_table(entries: &[LadderEntry]) -> Table {
    let mut t = Table::new(&LADDER_HEADER);
    for e in entries {
        let lambda = e.lambda();
        t.push(vec![
            e.n.into(),
            e.a_n.into(),
            e.k.re.into(),
            e.k.im.into(),
            lambda.re.into(),
            lambda.im.into(),
            e.iterations.into(),
            e.residual.into(),
            e.classification.as_str().into(),
            e.apriori_bound.into(),
            e.certified.into(),
        ]);
    }
    t
}

fn solve_entries(
    config: &RunConfig,
    problem: &BipartiteProblem,
    geometry: &DiskGeometry,
) -> anyhow::Result<(Vec<LadderEntry>, Status)> {
    let (lo, hi) = config.n_range.resolve(geometry);
    let solution = solve_ladder(problem, geometry, lo, hi, &config.solve_options());
    report_failures(&solution.failures);
    let status = status_of(solution.entries.len(), solution.failures.len())?;
    Ok((solution.entries, status))
}

fn solve(config: &RunConfig) -> anyhow::Result<(Output, Status)> {
    let problem = admissible_problem(config)?;
    let geometry = geometry(config, &problem)?;
    let (entries, status) = solve_entries(config, &problem, &geometry)?;
    Ok((Output::Table(ladder_table(&entries)), status))
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

fn scan(config: &RunConfig, rect: &[f64], grid: &[usize]) -> anyhow::Result<(Output, Status)> {
    let problem = config.problem()?;
    if rect.iter().any(|v| !v.is_finite()) {
        bail!("--rect values must be finite");
    }
    let res = linspace(rect[0], rect[1], grid[0]);
    let ims = if res.is_empty() {
        Vec::new()
    } else {
        linspace(rect[2], rect[3], grid[1])
    };
    let mut t = Table::new(&SCAN_HEADER);
    for &im in &ims {
        for &re in &res {
            let k = Complex::new(re, im);
            let f = eval_f(&problem, k).ok();
            let df = f
                .and_then(|_| f_prime(&problem, k, SCAN_RING, config.quadrature_nodes).ok())
                .map(|d| d.norm());
            t.push(vec![
                re.into(),
                im.into(),
                f.map(|f| f.re).into(),
                f.map(|f| f.im).into(),
                f.map(|f| (f - 1.0).norm()).into(),
                df.into(),
            ]);
        }
    }
    Ok((Output::Table(t), Status::Complete))
}

/// One row of a ladder CSV as written by [`ladder_table`].
#[derive(Debug, Deserialize)]
struct LadderRow {
    n: i64,
    a_n: f64,
    k_re: f64,
    k_im: f64,
    #[allow(dead_code)]
    lambda_re: f64,
    #[allow(dead_code)]
    lambda_im: f64,
    iterations: usize,
    residual: f64,
    classification: String,
    apriori_bound: f64,
    certified: bool,
}

pub fn read_ladder<R: Read>(input: R) -> anyhow::Result<Vec<LadderEntry>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != LADDER_HEADER {
        bail!("unexpected ladder header: {}", header.join(","));
    }
    reader
        .deserialize::<LadderRow>()
        .enumerate()
        .map(|(i, row)| {
            let row = row.with_context(|| format!("ladder row {}", i + 1))?;
            let classification = Classification::parse(&row.classification).with_context(|| {
                format!("ladder row {}: unknown classification {}", i + 1, row.classification)
            })?;
            Ok(LadderEntry {
                n: row.n,
                a_n: row.a_n,
                k: Complex::new(row.k_re, row.k_im),
                iterations: row.iterations,
                last_step: f64::NAN,
                residual: row.residual,
                classification,
                apriori_bound: row.apriori_bound,
                certified: row.certified,
            })
        })
        .collect()
}

fn verify_output(geometry: &DiskGeometry, summary: &ValidationSummary) -> Output {
    let mut t = Table::new(&VERIFY_HEADER);
    for r in &summary.reports {
        t.push(vec![
            r.n.into(),
            r.winding.into(),
            r.newton_root.re.into(),
            r.newton_root.im.into(),
            r.newton_iterations.into(),
            r.distance_to_ladder.into(),
            r.agrees.into(),
        ]);
    }
    let failures: Vec<Value> = summary
        .failures
        .iter()
        .map(|(n, e)| json!({ "n": n, "error": e.to_string() }))
        .collect();
    let doc = json!({
        "ell": geometry.ell,
        "ball_radius": geometry.ball_radius(),
        "tolerance": VERIFY_TOL,
        "all_agree": summary.all_agree(),
        "reports": t.to_json(),
        "failures": failures,
    });
    Output::Document(doc, t)
}

fn verify(config: &RunConfig, ladder: Option<&Path>) -> anyhow::Result<(Output, Status)> {
    let problem = admissible_problem(config)?;
    let geometry = geometry(config, &problem)?;
    let (entries, solve_status) = match ladder {
        Some(path) => {
            let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
            (read_ladder(file)?, Status::Complete)
        }
        None => solve_entries(config, &problem, &geometry)?,
    };
    let summary = cross_validate(&problem, &geometry, &entries, VERIFY_TOL);
    report_failures(&summary.failures);
    for r in summary.reports.iter().filter(|r| !r.agrees) {
        eprintln!(
            "n = {}: winding {}, Newton root {} from the ladder",
            r.n, r.winding, r.distance_to_ladder
        );
    }
    let status = if summary.all_agree() {
        solve_status
    } else {
        Status::Partial
    };
    Ok((verify_output(&geometry, &summary), status))
}

fn series(config: &RunConfig) -> anyhow::Result<(Output, Status)> {
    let problem = admissible_problem(config)?;
    let geometry = geometry(config, &problem)?;
    let engine = SeriesEngine::new(&problem, &geometry, &config.series_options())
        .context("cannot set up the series quadratures")?;
    let (lo, hi) = config.n_range.resolve(&geometry);
    let order = config.series_order;
    let mut t = Table::new(&SERIES_HEADER);
    let mut failures = Vec::new();
    for n in lo..=hi {
        for approx in [engine.at_ball_center(n, order), engine.at_zero(n, order)] {
            match approx {
                Ok(s) => t.push(vec![
                    s.n.into(),
                    s.order.into(),
                    s.center.as_str().into(),
                    s.value.re.into(),
                    s.value.im.into(),
                    s.bound.into(),
                    s.useful.into(),
                ]),
                Err(e) => failures.push((n, e)),
            }
        }
    }
    report_failures(&failures);
    let status = status_of(t.rows.len(), failures.len())?;
    Ok((Output::Table(t), status))
}

fn radius(config: &RunConfig) -> anyhow::Result<(Output, Status)> {
    let problem = config.problem()?;
    let report = check_admissibility(&problem, DEFAULT_ADMISSIBILITY_THRESHOLD);
    let g = disk_geometry(&problem, &config.geometry_options())
        .context("cannot determine the certified disk")?;
    let mut t = Table::new(&[
        "radius",
        "sup_f_prime",
        "contraction_margin",
        "n_max",
        "ell",
        "ball_radius",
        "contracting",
        "admissible",
    ]);
    t.push(vec![
        g.radius.into(),
        g.sup_f_prime.into(),
        g.contraction_margin.into(),
        g.n_max.into(),
        g.ell.into(),
        g.ball_radius().into(),
        g.is_contracting().into(),
        report.admissible().into(),
    ]);
    let doc = t.to_json()[0].clone();
    Ok((Output::Document(doc, t), Status::Complete))
}
