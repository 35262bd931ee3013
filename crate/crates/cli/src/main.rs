//! `dv2f` command-line driver.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use dv2f::labels::{export_labels, write_labels};
use dv2f::metrics::{summary_csv, BatchSummary};
use dv2f::plot::{render_svg, FieldOptions, PlotOptions};
use dv2f::scenario::{generate_batch, load_batch_file, save_batch};
use dv2f::trajectory::Trajectory;
use dv2f::{evaluate, rollout, GenSpec, MetricsReport, Mode, ModelParams, Scene};

use output::{error_json, error_kind, write_atomic};

#[derive(Parser)]
#[command(
    name = "dv2f",
    version,
    about = "Multi-vehicle navigation with dynamic velocity vector fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a batch of scenarios.
    Gen(GenArgs),
    /// Roll out a batch and write trajectories and metrics.
    Run(RunArgs),
    /// Render a trajectory file as SVG.
    Plot(PlotArgs),
    /// Export reference-control labels from rollouts.
    Labels(LabelArgs),
    /// Time batches of rollouts across regimes.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    #[arg(long, default_value_t = 10)]
    vehicles: usize,
    #[arg(long, default_value_t = 0)]
    obstacles: usize,
    #[arg(long, default_value = "collision")]
    mode: Mode,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Simulation horizon in steps.
    #[arg(long)]
    horizon: Option<usize>,
    /// Static part of the collision-avoidance margin, meters.
    #[arg(long = "r-c")]
    r_c: Option<f64>,
    /// Any model parameter, e.g. `--param eps_c=0.4`. Repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<ModelParams> {
        let mut p = ModelParams::default();
        if let Some(h) = self.horizon {
            p = p.with_override("horizon", &h.to_string())?;
        }
        if let Some(r) = self.r_c {
            p = p.with_override("r_c", &r.to_string())?;
        }
        for kv in &self.params {
            let Some((k, v)) = kv.split_once('=') else {
                bail!(dv2f::Error::InvalidParam {
                    name: "param",
                    reason: format!("expected NAME=VALUE, got `{kv}`")
                });
            };
            p = p.with_override(k.trim(), v)?;
        }
        Ok(p)
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    params: ParamArgs,
    /// Output directory; the file is named after the batch spec.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct Workers {
    /// Worker threads for batch-level parallelism (capped by DV2F_THREADS).
    #[arg(long)]
    parallel: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario batch file. Without it a batch is generated from the flags.
    #[arg(long)]
    scenes: Option<PathBuf>,
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    workers: Workers,
    /// Output directory.
    #[arg(long, default_value = "run")]
    out: PathBuf,
    /// Skip writing per-case trajectory files.
    #[arg(long)]
    no_trajectories: bool,
}

#[derive(Args)]
struct PlotArgs {
    /// Trajectory file written by `run`.
    trajectory: PathBuf,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
    /// Draw the reference-orientation field of this vehicle.
    #[arg(long)]
    field_vehicle: Option<usize>,
    /// Step at which the field is sampled.
    #[arg(long, default_value_t = 0)]
    field_step: usize,
    /// Field grid spacing, meters.
    #[arg(long, default_value_t = 2.0)]
    field_spacing: f64,
}

#[derive(Args)]
struct LabelArgs {
    #[arg(long)]
    scenes: Option<PathBuf>,
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    workers: Workers,
    /// Output JSON-lines file; gzipped when the name ends in `.gz`.
    #[arg(long, default_value = "labels.jsonl")]
    out: PathBuf,
    /// Force gzip compression.
    #[arg(long)]
    gzip: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Vehicle counts; pairs up with --obstacles. Defaults to the standard regimes.
    #[arg(long, value_delimiter = ',')]
    vehicles: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    obstacles: Vec<usize>,
    #[arg(long, default_value = "collision")]
    mode: Mode,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    workers: Workers,
    /// Summary CSV path.
    #[arg(long, default_value = "bench.csv")]
    out: PathBuf,
}

const DEFAULT_REGIMES: [(usize, usize); 6] =
    [(10, 0), (20, 0), (30, 0), (50, 0), (10, 25), (50, 25)];

fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("DV2F_THREADS") {
        Ok(v) => {
            let n = v.trim().parse::<usize>().ok().filter(|&n| n >= 1);
            let Some(n) = n else {
                bail!(dv2f::Error::InvalidParam {
                    name: "DV2F_THREADS",
                    reason: format!("must be a positive integer, got `{v}`")
                });
            };
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

fn pool(w: &Workers) -> Result<rayon::ThreadPool> {
    if w.parallel == Some(0) {
        bail!(dv2f::Error::InvalidParam {
            name: "parallel",
            reason: "must be at least 1".into()
        });
    }
    let default = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut n = w.parallel.unwrap_or(default);
    if let Some(cap) = thread_cap()? {
        n = n.min(cap);
    }
    Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build()?)
}

fn load_or_generate(file: Option<&Path>, s: &ScenarioArgs, p: &ModelParams) -> Result<Vec<Scene>> {
    match file {
        Some(f) => load_batch_file(f).with_context(|| format!("reading {}", f.display())),
        None => Ok(generate_batch(
            &GenSpec::new(s.vehicles, s.obstacles, s.mode, s.seed),
            s.cases,
            p,
        )?),
    }
}

fn gen(a: &GenArgs) -> Result<serde_json::Value> {
    let p = a.params.resolve()?;
    let s = &a.scenario;
    let spec = GenSpec::new(s.vehicles, s.obstacles, s.mode, s.seed);
    let scenes = generate_batch(&spec, s.cases, &p)?;
    let path = a.out.join(spec.batch_file_name());
    write_atomic(&path, &save_batch(&scenes))?;
    Ok(json!({ "command": "gen", "cases": scenes.len(), "file": path }))
}

#[derive(Serialize)]
struct CaseResult {
    case: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<MetricsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn metrics_csv(cases: &[CaseResult]) -> String {
    let mut s = String::from("case,success,reach,safe,position_only,error\n");
    for c in cases {
        match (&c.metrics, &c.error) {
            (Some(m), _) => s.push_str(&format!(
                "{},{:.6},{:.6},{:.6},{:.6},\n",
                c.case, m.success_rate, m.reach_rate, m.safe_rate, m.position_only_success
            )),
            (None, e) => s.push_str(&format!(
                "{},,,,,{}\n",
                c.case,
                e.as_deref().unwrap_or("").replace([',', '\n'], " ")
            )),
        }
    }
    s
}

fn run(a: &RunArgs) -> Result<serde_json::Value> {
    let p = a.params.resolve()?;
    let scenes = load_or_generate(a.scenes.as_deref(), &a.scenario, &p)?;
    let workers = pool(&a.workers)?;
    std::fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;

    let start = Instant::now();
    let results: Vec<(CaseResult, Option<Trajectory>)> = workers.install(|| {
        scenes
            .par_iter()
            .enumerate()
            .map(|(i, sc)| match rollout(sc, &p) {
                Ok(r) => {
                    let m = evaluate(&r, &p);
                    let tr = Trajectory::from_rollout(&r);
                    let (metrics, error) = match m {
                        Ok(m) => (Some(m), None),
                        Err(e) => (None, Some(e.to_string())),
                    };
                    (
                        CaseResult {
                            case: i,
                            metrics,
                            error,
                        },
                        Some(tr),
                    )
                }
                Err(e) => (
                    CaseResult {
                        case: i,
                        metrics: None,
                        error: Some(e.to_string()),
                    },
                    None,
                ),
            })
            .collect()
    });
    let wall = start.elapsed().as_secs_f64();

    let mut written = 0;
    if !a.no_trajectories {
        for (c, tr) in &results {
            if let Some(tr) = tr {
                write_atomic(
                    &a.out.join(format!("traj_{:04}.jsonl", c.case)),
                    &tr.to_bytes(),
                )?;
                written += 1;
            }
        }
    }
    let cases: Vec<CaseResult> = results.into_iter().map(|(c, _)| c).collect();
    let reports: Vec<MetricsReport> = cases.iter().filter_map(|c| c.metrics.clone()).collect();
    let failures = cases.iter().filter(|c| c.error.is_some()).count();
    let nv = scenes.first().map_or(0, |s| s.vehicles.len());
    let no = scenes.first().map_or(0, |s| s.obstacles.len());
    let summary = BatchSummary::from_reports(nv, no, &reports, wall);

    write_atomic(&a.out.join("metrics.csv"), metrics_csv(&cases).as_bytes())?;
    write_atomic(
        &a.out.join("metrics.json"),
        &serde_json::to_vec_pretty(&cases)?,
    )?;
    write_atomic(
        &a.out.join("summary.csv"),
        summary_csv(std::slice::from_ref(&summary)).as_bytes(),
    )?;
    Ok(json!({
        "command": "run",
        "cases": cases.len(),
        "failures": failures,
        "trajectories": written,
        "success": summary.success,
        "reach": summary.reach,
        "safe": summary.safe,
        "wall_time_s": wall,
        "out": a.out,
    }))
}

fn plot(a: &PlotArgs) -> Result<serde_json::Value> {
    let tr = Trajectory::read_file(&a.trajectory)
        .with_context(|| format!("reading {}", a.trajectory.display()))?;
    let field = a.field_vehicle.map(|vehicle| FieldOptions {
        vehicle,
        step: a.field_step,
        spacing: a.field_spacing,
    });
    let svg = render_svg(&tr, &PlotOptions { field })?;
    write_atomic(&a.out, svg.as_bytes())?;
    Ok(json!({ "command": "plot", "file": a.out }))
}

fn labels(a: &LabelArgs) -> Result<serde_json::Value> {
    let p = a.params.resolve()?;
    let scenes = load_or_generate(a.scenes.as_deref(), &a.scenario, &p)?;
    let workers = pool(&a.workers)?;
    let per_case: Vec<_> = workers.install(|| {
        scenes
            .par_iter()
            .enumerate()
            .map(|(i, sc)| rollout(sc, &p).map(|r| export_labels(&r, &format!("case{i:04}"))))
            .collect::<dv2f::Result<Vec<_>>>()
    })?;
    let records: Vec<_> = per_case.into_iter().flatten().collect();
    let gzip = a.gzip || a.out.extension().is_some_and(|e| e == "gz");
    let mut buf = Vec::new();
    write_labels(&records, &mut buf, gzip)?;
    write_atomic(&a.out, &buf)?;
    Ok(json!({ "command": "labels", "records": records.len(), "gzip": gzip, "file": a.out }))
}

fn bench(a: &BenchArgs) -> Result<serde_json::Value> {
    let p = a.params.resolve()?;
    let regimes: Vec<(usize, usize)> = match (a.vehicles.is_empty(), a.obstacles.is_empty()) {
        (true, true) => DEFAULT_REGIMES.to_vec(),
        (false, true) => a.vehicles.iter().map(|&v| (v, 0)).collect(),
        (true, false) => bail!(dv2f::Error::InvalidParam {
            name: "obstacles",
            reason: "needs --vehicles".into()
        }),
        (false, false) if a.vehicles.len() == a.obstacles.len() => a
            .vehicles
            .iter()
            .copied()
            .zip(a.obstacles.iter().copied())
            .collect(),
        _ => bail!(dv2f::Error::InvalidParam {
            name: "obstacles",
            reason: "--vehicles and --obstacles need the same number of entries".into()
        }),
    };
    let workers = pool(&a.workers)?;
    let mut rows = Vec::new();
    for (nv, no) in regimes {
        let scenes = generate_batch(&GenSpec::new(nv, no, a.mode, a.seed), a.cases, &p)?;
        // Only controller and stepping are timed.
        let start = Instant::now();
        let rollouts = workers.install(|| {
            scenes
                .par_iter()
                .map(|sc| rollout(sc, &p))
                .collect::<dv2f::Result<Vec<_>>>()
        })?;
        let wall = start.elapsed().as_secs_f64();
        let reports: Vec<MetricsReport> = rollouts
            .iter()
            .filter_map(|r| evaluate(r, &p).ok())
            .collect();
        rows.push(BatchSummary::from_reports(nv, no, &reports, wall));
    }
    let csv = summary_csv(&rows);
    write_atomic(&a.out, csv.as_bytes())?;
    Ok(json!({ "command": "bench", "file": a.out, "rows": rows }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = anyhow::Error::msg(e.to_string().trim().to_string());
            eprintln!("{}", error_json("usage", &err));
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run(a),
        Command::Plot(a) => plot(a),
        Command::Labels(a) => labels(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_json(error_kind(&e), &e));
            ExitCode::FAILURE
        }
    }
}
