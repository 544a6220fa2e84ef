//! Command-line front end. `main.rs` only parses and dispatches here so the
//! commands can be driven from tests.

pub mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::decoder::calibrate::DEFAULT_CALIBRATION_SHOTS;
use crate::decoder::check::oracle_check;
use crate::error::{Error, Result};
use crate::gaussian::lattice::{build_lattice_with, reduce_macronode, BuildOptions, Dims, DEFAULT_MODE_CAP};
use crate::gaussian::{build_oeg, ClusterReport, PairChoice};
use crate::noise::{SimConfig, WeightsMode};
use crate::surface::build_layout;
use crate::threshold::{read_csv, sweep, thresholds_by_setting, write_csv, Experiment, GridPoint, SweepOptions, SweepRow};

pub const SEED_ENV: &str = "GKPSIM_SEED";

#[derive(Debug, Parser)]
#[command(name = "gkpsim", version, about = "Surface-GKP threshold simulator and Gaussian cluster-state builder")]
pub struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the logical error rate at one operating point.
    Simulate(SimulateArgs),
    /// Run a grid of operating points from a config file.
    Sweep(SweepArgs),
    /// Sweep (or read a sweep CSV) and extract thresholds per (chi, step).
    Threshold(ThresholdArgs),
    /// Build a Gaussian cluster structure and report its nullifiers.
    ClusterBuild(ClusterArgs),
    /// Compare blossom against exhaustive matching on random instances.
    DecodeCheck(DecodeCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightsArg {
    Uniform,
    Calibrated,
}

impl From<WeightsArg> for WeightsMode {
    fn from(w: WeightsArg) -> Self {
        match w {
            WeightsArg::Uniform => WeightsMode::Uniform,
            WeightsArg::Calibrated => WeightsMode::Calibrated,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub distance: usize,
    /// Syndrome rounds; defaults to the distance.
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub squeezing_db: f64,
    #[arg(long, default_value_t = 1.0)]
    pub chi: f64,
    #[arg(long, default_value_t = 0)]
    pub squeeze_step: usize,
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "uniform")]
    #[serde(skip)]
    pub weights: WeightsArg,
    #[arg(long, default_value_t = DEFAULT_CALIBRATION_SHOTS)]
    pub calibration_shots: u64,
    #[arg(long)]
    pub identity_noise: bool,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the code layout as JSON.
    #[arg(long)]
    pub dump_layout: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridOverrides {
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub weights: Option<WeightsArg>,
    #[arg(long)]
    pub calibration_shots: Option<u64>,
    #[arg(long)]
    pub rounds: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub overrides: GridOverrides,
    #[arg(long)]
    pub out: PathBuf,
    /// Completion journal; defaults to `<out>.journal`.
    #[arg(long)]
    pub journal: Option<PathBuf>,
    #[arg(long)]
    pub resume: bool,
    /// Stop after this many new rows.
    #[arg(long, hide = true)]
    pub max_new_rows: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Grid to sweep first.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub config: Option<PathBuf>,
    /// Existing sweep CSV.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: GridOverrides,
    /// Where to write the sweep CSV when sweeping.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub resume: bool,
    /// Threshold JSON; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Oeg,
    D1,
    D2,
    D3,
    Rhg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairArg {
    Epr,
    Gkp,
    Hybrid,
}

#[derive(Debug, Args, Serialize)]
pub struct ClusterArgs {
    #[arg(long, value_enum)]
    pub structure: Structure,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub timebins: usize,
    /// Output pair of the OEG structure.
    #[arg(long, value_enum, default_value = "epr")]
    pub pair: PairArg,
    /// Frequency index of the OEG structure.
    #[arg(long, default_value_t = 0)]
    pub j: u32,
    #[arg(long, default_value_t = DEFAULT_MODE_CAP)]
    pub mode_cap: usize,
    /// Emit the RHG macronode lattice before reduction.
    #[arg(long)]
    pub no_reduce: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DecodeCheckArgs {
    #[arg(long, default_value_t = 500)]
    pub instances: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 5_000)]
    pub calibration_shots: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Provenance record written next to every output file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub format_version: u32,
    pub artifact_version: &'static str,
    pub command: &'static str,
    pub seed: Option<u64>,
    pub config: Value,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub outputs: Vec<PathBuf>,
}

fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write_manifest(command: &'static str, seed: Option<u64>, config: Value, started: u128, outputs: Vec<PathBuf>) -> Result<()> {
    let m = RunManifest {
        format_version: 1,
        artifact_version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        config,
        started_unix_ms: started,
        finished_unix_ms: now_ms(),
        outputs,
    };
    let path = manifest_path(&m.outputs[0]);
    fs::write(path, to_json_pretty(&m)? + "\n")?;
    Ok(())
}

fn to_json_pretty<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Config(e.to_string()))
}

/// Explicit flag, else `GKPSIM_SEED`, else 0.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Error::Config("--jobs must be >= 1".into()));
        }
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    match cli.command {
        Command::Simulate(a) => simulate(&a),
        Command::Sweep(a) => run_sweep(&a),
        Command::Threshold(a) => threshold(&a),
        Command::ClusterBuild(a) => cluster_build(&a),
        Command::DecodeCheck(a) => decode_check(&a),
    }
}

/// Parses `args` (including the program name), runs, and maps errors to
/// exit codes with a message on stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn simulate(a: &SimulateArgs) -> Result<i32> {
    let started = now_ms();
    let seed = resolve_seed(a.seed)?;
    let cfg = SimConfig {
        d: a.distance,
        rounds: a.rounds.unwrap_or(a.distance),
        squeezing_db: a.squeezing_db,
        chi: a.chi,
        squeeze_step: a.squeeze_step,
        shots: a.shots,
        seed,
        weights_mode: a.weights.into(),
        identity_noise: a.identity_noise,
    };
    cfg.validate()?;
    if a.dump_layout.is_some() || a.out.is_some() {
        // Fail on unwritable paths before the long run.
        for p in a.dump_layout.iter().chain(a.out.iter()) {
            fs::OpenOptions::new().create(true).append(true).open(p)?;
        }
    }
    let exp = Experiment::with_calibration_shots(&cfg, a.calibration_shots)?;
    let est = exp.estimate(cfg.shots)?;
    let point = GridPoint { squeezing_db: cfg.squeezing_db, d: cfg.d, chi: cfg.chi, squeeze_step: cfg.squeeze_step };
    let mut csv = Vec::new();
    write_csv(&mut csv, &[SweepRow::new(&point, &est)])?;
    emit(a.out.as_deref(), std::str::from_utf8(&csv).expect("csv is utf-8"))?;
    let mut outputs: Vec<PathBuf> = a.out.iter().cloned().collect();
    if let Some(p) = &a.dump_layout {
        let layout = build_layout(cfg.d)?;
        fs::write(p, to_json_pretty(&layout.to_json())? + "\n")?;
        outputs.push(p.clone());
    }
    if !outputs.is_empty() {
        let config = json!({ "effective": cfg, "calibration_shots": a.calibration_shots, "flags": a });
        write_manifest("simulate", Some(seed), config, started, outputs)?;
    }
    Ok(0)
}

fn overrides_map(o: &GridOverrides, file: &Map<String, Value>) -> Result<Map<String, Value>> {
    let mut m = Map::new();
    if let Some(v) = o.shots {
        m.insert("shots".into(), v.into());
    }
    if o.seed.is_some() || !file.contains_key("seed") {
        m.insert("seed".into(), resolve_seed(o.seed)?.into());
    }
    if let Some(w) = o.weights {
        m.insert("weights_mode".into(), serde_json::to_value(WeightsMode::from(w)).expect("enum serializes"));
    }
    if let Some(v) = o.calibration_shots {
        m.insert("calibration_shots".into(), v.into());
    }
    if let Some(v) = o.rounds {
        m.insert("rounds".into(), v.into());
    }
    Ok(m)
}

fn load_grid(path: &Path, o: &GridOverrides) -> Result<(crate::threshold::SweepGrid, Value)> {
    let text = fs::read_to_string(path)?;
    let file = config::parse_config(&text)?;
    let flags = overrides_map(o, &file)?;
    let grid = config::grid_from(&file, &flags)?;
    let echo = json!({ "file": path, "file_values": file, "flag_values": flags, "effective": grid });
    Ok((grid, echo))
}

fn journal_for(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".journal");
    PathBuf::from(s)
}

fn run_sweep(a: &SweepArgs) -> Result<i32> {
    let started = now_ms();
    let (grid, echo) = load_grid(&a.config, &a.overrides)?;
    let journal = a.journal.clone().unwrap_or_else(|| journal_for(&a.out));
    let opts = SweepOptions { journal: Some(journal.clone()), resume: a.resume, max_new_rows: a.max_new_rows };
    let rows = sweep(&grid, &opts)?;
    let mut csv = Vec::new();
    write_csv(&mut csv, &rows)?;
    fs::write(&a.out, csv)?;
    write_manifest("sweep", Some(grid.seed), echo, started, vec![a.out.clone(), journal])?;
    Ok(0)
}

fn threshold(a: &ThresholdArgs) -> Result<i32> {
    let started = now_ms();
    let (rows, echo, seed, mut outputs) = match (&a.config, &a.input) {
        (Some(cfg), _) => {
            let (grid, echo) = load_grid(cfg, &a.overrides)?;
            let journal = a.csv.as_deref().map(journal_for);
            let rows = sweep(&grid, &SweepOptions { journal: journal.clone(), resume: a.resume, max_new_rows: None })?;
            let mut outputs = Vec::new();
            if let Some(p) = &a.csv {
                let mut csv = Vec::new();
                write_csv(&mut csv, &rows)?;
                fs::write(p, csv)?;
                outputs.push(p.clone());
                outputs.extend(journal);
            }
            (rows, echo, Some(grid.seed), outputs)
        }
        (None, Some(input)) => {
            let rows = read_csv(&fs::read_to_string(input)?)?;
            (rows, json!({ "input": input }), None, Vec::new())
        }
        (None, None) => return Err(Error::Config("threshold needs --config or --input".into())),
    };
    let summary = thresholds_by_setting(&rows);
    if summary.minimal.is_none() {
        let why: Vec<String> = summary.settings.iter().filter_map(|s| s.error.clone()).collect();
        return Err(Error::NoCrossing(why.join("; ")));
    }
    emit(a.out.as_deref(), &(to_json_pretty(&summary)? + "\n"))?;
    if let Some(p) = &a.out {
        outputs.insert(0, p.clone());
    }
    if !outputs.is_empty() {
        write_manifest("threshold", seed, echo, started, outputs)?;
    }
    Ok(0)
}

fn cluster_build(a: &ClusterArgs) -> Result<i32> {
    let started = now_ms();
    let opts = BuildOptions { mode_cap: a.mode_cap, check_each_step: false };
    let (name, state, graph) = match a.structure {
        Structure::Oeg => {
            let choice = match a.pair {
                PairArg::Epr => PairChoice::Epr,
                PairArg::Gkp => PairChoice::Gkp,
                PairArg::Hybrid => PairChoice::Hybrid,
            };
            let (s, g) = build_oeg(a.r, choice, a.j)?;
            ("oeg", s, g)
        }
        Structure::D1 | Structure::D2 | Structure::D3 | Structure::Rhg => {
            let dims = match a.structure {
                Structure::D1 => Dims::D1,
                Structure::D2 => Dims::D2,
                Structure::D3 => Dims::D3,
                _ => Dims::MacronodeRhg,
            };
            let (s, g) = build_lattice_with(a.r, a.n, a.timebins, dims, &opts)?;
            if dims == Dims::MacronodeRhg && !a.no_reduce {
                let (s, g) = reduce_macronode(&s, &g)?;
                ("rhg", s, g)
            } else {
                let name = match dims {
                    Dims::D1 => "d1",
                    Dims::D2 => "d2",
                    Dims::D3 => "d3",
                    Dims::MacronodeRhg => "rhg_macronode",
                };
                (name, s, g)
            }
        }
    };
    let report = ClusterReport::new(name, a.r, &state, &graph)?;
    emit(a.out.as_deref(), &(to_json_pretty(&report)? + "\n"))?;
    if let Some(p) = &a.out {
        write_manifest("cluster-build", None, json!({ "flags": a }), started, vec![p.clone()])?;
    }
    Ok(0)
}

fn decode_check(a: &DecodeCheckArgs) -> Result<i32> {
    let started = now_ms();
    let seed = resolve_seed(a.seed)?;
    let report = oracle_check(a.instances, seed, a.calibration_shots)?;
    for c in &report.cases {
        println!(
            "d={} {:?} {:?}: {} instances, {} mismatches",
            c.d,
            c.kind,
            c.weights,
            c.instances,
            c.mismatches
        );
    }
    let pass = report.mismatches() == 0;
    println!(
        "{}: {} of {} instances agree",
        if pass { "PASS" } else { "FAIL" },
        report.instances() - report.mismatches(),
        report.instances()
    );
    if let Some(p) = &a.out {
        fs::write(p, to_json_pretty(&json!({ "format_version": 1, "report": report }))? + "\n")?;
        write_manifest("decode-check", Some(seed), json!({ "flags": a }), started, vec![p.clone()])?;
    }
    Ok(if pass { 0 } else { 1 })
}
