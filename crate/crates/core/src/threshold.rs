//! Logical error rates, parameter sweeps and threshold extraction.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::calibrate::{calibrate, DEFAULT_CALIBRATION_SHOTS};
use crate::decoder::{DecoderPair, EdgeProbs};
use crate::error::{Error, Result};
use crate::noise::{detection_events_of, PauliFrame, ShotSimulator, SimConfig, SyndromeRecord, WeightsMode};
use crate::rng::{shot_rng, Domain};
use crate::surface::{build_layout, StabKind, SurfaceLayout};

pub const MIN_SHOTS: u64 = 100;
pub const WILSON_Z: f64 = 1.959_963_984_540_054;
pub const CSV_HEADER: &str = "squeezing_db,d,chi,squeeze_step,shots,logical_errors,rate,ci_low,ci_high";

const CHUNK: u64 = 512;

/// Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n_f = n as f64;
    let p = k as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    let lo = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (lo.min(p), hi.max(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub shots: u64,
    /// Shots where X̄ or Z̄ failed.
    pub logical_errors: u64,
    /// Shots with an odd `n_x` parity over Z̄.
    pub x_errors: u64,
    /// Shots with an odd `n_z` parity over X̄.
    pub z_errors: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl RateEstimate {
    pub fn from_counts(shots: u64, logical_errors: u64, x_errors: u64, z_errors: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(logical_errors, shots, WILSON_Z);
        RateEstimate {
            shots,
            logical_errors,
            x_errors,
            z_errors,
            rate: logical_errors as f64 / shots as f64,
            ci_low,
            ci_high,
        }
    }

    pub fn x_rate(&self) -> f64 {
        self.x_errors as f64 / self.shots as f64
    }

    pub fn z_rate(&self) -> f64 {
        self.z_errors as f64 / self.shots as f64
    }

    pub fn x_interval(&self) -> (f64, f64) {
        wilson_interval(self.x_errors, self.shots, WILSON_Z)
    }

    pub fn z_interval(&self) -> (f64, f64) {
        wilson_interval(self.z_errors, self.shots, WILSON_Z)
    }
}

/// Everything needed to run shots for one configuration; built once and
/// cloned per worker.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: SimConfig,
    pub layout: SurfaceLayout,
    pub edge_probs: Option<EdgeProbs>,
    sim: ShotSimulator,
    decoders: DecoderPair,
}

impl Experiment {
    pub fn new(config: &SimConfig) -> Result<Self> {
        Self::with_calibration_shots(config, DEFAULT_CALIBRATION_SHOTS)
    }

    pub fn with_calibration_shots(config: &SimConfig, calibration_shots: u64) -> Result<Self> {
        config.validate()?;
        let layout = build_layout(config.d)?;
        let edge_probs = match config.weights_mode {
            WeightsMode::Uniform => None,
            WeightsMode::Calibrated => Some(calibrate(config, &layout, calibration_shots)?),
        };
        let sim = ShotSimulator::new(config, &layout)?;
        let decoders = DecoderPair::new(&layout, config.rounds, config.weights_mode, edge_probs.as_ref())?;
        Ok(Experiment { config: config.clone(), layout, edge_probs, sim, decoders })
    }

    /// Decode one shot; returns `(x_failure, z_failure)`.
    pub fn run_shot(&mut self, shot: u64, scratch: &mut ShotScratch) -> Result<(bool, bool)> {
        let mut rng = shot_rng(self.config.seed, Domain::Decode, shot);
        let ShotScratch { record, frame, events } = scratch;
        self.sim.run_into(&mut rng, &[], record, frame);
        detection_events_of(record, StabKind::Z, events);
        self.decoders.z.decode(events, frame)?;
        detection_events_of(record, StabKind::X, events);
        self.decoders.x.decode(events, frame)?;
        Ok(frame.logical_flips(&self.layout))
    }

    pub fn scratch(&self) -> ShotScratch {
        let (record, frame) = self.sim.clone().run_with_injections(&mut shot_rng(0, Domain::Oracle, 0), &[]);
        ShotScratch { record, frame, events: Vec::new() }
    }

    /// Runs shots `0..shots` in parallel. Counts are summed, so the result is
    /// independent of the worker count.
    pub fn estimate(&self, shots: u64) -> Result<RateEstimate> {
        let chunks = shots.div_ceil(CHUNK);
        let counts = (0..chunks)
            .into_par_iter()
            .map(|c| -> Result<[u64; 3]> {
                let mut exp = self.clone();
                let mut scratch = exp.scratch();
                let mut acc = [0u64; 3];
                for shot in c * CHUNK..((c + 1) * CHUNK).min(shots) {
                    let (x, z) = exp.run_shot(shot, &mut scratch)?;
                    acc[0] += (x || z) as u64;
                    acc[1] += x as u64;
                    acc[2] += z as u64;
                }
                Ok(acc)
            })
            .try_reduce(|| [0; 3], |a, b| Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2]]))?;
        Ok(RateEstimate::from_counts(shots, counts[0], counts[1], counts[2]))
    }
}

#[derive(Debug, Clone)]
pub struct ShotScratch {
    record: SyndromeRecord,
    frame: PauliFrame,
    events: Vec<crate::noise::DetectionEvent>,
}

pub fn estimate_logical_rate(config: &SimConfig) -> Result<RateEstimate> {
    if config.shots < MIN_SHOTS {
        return Err(Error::domain(format!("need at least {MIN_SHOTS} shots, got {}", config.shots)));
    }
    Experiment::new(config)?.estimate(config.shots)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub squeezing_db: f64,
    pub d: usize,
    pub chi: f64,
    pub squeeze_step: usize,
    pub shots: u64,
    pub logical_errors: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub x_errors: u64,
    pub z_errors: u64,
}

impl SweepRow {
    pub fn new(point: &GridPoint, est: &RateEstimate) -> Self {
        SweepRow {
            squeezing_db: point.squeezing_db,
            d: point.d,
            chi: point.chi,
            squeeze_step: point.squeeze_step,
            shots: est.shots,
            logical_errors: est.logical_errors,
            rate: est.rate,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            x_errors: est.x_errors,
            z_errors: est.z_errors,
        }
    }

    pub fn point(&self) -> GridPoint {
        GridPoint { squeezing_db: self.squeezing_db, d: self.d, chi: self.chi, squeeze_step: self.squeeze_step }
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.squeezing_db,
            self.d,
            self.chi,
            self.squeeze_step,
            self.shots,
            self.logical_errors,
            self.rate,
            self.ci_low,
            self.ci_high
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub squeezing_db: f64,
    pub d: usize,
    pub chi: f64,
    pub squeeze_step: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    pub squeezing_db: Vec<f64>,
    pub d: Vec<usize>,
    pub chi: Vec<f64>,
    pub squeeze_step: Vec<usize>,
    pub shots: u64,
    pub seed: u64,
    /// Rounds per shot; `None` means `d`.
    #[serde(default)]
    pub rounds: Option<usize>,
    #[serde(default)]
    pub weights_mode: WeightsMode,
    #[serde(default)]
    pub identity_noise: bool,
    #[serde(default = "default_calibration_shots")]
    pub calibration_shots: u64,
}

fn default_calibration_shots() -> u64 {
    DEFAULT_CALIBRATION_SHOTS
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        let mut empty = Vec::new();
        for (name, len) in [
            ("squeezing_db", self.squeezing_db.len()),
            ("d", self.d.len()),
            ("chi", self.chi.len()),
            ("squeeze_step", self.squeeze_step.len()),
        ] {
            if len == 0 {
                empty.push(name);
            }
        }
        if !empty.is_empty() {
            return Err(Error::Config(format!("empty grid axes: {}", empty.join(", "))));
        }
        if self.shots < MIN_SHOTS {
            return Err(Error::Config(format!("shots must be >= {MIN_SHOTS}, got {}", self.shots)));
        }
        for p in self.points() {
            self.config(&p).validate()?;
        }
        Ok(())
    }

    /// Grid points in output order: distance, then χ, then step, then squeezing.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for &d in &self.d {
            for &chi in &self.chi {
                for &squeeze_step in &self.squeeze_step {
                    for &squeezing_db in &self.squeezing_db {
                        out.push(GridPoint { squeezing_db, d, chi, squeeze_step });
                    }
                }
            }
        }
        out
    }

    pub fn config(&self, p: &GridPoint) -> SimConfig {
        SimConfig {
            d: p.d,
            rounds: self.rounds.unwrap_or(p.d),
            squeezing_db: p.squeezing_db,
            chi: p.chi,
            squeeze_step: p.squeeze_step,
            shots: self.shots,
            seed: self.seed,
            weights_mode: self.weights_mode,
            identity_noise: self.identity_noise,
        }
    }
}

fn journal_key(p: &GridPoint) -> (u64, usize, u64, usize) {
    (p.squeezing_db.to_bits(), p.d, p.chi.to_bits(), p.squeeze_step)
}

fn read_journal(path: &Path) -> Result<HashMap<(u64, usize, u64, usize), SweepRow>> {
    let mut out = HashMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(e.into()),
    };
    let lines: Vec<String> = BufReader::new(file).lines().collect::<std::io::Result<_>>()?;
    let n = lines.len();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<SweepRow>(line) {
            Ok(row) => {
                out.insert(journal_key(&row.point()), row);
            }
            // A torn final line is what an interrupted append leaves behind.
            Err(_) if i + 1 == n => {}
            Err(e) => return Err(Error::Config(format!("corrupt journal line {}: {e}", i + 1))),
        }
    }
    Ok(out)
}

/// Options controlling a sweep's journal.
#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    pub journal: Option<PathBuf>,
    pub resume: bool,
    /// Stop after this many newly computed rows (for interruption tests).
    pub max_new_rows: Option<usize>,
}

pub fn sweep(grid: &SweepGrid, opts: &SweepOptions) -> Result<Vec<SweepRow>> {
    grid.validate()?;
    let done = match (&opts.journal, opts.resume) {
        (Some(path), true) => read_journal(path)?,
        _ => HashMap::new(),
    };
    let mut journal = match &opts.journal {
        // Rewriting drops a torn trailing line so appends start on a fresh line.
        Some(path) if opts.resume => {
            rewrite_clean(path, &done, grid)?;
            Some(OpenOptions::new().append(true).open(path)?)
        }
        Some(path) => Some(File::create(path)?),
        None => None,
    };
    let mut rows = Vec::new();
    let mut fresh = 0usize;
    for p in grid.points() {
        let cfg = grid.config(&p);
        if let Some(row) = done.get(&journal_key(&p)).filter(|r| r.shots == cfg.shots) {
            rows.push(row.clone());
            continue;
        }
        if opts.max_new_rows.is_some_and(|m| fresh >= m) {
            break;
        }
        let est = Experiment::with_calibration_shots(&cfg, grid.calibration_shots)?.estimate(cfg.shots)?;
        let row = SweepRow::new(&p, &est);
        if let Some(f) = journal.as_mut() {
            let line = serde_json::to_string(&row).map_err(|e| Error::Config(e.to_string()))?;
            writeln!(f, "{line}")?;
            f.flush()?;
        }
        rows.push(row);
        fresh += 1;
    }
    Ok(rows)
}

fn rewrite_clean(path: &Path, done: &HashMap<(u64, usize, u64, usize), SweepRow>, grid: &SweepGrid) -> Result<()> {
    let mut f = File::create(path)?;
    for p in grid.points() {
        if let Some(row) = done.get(&journal_key(&p)) {
            let line = serde_json::to_string(row).map_err(|e| Error::Config(e.to_string()))?;
            writeln!(f, "{line}")?;
        }
    }
    Ok(())
}

pub fn write_csv<W: Write>(mut out: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}

/// Parses CSV produced by [`write_csv`].
pub fn read_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Config("unexpected CSV header".into()));
    }
    let bad = |l: &str| Error::Config(format!("malformed CSV row {l:?}"));
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 9 {
                return Err(bad(l));
            }
            let num = |i: usize| f[i].parse::<f64>().map_err(|_| bad(l));
            let int = |i: usize| f[i].parse::<u64>().map_err(|_| bad(l));
            Ok(SweepRow {
                squeezing_db: num(0)?,
                d: int(1)? as usize,
                chi: num(2)?,
                squeeze_step: int(3)? as usize,
                shots: int(4)?,
                logical_errors: int(5)?,
                rate: num(6)?,
                ci_low: num(7)?,
                ci_high: num(8)?,
                x_errors: 0,
                z_errors: 0,
            })
        })
        .collect()
}

/// One distance's rate curve over squeezing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub d: usize,
    pub points: Vec<(f64, f64)>,
}

impl Curve {
    pub fn from_rows<'a>(rows: impl IntoIterator<Item = &'a SweepRow>, d: usize) -> Self {
        let mut points: Vec<(f64, f64)> = rows.into_iter().filter(|r| r.d == d).map(|r| (r.squeezing_db, r.rate)).collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        Curve { d, points }
    }
}

/// Curves of all distances present in `rows`, in ascending distance.
pub fn curves_by_distance(rows: &[SweepRow]) -> Vec<Curve> {
    let mut ds: Vec<usize> = rows.iter().map(|r| r.d).collect();
    ds.sort_unstable();
    ds.dedup();
    ds.into_iter().map(|d| Curve::from_rows(rows, d)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    pub d_a: usize,
    pub d_b: usize,
    pub squeezing_db: f64,
    /// Number of sign changes found; the median one is reported.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdEstimate {
    pub threshold_db: f64,
    pub spread: f64,
    pub crossings: Vec<Crossing>,
    pub no_crossing: Vec<(usize, usize)>,
}

/// Squeezing values where `log a` and `log b` cross, on their shared grid
/// points with nonzero rates.
fn pair_crossings(a: &Curve, b: &Curve) -> Vec<f64> {
    let bmap: HashMap<u64, f64> = b.points.iter().map(|&(s, r)| (s.to_bits(), r)).collect();
    let diffs: Vec<(f64, f64)> = a
        .points
        .iter()
        .filter_map(|&(s, ra)| {
            let rb = *bmap.get(&s.to_bits())?;
            (ra > 0.0 && rb > 0.0).then(|| (s, ra.ln() - rb.ln()))
        })
        .filter(|&(_, g)| g != 0.0)
        .collect();
    let mut out = Vec::new();
    for w in diffs.windows(2) {
        let ((s0, g0), (s1, g1)) = (w[0], w[1]);
        if g0.signum() != g1.signum() {
            out.push(s0 + (s1 - s0) * g0 / (g0 - g1));
        }
    }
    out
}

pub fn find_threshold(curves: &[Curve]) -> Result<ThresholdEstimate> {
    let describe = || {
        curves
            .iter()
            .map(|c| format!("d={} ({} points)", c.d, c.points.len()))
            .collect::<Vec<_>>()
            .join(", ")
    };
    if curves.len() < 2 {
        return Err(Error::NoCrossing(format!("need at least two distances, got {}", describe())));
    }
    if let Some(c) = curves.iter().find(|c| c.points.len() < 4) {
        return Err(Error::NoCrossing(format!("d={} has fewer than 4 points; curves: {}", c.d, describe())));
    }
    let mut crossings = Vec::new();
    let mut no_crossing = Vec::new();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let mut xs = pair_crossings(&curves[i], &curves[j]);
            if xs.is_empty() {
                no_crossing.push((curves[i].d, curves[j].d));
                continue;
            }
            xs.sort_by(f64::total_cmp);
            crossings.push(Crossing {
                d_a: curves[i].d,
                d_b: curves[j].d,
                squeezing_db: xs[(xs.len() - 1) / 2],
                count: xs.len(),
            });
        }
    }
    if crossings.is_empty() {
        return Err(Error::NoCrossing(format!("no curve pair crosses; curves: {}", describe())));
    }
    let vals: Vec<f64> = crossings.iter().map(|c| c.squeezing_db).collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(ThresholdEstimate { threshold_db: mean, spread: max - min, crossings, no_crossing })
}

/// Threshold of one (χ, step) setting, or why none was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SettingThreshold {
    pub chi: f64,
    pub squeeze_step: usize,
    #[serde(flatten)]
    pub estimate: Option<ThresholdEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSummary {
    pub format_version: u32,
    pub settings: Vec<SettingThreshold>,
    /// Setting with the lowest threshold, if any has one.
    pub minimal: Option<(f64, usize)>,
}

/// Groups rows by (χ, step) in first-appearance order and extracts a
/// threshold for each group.
pub fn thresholds_by_setting(rows: &[SweepRow]) -> ThresholdSummary {
    let mut keys: Vec<(f64, usize)> = Vec::new();
    for r in rows {
        if !keys.iter().any(|&(c, s)| c.to_bits() == r.chi.to_bits() && s == r.squeeze_step) {
            keys.push((r.chi, r.squeeze_step));
        }
    }
    let settings: Vec<SettingThreshold> = keys
        .iter()
        .map(|&(chi, step)| {
            let group: Vec<SweepRow> =
                rows.iter().filter(|r| r.chi.to_bits() == chi.to_bits() && r.squeeze_step == step).cloned().collect();
            match find_threshold(&curves_by_distance(&group)) {
                Ok(t) => SettingThreshold { chi, squeeze_step: step, estimate: Some(t), error: None },
                Err(e) => SettingThreshold { chi, squeeze_step: step, estimate: None, error: Some(e.to_string()) },
            }
        })
        .collect();
    let minimal = settings
        .iter()
        .filter_map(|s| s.estimate.as_ref().map(|t| (s.chi, s.squeeze_step, t.threshold_db)))
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .map(|(c, s, _)| (c, s));
    ThresholdSummary { format_version: 1, settings, minimal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn synthetic(d: usize, t: f64) -> Curve {
        let points = (0..16).map(|i| 10.0 + 0.25 * i as f64).map(|s| (s, 10f64.powf(-(s - t) * d as f64))).collect();
        Curve { d, points }
    }

    #[test]
    fn synthetic_crossing() {
        let curves = [synthetic(3, 12.0), synthetic(5, 12.0), synthetic(7, 12.0)];
        let t = find_threshold(&curves).unwrap();
        assert!((t.threshold_db - 12.0).abs() < 1e-6);
        assert!(t.spread < 1e-6);
        assert_eq!(t.crossings.len(), 3);
    }

    #[test]
    fn identical_curves_have_no_crossing() {
        let c = synthetic(3, 12.0);
        let mut c2 = c.clone();
        c2.d = 5;
        assert!(matches!(find_threshold(&[c, c2]), Err(Error::NoCrossing(_))));
        assert!(find_threshold(&[synthetic(3, 12.0)]).is_err());
    }

    #[test]
    fn wilson_contains_rate() {
        for (k, n) in [(0, 100), (1, 100), (50, 100), (100, 100), (3, 100000)] {
            let (lo, hi) = wilson_interval(k, n, WILSON_Z);
            let p = k as f64 / n as f64;
            assert!(lo <= p && p <= hi && lo >= 0.0 && hi <= 1.0);
        }
        let (lo, hi) = wilson_interval(50, 100, WILSON_Z);
        // Reference values of the 95% Wilson interval for 50/100.
        assert!((lo - 0.403_831_7).abs() < 1e-6 && (hi - 0.596_168_3).abs() < 1e-6);
    }

    #[test]
    fn wilson_coverage() {
        let mut rng = shot_rng(3, Domain::Oracle, 0);
        for &p in &[0.05, 0.2, 0.5] {
            let n = 500u64;
            let covered = (0..1000)
                .filter(|_| {
                    let k = (0..n).filter(|_| rng.random_bool(p)).count() as u64;
                    let (lo, hi) = wilson_interval(k, n, WILSON_Z);
                    lo <= p && p <= hi
                })
                .count();
            assert!((930..=970).contains(&covered), "p={p}: coverage {covered}/1000");
        }
    }

    #[test]
    fn noiseless_rate_is_zero() {
        for (chi, s) in [(1.0, 0), (1.0, 4), (2.0, 4)] {
            let cfg = SimConfig { shots: 200, ..SimConfig::new(3, f64::INFINITY).with_squeeze(chi, s) };
            let est = estimate_logical_rate(&cfg).unwrap();
            assert_eq!(est.logical_errors, 0);
            assert_eq!(est.ci_low, 0.0);
        }
        let cfg = SimConfig { shots: 10, ..SimConfig::new(3, 10.0) };
        assert!(estimate_logical_rate(&cfg).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let row = SweepRow {
            squeezing_db: 12.25,
            d: 5,
            chi: 1.5,
            squeeze_step: 4,
            shots: 1000,
            logical_errors: 7,
            rate: 0.007,
            ci_low: 0.003,
            ci_high: 0.014,
            x_errors: 0,
            z_errors: 0,
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, std::slice::from_ref(&row)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(read_csv(&text).unwrap(), vec![row]);
    }

    #[test]
    fn grid_validation() {
        let grid = SweepGrid {
            squeezing_db: vec![],
            d: vec![3],
            chi: vec![1.0],
            squeeze_step: vec![0],
            shots: 100,
            seed: 1,
            rounds: None,
            weights_mode: WeightsMode::Uniform,
            identity_noise: false,
            calibration_shots: 1000,
        };
        assert!(matches!(grid.validate(), Err(Error::Config(_))));
        let ok = SweepGrid { squeezing_db: vec![10.0, 11.0], squeeze_step: vec![3, 4], chi: vec![2.0], ..grid };
        let pts = ok.points();
        assert_eq!(pts.len(), 4);
        assert_eq!((pts[0].squeeze_step, pts[0].squeezing_db), (3, 10.0));
        assert_eq!((pts[3].squeeze_step, pts[3].squeezing_db), (4, 11.0));
    }
}
