//! Acceptance criteria A1–A9. Runs as a plain binary so every criterion
//! prints exactly one PASS/FAIL line whether or not output is captured.
//!
//! `cargo test -p gkpsim --test acceptance -- A6 A7` runs a subset.

use std::fmt::Write as _;
use std::process::Command;
use std::time::Instant;

use gkpsim::decoder::check::oracle_check;
use gkpsim::decoder::DecoderPair;
use gkpsim::gaussian::lattice::{build_lattice_with, reduce_macronode, BuildOptions, Dims};
use gkpsim::gaussian::{nullifier_variances, state_adjacency};
use gkpsim::gkp::{bin_parity, logical_flip_probability, sqrt_pi, GkpLattice, Quadrature};
use gkpsim::noise::{detection_events, Injection, ShotSimulator, SimConfig, WeightsMode};
use gkpsim::rng::{shot_rng, Domain};
use gkpsim::surface::{build_layout, StabKind};
use gkpsim::threshold::{
    curves_by_distance, find_threshold, sweep, wilson_interval, Experiment, RateEstimate, SweepGrid, SweepOptions,
    SweepRow, ThresholdEstimate, WILSON_Z,
};
use rand_distr::{Distribution, StandardNormal};

const SEED: u64 = 20_231_104;

const A1_TARGET_DB: f64 = 12.4;
const A1_TOL_DB: f64 = 0.8;
const A2_TARGET_DB: f64 = 11.5;
const A2_TOL_DB: f64 = 0.8;
const A2_MIN_GAIN_DB: f64 = 0.3;
const THRESHOLD_SHOTS: u64 = 20_000;
/// Ordering comparisons in A3 resolve to one grid step.
const A3_RESOLUTION_DB: f64 = 0.25;
const A4_SHOTS: u64 = 50_000;
const A5_SHOTS: u64 = 100_000;
const A5_EXT_MAX_SHOTS: u64 = 1_000_000;
const A5_EXT_RANGE: (f64, f64) = (1e-6, 1e-4);
const A6_INSTANCES: usize = 500;
const A7_SAMPLES: u64 = 400_000;
const A8_TOL: f64 = 1e-9;
const A9_LIMIT_SECS: f64 = 60.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn grid_range(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

fn grid(db: Vec<f64>, d: Vec<usize>, chi: Vec<f64>, steps: Vec<usize>, shots: u64) -> SweepGrid {
    SweepGrid {
        squeezing_db: db,
        d,
        chi,
        squeeze_step: steps,
        shots,
        seed: SEED,
        rounds: None,
        weights_mode: WeightsMode::Uniform,
        identity_noise: false,
        calibration_shots: 0,
    }
}

fn run_grid(g: &SweepGrid) -> Vec<SweepRow> {
    sweep(g, &SweepOptions::default()).expect("sweep")
}

fn threshold_of(rows: &[SweepRow], chi: f64, step: usize) -> Result<ThresholdEstimate, String> {
    let group: Vec<SweepRow> = rows.iter().filter(|r| r.chi == chi && r.squeeze_step == step).cloned().collect();
    find_threshold(&curves_by_distance(&group)).map_err(|e| e.to_string())
}

fn describe(t: &Result<ThresholdEstimate, String>) -> String {
    match t {
        Ok(t) => {
            let xs: Vec<String> =
                t.crossings.iter().map(|c| format!("{}/{}@{:.2}", c.d_a, c.d_b, c.squeezing_db)).collect();
            format!("{:.2} dB [{}]", t.threshold_db, xs.join(" "))
        }
        Err(e) => format!("none ({e})"),
    }
}

fn rate_table(rows: &[SweepRow]) -> String {
    let mut s = String::new();
    for r in rows {
        let _ = write!(s, " d{}:{:.2}dB={:.4}", r.d, r.squeezing_db, r.rate);
    }
    s
}

fn a1() -> Outcome {
    let g = grid(grid_range(10.5, 14.0, 0.25), vec![3, 5, 7], vec![1.0], vec![0], THRESHOLD_SHOTS);
    let rows = run_grid(&g);
    eprintln!("A1 rates:{}", rate_table(&rows));
    let t = threshold_of(&rows, 1.0, 0);
    let pass = t.as_ref().is_ok_and(|t| (t.threshold_db - A1_TARGET_DB).abs() <= A1_TOL_DB);
    outcome(pass, format!("threshold {} (want {A1_TARGET_DB} ± {A1_TOL_DB})", describe(&t)))
}

fn a2() -> Outcome {
    let g = grid(grid_range(10.0, 13.5, 0.25), vec![3, 5, 7], vec![2.0], vec![4, 0], THRESHOLD_SHOTS);
    let rows = run_grid(&g);
    eprintln!("A2 rates:{}", rate_table(&rows));
    let t4 = threshold_of(&rows, 2.0, 4);
    let t0 = threshold_of(&rows, 2.0, 0);
    let abs_ok = t4.as_ref().is_ok_and(|t| (t.threshold_db - A2_TARGET_DB).abs() <= A2_TOL_DB);
    let rel_ok = match (&t4, &t0) {
        (Ok(a), Ok(b)) => a.threshold_db <= b.threshold_db - A2_MIN_GAIN_DB,
        _ => false,
    };
    outcome(
        abs_ok && rel_ok,
        format!(
            "s=4: {} (want {A2_TARGET_DB} ± {A2_TOL_DB}); s=0: {}; gain >= {A2_MIN_GAIN_DB} dB: {rel_ok}",
            describe(&t4),
            describe(&t0)
        ),
    )
}

fn a3() -> Outcome {
    let db = grid_range(10.0, 13.5, 0.25);
    let rows2 = run_grid(&grid(db.clone(), vec![3, 5], vec![2.0], vec![0, 1, 2, 3, 4], THRESHOLD_SHOTS));
    let rows3 = run_grid(&grid(db, vec![3, 5], vec![3.0], vec![0, 1, 2], THRESHOLD_SHOTS));
    let t2: Vec<_> = (0..5).map(|s| threshold_of(&rows2, 2.0, s)).collect();
    let t3: Vec<_> = (0..3).map(|s| threshold_of(&rows3, 3.0, s)).collect();
    let v = |t: &Result<ThresholdEstimate, String>| t.as_ref().ok().map(|t| t.threshold_db);
    let res = A3_RESOLUTION_DB;
    let chi2 = match (v(&t2[0]), v(&t2[1]), v(&t2[2]), v(&t2[3]), v(&t2[4])) {
        (Some(s0), Some(s1), Some(s2), Some(s3), Some(s4)) => s4 <= s3 + res && s3 < s0 && s0 <= s1.min(s2) + res,
        _ => false,
    };
    let chi3 = match (v(&t3[0]), v(&t3[1]), v(&t3[2])) {
        (Some(s0), Some(s1), Some(s2)) => s1 > s0 && s2 > s0,
        _ => false,
    };
    let list = |ts: &[Result<ThresholdEstimate, String>]| {
        ts.iter().enumerate().map(|(s, t)| format!("s{s}={}", describe(t))).collect::<Vec<_>>().join("; ")
    };
    outcome(chi2 && chi3, format!("chi=2 ordering {chi2}: {}; chi=3 steps 1,2 above s=0 {chi3}: {}", list(&t2), list(&t3)))
}

fn estimate(cfg: &SimConfig, shots: u64) -> RateEstimate {
    Experiment::new(cfg).expect("experiment").estimate(shots).expect("estimate")
}

fn a4() -> Outcome {
    let chis = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5];
    let est: Vec<RateEstimate> = chis
        .iter()
        .map(|&chi| {
            let mut cfg = SimConfig::new(5, 12.0).with_squeeze(chi, 4);
            cfg.seed = SEED;
            estimate(&cfg, A4_SHOTS)
        })
        .collect();
    let argmin = (0..chis.len()).min_by(|&a, &b| est[a].rate.total_cmp(&est[b].rate)).unwrap();
    let at2 = &est[2];
    let separated = at2.ci_high < est[0].ci_low && at2.ci_high < est[5].ci_low;
    let table: Vec<String> = chis
        .iter()
        .zip(&est)
        .map(|(c, e)| format!("chi={c}:{:.4}[{:.4},{:.4}]", e.rate, e.ci_low, e.ci_high))
        .collect();
    outcome(chis[argmin] == 2.0 && separated, format!("argmin chi={}; {}", chis[argmin], table.join(" ")))
}

fn a5() -> Outcome {
    let est: Vec<RateEstimate> = [3, 5, 7]
        .iter()
        .map(|&d| {
            let mut cfg = SimConfig::new(d, 13.0).with_squeeze(2.0, 4);
            cfg.seed = SEED;
            estimate(&cfg, A5_SHOTS)
        })
        .collect();
    let ordered = est[0].ci_low > est[1].ci_high && est[1].ci_low > est[2].ci_high;
    let table: Vec<String> = [3, 5, 7]
        .iter()
        .zip(&est)
        .map(|(d, e)| format!("d={d}:{:.5}[{:.5},{:.5}]", e.rate, e.ci_low, e.ci_high))
        .collect();
    outcome(ordered, format!("13 dB, chi=2, s=4: {}", table.join(" ")))
}

/// d=13 at 15 dB. Shots run in order and stop once the Wilson interval lies
/// entirely outside the accepted range or the shot budget is spent.
fn a5_extended() -> Outcome {
    let start = Instant::now();
    let mut cfg = SimConfig::new(13, 15.0).with_squeeze(2.0, 4);
    cfg.seed = SEED;
    let mut exp = Experiment::new(&cfg).expect("experiment");
    let mut scratch = exp.scratch();
    let (mut shots, mut fails) = (0u64, 0u64);
    let (lo_ok, hi_ok) = A5_EXT_RANGE;
    let mut stopped_early = false;
    while shots < A5_EXT_MAX_SHOTS {
        let (x, z) = exp.run_shot(shots, &mut scratch).expect("shot");
        fails += (x || z) as u64;
        shots += 1;
        if shots % 1000 == 0 {
            let (lo, hi) = wilson_interval(fails, shots, WILSON_Z);
            if lo > hi_ok || hi < lo_ok {
                stopped_early = true;
                break;
            }
        }
    }
    let rate = fails as f64 / shots as f64;
    let (lo, hi) = wilson_interval(fails, shots, WILSON_Z);
    let pass = (lo_ok..=hi_ok).contains(&rate);
    outcome(
        pass,
        format!(
            "d=13, 15 dB: rate {rate:.3e} [{lo:.3e},{hi:.3e}] over {shots} shots{} in {:.1}s (accept [{lo_ok:e}, {hi_ok:e}])",
            if stopped_early { " (stopped early)" } else { "" },
            start.elapsed().as_secs_f64()
        ),
    )
}

fn a6() -> Outcome {
    let report = oracle_check(A6_INSTANCES, SEED, 5_000).expect("oracle check");
    let pass = report.instances() == A6_INSTANCES && report.mismatches() == 0;
    let cases: Vec<String> = report
        .cases
        .iter()
        .map(|c| format!("d{} {:?} {:?}: {}/{}", c.d, c.weights, c.kind, c.instances - c.mismatches, c.instances))
        .collect();
    outcome(pass, format!("{} mismatches in {} instances; {}", report.mismatches(), report.instances(), cases.join(", ")))
}

fn a7() -> Outcome {
    let mut notes = Vec::new();
    // Zero noise.
    let mut zero_ok = true;
    for d in [3, 5, 7] {
        let layout = build_layout(d).unwrap();
        for (chi, s) in [(1.0, 0), (2.0, 2), (2.0, 4), (3.0, 3)] {
            let cfg = SimConfig::new(d, f64::INFINITY).with_squeeze(chi, s);
            let mut sim = ShotSimulator::new(&cfg, &layout).unwrap();
            for shot in 0..20 {
                let (rec, frame) = sim.run(&mut shot_rng(SEED, Domain::Decode, shot));
                zero_ok &= rec.is_all_zero() && frame.is_trivial();
            }
            zero_ok &= estimate(&cfg, 500).logical_errors == 0;
        }
    }
    notes.push(format!("zero-noise {zero_ok}"));

    // Single √π shifts on every bulk qubit and round.
    let mut inject_ok = true;
    let mut injected = 0;
    for d in [3, 5] {
        let layout = build_layout(d).unwrap();
        for (chi, s) in [(1.0, 0), (2.0, 4)] {
            let cfg = SimConfig::new(d, f64::INFINITY).with_squeeze(chi, s);
            let mut sim = ShotSimulator::new(&cfg, &layout).unwrap();
            let mut dec = DecoderPair::new(&layout, d, WeightsMode::Uniform, None).unwrap();
            for q in 0..layout.num_data() {
                for (kind, dx, dp) in [(StabKind::Z, sqrt_pi(), 0.0), (StabKind::X, 0.0, sqrt_pi())] {
                    let adjacent = layout.plaquettes_of(kind, q);
                    if adjacent.len() != 2 {
                        continue;
                    }
                    for round in 0..d {
                        let inj = [Injection { round, qubit: q, dx, dp }];
                        let (rec, mut frame) = sim.run_with_injections(&mut shot_rng(SEED, Domain::Oracle, 0), &inj);
                        let (z, x) = detection_events(&rec);
                        let (hit, other) = if kind == StabKind::Z { (&z, &x) } else { (&x, &z) };
                        let predicted = hit.len() == 2
                            && other.is_empty()
                            && hit.iter().all(|e| e.round == round && adjacent.contains(&e.ancilla));
                        dec.z.decode(&z, &mut frame).unwrap();
                        dec.x.decode(&x, &mut frame).unwrap();
                        inject_ok &= predicted && frame.logical_flips(&layout) == (false, false);
                        injected += 1;
                    }
                }
            }
        }
    }
    notes.push(format!("injection {inject_ok} ({injected} cases)"));

    // Bin-flip frequency against the analytic probability.
    let lattice = GkpLattice::unsqueezed(Quadrature::X);
    let mut mc_ok = true;
    for sigma in [0.1, 0.2, 0.3] {
        let p = logical_flip_probability(sigma, &lattice).unwrap();
        let mut rng = shot_rng(SEED, Domain::Oracle, (sigma * 1000.0) as u64);
        let flips: u64 = (0..A7_SAMPLES)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                bin_parity(sigma * z, &lattice) as u64
            })
            .sum();
        let f = flips as f64 / A7_SAMPLES as f64;
        let sd = (p * (1.0 - p) / A7_SAMPLES as f64).sqrt();
        let ok = (f - p).abs() <= 3.0 * sd;
        mc_ok &= ok;
        notes.push(format!("sigma={sigma}: mc {f:.3e} vs {p:.3e}"));
    }
    outcome(zero_ok && inject_ok && mc_ok, notes.join("; "))
}

fn canonical_rhg_cell() -> Vec<Vec<usize>> {
    let mut pts = Vec::new();
    for x in 0..3i32 {
        for y in 0..3i32 {
            for z in 0..3i32 {
                let odd = [x, y, z].iter().filter(|c| *c % 2 == 1).count();
                if odd == 1 || odd == 2 {
                    pts.push([x, y, z]);
                }
            }
        }
    }
    (0..pts.len())
        .map(|i| {
            (0..pts.len()).filter(|&j| (0..3).map(|k| (pts[i][k] - pts[j][k]).abs()).sum::<i32>() == 1).collect()
        })
        .collect()
}

fn isomorphic(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    fn extend(a: &[Vec<usize>], b: &[Vec<usize>], map: &mut [usize], used: &mut [bool], i: usize) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if !used[j] && a[i].len() == b[j].len() && (0..i).all(|k| a[i].contains(&k) == b[j].contains(&map[k])) {
                map[i] = j;
                used[j] = true;
                if extend(a, b, map, used, i + 1) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    a.len() == b.len() && extend(a, b, &mut vec![0; a.len()], &mut vec![false; b.len()], 0)
}

fn a8() -> Outcome {
    let opts = BuildOptions { check_each_step: true, ..BuildOptions::default() };
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for dims in [Dims::D1, Dims::D2, Dims::D3] {
        for r in [0.5, 1.0, 1.5] {
            for n in [1, 2] {
                match build_lattice_with(r, n, 3, dims, &opts) {
                    Ok((state, graph)) => {
                        let want = (-2.0 * r).exp() / 2.0;
                        for v in nullifier_variances(&state, &graph).unwrap() {
                            worst = worst.max((v - want).abs());
                        }
                        if (state_adjacency(&state).unwrap().adjacency() - graph.adjacency()).amax() > A8_TOL {
                            errors.push(format!("{dims:?} r={r}: tracked graph differs from the state"));
                        }
                    }
                    Err(e) => errors.push(format!("{dims:?} r={r} N={n}: {e}")),
                }
            }
        }
    }
    let cell = canonical_rhg_cell();
    let mut rhg_ok = true;
    for r in [0.5, 1.0, 1.5] {
        match build_lattice_with(r, 1, 4, Dims::MacronodeRhg, &opts).and_then(|(s, g)| reduce_macronode(&s, &g)) {
            Ok((reduced, _)) => {
                let pure = reduced.check_physical(A8_TOL, true).is_ok();
                let g = state_adjacency(&reduced).unwrap();
                let mut adj = vec![Vec::new(); g.num_nodes()];
                let edges = g.edges();
                for &(a, b, _) in &edges {
                    adj[a].push(b);
                    adj[b].push(a);
                }
                let w = edges.first().map_or(0.0, |e| e.2.abs());
                let uniform = edges.iter().all(|e| (e.2.abs() - w).abs() < A8_TOL);
                rhg_ok &= pure && uniform && isomorphic(&adj, &cell);
            }
            Err(e) => {
                rhg_ok = false;
                errors.push(format!("rhg r={r}: {e}"));
            }
        }
    }
    let pass = worst <= A8_TOL && rhg_ok && errors.is_empty();
    outcome(
        pass,
        format!("max nullifier deviation {worst:.2e} (tol {A8_TOL:e}); RHG cell isomorphic {rhg_ok}; {}", errors.join("; ")),
    )
}

fn a9() -> Outcome {
    let dir = std::env::temp_dir().join(format!("gkpsim-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("grid.json");
    let g = grid(vec![11.0, 12.5, 14.0], vec![3, 5], vec![1.0, 2.0], vec![0, 4], 2000);
    std::fs::write(&cfg, serde_json::to_string(&g).unwrap()).unwrap();
    let bin = env!("CARGO_BIN_EXE_gkpsim");
    let mut outs = Vec::new();
    for jobs in ["1", "8"] {
        let out = dir.join(format!("jobs{jobs}.csv"));
        let status = Command::new(bin)
            .args(["--jobs", jobs, "sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
            .status()
            .unwrap();
        outs.push(status.success().then(|| std::fs::read(&out).unwrap()));
    }
    let identical = outs[0].is_some() && outs[0] == outs[1];
    let start = Instant::now();
    let sim = Command::new(bin)
        .args(["simulate", "--distance", "5", "--squeezing-db", "12", "--shots", "10000", "--seed", &SEED.to_string()])
        .output()
        .unwrap();
    let secs = start.elapsed().as_secs_f64();
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let fast = sim.status.success() && secs < A9_LIMIT_SECS;
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        identical && fast,
        format!("jobs 1 vs 8 byte-identical {identical}; d=5 10k shots {secs:.1}s on {cores} core(s) (limit {A9_LIMIT_SECS}s)"),
    )
}

fn main() {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
        ("A9", a9),
        ("A4", a4),
        ("A5", a5),
        ("A5-extended", a5_extended),
        ("A3", a3),
        ("A2", a2),
        ("A1", a1),
    ];
    let mut failed = Vec::new();
    let mut ran = 0;
    for (id, f) in criteria {
        if !filters.is_empty() && !filters.iter().any(|x| id == x || id.starts_with(&format!("{x}-"))) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        ran += 1;
        println!("{id} {}: {} ({:.0}s)", if o.pass { "PASS" } else { "FAIL" }, o.detail, start.elapsed().as_secs_f64());
        if !o.pass {
            failed.push(id);
        }
    }
    println!("acceptance: {} of {ran} criteria passed{}", ran - failed.len(), if failed.is_empty() { String::new() } else { format!("; failing: {}", failed.join(", ")) });
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
