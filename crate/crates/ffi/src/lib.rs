//! C ABI over gkpsim.
//!
//! Objects are opaque handles created by `*_new`/`*_build_*` functions and
//! released by the matching `*_free`. Every fallible call returns a
//! [`GkpsimStatus`]; on failure [`gkpsim_last_error`] describes it. No call
//! unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gkpsim::error::Error;
use gkpsim::gaussian::lattice::{build_lattice_with, reduce_macronode, BuildOptions, Dims, DEFAULT_MODE_CAP};
use gkpsim::gaussian::{build_oeg, nullifier_variances, ClusterGraph, ClusterReport, GaussianState, PairChoice};
use gkpsim::gkp::{logical_flip_probability, GkpLattice, Quadrature};
use gkpsim::noise::{SimConfig, WeightsMode};
use gkpsim::threshold::Experiment;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GkpsimStatus {
    Ok = 0,
    Domain = 1,
    Contract = 2,
    Singular = 3,
    Resource = 4,
    NoCrossing = 5,
    Config = 6,
    Io = 7,
    NullPointer = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GkpsimWeights {
    Uniform = 0,
    Calibrated = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GkpsimDims {
    D1 = 0,
    D2 = 1,
    D3 = 2,
    MacronodeRhg = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GkpsimPair {
    Epr = 0,
    Gkp = 1,
    Hybrid = 2,
}

/// Simulation parameters; mirrors the `simulate` command flags.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GkpsimSimConfig {
    pub distance: u32,
    pub rounds: u32,
    pub squeezing_db: f64,
    pub chi: f64,
    pub squeeze_step: u32,
    pub seed: u64,
    pub weights: GkpsimWeights,
    pub identity_noise: bool,
    pub calibration_shots: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GkpsimRate {
    pub shots: u64,
    pub logical_errors: u64,
    pub x_errors: u64,
    pub z_errors: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GkpsimEdge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

pub struct GkpsimExperiment {
    inner: Experiment,
}

pub struct GkpsimCluster {
    state: GaussianState,
    graph: ClusterGraph,
    structure: &'static str,
    r: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GkpsimStatus {
    match e {
        Error::Domain(_) => GkpsimStatus::Domain,
        Error::Contract(_) => GkpsimStatus::Contract,
        Error::Singular(_) => GkpsimStatus::Singular,
        Error::Resource(_) => GkpsimStatus::Resource,
        Error::NoCrossing(_) => GkpsimStatus::NoCrossing,
        Error::Config(_) => GkpsimStatus::Config,
        Error::Io(_) => GkpsimStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), GkpsimStatus>) -> GkpsimStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GkpsimStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            GkpsimStatus::Panic
        }
    }
}

fn fail(e: Error) -> GkpsimStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null() -> GkpsimStatus {
    set_error("null pointer argument".into());
    GkpsimStatus::NullPointer
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gkpsim_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gkpsim_version() -> *const c_char {
    static V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    V.as_ptr().cast()
}

/// Defaults for distance `d`: `d` rounds, χ = 1, no squeezing step,
/// uniform weights.
#[no_mangle]
pub extern "C" fn gkpsim_sim_config_default(distance: u32, squeezing_db: f64) -> GkpsimSimConfig {
    GkpsimSimConfig {
        distance,
        rounds: distance,
        squeezing_db,
        chi: 1.0,
        squeeze_step: 0,
        seed: 0,
        weights: GkpsimWeights::Uniform,
        identity_noise: false,
        calibration_shots: gkpsim::decoder::calibrate::DEFAULT_CALIBRATION_SHOTS,
    }
}

/// Odd-bin probability of a centred Gaussian of width `sigma` on a lattice
/// of the given spacing.
///
/// # Safety
/// `out` must be null or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_logical_flip_probability(sigma: f64, spacing: f64, out: *mut f64) -> GkpsimStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let lattice = GkpLattice::new(spacing, Quadrature::X).map_err(fail)?;
        let p = logical_flip_probability(sigma, &lattice).map_err(fail)?;
        *out = p;
        Ok(())
    })
}

/// Builds the decoders (and calibrates, for calibrated weights).
///
/// # Safety
/// `config` must point to a valid config; `out` to writable handle storage.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_experiment_new(
    config: *const GkpsimSimConfig,
    out: *mut *mut GkpsimExperiment,
) -> GkpsimStatus {
    guard(|| {
        if config.is_null() || out.is_null() {
            return Err(null());
        }
        let c = &*config;
        let cfg = SimConfig {
            d: c.distance as usize,
            rounds: c.rounds as usize,
            squeezing_db: c.squeezing_db,
            chi: c.chi,
            squeeze_step: c.squeeze_step as usize,
            shots: 1,
            seed: c.seed,
            weights_mode: match c.weights {
                GkpsimWeights::Uniform => WeightsMode::Uniform,
                GkpsimWeights::Calibrated => WeightsMode::Calibrated,
            },
            identity_noise: c.identity_noise,
        };
        cfg.validate().map_err(fail)?;
        let inner = Experiment::with_calibration_shots(&cfg, c.calibration_shots).map_err(fail)?;
        *out = Box::into_raw(Box::new(GkpsimExperiment { inner }));
        Ok(())
    })
}

/// Estimates the logical error rate from `shots` shots.
///
/// # Safety
/// `exp` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_experiment_estimate(
    exp: *const GkpsimExperiment,
    shots: u64,
    out: *mut GkpsimRate,
) -> GkpsimStatus {
    guard(|| {
        if exp.is_null() || out.is_null() {
            return Err(null());
        }
        let e = (*exp).inner.estimate(shots).map_err(fail)?;
        *out = GkpsimRate {
            shots: e.shots,
            logical_errors: e.logical_errors,
            x_errors: e.x_errors,
            z_errors: e.z_errors,
            rate: e.rate,
            ci_low: e.ci_low,
            ci_high: e.ci_high,
        };
        Ok(())
    })
}

/// # Safety
/// `exp` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_experiment_free(exp: *mut GkpsimExperiment) {
    if !exp.is_null() {
        drop(Box::from_raw(exp));
    }
}

/// Builds a lattice; `mode_cap` 0 selects the default cap. With `reduce`
/// an RHG macronode lattice is reduced to its central modes.
///
/// # Safety
/// `out` must point to writable handle storage.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_cluster_build_lattice(
    r: f64,
    n: usize,
    timebins: usize,
    dims: GkpsimDims,
    reduce: bool,
    mode_cap: usize,
    out: *mut *mut GkpsimCluster,
) -> GkpsimStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let dims = match dims {
            GkpsimDims::D1 => Dims::D1,
            GkpsimDims::D2 => Dims::D2,
            GkpsimDims::D3 => Dims::D3,
            GkpsimDims::MacronodeRhg => Dims::MacronodeRhg,
        };
        let opts = BuildOptions { mode_cap: if mode_cap == 0 { DEFAULT_MODE_CAP } else { mode_cap }, check_each_step: false };
        let (mut state, mut graph) = build_lattice_with(r, n, timebins, dims, &opts).map_err(fail)?;
        let mut structure = match dims {
            Dims::D1 => "d1",
            Dims::D2 => "d2",
            Dims::D3 => "d3",
            Dims::MacronodeRhg => "rhg_macronode",
        };
        if reduce && dims == Dims::MacronodeRhg {
            (state, graph) = reduce_macronode(&state, &graph).map_err(fail)?;
            structure = "rhg";
        }
        *out = Box::into_raw(Box::new(GkpsimCluster { state, graph, structure, r }));
        Ok(())
    })
}

/// # Safety
/// `out` must point to writable handle storage.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_cluster_build_oeg(
    r: f64,
    pair: GkpsimPair,
    j: u32,
    out: *mut *mut GkpsimCluster,
) -> GkpsimStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let choice = match pair {
            GkpsimPair::Epr => PairChoice::Epr,
            GkpsimPair::Gkp => PairChoice::Gkp,
            GkpsimPair::Hybrid => PairChoice::Hybrid,
        };
        let (state, graph) = build_oeg(r, choice, j).map_err(fail)?;
        *out = Box::into_raw(Box::new(GkpsimCluster { state, graph, structure: "oeg", r }));
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_cluster_num_nodes(c: *const GkpsimCluster) -> usize {
    c.as_ref().map_or(0, |c| c.graph.num_nodes())
}

/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_cluster_num_edges(c: *const GkpsimCluster) -> usize {
    c.as_ref().map_or(0, |c| c.graph.edges().len())
}

/// Copies the edges into `out`, which holds `len` entries.
///
/// # Safety
/// `c` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_cluster_edges(c: *const GkpsimCluster, out: *mut GkpsimEdge, len: usize) -> GkpsimStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let edges = c.graph.edges();
        if len < edges.len() {
            set_error(format!("buffer holds {len} edges, need {}", edges.len()));
            return Err(GkpsimStatus::BufferTooSmall);
        }
        for (k, (a, b, weight)) in edges.into_iter().enumerate() {
            *out.add(k) = GkpsimEdge { a, b, weight };
        }
        Ok(())
    })
}

/// Writes one nullifier variance per node into `out` (`len` entries).
///
/// # Safety
/// `c` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_cluster_nullifier_variances(
    c: *const GkpsimCluster,
    out: *mut f64,
    len: usize,
) -> GkpsimStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let v = nullifier_variances(&c.state, &c.graph).map_err(fail)?;
        if len < v.len() {
            set_error(format!("buffer holds {len} values, need {}", v.len()));
            return Err(GkpsimStatus::BufferTooSmall);
        }
        ptr::copy_nonoverlapping(v.as_ptr(), out, v.len());
        Ok(())
    })
}

/// The `cluster-build` JSON document; free with [`gkpsim_string_free`].
///
/// # Safety
/// `c` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_cluster_to_json(c: *const GkpsimCluster, out: *mut *mut c_char) -> GkpsimStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let report = ClusterReport::new(c.structure, c.r, &c.state, &c.graph).map_err(fail)?;
        let text = report.to_json();
        *out = CString::new(text).unwrap_or_default().into_raw();
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_cluster_free(c: *mut GkpsimCluster) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gkpsim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reads a NUL-terminated message; helper for tests and bindings.
///
/// # Safety
/// `p` must be null or a valid C string.
pub unsafe fn message(p: *const c_char) -> Option<String> {
    (!p.is_null()).then(|| CStr::from_ptr(p).to_string_lossy().into_owned())
}
