//! Circuit-level shift-error Monte Carlo for the partially squeezed surface-GKP
//! memory experiment.
//!
//! Each round runs the Z layer then the X layer. A layer prepares fresh noisy
//! ancillas, runs the four gate steps (squeezing the ancillas right before step
//! `s`), and bins the measured ancilla quadrature. After both layers every data
//! qubit goes through teleportation-based GKP correction: its shifts are binned
//! on `√π`, the parities land in the Pauli frame, and fresh residual shifts are
//! drawn.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gkp::{self, sqrt_pi, GkpLattice, NoiseParams, Quadrature};
use crate::surface::{gate_strength, StabKind, SurfaceLayout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum WeightsMode {
    #[default]
    Uniform,
    Calibrated,
}

impl std::str::FromStr for WeightsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(WeightsMode::Uniform),
            "calibrated" => Ok(WeightsMode::Calibrated),
            other => Err(Error::domain(format!("unknown weights mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub d: usize,
    pub rounds: usize,
    pub squeezing_db: f64,
    pub chi: f64,
    pub squeeze_step: usize,
    pub shots: u64,
    pub seed: u64,
    pub weights_mode: WeightsMode,
    /// Add `σ_gate²` noise to data qubits when they idle through the squeeze step.
    #[serde(default)]
    pub identity_noise: bool,
}

impl SimConfig {
    pub fn new(d: usize, squeezing_db: f64) -> Self {
        SimConfig {
            d,
            rounds: d,
            squeezing_db,
            chi: 1.0,
            squeeze_step: 0,
            shots: 10_000,
            seed: 0,
            weights_mode: WeightsMode::Uniform,
            identity_noise: false,
        }
    }

    pub fn with_squeeze(mut self, chi: f64, squeeze_step: usize) -> Self {
        self.chi = chi;
        self.squeeze_step = squeeze_step;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d.is_multiple_of(2) || !(3..=crate::surface::MAX_DISTANCE).contains(&self.d) {
            return Err(Error::domain(format!("distance must be odd and in 3..=25, got {}", self.d)));
        }
        if self.rounds == 0 {
            return Err(Error::domain("rounds must be >= 1"));
        }
        if self.squeezing_db.is_nan() || self.squeezing_db == f64::NEG_INFINITY {
            return Err(Error::domain(format!("invalid squeezing {}", self.squeezing_db)));
        }
        if !(self.chi >= 1.0 && self.chi.is_finite()) {
            return Err(Error::domain(format!("chi must be >= 1, got {}", self.chi)));
        }
        if self.squeeze_step > 4 {
            return Err(Error::domain(format!("squeeze step must be in 0..=4, got {}", self.squeeze_step)));
        }
        if self.shots == 0 {
            return Err(Error::domain("shots must be >= 1"));
        }
        Ok(())
    }

    pub fn noise(&self) -> Result<NoiseParams> {
        NoiseParams::from_db(self.squeezing_db)
    }

    /// Spacing of the lattice the ancillas are measured on.
    pub fn ancilla_spacing(&self) -> f64 {
        if self.squeeze_step == 0 {
            sqrt_pi()
        } else {
            self.chi * sqrt_pi()
        }
    }
}

/// Shifts `(δx, δp)` of a set of modes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShiftState {
    pub dx: Vec<f64>,
    pub dp: Vec<f64>,
}

impl ShiftState {
    pub fn zeros(n: usize) -> Self {
        ShiftState { dx: vec![0.0; n], dp: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.dx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dx.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PauliFrame {
    pub n_x: Vec<u8>,
    pub n_z: Vec<u8>,
}

impl PauliFrame {
    pub fn zeros(n: usize) -> Self {
        PauliFrame { n_x: vec![0; n], n_z: vec![0; n] }
    }

    pub fn is_trivial(&self) -> bool {
        self.n_x.iter().chain(&self.n_z).all(|&b| b == 0)
    }

    /// Parity of `n_x` over Z̄ and of `n_z` over X̄: `(x_failure, z_failure)`.
    pub fn logical_flips(&self, layout: &SurfaceLayout) -> (bool, bool) {
        let x = layout.logical_z_support.iter().fold(0, |acc, &q| acc ^ self.n_x[q]) == 1;
        let z = layout.logical_x_support.iter().fold(0, |acc, &q| acc ^ self.n_z[q]) == 1;
        (x, z)
    }
}

/// Syndrome bits for `rounds` noisy rounds followed by one ideal round
/// computed from the final frame. Row `t` of each table is round `t`, with row
/// `rounds` the ideal closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeRecord {
    pub rounds: usize,
    pub n_z: usize,
    pub n_x: usize,
    pub z_bits: Vec<u8>,
    pub x_bits: Vec<u8>,
}

impl SyndromeRecord {
    fn new(rounds: usize, n_z: usize, n_x: usize) -> Self {
        SyndromeRecord {
            rounds,
            n_z,
            n_x,
            z_bits: vec![0; (rounds + 1) * n_z],
            x_bits: vec![0; (rounds + 1) * n_x],
        }
    }

    pub fn num_ancillas(&self, kind: StabKind) -> usize {
        match kind {
            StabKind::Z => self.n_z,
            StabKind::X => self.n_x,
        }
    }

    pub fn bits(&self, kind: StabKind) -> &[u8] {
        match kind {
            StabKind::Z => &self.z_bits,
            StabKind::X => &self.x_bits,
        }
    }

    fn bits_mut(&mut self, kind: StabKind) -> &mut [u8] {
        match kind {
            StabKind::Z => &mut self.z_bits,
            StabKind::X => &mut self.x_bits,
        }
    }

    pub fn bit(&self, kind: StabKind, round: usize, ancilla: usize) -> u8 {
        self.bits(kind)[round * self.num_ancillas(kind) + ancilla]
    }

    pub fn is_all_zero(&self) -> bool {
        self.z_bits.iter().chain(&self.x_bits).all(|&b| b == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DetectionEvent {
    pub ancilla: usize,
    pub round: usize,
}

impl DetectionEvent {
    /// Node index in a matching graph with `n` ancillas per round.
    pub fn node(&self, n: usize) -> usize {
        self.round * n + self.ancilla
    }
}

/// Events of one stabilizer type, sorted by `(round, ancilla)`.
pub fn detection_events_of(record: &SyndromeRecord, kind: StabKind, out: &mut Vec<DetectionEvent>) {
    out.clear();
    let n = record.num_ancillas(kind);
    let bits = record.bits(kind);
    for t in 0..=record.rounds {
        for a in 0..n {
            let prev = if t == 0 { 0 } else { bits[(t - 1) * n + a] };
            if bits[t * n + a] != prev {
                out.push(DetectionEvent { ancilla: a, round: t });
            }
        }
    }
}

/// `(Z events, X events)`.
pub fn detection_events(record: &SyndromeRecord) -> (Vec<DetectionEvent>, Vec<DetectionEvent>) {
    let mut z = Vec::new();
    let mut x = Vec::new();
    detection_events_of(record, StabKind::Z, &mut z);
    detection_events_of(record, StabKind::X, &mut x);
    (z, x)
}

/// A shift added to a data qubit at the start of a round, for tests and
/// fault-injection studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Injection {
    pub round: usize,
    pub qubit: usize,
    pub dx: f64,
    pub dp: f64,
}

#[derive(Debug, Clone, Copy)]
struct Coupling {
    ancilla: u32,
    data: u32,
    sign: f64,
}

#[derive(Debug, Clone)]
struct Layer {
    kind: StabKind,
    steps: [Vec<Coupling>; 4],
    supports: Vec<Vec<u32>>,
}

/// Precomputed schedule plus scratch buffers; reused across shots.
#[derive(Debug, Clone)]
pub struct ShotSimulator {
    config: SimConfig,
    noise: NoiseParams,
    layers: [Layer; 2],
    n_data: usize,
    data: ShiftState,
    anc: ShiftState,
}

impl ShotSimulator {
    pub fn new(config: &SimConfig, layout: &SurfaceLayout) -> Result<Self> {
        config.validate()?;
        if layout.d != config.d {
            return Err(Error::contract(format!("layout distance {} != config distance {}", layout.d, config.d)));
        }
        let noise = config.noise()?;
        let layer = |kind: StabKind| {
            let mut steps: [Vec<Coupling>; 4] = Default::default();
            for (k, step) in layout.schedule.iter().enumerate() {
                for &(id, q) in step.iter().filter(|(id, _)| id.kind == kind) {
                    let sign = layout.plaquette(id).signs[k] as f64;
                    steps[k].push(Coupling { ancilla: id.index as u32, data: q as u32, sign });
                }
            }
            let supports = layout.plaquettes(kind).iter().map(|p| p.support().map(|q| q as u32).collect()).collect();
            Layer { kind, steps, supports }
        };
        let n_data = layout.num_data();
        Ok(ShotSimulator {
            config: config.clone(),
            noise,
            layers: [layer(StabKind::Z), layer(StabKind::X)],
            n_data,
            data: ShiftState::zeros(n_data),
            anc: ShiftState::zeros(layout.z_plaquettes.len().max(layout.x_plaquettes.len())),
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn noise(&self) -> &NoiseParams {
        &self.noise
    }

    pub fn run<R: Rng>(&mut self, rng: &mut R) -> (SyndromeRecord, PauliFrame) {
        self.run_with_injections(rng, &[])
    }

    pub fn run_with_injections<R: Rng>(&mut self, rng: &mut R, injections: &[Injection]) -> (SyndromeRecord, PauliFrame) {
        let rounds = self.config.rounds;
        let n_z = self.layers[0].supports.len();
        let n_x = self.layers[1].supports.len();
        let mut record = SyndromeRecord::new(rounds, n_z, n_x);
        let mut frame = PauliFrame::zeros(self.n_data);
        self.run_into(rng, injections, &mut record, &mut frame);
        (record, frame)
    }

    /// Run one shot into caller-owned buffers, which must have been produced
    /// by this simulator (or have matching dimensions).
    pub fn run_into<R: Rng>(
        &mut self,
        rng: &mut R,
        injections: &[Injection],
        record: &mut SyndromeRecord,
        frame: &mut PauliFrame,
    ) {
        let noise = self.noise;
        let sd_data = noise.sigma_data_sq.sqrt();
        let sd_syn = noise.sigma_syn_sq.sqrt();
        let sd_gate = noise.sigma_gate_sq.sqrt();
        let chi = self.config.chi;
        let s = self.config.squeeze_step;
        let rounds = self.config.rounds;
        let inv_anc_spacing = 1.0 / self.config.ancilla_spacing();
        let inv_data_spacing = 1.0 / sqrt_pi();

        frame.n_x.iter_mut().for_each(|b| *b = 0);
        frame.n_z.iter_mut().for_each(|b| *b = 0);
        fill_gaussian(rng, &mut self.data.dx, sd_data);
        fill_gaussian(rng, &mut self.data.dp, sd_data);

        for t in 0..rounds {
            for inj in injections.iter().filter(|i| i.round == t) {
                self.data.dx[inj.qubit] += inj.dx;
                self.data.dp[inj.qubit] += inj.dp;
            }
            for layer in &self.layers {
                let n = layer.supports.len();
                let (ax, ap) = (&mut self.anc.dx[..n], &mut self.anc.dp[..n]);
                fill_gaussian(rng, ax, sd_syn);
                fill_gaussian(rng, ap, sd_syn);
                let (dx, dp) = (&mut self.data.dx, &mut self.data.dp);
                for k in 1..=4 {
                    let couplings = &layer.steps[k - 1];
                    if k == s {
                        // Z ancillas measure p, X ancillas measure x.
                        let (meas, conj) = match layer.kind {
                            StabKind::Z => (&mut *ap, &mut *ax),
                            StabKind::X => (&mut *ax, &mut *ap),
                        };
                        meas.iter_mut().for_each(|v| *v *= chi);
                        conj.iter_mut().for_each(|v| *v /= chi);
                        if self.config.identity_noise && sd_gate > 0.0 {
                            for c in couplings {
                                let q = c.data as usize;
                                dx[q] += sd_gate * gaussian(rng);
                                dp[q] += sd_gate * gaussian(rng);
                            }
                        }
                    }
                    let g = gate_strength(k, s, chi);
                    let sd = if g == 1.0 { sd_gate } else { (chi * noise.sigma_gate_sq).sqrt() };
                    for c in couplings {
                        let (a, q) = (c.ancilla as usize, c.data as usize);
                        let gs = g * c.sign;
                        match layer.kind {
                            StabKind::Z => {
                                let (xa, xq) = (ax[a], dx[q]);
                                ap[a] += gs * xq;
                                dp[q] += gs * xa;
                            }
                            StabKind::X => {
                                let (pa, pq) = (ap[a], dp[q]);
                                ax[a] -= gs * pq;
                                dx[q] -= gs * pa;
                            }
                        }
                        if sd > 0.0 {
                            ax[a] += sd * gaussian(rng);
                            ap[a] += sd * gaussian(rng);
                            dx[q] += sd * gaussian(rng);
                            dp[q] += sd * gaussian(rng);
                        }
                    }
                }
                let (meas, frame_bits) = match layer.kind {
                    StabKind::Z => (&*ap, &frame.n_x),
                    StabKind::X => (&*ax, &frame.n_z),
                };
                let row = &mut record.bits_mut(layer.kind)[t * n..(t + 1) * n];
                for (a, support) in layer.supports.iter().enumerate() {
                    let m = parity_of(meas[a] * inv_anc_spacing);
                    let f = support.iter().fold(0u8, |acc, &q| acc ^ frame_bits[q as usize]);
                    row[a] = m ^ f;
                }
            }
            for q in 0..self.n_data {
                frame.n_x[q] ^= parity_of(self.data.dx[q] * inv_data_spacing);
                frame.n_z[q] ^= parity_of(self.data.dp[q] * inv_data_spacing);
            }
            fill_gaussian(rng, &mut self.data.dx, sd_data);
            fill_gaussian(rng, &mut self.data.dp, sd_data);
        }

        for layer in &self.layers {
            let n = layer.supports.len();
            let frame_bits = match layer.kind {
                StabKind::Z => &frame.n_x,
                StabKind::X => &frame.n_z,
            };
            let row = &mut record.bits_mut(layer.kind)[rounds * n..(rounds + 1) * n];
            for (a, support) in layer.supports.iter().enumerate() {
                row[a] = support.iter().fold(0u8, |acc, &q| acc ^ frame_bits[q as usize]);
            }
        }
    }
}

/// Bin parity of a shift already expressed in lattice units.
#[inline]
fn parity_of(units: f64) -> u8 {
    (units.round() as i64).rem_euclid(2) as u8
}

#[inline]
fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    rng.sample::<f64, _>(StandardNormal)
}

fn fill_gaussian<R: Rng>(rng: &mut R, out: &mut [f64], sd: f64) {
    if sd == 0.0 {
        out.iter_mut().for_each(|v| *v = 0.0);
    } else {
        out.iter_mut().for_each(|v| *v = sd * gaussian(rng));
    }
}

/// One shot with a fresh simulator. Prefer [`ShotSimulator`] in loops.
pub fn run_shot<R: Rng>(config: &SimConfig, layout: &SurfaceLayout, rng: &mut R) -> Result<(SyndromeRecord, PauliFrame)> {
    Ok(ShotSimulator::new(config, layout)?.run(rng))
}

/// Measured-quadrature lattice used by ancillas under `config`.
pub fn ancilla_lattice(config: &SimConfig, kind: StabKind) -> Result<GkpLattice> {
    let q = match kind {
        StabKind::Z => Quadrature::P,
        StabKind::X => Quadrature::X,
    };
    gkp::GkpLattice::new(config.ancilla_spacing(), q)
}
