//! Edge-probability calibration from decode-free Monte Carlo.
//!
//! Two detectors joined by one edge fire together through that edge or by
//! coincidence. With `⟨u⟩`, `⟨v⟩`, `⟨uv⟩` the empirical firing rates, the edge
//! probability of an independent-edge model is
//! `p = ½ − ½·√(1 − 4(⟨uv⟩ − ⟨u⟩⟨v⟩) / (1 − 2⟨u⟩ − 2⟨v⟩ + 4⟨uv⟩))`.
//! Boundary edges have one detector only and are solved from its marginal.

use rayon::prelude::*;
use serde::Serialize;

use super::{build_matching_graph, ClassProbs, EdgeClass, EdgeProbs, MatchingGraph, WeightsMode};
use crate::error::Result;
use crate::noise::{detection_events_of, ShotSimulator, SimConfig};
use crate::rng::{shot_rng, Domain};
use crate::surface::{StabKind, SurfaceLayout};

pub const DEFAULT_CALIBRATION_SHOTS: u64 = 100_000;

const P_MIN: f64 = 1e-9;
const P_MAX: f64 = 0.5 - 1e-9;

/// Detector firing counts for one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventStats {
    pub shots: u64,
    pub node_counts: Vec<u64>,
    /// Joint firing count per edge; boundary edges stay at 0.
    pub edge_counts: Vec<u64>,
}

impl EventStats {
    fn zeros(graph: &MatchingGraph) -> Self {
        EventStats { shots: 0, node_counts: vec![0; graph.num_nodes()], edge_counts: vec![0; graph.edges.len()] }
    }

    fn merge(mut self, other: EventStats) -> Self {
        self.shots += other.shots;
        self.node_counts.iter_mut().zip(other.node_counts).for_each(|(a, b)| *a += b);
        self.edge_counts.iter_mut().zip(other.edge_counts).for_each(|(a, b)| *a += b);
        self
    }

    pub fn node_rate(&self, node: usize) -> f64 {
        self.node_counts[node] as f64 / self.shots as f64
    }
}

/// Runs `shots` decode-free shots and tallies detector statistics on both
/// graphs. Counts are integer sums, so the result does not depend on how the
/// shots are split over threads.
pub fn collect_event_stats(
    config: &SimConfig,
    layout: &SurfaceLayout,
    graphs: [&MatchingGraph; 2],
    shots: u64,
    domain: Domain,
) -> Result<[EventStats; 2]> {
    let sim = ShotSimulator::new(config, layout)?;
    const CHUNK: u64 = 256;
    let chunks = shots.div_ceil(CHUNK);
    let zero = || [EventStats::zeros(graphs[0]), EventStats::zeros(graphs[1])];
    let stats = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sim = sim.clone();
            let mut acc = zero();
            let mut events = Vec::new();
            let mut fired = [vec![false; graphs[0].num_nodes()], vec![false; graphs[1].num_nodes()]];
            for shot in c * CHUNK..((c + 1) * CHUNK).min(shots) {
                let (record, _) = sim.run(&mut shot_rng(config.seed, domain, shot));
                for (g, kind) in [StabKind::Z, StabKind::X].into_iter().enumerate() {
                    let graph = graphs[g];
                    detection_events_of(&record, kind, &mut events);
                    for e in &events {
                        fired[g][graph.node(e.ancilla, e.round)] = true;
                    }
                    for e in &events {
                        let u = graph.node(e.ancilla, e.round);
                        acc[g].node_counts[u] += 1;
                        for &(v, k) in graph.neighbours(u) {
                            if v > u && v != graph.boundary() && fired[g][v] {
                                acc[g].edge_counts[k] += 1;
                            }
                        }
                    }
                    for e in &events {
                        fired[g][graph.node(e.ancilla, e.round)] = false;
                    }
                    acc[g].shots += 1;
                }
            }
            acc
        })
        .reduce(zero, |[a0, a1], [b0, b1]| [a0.merge(b0), a1.merge(b1)]);
    Ok(stats)
}

/// Probability of an edge between two detectors, or `None` when the sample
/// is too noisy for the formula.
pub fn pairwise_edge_probability(u: f64, v: f64, uv: f64) -> Option<f64> {
    let den = 1.0 - 2.0 * u - 2.0 * v + 4.0 * uv;
    if den <= 0.0 {
        return None;
    }
    let arg = 1.0 - 4.0 * (uv - u * v) / den;
    if !(0.0..=1.0).contains(&arg) {
        return None;
    }
    Some(0.5 - 0.5 * arg.sqrt())
}

/// Per-edge probability estimates, `None` where no estimate is possible.
pub fn edge_probabilities(graph: &MatchingGraph, stats: &EventStats) -> Vec<Option<f64>> {
    let b = graph.boundary();
    let mut probs: Vec<Option<f64>> = graph
        .edges
        .iter()
        .enumerate()
        .map(|(k, e)| {
            (e.v != b && e.u != b).then(|| {
                let uv = stats.edge_counts[k] as f64 / stats.shots as f64;
                pairwise_edge_probability(stats.node_rate(e.u), stats.node_rate(e.v), uv)
            })?
        })
        .collect();
    for (k, e) in graph.edges.iter().enumerate() {
        if e.v != b && e.u != b {
            continue;
        }
        let u = if e.u == b { e.v } else { e.u };
        let mut rest = 1.0;
        for &(_, k2) in graph.neighbours(u) {
            if k2 != k {
                rest *= 1.0 - 2.0 * probs[k2].unwrap_or(0.0);
            }
        }
        let ratio = (1.0 - 2.0 * stats.node_rate(u)) / rest;
        probs[k] = (rest > 0.0 && ratio.is_finite() && ratio <= 1.0 && ratio > 0.0).then_some(0.5 - 0.5 * ratio);
    }
    probs
}

/// Mean estimate per class, clamped into the open interval `(0, 1/2)`.
pub fn class_probabilities(graph: &MatchingGraph, stats: &EventStats) -> ClassProbs {
    let probs = edge_probabilities(graph, stats);
    let mean = |class: EdgeClass| {
        let vals: Vec<f64> = graph
            .edges
            .iter()
            .zip(&probs)
            .filter(|(e, _)| e.class == class)
            .filter_map(|(_, p)| *p)
            .collect();
        let m = if vals.is_empty() { P_MIN } else { vals.iter().sum::<f64>() / vals.len() as f64 };
        m.clamp(P_MIN, P_MAX)
    };
    ClassProbs { space: mean(EdgeClass::Space), boundary: mean(EdgeClass::Boundary), time: mean(EdgeClass::Time) }
}

pub fn calibrate(config: &SimConfig, layout: &SurfaceLayout, shots: u64) -> Result<EdgeProbs> {
    let gz = build_matching_graph(layout, StabKind::Z, config.rounds, WeightsMode::Uniform, None)?;
    let gx = build_matching_graph(layout, StabKind::X, config.rounds, WeightsMode::Uniform, None)?;
    let [sz, sx] = collect_event_stats(config, layout, [&gz, &gx], shots, Domain::Calibrate)?;
    Ok(EdgeProbs { z: class_probabilities(&gz, &sz), x: class_probabilities(&gx, &sx) })
}
