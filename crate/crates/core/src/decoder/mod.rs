//! Space-time matching graphs and exact minimum-weight perfect matching.
//!
//! Each stabilizer type gets its own graph. Node `t·n + a` is ancilla `a` in
//! round `t` (the last layer being the ideal closure round) and one extra node
//! stands for the lattice boundary. Shortest paths are precomputed once per
//! graph when it is small enough, otherwise per syndrome.

pub mod blossom;
pub mod calibrate;
pub mod check;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{DetectionEvent, PauliFrame};
use crate::surface::{StabKind, SurfaceLayout};

pub use crate::noise::WeightsMode;

/// Weights are stored in fixed point so that blossom and the brute-force
/// oracle see bit-identical path lengths.
pub const WEIGHT_SCALE: f64 = 1e6;

/// Largest node count for which the all-pairs table is built eagerly.
pub const FULL_TABLE_MAX_NODES: usize = 2500;

pub const BRUTE_FORCE_MAX_EVENTS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeClass {
    Space,
    Boundary,
    Time,
}

/// Per-class error probabilities for one graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassProbs {
    pub space: f64,
    pub boundary: f64,
    pub time: f64,
}

impl ClassProbs {
    pub fn get(&self, class: EdgeClass) -> f64 {
        match class {
            EdgeClass::Space => self.space,
            EdgeClass::Boundary => self.boundary,
            EdgeClass::Time => self.time,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeProbs {
    pub z: ClassProbs,
    pub x: ClassProbs,
}

impl EdgeProbs {
    pub fn of(&self, kind: StabKind) -> &ClassProbs {
        match kind {
            StabKind::Z => &self.z,
            StabKind::X => &self.x,
        }
    }
}

/// `ln((1-p)/p)`, the log-likelihood weight of an edge firing with probability `p`.
pub fn weight_from_probability(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::domain(format!("edge probability must lie in (0, 1/2), got {p}")));
    }
    Ok(((1.0 - p) / p).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub class: EdgeClass,
    /// Data qubit whose frame bit flips when the edge is used.
    pub fault: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchingGraph {
    pub kind: StabKind,
    pub num_ancillas: usize,
    pub layers: usize,
    pub edges: Vec<Edge>,
    #[serde(skip)]
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl MatchingGraph {
    pub fn num_nodes(&self) -> usize {
        self.num_ancillas * self.layers + 1
    }

    pub fn boundary(&self) -> usize {
        self.num_ancillas * self.layers
    }

    pub fn node(&self, ancilla: usize, round: usize) -> usize {
        round * self.num_ancillas + ancilla
    }

    /// `(neighbour, edge index)` pairs of `node`.
    pub fn neighbours(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn quantized_weight(&self, edge: usize) -> i64 {
        (self.edges[edge].weight * WEIGHT_SCALE).round() as i64
    }
}

/// Builds the matching graph of one stabilizer type over `rounds` noisy rounds
/// plus the closure round.
pub fn build_matching_graph(
    layout: &SurfaceLayout,
    kind: StabKind,
    rounds: usize,
    mode: WeightsMode,
    edge_probs: Option<&EdgeProbs>,
) -> Result<MatchingGraph> {
    let weight_of = |class: EdgeClass| -> Result<f64> {
        match mode {
            WeightsMode::Uniform => Ok(1.0),
            WeightsMode::Calibrated => {
                let probs = edge_probs.ok_or_else(|| Error::domain("calibrated weights need edge probabilities"))?;
                weight_from_probability(probs.of(kind).get(class))
            }
        }
    };
    let n = layout.plaquettes(kind).len();
    let layers = rounds + 1;
    let boundary = n * layers;

    // One space edge per plaquette pair; parallel boundary edges differ by a
    // weight-2 stabilizer of the other type, so the lowest qubit is kept.
    let mut space: Vec<(usize, Option<usize>, usize)> = Vec::new();
    for q in 0..layout.num_data() {
        let ps = layout.plaquettes_of(kind, q);
        match ps[..] {
            [a] => space.push((a, None, q)),
            [a, b] => space.push((a, Some(b), q)),
            _ => return Err(Error::contract(format!("data qubit {q} touches {} {kind:?} plaquettes", ps.len()))),
        }
    }
    space.sort_by_key(|&(a, b, q)| (a, b.unwrap_or(usize::MAX), q));
    space.dedup_by_key(|&mut (a, b, _)| (a, b));

    let w_space = weight_of(EdgeClass::Space)?;
    let w_boundary = weight_of(EdgeClass::Boundary)?;
    let w_time = weight_of(EdgeClass::Time)?;
    let mut edges = Vec::new();
    for t in 0..layers {
        for &(a, b, q) in &space {
            let (v, weight, class) = match b {
                Some(b) => (t * n + b, w_space, EdgeClass::Space),
                None => (boundary, w_boundary, EdgeClass::Boundary),
            };
            edges.push(Edge { u: t * n + a, v, weight, class, fault: Some(q) });
        }
        if t + 1 < layers {
            for a in 0..n {
                edges.push(Edge { u: t * n + a, v: (t + 1) * n + a, weight: w_time, class: EdgeClass::Time, fault: None });
            }
        }
    }
    let mut adjacency = vec![Vec::new(); boundary + 1];
    for (k, e) in edges.iter().enumerate() {
        adjacency[e.u].push((e.v, k));
        adjacency[e.v].push((e.u, k));
    }
    Ok(MatchingGraph { kind, num_ancillas: n, layers, edges, adjacency })
}

pub const UNREACHABLE: i64 = i64::MAX;
const NO_EDGE: u32 = u32::MAX;

/// Shortest-path distances and the last edge on each path from one source.
#[derive(Debug, Clone, Default)]
pub struct PathRow {
    pub dist: Vec<i64>,
    pub pred: Vec<u32>,
}

pub fn dijkstra(graph: &MatchingGraph, source: usize, row: &mut PathRow) {
    let n = graph.num_nodes();
    row.dist.clear();
    row.dist.resize(n, UNREACHABLE);
    row.pred.clear();
    row.pred.resize(n, NO_EDGE);
    let mut heap = BinaryHeap::new();
    row.dist[source] = 0;
    heap.push(Reverse((0i64, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > row.dist[u] {
            continue;
        }
        for &(v, k) in graph.neighbours(u) {
            let nd = d + graph.quantized_weight(k);
            if nd < row.dist[v] {
                row.dist[v] = nd;
                row.pred[v] = k as u32;
                heap.push(Reverse((nd, v)));
            }
        }
    }
}

/// All-pairs shortest paths, shared between workers.
#[derive(Debug)]
pub struct PathTable {
    rows: Vec<PathRow>,
}

impl PathTable {
    pub fn build(graph: &MatchingGraph) -> Self {
        let rows = (0..graph.num_nodes())
            .map(|s| {
                let mut row = PathRow::default();
                dijkstra(graph, s, &mut row);
                row
            })
            .collect();
        PathTable { rows }
    }

    pub fn row(&self, source: usize) -> &PathRow {
        &self.rows[source]
    }
}

/// A pairing of detection events: each entry is `(event, partner)` with
/// `None` meaning the boundary.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pairing {
    pub pairs: Vec<(usize, Option<usize>)>,
    /// Total weight in fixed-point units.
    pub weight: i64,
}

impl Pairing {
    pub fn total_weight(&self) -> f64 {
        self.weight as f64 / WEIGHT_SCALE
    }
}

/// Event-to-event and event-to-boundary distances for one syndrome.
#[derive(Debug, Clone, Default)]
pub struct EventDistances {
    pub pair: Vec<Vec<i64>>,
    pub boundary: Vec<i64>,
}

/// Decoder for one graph; cheap to clone, one instance per worker.
#[derive(Debug, Clone)]
pub struct Decoder {
    graph: Arc<MatchingGraph>,
    table: Option<Arc<PathTable>>,
    scratch: Vec<PathRow>,
    nodes: Vec<usize>,
}

impl Decoder {
    pub fn new(graph: MatchingGraph) -> Self {
        let use_table = graph.num_nodes() <= FULL_TABLE_MAX_NODES;
        Self::with_table(graph, use_table)
    }

    pub fn with_table(graph: MatchingGraph, use_table: bool) -> Self {
        let table = use_table.then(|| Arc::new(PathTable::build(&graph)));
        Decoder { graph: Arc::new(graph), table, scratch: Vec::new(), nodes: Vec::new() }
    }

    pub fn graph(&self) -> &MatchingGraph {
        &self.graph
    }

    fn prepare(&mut self, events: &[DetectionEvent]) -> Result<()> {
        self.nodes.clear();
        for e in events {
            if e.ancilla >= self.graph.num_ancillas || e.round >= self.graph.layers {
                return Err(Error::contract(format!("event {e:?} is not a node of the graph")));
            }
            self.nodes.push(self.graph.node(e.ancilla, e.round));
        }
        if self.table.is_none() {
            self.scratch.resize_with(events.len(), PathRow::default);
            for (i, &s) in self.nodes.iter().enumerate() {
                dijkstra(&self.graph, s, &mut self.scratch[i]);
            }
        }
        Ok(())
    }

    fn row(&self, i: usize) -> &PathRow {
        match &self.table {
            Some(t) => t.row(self.nodes[i]),
            None => &self.scratch[i],
        }
    }

    pub fn event_distances(&mut self, events: &[DetectionEvent]) -> Result<EventDistances> {
        self.prepare(events)?;
        self.distances_prepared()
    }

    fn distances_prepared(&self) -> Result<EventDistances> {
        let m = self.nodes.len();
        let b = self.graph.boundary();
        let mut out = EventDistances { pair: vec![vec![0; m]; m], boundary: vec![0; m] };
        for i in 0..m {
            let row = self.row(i);
            out.boundary[i] = row.dist[b];
            if row.dist[b] == UNREACHABLE {
                return Err(Error::contract(format!("event node {} cannot reach the boundary", self.nodes[i])));
            }
            for j in 0..m {
                out.pair[i][j] = row.dist[self.nodes[j]];
            }
        }
        Ok(out)
    }

    /// Exact minimum-weight pairing via blossom.
    pub fn mwpm(&mut self, events: &[DetectionEvent]) -> Result<Pairing> {
        self.prepare(events)?;
        let dist = self.distances_prepared()?;
        Ok(match_distances(&dist))
    }

    pub fn brute_force_match(&mut self, events: &[DetectionEvent]) -> Result<Pairing> {
        if events.len() > BRUTE_FORCE_MAX_EVENTS {
            return Err(Error::Resource(format!(
                "brute-force matching supports at most {BRUTE_FORCE_MAX_EVENTS} events, got {}",
                events.len()
            )));
        }
        let dist = self.event_distances(events)?;
        Ok(brute_force_distances(&dist))
    }

    /// XOR the faults along each matched path into `frame`. `events` must be
    /// the ones the pairing was computed for.
    pub fn apply_correction(&mut self, pairing: &Pairing, events: &[DetectionEvent], frame: &mut PauliFrame) -> Result<()> {
        self.prepare(events)?;
        let bits = match self.graph.kind {
            StabKind::Z => &mut frame.n_x,
            StabKind::X => &mut frame.n_z,
        };
        for &(i, j) in &pairing.pairs {
            let target = match j {
                Some(j) => self.nodes[j],
                None => self.graph.boundary(),
            };
            let row = self.row(i);
            let source = self.nodes[i];
            let mut v = target;
            while v != source {
                let k = row.pred[v];
                if k == NO_EDGE {
                    return Err(Error::contract(format!("no path from node {source} to {target}")));
                }
                let e = &self.graph.edges[k as usize];
                if let Some(q) = e.fault {
                    bits[q] ^= 1;
                }
                v = if e.u == v { e.v } else { e.u };
            }
        }
        Ok(())
    }

    /// Match and correct in one go.
    pub fn decode(&mut self, events: &[DetectionEvent], frame: &mut PauliFrame) -> Result<Pairing> {
        let pairing = self.mwpm(events)?;
        self.apply_correction(&pairing, events, frame)?;
        Ok(pairing)
    }
}

/// Blossom on the event graph with one private boundary copy per event.
pub fn match_distances(dist: &EventDistances) -> Pairing {
    let m = dist.boundary.len();
    if m == 0 {
        return Pairing::default();
    }
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    for i in 0..m {
        edges.push((i, m + i, dist.boundary[i]));
        for j in i + 1..m {
            let dij = dist.pair[i][j];
            // A direct pair no shorter than two boundary trips is never needed.
            if dij != UNREACHABLE && dij < dist.boundary[i] + dist.boundary[j] {
                edges.push((i, j, dij));
                edges.push((m + i, m + j, 0));
            }
        }
    }
    let big = edges.iter().map(|e| e.2).max().unwrap_or(0) + 1;
    let flipped: Vec<(usize, usize, i64)> = edges.iter().map(|&(i, j, w)| (i, j, big - w)).collect();
    let mate = blossom::max_weight_matching(2 * m, &flipped, true);
    let mut pairing = Pairing::default();
    for i in 0..m {
        match mate[i] {
            Some(j) if j < m => {
                if i < j {
                    pairing.pairs.push((i, Some(j)));
                    pairing.weight += dist.pair[i][j];
                }
            }
            Some(_) => {
                pairing.pairs.push((i, None));
                pairing.weight += dist.boundary[i];
            }
            None => unreachable!("boundary copies make a perfect matching always exist"),
        }
    }
    pairing
}

/// Exhaustive minimum over all pairings; ties resolve to the lexicographically
/// first pairing (boundary before partners, partners in index order).
pub fn brute_force_distances(dist: &EventDistances) -> Pairing {
    fn rec(dist: &EventDistances, used: &mut [bool], cur: &mut Vec<(usize, Option<usize>)>, acc: i64, best: &mut Option<Pairing>) {
        if let Some(b) = best {
            if acc > b.weight {
                return;
            }
        }
        let Some(i) = used.iter().position(|u| !u) else {
            if best.as_ref().is_none_or(|b| acc < b.weight) {
                *best = Some(Pairing { pairs: cur.clone(), weight: acc });
            }
            return;
        };
        used[i] = true;
        cur.push((i, None));
        rec(dist, used, cur, acc + dist.boundary[i], best);
        cur.pop();
        for j in i + 1..used.len() {
            if !used[j] && dist.pair[i][j] != UNREACHABLE {
                used[j] = true;
                cur.push((i, Some(j)));
                rec(dist, used, cur, acc + dist.pair[i][j], best);
                cur.pop();
                used[j] = false;
            }
        }
        used[i] = false;
    }
    let mut best = None;
    rec(dist, &mut vec![false; dist.boundary.len()], &mut Vec::new(), 0, &mut best);
    best.unwrap_or_default()
}

/// Decoders for both stabilizer types of a layout.
#[derive(Debug, Clone)]
pub struct DecoderPair {
    pub z: Decoder,
    pub x: Decoder,
}

impl DecoderPair {
    pub fn new(layout: &SurfaceLayout, rounds: usize, mode: WeightsMode, probs: Option<&EdgeProbs>) -> Result<Self> {
        Ok(DecoderPair {
            z: Decoder::new(build_matching_graph(layout, StabKind::Z, rounds, mode, probs)?),
            x: Decoder::new(build_matching_graph(layout, StabKind::X, rounds, mode, probs)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkp::sqrt_pi;
    use crate::noise::{detection_events, Injection, ShotSimulator, SimConfig};
    use crate::rng::{shot_rng, Domain};
    use crate::surface::build_layout;
    use rand::Rng;

    fn uniform(d: usize, kind: StabKind, rounds: usize) -> MatchingGraph {
        build_matching_graph(&build_layout(d).unwrap(), kind, rounds, WeightsMode::Uniform, None).unwrap()
    }

    #[test]
    fn d3_single_round_geometry() {
        let g = uniform(3, StabKind::Z, 1);
        assert_eq!(g.num_ancillas, 4);
        assert_eq!(g.num_nodes(), 9);
        let b = g.boundary();
        for a in 0..8 {
            assert!(g.neighbours(a).iter().any(|&(v, _)| v == b), "plaquette {a} lacks a boundary edge");
        }
        let gx = uniform(3, StabKind::X, 2);
        assert_eq!(gx.layers, 3);
        assert!(gx.edges.iter().all(|e| e.weight == 1.0));
    }

    #[test]
    fn probability_weights() {
        assert!((weight_from_probability(0.1).unwrap() - 9f64.ln()).abs() < 1e-12);
        assert!((weight_from_probability(0.1).unwrap() - 2.1972).abs() < 1e-4);
        let w = weight_from_probability(0.5 - 1e-9).unwrap();
        assert!(w > 0.0 && w < 1e-8);
        for p in [0.0, 0.5, 0.7, -0.1, f64::NAN] {
            assert!(weight_from_probability(p).is_err());
        }
        let probs = EdgeProbs {
            z: ClassProbs { space: 0.1, boundary: 0.2, time: 0.6 },
            x: ClassProbs { space: 0.1, boundary: 0.2, time: 0.3 },
        };
        let layout = build_layout(3).unwrap();
        assert!(build_matching_graph(&layout, StabKind::Z, 2, WeightsMode::Calibrated, Some(&probs)).is_err());
        let g = build_matching_graph(&layout, StabKind::X, 2, WeightsMode::Calibrated, Some(&probs)).unwrap();
        let time = g.edges.iter().find(|e| e.class == EdgeClass::Time).unwrap();
        assert!((time.weight - (0.7f64 / 0.3).ln()).abs() < 1e-12);
    }

    #[test]
    fn every_node_reaches_boundary() {
        for d in [3, 5, 7] {
            for kind in [StabKind::Z, StabKind::X] {
                let g = uniform(d, kind, d);
                let mut row = PathRow::default();
                dijkstra(&g, g.boundary(), &mut row);
                assert!(row.dist.iter().all(|&x| x != UNREACHABLE));
            }
        }
    }

    #[test]
    fn trivial_pairings() {
        let mut dec = Decoder::new(uniform(3, StabKind::Z, 3));
        assert_eq!(dec.mwpm(&[]).unwrap(), Pairing::default());
        assert_eq!(dec.brute_force_match(&[]).unwrap().weight, 0);
        let e = [DetectionEvent { ancilla: 0, round: 1 }];
        let p = dec.brute_force_match(&e).unwrap();
        assert_eq!(p.pairs, vec![(0, None)]);
        assert_eq!(p.total_weight(), 1.0);
        assert_eq!(dec.mwpm(&e).unwrap(), p);
    }

    #[test]
    fn bulk_error_pairs_events_and_corrects() {
        for d in [3, 5, 7] {
            let layout = build_layout(d).unwrap();
            let q = layout.data_index(d as i32 / 2, d as i32 / 2).unwrap();
            let cfg = SimConfig::new(d, f64::INFINITY);
            let mut sim = ShotSimulator::new(&cfg, &layout).unwrap();
            let inj = [Injection { round: 0, qubit: q, dx: sqrt_pi(), dp: 0.0 }];
            let (rec, mut frame) = sim.run_with_injections(&mut shot_rng(0, Domain::Oracle, 0), &inj);
            let (z, _) = detection_events(&rec);
            let mut dec = DecoderPair::new(&layout, d, WeightsMode::Uniform, None).unwrap();
            let pairing = dec.z.decode(&z, &mut frame).unwrap();
            assert_eq!(pairing.pairs, vec![(0, Some(1))]);
            assert_eq!(pairing.total_weight(), 1.0);
            assert!(frame.is_trivial());
        }
    }

    #[test]
    fn corner_boundary_match_flips_corner_qubit() {
        let layout = build_layout(3).unwrap();
        let mut dec = Decoder::new(build_matching_graph(&layout, StabKind::Z, 1, WeightsMode::Uniform, None).unwrap());
        // Qubit (0,0) only touches the left weight-2 Z plaquette.
        let a = layout.plaquettes_of(StabKind::Z, 0);
        assert_eq!(a.len(), 1);
        let events = [DetectionEvent { ancilla: a[0], round: 0 }];
        let pairing = dec.mwpm(&events).unwrap();
        let mut frame = PauliFrame::zeros(9);
        dec.apply_correction(&pairing, &events, &mut frame).unwrap();
        assert_eq!(frame.n_x.iter().map(|&b| b as usize).sum::<usize>(), 1);
        let flipped = frame.n_x.iter().position(|&b| b == 1).unwrap();
        assert_eq!(layout.plaquettes_of(StabKind::Z, flipped), a);
        assert!(frame.n_z.iter().all(|&b| b == 0));
    }

    #[test]
    fn single_shift_anywhere_is_corrected() {
        for d in [3, 5] {
            let layout = build_layout(d).unwrap();
            let cfg = SimConfig::new(d, f64::INFINITY).with_squeeze(2.0, 4);
            let mut sim = ShotSimulator::new(&cfg, &layout).unwrap();
            let mut dec = DecoderPair::new(&layout, d, WeightsMode::Uniform, None).unwrap();
            for q in 0..layout.num_data() {
                for round in 0..d {
                    for (dx, dp) in [(sqrt_pi(), 0.0), (0.0, -sqrt_pi()), (sqrt_pi(), sqrt_pi())] {
                        let inj = [Injection { round, qubit: q, dx, dp }];
                        let (rec, mut frame) = sim.run_with_injections(&mut shot_rng(0, Domain::Oracle, 0), &inj);
                        let (z, x) = detection_events(&rec);
                        dec.z.decode(&z, &mut frame).unwrap();
                        dec.x.decode(&x, &mut frame).unwrap();
                        assert_eq!(frame.logical_flips(&layout), (false, false), "d={d} q={q} t={round}");
                    }
                }
            }
        }
    }

    #[test]
    fn table_and_per_syndrome_paths_agree() {
        let g = uniform(5, StabKind::X, 5);
        let mut a = Decoder::with_table(g.clone(), true);
        let mut b = Decoder::with_table(g, false);
        let mut rng = shot_rng(5, Domain::Oracle, 0);
        for _ in 0..50 {
            let k = rng.random_range(0..10);
            let mut events: Vec<DetectionEvent> = (0..k)
                .map(|_| DetectionEvent { ancilla: rng.random_range(0..12), round: rng.random_range(0..6) })
                .collect();
            events.sort();
            events.dedup();
            let pa = a.mwpm(&events).unwrap();
            let pb = b.mwpm(&events).unwrap();
            assert_eq!(pa.weight, pb.weight);
        }
    }

    #[test]
    fn random_instances_match_oracle() {
        let mut rng = shot_rng(77, Domain::Oracle, 1);
        for d in [3, 5] {
            for kind in [StabKind::Z, StabKind::X] {
                let g = uniform(d, kind, d);
                let n = g.num_ancillas;
                let mut dec = Decoder::new(g);
                for _ in 0..100 {
                    let k = rng.random_range(0..=12);
                    let mut events: Vec<DetectionEvent> = (0..k)
                        .map(|_| DetectionEvent { ancilla: rng.random_range(0..n), round: rng.random_range(0..=d) })
                        .collect();
                    events.sort();
                    events.dedup();
                    let fast = dec.mwpm(&events).unwrap();
                    let slow = dec.brute_force_match(&events).unwrap();
                    assert_eq!(fast.weight, slow.weight, "{events:?}");
                    assert_eq!(fast.pairs.len() + fast.pairs.iter().filter(|p| p.1.is_some()).count(), events.len());
                }
            }
        }
    }

    #[test]
    fn brute_force_limit() {
        let mut dec = Decoder::new(uniform(5, StabKind::Z, 5));
        let events: Vec<DetectionEvent> = (0..13).map(|i| DetectionEvent { ancilla: i % 12, round: i / 12 }).collect();
        assert!(matches!(dec.brute_force_match(&events), Err(Error::Resource(_))));
        let bad = [DetectionEvent { ancilla: 99, round: 0 }];
        assert!(dec.mwpm(&bad).is_err());
    }
}
