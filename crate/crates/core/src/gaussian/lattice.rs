//! Time-multiplexed cluster lattices.
//!
//! Every construction starts from canonical two-mode resource pairs
//! (p-squeezed modes joined by a controlled-phase gate of weight `tanh 2r`)
//! and then applies real beam-splitter networks. A real orthogonal network
//! `O` maps a graph state with adjacency `A` onto one with `O·A·Oᵀ`, so the
//! idealized adjacency is tracked exactly next to the covariance. Mixing two
//! modes that share an edge would create a self-loop, which the builder
//! refuses.

use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::graph::{ClusterGraph, EDGE_EPS};
use super::state::{balanced_beam_splitter, controlled_phase, squeezer, Band, GaussianState, Hg, ModeLabel};
use crate::error::{Error, Result};
use crate::gkp::Quadrature;

pub const DEFAULT_MODE_CAP: usize = 128;

/// Frequency lines coupled by the third stage.
pub const D3_FREQ_LINES: u32 = 2;

/// Time bins per unit cell along the time axis of the RHG lattice.
pub const RHG_TIMEBINS_PER_CELL: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dims {
    D1,
    D2,
    D3,
    MacronodeRhg,
}

impl FromStr for Dims {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d1" => Ok(Dims::D1),
            "d2" => Ok(Dims::D2),
            "d3" => Ok(Dims::D3),
            "rhg" | "macronode_rhg" => Ok(Dims::MacronodeRhg),
            other => Err(Error::Config(format!("unknown lattice dims `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub mode_cap: usize,
    /// Re-verify symmetry, uncertainty and purity after every gate.
    pub check_each_step: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { mode_cap: DEFAULT_MODE_CAP, check_each_step: false }
    }
}

/// Controlled-phase weight of a resource pair squeezed by `r`.
pub fn resource_weight(r: f64) -> f64 {
    (2.0 * r).tanh()
}

/// A canonical graph state under construction.
#[derive(Debug, Clone)]
pub struct Network {
    state: GaussianState,
    adjacency: DMatrix<f64>,
    check: bool,
    steps: usize,
}

impl Network {
    /// `labels.len()` modes, each p-squeezed by `r`.
    pub fn new(labels: Vec<ModeLabel>, r: f64, check: bool) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::domain(format!("squeezing r must be finite and >= 0, got {r}")));
        }
        let n = labels.len();
        let mut state = GaussianState::vacuum(labels)?;
        let sq = squeezer(-r);
        for m in 0..n {
            state.apply_symplectic(&sq, &[m])?;
        }
        let mut net = Network { state, adjacency: DMatrix::zeros(n, n), check, steps: 0 };
        net.verify()?;
        Ok(net)
    }

    fn verify(&mut self) -> Result<()> {
        self.steps += 1;
        if self.check {
            self.state
                .check_physical(1e-9, true)
                .map_err(|e| Error::contract(format!("after construction step {}: {e}", self.steps)))?;
        }
        Ok(())
    }

    pub fn state(&self) -> &GaussianState {
        &self.state
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn find(&self, label: &ModeLabel) -> Option<usize> {
        self.state.index_of(label)
    }

    pub fn cz(&mut self, a: usize, b: usize, g: f64) -> Result<()> {
        self.state.apply_symplectic(&controlled_phase(g), &[a, b])?;
        self.adjacency[(a, b)] += g;
        self.adjacency[(b, a)] += g;
        self.verify()
    }

    /// Balanced beam splitter on two modes that share no edge.
    pub fn bs(&mut self, a: usize, b: usize) -> Result<()> {
        if self.adjacency[(a, b)].abs() > EDGE_EPS {
            return Err(Error::contract(format!(
                "beam splitter on adjacent modes {:?} and {:?} would create a self-loop",
                self.state.labels()[a],
                self.state.labels()[b]
            )));
        }
        self.state.apply_symplectic(&balanced_beam_splitter(), &[a, b])?;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let n = self.adjacency.nrows();
        for j in 0..n {
            let (ra, rb) = (self.adjacency[(a, j)], self.adjacency[(b, j)]);
            self.adjacency[(a, j)] = h * (ra - rb);
            self.adjacency[(b, j)] = h * (ra + rb);
        }
        for i in 0..n {
            let (ca, cb) = (self.adjacency[(i, a)], self.adjacency[(i, b)]);
            self.adjacency[(i, a)] = h * (ca - cb);
            self.adjacency[(i, b)] = h * (ca + cb);
        }
        self.verify()
    }

    /// Shifts the time bin of every mode matched by `pred`.
    pub fn delay(&mut self, bins: u32, pred: impl Fn(&ModeLabel) -> bool) -> Result<()> {
        let moved: Vec<usize> = (0..self.state.num_modes()).filter(|&m| pred(&self.state.labels()[m])).collect();
        // Relabel latest first so intermediate labels never collide.
        let mut order = moved;
        order.sort_by_key(|&m| std::cmp::Reverse(self.state.labels()[m].timebin));
        for m in order {
            let l = self.state.labels()[m].delayed(bins);
            self.state.relabel(m, l)?;
        }
        Ok(())
    }

    pub fn finish(self) -> Result<(GaussianState, ClusterGraph)> {
        let graph = ClusterGraph::new(self.state.labels().to_vec(), self.adjacency)?;
        Ok((self.state, graph))
    }
}

fn rail(oeg: u8, band: Band, f: u32, k: u32) -> ModeLabel {
    ModeLabel::new(oeg, band, Hg::Hg01, f, k)
}

const COUPLINGS: [((u8, Band), (u8, Band)); 2] = [((1, Band::Signal), (2, Band::Idler)), ((2, Band::Signal), (1, Band::Idler))];

fn couple_all(net: &mut Network, pairs: &[((u8, Band, u32), (u8, Band, u32))]) -> Result<()> {
    let mut cells: Vec<(u32, u32)> = net.state().labels().iter().map(|l| (l.freq_index, l.timebin)).collect();
    cells.sort_unstable();
    cells.dedup();
    for (f, k) in cells {
        for &((oa, ba, da), (ob, bb, db)) in pairs {
            let a = net.find(&rail(oa, ba, f + da, k));
            let b = net.find(&rail(ob, bb, f + db, k));
            if let (Some(a), Some(b)) = (a, b) {
                net.bs(a, b)?;
            }
        }
    }
    Ok(())
}

fn lattice_modes(n: usize, timebins: usize, dims: Dims) -> usize {
    match dims {
        Dims::D1 | Dims::D2 => 4 * timebins,
        Dims::D3 => 4 * timebins * D3_FREQ_LINES as usize,
        Dims::MacronodeRhg => {
            let l = timebins.div_ceil(RHG_TIMEBINS_PER_CELL);
            let (edges, faces) = rhg_counts(n, n, l);
            4 * (edges + faces)
        }
    }
}

pub fn build_lattice(r: f64, n: usize, timebins: usize, dims: Dims) -> Result<(GaussianState, ClusterGraph)> {
    build_lattice_with(r, n, timebins, dims, &BuildOptions::default())
}

pub fn build_lattice_with(
    r: f64,
    n: usize,
    timebins: usize,
    dims: Dims,
    opts: &BuildOptions,
) -> Result<(GaussianState, ClusterGraph)> {
    if n < 1 {
        return Err(Error::domain("N must be >= 1"));
    }
    if timebins < 2 {
        return Err(Error::domain("timebins must be >= 2"));
    }
    let modes = lattice_modes(n, timebins, dims);
    if modes > opts.mode_cap {
        return Err(Error::Resource(format!("{modes} modes exceed the cap of {}", opts.mode_cap)));
    }
    if dims == Dims::MacronodeRhg {
        let l = timebins.div_ceil(RHG_TIMEBINS_PER_CELL);
        let (count, links) = rhg_complex(n, n, l);
        return macronode_lattice(r, count, &links, opts);
    }
    let lines = if dims == Dims::D3 { D3_FREQ_LINES } else { 1 };
    let mut labels = Vec::with_capacity(modes);
    for f in 0..lines {
        for k in 0..timebins as u32 {
            for oeg in [1, 2] {
                labels.push(rail(oeg, Band::Signal, f, k));
                labels.push(rail(oeg, Band::Idler, f, k));
            }
        }
    }
    let mut net = Network::new(labels, r, opts.check_each_step)?;
    let w = resource_weight(r);
    for m in (0..modes).step_by(2) {
        net.cz(m, m + 1, w)?;
    }
    let per_bin: Vec<_> = COUPLINGS.iter().map(|&((oa, ba), (ob, bb))| ((oa, ba, 0), (ob, bb, 0))).collect();

    // Stage one: signals wait N bins and meet the other generator's idlers.
    net.delay(n as u32, |l| l.band == Band::Signal)?;
    couple_all(&mut net, &per_bin)?;
    if dims == Dims::D1 {
        return net.finish();
    }
    // Stage two: one more bin of delay, same couplings.
    net.delay(1, |l| l.band == Band::Signal)?;
    couple_all(&mut net, &per_bin)?;
    if dims == Dims::D3 {
        // Stage three: idlers of neighbouring frequency lines.
        couple_all(&mut net, &[((1, Band::Idler, 0), (2, Band::Idler, 1))])?;
    }
    net.finish()
}

/// Macronode lattice: `count` four-mode macronodes, each link an entangled
/// pair between one free mode of either end, then a four-splitter inside
/// every macronode. Mode 0 of each macronode is the one kept by
/// [`reduce_macronode`].
pub fn macronode_lattice(
    r: f64,
    count: usize,
    links: &[(usize, usize)],
    opts: &BuildOptions,
) -> Result<(GaussianState, ClusterGraph)> {
    if 4 * count > opts.mode_cap {
        return Err(Error::Resource(format!("{} modes exceed the cap of {}", 4 * count, opts.mode_cap)));
    }
    let slot_label = |m: usize, s: usize| {
        let (oeg, band) = [(1, Band::Signal), (1, Band::Idler), (2, Band::Signal), (2, Band::Idler)][s];
        rail(oeg, band, 0, m as u32)
    };
    let labels = (0..count).flat_map(|m| (0..4).map(move |s| slot_label(m, s))).collect();
    let mut net = Network::new(labels, r, opts.check_each_step)?;
    let mut used = vec![0usize; count];
    let w = resource_weight(r);
    for &(u, v) in links {
        if u == v || u >= count || v >= count {
            return Err(Error::contract(format!("invalid macronode link ({u}, {v})")));
        }
        if used[u] == 4 || used[v] == 4 {
            return Err(Error::contract("macronode has more than four links"));
        }
        net.cz(4 * u + used[u], 4 * v + used[v], w)?;
        used[u] += 1;
        used[v] += 1;
    }
    for m in 0..count {
        let b = 4 * m;
        for (i, j) in [(0, 1), (2, 3), (0, 2), (1, 3)] {
            net.bs(b + i, b + j)?;
        }
    }
    let (state, graph) = net.finish()?;
    let groups = (0..count).map(|m| [4 * m, 4 * m + 1, 4 * m + 2, 4 * m + 3]).collect();
    Ok((state, graph.with_macronodes(groups)))
}

/// Measures `x` on the three satellites of every macronode, keeping mode 0
/// of each group.
pub fn reduce_macronode(state: &GaussianState, graph: &ClusterGraph) -> Result<(GaussianState, ClusterGraph)> {
    let groups = graph.macronodes().ok_or_else(|| Error::contract("graph has no macronode grouping"))?;
    let n = graph.num_nodes();
    let mut seen = vec![false; n];
    for g in groups {
        for &i in g {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::contract("macronode groups overlap or reference missing nodes"));
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::contract("macronode groups do not cover every node"));
    }
    let mut out = state.clone();
    for g in groups {
        for &i in &g[1..] {
            let m = out
                .index_of(&graph.labels()[i])
                .ok_or_else(|| Error::contract("graph node is not a mode of the state"))?;
            let q = out.quad_index(m, Quadrature::X);
            let outcome = out.mean()[q];
            out.homodyne_condition(m, Quadrature::X, outcome)?;
        }
    }
    let centres: Vec<usize> = groups.iter().map(|g| g[0]).collect();
    Ok((out, graph.induced(&centres)))
}

fn rhg_counts(lx: usize, ly: usize, lt: usize) -> (usize, usize) {
    let edges = lx * (ly + 1) * (lt + 1) + (lx + 1) * ly * (lt + 1) + (lx + 1) * (ly + 1) * lt;
    let faces = lx * ly * (lt + 1) + lx * (ly + 1) * lt + (lx + 1) * ly * lt;
    (edges, faces)
}

/// Nodes on the edges and faces of an `lx×ly×lt` block of cubes, linked by
/// face-edge incidence. Edges come first.
pub fn rhg_complex(lx: usize, ly: usize, lt: usize) -> (usize, Vec<(usize, usize)>) {
    let size = [lx, ly, lt];
    let unit = |a: usize| {
        let mut e = [0usize; 3];
        e[a] = 1;
        e
    };
    let fits = |v: [usize; 3], d: [usize; 3]| (0..3).all(|i| v[i] + d[i] <= size[i]);
    let add = |v: [usize; 3], d: [usize; 3]| [v[0] + d[0], v[1] + d[1], v[2] + d[2]];
    let vertices: Vec<[usize; 3]> =
        (0..=lt).flat_map(|t| (0..=ly).flat_map(move |y| (0..=lx).map(move |x| [x, y, t]))).collect();
    let mut edge_id = std::collections::HashMap::new();
    for a in 0..3 {
        for &v in &vertices {
            if fits(v, unit(a)) {
                let id = edge_id.len();
                edge_id.insert((v, a), id);
            }
        }
    }
    let mut links = Vec::new();
    let mut next = edge_id.len();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        for &v in &vertices {
            if fits(v, add(unit(a), unit(b))) {
                for e in [(v, a), (add(v, unit(b)), a), (v, b), (add(v, unit(a)), b)] {
                    links.push((next, edge_id[&e]));
                }
                next += 1;
            }
        }
    }
    (next, links)
}
