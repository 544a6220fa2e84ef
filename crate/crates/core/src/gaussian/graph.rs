use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::state::{GaussianState, ModeLabel};
use crate::error::{Error, Result};
use crate::gkp::GkpLattice;

/// Weights below this are reported as absent.
pub const EDGE_EPS: f64 = 1e-10;

/// What sits on a graph node beyond its Gaussian mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeTag {
    Gaussian,
    /// An ideal GKP input with a Gaussian shift of variance `sigma_gkp_sq`;
    /// carried as a tag because it has no covariance description.
    Gkp { lattice: GkpLattice, sigma_gkp_sq: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterGraph {
    labels: Vec<ModeLabel>,
    adjacency: DMatrix<f64>,
    tags: Vec<NodeTag>,
    /// Groups of four node indices; the first entry is the mode that
    /// survives reduction.
    macronodes: Option<Vec<[usize; 4]>>,
}

impl ClusterGraph {
    pub fn new(labels: Vec<ModeLabel>, adjacency: DMatrix<f64>) -> Result<Self> {
        let n = labels.len();
        if adjacency.nrows() != n || adjacency.ncols() != n {
            return Err(Error::contract("adjacency size does not match the labels"));
        }
        if (&adjacency - adjacency.transpose()).amax() > 1e-12 {
            return Err(Error::contract("adjacency is not symmetric"));
        }
        if adjacency.diagonal().amax() > EDGE_EPS {
            return Err(Error::contract("adjacency has a self-loop"));
        }
        let mut adjacency = adjacency;
        adjacency.fill_diagonal(0.0);
        Ok(ClusterGraph { labels, adjacency, tags: vec![NodeTag::Gaussian; n], macronodes: None })
    }

    pub fn empty(labels: Vec<ModeLabel>) -> Self {
        let n = labels.len();
        ClusterGraph { labels, adjacency: DMatrix::zeros(n, n), tags: vec![NodeTag::Gaussian; n], macronodes: None }
    }

    pub fn with_macronodes(mut self, groups: Vec<[usize; 4]>) -> Self {
        self.macronodes = Some(groups);
        self
    }

    pub fn set_tag(&mut self, node: usize, tag: NodeTag) {
        self.tags[node] = tag;
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    pub fn tags(&self) -> &[NodeTag] {
        &self.tags
    }

    pub fn macronodes(&self) -> Option<&[[usize; 4]]> {
        self.macronodes.as_deref()
    }

    /// Edges `(i, j, w)` with `i < j` and `|w| > EDGE_EPS`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.num_nodes();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let w = self.adjacency[(i, j)];
                if w.abs() > EDGE_EPS {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn degree(&self, node: usize) -> usize {
        (0..self.num_nodes()).filter(|&j| j != node && self.adjacency[(node, j)].abs() > EDGE_EPS).count()
    }

    /// Subgraph on `keep`, in that order. Macronode groups are dropped.
    pub fn induced(&self, keep: &[usize]) -> ClusterGraph {
        ClusterGraph {
            labels: keep.iter().map(|&i| self.labels[i]).collect(),
            adjacency: self.adjacency.select_rows(keep).select_columns(keep),
            tags: keep.iter().map(|&i| self.tags[i]).collect(),
            macronodes: None,
        }
    }
}

/// `var(pᵢ − Σⱼ Aᵢⱼ xⱼ)` for every graph node, from the covariance.
pub fn nullifier_variances(state: &GaussianState, graph: &ClusterGraph) -> Result<Vec<f64>> {
    let n = state.num_modes();
    let modes = graph
        .labels()
        .iter()
        .map(|l| state.index_of(l).ok_or_else(|| Error::contract("graph node is not a mode of the state")))
        .collect::<Result<Vec<_>>>()?;
    let a = graph.adjacency();
    Ok((0..graph.num_nodes())
        .map(|i| {
            let mut c = DVector::zeros(2 * n);
            c[n + modes[i]] = 1.0;
            for (j, &m) in modes.iter().enumerate() {
                c[m] -= a[(i, j)];
            }
            state.variance_of(&c)
        })
        .collect())
}

/// Adjacency read off the state as `σ_px·σ_xx⁻¹`: the linear estimate of
/// each `p` from all `x`. For a graph state this is its graph.
pub fn state_adjacency(state: &GaussianState) -> Result<ClusterGraph> {
    let n = state.num_modes();
    let cov = state.cov();
    let sxx = cov.view((0, 0), (n, n)).clone_owned();
    let spx = cov.view((n, 0), (n, n)).clone_owned();
    let inv = sxx.cholesky().ok_or_else(|| Error::Singular("x block of the covariance is not positive definite".into()))?.inverse();
    let mut v = spx * inv;
    v = (&v + v.transpose()) * 0.5;
    for i in 0..n {
        for j in 0..n {
            if i == j || v[(i, j)].abs() <= EDGE_EPS {
                v[(i, j)] = 0.0;
            }
        }
    }
    ClusterGraph::new(state.labels().to_vec(), v)
}

/// The `cluster-build` JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct ClusterReport {
    pub format_version: u32,
    pub structure: String,
    pub r: f64,
    pub nodes: Vec<ModeLabel>,
    pub tags: Vec<NodeTag>,
    pub edges: Vec<(usize, usize, f64)>,
    pub nullifier_variances: Vec<f64>,
}

impl ClusterReport {
    pub fn new(structure: &str, r: f64, state: &GaussianState, graph: &ClusterGraph) -> Result<Self> {
        Ok(ClusterReport {
            format_version: 1,
            structure: structure.to_string(),
            r,
            nodes: graph.labels().to_vec(),
            tags: graph.tags().to_vec(),
            edges: graph.edges(),
            nullifier_variances: nullifier_variances(state, graph)?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
