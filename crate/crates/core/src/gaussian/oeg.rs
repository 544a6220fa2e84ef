//! Optical entanglement generator outputs.
//!
//! Each generator yields a four-mode star: a GHZ state from one p-squeezed
//! and three x-squeezed vacua through a beam-splitter cascade, with Fourier
//! rotations on the three leaves. One leaf of each star is fused: a Fourier
//! rotation on the second leaf, a balanced beam splitter and two homodynes
//! join the two centres by an edge, giving a six-mode graph: two centres, each with an upper and a lower
//! branch. Measuring the branches leaves the entangled pair on the centres.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::graph::{state_adjacency, ClusterGraph, NodeTag};
use super::state::{balanced_beam_splitter, beam_splitter, fourier, squeezer, Band, GaussianState, Hg, ModeLabel};
use crate::error::{Error, Result};
use crate::gkp::{GkpLattice, Quadrature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairChoice {
    Epr,
    Gkp,
    Hybrid,
}

impl FromStr for PairChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "epr" => Ok(PairChoice::Epr),
            "gkp" => Ok(PairChoice::Gkp),
            "hybrid" => Ok(PairChoice::Hybrid),
            other => Err(Error::Config(format!("unknown pair choice `{other}`"))),
        }
    }
}

/// Role of a star mode and its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    Centre,
    Fused,
    Lower,
    Upper,
}

pub fn arm_label(oeg_id: u8, arm: Arm, j: u32) -> ModeLabel {
    let (band, hg) = match arm {
        Arm::Centre => (Band::Signal, Hg::Hg10),
        Arm::Fused => (Band::Signal, Hg::Hg01),
        Arm::Lower => (Band::Idler, Hg::Hg01),
        Arm::Upper => (Band::Idler, Hg::Hg10),
    };
    ModeLabel::new(oeg_id, band, hg, j, 0)
}

/// GHZ state on `modes`: mode `modes[0]` p-squeezed, the rest x-squeezed,
/// then a cascade splitting `modes[0]` evenly over all outputs.
pub fn ghz_cascade(state: &mut GaussianState, modes: &[usize], r: f64) -> Result<()> {
    let n = modes.len();
    if n < 2 {
        return Err(Error::contract("GHZ state needs at least two modes"));
    }
    state.apply_symplectic(&squeezer(-r), &[modes[0]])?;
    for &m in &modes[1..] {
        state.apply_symplectic(&squeezer(r), &[m])?;
    }
    for (k, &m) in modes.iter().enumerate().skip(1) {
        let theta = (1.0 / ((n - k + 1) as f64).sqrt()).asin();
        state.apply_symplectic(&beam_splitter(theta), &[modes[0], m])?;
    }
    Ok(())
}

/// GHZ state turned into a star centred on `modes[0]`.
pub fn star_cluster(state: &mut GaussianState, modes: &[usize], r: f64) -> Result<()> {
    ghz_cascade(state, modes, r)?;
    for &m in &modes[1..] {
        state.apply_symplectic(&fourier(), &[m])?;
    }
    Ok(())
}

fn measure(state: &mut GaussianState, label: &ModeLabel, q: Quadrature) -> Result<()> {
    let m = state.index_of(label).ok_or_else(|| Error::contract(format!("mode {label:?} missing")))?;
    let outcome = state.mean()[state.quad_index(m, q)];
    state.homodyne_condition(m, q, outcome)
}

/// Six-mode state after fusing the two stars, with its derived graph.
pub fn hexapartite(r: f64, j: u32) -> Result<(GaussianState, ClusterGraph)> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("squeezing r must be finite and >= 0, got {r}")));
    }
    let arms = [Arm::Centre, Arm::Fused, Arm::Lower, Arm::Upper];
    let labels = [1u8, 2].iter().flat_map(|&o| arms.iter().map(move |&a| arm_label(o, a, j))).collect();
    let mut state = GaussianState::vacuum(labels)?;
    star_cluster(&mut state, &[0, 1, 2, 3], r)?;
    star_cluster(&mut state, &[4, 5, 6, 7], r)?;
    // Without the rotation the two centres would merge into one redundantly
    // encoded node instead of sharing an edge.
    state.apply_symplectic(&fourier(), &[5])?;
    state.apply_symplectic(&balanced_beam_splitter(), &[1, 5])?;
    measure(&mut state, &arm_label(2, Arm::Fused, j), Quadrature::P)?;
    measure(&mut state, &arm_label(1, Arm::Fused, j), Quadrature::X)?;
    let graph = state_adjacency(&state)?;
    Ok((state, graph))
}

/// The selected pair on the two centres. GKP arms are tagged; their
/// Gaussian description is the same as in the EPR case.
pub fn build_oeg(r: f64, choice: PairChoice, j: u32) -> Result<(GaussianState, ClusterGraph)> {
    let (mut state, _) = hexapartite(r, j)?;
    for o in [1, 2] {
        measure(&mut state, &arm_label(o, Arm::Upper, j), Quadrature::X)?;
        measure(&mut state, &arm_label(o, Arm::Lower, j), Quadrature::X)?;
    }
    let mut graph = state_adjacency(&state)?;
    let tag = NodeTag::Gkp { lattice: GkpLattice::unsqueezed(Quadrature::X), sigma_gkp_sq: (-2.0 * r).exp() / 2.0 };
    let gkp_arms: &[usize] = match choice {
        PairChoice::Epr => &[],
        PairChoice::Hybrid => &[1],
        PairChoice::Gkp => &[0, 1],
    };
    for &a in gkp_arms {
        graph.set_tag(a, tag);
    }
    Ok((state, graph))
}

/// `var((p₁ − x₂)/√2)` and `var((p₂ − x₁)/√2)` of a two-mode pair in graph
/// form.
pub fn pair_nullifier_variances(state: &GaussianState) -> Result<[f64; 2]> {
    if state.num_modes() != 2 {
        return Err(Error::contract("pair nullifiers need a two-mode state"));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a = nalgebra::DVector::from_vec(vec![0.0, -h, h, 0.0]);
    let b = nalgebra::DVector::from_vec(vec![-h, 0.0, 0.0, h]);
    Ok([state.variance_of(&a), state.variance_of(&b)])
}
