//! Blossom against exhaustive enumeration on random event sets.

use rand::Rng;
use serde::Serialize;

use super::calibrate::calibrate;
use super::{build_matching_graph, Decoder, WeightsMode};
use crate::error::Result;
use crate::noise::{DetectionEvent, SimConfig};
use crate::rng::{shot_rng, Domain};
use crate::surface::{build_layout, StabKind};

/// Operating point used to obtain non-uniform calibrated weights.
pub const CHECK_SQUEEZING_DB: f64 = 18.0;

#[derive(Debug, Clone, Serialize)]
pub struct OracleCase {
    pub d: usize,
    pub kind: StabKind,
    pub weights: WeightsMode,
    pub instances: usize,
    pub mismatches: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub cases: Vec<OracleCase>,
}

impl OracleReport {
    pub fn instances(&self) -> usize {
        self.cases.iter().map(|c| c.instances).sum()
    }

    pub fn mismatches(&self) -> usize {
        self.cases.iter().map(|c| c.mismatches).sum()
    }
}

/// Runs `instances` random event sets (at most 12 events) split evenly over
/// d ∈ {3, 5}, both stabilizer types and both weight modes.
pub fn oracle_check(instances: usize, seed: u64, calibration_shots: u64) -> Result<OracleReport> {
    let mut cases = Vec::new();
    let combos: Vec<(usize, WeightsMode, StabKind)> = [3, 5]
        .into_iter()
        .flat_map(|d| {
            [WeightsMode::Uniform, WeightsMode::Calibrated]
                .into_iter()
                .flat_map(move |w| [StabKind::Z, StabKind::X].into_iter().map(move |k| (d, w, k)))
        })
        .collect();
    let mut rng = shot_rng(seed, Domain::Oracle, 0);
    for (c, &(d, weights, kind)) in combos.iter().enumerate() {
        let layout = build_layout(d)?;
        let probs = match weights {
            WeightsMode::Uniform => None,
            WeightsMode::Calibrated => {
                let mut cfg = SimConfig::new(d, CHECK_SQUEEZING_DB);
                cfg.seed = seed;
                Some(calibrate(&cfg, &layout, calibration_shots)?)
            }
        };
        let graph = build_matching_graph(&layout, kind, d, weights, probs.as_ref())?;
        let n = graph.num_ancillas;
        let mut dec = Decoder::new(graph);
        let count = instances / combos.len() + usize::from(c < instances % combos.len());
        let mut mismatches = 0;
        for _ in 0..count {
            let k = rng.random_range(0..=12);
            let mut events: Vec<DetectionEvent> =
                (0..k).map(|_| DetectionEvent { ancilla: rng.random_range(0..n), round: rng.random_range(0..=d) }).collect();
            events.sort();
            events.dedup();
            if dec.mwpm(&events)?.weight != dec.brute_force_match(&events)?.weight {
                mismatches += 1;
            }
        }
        cases.push(OracleCase { d, kind, weights, instances: count, mismatches });
    }
    Ok(OracleReport { cases })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_check_is_clean() {
        let r = oracle_check(40, 3, 500).unwrap();
        assert_eq!(r.cases.len(), 8);
        assert_eq!(r.instances(), 40);
        assert_eq!(r.mismatches(), 0);
    }
}
