//! Rotated surface-code layout and the four-step two-mode gate schedule.
//!
//! Data qubits sit on a `d × d` grid `(row, col)`. A plaquette is addressed by
//! the grid position `(i, j)` of its north-west corner, `i, j ∈ [-1, d-1]`;
//! bulk plaquettes alternate X/Z in a checkerboard, weight-2 X plaquettes line
//! the top and bottom edges and weight-2 Z plaquettes line the left and right.
//!
//! Looking at the lattice rotated by 45°, the NW, SW, NE and SE corners of a
//! plaquette are its N, W, E and S neighbours, which is the order the gate
//! steps 1–4 visit them.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_DISTANCE: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StabKind {
    /// Detects Pauli X (x-shift) errors with CZ couplings.
    Z,
    /// Detects Pauli Z (p-shift) errors with CX couplings.
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Corner {
    N,
    W,
    E,
    S,
}

impl Corner {
    /// Grid offset `(drow, dcol)` from the plaquette's NW anchor.
    fn offset(self) -> (i32, i32) {
        match self {
            Corner::N => (0, 0),
            Corner::W => (1, 0),
            Corner::E => (0, 1),
            Corner::S => (1, 1),
        }
    }
}

pub const NWES: [Corner; 4] = [Corner::N, Corner::W, Corner::E, Corner::S];

/// `Ĉ_X(±g)` signs over the N, W, E, S corners of an X plaquette.
const CX_SIGNS: [i8; 4] = [1, 1, -1, -1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AncillaId {
    pub kind: StabKind,
    pub index: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Plaquette {
    pub kind: StabKind,
    pub anchor: (i32, i32),
    /// Data qubit touched at step `k + 1`, if any.
    pub by_step: [Option<usize>; 4],
    /// Gate sign at step `k + 1`; always `+1` for Z plaquettes.
    pub signs: [i8; 4],
}

impl Plaquette {
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_step.iter().flatten().copied()
    }

    pub fn weight(&self) -> usize {
        self.by_step.iter().flatten().count()
    }

    pub fn is_boundary(&self) -> bool {
        self.weight() == 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GateKind {
    CZ,
    CX,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateSpec {
    pub kind: GateKind,
    pub strength: f64,
    pub sign: i8,
}

impl GateSpec {
    pub fn signed_strength(&self) -> f64 {
        self.strength * self.sign as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduledGate {
    pub ancilla: AncillaId,
    pub data: usize,
    pub gate: GateSpec,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceLayout {
    pub d: usize,
    pub data_coords: Vec<(i32, i32)>,
    pub z_plaquettes: Vec<Plaquette>,
    pub x_plaquettes: Vec<Plaquette>,
    /// `(ancilla, data)` pairs per step 1..=4.
    pub schedule: [Vec<(AncillaId, usize)>; 4],
    pub logical_x_support: Vec<usize>,
    pub logical_z_support: Vec<usize>,
}

impl SurfaceLayout {
    pub fn num_data(&self) -> usize {
        self.d * self.d
    }

    pub fn plaquettes(&self, kind: StabKind) -> &[Plaquette] {
        match kind {
            StabKind::Z => &self.z_plaquettes,
            StabKind::X => &self.x_plaquettes,
        }
    }

    pub fn plaquette(&self, id: AncillaId) -> &Plaquette {
        &self.plaquettes(id.kind)[id.index]
    }

    pub fn data_index(&self, row: i32, col: i32) -> Option<usize> {
        let d = self.d as i32;
        ((0..d).contains(&row) && (0..d).contains(&col)).then(|| (row * d + col) as usize)
    }

    /// Plaquettes of `kind` containing data qubit `q`, in index order.
    pub fn plaquettes_of(&self, kind: StabKind, q: usize) -> Vec<usize> {
        self.plaquettes(kind)
            .iter()
            .enumerate()
            .filter(|(_, p)| p.support().any(|x| x == q))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "format_version": 1,
            "layout": self,
        })
    }
}

pub fn build_layout(d: usize) -> Result<SurfaceLayout> {
    build_layout_with_order(d, NWES)
}

/// Layout with a custom corner visiting order; any permutation of the four
/// corners yields a valid schedule.
pub fn build_layout_with_order(d: usize, order: [Corner; 4]) -> Result<SurfaceLayout> {
    if d.is_multiple_of(2) || !(3..=MAX_DISTANCE).contains(&d) {
        return Err(Error::domain(format!("distance must be odd and in 3..={MAX_DISTANCE}, got {d}")));
    }
    let mut seen = [false; 4];
    for c in order {
        let slot = NWES.iter().position(|&x| x == c).unwrap();
        if std::mem::replace(&mut seen[slot], true) {
            return Err(Error::domain(format!("gate order {order:?} repeats a corner")));
        }
    }

    let di = d as i32;
    let data_coords: Vec<(i32, i32)> = (0..di).flat_map(|r| (0..di).map(move |c| (r, c))).collect();
    let index = |r: i32, c: i32| ((0..di).contains(&r) && (0..di).contains(&c)).then(|| (r * di + c) as usize);

    let mut z_plaquettes = Vec::new();
    let mut x_plaquettes = Vec::new();
    for i in -1..di {
        for j in -1..di {
            let kind = if (i + j).rem_euclid(2) == 0 { StabKind::X } else { StabKind::Z };
            let top_or_bottom = i == -1 || i == di - 1;
            let left_or_right = j == -1 || j == di - 1;
            let keep = match (top_or_bottom, left_or_right) {
                (false, false) => true,
                (true, false) => kind == StabKind::X,
                (false, true) => kind == StabKind::Z,
                (true, true) => false,
            };
            if !keep {
                continue;
            }
            let mut by_step = [None; 4];
            let mut signs = [1i8; 4];
            for (k, corner) in order.iter().enumerate() {
                let (dr, dc) = corner.offset();
                by_step[k] = index(i + dr, j + dc);
                if kind == StabKind::X {
                    signs[k] = CX_SIGNS[NWES.iter().position(|c| c == corner).unwrap()];
                }
            }
            let plaquette = Plaquette { kind, anchor: (i, j), by_step, signs };
            match kind {
                StabKind::Z => z_plaquettes.push(plaquette),
                StabKind::X => x_plaquettes.push(plaquette),
            }
        }
    }

    let mut schedule: [Vec<(AncillaId, usize)>; 4] = Default::default();
    for (kind, plaquettes) in [(StabKind::Z, &z_plaquettes), (StabKind::X, &x_plaquettes)] {
        for (index, p) in plaquettes.iter().enumerate() {
            for (k, q) in p.by_step.iter().enumerate() {
                if let Some(q) = q {
                    schedule[k].push((AncillaId { kind, index }, *q));
                }
            }
        }
    }

    // Z̄ runs along the top row and commutes with every X plaquette; X̄ runs down
    // the left column and commutes with every Z plaquette.
    let logical_z_support = (0..di).map(|c| (c) as usize).collect();
    let logical_x_support = (0..di).map(|r| (r * di) as usize).collect();

    Ok(SurfaceLayout {
        d,
        data_coords,
        z_plaquettes,
        x_plaquettes,
        schedule,
        logical_x_support,
        logical_z_support,
    })
}

/// Gates applied in step `step` (1..=4) of a layer when the squeeze is
/// inserted before step `squeeze_step` (0 = never).
pub fn schedule_gates(
    layout: &SurfaceLayout,
    step: usize,
    squeeze_step: usize,
    chi: f64,
) -> Result<Vec<ScheduledGate>> {
    if !(1..=4).contains(&step) {
        return Err(Error::domain(format!("gate step must be in 1..=4, got {step}")));
    }
    if squeeze_step > 4 {
        return Err(Error::domain(format!("squeeze step must be in 0..=4, got {squeeze_step}")));
    }
    if !(chi >= 1.0 && chi.is_finite()) {
        return Err(Error::domain(format!("squeezing factor must be >= 1, got {chi}")));
    }
    let strength = gate_strength(step, squeeze_step, chi);
    Ok(layout.schedule[step - 1]
        .iter()
        .map(|&(ancilla, data)| {
            let p = layout.plaquette(ancilla);
            let gate = match ancilla.kind {
                StabKind::Z => GateSpec { kind: GateKind::CZ, strength, sign: 1 },
                StabKind::X => GateSpec { kind: GateKind::CX, strength, sign: p.signs[step - 1] },
            };
            ScheduledGate { ancilla, data, gate }
        })
        .collect())
}

/// `χ` from the squeeze step onwards, `1` before it or when no squeeze is used.
pub fn gate_strength(step: usize, squeeze_step: usize, chi: f64) -> f64 {
    if squeeze_step == 0 || step < squeeze_step {
        1.0
    } else {
        chi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn overlap(a: impl Iterator<Item = usize>, b: &[usize]) -> usize {
        a.filter(|q| b.contains(q)).count()
    }

    #[test]
    fn counts() {
        for d in [3, 5, 7, 9, 25] {
            let l = build_layout(d).unwrap();
            assert_eq!(l.num_data(), d * d);
            assert_eq!(l.z_plaquettes.len(), (d * d - 1) / 2);
            assert_eq!(l.x_plaquettes.len(), (d * d - 1) / 2);
            for p in l.z_plaquettes.iter().chain(&l.x_plaquettes) {
                assert!(p.weight() == 4 || p.weight() == 2);
            }
        }
        let l = build_layout(3).unwrap();
        assert_eq!(l.z_plaquettes.len(), 4);
        assert_eq!(l.x_plaquettes.len(), 4);
        assert_eq!(build_layout(5).unwrap().z_plaquettes.len() * 2, 24);
    }

    #[test]
    fn rejects_bad_distance() {
        for d in [0, 1, 2, 4, 27] {
            assert!(build_layout(d).is_err(), "d={d}");
        }
    }

    #[test]
    fn logical_operators() {
        for d in [3, 5, 7] {
            let l = build_layout(d).unwrap();
            assert_eq!(l.logical_x_support.len(), d);
            assert_eq!(l.logical_z_support.len(), d);
            assert_eq!(overlap(l.logical_x_support.iter().copied(), &l.logical_z_support), 1);
            for p in &l.z_plaquettes {
                assert_eq!(overlap(p.support(), &l.logical_x_support) % 2, 0);
            }
            for p in &l.x_plaquettes {
                assert_eq!(overlap(p.support(), &l.logical_z_support) % 2, 0);
            }
        }
    }

    #[test]
    fn stabilizers_commute() {
        let l = build_layout(7).unwrap();
        for z in &l.z_plaquettes {
            let zs: Vec<usize> = z.support().collect();
            for x in &l.x_plaquettes {
                assert_eq!(overlap(x.support(), &zs) % 2, 0);
                // Continuous-variable commutation: signed overlap of the CX pattern is even.
                let signed: i32 = x
                    .by_step
                    .iter()
                    .zip(x.signs)
                    .filter(|(q, _)| q.is_some_and(|q| zs.contains(&q)))
                    .map(|(_, s)| s as i32)
                    .sum();
                assert_eq!(signed.rem_euclid(2), 0);
            }
        }
    }

    #[test]
    fn schedule_is_complete_and_conflict_free() {
        for d in [3, 5, 9] {
            let l = build_layout(d).unwrap();
            for step in &l.schedule {
                let mut used = HashSet::new();
                for (a, q) in step {
                    assert!(used.insert(format!("a{:?}{}", a.kind, a.index)));
                    assert!(used.insert(format!("q{q}")));
                }
            }
            let scheduled: HashSet<(StabKind, usize, usize)> =
                l.schedule.iter().flatten().map(|(a, q)| (a.kind, a.index, *q)).collect();
            let supports: HashSet<(StabKind, usize, usize)> = [StabKind::Z, StabKind::X]
                .into_iter()
                .flat_map(|k| {
                    l.plaquettes(k)
                        .iter()
                        .enumerate()
                        .flat_map(move |(i, p)| p.support().map(move |q| (k, i, q)).collect::<Vec<_>>())
                })
                .collect();
            assert_eq!(scheduled, supports);
            assert_eq!(l.schedule.iter().map(Vec::len).sum::<usize>(), supports.len());
            for p in l.z_plaquettes.iter().chain(&l.x_plaquettes).filter(|p| p.weight() == 4) {
                let distinct: HashSet<usize> = p.support().collect();
                assert_eq!(distinct.len(), 4);
            }
        }
    }

    #[test]
    fn every_custom_order_is_valid() {
        let orders = [
            [Corner::N, Corner::E, Corner::W, Corner::S],
            [Corner::S, Corner::E, Corner::W, Corner::N],
        ];
        for order in orders {
            let l = build_layout_with_order(5, order).unwrap();
            assert_eq!(l.schedule.iter().map(Vec::len).sum::<usize>(), 4 * 16 + 2 * 8);
        }
        assert!(build_layout_with_order(5, [Corner::N, Corner::N, Corner::W, Corner::S]).is_err());
    }

    /// Exhaustive check that no X pattern of weight < 3 on the d=3 code is both
    /// undetectable and a logical operator, and that weight 3 ones exist.
    #[test]
    fn distance_three_by_enumeration() {
        let l = build_layout(3).unwrap();
        let n = l.num_data();
        let mut min_logical = usize::MAX;
        for mask in 1u32..(1 << n) {
            let w = mask.count_ones() as usize;
            if w > 3 {
                continue;
            }
            let has = |q: usize| mask >> q & 1 == 1;
            let undetected = l.z_plaquettes.iter().all(|p| p.support().filter(|&q| has(q)).count() % 2 == 0);
            let flips_logical = l.logical_z_support.iter().filter(|&&q| has(q)).count() % 2 == 1;
            if undetected && flips_logical {
                min_logical = min_logical.min(w);
            }
        }
        assert_eq!(min_logical, 3);
    }

    #[test]
    fn gate_strength_rules() {
        let l = build_layout(3).unwrap();
        for k in 1..=4 {
            assert!(schedule_gates(&l, k, 0, 2.0).unwrap().iter().all(|g| g.gate.strength == 1.0));
            assert!(schedule_gates(&l, k, 1, 2.0).unwrap().iter().all(|g| g.gate.strength == 2.0));
        }
        assert!(schedule_gates(&l, 3, 4, 2.0).unwrap().iter().all(|g| g.gate.strength == 1.0));
        assert!(schedule_gates(&l, 4, 4, 2.0).unwrap().iter().all(|g| g.gate.strength == 2.0));
        assert!(schedule_gates(&l, 1, 0, 0.5).is_err());
        assert!(schedule_gates(&l, 5, 0, 1.0).is_err());
        assert!(schedule_gates(&l, 1, 5, 1.0).is_err());
    }

    #[test]
    fn gate_kinds_and_signs() {
        let l = build_layout(5).unwrap();
        for k in 1..=4 {
            for g in schedule_gates(&l, k, 0, 1.0).unwrap() {
                match g.ancilla.kind {
                    StabKind::Z => assert_eq!((g.gate.kind, g.gate.sign), (GateKind::CZ, 1)),
                    StabKind::X => {
                        assert_eq!(g.gate.kind, GateKind::CX);
                        assert_eq!(g.gate.sign, CX_SIGNS[k - 1]);
                    }
                }
            }
        }
    }

    #[test]
    fn json_dump_has_schedule() {
        let v = build_layout(3).unwrap().to_json();
        assert_eq!(v["format_version"], 1);
        assert_eq!(v["layout"]["schedule"].as_array().unwrap().len(), 4);
        assert_eq!(v["layout"]["data_coords"].as_array().unwrap().len(), 9);
    }
}
