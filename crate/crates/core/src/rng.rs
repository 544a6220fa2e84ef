//! Counter-based random streams.
//!
//! Every shot owns a ChaCha8 stream addressed by `(seed, domain, shot)`, so the
//! samples a shot sees do not depend on which worker runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent sub-experiments (decoding runs, weight calibration) draw from
/// distinct domains so they never reuse key material.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Decode,
    Calibrate,
    Oracle,
}

impl Domain {
    fn tag(self) -> u64 {
        match self {
            Domain::Decode => 0x6465_636f_6465_0001,
            Domain::Calibrate => 0x6361_6c69_6272_0002,
            Domain::Oracle => 0x6f72_6163_6c65_0003,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream for one shot. The key depends on `(seed, domain)`, the ChaCha stream
/// id is the shot index.
pub fn shot_rng(seed: u64, domain: Domain, shot: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = seed ^ domain.tag();
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(shot);
    rng
}
