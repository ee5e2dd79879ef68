//! Named, seeded random-number lanes.
//!
//! Every random quantity in a simulation trial (IRS phases, fading, beams)
//! draws from its own lane keyed by `(master seed, trial, purpose)`. Lanes
//! are independent ChaCha streams, so trials can run on any number of worker
//! threads and still reproduce bit-identical draws.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a random stream is consumed for. One lane per purpose per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    IrsPhases,
    Fading,
    Beams,
    Other(u64),
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::IrsPhases => 1,
            Purpose::Fading => 2,
            Purpose::Beams => 3,
            Purpose::Other(t) => 0x1000 + t,
        }
    }
}

/// splitmix64; decorrelates structured (seed, trial, purpose) triples.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A seeded stream for one `(trial, purpose)` pair.
pub fn lane(master_seed: u64, trial: u64, purpose: Purpose) -> ChaCha8Rng {
    let k = mix(master_seed ^ mix(trial ^ mix(purpose.tag())));
    ChaCha8Rng::seed_from_u64(k)
}
