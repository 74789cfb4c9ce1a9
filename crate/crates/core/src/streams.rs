//! Reproducible random streams.
//!
//! Every random quantity is drawn from a ChaCha8 stream keyed by the master
//! seed and a purpose tag, with the trial (block or channel draw) index as
//! the ChaCha stream id. A trial's randomness therefore does not depend on
//! which worker runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    Data,
    ChannelBob,
    ChannelEve,
    An,
    NoiseBob,
    NoiseEve,
    Mi,
    PairSampling,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Data => 1,
            Purpose::ChannelBob => 2,
            Purpose::ChannelEve => 3,
            Purpose::An => 4,
            Purpose::NoiseBob => 5,
            Purpose::NoiseEve => 6,
            Purpose::Mi => 7,
            Purpose::PairSampling => 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Streams {
    master: u64,
}

impl Streams {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn rng(&self, purpose: Purpose, trial: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.master.to_le_bytes());
        key[8..16].copy_from_slice(&purpose.tag().to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(trial);
        rng
    }
}
