//! Deterministic random streams.
//!
//! Every random decision in the simulator is drawn from an [`RngStream`],
//! which wraps ChaCha12 so that a given seed produces the same sequence on
//! every platform. Per-trial streams are derived from a master seed, a domain
//! tag and the trial index, so trials can run on any number of workers
//! without changing results.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Domain tags separating the streams used by different experiment kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    SecurityGame = 0x5143_5350_4741_4d45,
    HonestRun = 0x484f_4e45_5354_5255,
    StatelessGame = 0x5354_4c45_5353_4741,
}

#[derive(Debug, Clone)]
pub struct RngStream(ChaCha12Rng);

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        RngStream(ChaCha12Rng::seed_from_u64(seed))
    }

    /// Stream for one trial of one experiment kind.
    pub fn for_trial(master_seed: u64, domain: Domain, trial_index: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
        let mut rng = ChaCha12Rng::from_seed(key);
        rng.set_stream(trial_index);
        RngStream(rng)
    }

    /// Independent child stream; consumes one word of this stream.
    pub fn fork(&mut self) -> Self {
        RngStream(ChaCha12Rng::seed_from_u64(self.0.next_u64()))
    }

    pub fn bit(&mut self) -> u8 {
        (self.0.next_u32() & 1) as u8
    }

    pub fn bits(&mut self, len: usize) -> Vec<u8> {
        (0..len).map(|_| self.bit()).collect()
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        // p == 1 must always succeed; uniform() < 1 holds for every draw.
        self.uniform() < p
    }

    pub fn below(&mut self, bound: usize) -> usize {
        self.0.random_range(0..bound)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RngStream::from_seed(7);
        let mut b = RngStream::from_seed(7);
        let xs: Vec<u64> = (0..32).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..32).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn trial_streams_are_distinct() {
        let mut a = RngStream::for_trial(1, Domain::SecurityGame, 0);
        let mut b = RngStream::for_trial(1, Domain::SecurityGame, 1);
        let mut c = RngStream::for_trial(1, Domain::HonestRun, 0);
        let (x, y, z) = (a.next_u64(), b.next_u64(), c.next_u64());
        assert_ne!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn bernoulli_boundaries() {
        let mut r = RngStream::from_seed(3);
        assert!((0..1000).all(|_| r.bernoulli(1.0)));
        assert!((0..1000).all(|_| !r.bernoulli(0.0)));
    }
}
