//! Deterministic normal variates.
//!
//! Every stream is a ChaCha8 keystream selected by `(seed, stream_id)`, so the
//! noise of a path never depends on which thread draws it or in what order.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Stream for the `k`-th path of a batch that starts at `self`.
    pub fn offset(&self, k: usize) -> Self {
        Self {
            seed: self.seed,
            stream_id: self.stream_id.wrapping_add(k as u64),
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

pub fn fill_normals(spec: SeedSpec, out: &mut [f64]) {
    let mut rng = spec.rng();
    for x in out.iter_mut() {
        *x = StandardNormal.sample(&mut rng);
    }
}

pub fn normal_stream(spec: SeedSpec, count: usize) -> Vec<f64> {
    let mut out = vec![0.0; count];
    fill_normals(spec, &mut out);
    out
}
