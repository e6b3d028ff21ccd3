use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::rng::{self, tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchStream {
    pub batch_size: usize,
    pub real_per_batch: usize,
    pub synth_per_batch: usize,
    pub seed: u64,
}

impl Default for BatchStream {
    fn default() -> Self {
        BatchStream { batch_size: 7, real_per_batch: 6, synth_per_batch: 1, seed: 0 }
    }
}

impl BatchStream {
    pub fn with_seed(seed: u64) -> Self {
        BatchStream { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.real_per_batch + self.synth_per_batch != self.batch_size || self.batch_size == 0 {
            return Err(DatasetError::BatchComposition {
                batch_size: self.batch_size,
                real: self.real_per_batch,
                synth: self.synth_per_batch,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Batch<T> {
    pub real: Vec<T>,
    pub synth: Vec<T>,
}

/// Cycles through seeded shuffles of a pool, reshuffling at every pass.
#[derive(Debug, Clone)]
struct Cycle<T> {
    pool: Vec<T>,
    order: Vec<usize>,
    pos: usize,
    epoch: u64,
    seed: u64,
    tag: u64,
}

impl<T: Clone> Cycle<T> {
    fn new(pool: Vec<T>, seed: u64, tag: u64) -> Self {
        let mut c = Cycle { order: (0..pool.len()).collect(), pool, pos: 0, epoch: 0, seed, tag };
        c.reshuffle();
        c
    }

    fn reshuffle(&mut self) {
        self.order.sort_unstable();
        self.order.shuffle(&mut rng::stream(self.seed, &[self.tag, self.epoch]));
    }

    fn next(&mut self) -> T {
        if self.pos == self.order.len() {
            self.epoch += 1;
            self.pos = 0;
            self.reshuffle();
        }
        let v = self.pool[self.order[self.pos]].clone();
        self.pos += 1;
        v
    }
}

/// Endless stream of mixed batches. Real ids are drawn from per-epoch
/// shuffles, so every real id appears once per pass over the real pool;
/// synthetic ids cycle through an independent shuffle.
#[derive(Debug, Clone)]
pub struct MixedBatches<T> {
    real: Cycle<T>,
    synth: Cycle<T>,
    spec: BatchStream,
    emitted: u64,
}

impl<T: Clone> MixedBatches<T> {
    /// Batches emitted so far.
    pub fn position(&self) -> u64 {
        self.emitted
    }

    /// Current pass over the real pool.
    pub fn real_epoch(&self) -> u64 {
        self.real.epoch
    }
}

pub fn mixed_batch_stream<T: Clone>(
    real: Vec<T>,
    synth: Vec<T>,
    spec: BatchStream,
) -> Result<MixedBatches<T>, DatasetError> {
    spec.validate()?;
    if real.is_empty() || (synth.is_empty() && spec.synth_per_batch > 0) {
        return Err(DatasetError::EmptyPool);
    }
    if real.len() < spec.real_per_batch || synth.len() < spec.synth_per_batch {
        return Err(DatasetError::PoolTooSmall {
            real: real.len(),
            synth: synth.len(),
            need_real: spec.real_per_batch,
            need_synth: spec.synth_per_batch,
        });
    }
    Ok(MixedBatches {
        real: Cycle::new(real, spec.seed, tag::REAL),
        synth: Cycle::new(synth, spec.seed, tag::SYNTH),
        spec,
        emitted: 0,
    })
}

impl<T: Clone> Iterator for MixedBatches<T> {
    type Item = Batch<T>;

    fn next(&mut self) -> Option<Batch<T>> {
        self.emitted += 1;
        Some(Batch {
            real: (0..self.spec.real_per_batch).map(|_| self.real.next()).collect(),
            synth: (0..self.spec.synth_per_batch).map(|_| self.synth.next()).collect(),
        })
    }
}
