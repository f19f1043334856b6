//! Trial execution.
//!
//! Trials are cut into fixed blocks of [`BLOCK_SIZE`] indices. Each block is
//! tallied sequentially, and block tallies are merged in block order, so the
//! result depends only on the trial count and never on how many workers ran
//! the blocks or in which order they finished. With the `parallel` feature
//! the blocks are spread over a rayon pool of the requested size; without it
//! (or with one worker) they run in a plain loop.

pub const BLOCK_SIZE: u64 = 1024;

/// Accumulates per-trial outcomes.
pub trait Tally: Default + Send {
    type Item;
    fn record(&mut self, item: Self::Item);
    fn merge(&mut self, other: Self);
}

fn run_block<T, F>(block: u64, trials: u64, trial: &F) -> T
where
    T: Tally,
    F: Fn(u64) -> T::Item,
{
    let start = block * BLOCK_SIZE;
    let end = (start + BLOCK_SIZE).min(trials);
    let mut tally = T::default();
    for index in start..end {
        tally.record(trial(index));
    }
    tally
}

/// Runs `trial(i)` for `i in 0..trials` and folds the outcomes.
pub fn run_trials<T, F>(trials: u64, workers: usize, trial: F) -> T
where
    T: Tally,
    F: Fn(u64) -> T::Item + Sync,
{
    let blocks = trials.div_ceil(BLOCK_SIZE);
    let partials = if workers > 1 && blocks > 1 {
        run_blocks_parallel::<T, F>(blocks, trials, workers, &trial)
    } else {
        (0..blocks)
            .map(|b| run_block::<T, F>(b, trials, &trial))
            .collect()
    };
    let mut total = T::default();
    for p in partials {
        total.merge(p);
    }
    total
}

#[cfg(feature = "parallel")]
fn run_blocks_parallel<T, F>(blocks: u64, trials: u64, workers: usize, trial: &F) -> Vec<T>
where
    T: Tally,
    F: Fn(u64) -> T::Item + Sync,
{
    use rayon::prelude::*;
    let work = || {
        (0..blocks)
            .into_par_iter()
            .map(|b| run_block::<T, F>(b, trials, trial))
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_blocks_parallel<T, F>(blocks: u64, trials: u64, _workers: usize, trial: &F) -> Vec<T>
where
    T: Tally,
    F: Fn(u64) -> T::Item + Sync,
{
    (0..blocks)
        .map(|b| run_block::<T, F>(b, trials, trial))
        .collect()
}

/// Default worker count: available hardware parallelism.
pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn absorb(&mut self, other: CompensatedSum) {
        self.add(other.sum);
        self.add(other.carry);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Event counts for `K` indicator events per trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventTally<const K: usize> {
    pub hits: [u64; K],
    pub used: u64,
    pub failed: u64,
}

impl<const K: usize> Default for EventTally<K> {
    fn default() -> Self {
        Self {
            hits: [0; K],
            used: 0,
            failed: 0,
        }
    }
}

impl<const K: usize> Tally for EventTally<K> {
    type Item = Option<[bool; K]>;

    fn record(&mut self, item: Self::Item) {
        match item {
            Some(events) => {
                self.used += 1;
                for (h, e) in self.hits.iter_mut().zip(events) {
                    *h += u64::from(e);
                }
            }
            None => self.failed += 1,
        }
    }

    fn merge(&mut self, other: Self) {
        for (h, o) in self.hits.iter_mut().zip(other.hits) {
            *h += o;
        }
        self.used += other.used;
        self.failed += other.failed;
    }
}

/// Sample mean and variance accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MeanTally {
    pub sum: CompensatedSum,
    pub sum_sq: CompensatedSum,
    pub used: u64,
    pub failed: u64,
}

impl Tally for MeanTally {
    type Item = Option<f64>;

    fn record(&mut self, item: Self::Item) {
        match item {
            Some(x) => {
                self.sum.add(x);
                self.sum_sq.add(x * x);
                self.used += 1;
            }
            None => self.failed += 1,
        }
    }

    fn merge(&mut self, other: Self) {
        self.sum.absorb(other.sum);
        self.sum_sq.absorb(other.sum_sq);
        self.used += other.used;
        self.failed += other.failed;
    }
}
