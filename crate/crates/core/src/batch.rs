//! Order-stable evaluation of many independent jobs.
//!
//! With the `parallel` feature, jobs run on a rayon pool; without it every
//! execution mode falls back to a plain loop. Results always come back in
//! input order.

use crate::coset_table::EnumerationLimits;
use crate::cover::{analyze, CoverError, CoverReport};
use crate::knot::WirtingerData;
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// `workers = 0` lets the pool pick the thread count.
    Parallel {
        workers: usize,
    },
    #[default]
    Auto,
}

impl Execution {
    pub fn from_workers(workers: Option<usize>) -> Self {
        match workers {
            None => Execution::Auto,
            Some(1) => Execution::Sequential,
            Some(w) => Execution::Parallel { workers: w },
        }
    }
}

/// `items.iter().map(f)`, possibly in parallel, keeping the input order.
pub fn map_ordered<T, R, F>(items: &[T], execution: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match execution {
        Execution::Sequential => items.iter().map(f).collect(),
        Execution::Parallel { workers } => parallel_map(items, workers, f),
        Execution::Auto => parallel_map(items, 0, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
    pool.install(|| items.par_iter().map(f).collect())
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(items: &[T], _workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// One branched cover to analyze.
#[derive(Clone, Debug)]
pub struct CoverJob {
    pub knot: WirtingerData,
    pub images: Vec<Permutation>,
    pub limits: EnumerationLimits,
}

pub fn analyze_batch(jobs: &[CoverJob], execution: Execution) -> Vec<Result<CoverReport, CoverError>> {
    map_ordered(jobs, execution, |j| analyze(&j.knot, &j.images, j.limits))
}
