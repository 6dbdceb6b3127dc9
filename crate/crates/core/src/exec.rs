//! Fixed-size worker pool with chunked parallel loops.
//!
//! Each loop returns only after every chunk finished, so consecutive calls are
//! separated by a barrier.

use std::ops::Add;

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

use crate::graph::NodeId;

pub const DEFAULT_CHUNK_SIZE: usize = 1024;

pub struct Executor {
    pool: ThreadPool,
    workers: usize,
    chunk_size: usize,
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor")
            .field("workers", &self.workers)
            .field("chunk_size", &self.chunk_size)
            .finish()
    }
}

impl Executor {
    /// `workers` and `chunk_size` of zero are clamped to one.
    pub fn new(workers: usize, chunk_size: usize) -> Result<Self, ThreadPoolBuildError> {
        let workers = workers.max(1);
        let pool = ThreadPoolBuilder::new()
            .num_threads(workers)
            .thread_name(|i| format!("hybridcolor-{i}"))
            .build()?;
        Ok(Self {
            pool,
            workers,
            chunk_size: chunk_size.max(1),
        })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk_size
    }

    /// Applies `f` to every id in `items` and sums the results.
    pub fn sum_over_list<T, F>(&self, items: &[NodeId], f: F) -> T
    where
        T: Add<Output = T> + Default + Send,
        F: Fn(NodeId) -> T + Sync,
    {
        self.pool.install(|| {
            items
                .par_chunks(self.chunk_size)
                .map(|chunk| chunk.iter().fold(T::default(), |acc, &u| acc + f(u)))
                .reduce(T::default, |a, b| a + b)
        })
    }

    /// Applies `f` to every id in `0..n` and sums the results.
    pub fn sum_over_range<T, F>(&self, n: usize, f: F) -> T
    where
        T: Add<Output = T> + Default + Send,
        F: Fn(NodeId) -> T + Sync,
    {
        let chunk = self.chunk_size;
        self.pool.install(|| {
            (0..n.div_ceil(chunk))
                .into_par_iter()
                .map(|c| {
                    let end = ((c + 1) * chunk).min(n);
                    (c * chunk..end).fold(T::default(), |acc, u| acc + f(u as NodeId))
                })
                .reduce(T::default, |a, b| a + b)
        })
    }

    pub fn for_each_in_list<F>(&self, items: &[NodeId], f: F)
    where
        F: Fn(NodeId) + Sync,
    {
        self.pool.install(|| {
            items
                .par_chunks(self.chunk_size)
                .for_each(|chunk| chunk.iter().for_each(|&u| f(u)))
        })
    }

    pub fn for_each_in_range<F>(&self, n: usize, f: F)
    where
        F: Fn(NodeId) + Sync,
    {
        let chunk = self.chunk_size;
        self.pool.install(|| {
            (0..n.div_ceil(chunk)).into_par_iter().for_each(|c| {
                let end = ((c + 1) * chunk).min(n);
                (c * chunk..end).for_each(|u| f(u as NodeId))
            })
        })
    }
}
