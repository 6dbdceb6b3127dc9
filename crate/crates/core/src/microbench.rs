//! Worklist-versus-sweep push micro-benchmark.
//!
//! Both variants start with every node active and a full worklist. Each
//! iteration deactivates the `batch_size` lowest-id active nodes and pushes
//! every other active node onto the next worklist. `push_wl` finds active
//! nodes by walking the worklist; `push_nowl` sweeps all node ids and tests an
//! active flag. Only the kernel body is timed; the worklist swap is not.

use std::io;
use std::sync::atomic::{AtomicBool, Ordering::Relaxed};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Executor;
use crate::graph::{CsrGraph, NodeId};
use crate::worklist::Worklist;

pub const DEFAULT_BATCH: usize = 1000;
pub const DEFAULT_REPETITIONS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    PushWl,
    PushNowl,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::PushWl => "push_wl",
            Variant::PushNowl => "push_nowl",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub batch_size: usize,
    pub variant: Variant,
    pub repetitions: usize,
    /// Keep the full deactivated id list of every iteration (memory heavy).
    pub record_sets: bool,
}

impl BenchConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            batch_size: DEFAULT_BATCH,
            variant,
            repetitions: DEFAULT_REPETITIONS,
            record_sets: false,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.batch_size == 0 {
            return Err(BenchError::Config("batch size must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(BenchError::Config("repetitions must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error("invalid benchmark config: {0}")]
    Config(&'static str),
    #[error("series cover different iterations ({wl} vs {nowl} points)")]
    MismatchedSeries { wl: usize, nowl: usize },
}

/// Order-independent digest of a node set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDigest {
    pub count: usize,
    pub hash: u64,
}

impl SetDigest {
    fn insert(&mut self, id: NodeId) {
        // splitmix64 finalizer
        let mut z = u64::from(id).wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        self.hash = self.hash.wrapping_add(z ^ (z >> 31));
        self.count += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TtiPoint {
    pub iteration: usize,
    pub active_before: usize,
    pub deactivated: SetDigest,
    pub micros_mean: f64,
    pub micros_min: f64,
    pub micros_std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TtiSeries {
    pub variant: Variant,
    pub per_iteration: Vec<TtiPoint>,
    /// Present when [`BenchConfig::record_sets`] was set.
    pub deactivated_sets: Option<Vec<Vec<NodeId>>>,
}

impl TtiSeries {
    /// Series with the given per-iteration means and no work information.
    pub fn from_means(variant: Variant, micros: &[f64]) -> Self {
        Self {
            variant,
            per_iteration: micros
                .iter()
                .enumerate()
                .map(|(iteration, &m)| TtiPoint {
                    iteration,
                    active_before: 0,
                    deactivated: SetDigest::default(),
                    micros_mean: m,
                    micros_min: m,
                    micros_std: 0.0,
                })
                .collect(),
            deactivated_sets: None,
        }
    }

    /// True when both series deactivated the same node sets in every iteration.
    pub fn same_work_as(&self, other: &TtiSeries) -> bool {
        self.per_iteration.len() == other.per_iteration.len()
            && self
                .per_iteration
                .iter()
                .zip(&other.per_iteration)
                .all(|(a, b)| a.active_before == b.active_before && a.deactivated == b.deactivated)
    }
}

struct RunTrace {
    micros: Vec<f64>,
    active_before: Vec<usize>,
    digests: Vec<SetDigest>,
    sets: Vec<Vec<NodeId>>,
}

fn run_once(exec: &Executor, n: usize, config: &BenchConfig, record: bool) -> RunTrace {
    let active: Box<[AtomicBool]> = (0..n).map(|_| AtomicBool::new(true)).collect();
    let mut wl = Worklist::init_full(n);
    let mut trace = RunTrace {
        micros: Vec::new(),
        active_before: Vec::new(),
        digests: Vec::new(),
        sets: Vec::new(),
    };
    let mut before = Vec::new();

    while !wl.is_empty() {
        let take = config.batch_size.min(wl.len());
        // current is sorted, so ids below `cutoff` are the `take` lowest active ids
        let cutoff = wl.current()[take - 1] + 1;
        if record {
            before.clear();
            before.extend_from_slice(wl.current());
        }
        trace.active_before.push(wl.len());

        let t0 = Instant::now();
        {
            let wl = &wl;
            let active = &active;
            match config.variant {
                Variant::PushWl => exec.for_each_in_list(wl.current(), |u| {
                    if u < cutoff {
                        active[u as usize].store(false, Relaxed);
                    } else {
                        wl.push(u);
                    }
                }),
                Variant::PushNowl => exec.for_each_in_range(n, |u| {
                    if active[u as usize].load(Relaxed) {
                        if u < cutoff {
                            active[u as usize].store(false, Relaxed);
                        } else {
                            wl.push(u);
                        }
                    }
                }),
            }
        }
        trace.micros.push(t0.elapsed().as_secs_f64() * 1e6);

        wl.swap_and_sort();
        if record {
            // survivors are a sorted subset of `before`; the rest were deactivated
            let mut digest = SetDigest::default();
            let mut set = Vec::new();
            let mut survivors = wl.current().iter().peekable();
            for &u in &before {
                if survivors.peek() == Some(&&u) {
                    survivors.next();
                } else {
                    debug_assert!(!active[u as usize].load(Relaxed));
                    digest.insert(u);
                    if config.record_sets {
                        set.push(u);
                    }
                }
            }
            trace.digests.push(digest);
            if config.record_sets {
                trace.sets.push(set);
            }
        }
    }
    trace
}

/// Runs one variant `repetitions` times and averages per-iteration time.
///
/// Only `graph.num_nodes()` is used: nodes are deactivated by id.
pub fn run_push_bench(exec: &Executor, graph: &CsrGraph, config: &BenchConfig) -> Result<TtiSeries, BenchError> {
    config.validate()?;
    let n = graph.num_nodes();
    let first = run_once(exec, n, config, true);
    let iterations = first.micros.len();
    let mut samples: Vec<Vec<f64>> = first.micros.iter().map(|&m| vec![m]).collect();
    for _ in 1..config.repetitions {
        let rep = run_once(exec, n, config, false);
        assert_eq!(
            rep.micros.len(),
            iterations,
            "iteration count changed between repetitions"
        );
        for (s, m) in samples.iter_mut().zip(rep.micros) {
            s.push(m);
        }
    }

    let per_iteration = samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let k = s.len() as f64;
            let mean = s.iter().sum::<f64>() / k;
            let var = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / k;
            TtiPoint {
                iteration: i,
                active_before: first.active_before[i],
                deactivated: first.digests[i],
                micros_mean: mean,
                micros_min: s.iter().copied().fold(f64::INFINITY, f64::min),
                micros_std: var.sqrt(),
            }
        })
        .collect();

    Ok(TtiSeries {
        variant: config.variant,
        per_iteration,
        deactivated_sets: config.record_sets.then_some(first.sets),
    })
}

/// Iterations at which the sign of `nowl - wl` differs from the previous
/// iteration. A zero difference counts as positive.
pub fn detect_crossovers(wl: &TtiSeries, nowl: &TtiSeries) -> Result<Vec<usize>, BenchError> {
    let same_range = wl.per_iteration.len() == nowl.per_iteration.len()
        && wl
            .per_iteration
            .iter()
            .zip(&nowl.per_iteration)
            .all(|(a, b)| a.iteration == b.iteration);
    if !same_range {
        return Err(BenchError::MismatchedSeries {
            wl: wl.per_iteration.len(),
            nowl: nowl.per_iteration.len(),
        });
    }
    let signs: Vec<bool> = wl
        .per_iteration
        .iter()
        .zip(&nowl.per_iteration)
        .map(|(a, b)| b.micros_mean - a.micros_mean >= 0.0)
        .collect();
    Ok((1..signs.len())
        .filter(|&t| signs[t] != signs[t - 1])
        .map(|t| wl.per_iteration[t].iteration)
        .collect())
}

#[derive(Serialize)]
struct TtiRow {
    variant: &'static str,
    iteration: usize,
    active_before: usize,
    micros_mean: f64,
    micros_min: f64,
    micros_std: f64,
}

/// CSV with header `variant,iteration,active_before,micros_mean,micros_min,micros_std`.
pub fn write_tti_csv<W: io::Write>(out: W, series: &[&TtiSeries]) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record([
        "variant",
        "iteration",
        "active_before",
        "micros_mean",
        "micros_min",
        "micros_std",
    ])?;
    for s in series {
        for p in &s.per_iteration {
            w.serialize(TtiRow {
                variant: s.variant.as_str(),
                iteration: p.iteration,
                active_before: p.active_before,
                micros_mean: p.micros_mean,
                micros_min: p.micros_min,
                micros_std: p.micros_std,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn isolated(n: usize) -> CsrGraph {
        CsrGraph::from_edges(n, &[])
    }

    fn bench(n: usize, batch: usize, variant: Variant) -> TtiSeries {
        let exec = Executor::new(3, 64).unwrap();
        let cfg = BenchConfig {
            batch_size: batch,
            variant,
            repetitions: 2,
            record_sets: true,
        };
        run_push_bench(&exec, &isolated(n), &cfg).unwrap()
    }

    #[test]
    fn fixed_batch_schedule() {
        let s = bench(2500, 1000, Variant::PushWl);
        let active: Vec<usize> = s.per_iteration.iter().map(|p| p.active_before).collect();
        assert_eq!(active, vec![2500, 1500, 500]);
        let sets = s.deactivated_sets.unwrap();
        assert!(sets[0].iter().copied().eq(0..1000));
        assert!(sets[2].iter().copied().eq(2000..2500));

        assert_eq!(bench(1000, 1000, Variant::PushNowl).per_iteration.len(), 1);
        assert_eq!(bench(10, 1000, Variant::PushNowl).per_iteration.len(), 1);
        assert!(bench(0, 1000, Variant::PushWl).per_iteration.is_empty());
    }

    #[test]
    fn variants_do_the_same_work() {
        let a = bench(2345, 100, Variant::PushWl);
        let b = bench(2345, 100, Variant::PushNowl);
        assert!(a.same_work_as(&b));
        assert_eq!(a.deactivated_sets, b.deactivated_sets);
        assert_eq!(a.per_iteration.len(), 24);
    }

    #[test]
    fn rejects_zero_batch() {
        let exec = Executor::new(1, 1).unwrap();
        let mut cfg = BenchConfig::new(Variant::PushWl);
        cfg.batch_size = 0;
        assert!(run_push_bench(&exec, &isolated(3), &cfg).is_err());
        cfg.batch_size = 1;
        cfg.repetitions = 0;
        assert!(run_push_bench(&exec, &isolated(3), &cfg).is_err());
    }

    #[test]
    fn crossover_examples() {
        let wl = TtiSeries::from_means(Variant::PushWl, &[5.0, 5.0, 5.0]);
        let nowl = TtiSeries::from_means(Variant::PushNowl, &[3.0, 3.0, 8.0]);
        assert_eq!(detect_crossovers(&wl, &nowl), Ok(vec![2]));

        assert_eq!(detect_crossovers(&wl, &wl), Ok(vec![]));

        let wl = TtiSeries::from_means(Variant::PushWl, &[9.0, 9.0]);
        let nowl = TtiSeries::from_means(Variant::PushNowl, &[1.0, 1.0]);
        assert_eq!(detect_crossovers(&wl, &nowl), Ok(vec![]));

        let short = TtiSeries::from_means(Variant::PushNowl, &[1.0]);
        assert!(detect_crossovers(&wl, &short).is_err());
    }

    #[test]
    fn csv_layout() {
        let wl = TtiSeries::from_means(Variant::PushWl, &[5.0, 6.5]);
        let nowl = TtiSeries::from_means(Variant::PushNowl, &[3.0, 8.0]);
        let mut buf = Vec::new();
        write_tti_csv(&mut buf, &[&wl, &nowl]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "variant,iteration,active_before,micros_mean,micros_min,micros_std"
        );
        assert_eq!(lines[1], "push_wl,0,0,5.0,5.0,0.0");
        assert_eq!(lines[4], "push_nowl,1,0,8.0,8.0,0.0");
        assert_eq!(lines.len(), 5);
    }
}
