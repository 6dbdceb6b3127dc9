//! Iterative parallel graph coloring (IPGC) kernels.
//!
//! A round has two phases separated by a barrier. In the first, every active
//! (uncolored) node takes the smallest positive color not held by any neighbor
//! in the previous round's snapshot. Adjacent active nodes may therefore pick
//! the same color. In the second, each node colored this round checks its
//! neighbors colored in the same round; if a lower-id neighbor holds the same
//! color the node is uncolored and pushed onto the next worklist.
//!
//! The lowest-id node of every conflict never loses, so the worklist shrinks
//! strictly every round.
//!
//! Both kernel variants perform the same per-node work and differ only in how
//! they find active nodes: the data-driven kernel walks the worklist, the
//! topology-driven kernel sweeps all nodes and tests `colors_read[u] == 0`.

use std::ops::Add;
use std::sync::atomic::{AtomicU32, Ordering::Relaxed};

use serde::{Deserialize, Serialize};

use crate::exec::Executor;
use crate::graph::{CsrGraph, NodeId};
use crate::worklist::Worklist;

/// Node color. Zero means uncolored.
pub type Color = u32;
pub const UNCOLORED: Color = 0;

/// Smallest color `c >= 1` that is not in `forbidden`.
pub fn mex_positive<I>(forbidden: I) -> Color
where
    I: IntoIterator<Item = Color>,
    I::IntoIter: Clone,
{
    let iter = forbidden.into_iter();
    // Fast path: colors 1..=63 tracked in one word.
    let mut mask = 1u64; // bit 0 is the sentinel, never a candidate
    for c in iter.clone() {
        if c < 64 {
            mask |= 1 << c;
        }
    }
    if mask != u64::MAX {
        return mask.trailing_ones();
    }
    let mut high: Vec<Color> = iter.filter(|&c| c >= 64).collect();
    high.sort_unstable();
    high.dedup();
    let mut candidate = 64;
    for c in high {
        if c != candidate {
            break;
        }
        candidate += 1;
    }
    candidate
}

/// Per-node color buffers shared by all workers of a round.
///
/// `colors_read` is the snapshot read by color assignment, `colors_write`
/// receives tentative colors, and `active_stamp[u]` holds the last round in
/// which `u` was assigned a color.
#[derive(Debug)]
pub struct ColorState {
    colors_read: Box<[AtomicU32]>,
    colors_write: Box<[AtomicU32]>,
    active_stamp: Box<[AtomicU32]>,
}

fn zeroed(n: usize) -> Box<[AtomicU32]> {
    (0..n).map(|_| AtomicU32::new(0)).collect()
}

impl ColorState {
    /// Every node uncolored and never stamped.
    pub fn new(num_nodes: usize) -> Self {
        Self {
            colors_read: zeroed(num_nodes),
            colors_write: zeroed(num_nodes),
            active_stamp: zeroed(num_nodes),
        }
    }

    /// State with a given committed snapshot, used to start mid-run.
    pub fn from_colors(colors: &[Color]) -> Self {
        let state = Self::new(colors.len());
        for (u, &c) in colors.iter().enumerate() {
            state.colors_read[u].store(c, Relaxed);
            state.colors_write[u].store(c, Relaxed);
        }
        state
    }

    pub fn num_nodes(&self) -> usize {
        self.colors_read.len()
    }

    #[inline]
    pub fn color(&self, u: NodeId) -> Color {
        self.colors_read[u as usize].load(Relaxed)
    }

    #[inline]
    pub fn tentative(&self, u: NodeId) -> Color {
        self.colors_write[u as usize].load(Relaxed)
    }

    #[inline]
    pub fn stamp(&self, u: NodeId) -> u32 {
        self.active_stamp[u as usize].load(Relaxed)
    }

    /// Copy of the committed colors.
    pub fn colors(&self) -> Vec<Color> {
        self.colors_read.iter().map(|c| c.load(Relaxed)).collect()
    }

    #[inline]
    fn commit(&self, u: NodeId) {
        self.colors_read[u as usize].store(self.tentative(u), Relaxed);
    }
}

/// Counts for one round. `conflicts_detected` is the number of same-round
/// edges whose endpoints picked the same color.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundOutcome {
    pub colored_permanently: usize,
    pub pushed_back: usize,
    pub conflicts_detected: usize,
}

impl RoundOutcome {
    pub fn processed(&self) -> usize {
        self.colored_permanently + self.pushed_back
    }
}

impl Add for RoundOutcome {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            colored_permanently: self.colored_permanently + o.colored_permanently,
            pushed_back: self.pushed_back + o.pushed_back,
            conflicts_detected: self.conflicts_detected + o.conflicts_detected,
        }
    }
}

/// Speculatively colors `node` from the previous round's snapshot.
pub fn assign_color(graph: &CsrGraph, state: &ColorState, node: NodeId, round: u32) -> Color {
    debug_assert_eq!(state.color(node), UNCOLORED, "assign_color on inactive node {node}");
    let color = mex_positive(graph.neighbors(node).iter().map(|&v| state.color(v)));
    state.colors_write[node as usize].store(color, Relaxed);
    state.active_stamp[node as usize].store(round, Relaxed);
    color
}

/// Number of lower-id neighbors colored this round with the same tentative color.
fn lower_conflicts(graph: &CsrGraph, state: &ColorState, node: NodeId, round: u32) -> usize {
    let mine = state.tentative(node);
    graph
        .neighbors(node)
        .iter()
        .take_while(|&&v| v < node)
        .filter(|&&v| state.stamp(v) == round && state.tentative(v) == mine)
        .count()
}

fn resolve_counted(graph: &CsrGraph, state: &ColorState, node: NodeId, round: u32, wl: &Worklist) -> RoundOutcome {
    debug_assert_eq!(state.stamp(node), round);
    let conflicts = lower_conflicts(graph, state, node, round);
    if conflicts > 0 {
        // Neighbors still read colors_write during this phase; it is cleared
        // after the barrier by `clear_losers`.
        state.colors_read[node as usize].store(UNCOLORED, Relaxed);
        wl.push(node);
        RoundOutcome {
            pushed_back: 1,
            conflicts_detected: conflicts,
            ..Default::default()
        }
    } else {
        RoundOutcome {
            colored_permanently: 1,
            ..Default::default()
        }
    }
}

/// Uncolors `node` and pushes it if a lower-id neighbor colored in the same
/// round picked the same color. Returns whether the node lost.
///
/// Must run after every `assign_color` of the round has completed.
pub fn resolve_conflicts(graph: &CsrGraph, state: &ColorState, node: NodeId, round: u32, wl: &Worklist) -> bool {
    resolve_counted(graph, state, node, round, wl).pushed_back == 1
}

fn clear_losers(exec: &Executor, state: &ColorState, wl: &Worklist) {
    exec.for_each_in_list(wl.current(), |u| {
        state.colors_write[u as usize].store(UNCOLORED, Relaxed);
    });
}

/// One round that iterates over the worklist only.
pub fn data_driven_iteration(
    exec: &Executor,
    graph: &CsrGraph,
    state: &ColorState,
    wl: &mut Worklist,
    round: u32,
) -> RoundOutcome {
    let active = wl.current();
    exec.for_each_in_list(active, |u| {
        assign_color(graph, state, u, round);
    });
    exec.for_each_in_list(active, |u| state.commit(u));
    let outcome = {
        let wl = &*wl;
        exec.sum_over_list(wl.current(), |u| resolve_counted(graph, state, u, round, wl))
    };
    wl.swap_and_sort();
    clear_losers(exec, state, wl);
    outcome
}

/// One round that sweeps every node and tests activity per node.
pub fn topology_driven_iteration(
    exec: &Executor,
    graph: &CsrGraph,
    state: &ColorState,
    wl: &mut Worklist,
    round: u32,
) -> RoundOutcome {
    let n = graph.num_nodes();
    exec.for_each_in_range(n, |u| {
        if state.color(u) == UNCOLORED {
            assign_color(graph, state, u, round);
        }
    });
    exec.for_each_in_range(n, |u| {
        if state.stamp(u) == round {
            state.commit(u);
        }
    });
    let outcome = {
        let wl = &*wl;
        exec.sum_over_range(n, |u| {
            if state.stamp(u) == round {
                resolve_counted(graph, state, u, round, wl)
            } else {
                RoundOutcome::default()
            }
        })
    };
    wl.swap_and_sort();
    clear_losers(exec, state, wl);
    outcome
}
