//! Double-buffered worklist of active node ids.
//!
//! Workers read `current` and append to `next` through a shared atomic cursor,
//! one `fetch_add` per push. [`Worklist::swap_and_sort`] runs at the quiescent
//! point between iterations and promotes `next` to a sorted `current`.

use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};

use crate::graph::NodeId;

#[derive(Debug)]
pub struct Worklist {
    current: Vec<NodeId>,
    next: Box<[AtomicU32]>,
    next_len: AtomicUsize,
}

impl Worklist {
    /// Empty worklist able to hold every id below `capacity`.
    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            current: Vec::new(),
            next: (0..capacity).map(|_| AtomicU32::new(0)).collect(),
            next_len: AtomicUsize::new(0),
        }
    }

    /// Worklist whose current list is every node `0..n`.
    pub fn init_full(n: usize) -> Self {
        let mut wl = Self::with_capacity(n);
        wl.current = (0..n as NodeId).collect();
        wl
    }

    pub fn capacity(&self) -> usize {
        self.next.len()
    }

    pub fn current(&self) -> &[NodeId] {
        &self.current
    }

    pub fn len(&self) -> usize {
        self.current.len()
    }

    pub fn is_empty(&self) -> bool {
        self.current.is_empty()
    }

    /// Number of ids pushed so far in this iteration.
    pub fn pending(&self) -> usize {
        self.next_len.load(Ordering::Acquire).min(self.capacity())
    }

    /// Appends `node` to the next list. Safe to call from many workers at once.
    ///
    /// # Panics
    ///
    /// Panics if `node` is out of range or if more than `capacity` ids are
    /// pushed in one iteration; both mean the at-most-once-per-node contract
    /// was broken by the caller.
    #[inline]
    pub fn push(&self, node: NodeId) {
        assert!(
            (node as usize) < self.capacity(),
            "worklist push of node {node} exceeds capacity {}",
            self.capacity()
        );
        let slot = self.next_len.fetch_add(1, Ordering::AcqRel);
        assert!(
            slot < self.capacity(),
            "worklist overflow: more than {} pushes in one iteration",
            self.capacity()
        );
        self.next[slot].store(node, Ordering::Relaxed);
    }

    /// Promotes the next list to current (sorted ascending) and clears next.
    ///
    /// Returns the new current length.
    pub fn swap_and_sort(&mut self) -> usize {
        let len = *self.next_len.get_mut();
        self.current.clear();
        self.current
            .extend(self.next[..len].iter_mut().map(|slot| *slot.get_mut()));
        self.current.sort_unstable();
        debug_assert!(
            self.current.windows(2).all(|w| w[0] != w[1]),
            "duplicate id pushed within one iteration"
        );
        *self.next_len.get_mut() = 0;
        self.current.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_full_lists_every_node() {
        assert_eq!(Worklist::init_full(3).current(), &[0, 1, 2]);
        assert!(Worklist::init_full(0).is_empty());
    }

    #[test]
    fn swap_without_pushes_empties() {
        let mut wl = Worklist::init_full(5);
        assert_eq!(wl.swap_and_sort(), 0);
        assert!(wl.is_empty());
    }

    #[test]
    fn push_then_swap_sorts() {
        let mut wl = Worklist::with_capacity(8);
        wl.push(7);
        assert_eq!(wl.pending(), 1);
        wl.push(4);
        wl.push(1);
        wl.push(3);
        assert_eq!(wl.swap_and_sort(), 4);
        assert_eq!(wl.current(), &[1, 3, 4, 7]);
        assert_eq!(wl.pending(), 0);

        let mut wl = Worklist::init_full(3);
        wl.push(2);
        wl.push(0);
        wl.swap_and_sort();
        assert_eq!(wl.current(), &[0, 2]);
    }

    #[test]
    fn concurrent_pushes_all_retained() {
        let mut wl = Worklist::with_capacity(1000);
        std::thread::scope(|s| {
            for w in 0..4u32 {
                let wl = &wl;
                s.spawn(move || {
                    for k in (w..1000).step_by(4) {
                        wl.push(k);
                    }
                });
            }
        });
        assert_eq!(wl.swap_and_sort(), 1000);
        assert!(wl.current().iter().copied().eq(0..1000));
    }

    #[test]
    #[should_panic(expected = "exceeds capacity")]
    fn push_out_of_range_is_fatal() {
        Worklist::with_capacity(3).push(3);
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn too_many_pushes_is_fatal() {
        let wl = Worklist::with_capacity(2);
        wl.push(0);
        wl.push(1);
        wl.push(0);
    }
}
