//! Push scheduling: an indirect max-heap and a set-guarded FIFO.
//!
//! Both queues hold *local* indices (discovery order) so their memory is
//! proportional to the visited neighbourhood. The heap orders by decreasing
//! residual, ties broken by smaller [`NodeId`].

use std::collections::VecDeque;

use crate::graph::NodeId;

const NOT_QUEUED: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QueueKind {
    /// Largest residual first.
    #[default]
    Priority,
    /// First in, first out; nodes already queued are not enqueued again.
    Fifo,
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    key: f64,
    node: NodeId,
    local: u32,
}

impl Entry {
    // Strict "should be closer to the root than".
    #[inline]
    fn above(&self, other: &Entry) -> bool {
        self.key > other.key || (self.key == other.key && self.node < other.node)
    }
}

/// Binary max-heap with a position index, so the key of any queued element
/// can be changed in `O(log q)`.
#[derive(Debug, Default)]
pub struct IndexedHeap {
    heap: Vec<Entry>,
    pos: Vec<usize>,
}

impl IndexedHeap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, local: u32) -> bool {
        self.pos
            .get(local as usize)
            .is_some_and(|&p| p != NOT_QUEUED)
    }

    /// Inserts `local` or updates its key.
    pub fn set(&mut self, local: u32, node: NodeId, key: f64) {
        let l = local as usize;
        if l >= self.pos.len() {
            self.pos.resize(l + 1, NOT_QUEUED);
        }
        match self.pos[l] {
            NOT_QUEUED => {
                self.heap.push(Entry { key, node, local });
                self.pos[l] = self.heap.len() - 1;
                self.sift_up(self.heap.len() - 1);
            }
            i => {
                let old = self.heap[i].key;
                self.heap[i].key = key;
                if key > old {
                    self.sift_up(i);
                } else {
                    self.sift_down(i);
                }
            }
        }
    }

    /// Top element as `(local, node, key)`.
    pub fn peek(&self) -> Option<(u32, NodeId, f64)> {
        self.heap.first().map(|e| (e.local, e.node, e.key))
    }

    pub fn pop(&mut self) -> Option<(u32, NodeId, f64)> {
        let top = *self.heap.first()?;
        self.remove_at(0);
        Some((top.local, top.node, top.key))
    }

    pub fn remove(&mut self, local: u32) -> bool {
        match self.pos.get(local as usize).copied() {
            Some(i) if i != NOT_QUEUED => {
                self.remove_at(i);
                true
            }
            _ => false,
        }
    }

    fn remove_at(&mut self, i: usize) {
        let last = self.heap.len() - 1;
        self.swap(i, last);
        let gone = self.heap.pop().unwrap();
        self.pos[gone.local as usize] = NOT_QUEUED;
        if i < self.heap.len() {
            self.sift_down(i);
            self.sift_up(i);
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.pos[self.heap[a].local as usize] = a;
        self.pos[self.heap[b].local as usize] = b;
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if !self.heap[i].above(&self.heap[parent]) {
                break;
            }
            self.swap(i, parent);
            i = parent;
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < self.heap.len() && self.heap[l].above(&self.heap[best]) {
                best = l;
            }
            if r < self.heap.len() && self.heap[r].above(&self.heap[best]) {
                best = r;
            }
            if best == i {
                break;
            }
            self.swap(i, best);
            i = best;
        }
    }

    pub fn capacity_hint(&self) -> usize {
        self.pos.len()
    }
}

/// FIFO queue that ignores offers of elements already queued.
#[derive(Debug, Default)]
pub struct SetFifo {
    queue: VecDeque<u32>,
    queued: Vec<bool>,
}

impl SetFifo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn contains(&self, local: u32) -> bool {
        self.queued.get(local as usize).copied().unwrap_or(false)
    }

    /// Enqueues `local` unless already present; returns whether it was added.
    pub fn offer(&mut self, local: u32) -> bool {
        let l = local as usize;
        if l >= self.queued.len() {
            self.queued.resize(l + 1, false);
        }
        if self.queued[l] {
            return false;
        }
        self.queued[l] = true;
        self.queue.push_back(local);
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.queue.iter().copied()
    }

    pub fn front(&self) -> Option<u32> {
        self.queue.front().copied()
    }

    pub fn pop(&mut self) -> Option<u32> {
        let local = self.queue.pop_front()?;
        self.queued[local as usize] = false;
        Some(local)
    }

    pub fn remove(&mut self, local: u32) -> bool {
        if !self.contains(local) {
            return false;
        }
        self.queued[local as usize] = false;
        self.queue.retain(|&l| l != local);
        true
    }

    pub fn capacity_hint(&self) -> usize {
        self.queued.len()
    }
}

/// The queue used by a push run.
#[derive(Debug)]
pub enum Scheduler {
    Priority(IndexedHeap),
    Fifo(SetFifo),
}

impl Scheduler {
    pub fn new(kind: QueueKind) -> Self {
        match kind {
            QueueKind::Priority => Scheduler::Priority(IndexedHeap::new()),
            QueueKind::Fifo => Scheduler::Fifo(SetFifo::new()),
        }
    }

    pub fn kind(&self) -> QueueKind {
        match self {
            Scheduler::Priority(_) => QueueKind::Priority,
            Scheduler::Fifo(_) => QueueKind::Fifo,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Scheduler::Priority(h) => h.len(),
            Scheduler::Fifo(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, local: u32) -> bool {
        match self {
            Scheduler::Priority(h) => h.contains(local),
            Scheduler::Fifo(f) => f.contains(local),
        }
    }

    /// Notifies the queue that `local` now holds residual `key`. Returns
    /// whether the queue changed.
    pub fn offer(&mut self, local: u32, node: NodeId, key: f64) -> bool {
        match self {
            Scheduler::Priority(h) => {
                h.set(local, node, key);
                true
            }
            Scheduler::Fifo(f) => f.offer(local),
        }
    }

    pub fn remove(&mut self, local: u32) -> bool {
        match self {
            Scheduler::Priority(h) => h.remove(local),
            Scheduler::Fifo(f) => f.remove(local),
        }
    }

    pub(crate) fn capacity_hint(&self) -> usize {
        match self {
            Scheduler::Priority(h) => h.capacity_hint(),
            Scheduler::Fifo(f) => f.capacity_hint(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn heap_returns_max_residual() {
        let mut h = IndexedHeap::new();
        h.set(0, NodeId(1), 0.3);
        h.set(1, NodeId(2), 0.5);
        assert_eq!(h.pop().map(|e| e.1), Some(NodeId(2)));
        assert_eq!(h.pop().map(|e| e.1), Some(NodeId(1)));
        assert!(h.pop().is_none());
    }

    #[test]
    fn heap_ties_go_to_smaller_node() {
        let mut h = IndexedHeap::new();
        h.set(0, NodeId(2), 0.5);
        h.set(1, NodeId(1), 0.5);
        assert_eq!(h.pop().map(|e| e.1), Some(NodeId(1)));
    }

    #[test]
    fn heap_increase_and_remove() {
        let mut h = IndexedHeap::new();
        for i in 0..5u32 {
            h.set(i, NodeId(i as usize), i as f64);
        }
        h.set(0, NodeId(0), 10.0);
        assert_eq!(h.peek().map(|e| e.0), Some(0));
        assert!(h.remove(0));
        assert!(!h.remove(0));
        assert!(!h.contains(0));
        assert_eq!(h.pop().map(|e| e.0), Some(4));
    }

    #[test]
    fn fifo_drops_duplicates() {
        let mut f = SetFifo::new();
        assert!(f.offer(4));
        assert!(f.offer(7));
        assert!(!f.offer(4));
        assert_eq!(f.pop(), Some(4));
        assert_eq!(f.pop(), Some(7));
        assert_eq!(f.pop(), None);
        // once dequeued it may come back
        assert!(f.offer(4));
    }

    proptest! {
        #[test]
        fn heap_pops_in_order(keys in prop::collection::vec(0u32..50, 1..60)) {
            let mut h = IndexedHeap::new();
            let mut model = std::collections::BTreeMap::new();
            for (i, k) in keys.iter().enumerate() {
                // several updates to the same slot exercise both sift directions
                let local = (i % 17) as u32;
                let node = NodeId(16 - local as usize);
                h.set(local, node, *k as f64);
                model.insert(local, (*k as f64, node));
            }
            let mut expected: Vec<_> = model.into_iter().collect();
            expected.sort_by(|a, b| b.1.0.total_cmp(&a.1.0).then(a.1.1.cmp(&b.1.1)));
            let popped: Vec<_> = std::iter::from_fn(|| h.pop()).map(|e| e.0).collect();
            let expected: Vec<_> = expected.into_iter().map(|e| e.0).collect();
            prop_assert_eq!(popped, expected);
        }
    }
}
