//! Streaming merge tree.
//!
//! Level 1 is 16 insertion-sorted arrays of 9 that fill while the event is
//! buffered, each region's four candidates going to four different arrays.
//! Four merge levels (8, 4, 2, 1 nodes) then pairwise-merge sorted streams,
//! passing on only the best 16 of each pair. Discarded elements still have
//! to be read out of the stream, one per cycle.

use std::collections::VecDeque;

use crate::cost::Probe;
use crate::oracle::{is_sorted_desc, RankedSeeds};
use crate::spatial::{tagged_blocks, untag, Block4};
use crate::{Architecture, Error, Event, Keyed, LatencyReport, Result, Track, SEEDS_PER_REGION};

pub const FILL_ARRAYS: usize = 16;
pub const FILL_CAPACITY: usize = 9;
/// Elements each merge node passes on.
pub const KEEP: usize = 16;
/// Merge nodes in the tree (8 + 4 + 2 + 1).
pub const MERGE_NODES: usize = FILL_ARRAYS - 1;

/// Array assignment for the four candidates of region `t`: candidate `c`
/// goes to array `(4t + c) mod 16`.
pub fn distribute<T>(
    region: usize,
    candidates: [T; SEEDS_PER_REGION],
) -> [(usize, T); SEEDS_PER_REGION] {
    let mut c = 0;
    candidates.map(|x| {
        let slot = (SEEDS_PER_REGION * region + c) % FILL_ARRAYS;
        c += 1;
        (slot, x)
    })
}

/// A level-1 array, kept sorted descending as elements arrive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillArray<T> {
    slots: Vec<T>,
}

impl<T> Default for FillArray<T> {
    fn default() -> Self {
        FillArray {
            slots: Vec::with_capacity(FILL_CAPACITY),
        }
    }
}

impl<T: Keyed> FillArray<T> {
    pub fn insert(&mut self, x: T) -> Result<()> {
        self.insert_probed(x, &mut (), 0)
    }

    /// The new element is compared against every occupied slot; it lands
    /// after all elements that are not smaller, shifting the rest down.
    pub fn insert_probed<P: Probe>(&mut self, x: T, probe: &mut P, unit: u16) -> Result<()> {
        if self.slots.len() == FILL_CAPACITY {
            return Err(Error::Overflow(FILL_CAPACITY));
        }
        let mut pos = 0;
        for (i, s) in self.slots.iter().enumerate() {
            probe.compared(unit, i as u8);
            if s.key() >= x.key() {
                pos += 1;
            }
        }
        self.slots.insert(pos, x);
        Ok(())
    }

    pub fn as_slice(&self) -> &[T] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeOutcome<T> {
    pub kept: Vec<T>,
    pub read: usize,
    pub discarded: usize,
}

/// Merges two descending sequences and keeps the best `cap`. Both inputs are
/// read in full.
pub fn merge_keep_top<T: Keyed>(a: &[T], b: &[T], cap: usize) -> Result<MergeOutcome<T>> {
    if !is_sorted_desc(a) || !is_sorted_desc(b) {
        return Err(Error::Unsorted("merge_keep_top input"));
    }
    let mut node = MergeNode::new(cap);
    let mut sa = Stream::closed(a.iter().cloned());
    let mut sb = Stream::closed(b.iter().cloned());
    let mut out = Stream::default();
    while !node.done {
        node.step(&mut sa, &mut sb, &mut out, &mut (), 0);
    }
    Ok(MergeOutcome {
        kept: out.queue.into(),
        read: node.read,
        discarded: node.discarded,
    })
}

/// A FIFO between tree levels.
#[derive(Debug, Clone)]
pub struct Stream<T> {
    queue: VecDeque<T>,
    closed: bool,
}

impl<T> Default for Stream<T> {
    fn default() -> Self {
        Stream {
            queue: VecDeque::new(),
            closed: false,
        }
    }
}

impl<T> Stream<T> {
    fn closed(items: impl IntoIterator<Item = T>) -> Self {
        Stream {
            queue: items.into_iter().collect(),
            closed: true,
        }
    }

    fn exhausted(&self) -> bool {
        self.closed && self.queue.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NodeStats {
    pub read: usize,
    pub kept: usize,
    pub discarded: usize,
}

/// Pairwise merge stage that passes on at most `cap` elements.
#[derive(Debug, Clone)]
pub struct MergeNode {
    cap: usize,
    read: usize,
    kept: usize,
    discarded: usize,
    done: bool,
}

impl MergeNode {
    pub fn new(cap: usize) -> Self {
        MergeNode {
            cap,
            read: 0,
            kept: 0,
            discarded: 0,
            done: false,
        }
    }

    pub fn stats(&self) -> NodeStats {
        NodeStats {
            read: self.read,
            kept: self.kept,
            discarded: self.discarded,
        }
    }

    /// One cycle: read at most one element. Returns whether an element was
    /// read. The node stalls while an open input is empty.
    fn step<T: Keyed, P: Probe>(
        &mut self,
        a: &mut Stream<T>,
        b: &mut Stream<T>,
        out: &mut Stream<T>,
        probe: &mut P,
        unit: u16,
    ) -> bool {
        if self.done {
            return false;
        }
        let take_b = match (a.queue.front(), b.queue.front()) {
            (Some(x), Some(y)) => {
                probe.compared(unit, 0);
                y.key() > x.key()
            }
            (Some(_), None) if b.closed => false,
            (None, Some(_)) if a.closed => true,
            _ => {
                if a.exhausted() && b.exhausted() {
                    self.done = true;
                    out.closed = true;
                }
                return false;
            }
        };
        let x = if take_b {
            b.queue.pop_front()
        } else {
            a.queue.pop_front()
        }
        .unwrap();
        self.read += 1;
        if self.kept < self.cap {
            out.queue.push_back(x);
            self.kept += 1;
        } else {
            self.discarded += 1;
        }
        if a.exhausted() && b.exhausted() {
            self.done = true;
            out.closed = true;
        }
        true
    }
}

/// Cycle-level outcome of one tree run.
#[derive(Debug, Clone)]
pub struct TreeRun<T> {
    pub output: Vec<T>,
    /// Level-1 fill arrays after buffering.
    pub fill: Vec<FillArray<T>>,
    /// Merge nodes in heap order: 0..8 read fill arrays, 14 is the root.
    pub nodes: Vec<NodeStats>,
    /// Smallest gap, in cycles, between two insertions into the same array.
    pub fill_interval: u32,
    /// Last cycle of the buffering window; merging starts the cycle after.
    pub merge_start: u32,
    pub sorting_cycles: u32,
}

/// Runs the whole tree. Region `t` is distributed in cycle `t + 1`; merging
/// starts once both buffering and the fill are over; each node reads one
/// element per cycle and a pushed element is visible downstream a cycle
/// later.
pub fn run_tree_blocks<T: Keyed, P: Probe>(
    blocks: impl IntoIterator<Item = Block4<T>>,
    buffering_cycles: u32,
    probe: &mut P,
) -> Result<TreeRun<T>> {
    let mut fill: Vec<FillArray<T>> = vec![FillArray::default(); FILL_ARRAYS];
    let mut last_insert = [None::<u32>; FILL_ARRAYS];
    let mut fill_interval = u32::MAX;
    let mut fill_cycles = 0u32;
    for (t, block) in blocks.into_iter().enumerate() {
        let cycle = t as u32 + 1;
        fill_cycles = cycle;
        let [c0, c1, c2, c3] = block.into_slots();
        for (array, x) in distribute(t, [c0, c1, c2, c3]) {
            let Some(x) = x else { continue };
            fill[array].insert_probed(x, probe, array as u16)?;
            if let Some(prev) = last_insert[array] {
                fill_interval = fill_interval.min(cycle - prev);
            }
            last_insert[array] = Some(cycle);
        }
    }

    // streams[0..16] are the fill arrays, node n reads 2n and 2n + 1 and
    // writes 16 + n.
    let mut streams: Vec<Stream<T>> = fill
        .iter()
        .map(|f| Stream::closed(f.as_slice().iter().cloned()))
        .chain((0..MERGE_NODES).map(|_| Stream::default()))
        .collect();
    let mut nodes = vec![MergeNode::new(KEEP); MERGE_NODES];
    let merge_start = buffering_cycles.max(fill_cycles);
    let mut cycle = merge_start;
    let mut last_active = merge_start;
    while !nodes[MERGE_NODES - 1].done {
        cycle += 1;
        // Root first, so a node only sees what its children pushed in
        // earlier cycles.
        for n in (0..MERGE_NODES).rev() {
            let mut a = std::mem::take(&mut streams[2 * n]);
            let mut b = std::mem::take(&mut streams[2 * n + 1]);
            let mut out = std::mem::take(&mut streams[FILL_ARRAYS + n]);
            if nodes[n].step(&mut a, &mut b, &mut out, probe, (FILL_ARRAYS + n) as u16) {
                last_active = cycle;
            }
            streams[2 * n] = a;
            streams[2 * n + 1] = b;
            streams[FILL_ARRAYS + n] = out;
        }
    }
    let output = std::mem::take(&mut streams[FILL_ARRAYS + MERGE_NODES - 1].queue).into();
    Ok(TreeRun {
        output,
        fill,
        nodes: nodes.iter().map(MergeNode::stats).collect(),
        fill_interval,
        merge_start,
        sorting_cycles: last_active,
    })
}

pub fn run_tree_probed<P: Probe>(
    e: &Event,
    buffering_cycles: u32,
    probe: &mut P,
) -> (RankedSeeds, LatencyReport, TreeRun<Track>) {
    let run = run_tree_blocks(tagged_blocks(e), buffering_cycles, probe)
        .expect("36 regions exactly fill the level-1 arrays");
    let seeds = untag(run.output.iter().cloned().map(Some).collect());
    let report = LatencyReport {
        architecture: Architecture::MergeTree,
        buffering_cycles,
        sorting_cycles: run.sorting_cycles,
    };
    let run = TreeRun {
        output: run.output.into_iter().map(|s| s.item).collect(),
        fill: run
            .fill
            .into_iter()
            .map(|f| FillArray {
                slots: f.slots.into_iter().map(|s| s.item).collect(),
            })
            .collect(),
        nodes: run.nodes,
        fill_interval: run.fill_interval,
        merge_start: run.merge_start,
        sorting_cycles: run.sorting_cycles,
    };
    (seeds, report, run)
}

/// Step 1 on the merge tree.
pub fn run_tree(e: &Event, buffering_cycles: u32) -> (RankedSeeds, LatencyReport) {
    let (seeds, report, _) = run_tree_probed(e, buffering_cycles, &mut ());
    (seeds, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::generate_event;
    use crate::oracle::{merge_desc, top_k};
    use crate::DEFAULT_BUFFERING_CYCLES as B;
    use proptest::prelude::*;

    #[test]
    fn distribute_schedule() {
        assert_eq!(
            distribute(0, ['a', 'b', 'c', 'd']).map(|p| p.0),
            [0, 1, 2, 3]
        );
        assert_eq!(
            distribute(4, ['a', 'b', 'c', 'd']).map(|p| p.0),
            [0, 1, 2, 3]
        );
        assert_eq!(distribute(1, [0; 4]).map(|p| p.0), [4, 5, 6, 7]);
        let mut hist = [0; FILL_ARRAYS];
        for t in 0..36 {
            for (a, _) in distribute(t, [(); 4]) {
                hist[a] += 1;
            }
        }
        assert_eq!(hist, [9; FILL_ARRAYS]);
    }

    #[test]
    fn insert_examples() {
        let mut a = FillArray::default();
        a.insert(5u16).unwrap();
        assert_eq!(a.as_slice(), &[5]);
        let mut a = FillArray::default();
        a.insert(9u16).unwrap();
        a.insert(3).unwrap();
        a.insert(5).unwrap();
        assert_eq!(a.as_slice(), &[9, 5, 3]);
        for _ in 0..6 {
            a.insert(1).unwrap();
        }
        assert!(matches!(a.insert(1), Err(Error::Overflow(9))));
    }

    #[test]
    fn merge_examples() {
        let a: Vec<u16> = (0..9).rev().collect();
        let b: Vec<u16> = (10..19).rev().collect();
        let m = merge_keep_top(&a, &b, KEEP).unwrap();
        assert_eq!((m.kept.len(), m.discarded, m.read), (16, 2, 18));
        let m = merge_keep_top::<u16>(&[], &[1], KEEP).unwrap();
        assert_eq!(m.kept, vec![1]);
        let m = merge_keep_top::<u16>(&[], &[], KEEP).unwrap();
        assert!(m.kept.is_empty());
        assert!(merge_keep_top(&[1u16, 2], &[], KEEP).is_err());
    }

    #[test]
    fn tree_matches_oracle_and_is_slow() {
        for seed in 0..30 {
            let e = generate_event(seed, 1);
            let (seeds, rep, run) = run_tree_probed(&e, B, &mut ());
            assert_eq!(seeds.seeds(), &top_k(&e.seed_candidates(), 16).unwrap()[..]);
            assert!(rep.sorting_cycles > 56);
            assert_eq!(run.fill_interval, 4);
            assert_eq!(run.merge_start, 56);
            let level2_reads: usize = run.nodes[..8].iter().map(|n| n.read).sum();
            assert_eq!(level2_reads, 144);
            for n in &run.nodes {
                assert_eq!(n.kept + n.discarded, n.read);
            }
            assert_eq!(run.nodes[MERGE_NODES - 1].kept, 16);
            assert!(run.fill.iter().all(|f| f.len() == FILL_CAPACITY));
        }
    }

    #[test]
    fn level_sizes() {
        let e = generate_event(3, 3);
        let (_, _, run) = run_tree_probed(&e, B, &mut ());
        // Node outputs: level 2 keeps 16 of 18, higher levels 16 of 32.
        for (n, s) in run.nodes.iter().enumerate() {
            let expected_read = if n < 8 { 18 } else { 32 };
            assert_eq!((s.read, s.kept), (expected_read, 16), "node {n}");
        }
    }

    proptest! {
        #[test]
        fn merge_keep_top_is_merge_prefix(mut a in prop::collection::vec(any::<u16>(), 0..20),
                                          mut b in prop::collection::vec(any::<u16>(), 0..20),
                                          cap in 0usize..40) {
            a.sort_unstable_by(|x, y| y.cmp(x));
            b.sort_unstable_by(|x, y| y.cmp(x));
            let m = merge_keep_top(&a, &b, cap).unwrap();
            let full = merge_desc(&a, &b).unwrap();
            prop_assert_eq!(&m.kept[..], &full[..cap.min(full.len())]);
            prop_assert_eq!(m.read, a.len() + b.len());
            prop_assert_eq!(m.kept.len() + m.discarded, m.read);
        }

        #[test]
        fn fill_matches_sort(xs in prop::collection::vec(any::<u16>(), 9)) {
            let mut a = FillArray::default();
            for &x in &xs {
                a.insert(x).unwrap();
            }
            let mut s = xs.clone();
            s.sort_unstable_by(|x, y| y.cmp(x));
            prop_assert_eq!(a.as_slice(), &s[..]);
        }
    }
}
