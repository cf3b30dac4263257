//! Spatial insertion sorters.
//!
//! A chain of cells sits behind a one-cycle input register. Every cycle one
//! presorted 4-block enters the chain and each block moves one cell further.
//! A cell keeps the best element(s) it has seen and forwards the rest, still
//! as a descending 4-block. After the last block drains, cell `i` holds rank
//! `i` (or ranks `2i`, `2i + 1` for pair cells).

mod sort6;

pub use sort6::{comparator_sites as sort6_comparator_sites, sort6, Lit, Rule, Src, SORT6_RULES};

use crate::cost::Probe;
use crate::oracle::RankedSeeds;
use crate::{sequence, Architecture, Error, Event, Keyed, LatencyReport, Result, Sequenced, Track};
use crate::{SEEDS, SEEDS_PER_REGION};

/// Cells in the single-register chain.
pub const SPATIAL_CELLS: usize = 16;
/// Cells in the two-register chain.
pub const PAIR_CELLS: usize = 8;

/// Comparator sites of one insertion cell: the head comparison and three
/// insertion-position comparisons.
pub const INSERTION_CELL_SITES: usize = 4;

#[inline]
fn rank<T: Keyed>(x: &Option<T>) -> Option<T::Key> {
    x.as_ref().map(Keyed::key)
}

/// Four slots, present entries packed first and descending by key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block4<T>([Option<T>; 4]);

impl<T: Keyed> Block4<T> {
    pub fn new(slots: [Option<T>; 4]) -> Result<Self> {
        if slots.windows(2).any(|w| w[0].is_none() && w[1].is_some()) {
            return Err(Error::Block("empty slot before a present one"));
        }
        if slots.windows(2).any(|w| rank(&w[1]) > rank(&w[0])) {
            return Err(Error::Block("entries not descending"));
        }
        Ok(Block4(slots))
    }

    pub fn full(items: [T; 4]) -> Result<Self> {
        Self::new(items.map(Some))
    }

    pub fn empty() -> Self {
        Block4([None, None, None, None])
    }

    pub fn slots(&self) -> &[Option<T>; 4] {
        &self.0
    }

    pub fn into_slots(self) -> [Option<T>; 4] {
        self.0
    }

    pub fn present(&self) -> impl Iterator<Item = &T> {
        self.0.iter().flatten()
    }
}

/// One pipeline stage of a sorter chain.
pub trait Cell<T> {
    fn step_probed<P: Probe>(&mut self, inp: Block4<T>, probe: &mut P, unit: u16) -> Block4<T>;

    /// Held elements, best first.
    fn held(&self) -> Vec<Option<T>>;
}

/// Holds the running maximum (`CURR_REG`) of everything it has received.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertionCell<T> {
    pub curr: Option<T>,
}

impl<T> Default for InsertionCell<T> {
    fn default() -> Self {
        InsertionCell { curr: None }
    }
}

impl<T: Keyed> InsertionCell<T> {
    pub fn step(&mut self, inp: Block4<T>) -> Block4<T> {
        self.step_probed(inp, &mut (), 0)
    }
}

impl<T: Keyed> Cell<T> for InsertionCell<T> {
    fn step_probed<P: Probe>(&mut self, inp: Block4<T>, probe: &mut P, unit: u16) -> Block4<T> {
        let [head, t1, t2, t3] = inp.0;
        // The block is sorted, so the best element is either curr or head.
        probe.compared(unit, 0);
        if rank(&head) <= rank(&self.curr) {
            return Block4([head, t1, t2, t3]);
        }
        let old = std::mem::replace(&mut self.curr, head);
        let tail = [t1, t2, t3];
        let mut pos = 0;
        for (i, t) in tail.iter().enumerate() {
            probe.compared(unit, 1 + i as u8);
            if rank(t) > rank(&old) {
                pos += 1;
            }
        }
        let mut tail = tail.into_iter();
        let mut out: [Option<T>; 4] = [None, None, None, None];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = if i == pos {
                old.clone()
            } else {
                tail.next().flatten()
            };
        }
        Block4(out)
    }

    fn held(&self) -> Vec<Option<T>> {
        vec![self.curr.clone()]
    }
}

/// Holds the top two (`REG0 >= REG1`) of everything it has received.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCell<T> {
    pub reg0: Option<T>,
    pub reg1: Option<T>,
}

impl<T> Default for PairCell<T> {
    fn default() -> Self {
        PairCell {
            reg0: None,
            reg1: None,
        }
    }
}

impl<T: Keyed> PairCell<T> {
    pub fn step(&mut self, inp: Block4<T>) -> Block4<T> {
        self.step_probed(inp, &mut (), 0)
    }
}

impl<T: Keyed> Cell<T> for PairCell<T> {
    fn step_probed<P: Probe>(&mut self, inp: Block4<T>, probe: &mut P, unit: u16) -> Block4<T> {
        let reg = [self.reg0.take(), self.reg1.take()];
        let [o1, o2, o3, o4, o5, o6] =
            sort6::sort6_by(reg, inp.0, |x, y| rank(x) > rank(y), probe, unit);
        self.reg0 = o1;
        self.reg1 = o2;
        Block4([o3, o4, o5, o6])
    }

    fn held(&self) -> Vec<Option<T>> {
        vec![self.reg0.clone(), self.reg1.clone()]
    }
}

/// Result of streaming blocks through a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainRun<T> {
    /// Held elements after drain, cell by cell, best first.
    pub ranked: Vec<Option<T>>,
    /// Elements pushed out of the last cell.
    pub discarded: Vec<T>,
    /// Cycle in which the last cell finished its last block.
    pub sorting_cycles: u32,
}

/// Clocked model of a cell chain behind a port and an input register.
///
/// Region `t` occupies the input port in cycle `t + 1`, the input register in
/// cycle `t + 2` and cell `j` in cycle `t + 3 + j`, so `n` blocks through `m`
/// cells finish in cycle `n + 1 + m`.
pub fn run_cells<T: Keyed, C: Cell<T>, P: Probe>(
    cells: &mut [C],
    blocks: impl IntoIterator<Item = Block4<T>>,
    probe: &mut P,
) -> ChainRun<T> {
    let m = cells.len();
    let mut blocks = blocks.into_iter();
    // stages[0] = port, stages[1] = input register, stages[2 + j] = cell j.
    let mut stages: Vec<Option<Block4<T>>> = vec![None; m + 2];
    let mut discarded = Vec::new();
    let mut cycle = 0u32;
    let mut last_active = 0u32;
    loop {
        if let Some(out) = stages[m + 1].take() {
            discarded.extend(out.0.into_iter().flatten());
        }
        for k in (1..m + 2).rev() {
            stages[k] = stages[k - 1].take();
        }
        stages[0] = blocks.next();
        if stages.iter().all(Option::is_none) {
            break;
        }
        cycle += 1;
        for (j, cell) in cells.iter_mut().enumerate() {
            if let Some(b) = stages[2 + j].take() {
                stages[2 + j] = Some(cell.step_probed(b, probe, j as u16));
                last_active = cycle;
            }
        }
    }
    ChainRun {
        ranked: cells.iter().flat_map(Cell::held).collect(),
        discarded,
        sorting_cycles: last_active,
    }
}

/// Tags each seed candidate with its stream position and packs the event's
/// regions into input blocks.
pub(crate) fn tagged_blocks(e: &Event) -> Vec<Block4<Sequenced<Track>>> {
    let tagged: Vec<_> = sequence(e.seed_candidates()).collect();
    tagged
        .chunks(SEEDS_PER_REGION)
        .map(|c| Block4::full([c[0], c[1], c[2], c[3]]).expect("region seed block is sorted"))
        .collect()
}

pub(crate) fn untag(ranked: Vec<Option<Sequenced<Track>>>) -> RankedSeeds {
    let seeds = ranked
        .into_iter()
        .map(|s| s.expect("144 candidates fill every register").item)
        .collect();
    RankedSeeds::new(seeds).expect("chain output is sorted")
}

pub fn run_chain_probed<P: Probe>(
    e: &Event,
    buffering_cycles: u32,
    probe: &mut P,
) -> (RankedSeeds, LatencyReport) {
    let mut cells = vec![InsertionCell::default(); SPATIAL_CELLS];
    let run = run_cells(&mut cells, tagged_blocks(e), probe);
    let report = LatencyReport {
        architecture: Architecture::Spatial,
        buffering_cycles,
        sorting_cycles: run.sorting_cycles,
    };
    (untag(run.ranked), report)
}

/// Step 1 on the 16-cell insertion chain.
pub fn run_chain(e: &Event, buffering_cycles: u32) -> (RankedSeeds, LatencyReport) {
    run_chain_probed(e, buffering_cycles, &mut ())
}

pub fn run_pair_chain_probed<P: Probe>(
    e: &Event,
    buffering_cycles: u32,
    probe: &mut P,
) -> (RankedSeeds, LatencyReport) {
    let mut cells = vec![PairCell::default(); PAIR_CELLS];
    let run = run_cells(&mut cells, tagged_blocks(e), probe);
    debug_assert_eq!(run.ranked.len(), SEEDS);
    let report = LatencyReport {
        architecture: Architecture::Modified,
        buffering_cycles,
        sorting_cycles: run.sorting_cycles,
    };
    (untag(run.ranked), report)
}

/// Step 1 on the 8-cell two-register chain.
pub fn run_pair_chain(e: &Event, buffering_cycles: u32) -> (RankedSeeds, LatencyReport) {
    run_pair_chain_probed(e, buffering_cycles, &mut ())
}

/// Untagged chain over arbitrary blocks and cell count. Ties are resolved by
/// the cells' strict comparisons alone.
pub fn run_insertion_chain<T: Keyed>(
    blocks: impl IntoIterator<Item = Block4<T>>,
    cells: usize,
) -> ChainRun<T> {
    let mut cells = vec![InsertionCell::default(); cells];
    run_cells(&mut cells, blocks, &mut ())
}

pub fn run_pair_cells<T: Keyed>(
    blocks: impl IntoIterator<Item = Block4<T>>,
    cells: usize,
) -> ChainRun<T> {
    let mut cells = vec![PairCell::default(); cells];
    run_cells(&mut cells, blocks, &mut ())
}
