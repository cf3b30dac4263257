//! Cycle-accounted model of a tau-trigger front end.
//!
//! Step 1 buffers a 36-region event and picks the 16 highest-pT seeds out of
//! the 144 seed candidates (the first four charged tracks of every region).
//! Three architectures are modeled: a 16-cell spatial insertion chain, an
//! 8-cell chain of two-register cells built on a single-stage 6-sorter, and a
//! streaming merge tree that keeps the best 16 at every level. Step 2 gathers
//! up to 30 candidates around each seed from a 2x2 region neighborhood on a
//! 9x4 torus grid, addressed either by flat region index or by the
//! parity-encoded row/column selector.
//!
//! Every sorter is generic over [`Keyed`] records, so the same networks run
//! on bare integers (exhaustive checks) and on full [`Track`] records.

pub mod cli;
pub mod cost;
mod error;
pub mod event;
mod key;
mod latency;
pub mod merge_tree;
pub mod oracle;
pub mod report;
pub mod select;
pub mod spatial;

pub use error::{Error, Result};
pub use event::{Event, GridCoord, Origin, Quadrant, Region, Toward, Track, TrackKind};
pub use key::{sequence, Keyed, Sequenced};
pub use latency::{Architecture, LatencyReport};
pub use oracle::RankedSeeds;

/// Regions per event.
pub const REGIONS: usize = 36;
/// Seed candidates taken from the head of each region's charged block.
pub const SEEDS_PER_REGION: usize = 4;
/// Seed candidates per event.
pub const SEED_CANDIDATES: usize = REGIONS * SEEDS_PER_REGION;
/// Seeds kept by step 1.
pub const SEEDS: usize = 16;
/// Buffering latency of the step-1 front end, in cycles.
pub const DEFAULT_BUFFERING_CYCLES: u32 = 56;
/// Upper bound on candidates gathered per seed.
pub const CANDIDATE_CAP: usize = 30;
