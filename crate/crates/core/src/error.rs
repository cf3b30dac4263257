use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("region index {0} out of range 0..36")]
    RegionIndex(usize),

    #[error("event must hold exactly 36 regions, got {0}")]
    RegionCount(usize),

    #[error("grid coordinate ({row}, {col}) out of range 9x4")]
    GridCoord { row: usize, col: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: event {event}: {msg}")]
    EventShape {
        line: usize,
        event: u64,
        msg: String,
    },

    #[error("line {line}: pt value {value} does not fit in 16 bits")]
    PtRange { line: usize, value: u64 },

    #[error("malformed 4-block: {0}")]
    Block(&'static str),

    #[error("input not sorted descending: {0}")]
    Unsorted(&'static str),

    #[error("requested top {k} of only {len} elements")]
    TopK { k: usize, len: usize },

    #[error("fill array overflow: capacity {0}")]
    Overflow(usize),

    #[error("regions {0:?} do not form a 2x2 neighborhood")]
    NotNeighborhood([usize; 4]),

    #[error("invalid region selector: {0}")]
    Selector(&'static str),

    #[error("unknown architecture {0:?}")]
    UnknownArchitecture(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
