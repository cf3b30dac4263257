use std::fmt;
use std::str::FromStr;

use crate::Error;

/// Step-1 seed selection architectures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Architecture {
    /// 16 single-register insertion cells.
    Spatial,
    /// 8 two-register cells with a single-stage 6-sorter.
    Modified,
    /// Streaming merge tree keeping the top 16 per level.
    MergeTree,
}

impl Architecture {
    pub const ALL: [Architecture; 3] = [
        Architecture::Spatial,
        Architecture::Modified,
        Architecture::MergeTree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Architecture::Spatial => "spatial",
            Architecture::Modified => "modified",
            Architecture::MergeTree => "mergetree",
        }
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Architecture::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownArchitecture(s.to_owned()))
    }
}

/// Step-1 latency: buffering `B` and sorting `S` overlap, so the step takes
/// `max(B, S)` cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatencyReport {
    pub architecture: Architecture,
    pub buffering_cycles: u32,
    pub sorting_cycles: u32,
}

impl LatencyReport {
    pub fn step1_cycles(&self) -> u32 {
        self.buffering_cycles.max(self.sorting_cycles)
    }
}
