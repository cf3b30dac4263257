//! Tracks, regions, events and the 9x4 region grid.

mod generate;
mod grid;
mod io;

pub use generate::generate_event;
pub use grid::{coord_of, index_of, neighborhood, GridCoord, Quadrant, GRID_COLS, GRID_ROWS};
pub use io::{parse_events, read_events, render_events, write_events};

use crate::{Error, Keyed, Result, REGIONS, SEEDS_PER_REGION, SEED_CANDIDATES};

pub const CHARGED: usize = 22;
pub const PHOTON: usize = 13;
pub const NEUTRAL: usize = 10;
pub const TRACKS_PER_REGION: usize = CHARGED + PHOTON + NEUTRAL;

/// Which half of its region a track sits in, along one grid axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Toward {
    #[default]
    Lower,
    Higher,
}

impl Toward {
    pub fn direction(self) -> i8 {
        match self {
            Toward::Lower => -1,
            Toward::Higher => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum TrackKind {
    #[default]
    Charged,
    Photon,
    Neutral,
}

/// Position of a track within its event: region index and the slot within
/// the region's 45-track record (charged, then photon, then neutral).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Origin {
    pub region: u8,
    pub slot: u8,
}

/// One particle measurement. Six members; sorters move the whole record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Track {
    pub pt: u16,
    pub sub_row: Toward,
    pub sub_col: Toward,
    pub kind: TrackKind,
    pub quality: u8,
    pub origin: Origin,
}

impl Keyed for Track {
    type Key = u16;

    #[inline]
    fn key(&self) -> u16 {
        self.pt
    }
}

impl Track {
    /// The neighborhood direction this track picks when used as a seed.
    pub fn quadrant(&self) -> Quadrant {
        Quadrant {
            row_dir: self.sub_row.direction(),
            col_dir: self.sub_col.direction(),
        }
    }
}

/// One grid cell's worth of tracks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    index: u8,
    pub charged: [Track; CHARGED],
    pub photon: [Track; PHOTON],
    pub neutral: [Track; NEUTRAL],
}

impl Region {
    /// Builds a region, stamping each track's kind and origin from its
    /// position. Fails if the charged prefix is not sorted descending.
    pub fn new(
        index: usize,
        charged: [Track; CHARGED],
        photon: [Track; PHOTON],
        neutral: [Track; NEUTRAL],
    ) -> Result<Self> {
        if index >= REGIONS {
            return Err(Error::RegionIndex(index));
        }
        let mut region = Region {
            index: index as u8,
            charged,
            photon,
            neutral,
        };
        let index = index as u8;
        for (slot, t) in region.tracks_mut().enumerate() {
            t.origin = Origin {
                region: index,
                slot: slot as u8,
            };
            t.kind = match slot {
                s if s < CHARGED => TrackKind::Charged,
                s if s < CHARGED + PHOTON => TrackKind::Photon,
                _ => TrackKind::Neutral,
            };
        }
        if !region.seed_block().windows(2).all(|w| w[0].pt >= w[1].pt) {
            return Err(Error::Unsorted("charged seed prefix of region"));
        }
        Ok(region)
    }

    pub fn index(&self) -> usize {
        self.index as usize
    }

    /// The four seed candidates, descending by pt.
    pub fn seed_block(&self) -> &[Track] {
        &self.charged[..SEEDS_PER_REGION]
    }

    /// All 45 tracks in record order.
    pub fn tracks(&self) -> impl Iterator<Item = &Track> {
        self.charged
            .iter()
            .chain(self.photon.iter())
            .chain(self.neutral.iter())
    }

    fn tracks_mut(&mut self) -> impl Iterator<Item = &mut Track> {
        self.charged
            .iter_mut()
            .chain(self.photon.iter_mut())
            .chain(self.neutral.iter_mut())
    }
}

/// The full 36-region stream of one bunch crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub id: u64,
    regions: Box<[Region; REGIONS]>,
}

impl Event {
    pub fn new(id: u64, regions: Vec<Region>) -> Result<Self> {
        let regions: Box<[Region; REGIONS]> = regions
            .into_boxed_slice()
            .try_into()
            .map_err(|v: Box<[Region]>| Error::RegionCount(v.len()))?;
        if let Some(i) = (0..REGIONS).find(|&i| regions[i].index() != i) {
            return Err(Error::RegionIndex(regions[i].index()));
        }
        Ok(Event { id, regions })
    }

    pub fn regions(&self) -> &[Region; REGIONS] {
        &self.regions
    }

    pub fn region(&self, index: usize) -> &Region {
        &self.regions[index]
    }

    /// The 144 seed candidates in stream order; every consecutive 4-block is
    /// descending.
    pub fn seed_candidates(&self) -> Vec<Track> {
        let mut out = Vec::with_capacity(SEED_CANDIDATES);
        for r in self.regions.iter() {
            out.extend_from_slice(r.seed_block());
        }
        out
    }

    /// Seed candidates grouped per region, as they arrive on the input port.
    pub fn seed_blocks(&self) -> impl Iterator<Item = [Track; SEEDS_PER_REGION]> + '_ {
        self.regions
            .iter()
            .map(|r| [r.charged[0], r.charged[1], r.charged[2], r.charged[3]])
    }
}

/// Free-function form of [`Event::seed_candidates`].
pub fn seed_candidates(e: &Event) -> Vec<Track> {
    e.seed_candidates()
}
