//! Step 2: per-seed candidate gathering from a 2x2 region neighborhood.
//!
//! The buffered event is kept as a 4x8 array of paired rows (even grid rows
//! on the left half, odd rows on the right) plus a separate last row. A
//! [`RegionSelector`] names a neighborhood by one even and one odd row, one
//! even and one odd column, and whether the last row stands in for one of
//! the two rows. Reading through it needs only 4-way and 2-way selections,
//! where addressing regions by flat index needs a 36-way one per fetch.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::event::{coord_of, neighborhood, GRID_COLS, GRID_ROWS};
use crate::oracle::{top_k, RankedSeeds};
use crate::{Error, Event, Region, Result, Track, CANDIDATE_CAP, REGIONS};

const LAST_ROW: usize = GRID_ROWS - 1;

/// Buffered event in paired-row layout.
#[derive(Debug, Clone)]
pub struct TrackGrid<'e> {
    /// `paired[p][j]`: grid row `2p` at column `j` for `j < 4`, grid row
    /// `2p + 1` at column `j - 4` otherwise.
    pub paired: [[&'e Region; 8]; 4],
    pub last_row: [&'e Region; GRID_COLS],
}

/// Where a region lives in a [`TrackGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSlot {
    Paired(usize, usize),
    LastRow(usize),
}

pub fn grid_slot(region: usize) -> Result<GridSlot> {
    let c = coord_of(region)?;
    Ok(if c.row == LAST_ROW {
        GridSlot::LastRow(c.col)
    } else {
        GridSlot::Paired(c.row / 2, (c.row % 2) * GRID_COLS + c.col)
    })
}

pub fn build_grid(e: &Event) -> TrackGrid<'_> {
    let paired = std::array::from_fn(|p| {
        std::array::from_fn(|j| {
            let row = 2 * p + j / GRID_COLS;
            e.region(row * GRID_COLS + j % GRID_COLS)
        })
    });
    let last_row = std::array::from_fn(|c| e.region(LAST_ROW * GRID_COLS + c));
    TrackGrid { paired, last_row }
}

impl<'e> TrackGrid<'e> {
    pub fn at(&self, slot: GridSlot) -> &'e Region {
        match slot {
            GridSlot::Paired(p, j) => self.paired[p][j],
            GridSlot::LastRow(c) => self.last_row[c],
        }
    }

    /// Every stored region, paired rows first.
    pub fn regions(&self) -> impl Iterator<Item = &'e Region> + '_ {
        self.paired
            .iter()
            .flat_map(|row| row.iter().copied())
            .chain(self.last_row.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowRole {
    Even,
    Odd,
}

/// Parity-encoded address of a 2x2 neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegionSelector {
    even_row_sel: u8,
    odd_row_sel: u8,
    use_last_row: bool,
    last_row_role: RowRole,
    even_col_sel: u8,
    odd_col_sel: u8,
}

/// Grid rows and columns of a neighborhood, by role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decoded {
    pub even_row: usize,
    pub odd_row: usize,
    pub even_col: usize,
    pub odd_col: usize,
}

impl Decoded {
    /// `[[even row: even col, odd col], [odd row: even col, odd col]]`.
    pub fn regions(&self) -> [[usize; 2]; 2] {
        [self.even_row, self.odd_row]
            .map(|r| [r * GRID_COLS + self.even_col, r * GRID_COLS + self.odd_col])
    }

    pub fn region_set(&self) -> BTreeSet<usize> {
        self.regions().into_iter().flatten().collect()
    }
}

impl RegionSelector {
    pub fn new(
        even_row_sel: u8,
        odd_row_sel: u8,
        use_last_row: bool,
        last_row_role: RowRole,
        even_col_sel: u8,
        odd_col_sel: u8,
    ) -> Result<Self> {
        if even_row_sel > 3 || odd_row_sel > 3 {
            return Err(Error::Selector("row select out of range 0..4"));
        }
        if even_col_sel > 1 || odd_col_sel > 1 {
            return Err(Error::Selector("column select out of range 0..2"));
        }
        let s = RegionSelector {
            even_row_sel,
            odd_row_sel,
            use_last_row,
            last_row_role,
            even_col_sel,
            odd_col_sel,
        };
        let d = s.decode();
        let rows_adjacent = d.even_row.abs_diff(d.odd_row) == 1
            || (d.even_row.min(d.odd_row) == 0 && d.even_row.max(d.odd_row) == LAST_ROW);
        if !rows_adjacent {
            return Err(Error::Selector("rows are not adjacent on the torus"));
        }
        if d.even_col.abs_diff(d.odd_col) != 1 {
            return Err(Error::Selector("columns are not adjacent"));
        }
        Ok(s)
    }

    pub fn even_row_sel(&self) -> u8 {
        self.even_row_sel
    }
    pub fn odd_row_sel(&self) -> u8 {
        self.odd_row_sel
    }
    pub fn use_last_row(&self) -> bool {
        self.use_last_row
    }
    pub fn last_row_role(&self) -> RowRole {
        self.last_row_role
    }
    pub fn even_col_sel(&self) -> u8 {
        self.even_col_sel
    }
    pub fn odd_col_sel(&self) -> u8 {
        self.odd_col_sel
    }

    pub fn decode(&self) -> Decoded {
        let mut even_row = 2 * self.even_row_sel as usize;
        let mut odd_row = 2 * self.odd_row_sel as usize + 1;
        if self.use_last_row {
            match self.last_row_role {
                RowRole::Even => even_row = LAST_ROW,
                RowRole::Odd => odd_row = LAST_ROW,
            }
        }
        Decoded {
            even_row,
            odd_row,
            even_col: 2 * self.even_col_sel as usize,
            odd_col: 2 * self.odd_col_sel as usize + 1,
        }
    }
}

/// Assigns row and column roles to a 2x2 neighborhood. Row 8 pairs with row
/// 0 across the seam (taking the odd role) or with row 7 (taking the even
/// role).
pub fn arrange(regions: &BTreeSet<usize>) -> Result<Decoded> {
    let as_array = || {
        let mut a = [usize::MAX; 4];
        for (slot, &r) in a.iter_mut().zip(regions) {
            *slot = r;
        }
        a
    };
    let bad = || Error::NotNeighborhood(as_array());
    if regions.len() != 4 {
        return Err(bad());
    }
    let mut rows = BTreeSet::new();
    let mut cols = BTreeSet::new();
    for &r in regions {
        let c = coord_of(r)?;
        rows.insert(c.row);
        cols.insert(c.col);
    }
    let (&[r0, r1], &[c0, c1]) = (
        rows.iter()
            .copied()
            .collect::<Vec<_>>()
            .as_slice()
            .try_into()
            .map_err(|_| bad())?,
        cols.iter()
            .copied()
            .collect::<Vec<_>>()
            .as_slice()
            .try_into()
            .map_err(|_| bad())?,
    );
    if c1 - c0 != 1 {
        return Err(bad());
    }
    let (even_row, odd_row) = match (r0, r1) {
        (0, LAST_ROW) => (0, LAST_ROW),
        (a, LAST_ROW) if a == LAST_ROW - 1 => (LAST_ROW, a),
        (a, b) if b - a == 1 => {
            if a % 2 == 0 {
                (a, b)
            } else {
                (b, a)
            }
        }
        _ => return Err(bad()),
    };
    let (even_col, odd_col) = if c0 % 2 == 0 { (c0, c1) } else { (c1, c0) };
    Ok(Decoded {
        even_row,
        odd_row,
        even_col,
        odd_col,
    })
}

pub fn selector_from_neighborhood(regions: &BTreeSet<usize>) -> Result<RegionSelector> {
    let d = arrange(regions)?;
    let (even_row_sel, odd_row_sel, use_last_row, role) = match (d.even_row, d.odd_row) {
        (LAST_ROW, odd) => (0, (odd / 2) as u8, true, RowRole::Even),
        (even, LAST_ROW) => ((even / 2) as u8, 0, true, RowRole::Odd),
        (even, odd) => ((even / 2) as u8, (odd / 2) as u8, false, RowRole::Even),
    };
    RegionSelector::new(
        even_row_sel,
        odd_row_sel,
        use_last_row,
        role,
        (d.even_col / 2) as u8,
        (d.odd_col / 2) as u8,
    )
}

/// The four regions of a neighborhood as `tRowEven` / `tRowOdd` picks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block2x2<'e> {
    /// Even-role row: (even column, odd column).
    pub row_even: [&'e Region; 2],
    /// Odd-role row: (even column, odd column).
    pub row_odd: [&'e Region; 2],
}

impl<'e> Block2x2<'e> {
    pub fn region_indices(&self) -> [[usize; 2]; 2] {
        [self.row_even, self.row_odd].map(|r| r.map(Region::index))
    }

    pub fn regions(&self) -> impl Iterator<Item = &'e Region> {
        self.row_even.into_iter().chain(self.row_odd)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SiteStats {
    pub fan_in: usize,
    pub count: u64,
}

/// Fan-in and use count of every data-dependent selection site.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SelectorStats {
    sites: BTreeMap<&'static str, SiteStats>,
}

impl SelectorStats {
    pub fn record(&mut self, site: &'static str, fan_in: usize) {
        let s = self
            .sites
            .entry(site)
            .or_insert(SiteStats { fan_in, count: 0 });
        debug_assert_eq!(s.fan_in, fan_in, "site {site} changed width");
        s.fan_in = s.fan_in.max(fan_in);
        s.count += 1;
    }

    /// Adds another accumulator's counts into this one.
    pub fn merge(&mut self, other: &SelectorStats) {
        for (site, s) in &other.sites {
            let e = self.sites.entry(site).or_default();
            e.fan_in = e.fan_in.max(s.fan_in);
            e.count += s.count;
        }
    }

    pub fn sites(&self) -> impl Iterator<Item = (&'static str, SiteStats)> + '_ {
        self.sites.iter().map(|(k, v)| (*k, *v))
    }

    pub fn max_fan_in(&self) -> usize {
        self.sites.values().map(|s| s.fan_in).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// `site,fan_in,count` rows.
    pub fn to_table(&self) -> crate::report::Table {
        let mut t = crate::report::Table::new(&["site", "fan_in", "count"]);
        for (site, s) in self.sites() {
            t.push([site.to_string(), s.fan_in.to_string(), s.count.to_string()]);
        }
        t
    }
}

/// Reads a neighborhood through the parity selector: a 4-way pick of each
/// paired row half, a 2-way last-row substitution, then a 2-way pick of the
/// even and the odd column out of the folded 2x2 row copies.
pub fn select_parity<'e>(
    g: &TrackGrid<'e>,
    s: &RegionSelector,
    stats: &mut SelectorStats,
) -> Block2x2<'e> {
    stats.record("row_even", 4);
    let pe = &g.paired[s.even_row_sel as usize];
    let mut even_half = [pe[0], pe[1], pe[2], pe[3]];
    stats.record("row_odd", 4);
    let po = &g.paired[s.odd_row_sel as usize];
    let mut odd_half = [po[4], po[5], po[6], po[7]];

    stats.record("last_row", 2);
    if s.use_last_row {
        match s.last_row_role {
            RowRole::Even => even_half = g.last_row,
            RowRole::Odd => odd_half = g.last_row,
        }
    }

    // Fold each row to 2x2 so even columns sit in column 0, odd in column 1.
    let fold = |h: [&'e Region; 4]| [[h[0], h[1]], [h[2], h[3]]];
    let t_row_even = fold(even_half);
    let t_row_odd = fold(odd_half);

    stats.record("col_even", 2);
    let ec = s.even_col_sel as usize;
    stats.record("col_odd", 2);
    let oc = s.odd_col_sel as usize;
    Block2x2 {
        row_even: [t_row_even[ec][0], t_row_even[oc][1]],
        row_odd: [t_row_odd[ec][0], t_row_odd[oc][1]],
    }
}

/// Reads a neighborhood by flat region index: one 36-way fetch per region.
pub fn select_naive<'e>(
    buffer: &'e [Region; REGIONS],
    regions: &BTreeSet<usize>,
    stats: &mut SelectorStats,
) -> Result<Block2x2<'e>> {
    let [[a, b], [c, d]] = arrange(regions)?.regions();
    let mut fetch = |i: usize| {
        stats.record("region_index", REGIONS);
        &buffer[i]
    };
    Ok(Block2x2 {
        row_even: [fetch(a), fetch(b)],
        row_odd: [fetch(c), fetch(d)],
    })
}

/// Up to `cap` highest-pt tracks from the four regions, excluding the seed.
/// Ties keep region order, then record order.
pub fn gather_candidates(b: &Block2x2<'_>, seed: &Track, cap: usize) -> Vec<Track> {
    let mut regions: Vec<&Region> = b.regions().collect();
    regions.sort_by_key(|r| r.index());
    let pool: Vec<Track> = regions
        .iter()
        .flat_map(|r| r.tracks())
        .filter(|t| t.origin != seed.origin)
        .copied()
        .collect();
    top_k(&pool, cap.min(pool.len())).expect("k bounded by pool")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Addressing {
    Naive,
    Parity,
}

impl Addressing {
    pub fn name(self) -> &'static str {
        match self {
            Addressing::Naive => "naive",
            Addressing::Parity => "parity",
        }
    }
}

impl fmt::Display for Addressing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Addressing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Addressing::Naive),
            "parity" => Ok(Addressing::Parity),
            _ => Err(Error::Selector("addressing must be naive or parity")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step2 {
    /// One candidate list per seed, in seed order.
    pub candidates: Vec<Vec<Track>>,
    pub stats: SelectorStats,
}

/// Candidate selection for every seed. Seeds are processed in parallel;
/// per-seed statistics are merged afterwards.
pub fn run_step2(e: &Event, seeds: &RankedSeeds, addressing: Addressing) -> Step2 {
    let grid = build_grid(e);
    let per_seed: Vec<(Vec<Track>, SelectorStats)> = seeds
        .seeds()
        .par_iter()
        .map(|seed| {
            let mut stats = SelectorStats::default();
            let hood = neighborhood(seed.origin.region as usize, seed.quadrant())
                .expect("seed origin is a valid region");
            let block = match addressing {
                Addressing::Parity => {
                    let sel = selector_from_neighborhood(&hood).expect("neighborhood is 2x2");
                    select_parity(&grid, &sel, &mut stats)
                }
                Addressing::Naive => {
                    select_naive(e.regions(), &hood, &mut stats).expect("neighborhood is 2x2")
                }
            };
            (gather_candidates(&block, seed, CANDIDATE_CAP), stats)
        })
        .collect();
    let mut stats = SelectorStats::default();
    let mut candidates = Vec::with_capacity(per_seed.len());
    for (c, s) in per_seed {
        stats.merge(&s);
        candidates.push(c);
    }
    Step2 { candidates, stats }
}
