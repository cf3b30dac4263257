use std::collections::BTreeSet;

use crate::{Error, Result, REGIONS};

pub const GRID_ROWS: usize = 9;
pub const GRID_COLS: usize = 4;

/// Row/column of a region; regions are numbered row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridCoord {
    pub row: usize,
    pub col: usize,
}

/// Which neighboring row and column join a seed's region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quadrant {
    pub row_dir: i8,
    pub col_dir: i8,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [
        Quadrant {
            row_dir: -1,
            col_dir: -1,
        },
        Quadrant {
            row_dir: -1,
            col_dir: 1,
        },
        Quadrant {
            row_dir: 1,
            col_dir: -1,
        },
        Quadrant {
            row_dir: 1,
            col_dir: 1,
        },
    ];
}

pub fn coord_of(region: usize) -> Result<GridCoord> {
    if region >= REGIONS {
        return Err(Error::RegionIndex(region));
    }
    Ok(GridCoord {
        row: region / GRID_COLS,
        col: region % GRID_COLS,
    })
}

pub fn index_of(c: GridCoord) -> Result<usize> {
    if c.row >= GRID_ROWS || c.col >= GRID_COLS {
        return Err(Error::GridCoord {
            row: c.row,
            col: c.col,
        });
    }
    Ok(c.row * GRID_COLS + c.col)
}

/// The 2x2 block formed by `region`, the next row in `q.row_dir` (rows wrap
/// around the torus seam between row 8 and row 0) and the next column in
/// `q.col_dir` (columns clamp at the grid edge by turning inward).
pub fn neighborhood(region: usize, q: Quadrant) -> Result<BTreeSet<usize>> {
    let c = coord_of(region)?;
    let other_row =
        (c.row as isize + q.row_dir.signum() as isize).rem_euclid(GRID_ROWS as isize) as usize;
    let other_col = match (c.col, q.col_dir < 0) {
        (0, true) => 1,
        (col, true) => col - 1,
        (col, false) if col == GRID_COLS - 1 => col - 1,
        (col, false) => col + 1,
    };
    let mut out = BTreeSet::new();
    for row in [c.row, other_row] {
        for col in [c.col, other_col] {
            out.insert(row * GRID_COLS + col);
        }
    }
    Ok(out)
}
