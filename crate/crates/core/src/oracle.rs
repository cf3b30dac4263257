//! Brute-force references that every architecture is checked against.

use crate::{Error, Keyed, Result, Track, SEEDS};

/// The 16 selected seeds of one event, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedSeeds {
    seeds: Vec<Track>,
}

impl RankedSeeds {
    pub fn new(seeds: Vec<Track>) -> Result<Self> {
        if seeds.len() != SEEDS {
            return Err(Error::TopK {
                k: SEEDS,
                len: seeds.len(),
            });
        }
        if !is_sorted_desc(&seeds) {
            return Err(Error::Unsorted("ranked seeds"));
        }
        Ok(RankedSeeds { seeds })
    }

    pub fn seeds(&self) -> &[Track] {
        &self.seeds
    }

    pub fn pts(&self) -> Vec<u16> {
        self.seeds.iter().map(|t| t.pt).collect()
    }
}

pub fn is_sorted_desc<T: Keyed>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0].key() >= w[1].key())
}

/// Stable top-k: descending by key, earlier stream position first on ties.
pub fn top_k<T: Keyed>(candidates: &[T], k: usize) -> Result<Vec<T>> {
    if k > candidates.len() {
        return Err(Error::TopK {
            k,
            len: candidates.len(),
        });
    }
    let mut all = candidates.to_vec();
    all.sort_by_key(|t| std::cmp::Reverse(t.key()));
    all.truncate(k);
    Ok(all)
}

/// Stable merge of two descending sequences; `a` wins ties.
pub fn merge_desc<T: Keyed>(a: &[T], b: &[T]) -> Result<Vec<T>> {
    if !is_sorted_desc(a) || !is_sorted_desc(b) {
        return Err(Error::Unsorted("merge_desc input"));
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if b[j].key() > a[i].key() {
            out.push(b[j].clone());
            j += 1;
        } else {
            out.push(a[i].clone());
            i += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Ok(out)
}

/// Reference for the single-stage 6-sorter: the stable merge of the register
/// pair with the incoming 4-block.
pub fn sort6_oracle<T: Keyed>(reg: &[T; 2], inp: &[T; 4]) -> Result<[T; 6]> {
    let merged = merge_desc(reg, inp)?;
    Ok(merged.try_into().unwrap_or_else(|_| unreachable!()))
}

/// Checks an architecture's seed list against the oracle's the way a
/// pt-only comparator would see it: identical pt sequence, and within each
/// run of equal pt the same multiset of origins.
pub fn equivalent_by_pt(got: &[Track], want: &[Track]) -> bool {
    if got.len() != want.len() || got.iter().zip(want).any(|(a, b)| a.pt != b.pt) {
        return false;
    }
    let mut start = 0;
    while start < got.len() {
        let end = start
            + got[start..]
                .iter()
                .take_while(|t| t.pt == got[start].pt)
                .count();
        let mut a: Vec<_> = got[start..end].iter().map(|t| t.origin).collect();
        let mut b: Vec<_> = want[start..end].iter().map(|t| t.origin).collect();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return false;
        }
        start = end;
    }
    true
}
