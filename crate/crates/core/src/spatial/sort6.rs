//! Single-stage 6-sorter: merges a descending register pair with a
//! descending 4-block using one rank of eight parallel comparators and a
//! per-output select.
//!
//! Each output position has a short list of possible sources, each guarded by
//! at most two comparator results. `out1` can only come from `reg0` or
//! `inp0`; `out2` from `reg0`, `reg1`, `inp0` or `inp1`; and so on.

use crate::cost::Probe;
use crate::oracle::is_sorted_desc;
use crate::{Error, Keyed, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Src {
    Reg(usize),
    Inp(usize),
}

/// Comparator literal: `Gt(a, b)` is `inp[b] > reg[a]`, `Le(a, b)` its negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lit {
    Gt(usize, usize),
    Le(usize, usize),
}

use Lit::{Gt, Le};
use Src::{Inp, Reg};

pub type Rule = (Src, &'static [Lit]);

/// Output rules, `SORT6_RULES[p]` for output position `p` (out1 is `p = 0`).
/// Exactly one guard per position holds for sorted inputs.
pub const SORT6_RULES: [&[Rule]; 6] = [
    &[(Reg(0), &[Le(0, 0)]), (Inp(0), &[Gt(0, 0)])],
    &[
        (Reg(1), &[Le(1, 0)]),
        (Inp(0), &[Le(0, 0), Gt(1, 0)]),
        (Inp(1), &[Gt(0, 1)]),
        (Reg(0), &[Gt(0, 0), Le(0, 1)]),
    ],
    &[
        (Reg(0), &[Gt(0, 1), Le(0, 2)]),
        (Reg(1), &[Gt(1, 0), Le(1, 1)]),
        (Inp(0), &[Le(1, 0)]),
        (Inp(1), &[Le(0, 1), Gt(1, 1)]),
        (Inp(2), &[Gt(0, 2)]),
    ],
    &[
        (Reg(0), &[Gt(0, 2), Le(0, 3)]),
        (Reg(1), &[Gt(1, 1), Le(1, 2)]),
        (Inp(1), &[Le(1, 1)]),
        (Inp(2), &[Le(0, 2), Gt(1, 2)]),
        (Inp(3), &[Gt(0, 3)]),
    ],
    &[
        (Reg(0), &[Gt(0, 3)]),
        (Reg(1), &[Gt(1, 2), Le(1, 3)]),
        (Inp(2), &[Le(1, 2)]),
        (Inp(3), &[Le(0, 3), Gt(1, 3)]),
    ],
    &[(Reg(1), &[Gt(1, 3)]), (Inp(3), &[Le(1, 3)])],
];

/// Distinct `(reg, inp)` comparator pairs referenced by [`SORT6_RULES`], in
/// first-use order. This is the hardware comparator count of one pair cell.
pub fn comparator_sites() -> Vec<(usize, usize)> {
    let mut sites = Vec::new();
    for rules in SORT6_RULES {
        for (_, guard) in rules {
            for lit in *guard {
                let (Gt(a, b) | Le(a, b)) = *lit;
                if !sites.contains(&(a, b)) {
                    sites.push((a, b));
                }
            }
        }
    }
    sites
}

fn site_index(a: usize, b: usize) -> u8 {
    (a * 4 + b) as u8
}

/// Evaluates the network. `beats(x, y)` must be a strict "x ranks above y".
pub(crate) fn sort6_by<E: Clone, P: Probe>(
    reg: [E; 2],
    inp: [E; 4],
    mut beats: impl FnMut(&E, &E) -> bool,
    probe: &mut P,
    unit: u16,
) -> [E; 6] {
    // Comparator rank: all eight evaluated at once.
    let mut gt = [[false; 4]; 2];
    for (a, row) in gt.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            probe.compared(unit, site_index(a, b));
            *cell = beats(&inp[b], &reg[a]);
        }
    }
    let holds = |lit: &Lit| match *lit {
        Gt(a, b) => gt[a][b],
        Le(a, b) => !gt[a][b],
    };
    std::array::from_fn(|p| {
        let mut picked = SORT6_RULES[p]
            .iter()
            .filter(|(_, guard)| guard.iter().all(holds))
            .map(|(src, _)| *src);
        let src = picked.next().expect("some rule fires for sorted inputs");
        debug_assert!(picked.next().is_none(), "two rules fired for out{}", p + 1);
        match src {
            Reg(a) => reg[a].clone(),
            Inp(b) => inp[b].clone(),
        }
    })
}

/// Sorts a descending register pair and a descending 4-block into six
/// descending outputs. Register elements precede equal-keyed inputs.
pub fn sort6<T: Keyed>(reg: [T; 2], inp: [T; 4]) -> Result<[T; 6]> {
    if !is_sorted_desc(&reg) {
        return Err(Error::Unsorted("sort6 register pair"));
    }
    if !is_sorted_desc(&inp) {
        return Err(Error::Unsorted("sort6 input block"));
    }
    Ok(sort6_by(reg, inp, |x, y| x.key() > y.key(), &mut (), 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_comparators() {
        let sites = comparator_sites();
        assert_eq!(sites.len(), 8);
    }

    #[test]
    fn examples() {
        let out = sort6([6u8, 2], [5, 4, 3, 1]).unwrap();
        assert_eq!(out[1], 5);
        assert_eq!(out, [6, 5, 4, 3, 2, 1]);
        assert_eq!(sort6([9u8, 8], [7, 6, 5, 4]).unwrap(), [9, 8, 7, 6, 5, 4]);
        assert_eq!(sort6([5u8, 1], [9, 6, 4, 2]).unwrap(), [9, 6, 5, 4, 2, 1]);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(sort6([1u8, 2], [4, 3, 2, 1]).is_err());
        assert!(sort6([2u8, 1], [1, 3, 2, 1]).is_err());
    }

    #[test]
    fn ties_keep_registers_first() {
        use crate::Sequenced;
        let s = |seq, v| Sequenced { seq, item: v };
        // Sequenced keys are distinct; compare on the plain value instead.
        let out = sort6_by(
            [s(0, 5u8), s(1, 5)],
            [s(2, 5), s(3, 5), s(4, 5), s(5, 5)],
            |x, y| x.item > y.item,
            &mut (),
            0,
        );
        assert_eq!(out.map(|x| x.seq), [0, 1, 2, 3, 4, 5]);
    }
}
