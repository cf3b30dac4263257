//! Comparator and selector accounting, the software stand-in for LUT/mux
//! area.

use std::collections::BTreeSet;

use crate::merge_tree::{run_tree_probed, FILL_ARRAYS, FILL_CAPACITY, MERGE_NODES};
use crate::report::Table;
use crate::select::SelectorStats;
use crate::spatial::{
    run_chain_probed, run_pair_chain_probed, sort6_comparator_sites, INSERTION_CELL_SITES,
    PAIR_CELLS, SPATIAL_CELLS,
};
use crate::{Architecture, Event};

/// Receives one call per comparator evaluation.
pub trait Probe {
    fn compared(&mut self, unit: u16, site: u8);
}

impl Probe for () {
    #[inline(always)]
    fn compared(&mut self, _unit: u16, _site: u8) {}
}

/// Counts comparisons and the distinct `(unit, site)` comparators used.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompareCounter {
    pub sites: BTreeSet<(u16, u8)>,
    pub total: u64,
}

impl Probe for CompareCounter {
    fn compared(&mut self, unit: u16, site: u8) {
        self.sites.insert((unit, site));
        self.total += 1;
    }
}

impl CompareCounter {
    /// Distinct comparator sites per unit.
    pub fn sites_of(&self, unit: u16) -> usize {
        self.sites.iter().filter(|(u, _)| *u == unit).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroup {
    pub name: &'static str,
    pub units: usize,
    pub comparators_per_unit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareStats {
    pub architecture: Architecture,
    pub groups: Vec<UnitGroup>,
    /// Comparisons evaluated over one event, when measured.
    pub dynamic_compares: Option<u64>,
    /// Cycles of the measured run.
    pub cycles: Option<u32>,
}

impl CompareStats {
    pub fn cells(&self) -> usize {
        self.groups.iter().map(|g| g.units).sum()
    }

    pub fn total_comparators(&self) -> usize {
        self.groups
            .iter()
            .map(|g| g.units * g.comparators_per_unit)
            .sum()
    }
}

/// Comparator counts read off the implemented networks.
pub fn static_costs(arch: Architecture) -> CompareStats {
    let groups = match arch {
        Architecture::Spatial => vec![UnitGroup {
            name: "insertion_cell",
            units: SPATIAL_CELLS,
            comparators_per_unit: INSERTION_CELL_SITES,
        }],
        Architecture::Modified => vec![UnitGroup {
            name: "pair_cell",
            units: PAIR_CELLS,
            comparators_per_unit: sort6_comparator_sites().len(),
        }],
        Architecture::MergeTree => vec![
            UnitGroup {
                name: "fill_array",
                units: FILL_ARRAYS,
                // the ninth arrival is compared against eight occupants
                comparators_per_unit: FILL_CAPACITY - 1,
            },
            UnitGroup {
                name: "merge_node",
                units: MERGE_NODES,
                comparators_per_unit: 1,
            },
        ],
    };
    CompareStats {
        architecture: arch,
        groups,
        dynamic_compares: None,
        cycles: None,
    }
}

/// Runs one event through `arch` with an instrumented comparator probe.
pub fn measure(
    arch: Architecture,
    e: &Event,
    buffering_cycles: u32,
) -> (CompareStats, CompareCounter) {
    let mut counter = CompareCounter::default();
    let report = match arch {
        Architecture::Spatial => run_chain_probed(e, buffering_cycles, &mut counter).1,
        Architecture::Modified => run_pair_chain_probed(e, buffering_cycles, &mut counter).1,
        Architecture::MergeTree => run_tree_probed(e, buffering_cycles, &mut counter).1,
    };
    let stats = CompareStats {
        dynamic_compares: Some(counter.total),
        cycles: Some(report.sorting_cycles),
        ..static_costs(arch)
    };
    (stats, counter)
}

/// Deterministic `item,metric,value` report over comparator and selector
/// statistics, followed by the ordering claims the inputs can decide.
pub fn cost_report(stats: &[CompareStats], selectors: &[(&str, &SelectorStats)]) -> Table {
    let mut t = Table::new(&["item", "metric", "value"]);
    let mut stats: Vec<&CompareStats> = stats.iter().collect();
    stats.sort_by_key(|s| s.architecture);
    for s in &stats {
        let a = s.architecture.name();
        t.push([a, "cells", &s.cells().to_string()]);
        for g in &s.groups {
            let item = format!("{a}.{}", g.name);
            t.push([item.as_str(), "units", &g.units.to_string()]);
            t.push([
                item.as_str(),
                "comparators_per_unit",
                &g.comparators_per_unit.to_string(),
            ]);
        }
        t.push([a, "total_comparators", &s.total_comparators().to_string()]);
        if let Some(d) = s.dynamic_compares {
            t.push([a, "dynamic_compares", &d.to_string()]);
        }
        if let Some(c) = s.cycles {
            t.push([a, "cycles", &c.to_string()]);
        }
    }
    let mut selectors: Vec<&(&str, &SelectorStats)> = selectors.iter().collect();
    selectors.sort_by_key(|(label, _)| *label);
    for (label, sel) in &selectors {
        let item = format!("selector.{label}");
        for (site, s) in sel.sites() {
            t.push([
                item.as_str(),
                &format!("fan_in[{site}]"),
                &format!("{}x{}", s.fan_in, s.count),
            ]);
        }
        t.push([item.as_str(), "max_fan_in", &sel.max_fan_in().to_string()]);
    }

    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let fan_in = |label: &str| {
        selectors
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, s)| s.max_fan_in())
    };
    if let (Some(p), Some(n)) = (fan_in("parity"), fan_in("naive")) {
        t.push([
            "claim",
            "parity_max_fan_in_below_naive",
            &format!("{} ({p} < {n})", verdict(p < n)),
        ]);
    }
    let cells = |a: Architecture| {
        stats
            .iter()
            .find(|s| s.architecture == a)
            .map(|s| s.cells())
    };
    if let (Some(m), Some(s)) = (cells(Architecture::Modified), cells(Architecture::Spatial)) {
        t.push([
            "claim",
            "modified_fewer_cells_than_spatial",
            &format!("{} ({m} < {s})", verdict(m < s)),
        ]);
    }
    t
}
