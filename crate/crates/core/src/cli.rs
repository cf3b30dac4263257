//! Command implementations behind the `tau-trigger` binary.
//!
//! Each command returns its reports instead of printing them, so the binary
//! and the tests see the same bytes.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::cost::{cost_report, measure};
use crate::event::{generate_event, read_events, write_events};
use crate::merge_tree::run_tree;
use crate::oracle::{equivalent_by_pt, top_k, RankedSeeds};
use crate::report::Table;
use crate::select::{run_step2, Addressing};
use crate::spatial::{run_chain, run_pair_chain};
use crate::{Architecture, Error, Event, LatencyReport, Result, DEFAULT_BUFFERING_CYCLES, SEEDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Gen,
    Run,
    Compare,
    Select,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub arch: Architecture,
    pub addressing: Addressing,
    pub events: u64,
    pub seed: u64,
    pub buffering_cycles: u32,
    pub reference_s: Option<u32>,
    pub verify: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            output: None,
            arch: Architecture::Spatial,
            addressing: Addressing::Parity,
            events: 100,
            seed: 42,
            buffering_cycles: DEFAULT_BUFFERING_CYCLES,
            reference_s: None,
            verify: false,
        }
    }
}

/// What a command produced. `ok` is false when any internal verification
/// failed; `failures` says which.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    /// Machine-readable report, written to `--out` when given.
    pub csv: String,
    /// Human-readable text for standard output.
    pub text: String,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let out = match cfg.command {
        Command::Gen => cmd_gen(cfg)?,
        Command::Run => cmd_run(cfg)?,
        Command::Compare => cmd_compare(cfg)?,
        Command::Select => cmd_select(cfg)?,
    };
    if cfg.command != Command::Gen {
        if let Some(path) = &cfg.output {
            write_file(path, &out.csv)?;
        }
    }
    Ok(out)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn input_events(cfg: &RunConfig) -> Result<Vec<Event>> {
    match &cfg.input {
        Some(p) => read_events(p),
        None => Err(Error::Parse {
            line: 0,
            msg: "--in is required".into(),
        }),
    }
}

pub fn cmd_gen(cfg: &RunConfig) -> Result<Outcome> {
    let path = cfg.output.as_ref().ok_or_else(|| Error::Parse {
        line: 0,
        msg: "--out is required".into(),
    })?;
    let events: Vec<Event> = (0..cfg.events)
        .into_par_iter()
        .map(|i| generate_event(cfg.seed, i))
        .collect();
    write_events(path, &events)?;
    Ok(Outcome {
        text: format!("wrote {} events to {}\n", events.len(), path.display()),
        ..Default::default()
    })
}

pub fn run_arch(
    arch: Architecture,
    e: &Event,
    buffering_cycles: u32,
) -> (RankedSeeds, LatencyReport) {
    match arch {
        Architecture::Spatial => run_chain(e, buffering_cycles),
        Architecture::Modified => run_pair_chain(e, buffering_cycles),
        Architecture::MergeTree => run_tree(e, buffering_cycles),
    }
}

fn oracle_seeds(e: &Event) -> RankedSeeds {
    RankedSeeds::new(top_k(&e.seed_candidates(), SEEDS).expect("144 candidates"))
        .expect("oracle output is sorted")
}

fn seeds_agree(got: &RankedSeeds, want: &RankedSeeds) -> bool {
    got == want && equivalent_by_pt(got.seeds(), want.seeds())
}

fn span(values: impl Iterator<Item = u32>) -> Option<(u32, u32)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn span_text((lo, hi): (u32, u32)) -> String {
    if lo == hi {
        lo.to_string()
    } else {
        format!("{lo}..{hi}")
    }
}

pub fn cmd_run(cfg: &RunConfig) -> Result<Outcome> {
    let events = input_events(cfg)?;
    let results: Vec<(u64, RankedSeeds, LatencyReport, bool)> = events
        .par_iter()
        .map(|e| {
            let (seeds, rep) = run_arch(cfg.arch, e, cfg.buffering_cycles);
            let ok = seeds_agree(&seeds, &oracle_seeds(e));
            (e.id, seeds, rep, ok)
        })
        .collect();

    let mut per_event = Table::new(&["event", "arch", "S", "step1", "oracle", "seeds"]);
    let mut failures = Vec::new();
    for (id, seeds, rep, ok) in &results {
        let pts: Vec<String> = seeds.pts().iter().map(u16::to_string).collect();
        per_event.push([
            id.to_string(),
            cfg.arch.to_string(),
            rep.sorting_cycles.to_string(),
            rep.step1_cycles().to_string(),
            if *ok { "match" } else { "MISMATCH" }.to_string(),
            pts.join(";"),
        ]);
        if !ok {
            failures.push(format!("event {id}: {} seeds differ from oracle", cfg.arch));
        }
    }

    let mut summary = Table::new(&["arch", "events", "S", "step1"]);
    if let (Some(s), Some(st)) = (
        span(results.iter().map(|r| r.2.sorting_cycles)),
        span(results.iter().map(|r| r.2.step1_cycles())),
    ) {
        summary.push([
            cfg.arch.to_string(),
            results.len().to_string(),
            span_text(s),
            span_text(st),
        ]);
    }
    Ok(Outcome {
        csv: per_event.to_csv(),
        text: summary.to_pretty(),
        failures,
    })
}

/// Percentage by which `s` undercuts `reference`, rounded to an integer.
pub fn reduction_pct(reference: u32, s: u32) -> i64 {
    ((reference as f64 - s as f64) / reference as f64 * 100.0).round() as i64
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<Outcome> {
    let events = input_events(cfg)?;
    let per_event: Vec<(u64, Vec<LatencyReport>, Vec<Architecture>)> = events
        .par_iter()
        .map(|e| {
            let want = oracle_seeds(e);
            let mut reports = Vec::new();
            let mut bad = Vec::new();
            for arch in Architecture::ALL {
                let (seeds, rep) = run_arch(arch, e, cfg.buffering_cycles);
                if !seeds_agree(&seeds, &want) {
                    bad.push(arch);
                }
                reports.push(rep);
            }
            (e.id, reports, bad)
        })
        .collect();

    let mut failures = Vec::new();
    for (id, _, bad) in &per_event {
        for arch in bad {
            failures.push(format!("event {id}: {arch} disagrees with oracle"));
        }
    }

    let mut t = Table::new(&[
        "arch",
        "events",
        "S_min",
        "S_max",
        "step1_max",
        "reduction_pct",
    ]);
    for (k, arch) in Architecture::ALL.iter().enumerate() {
        let reps: Vec<&LatencyReport> = per_event.iter().map(|(_, r, _)| &r[k]).collect();
        let Some((lo, hi)) = span(reps.iter().map(|r| r.sorting_cycles)) else {
            continue;
        };
        let step1 = reps.iter().map(|r| r.step1_cycles()).max().unwrap_or(0);
        let delta = cfg
            .reference_s
            .map(|r| reduction_pct(r, hi).to_string())
            .unwrap_or_else(|| "-".into());
        t.push([
            arch.to_string(),
            reps.len().to_string(),
            lo.to_string(),
            hi.to_string(),
            step1.to_string(),
            delta,
        ]);
    }

    let mut text = t.to_pretty();
    if let Some(e) = events.first() {
        let stats: Vec<_> = Architecture::ALL
            .iter()
            .map(|&a| measure(a, e, cfg.buffering_cycles).0)
            .collect();
        text.push('\n');
        text.push_str(&format!("comparator costs (event {})\n", e.id));
        text.push_str(&cost_report(&stats, &[]).to_pretty());
    }
    Ok(Outcome {
        csv: t.to_csv(),
        text,
        failures,
    })
}

pub fn cmd_select(cfg: &RunConfig) -> Result<Outcome> {
    let events = input_events(cfg)?;
    let per_event: Vec<_> = events
        .par_iter()
        .map(|e| {
            let (seeds, _) = run_chain(e, cfg.buffering_cycles);
            let main = run_step2(e, &seeds, cfg.addressing);
            let other = cfg.verify.then(|| {
                let other_mode = match cfg.addressing {
                    Addressing::Naive => Addressing::Parity,
                    Addressing::Parity => Addressing::Naive,
                };
                run_step2(e, &seeds, other_mode)
            });
            (e.id, main, other)
        })
        .collect();

    let mut stats = crate::select::SelectorStats::default();
    let mut other_stats = crate::select::SelectorStats::default();
    let mut failures = Vec::new();
    let mut counts = Table::new(&["event", "seed", "candidates"]);
    for (id, main, other) in &per_event {
        stats.merge(&main.stats);
        for (k, c) in main.candidates.iter().enumerate() {
            counts.push([id.to_string(), k.to_string(), c.len().to_string()]);
        }
        if let Some(other) = other {
            other_stats.merge(&other.stats);
            if other.candidates != main.candidates {
                failures.push(format!(
                    "event {id}: parity and naive candidate lists differ"
                ));
            }
        }
    }
    if cfg.addressing == Addressing::Parity && stats.max_fan_in() > 4 {
        failures.push(format!(
            "parity addressing recorded fan-in {} > 4",
            stats.max_fan_in()
        ));
    }

    let table = stats.to_table();
    let mut text = format!("addressing: {}\n", cfg.addressing);
    text.push_str(&table.to_pretty());
    text.push_str(&format!("max fan-in: {}\n", stats.max_fan_in()));
    let mut histogram = std::collections::BTreeMap::new();
    for row in &counts.rows {
        *histogram
            .entry(row[2].parse::<usize>().unwrap_or(0))
            .or_insert(0u64) += 1;
    }
    let mut hist = Table::new(&["candidates", "seeds"]);
    for (n, c) in histogram {
        hist.push([n, c as usize]);
    }
    text.push('\n');
    text.push_str(&hist.to_pretty());
    if cfg.verify {
        let mut labeled = vec![(cfg.addressing.name(), &stats)];
        let other_name = match cfg.addressing {
            Addressing::Naive => "parity",
            Addressing::Parity => "naive",
        };
        labeled.push((other_name, &other_stats));
        text.push('\n');
        text.push_str(&cost_report(&[], &labeled).to_pretty());
    }

    let mut csv = table.to_csv();
    csv.push('\n');
    csv.push_str(&counts.to_csv());
    Ok(Outcome {
        csv,
        text,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_rounding() {
        assert_eq!(reduction_pct(57, 45), 21);
        assert_eq!(reduction_pct(57, 53), 7);
        assert_eq!(reduction_pct(57, 57), 0);
    }

    #[test]
    fn span_formatting() {
        assert_eq!(span(std::iter::empty()), None);
        assert_eq!(span_text(span([53, 53].into_iter()).unwrap()), "53");
        assert_eq!(span_text(span([90, 88, 91].into_iter()).unwrap()), "88..91");
    }
}
