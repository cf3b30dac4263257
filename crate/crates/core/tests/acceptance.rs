//! Acceptance gate. Runs every criterion, prints one line each, and exits
//! nonzero if any failed.

use std::collections::BTreeSet;
use std::process::Command as Proc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tau_trigger::cli::{execute, Command, RunConfig};
use tau_trigger::event::{generate_event, neighborhood, Quadrant};
use tau_trigger::merge_tree::{merge_keep_top, run_tree_probed};
use tau_trigger::oracle::{equivalent_by_pt, sort6_oracle, top_k};
use tau_trigger::select::{
    build_grid, run_step2, select_naive, select_parity, selector_from_neighborhood, Addressing,
    SelectorStats,
};
use tau_trigger::spatial::{
    run_cells, run_chain, run_pair_chain, sort6, Block4, Cell, InsertionCell, PairCell,
};
use tau_trigger::{sequence, Event, Keyed, Track, DEFAULT_BUFFERING_CYCLES as B};

type Check = Result<String, String>;
type Criterion = fn() -> Check;

const SWEEP: u64 = 1000;

fn sweep_events() -> impl Iterator<Item = Event> {
    (0..SWEEP).map(|s| generate_event(s, 0))
}

fn oracle16(e: &Event) -> Vec<Track> {
    top_k(&e.seed_candidates(), 16).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_spatial_oracle() -> Check {
    for e in sweep_events() {
        let got = run_chain(&e, B).0;
        let want = oracle16(&e);
        ensure(equivalent_by_pt(got.seeds(), &want), || {
            format!("event seed {} differs", e.id)
        })?;
        ensure(got.seeds() == &want[..], || {
            format!("event seed {} order differs", e.id)
        })?;
    }
    Ok(format!("{SWEEP} events exact"))
}

fn c2_modified_and_tree_oracle() -> Check {
    for e in sweep_events() {
        let want = oracle16(&e);
        let pair = run_pair_chain(&e, B).0;
        let (tree, _, _) = run_tree_probed(&e, B, &mut ());
        for (name, got) in [("modified", &pair), ("mergetree", &tree)] {
            ensure(
                equivalent_by_pt(got.seeds(), &want) && got.seeds() == &want[..],
                || format!("{name} differs on event {}", e.id),
            )?;
        }
    }
    Ok(format!("{SWEEP} events exact, both architectures"))
}

fn c3_latency() -> Check {
    for e in sweep_events() {
        let (_, s) = run_chain(&e, B);
        let (_, m) = run_pair_chain(&e, B);
        ensure(s.sorting_cycles == 53 && s.step1_cycles() == 56, || {
            format!("spatial {s:?}")
        })?;
        ensure(m.sorting_cycles == 45 && m.step1_cycles() == 56, || {
            format!("modified {m:?}")
        })?;
    }
    Ok("spatial S=53, modified S=45, step1=56 on every event".into())
}

fn c4_latency_delta() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("events.txt");
    let mut cfg = RunConfig::new(Command::Gen);
    cfg.events = 20;
    cfg.output = Some(path.clone());
    execute(&cfg).map_err(|e| e.to_string())?;

    let out = Proc::new(env!("CARGO_BIN_EXE_tau-trigger"))
        .args(["compare", "--reference-s", "57", "--in"])
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        String::from_utf8_lossy(&out.stderr).into_owned()
    })?;
    let text = String::from_utf8_lossy(&out.stdout);
    let row = text
        .lines()
        .find(|l| l.starts_with("modified "))
        .ok_or("no modified row")?;
    let pct = row.split_whitespace().last().unwrap_or_default();
    ensure(pct == "21", || format!("modified reduction {pct}%"))?;
    Ok("modified chain: 21 % below reference S=57".into())
}

/// An element of the 6-sorter together with its tie precedence: registers
/// before inputs, lower index first.
#[derive(Clone, Copy)]
struct Ranked {
    value: u16,
    pos: u8,
}

/// "Bigger" in the sorter's ranking order. With `by_value_only` it is the
/// plain value comparison.
fn bigger(a: Ranked, b: Ranked, by_value_only: bool) -> bool {
    a.value > b.value || (!by_value_only && a.value == b.value && a.pos < b.pos)
}

fn ranked(reg: [u16; 2], inp: [u16; 4]) -> ([Ranked; 2], [Ranked; 4]) {
    (
        [0, 1].map(|i| Ranked {
            value: reg[i],
            pos: i as u8,
        }),
        [0, 1, 2, 3].map(|i| Ranked {
            value: inp[i],
            pos: 2 + i as u8,
        }),
    )
}

/// Rule 1: only REG0 or IN[0] can go to out1; the biggest one does.
fn rule1(reg: [u16; 2], inp: [u16; 4], by_value_only: bool) -> u16 {
    let (r, i) = ranked(reg, inp);
    if bigger(i[0], r[0], by_value_only) {
        i[0].value
    } else {
        r[0].value
    }
}

/// Rule 2, clause by clause: REG1 if bigger than IN[0]; IN[0] if smaller
/// than REG0 but greater than REG1; IN[1] if bigger than REG0; else REG0.
fn rule2(reg: [u16; 2], inp: [u16; 4], by_value_only: bool) -> u16 {
    let (r, i) = ranked(reg, inp);
    let gt = |a, b| bigger(a, b, by_value_only);
    if gt(r[1], i[0]) {
        r[1].value
    } else if gt(r[0], i[0]) && gt(i[0], r[1]) {
        i[0].value
    } else if gt(i[1], r[0]) {
        i[1].value
    } else {
        r[0].value
    }
}

/// Checks one pattern; returns whether the plain-value reading of the rules
/// also agreed.
fn check_sort6(reg: [u16; 2], inp: [u16; 4]) -> Result<bool, String> {
    let got = sort6(reg, inp).map_err(|e| e.to_string())?;
    let want = sort6_oracle(&reg, &inp).map_err(|e| e.to_string())?;
    let mut full = [reg[0], reg[1], inp[0], inp[1], inp[2], inp[3]];
    full.sort_unstable_by(|a, b| b.cmp(a));
    ensure(got == want && got == full, || {
        format!("sort6 {reg:?} {inp:?} -> {got:?}")
    })?;
    ensure(rule1(reg, inp, false) == got[0], || {
        format!("rule 1 on {reg:?} {inp:?}")
    })?;
    ensure(rule2(reg, inp, false) == got[1], || {
        format!("rule 2 on {reg:?} {inp:?}")
    })?;
    Ok(rule1(reg, inp, true) == got[0] && rule2(reg, inp, true) == got[1])
}

fn c5_sort6() -> Check {
    let mut patterns = 0;
    let mut value_only_misses = 0;
    for r0 in 0..6u16 {
        for r1 in 0..=r0 {
            for a in 0..6u16 {
                for b in 0..=a {
                    for c in 0..=b {
                        for d in 0..=c {
                            if !check_sort6([r0, r1], [a, b, c, d])? {
                                value_only_misses += 1;
                            }
                            patterns += 1;
                        }
                    }
                }
            }
        }
    }
    ensure(patterns == 2646, || {
        format!("enumerated {patterns} patterns")
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10_000 {
        let mut reg: [u16; 2] = rng.random();
        let mut inp: [u16; 4] = rng.random();
        reg.sort_unstable_by(|a, b| b.cmp(a));
        inp.sort_unstable_by(|a, b| b.cmp(a));
        if !check_sort6(reg, inp)? {
            value_only_misses += 1;
        }
    }
    Ok(format!(
        "2646 exhaustive + 10000 random patterns, rules 1-2 agree under the ranking order \
         (plain-value reading misses {value_only_misses} tie patterns)"
    ))
}

fn c6_chain_rank() -> Check {
    for seed in 0..200 {
        let e = generate_event(10_000 + seed, 0);
        let tagged: Vec<_> = sequence(e.seed_candidates()).collect();
        let blocks = tagged
            .chunks(4)
            .map(|c| Block4::full([c[0], c[1], c[2], c[3]]).unwrap());
        let mut cells = vec![InsertionCell::default(); 16];
        run_cells(&mut cells, blocks, &mut ());
        let mut full = e.seed_candidates();
        full.sort_by_key(|t| std::cmp::Reverse(t.pt));
        for (i, cell) in cells.iter().enumerate() {
            let held = cell.curr.map(|s| s.item);
            ensure(held == Some(full[i]), || {
                format!("event {seed}: cell {i} holds {held:?}")
            })?;
        }
    }
    Ok("cell i holds rank i+1 on 200 events".into())
}

fn sorted_block(rng: &mut ChaCha8Rng) -> Block4<u16> {
    let n = rng.random_range(0..=4);
    let mut v: Vec<u16> = (0..n).map(|_| rng.random_range(0..64)).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    let slots = std::array::from_fn(|i| v.get(i).copied());
    Block4::new(slots).unwrap()
}

fn multiset(xs: impl IntoIterator<Item = Option<u16>>) -> Vec<u16> {
    let mut v: Vec<u16> = xs.into_iter().flatten().collect();
    v.sort_unstable();
    v
}

fn c7_conservation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cell = InsertionCell::<u16>::default();
    let mut pair = PairCell::<u16>::default();
    for step in 0..10_000 {
        if step % 50 == 0 {
            cell = InsertionCell::default();
            pair = PairCell::default();
        }
        let inp = sorted_block(&mut rng);

        let before = multiset(cell.held().into_iter().chain(inp.slots().iter().copied()));
        let out = cell.step(inp.clone());
        let after = multiset(cell.held().into_iter().chain(out.slots().iter().copied()));
        ensure(before == after, || format!("insertion cell step {step}"))?;
        Block4::new(*out.slots()).map_err(|e| format!("insertion cell output {e}"))?;

        let before = multiset(pair.held().into_iter().chain(inp.slots().iter().copied()));
        let out = pair.step(inp);
        let after = multiset(pair.held().into_iter().chain(out.slots().iter().copied()));
        ensure(before == after, || format!("pair cell step {step}"))?;
        Block4::new(*out.slots()).map_err(|e| format!("pair cell output {e}"))?;
        ensure(pair.reg0 >= pair.reg1 || pair.reg1.is_none(), || {
            "pair registers out of order".into()
        })?;

        let mut a: Vec<u16> = (0..rng.random_range(0..20))
            .map(|_| rng.random_range(0..64))
            .collect();
        let mut b: Vec<u16> = (0..rng.random_range(0..20))
            .map(|_| rng.random_range(0..64))
            .collect();
        a.sort_unstable_by(|x, y| y.cmp(x));
        b.sort_unstable_by(|x, y| y.cmp(x));
        let m = merge_keep_top(&a, &b, 16).map_err(|e| e.to_string())?;
        ensure(
            m.kept.len() + m.discarded == a.len() + b.len() && m.read == a.len() + b.len(),
            || format!("merge node step {step}"),
        )?;
        let mut all: Vec<u16> = a.iter().chain(&b).copied().collect();
        all.sort_unstable_by(|x, y| y.cmp(x));
        ensure(m.kept[..] == all[..m.kept.len()], || {
            format!("merge node kept wrong set at {step}")
        })?;
    }
    for seed in 0..100 {
        let (_, _, run) = run_tree_probed(&generate_event(seed, 2), B, &mut ());
        for n in &run.nodes {
            ensure(n.kept + n.discarded == n.read, || {
                format!("tree node on event {seed}")
            })?;
        }
        ensure(run.nodes[14].kept == 16, || "root keeps 16".into())?;
    }
    Ok("10000 steps per cell type and merge node, plus 100 full trees".into())
}

fn c8_addressing() -> Check {
    for seed in 0..100 {
        let e = generate_event(20_000 + seed, 0);
        let g = build_grid(&e);
        for r in 0..36 {
            for q in Quadrant::ALL {
                let hood = neighborhood(r, q).unwrap();
                let sel = selector_from_neighborhood(&hood).map_err(|e| e.to_string())?;
                let mut ps = SelectorStats::default();
                let mut ns = SelectorStats::default();
                let p = select_parity(&g, &sel, &mut ps);
                let n = select_naive(e.regions(), &hood, &mut ns).map_err(|e| e.to_string())?;
                ensure(p == n, || format!("region {r} {q:?} on event {seed}"))?;
                let mut fans: Vec<usize> = ps.sites().map(|(_, s)| s.fan_in).collect();
                fans.sort_unstable_by(|a, b| b.cmp(a));
                ensure(fans == [4, 4, 2, 2, 2] && ps.max_fan_in() == 4, || {
                    format!("parity fan-ins {fans:?}")
                })?;
                ensure(ps.sites().all(|(_, s)| s.count == 1), || {
                    "parity site counts".into()
                })?;
                ensure(
                    ns.sites().all(|(_, s)| s.fan_in == 36) && ns.max_fan_in() == 36,
                    || "naive fan-in".into(),
                )?;
            }
        }
    }
    Ok("36 x 4 x 100 lookups equal; parity {4,4,2,2,2}, naive 36".into())
}

fn c9_torus() -> Check {
    let mut adj: BTreeSet<usize> = Quadrant::ALL
        .iter()
        .flat_map(|&q| neighborhood(0, q).unwrap())
        .collect();
    adj.remove(&0);
    ensure(adj == BTreeSet::from([1, 4, 5, 32, 33]), || {
        format!("{adj:?}")
    })?;
    Ok("region 0 adjacent to {1, 4, 5, 32, 33}".into())
}

fn c10_candidate_cap() -> Check {
    for seed in 0..100 {
        let e = generate_event(30_000 + seed, 0);
        let (seeds, _) = run_chain(&e, B);
        let step2 = run_step2(&e, &seeds, Addressing::Parity);
        for (seed_track, got) in seeds.seeds().iter().zip(&step2.candidates) {
            ensure(got.len() <= 30, || format!("{} candidates", got.len()))?;
            let hood =
                neighborhood(seed_track.origin.region as usize, seed_track.quadrant()).unwrap();
            let pool: Vec<Track> = hood
                .iter()
                .flat_map(|&r| e.region(r).tracks().copied().collect::<Vec<_>>())
                .filter(|t| t.origin != seed_track.origin)
                .collect();
            ensure(pool.len() == 179, || format!("pool {}", pool.len()))?;
            let mut sorted = pool.clone();
            sorted.sort_by_key(|t| std::cmp::Reverse(t.key()));
            sorted.truncate(30);
            ensure(*got == sorted, || {
                format!("candidate list differs on event {seed}")
            })?;
        }
    }
    Ok("all lists <= 30 and equal the top 30 of 179 neighbors".into())
}

fn c11_tree_after_buffering() -> Check {
    let mut max = 0;
    for e in sweep_events() {
        let (_, rep, run) = run_tree_probed(&e, B, &mut ());
        ensure(rep.sorting_cycles > 56, || {
            format!("tree S={} on event {}", rep.sorting_cycles, e.id)
        })?;
        ensure(run.merge_start == B, || {
            "merge started before buffering ended".into()
        })?;
        max = max.max(rep.sorting_cycles);
    }
    Ok(format!(
        "merge tree S > 56 on every event (max {max}); resource tables not modeled"
    ))
}

fn c12_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_tau-trigger");
    let run = |args: &[&str]| {
        let out = Proc::new(bin).args(args).output().expect("binary runs");
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let (a_s, b_s) = (a.to_str().unwrap(), b.to_str().unwrap());
    run(&["gen", "--events", "100", "--seed", "7", "--out", a_s]);
    run(&["gen", "--events", "100", "--seed", "7", "--out", b_s]);
    ensure(
        std::fs::read(&a).unwrap() == std::fs::read(&b).unwrap(),
        || "gen differs".into(),
    )?;
    for args in [
        vec!["run", "--arch", "mergetree"],
        vec!["compare", "--reference-s", "57"],
        vec!["select", "--verify"],
    ] {
        let r1 = dir.path().join("r1.csv");
        let r2 = dir.path().join("r2.csv");
        let mut x = args.clone();
        x.extend(["--in", a_s, "--out", r1.to_str().unwrap()]);
        let mut y = args.clone();
        y.extend(["--in", a_s, "--out", r2.to_str().unwrap()]);
        let (s1, s2) = (run(&x), run(&y));
        ensure(s1 == s2, || format!("{args:?} stdout differs"))?;
        ensure(
            std::fs::read(&r1).unwrap() == std::fs::read(&r2).unwrap(),
            || format!("{args:?} report differs"),
        )?;
    }
    Ok("gen and run/compare/select reports byte-identical".into())
}

fn main() {
    let criteria: [(&str, Criterion); 12] = [
        ("oracle equivalence, spatial chain", c1_spatial_oracle),
        (
            "oracle equivalence, modified chain and merge tree",
            c2_modified_and_tree_oracle,
        ),
        ("latency regression 53/45/56", c3_latency),
        ("latency delta vs reference 57", c4_latency_delta),
        ("6-sorter exhaustive check", c5_sort6),
        ("chain rank property", c6_chain_rank),
        ("conservation", c7_conservation),
        ("addressing equivalence and fan-in", c8_addressing),
        ("torus geometry", c9_torus),
        ("candidate cap", c10_candidate_cap),
        ("merge tree after buffering", c11_tree_after_buffering),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
