//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cjlab_core::choice::interdep::{check_interdependency, rows, InterdepOptions, RowKind};
use cjlab_core::cjmodel::{
    build_example_1_1, build_example_1_1_forced, check_axioms, check_frame, FrameCondition,
    FrameWitness,
};
use cjlab_core::consequence::correspondence_sweep;
use cjlab_core::par::Exec;
use cjlab_core::{parse, sweeps, Set};

const SEED: u64 = 0x5eed;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.1?}, limit {limit:?}"))
    }
}

fn incompleteness() -> Outcome {
    let start = Instant::now();
    let m = build_example_1_1();
    let frame = check_frame(&m);
    let others = FrameCondition::ALL
        .iter()
        .filter(|&&c| c != FrameCondition::D5)
        .all(|&c| frame.get(c).pass());
    let m1 = Set::singleton(0);
    let mp = m.atom_set("p").expect("p");
    let d5 = matches!(
        frame.get(FrameCondition::D5).witness,
        Some(FrameWitness::Completion { x, y, z, .. }) if x == m1 && y == m1 && z == mp
    );
    let axioms = check_axioms(&m).all_pass();
    let opp = parse("O(p / p)").expect("formula");
    let invalid = !m.is_valid(&opp).expect("evaluates");
    let forced = build_example_1_1_forced()
        .is_valid(&opp)
        .expect("evaluates");
    let timing = within(start.elapsed(), Duration::from_secs(1));
    outcome(
        others && d5 && axioms && invalid && forced && timing.is_ok(),
        format!(
            "3-a..5-c pass {others}, 5-d witness {d5}, axioms {axioms}, O(p/p) invalid {invalid}, forced valid {forced}{}",
            timing.err().map(|e| format!(", {e}")).unwrap_or_default()
        ),
    )
}

fn soundness() -> Outcome {
    let start = Instant::now();
    let t = sweeps::soundness(SEED, 1000, 4, Exec::Parallel);
    let timing = within(start.elapsed(), Duration::from_secs(300));
    outcome(
        t.pass() && timing.is_ok(),
        match (&t.failure, timing) {
            (Some((i, ax)), _) => format!("model {i} fails axiom {ax}"),
            (None, Err(e)) => e,
            (None, Ok(())) => format!("{} frame-valid models, every axiom holds", t.checked),
        },
    )
}

fn representation() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 1..=3 {
        let t = sweeps::representation(n, Exec::Parallel);
        checked += t.checked;
        if let Some(f) = t.failure {
            return outcome(false, format!("no faithful ranked structure for {f:?}"));
        }
    }
    let timing = within(start.elapsed(), Duration::from_secs(600));
    outcome(
        timing.is_ok(),
        timing
            .err()
            .unwrap_or_else(|| format!("{checked} functions represented and verified")),
    )
}

fn preorder() -> Outcome {
    let mut checked = 0;
    for n in 1..=4 {
        let t = sweeps::preorder_extension(n, Exec::Parallel);
        checked += t.checked;
        if let Some(r) = t.failure {
            return outcome(false, format!("relation {r:?} violates the contract"));
        }
    }
    outcome(true, format!("{checked} relations"))
}

fn normalization() -> Outcome {
    let t = sweeps::normalization(4, Exec::Parallel);
    match t.failure {
        Some(s) => outcome(false, format!("{s:?}")),
        None => outcome(true, format!("{} structures", t.checked)),
    }
}

fn positive_rows() -> Outcome {
    let wanted = |id: &str| {
        let major: u32 = id.split('.').next().unwrap().parse().unwrap();
        matches!(major, 1..=3 | 5..=8 | 10..=19)
    };
    let opts = InterdepOptions::default();
    let selected: Vec<_> = rows().iter().filter(|r| wanted(r.id)).collect();
    let mut verified = 0;
    for row in selected.iter().copied() {
        assert_ne!(row.kind, RowKind::NotImplies);
        match check_interdependency(row, &opts) {
            Ok(r) if r.confirmed() => verified += 1,
            Ok(r) => return outcome(false, format!("{row}: {}", r.summary())),
            Err(e) => return outcome(false, format!("{row}: {e}")),
        }
    }
    outcome(
        verified == selected.len() && verified > 0,
        format!("{verified} rows verified up to |U| = 3"),
    )
}

fn correspondence() -> Outcome {
    let one = correspondence_sweep(1, None, Exec::Parallel);
    let two = correspondence_sweep(2, Some((SEED, 100_000)), Exec::Parallel);
    let all_rows = two.exercised.iter().all(|&c| c > 0);
    let detail = match (&one.disagreement, &two.disagreement) {
        (Some((f, ids)), _) | (None, Some((f, ids))) => format!("rows {ids:?} disagree on {f:?}"),
        _ => format!(
            "{} functions exhaustive on 1 atom, {} sampled on 2 atoms, every row exercised {all_rows}",
            one.functions, two.functions
        ),
    };
    outcome(one.all_agree() && two.all_agree() && all_rows, detail)
}

fn rank_hold() -> Outcome {
    let mut checked = 0;
    for n in 1..=4 {
        let t = sweeps::rank_hold(n, Exec::Parallel);
        checked += t.checked;
        if let Some((ranks, law)) = t.failure {
            return outcome(false, format!("ranks {ranks:?} violate {}", law.symbol()));
        }
    }
    outcome(true, format!("{checked} ranked orders, nine laws each"))
}

fn modal() -> Outcome {
    let (t, ranked) = sweeps::modal_agreement(3, Exec::Parallel);
    match t.failure {
        Some(f) => outcome(false, format!("{f:?}")),
        None => outcome(
            true,
            format!("{} models, {ranked} with ranked R′", t.checked),
        ),
    }
}

fn parser() -> Outcome {
    let t = sweeps::parser_round_trip(SEED, 10_000, Exec::Parallel);
    match t.failure {
        Some(f) => outcome(false, format!("{f:?}")),
        None => outcome(true, format!("{} formulas", t.checked)),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("incompleteness witness", incompleteness),
        ("soundness sweep", soundness),
        ("ranked representation", representation),
        ("preorder extension", preorder),
        ("one-infinity normalization", normalization),
        ("interdependency rows", positive_rows),
        ("rule/law correspondence", correspondence),
        ("ranked structures satisfy the nine laws", rank_hold),
        ("modal agreement", modal),
        ("parser round trip", parser),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {} [{:.2?}]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed()
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
