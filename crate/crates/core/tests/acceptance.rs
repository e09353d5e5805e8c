//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Every count, bound and time budget is
//! pinned below.

use std::cell::RefCell;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wfa_core::automaton::{is_cycle_unambiguous, is_unambiguous, trim, Transition};
use wfa_core::determinize::determinize;
use wfa_core::disambiguate::{disambiguate, DisambiguateOptions, RemovalOptions, Strategy};
use wfa_core::oracle::families::{disambiguable_not_determinizable, t4};
use wfa_core::oracle::{
    check_predis_propositions, equivalent_up_to, random_deterministic, random_wfa, RandomWfaConfig,
};
use wfa_core::predis::{predisambiguate, PredisResult};
use wfa_core::relation::{common_future_relation, complete_relation, Relation};
use wfa_core::stats::{stats_run, write_lattice_corpus, Operation, StatsConfig};
use wfa_core::twins::{brute_force_weak_twins, has_weak_twins};
use wfa_core::{write_wfa, Error, SemiringKind, Wfa};

const T4_SIZES: [usize; 3] = [4, 5, 6];
const DIVERGENT_DET_LIMIT: usize = 1000;
const DIVERGENT_EQUIV_LEN: usize = 12;

const SUITE_INSTANCES: u64 = 500;
const SUITE_MAX_STATES: usize = 8;
const SUITE_MAX_LABELS: usize = 3;
const SUITE_WEIGHTS: (i64, i64) = (0, 5);
const SUITE_EQUIV_LEN: usize = 10;
const SUITE_SEED: u64 = 0xACCE_0003;

const PROP_INSTANCES: usize = 200;
const PROP_PATH_LEN: usize = 8;

const TWINS_INSTANCES: usize = 300;
const TWINS_MAX_STATES: usize = 6;
const TWINS_PREDIS_LIMIT: usize = 50_000;
const TWINS_SEED: u64 = 0xACCE_0005;

const DET_INSTANCES: u64 = 300;
const DET_LIMIT: usize = 20_000;
const DET_PREDIS_LIMIT: usize = 100_000;
const DET_SEED: u64 = 0xACCE_0006;

const FIXED_POINT_INSTANCES: usize = 100;
const FIXED_POINT_SEED: u64 = 0xACCE_0008;

const CORPUS_FILES: usize = 100;
const CORPUS_SEED: u64 = 2013;

const BUDGET_1: Duration = Duration::from_secs(10);
const BUDGET_2: Duration = Duration::from_secs(5);
const BUDGET_3: Duration = Duration::from_secs(120);
const BUDGET_4: Duration = Duration::from_secs(120);
const BUDGET_5: Duration = Duration::from_secs(180);
const BUDGET_6: Duration = Duration::from_secs(180);
const BUDGET_8: Duration = Duration::from_secs(60);
const BUDGET_10: Duration = Duration::from_secs(120);

/// Subset invariants of every pre-disambiguation result built along the way.
#[derive(Default)]
struct InvariantTally {
    results: usize,
    checks: usize,
    violations: Vec<String>,
}

thread_local! {
    static TALLY: RefCell<InvariantTally> = RefCell::new(InvariantTally::default());
}

fn record(input: &Wfa, rel: &Relation, r: &PredisResult) {
    TALLY.with(|t| {
        let mut t = t.borrow_mut();
        t.results += 1;
        match r.check_invariants(input, rel) {
            Ok(n) => t.checks += n,
            Err(e) => t.violations.push(e),
        }
    });
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn options(strategy: Strategy, state_limit: usize) -> DisambiguateOptions {
    DisambiguateOptions {
        removal: RemovalOptions {
            strategy,
            ..RemovalOptions::default()
        },
        state_limit,
    }
}

fn criterion_1() -> Outcome {
    let mut detail = Vec::new();
    for n in T4_SIZES {
        let a = trim(&t4(n));
        let rel = common_future_relation(&a).map_err(|e| e.to_string())?;
        let d = disambiguate(&a, &rel, &options(Strategy::Lists, 100_000))
            .map_err(|e| e.to_string())?;
        record(&a, &rel, &d.predis);
        ensure(d.automaton.size() == a.size(), || {
            format!(
                "n={n}: disambiguated size {} != input size {}",
                d.automaton.size(),
                a.size()
            )
        })?;
        let det = determinize(&a, 100_000).map_err(|e| e.to_string())?;
        ensure(det.num_states() >= 1 << n, || {
            format!(
                "n={n}: determinized has {} < 2^{n} states",
                det.num_states()
            )
        })?;
        detail.push(format!(
            "n={n}: size {} -> {}, det states {}",
            a.size(),
            d.automaton.size(),
            det.num_states()
        ));
    }
    Ok(detail.join("; "))
}

fn criterion_2() -> Outcome {
    let a = disambiguable_not_determinizable();
    match determinize(&a, DIVERGENT_DET_LIMIT) {
        Err(Error::NotDeterminizedWithinLimit { limit }) if limit == DIVERGENT_DET_LIMIT => {}
        other => return Err(format!("determinize did not hit the limit: {other:?}")),
    }
    let rel = common_future_relation(&a).map_err(|e| e.to_string())?;
    let d = disambiguate(&a, &rel, &DisambiguateOptions::default()).map_err(|e| e.to_string())?;
    record(&a, &rel, &d.predis);
    let eq = equivalent_up_to(&a, &d.automaton, DIVERGENT_EQUIV_LEN).map_err(|e| e.to_string())?;
    ensure(eq.is_equivalent(), || {
        format!("not equivalent: {:?}", eq.counterexample)
    })?;
    ensure(is_unambiguous(&d.automaton), || {
        "output is ambiguous".into()
    })?;
    Ok(format!(
        "determinize exhausted {DIVERGENT_DET_LIMIT}; disambiguated to {} states, equivalent up to {DIVERGENT_EQUIV_LEN}",
        d.automaton.num_states()
    ))
}

fn suite_instance(i: u64) -> Wfa {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ i);
    let num_states = rng.random_range(2..=SUITE_MAX_STATES);
    random_wfa(&RandomWfaConfig {
        kind: SemiringKind::Tropical,
        num_states,
        alphabet_size: rng.random_range(1..=SUITE_MAX_LABELS),
        density: rng.random_range(0.25..0.6),
        acyclic: true,
        weight_range: SUITE_WEIGHTS,
        num_initial: rng.random_range(1..=num_states.min(2)),
        num_final: rng.random_range(1..=num_states.min(3)),
        seed: i,
    })
    .expect("valid config")
}

/// Criteria 3 and 9 share the same runs.
fn criteria_3_and_9() -> (Outcome, Outcome) {
    let mut failures = Vec::new();
    let mut mismatches = Vec::new();
    let mut runs = 0;
    let mut ambiguous_inputs = 0;
    let mut size_differences = 0;
    for i in 0..SUITE_INSTANCES {
        let a = suite_instance(i);
        ambiguous_inputs += usize::from(!is_unambiguous(&a));
        let rels = [
            ("R*", common_future_relation(&a).unwrap()),
            ("R0", complete_relation(&a)),
        ];
        for (rel_name, rel) in &rels {
            let mut outputs = Vec::new();
            for strategy in [Strategy::Lists, Strategy::Pairs] {
                runs += 1;
                match disambiguate(&a, rel, &options(strategy, 100_000)) {
                    Ok(d) => {
                        record(&a, rel, &d.predis);
                        if !is_unambiguous(&d.automaton) {
                            failures.push(format!("#{i} {rel_name} {strategy}: ambiguous output"));
                        }
                        let eq = equivalent_up_to(&a, &d.automaton, SUITE_EQUIV_LEN).unwrap();
                        if let Some(c) = eq.counterexample {
                            failures.push(format!(
                                "#{i} {rel_name} {strategy}: differs at {:?}",
                                c.word
                            ));
                        }
                        outputs.push(d.automaton);
                    }
                    Err(e) => failures.push(format!("#{i} {rel_name} {strategy}: {e}")),
                }
            }
            if let [lists, pairs] = outputs.as_slice() {
                if !equivalent_up_to(lists, pairs, SUITE_EQUIV_LEN)
                    .unwrap()
                    .is_equivalent()
                {
                    mismatches.push(format!("#{i} {rel_name}"));
                }
                size_differences += usize::from(lists.size() != pairs.size());
            } else {
                mismatches.push(format!("#{i} {rel_name}: missing output"));
            }
        }
    }
    let c3 = if failures.is_empty() {
        Ok(format!(
            "{SUITE_INSTANCES} instances ({ambiguous_inputs} ambiguous), {runs} runs, 0 failures"
        ))
    } else {
        Err(format!(
            "{} failures, first: {}",
            failures.len(),
            failures[0]
        ))
    };
    let c9 = if mismatches.is_empty() {
        Ok(format!(
            "{} lists/pairs comparisons equivalent up to {SUITE_EQUIV_LEN}; sizes differ in {size_differences}",
            SUITE_INSTANCES * 2
        ))
    } else {
        Err(format!(
            "{} mismatches, first: {}",
            mismatches.len(),
            mismatches[0]
        ))
    };
    (c3, c9)
}

fn criterion_4() -> Outcome {
    let mut paths = 0;
    for i in 0..PROP_INSTANCES as u64 {
        let a = suite_instance(i);
        for rel in [common_future_relation(&a).unwrap(), complete_relation(&a)] {
            let r = predisambiguate(&a, &rel, 100_000).map_err(|e| format!("#{i}: {e}"))?;
            record(&a, &rel, &r);
            paths += check_predis_propositions(&a, &rel, &r, PROP_PATH_LEN)
                .map_err(|e| format!("#{i}: {e}"))?;
        }
    }
    Ok(format!("{PROP_INSTANCES} instances x 2 relations, {paths} A' paths of length <= {PROP_PATH_LEN} checked"))
}

/// Random cycle-unambiguous trim automata, in a pinned order.
fn cycle_unambiguous_instances(count: usize, seed: u64) -> Vec<Wfa> {
    let mut out = Vec::new();
    let mut i = 0u64;
    while out.len() < count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i);
        let num_states = rng.random_range(2..=TWINS_MAX_STATES);
        let a = random_wfa(&RandomWfaConfig {
            kind: SemiringKind::Tropical,
            num_states,
            alphabet_size: rng.random_range(1..=3),
            density: rng.random_range(0.15..0.35),
            acyclic: false,
            weight_range: (0, 3),
            num_initial: rng.random_range(1..=2),
            num_final: rng.random_range(1..=2),
            seed: seed.wrapping_add(i),
        })
        .expect("valid config");
        i += 1;
        if is_cycle_unambiguous(&a) {
            out.push(a);
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let mut holds = 0;
    for (i, a) in cycle_unambiguous_instances(TWINS_INSTANCES, TWINS_SEED)
        .iter()
        .enumerate()
    {
        let n = a.num_states();
        let fast = has_weak_twins(a).map_err(|e| format!("#{i}: {e}"))?.holds;
        let slow = brute_force_weak_twins(a, n * n, n * n).map_err(|e| format!("#{i}: {e}"))?;
        ensure(fast == slow, || {
            format!(
                "#{i}: cycle test {fast}, brute force {slow}\n{}",
                write_wfa(a)
            )
        })?;
        if fast {
            holds += 1;
            let rel = common_future_relation(a).unwrap();
            let r = predisambiguate(a, &rel, TWINS_PREDIS_LIMIT)
                .map_err(|e| format!("#{i}: weak twins hold but {e}"))?;
            record(a, &rel, &r);
        }
    }
    Ok(format!(
        "{TWINS_INSTANCES} instances agree ({holds} hold, {} fail); all holding ones pre-disambiguate within {TWINS_PREDIS_LIMIT}",
        TWINS_INSTANCES - holds
    ))
}

fn criterion_6() -> Outcome {
    let mut determinized = 0;
    for i in 0..DET_INSTANCES {
        let mut rng = ChaCha8Rng::seed_from_u64(DET_SEED ^ i);
        let num_states = rng.random_range(2..=6);
        let a = random_wfa(&RandomWfaConfig {
            kind: SemiringKind::Tropical,
            num_states,
            alphabet_size: rng.random_range(1..=3),
            density: rng.random_range(0.15..0.35),
            acyclic: false,
            weight_range: (0, 3),
            num_initial: rng.random_range(1..=2),
            num_final: rng.random_range(1..=2),
            seed: DET_SEED.wrapping_add(i),
        })
        .expect("valid config");
        match determinize(&a, DET_LIMIT) {
            Ok(_) => {
                determinized += 1;
                let rel = common_future_relation(&a).unwrap();
                let r = predisambiguate(&a, &rel, DET_PREDIS_LIMIT)
                    .map_err(|e| format!("#{i}: determinizable but {e}\n{}", write_wfa(&a)))?;
                record(&a, &rel, &r);
            }
            Err(e) if e.is_limit() => {}
            Err(e) => return Err(format!("#{i}: {e}")),
        }
    }
    Ok(format!(
        "{determinized} of {DET_INSTANCES} determinized within {DET_LIMIT}; all pre-disambiguated within {DET_PREDIS_LIMIT}"
    ))
}

fn criterion_7() -> Outcome {
    TALLY.with(|t| {
        let t = t.borrow();
        if t.violations.is_empty() {
            Ok(format!(
                "{} constructions, {} subset and transition checks, 0 violations",
                t.results, t.checks
            ))
        } else {
            Err(format!(
                "{} violations, first: {}",
                t.violations.len(),
                t.violations[0]
            ))
        }
    })
}

/// Re-labels transitions at random. Prefers a result that is unambiguous
/// but no longer deterministic, then any unambiguous one, then the input.
fn relabel(a: &Wfa, rng: &mut ChaCha8Rng) -> Wfa {
    let mut fallback = a.clone();
    for _ in 0..50 {
        let transitions: Vec<Transition> = a
            .transitions()
            .iter()
            .map(|t| Transition {
                label: rng.random_range(0..a.alphabet().len()),
                ..t.clone()
            })
            .collect();
        let b = Wfa::from_parts(
            a.kind(),
            a.alphabet().clone(),
            a.num_states(),
            transitions,
            a.initials().clone(),
            a.finals().clone(),
        )
        .unwrap();
        if is_unambiguous(&b) {
            if !b.is_deterministic() {
                return b;
            }
            fallback = b;
        }
    }
    fallback
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(FIXED_POINT_SEED);
    let mut nondeterministic = 0;
    for i in 0..FIXED_POINT_INSTANCES {
        let dfa = random_deterministic(&RandomWfaConfig {
            num_states: rng.random_range(2..=8),
            alphabet_size: rng.random_range(1..=3),
            density: 0.6,
            acyclic: rng.random_bool(0.5),
            num_final: 2,
            seed: FIXED_POINT_SEED.wrapping_add(i as u64),
            ..RandomWfaConfig::default()
        })
        .expect("valid config");
        let a = relabel(&dfa, &mut rng);
        ensure(is_unambiguous(&a), || {
            format!("#{i}: generated input is ambiguous")
        })?;
        nondeterministic += usize::from(!a.is_deterministic());
        let rel = common_future_relation(&a).unwrap();
        let d = disambiguate(&a, &rel, &DisambiguateOptions::default())
            .map_err(|e| format!("#{i}: {e}"))?;
        ensure(write_wfa(&d.automaton) == write_wfa(&trim(&a)), || {
            format!(
                "#{i}: output differs\n{}\n---\n{}",
                write_wfa(&a),
                write_wfa(&d.automaton)
            )
        })?;
    }
    Ok(format!(
        "{FIXED_POINT_INSTANCES} unambiguous inputs ({nondeterministic} non-deterministic after relabeling) returned unchanged"
    ))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let other = tempfile::tempdir().map_err(|e| e.to_string())?;
    write_lattice_corpus(dir.path(), CORPUS_FILES, CORPUS_SEED).map_err(|e| e.to_string())?;
    write_lattice_corpus(other.path(), CORPUS_FILES, CORPUS_SEED).map_err(|e| e.to_string())?;
    let run = |path: &std::path::Path, op| {
        stats_run(path, &StatsConfig::new(op)).map_err(|e| e.to_string())
    };
    let dis = run(dir.path(), Operation::Disambiguate)?;
    let dis_again = run(other.path(), Operation::Disambiguate)?;
    ensure(dis.render() == dis_again.render(), || {
        "disambiguation reports differ".into()
    })?;
    ensure(dis.failures() == 0 && dis.errors() == 0, || {
        format!(
            "{} disambiguation failures, {} errors",
            dis.failures(),
            dis.errors()
        )
    })?;
    let sd = dis.expansion_std_dev().ok_or("no standard deviation")?;
    let text = dis.render();
    ensure(
        text.contains("# stddev_expansion ") && !text.contains("# stddev_expansion -"),
        || "standard deviation missing from the report".into(),
    )?;
    let det = run(dir.path(), Operation::Determinize)?;
    ensure(
        det.render() == run(other.path(), Operation::Determinize)?.render(),
        || "determinization reports differ".into(),
    )?;
    ensure(
        det.render()
            .contains(&format!("# failures {}\n", det.failures())),
        || "determinization failure count missing".into(),
    )?;
    Ok(format!(
        "{CORPUS_FILES} lattices: disambiguation mean {} sd {sd:.6}; determinization {} failures; byte-identical reruns",
        text.lines()
            .find_map(|l| l.strip_prefix("# mean_expansion "))
            .unwrap_or("-"),
        det.failures()
    ))
}

fn report(
    n: usize,
    title: &str,
    budget: Option<Duration>,
    start: Instant,
    outcome: Outcome,
) -> bool {
    let elapsed = start.elapsed();
    let outcome = match (outcome, budget) {
        (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.1?}, budget {b:?}")),
        (o, _) => o,
    };
    let (status, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("criterion {n:>2} {status}: {title}: {detail} [{elapsed:.2?}]");
    outcome.is_ok()
}

fn main() -> ExitCode {
    let mut ok = true;

    let t = Instant::now();
    ok &= report(1, "exponential gap on t4", Some(BUDGET_1), t, criterion_1());

    let t = Instant::now();
    ok &= report(
        2,
        "disambiguable but not determinizable",
        Some(BUDGET_2),
        t,
        criterion_2(),
    );

    let t = Instant::now();
    let (c3, c9) = criteria_3_and_9();
    ok &= report(3, "end-to-end correctness", Some(BUDGET_3), t, c3);

    let t = Instant::now();
    ok &= report(
        4,
        "pre-disambiguation path identities",
        Some(BUDGET_4),
        t,
        criterion_4(),
    );

    let t = Instant::now();
    ok &= report(
        5,
        "weak twins test vs brute force",
        Some(BUDGET_5),
        t,
        criterion_5(),
    );

    let t = Instant::now();
    ok &= report(
        6,
        "determinizable implies pre-disambiguable",
        Some(BUDGET_6),
        t,
        criterion_6(),
    );

    let t = Instant::now();
    ok &= report(
        7,
        "subset normalization and successor sets",
        None,
        t,
        criterion_7(),
    );

    let t = Instant::now();
    ok &= report(
        8,
        "unambiguous inputs are fixed points",
        Some(BUDGET_8),
        t,
        criterion_8(),
    );

    let t = Instant::now();
    ok &= report(9, "lists and pairs agree", None, t, c9);

    let t = Instant::now();
    ok &= report(
        10,
        "corpus statistics harness",
        Some(BUDGET_10),
        t,
        criterion_10(),
    );

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
