//! Transition and finality removal on a pre-disambiguated automaton, and
//! the end-to-end disambiguation pipeline.
//!
//! Two removal strategies are provided. `Lists` walks, for each target and
//! label, the sources in state order and drops a transition when an earlier
//! co-reachable source still has one. `Pairs` compares co-reachable sources
//! pairwise and keeps the one with the larger head, marking it as needed.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::automaton::{trim, Label, StateId, Wfa};
use crate::error::{Error, Result};
use crate::oracle::language_table;
use crate::predis::{predisambiguate, PredisResult, DEFAULT_STATE_LIMIT};
use crate::relation::Relation;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Lists,
    Pairs,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Lists => "lists",
            Strategy::Pairs => "pairs",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "lists" => Ok(Strategy::Lists),
            "pairs" => Ok(Strategy::Pairs),
            _ => Err(Error::Config(format!(
                "unknown strategy `{s}` (expected lists or pairs)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovalOptions {
    pub strategy: Strategy,
    /// Lists only: drop a transition when any earlier co-reachable source
    /// exists, whether or not that source kept its own transition.
    pub relaxed: bool,
    /// Recompute co-reachability after every removal. Turning this off uses
    /// the pairs of the unmodified automaton throughout.
    pub recompute: bool,
    /// After each removal, check that the strings accepted up to this
    /// length are unchanged. Slow; for testing.
    pub audit_len: Option<usize>,
}

impl Default for RemovalOptions {
    fn default() -> Self {
        RemovalOptions {
            strategy: Strategy::Lists,
            relaxed: false,
            recompute: true,
            audit_len: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RemovalTarget {
    /// The transitions labeled `label` into `state`.
    Transition {
        state: StateId,
        label: Label,
    },
    Finality,
}

/// One list of competing sources (or final states), ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovalPlanEntry {
    pub target: RemovalTarget,
    pub list: Vec<StateId>,
}

/// Every target with its list of sources, targets in `(state, label)` order
/// followed by the list of final states.
pub fn removal_plan(aprime: &Wfa) -> Vec<RemovalPlanEntry> {
    let mut by_target: Vec<((StateId, Label), StateId)> = aprime
        .transitions()
        .iter()
        .map(|t| ((t.dst, t.label), t.src))
        .collect();
    by_target.sort();
    let mut plan: Vec<RemovalPlanEntry> = Vec::new();
    for ((state, label), src) in by_target {
        let target = RemovalTarget::Transition { state, label };
        match plan.last_mut() {
            Some(e) if e.target == target => {
                if e.list.last() != Some(&src) {
                    e.list.push(src);
                }
            }
            _ => plan.push(RemovalPlanEntry {
                target,
                list: vec![src],
            }),
        }
    }
    if !aprime.finals().is_empty() {
        plan.push(RemovalPlanEntry {
            target: RemovalTarget::Finality,
            list: aprime.finals().keys().copied().collect(),
        });
    }
    plan
}

/// Pairs `(u, v)`, `u <= v`, of states both reached from an initial state
/// by some common string.
pub fn coreachable_pairs(a: &Wfa) -> BTreeSet<(StateId, StateId)> {
    let alive = vec![true; a.num_transitions()];
    coreachable_set(a, &alive).into_iter().collect()
}

fn ordered(u: StateId, v: StateId) -> (StateId, StateId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

fn coreachable_set(a: &Wfa, alive: &[bool]) -> HashSet<(StateId, StateId)> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let initials: Vec<StateId> = a.initials().keys().copied().collect();
    for (k, &u) in initials.iter().enumerate() {
        for &v in &initials[k..] {
            if seen.insert((u, v)) {
                queue.push_back((u, v));
            }
        }
    }
    while let Some((u, v)) = queue.pop_front() {
        for i in a.out_range(u).filter(|&i| alive[i]) {
            let ti = &a.transitions()[i];
            for j in a.out_range(v).filter(|&j| alive[j]) {
                let tj = &a.transitions()[j];
                if ti.label != tj.label {
                    continue;
                }
                let pair = ordered(ti.dst, tj.dst);
                if seen.insert(pair) {
                    queue.push_back(pair);
                }
            }
        }
    }
    seen
}

/// Outcome of a removal pass; `automaton` is not trimmed.
#[derive(Clone, Debug)]
pub struct Removal {
    pub automaton: Wfa,
    pub removed_transitions: usize,
    pub removed_finals: usize,
}

/// Per-transition and per-state finality "needed" marks of the pairs
/// strategy. A marked item is never removed afterwards.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NeededMarks {
    pub transitions: Vec<bool>,
    pub finality: Vec<bool>,
}

/// Mutable working copy of `A'`.
struct Work<'a> {
    a: &'a Wfa,
    alive: Vec<bool>,
    final_alive: Vec<bool>,
    recompute: bool,
    coreach: Option<HashSet<(StateId, StateId)>>,
    audit: Option<(usize, BTreeSet<Vec<Label>>)>,
    removed_transitions: usize,
    removed_finals: usize,
}

impl<'a> Work<'a> {
    fn new(a: &'a Wfa, recompute: bool, audit_len: Option<usize>) -> Self {
        let audit = audit_len.map(|n| (n, language_table(a, n).into_keys().collect()));
        Work {
            a,
            alive: vec![true; a.num_transitions()],
            final_alive: a.states().map(|q| a.is_final(q)).collect(),
            recompute,
            coreach: None,
            audit,
            removed_transitions: 0,
            removed_finals: 0,
        }
    }

    fn coreachable(&mut self, u: StateId, v: StateId) -> bool {
        if self.coreach.is_none() {
            self.coreach = Some(coreachable_set(self.a, &self.alive));
        }
        self.coreach.as_ref().unwrap().contains(&ordered(u, v))
    }

    /// Index of the unique `label`-transition from `src` to `dst`.
    fn edge(&self, src: StateId, label: Label, dst: StateId) -> usize {
        let range = self.a.out_range(src);
        let start = range.start;
        let found = self.a.transitions()[range]
            .iter()
            .position(|t| t.label == label && t.dst == dst)
            .expect("plan entries name existing transitions");
        start + found
    }

    fn holds(&self, target: RemovalTarget, src: StateId) -> bool {
        match target {
            RemovalTarget::Transition { state, label } => self.alive[self.edge(src, label, state)],
            RemovalTarget::Finality => self.final_alive[src],
        }
    }

    fn remove(&mut self, target: RemovalTarget, src: StateId) -> Result<()> {
        match target {
            RemovalTarget::Transition { state, label } => {
                let e = self.edge(src, label, state);
                debug_assert!(self.alive[e]);
                self.alive[e] = false;
                self.removed_transitions += 1;
            }
            RemovalTarget::Finality => {
                self.final_alive[src] = false;
                self.removed_finals += 1;
            }
        }
        if self.recompute {
            self.coreach = None;
        }
        self.check_language()
    }

    fn current(&self) -> Wfa {
        let transitions = self
            .a
            .transitions()
            .iter()
            .zip(&self.alive)
            .filter(|(_, &keep)| keep)
            .map(|(t, _)| t.clone())
            .collect();
        let finals = self
            .a
            .finals()
            .iter()
            .filter(|(&q, _)| self.final_alive[q])
            .map(|(&q, w)| (q, w.clone()))
            .collect();
        Wfa::from_parts(
            self.a.kind(),
            self.a.alphabet().clone(),
            self.a.num_states(),
            transitions,
            self.a.initials().clone(),
            finals,
        )
        .expect("a sub-automaton of a valid automaton is valid")
    }

    fn check_language(&self) -> Result<()> {
        let Some((len, expected)) = &self.audit else {
            return Ok(());
        };
        let got: BTreeSet<Vec<Label>> = language_table(&self.current(), *len).into_keys().collect();
        if let Some(word) = expected.symmetric_difference(&got).next() {
            return Err(Error::RemovalChangedLanguage {
                word: self.a.alphabet().format_word(word),
            });
        }
        Ok(())
    }

    fn finish(self) -> Removal {
        Removal {
            automaton: self.current(),
            removed_transitions: self.removed_transitions,
            removed_finals: self.removed_finals,
        }
    }
}

/// The list strategy. `aprime` must come from pre-disambiguation, whose
/// state order (head first) fixes the order of each list.
pub fn process_lists(aprime: &PredisResult, options: &RemovalOptions) -> Result<Removal> {
    let mut work = Work::new(&aprime.automaton, options.recompute, options.audit_len);
    for entry in removal_plan(&aprime.automaton) {
        let mut kept: Vec<StateId> = Vec::new();
        for (j, &src) in entry.list.iter().enumerate() {
            let earlier: &[StateId] = if options.relaxed {
                &entry.list[..j]
            } else {
                &kept
            };
            let earlier = earlier.to_vec();
            if earlier.into_iter().any(|i| work.coreachable(i, src)) {
                work.remove(entry.target, src)?;
            } else {
                kept.push(src);
            }
        }
    }
    Ok(work.finish())
}

/// The pair strategy. Within each target, sources are visited by
/// decreasing head; each one still holding its transition removes those of
/// its co-reachable lower-head competitors. Visiting in that order means a
/// source is only marked needed after every higher competitor has had its
/// turn, so no needed transition is ever up for removal.
pub fn process_pairs(
    aprime: &PredisResult,
    options: &RemovalOptions,
) -> Result<(Removal, NeededMarks)> {
    let a = &aprime.automaton;
    let mut work = Work::new(a, options.recompute, options.audit_len);
    let mut needed = NeededMarks {
        transitions: vec![false; a.num_transitions()],
        finality: vec![false; a.num_states()],
    };
    let plan = removal_plan(a);
    loop {
        let mut changed = false;
        for entry in &plan {
            for (k, &hi) in entry.list.iter().enumerate().rev() {
                if !work.holds(entry.target, hi) {
                    continue;
                }
                for &lo in &entry.list[..k] {
                    if !work.holds(entry.target, lo) || !work.coreachable(lo, hi) {
                        continue;
                    }
                    assert!(
                        aprime.states[lo].head < aprime.states[hi].head,
                        "distinct co-reachable states {lo} and {hi} share a head"
                    );
                    let lo_needed = match entry.target {
                        RemovalTarget::Transition { state, label } => {
                            let e = work.edge(hi, label, state);
                            needed.transitions[e] = true;
                            needed.transitions[work.edge(lo, label, state)]
                        }
                        RemovalTarget::Finality => {
                            needed.finality[hi] = true;
                            needed.finality[lo]
                        }
                    };
                    assert!(!lo_needed, "needed state {lo} is up for removal");
                    work.remove(entry.target, lo)?;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok((work.finish(), needed))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisambiguateOptions {
    pub removal: RemovalOptions,
    pub state_limit: usize,
}

impl Default for DisambiguateOptions {
    fn default() -> Self {
        DisambiguateOptions {
            removal: RemovalOptions::default(),
            state_limit: DEFAULT_STATE_LIMIT,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Disambiguation {
    /// Trimmed, unambiguous, equivalent to the input.
    pub automaton: Wfa,
    pub predis: PredisResult,
    pub removed_transitions: usize,
    pub removed_finals: usize,
}

/// Pre-disambiguation, removal with the chosen strategy, then trim.
pub fn disambiguate(
    a: &Wfa,
    rel: &Relation,
    options: &DisambiguateOptions,
) -> Result<Disambiguation> {
    let predis = predisambiguate(a, rel, options.state_limit)?;
    let removal = match options.removal.strategy {
        Strategy::Lists => process_lists(&predis, &options.removal)?,
        Strategy::Pairs => process_pairs(&predis, &options.removal)?.0,
    };
    Ok(Disambiguation {
        automaton: trim(&removal.automaton),
        predis,
        removed_transitions: removal.removed_transitions,
        removed_finals: removal.removed_finals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{is_unambiguous, string_weight};
    use crate::oracle::families::{a0, chain, t4};
    use crate::oracle::{equivalent_up_to, random_wfa, RandomWfaConfig};
    use crate::relation::{common_future_relation, complete_relation};
    use crate::semiring::Weight;
    use crate::text::{parse_wfa, write_wfa};

    fn options(strategy: Strategy) -> DisambiguateOptions {
        DisambiguateOptions {
            removal: RemovalOptions {
                strategy,
                audit_len: Some(6),
                ..RemovalOptions::default()
            },
            ..DisambiguateOptions::default()
        }
    }

    fn predis_a0() -> PredisResult {
        let a = a0();
        predisambiguate(&a, &common_future_relation(&a).unwrap(), 100).unwrap()
    }

    #[test]
    fn a0_coreachable_pairs() {
        let p = predis_a0();
        let pairs = coreachable_pairs(&p.automaton);
        assert_eq!(pairs, [(0, 0), (1, 1), (1, 2), (2, 2), (3, 3)].into());
        assert_eq!(
            coreachable_pairs(&chain(4)),
            (0..5).map(|q| (q, q)).collect::<BTreeSet<_>>()
        );
    }

    #[test]
    fn a0_plan() {
        let p = predis_a0();
        let plan = removal_plan(&p.automaton);
        let lists: Vec<_> = plan.iter().map(|e| (e.target, e.list.clone())).collect();
        assert_eq!(
            lists,
            vec![
                (RemovalTarget::Transition { state: 1, label: 0 }, vec![0]),
                (RemovalTarget::Transition { state: 2, label: 0 }, vec![0]),
                (RemovalTarget::Transition { state: 3, label: 1 }, vec![1, 2]),
                (RemovalTarget::Finality, vec![3]),
            ]
        );
    }

    #[test]
    fn a0_lists_keeps_lower_head() {
        let p = predis_a0();
        let r = process_lists(&p, &RemovalOptions::default()).unwrap();
        assert_eq!(r.removed_transitions, 1);
        assert_eq!(r.removed_finals, 0);
        let b = r.automaton;
        assert!(b.out_with(1, 1).len() == 1 && b.out_with(2, 1).is_empty());
        let b = trim(&b);
        assert_eq!(b.num_states(), 3);
        assert_eq!(string_weight(&b, &[0, 1]).unwrap(), Weight::tropical_int(4));
    }

    #[test]
    fn a0_pairs_keeps_higher_head() {
        let p = predis_a0();
        let (r, needed) = process_pairs(&p, &RemovalOptions::default()).unwrap();
        let b = &r.automaton;
        assert!(b.out_with(1, 1).is_empty() && b.out_with(2, 1).len() == 1);
        assert_eq!(needed.transitions.iter().filter(|&&n| n).count(), 1);
        let b = trim(b);
        assert_eq!(b.num_states(), 3);
        assert!(is_unambiguous(&b));
        assert_eq!(string_weight(&b, &[0, 1]).unwrap(), Weight::tropical_int(4));
    }

    #[test]
    fn a0_pipeline() {
        let a = a0();
        let rel = common_future_relation(&a).unwrap();
        for strategy in [Strategy::Lists, Strategy::Pairs] {
            let d = disambiguate(&a, &rel, &options(strategy)).unwrap();
            assert_eq!(d.automaton.num_states(), 3);
            assert!(is_unambiguous(&d.automaton));
            assert!(equivalent_up_to(&a, &d.automaton, 6)
                .unwrap()
                .is_equivalent());
        }
    }

    #[test]
    fn final_list_keeps_one() {
        let a = parse_wfa(
            "wfa v1 tropical\ninitial 0 0\nfinal 1 2\nfinal 2 1\ntrans 0 1 a 0\ntrans 0 2 a 1\n",
        )
        .unwrap();
        let rel = common_future_relation(&a).unwrap();
        for strategy in [Strategy::Lists, Strategy::Pairs] {
            let d = disambiguate(&a, &rel, &options(strategy)).unwrap();
            assert_eq!(d.removed_finals, 1);
            assert_eq!(d.automaton.finals().len(), 1);
            assert_eq!(
                string_weight(&d.automaton, &[0]).unwrap(),
                Weight::tropical_int(2)
            );
        }
    }

    #[test]
    fn unambiguous_input_is_left_alone() {
        let a = chain(6);
        let rel = common_future_relation(&a).unwrap();
        for strategy in [Strategy::Lists, Strategy::Pairs] {
            let d = disambiguate(&a, &rel, &options(strategy)).unwrap();
            assert_eq!(d.removed_transitions + d.removed_finals, 0);
            assert_eq!(write_wfa(&d.automaton), write_wfa(&a));
        }
    }

    #[test]
    fn t4_size_is_preserved() {
        for n in 2..=5 {
            let a = t4(n);
            let rel = common_future_relation(&a).unwrap();
            let d = disambiguate(&a, &rel, &DisambiguateOptions::default()).unwrap();
            assert_eq!(d.automaton.size(), a.size(), "n = {n}");
        }
    }

    #[test]
    fn strategies_and_variants_agree_on_random_inputs() {
        for seed in 0..60 {
            let a = random_wfa(&RandomWfaConfig {
                seed,
                num_states: 6,
                alphabet_size: 2,
                density: 0.35,
                num_initial: 2,
                num_final: 2,
                ..RandomWfaConfig::default()
            })
            .unwrap();
            for rel in [common_future_relation(&a).unwrap(), complete_relation(&a)] {
                let predis = predisambiguate(&a, &rel, 10_000).unwrap();
                let mut outputs = Vec::new();
                for (strategy, relaxed) in [
                    (Strategy::Lists, false),
                    (Strategy::Lists, true),
                    (Strategy::Pairs, false),
                ] {
                    let opts = RemovalOptions {
                        strategy,
                        relaxed,
                        audit_len: Some(6),
                        ..RemovalOptions::default()
                    };
                    let r = match strategy {
                        Strategy::Lists => process_lists(&predis, &opts).unwrap(),
                        Strategy::Pairs => process_pairs(&predis, &opts).unwrap().0,
                    };
                    let b = trim(&r.automaton);
                    assert!(
                        is_unambiguous(&b),
                        "seed {seed} {strategy} relaxed={relaxed}"
                    );
                    assert!(
                        equivalent_up_to(&a, &b, 6).unwrap().is_equivalent(),
                        "seed {seed}"
                    );
                    outputs.push(write_wfa(&b));
                }
                // relaxed and strict lists make the same removals
                assert_eq!(outputs[0], outputs[1], "seed {seed}");
            }
        }
    }

    #[test]
    fn strategy_names() {
        assert_eq!("pairs".parse::<Strategy>().unwrap(), Strategy::Pairs);
        assert_eq!(Strategy::Lists.to_string(), "lists");
        assert!("both".parse::<Strategy>().is_err());
    }
}
