//! Pre-disambiguation: a subset construction whose states are pairs
//! `(q, s)` of a head state `q` and a weighted subset `s` of the states
//! reachable by the same string and related to `q`, each carrying its
//! residual weight.
//!
//! Every path of the result that reads `x` from an initial state carries
//! exactly `W_I(x, Set(s))`, and its final weight restores `A(x)`, so only
//! redundant paths need removing afterwards (see [`crate::disambiguate`]).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fmt::Write as _;

use crate::automaton::{delta, is_trim, Label, StateId, Transition, Wfa};
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::semiring::{SemiringKind, Weight};

pub const DEFAULT_STATE_LIMIT: usize = 100_000;

/// Pairs `(p, w)` sorted by state, with `⊕ w = 1̄`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightedSubset {
    pairs: Vec<(StateId, Weight)>,
}

impl WeightedSubset {
    pub fn new(mut pairs: Vec<(StateId, Weight)>) -> WeightedSubset {
        pairs.sort();
        pairs.dedup_by(|a, b| a.0 == b.0);
        WeightedSubset { pairs }
    }

    pub fn pairs(&self) -> &[(StateId, Weight)] {
        &self.pairs
    }

    /// `Set(s)`.
    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn residual(&self, q: StateId) -> Option<&Weight> {
        self.pairs
            .binary_search_by_key(&q, |&(p, _)| p)
            .ok()
            .map(|i| &self.pairs[i].1)
    }

    /// Residuals are non-zero and their ⊕-sum is 1̄.
    pub fn is_normalized(&self, kind: SemiringKind) -> bool {
        !self.pairs.is_empty()
            && self.pairs.iter().all(|(_, w)| !w.is_zero())
            && Weight::sum(kind, self.pairs.iter().map(|(_, w)| w)).is_one()
    }
}

impl fmt::Display for WeightedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, w)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}:{w}")?;
        }
        f.write_str("}")
    }
}

/// A state `(q, s)` of the pre-disambiguated automaton. Identity is
/// structural; ordering is by head first, which fixes the processing order
/// of transition removal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredisState {
    pub head: StateId,
    pub subset: WeightedSubset,
}

#[derive(Clone, Debug)]
pub struct PredisResult {
    pub automaton: Wfa,
    /// `states[i]` is the pair behind state `i` of `automaton`; sorted.
    pub states: Vec<PredisState>,
    /// A string reaching each state from an initial state.
    pub witnesses: Vec<Vec<Label>>,
}

impl PredisResult {
    /// One `state <id> head <q> subset {p:w,...} witness <x>` line per state.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, (s, x)) in self.states.iter().zip(&self.witnesses).enumerate() {
            writeln!(
                out,
                "state {i} head {} subset {} witness {}",
                s.head,
                s.subset,
                self.automaton.alphabet().format_word(x)
            )
            .unwrap();
        }
        out
    }

    /// Checks every constructed subset for normalization and head membership,
    /// and every transition `(q, s) -a-> (q', s')` for
    /// `Set(s') = δ_{q'}(Set(s), a)`. Returns the number of checks made.
    pub fn check_invariants(&self, input: &Wfa, rel: &Relation) -> Result<usize, String> {
        let mut checks = 0;
        for (i, s) in self.states.iter().enumerate() {
            if !s.subset.is_normalized(input.kind()) {
                return Err(format!("state {i}: subset {} is not normalized", s.subset));
            }
            if s.subset.residual(s.head).is_none() {
                return Err(format!(
                    "state {i}: head {} missing from its subset",
                    s.head
                ));
            }
            checks += 1;
        }
        for t in self.automaton.transitions() {
            let src = &self.states[t.src];
            let dst = &self.states[t.dst];
            let from: BTreeSet<StateId> = src.subset.states().collect();
            let expected: BTreeSet<StateId> = delta(input, &from, &[t.label])
                .map_err(|e| e.to_string())?
                .into_iter()
                .filter(|&p| rel.contains(p, dst.head))
                .collect();
            let got: BTreeSet<StateId> = dst.subset.states().collect();
            if got != expected {
                return Err(format!(
                    "transition {} -> {}: successor set {got:?}, expected {expected:?}",
                    t.src, t.dst
                ));
            }
            checks += 1;
        }
        Ok(checks)
    }
}

/// `W(p, a, p')` for every `p, a`, as `(p', weight)` lists sorted by `p'`;
/// parallel transitions are ⊕-summed.
fn one_step_weights(a: &Wfa) -> Vec<Vec<Vec<(StateId, Weight)>>> {
    a.states()
        .map(|p| {
            a.alphabet()
                .labels()
                .map(|label| {
                    let mut row: Vec<(StateId, Weight)> = Vec::new();
                    for t in a.out_with(p, label) {
                        match row.last_mut() {
                            Some((q, w)) if *q == t.dst => *w = w.oplus(&t.weight),
                            _ => row.push((t.dst, t.weight.clone())),
                        }
                    }
                    row
                })
                .collect()
        })
        .collect()
}

struct Construction<'a> {
    input: &'a Wfa,
    rel: &'a Relation,
    steps: Vec<Vec<Vec<(StateId, Weight)>>>,
}

impl<'a> Construction<'a> {
    fn new(input: &'a Wfa, rel: &'a Relation) -> Result<Self> {
        if rel.num_states() != input.num_states() {
            return Err(Error::Precondition(format!(
                "relation is over {} states, automaton has {}",
                rel.num_states(),
                input.num_states()
            )));
        }
        Ok(Construction {
            input,
            rel,
            steps: one_step_weights(input),
        })
    }

    /// The initial state with head `q` and its initial weight.
    fn seed(&self, q: StateId) -> (Weight, PredisState) {
        let members: Vec<(StateId, &Weight)> = self
            .input
            .initials()
            .iter()
            .filter(|(&p, _)| self.rel.contains(p, q))
            .map(|(&p, w)| (p, w))
            .collect();
        let total = Weight::sum(self.input.kind(), members.iter().map(|(_, w)| *w));
        let subset = WeightedSubset::new(
            members
                .iter()
                .map(|&(p, w)| (p, total.left_divide(w)))
                .collect(),
        );
        (total, PredisState { head: q, subset })
    }

    /// Distinct `a`-successors of `q` in the input.
    fn successors(&self, q: StateId, label: Label) -> impl Iterator<Item = StateId> + '_ {
        self.steps[q][label].iter().map(|&(p, _)| p)
    }

    fn successor(
        &self,
        state: &PredisState,
        label: Label,
        head: StateId,
    ) -> Result<(Weight, PredisState)> {
        // v_j = ⊕_i w_i ⊗ W(p_i, a, p'_j) over the p'_j related to the new head
        let mut sums: BTreeMap<StateId, Weight> = BTreeMap::new();
        for (p, w) in state.subset.pairs() {
            for (next, step) in &self.steps[*p][label] {
                if !self.rel.contains(*next, head) {
                    continue;
                }
                let v = w.otimes(step);
                sums.entry(*next)
                    .and_modify(|acc| *acc = acc.oplus(&v))
                    .or_insert(v);
            }
        }
        if !sums.contains_key(&head) {
            return Err(Error::Precondition(format!(
                "state {head} is not related to itself; the relation is not admissible"
            )));
        }
        let total = Weight::sum(self.input.kind(), sums.values());
        let subset = WeightedSubset {
            pairs: sums
                .into_iter()
                .map(|(p, v)| (p, total.left_divide(&v)))
                .collect(),
        };
        Ok((total, PredisState { head, subset }))
    }
}

/// One transition of the construction: the weight and target of the
/// `label`-transition from `state` towards head `head`.
pub fn subset_successor(
    input: &Wfa,
    rel: &Relation,
    state: &PredisState,
    label: Label,
    head: StateId,
) -> Result<(Weight, PredisState)> {
    let c = Construction::new(input, rel)?;
    if label >= input.alphabet().len() {
        return Err(Error::UnknownLabel(format!("#{label}")));
    }
    if !c.successors(state.head, label).any(|q| q == head) {
        return Err(Error::Precondition(format!(
            "{head} is not a {}-successor of {}",
            input.alphabet().token(label),
            state.head
        )));
    }
    c.successor(state, label, head)
}

/// Builds the pre-disambiguated automaton of `input` under `rel`.
///
/// Exploration is breadth-first over (state, label, successor head); the
/// discovered states are then renumbered in [`PredisState`] order. Fails
/// with [`Error::NotPredisambiguable`] once more than `state_limit` states
/// have been created.
pub fn predisambiguate(input: &Wfa, rel: &Relation, state_limit: usize) -> Result<PredisResult> {
    if !is_trim(input) {
        return Err(Error::NotTrim);
    }
    if state_limit == 0 {
        return Err(Error::Precondition("state limit must be positive".into()));
    }
    let c = Construction::new(input, rel)?;

    let mut index: HashMap<PredisState, usize> = HashMap::new();
    let mut states: Vec<PredisState> = Vec::new();
    let mut witnesses: Vec<Vec<Label>> = Vec::new();
    // interns `s`, recording its BFS parent for the witness string
    let mut intern = |s: PredisState,
                      parent: Option<(usize, Label)>,
                      states: &mut Vec<PredisState>,
                      witnesses: &mut Vec<Vec<Label>>| {
        if let Some(&i) = index.get(&s) {
            return Ok(i);
        }
        if states.len() == state_limit {
            return Err(Error::NotPredisambiguable { limit: state_limit });
        }
        let witness = match parent {
            None => Vec::new(),
            Some((p, label)) => {
                let mut x = witnesses[p].clone();
                x.push(label);
                x
            }
        };
        index.insert(s.clone(), states.len());
        states.push(s);
        witnesses.push(witness);
        Ok(states.len() - 1)
    };

    let mut initials = BTreeMap::new();
    for &q in input.initials().keys() {
        let (lambda, s) = c.seed(q);
        let i = intern(s, None, &mut states, &mut witnesses)?;
        initials.insert(i, lambda);
    }

    let mut transitions = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let src = next;
        next += 1;
        let head = states[src].head;
        for label in input.alphabet().labels() {
            for q in c.successors(head, label) {
                let (weight, s) = c.successor(&states[src], label, q)?;
                let dst = intern(s, Some((src, label)), &mut states, &mut witnesses)?;
                transitions.push(Transition {
                    src,
                    label,
                    dst,
                    weight,
                });
            }
        }
    }

    let finals: BTreeMap<usize, Weight> = states
        .iter()
        .enumerate()
        .filter(|(_, s)| input.is_final(s.head))
        .map(|(i, s)| {
            let rho = s
                .subset
                .pairs()
                .iter()
                .filter_map(|(p, w)| input.final_weight(*p).map(|r| w.otimes(r)))
                .fold(input.zero(), |acc, v| acc.oplus(&v));
            (i, rho)
        })
        .collect();

    // renumber in (head, subset) order
    let mut order: Vec<usize> = (0..states.len()).collect();
    order.sort_by(|&i, &j| states[i].cmp(&states[j]));
    let mut new_id = vec![0; states.len()];
    for (n, &old) in order.iter().enumerate() {
        new_id[old] = n;
    }
    let transitions = transitions
        .into_iter()
        .map(|t| Transition {
            src: new_id[t.src],
            dst: new_id[t.dst],
            ..t
        })
        .collect();
    let remap = |m: BTreeMap<usize, Weight>| m.into_iter().map(|(i, w)| (new_id[i], w)).collect();
    let automaton = Wfa::from_parts(
        input.kind(),
        input.alphabet().clone(),
        states.len(),
        transitions,
        remap(initials),
        remap(finals),
    )?;
    let mut sorted_states = Vec::with_capacity(states.len());
    let mut sorted_witnesses = Vec::with_capacity(states.len());
    for &old in &order {
        sorted_states.push(states[old].clone());
        sorted_witnesses.push(witnesses[old].clone());
    }
    Ok(PredisResult {
        automaton,
        states: sorted_states,
        witnesses: sorted_witnesses,
    })
}
