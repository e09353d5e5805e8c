//! Brute-force ground truth.
//!
//! Everything here works by explicit recursive path enumeration over its own
//! adjacency lists and never calls the optimized queries of
//! [`crate::automaton`], so the two can cross-check each other.

pub mod families;
mod random;

use std::collections::BTreeMap;

use crate::automaton::{Label, StateId, Wfa};
use crate::error::{Error, Result};
use crate::semiring::Weight;

pub use random::{random_deterministic, random_wfa, RandomWfaConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub weight: Weight,
    /// Number of accepting paths labeled with the word.
    pub paths: usize,
}

/// Weights and accepting-path counts of every accepted word up to a length
/// bound. Words absent from the table have weight 0̄.
pub type LanguageTable = BTreeMap<Vec<Label>, TableEntry>;

/// Outgoing `(label, weight, dst)` lists built straight from the transition
/// multiset.
fn adjacency(a: &Wfa) -> Vec<Vec<(Label, &Weight, StateId)>> {
    let mut adj = vec![Vec::new(); a.num_states()];
    for t in a.transitions() {
        adj[t.src].push((t.label, &t.weight, t.dst));
    }
    adj
}

/// Visits every path starting at an initial state with at most `max_len`
/// transitions, passing the word, end state and `λ ⊗ w[π]`.
fn for_each_initial_path<F>(a: &Wfa, max_len: usize, mut visit: F)
where
    F: FnMut(&[Label], StateId, &Weight),
{
    fn go<F: FnMut(&[Label], StateId, &Weight)>(
        adj: &[Vec<(Label, &Weight, StateId)>],
        state: StateId,
        word: &mut Vec<Label>,
        weight: &Weight,
        max_len: usize,
        visit: &mut F,
    ) {
        visit(word, state, weight);
        if word.len() == max_len {
            return;
        }
        for &(label, w, dst) in &adj[state] {
            word.push(label);
            go(adj, dst, word, &weight.otimes(w), max_len, visit);
            word.pop();
        }
    }
    let adj = adjacency(a);
    let mut word = Vec::new();
    for (&q, lambda) in a.initials() {
        go(&adj, q, &mut word, lambda, max_len, &mut visit);
    }
}

pub fn language_table(a: &Wfa, max_len: usize) -> LanguageTable {
    let mut table = LanguageTable::new();
    for_each_initial_path(a, max_len, |word, state, weight| {
        if let Some(rho) = a.final_weight(state) {
            let w = weight.otimes(rho);
            table
                .entry(word.to_vec())
                .and_modify(|e| {
                    e.weight = e.weight.oplus(&w);
                    e.paths += 1;
                })
                .or_insert(TableEntry {
                    weight: w,
                    paths: 1,
                });
        }
    });
    table
}

/// `W_I(x, p)` for every word `x` up to `max_len` and every state `p` reached
/// by `x` from an initial state.
pub fn initial_weight_table(
    a: &Wfa,
    max_len: usize,
) -> BTreeMap<Vec<Label>, BTreeMap<StateId, Weight>> {
    let mut table: BTreeMap<Vec<Label>, BTreeMap<StateId, Weight>> = BTreeMap::new();
    for_each_initial_path(a, max_len, |word, state, weight| {
        let row = table.entry(word.to_vec()).or_default();
        row.entry(state)
            .and_modify(|e| *e = e.oplus(weight))
            .or_insert_with(|| weight.clone());
    });
    table
}

/// One path from an initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialPath {
    pub word: Vec<Label>,
    pub end: StateId,
    /// `λ(start) ⊗ w[π]`.
    pub weight: Weight,
}

/// Every path from an initial state with at most `max_len` transitions.
pub fn initial_paths(a: &Wfa, max_len: usize) -> Vec<InitialPath> {
    let mut paths = Vec::new();
    for_each_initial_path(a, max_len, |word, end, weight| {
        paths.push(InitialPath {
            word: word.to_vec(),
            end,
            weight: weight.clone(),
        })
    });
    paths
}

/// Checks a pre-disambiguation result against brute force on every path
/// of `A'` with at most `max_len` transitions:
///
/// * a path reading `x` into `(q, s)` weighs `W_I(x, Set(s))`, each member
///   `p` of `s` satisfies `W_I(x, p) = W_I(x, Set(s)) ⊗ s(p)`, and `Set(s)`
///   is exactly the set of states reached by `x` that are related to `q`;
/// * when `(q, s)` is final, the path weight times `ρ'(q, s)` is `A(x)`;
/// * `A'` and `A` accept the same words.
///
/// Returns the number of paths checked.
pub fn check_predis_propositions(
    input: &Wfa,
    rel: &crate::relation::Relation,
    predis: &crate::predis::PredisResult,
    max_len: usize,
) -> Result<usize, String> {
    let reached = initial_weight_table(input, max_len);
    let aprime = &predis.automaton;
    let paths = initial_paths(aprime, max_len);
    let format = |x: &[Label]| input.alphabet().format_word(x);
    for path in &paths {
        let x = &path.word;
        let state = &predis.states[path.end];
        let row = reached
            .get(x)
            .ok_or_else(|| format!("`{}` reaches nothing in A", format(x)))?;
        let related: Vec<StateId> = row
            .keys()
            .copied()
            .filter(|&p| rel.contains(p, state.head))
            .collect();
        let members: Vec<StateId> = state.subset.states().collect();
        if members != related || !row.contains_key(&state.head) {
            return Err(format!(
                "`{}` into state {}: subset {:?}, expected {:?}",
                format(x),
                path.end,
                members,
                related
            ));
        }
        let total = Weight::sum(input.kind(), members.iter().map(|p| &row[p]));
        if path.weight != total {
            return Err(format!(
                "`{}` into state {}: path weight {}, expected {}",
                format(x),
                path.end,
                path.weight,
                total
            ));
        }
        for (p, w) in state.subset.pairs() {
            if row[p] != total.otimes(w) {
                return Err(format!(
                    "`{}` into state {}: residual of {p} is {w}, W_I is {}",
                    format(x),
                    path.end,
                    row[p]
                ));
            }
        }
        if let Some(rho) = aprime.final_weight(path.end) {
            let accepted = row
                .iter()
                .filter_map(|(p, w)| input.final_weight(*p).map(|r| w.otimes(r)))
                .fold(input.zero(), |acc, v| acc.oplus(&v));
            if path.weight.otimes(rho) != accepted {
                return Err(format!(
                    "`{}` into final state {}: {} ⊗ {} differs from A(x) = {}",
                    format(x),
                    path.end,
                    path.weight,
                    rho,
                    accepted
                ));
            }
        }
    }
    let left: Vec<_> = language_table(aprime, max_len).into_keys().collect();
    let right: Vec<_> = language_table(input, max_len).into_keys().collect();
    if left != right {
        return Err("A' and A accept different words".into());
    }
    Ok(paths.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub word: Vec<Label>,
    pub left: Weight,
    pub right: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    /// First differing word in (length, lexicographic) order, if any.
    pub counterexample: Option<Counterexample>,
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Compares string weights (not path counts) on every word up to `max_len`.
pub fn equivalent_up_to(a: &Wfa, b: &Wfa, max_len: usize) -> Result<Equivalence> {
    if a.kind() != b.kind() {
        return Err(Error::KindMismatch(a.kind(), b.kind()));
    }
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let ta = language_table(a, max_len);
    let tb = language_table(b, max_len);
    let zero = a.zero();
    let mut diffs: Vec<Counterexample> = ta
        .keys()
        .chain(tb.keys())
        .filter_map(|word| {
            let left = ta.get(word).map_or(&zero, |e| &e.weight);
            let right = tb.get(word).map_or(&zero, |e| &e.weight);
            (left != right).then(|| Counterexample {
                word: word.clone(),
                left: left.clone(),
                right: right.clone(),
            })
        })
        .collect();
    diffs.sort_by(|x, y| (x.word.len(), &x.word).cmp(&(y.word.len(), &y.word)));
    Ok(Equivalence {
        counterexample: diffs.into_iter().next(),
    })
}

/// All words over `0..alphabet_size` with at most `max_len` symbols, shortest
/// first.
pub fn words(alphabet_size: usize, max_len: usize) -> impl Iterator<Item = Vec<Label>> {
    let mut layer: Vec<Vec<Label>> = vec![Vec::new()];
    let mut out = Vec::new();
    for len in 0..=max_len {
        out.extend(layer.iter().cloned());
        if len == max_len || alphabet_size == 0 {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..alphabet_size).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out.into_iter()
}
