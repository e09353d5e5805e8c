//! Relations over `Q × Q` that parameterize pre-disambiguation.
//!
//! A relation is admissible for an automaton when it contains the
//! common-future relation `R*` and is compatible with the inverse transition
//! function: `q R q'`, `p -a-> q`, `p' -a-> q'` imply `p R p'`.

use std::collections::BTreeSet;

use crate::automaton::{is_trim, Label, StateId, Wfa};
use crate::error::{Error, Result};

/// Dense boolean matrix over the states of one automaton.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        Relation {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn identity(n: usize) -> Relation {
        let mut r = Relation::empty(n);
        for q in 0..n {
            r.insert(q, q);
        }
        r
    }

    /// `R₀`: every pair related.
    pub fn complete(n: usize) -> Relation {
        Relation {
            n,
            bits: vec![true; n * n],
        }
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn contains(&self, p: StateId, q: StateId) -> bool {
        self.bits[p * self.n + q]
    }

    pub fn insert(&mut self, p: StateId, q: StateId) {
        self.bits[p * self.n + q] = true;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        (0..self.n)
            .flat_map(move |p| (0..self.n).map(move |q| (p, q)))
            .filter(|&(p, q)| self.contains(p, q))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(p, q)| self.contains(q, p))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|q| self.contains(q, q))
    }

    /// True when every pair of `other` is in `self`.
    pub fn contains_all(&self, other: &Relation) -> bool {
        self.n == other.n && other.pairs().all(|(p, q)| self.contains(p, q))
    }
}

/// Predecessor lists per label: `preds[label][q]` holds every `p` with a
/// transition `p -label-> q` (with multiplicity).
fn predecessors(a: &Wfa) -> Vec<Vec<Vec<StateId>>> {
    let mut preds = vec![vec![Vec::new(); a.num_states()]; a.alphabet().len()];
    for t in a.transitions() {
        preds[t.label][t.dst].push(t.src);
    }
    preds
}

/// `R*`: `q R* q'` iff some string leads both `q` and `q'` to final states.
/// Computed as backward reachability from `F × F` in the pair graph.
pub fn common_future_relation(a: &Wfa) -> Result<Relation> {
    if !is_trim(a) {
        return Err(Error::NotTrim);
    }
    let preds = predecessors(a);
    let mut rel = Relation::empty(a.num_states());
    let mut stack = Vec::new();
    for &f in a.finals().keys() {
        for &g in a.finals().keys() {
            rel.insert(f, g);
            stack.push((f, g));
        }
    }
    while let Some((q, r)) = stack.pop() {
        for by_label in &preds {
            if by_label[r].is_empty() {
                continue;
            }
            for &p in &by_label[q] {
                for &s in &by_label[r] {
                    if !rel.contains(p, s) {
                        rel.insert(p, s);
                        stack.push((p, s));
                    }
                }
            }
        }
    }
    Ok(rel)
}

/// `R₀` for the states of `a`.
pub fn complete_relation(a: &Wfa) -> Relation {
    Relation::complete(a.num_states())
}

/// A pair of equal-label transitions `p -a-> q`, `p' -a-> q'` with `q R q'`
/// but not `p R p'`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Incompatibility {
    pub sources: (StateId, StateId),
    pub label: Label,
    pub targets: (StateId, StateId),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdmissibilityReport {
    /// Pairs of `R*` missing from the relation.
    pub missing: Vec<(StateId, StateId)>,
    pub incompatible: Vec<Incompatibility>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.missing.is_empty() && self.incompatible.is_empty()
    }
}

/// Checks that `rel` contains `R*` and is compatible with the inverse
/// transition function. One-step compatibility suffices; it extends to all
/// strings by induction.
pub fn validate_admissible(a: &Wfa, rel: &Relation) -> Result<AdmissibilityReport> {
    if rel.num_states() != a.num_states() {
        return Err(Error::Precondition(format!(
            "relation is over {} states, automaton has {}",
            rel.num_states(),
            a.num_states()
        )));
    }
    let rstar = common_future_relation(a)?;
    let missing = rstar
        .pairs()
        .filter(|&(p, q)| !rel.contains(p, q))
        .collect();
    let mut by_label: Vec<Vec<(StateId, StateId)>> = vec![Vec::new(); a.alphabet().len()];
    for t in a.transitions() {
        by_label[t.label].push((t.src, t.dst));
    }
    let mut incompatible = BTreeSet::new();
    for (label, edges) in by_label.iter().enumerate() {
        for &(p, q) in edges {
            for &(p2, q2) in edges {
                if rel.contains(q, q2) && !rel.contains(p, p2) {
                    incompatible.insert(Incompatibility {
                        sources: (p, p2),
                        label,
                        targets: (q, q2),
                    });
                }
            }
        }
    }
    Ok(AdmissibilityReport {
        missing,
        incompatible: incompatible.into_iter().collect(),
    })
}
