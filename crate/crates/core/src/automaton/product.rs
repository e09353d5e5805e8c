//! Label-synchronized products.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{StateId, Transition, Wfa};
use crate::error::{Error, Result};

/// An intersection automaton together with the state pair behind each of its
/// states. `pairs` is sorted, and state `i` is `pairs[i]`.
#[derive(Clone, Debug)]
pub struct Product {
    pub automaton: Wfa,
    pub pairs: Vec<(StateId, StateId)>,
}

fn compatible(a: &Wfa, b: &Wfa) -> Result<()> {
    if a.kind() != b.kind() {
        return Err(Error::KindMismatch(a.kind(), b.kind()));
    }
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

/// Pair states reachable from `I_A × I_B` by a common string. Only states are
/// explored; no pair transitions are materialized.
pub fn accessible_pairs(a: &Wfa, b: &Wfa) -> Result<BTreeSet<(StateId, StateId)>> {
    compatible(a, b)?;
    let mut seen = BTreeSet::new();
    let mut stack = Vec::new();
    for &p in a.initials().keys() {
        for &q in b.initials().keys() {
            if seen.insert((p, q)) {
                stack.push((p, q));
            }
        }
    }
    while let Some((p, q)) = stack.pop() {
        for label in a.alphabet().labels() {
            let out_b = b.out_with(q, label);
            if out_b.is_empty() {
                continue;
            }
            for t1 in a.out_with(p, label) {
                for t2 in out_b {
                    if seen.insert((t1.dst, t2.dst)) {
                        stack.push((t1.dst, t2.dst));
                    }
                }
            }
        }
    }
    Ok(seen)
}

/// The accessible part of `A ∩ B` with weights ⊗-multiplied. Every pair of
/// equal-label transitions yields one product transition, so multiplicities
/// multiply.
pub fn intersect(a: &Wfa, b: &Wfa) -> Result<Product> {
    let pairs: Vec<(StateId, StateId)> = accessible_pairs(a, b)?.into_iter().collect();
    let index: HashMap<(StateId, StateId), StateId> =
        pairs.iter().enumerate().map(|(i, &pq)| (pq, i)).collect();
    let mut transitions = Vec::new();
    let mut initials = BTreeMap::new();
    let mut finals = BTreeMap::new();
    for (i, &(p, q)) in pairs.iter().enumerate() {
        if let (Some(x), Some(y)) = (a.initial_weight(p), b.initial_weight(q)) {
            initials.insert(i, x.otimes(y));
        }
        if let (Some(x), Some(y)) = (a.final_weight(p), b.final_weight(q)) {
            finals.insert(i, x.otimes(y));
        }
        for label in a.alphabet().labels() {
            for t1 in a.out_with(p, label) {
                for t2 in b.out_with(q, label) {
                    transitions.push(Transition {
                        src: i,
                        label,
                        dst: index[&(t1.dst, t2.dst)],
                        weight: t1.weight.otimes(&t2.weight),
                    });
                }
            }
        }
    }
    let automaton = Wfa::from_parts(
        a.kind(),
        a.alphabet().clone(),
        pairs.len(),
        transitions,
        initials,
        finals,
    )?;
    Ok(Product { automaton, pairs })
}

/// `−A`: every transition, initial and final weight negated (tropical only).
pub fn negate_automaton(a: &Wfa) -> Result<Wfa> {
    let transitions = a
        .transitions()
        .iter()
        .map(|t| {
            Ok(Transition {
                weight: t.weight.negate()?,
                ..t.clone()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let negate_map = |m: &BTreeMap<StateId, _>| -> Result<BTreeMap<StateId, _>> {
        m.iter()
            .map(|(&q, w): (&StateId, &crate::semiring::Weight)| Ok((q, w.negate()?)))
            .collect()
    };
    Wfa::from_parts(
        a.kind(),
        a.alphabet().clone(),
        a.num_states(),
        transitions,
        negate_map(a.initials())?,
        negate_map(a.finals())?,
    )
}
