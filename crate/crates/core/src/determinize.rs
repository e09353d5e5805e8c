//! Weighted subset construction over the tropical semiring.

use std::collections::{BTreeMap, HashMap};

use crate::automaton::{is_trim, Transition, Wfa};
use crate::error::{Error, Result};
use crate::predis::WeightedSubset;
use crate::semiring::{SemiringKind, Weight};

/// Subsets of `(state, residual)` pairs with minimum residual 0; the same
/// normalization as the weighted subsets of pre-disambiguation.
pub type DetSubset = WeightedSubset;

#[derive(Clone, Debug)]
pub struct Determinization {
    pub automaton: Wfa,
    /// `subsets[i]` is the subset behind output state `i`.
    pub subsets: Vec<DetSubset>,
}

/// Deterministic equivalent of `a`, or [`Error::NotDeterminizedWithinLimit`]
/// once more than `state_limit` subsets have been created.
pub fn determinize(a: &Wfa, state_limit: usize) -> Result<Wfa> {
    determinize_with_subsets(a, state_limit).map(|d| d.automaton)
}

/// [`determinize`], also returning the subset behind each output state.
/// Output states are numbered in order of discovery.
pub fn determinize_with_subsets(a: &Wfa, state_limit: usize) -> Result<Determinization> {
    if a.kind() != SemiringKind::Tropical {
        return Err(Error::Unsupported {
            op: "determinize",
            kind: a.kind(),
        });
    }
    if !is_trim(a) {
        return Err(Error::NotTrim);
    }
    if a.initials().is_empty() {
        return Ok(Determinization {
            automaton: Wfa::empty(a.kind(), a.alphabet().clone()),
            subsets: Vec::new(),
        });
    }
    if state_limit == 0 {
        return Err(Error::Precondition("state limit must be positive".into()));
    }

    let lambda = Weight::sum(a.kind(), a.initials().values());
    let start = WeightedSubset::new(
        a.initials()
            .iter()
            .map(|(&q, w)| (q, lambda.left_divide(w)))
            .collect(),
    );
    let mut index: HashMap<DetSubset, usize> = HashMap::from([(start.clone(), 0)]);
    let mut subsets = vec![start];
    let mut transitions = Vec::new();
    let mut next = 0;
    while next < subsets.len() {
        let src = next;
        next += 1;
        for label in a.alphabet().labels() {
            let mut reach: BTreeMap<usize, Weight> = BTreeMap::new();
            for (p, v) in subsets[src].pairs() {
                for t in a.out_with(*p, label) {
                    let w = v.otimes(&t.weight);
                    reach
                        .entry(t.dst)
                        .and_modify(|acc| *acc = acc.oplus(&w))
                        .or_insert(w);
                }
            }
            if reach.is_empty() {
                continue;
            }
            let weight = Weight::sum(a.kind(), reach.values());
            let subset = WeightedSubset::new(
                reach
                    .into_iter()
                    .map(|(q, w)| (q, weight.left_divide(&w)))
                    .collect(),
            );
            let dst = match index.get(&subset) {
                Some(&i) => i,
                None => {
                    if subsets.len() == state_limit {
                        return Err(Error::NotDeterminizedWithinLimit { limit: state_limit });
                    }
                    index.insert(subset.clone(), subsets.len());
                    subsets.push(subset);
                    subsets.len() - 1
                }
            };
            transitions.push(Transition {
                src,
                label,
                dst,
                weight,
            });
        }
    }

    let finals = subsets
        .iter()
        .enumerate()
        .filter_map(|(i, s)| {
            let rho = s
                .pairs()
                .iter()
                .filter_map(|(p, v)| a.final_weight(*p).map(|r| v.otimes(r)))
                .fold(a.zero(), |acc, w| acc.oplus(&w));
            (!rho.is_zero()).then_some((i, rho))
        })
        .collect();
    let automaton = Wfa::from_parts(
        a.kind(),
        a.alphabet().clone(),
        subsets.len(),
        transitions,
        BTreeMap::from([(0, lambda)]),
        finals,
    )?;
    Ok(Determinization { automaton, subsets })
}
