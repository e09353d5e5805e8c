//! Twins tests for tropical automata.
//!
//! Both tests look for a cycle of nonzero weight in the self-product
//! `A ∩ (−A)`, whose cycle weights are the differences `W(p,y,p) − W(q,y,q)`.
//! The weak variant first trims the product, which discards sibling pairs
//! without a common future.

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::automaton::{
    accessible, coaccessible, intersect, is_cycle_unambiguous, is_trim, negate_automaton, Label,
    StateId, Wfa,
};
use crate::error::{Error, Result};
use crate::semiring::{Rational, SemiringKind, Weight};

/// A closed walk of `A ∩ (−A)` with nonzero weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWitness {
    /// Pair states visited; the first and last coincide.
    pub states: Vec<(StateId, StateId)>,
    pub labels: Vec<Label>,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCheckReport {
    pub holds: bool,
    pub witness: Option<CycleWitness>,
}

impl CycleCheckReport {
    fn from_witness(witness: Option<CycleWitness>) -> Self {
        CycleCheckReport {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// Looks for a closed walk of nonzero total weight in the graph on `n`
/// nodes with weighted `edges`. Returns the walk as edge indices.
///
/// Every cycle weighs zero iff inside each strongly connected component
/// the weights are differences of a potential, so one spanning tree per
/// component fixes the potential and any edge disagreeing with it closes a
/// bad cycle.
pub fn nonzero_cycle(n: usize, edges: &[(usize, usize, Rational)]) -> Option<Vec<usize>> {
    let mut graph: DiGraph<(), usize> = DiGraph::new();
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for (i, (u, v, _)) in edges.iter().enumerate() {
        graph.add_edge(nodes[*u], nodes[*v], i);
    }
    let mut component = vec![0; n];
    let sccs = tarjan_scc(&graph);
    for (c, scc) in sccs.iter().enumerate() {
        for node in scc {
            component[node.index()] = c;
        }
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, (u, v, _)) in edges.iter().enumerate() {
        if component[*u] == component[*v] {
            out[*u].push(i);
            into[*v].push(i);
        }
    }

    let mut potential: Vec<Option<Rational>> = vec![None; n];
    // tree edge into each node from the root, and out of each node towards it
    let mut down: Vec<Option<usize>> = vec![None; n];
    let mut up: Vec<Option<usize>> = vec![None; n];
    for scc in &sccs {
        let root = scc.iter().map(|x| x.index()).min().unwrap();
        potential[root] = Some(Rational::zero());
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &e in &out[u] {
                let (_, v, w) = &edges[e];
                if potential[*v].is_none() {
                    potential[*v] = Some(potential[u].as_ref().unwrap() + w);
                    down[*v] = Some(e);
                    queue.push_back(*v);
                }
            }
        }
        let mut seen = BTreeSet::from([root]);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in &into[v] {
                let u = edges[e].0;
                if seen.insert(u) {
                    up[u] = Some(e);
                    queue.push_back(u);
                }
            }
        }

        for u in scc.iter().map(|x| x.index()) {
            for &e in &out[u] {
                let (_, v, w) = &edges[e];
                let through = potential[u].as_ref().unwrap() + w;
                if &through == potential[*v].as_ref().unwrap() {
                    continue;
                }
                // root→u, e, v→root and root→v, v→root differ by the
                // nonzero discrepancy, so one of them is nonzero
                let to_root = |mut x: usize| {
                    let mut path = Vec::new();
                    while x != root {
                        let e = up[x].unwrap();
                        path.push(e);
                        x = edges[e].1;
                    }
                    path
                };
                let from_root = |mut x: usize| {
                    let mut path = Vec::new();
                    while x != root {
                        let e = down[x].unwrap();
                        path.push(e);
                        x = edges[e].0;
                    }
                    path.reverse();
                    path
                };
                let back = to_root(*v);
                let weight =
                    |walk: &[usize]| -> Rational { walk.iter().map(|&e| edges[e].2.clone()).sum() };
                let mut via_v = from_root(*v);
                via_v.extend(&back);
                if !weight(&via_v).is_zero() {
                    return Some(via_v);
                }
                let mut via_e = from_root(u);
                via_e.push(e);
                via_e.extend(&back);
                return Some(via_e);
            }
        }
    }
    None
}

fn check_preconditions(a: &Wfa) -> Result<()> {
    if a.kind() != SemiringKind::Tropical {
        return Err(Error::Precondition(
            "twins tests need a tropical automaton".into(),
        ));
    }
    if !is_trim(a) {
        return Err(Error::NotTrim);
    }
    if !is_cycle_unambiguous(a) {
        return Err(Error::Precondition(
            "automaton is not cycle-unambiguous; the cycle test does not apply".into(),
        ));
    }
    Ok(())
}

/// Runs the cycle test on `A ∩ (−A)`, optionally trimmed to its
/// co-accessible part.
fn product_cycle_test(a: &Wfa, trim_coaccessible: bool) -> Result<CycleCheckReport> {
    check_preconditions(a)?;
    let product = intersect(a, &negate_automaton(a)?)?;
    let b = &product.automaton;
    let keep: Vec<bool> = if trim_coaccessible {
        let acc = accessible(b);
        let coacc = coaccessible(b);
        acc.iter().zip(&coacc).map(|(x, y)| *x && *y).collect()
    } else {
        accessible(b)
    };
    let edges: Vec<(usize, usize, Rational)> = b
        .transitions()
        .iter()
        .filter(|t| keep[t.src] && keep[t.dst])
        .map(|t| (t.src, t.dst, t.weight.value().expect("finite").clone()))
        .collect();
    let labels: Vec<Label> = b
        .transitions()
        .iter()
        .filter(|t| keep[t.src] && keep[t.dst])
        .map(|t| t.label)
        .collect();
    let witness = nonzero_cycle(b.num_states(), &edges).map(|walk| {
        let mut states = vec![product.pairs[edges[walk[0]].0]];
        states.extend(walk.iter().map(|&e| product.pairs[edges[e].1]));
        CycleWitness {
            states,
            labels: walk.iter().map(|&e| labels[e]).collect(),
            weight: Weight::tropical(walk.iter().map(|&e| edges[e].2.clone()).sum()),
        }
    });
    Ok(CycleCheckReport::from_witness(witness))
}

/// The weak twins property: every cycle of `Trim(A ∩ (−A))` weighs zero.
/// Requires a trim, cycle-unambiguous tropical automaton.
pub fn has_weak_twins(a: &Wfa) -> Result<CycleCheckReport> {
    product_cycle_test(a, true)
}

/// The classic twins property: the same test on the accessible part of
/// `A ∩ (−A)` without trimming.
pub fn has_twins(a: &Wfa) -> Result<CycleCheckReport> {
    product_cycle_test(a, false)
}

/// Bounded search for a weak twins violation straight from the definition:
/// sibling pairs `p R* q` reached by a common string of length at most
/// `x_bound`, each checked for a common cycle label `y`, `|y| <= y_bound`,
/// on which the cycle weights differ. Returns `false` on a violation.
///
/// The common future relation is recomputed here by forward search so the
/// result does not depend on [`crate::relation`]. For cycle-unambiguous
/// inputs each `(p, y)` has at most one cycle, so comparing the cycles path
/// by path is comparing `W(p,y,p)` with `W(q,y,q)`.
pub fn brute_force_weak_twins(a: &Wfa, x_bound: usize, y_bound: usize) -> Result<bool> {
    if a.kind() != SemiringKind::Tropical {
        return Err(Error::Precondition(
            "twins tests need a tropical automaton".into(),
        ));
    }
    if !is_trim(a) {
        return Err(Error::NotTrim);
    }
    let steps = |p: StateId, q: StateId| {
        let mut next = Vec::new();
        for t in a.transitions().iter().filter(|t| t.src == p) {
            for u in a
                .transitions()
                .iter()
                .filter(|u| u.src == q && u.label == t.label)
            {
                next.push((t, u));
            }
        }
        next
    };

    // p and q share a future iff some pair of F × F is reachable from (p, q)
    let common_future = |p: StateId, q: StateId| {
        let mut seen = BTreeSet::from([(p, q)]);
        let mut stack = vec![(p, q)];
        while let Some((x, y)) = stack.pop() {
            if a.is_final(x) && a.is_final(y) {
                return true;
            }
            for (t, u) in steps(x, y) {
                if seen.insert((t.dst, u.dst)) {
                    stack.push((t.dst, u.dst));
                }
            }
        }
        false
    };

    let mut siblings: BTreeSet<(StateId, StateId)> = BTreeSet::new();
    let mut layer: BTreeSet<(StateId, StateId)> = a
        .initials()
        .keys()
        .flat_map(|&p| a.initials().keys().map(move |&q| (p, q)))
        .collect();
    for _ in 0..=x_bound {
        siblings.extend(layer.iter().copied());
        layer = layer
            .iter()
            .flat_map(|&(p, q)| steps(p, q))
            .map(|(t, u)| (t.dst, u.dst))
            .collect();
        if layer.is_subset(&siblings) {
            break;
        }
    }

    for &(p, q) in siblings.iter().filter(|(p, q)| p < q) {
        if !common_future(p, q) {
            continue;
        }
        let mut walk: BTreeSet<(StateId, StateId, Rational)> =
            BTreeSet::from([(p, q, Rational::zero())]);
        for _ in 0..y_bound {
            let mut next = BTreeSet::new();
            for (x, y, d) in &walk {
                for (t, u) in steps(*x, *y) {
                    let dt = t.weight.value().unwrap() - u.weight.value().unwrap();
                    let d = d + dt;
                    if (t.dst, u.dst) == (p, q) && !d.is_zero() {
                        return Ok(false);
                    }
                    next.insert((t.dst, u.dst, d));
                }
            }
            if next.is_empty() {
                break;
            }
            walk = next;
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::families::{a0, chain, disambiguable_not_determinizable, two_cycles};
    use crate::oracle::{random_wfa, RandomWfaConfig};
    use proptest::prelude::*;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn acyclic_inputs_hold() {
        for a in [a0(), chain(4)] {
            assert!(has_weak_twins(&a).unwrap().holds);
            assert!(has_twins(&a).unwrap().holds);
            assert!(brute_force_weak_twins(&a, 9, 9).unwrap());
        }
    }

    #[test]
    fn shared_future_unequal_cycles() {
        let a = two_cycles(true);
        let report = has_weak_twins(&a).unwrap();
        assert!(!report.holds);
        let w = report.witness.unwrap();
        assert!(w.weight == Weight::tropical_int(1) || w.weight == Weight::tropical_int(-1));
        assert_eq!(w.states.first(), w.states.last());
        assert_eq!(w.labels.len() + 1, w.states.len());
        assert!(!brute_force_weak_twins(&a, 3, 3).unwrap());
        assert!(!has_twins(&a).unwrap().holds);
    }

    #[test]
    fn disjoint_futures() {
        let a = two_cycles(false);
        assert!(has_weak_twins(&a).unwrap().holds);
        assert!(brute_force_weak_twins(&a, 16, 16).unwrap());
        assert!(!has_twins(&a).unwrap().holds);

        let b = disambiguable_not_determinizable();
        assert!(has_weak_twins(&b).unwrap().holds);
        assert!(!has_twins(&b).unwrap().holds);
    }

    #[test]
    fn deterministic_input_has_twins() {
        let a = crate::text::parse_wfa(
            "wfa v1 tropical\ninitial 0 0\nfinal 1 0\ntrans 0 1 a 1\ntrans 1 0 b 2\ntrans 1 1 a 3\n",
        )
        .unwrap();
        assert!(has_twins(&a).unwrap().holds);
        assert!(has_weak_twins(&a).unwrap().holds);
    }

    #[test]
    fn preconditions() {
        let prob = crate::text::parse_wfa("wfa v1 probability\ninitial 0 1\nfinal 0 1\n").unwrap();
        assert!(matches!(has_weak_twins(&prob), Err(Error::Precondition(_))));
        let two_loops = crate::text::parse_wfa(
            "wfa v1 tropical\ninitial 0 0\nfinal 0 0\ntrans 0 0 a 1\ntrans 0 0 a 2\n",
        )
        .unwrap();
        assert!(matches!(
            has_weak_twins(&two_loops),
            Err(Error::Precondition(_))
        ));
        let untrimmed =
            crate::text::parse_wfa("wfa v1 tropical\ninitial 0 0\nfinal 0 0\ntrans 0 1 a 1\n")
                .unwrap();
        assert_eq!(has_twins(&untrimmed).unwrap_err(), Error::NotTrim);
    }

    #[test]
    fn agrees_with_brute_force_on_random_cyclic_inputs() {
        let mut checked = 0;
        let mut failing = 0;
        for seed in 0..150 {
            let a = random_wfa(&RandomWfaConfig {
                seed,
                num_states: 4,
                alphabet_size: 2,
                density: 0.25,
                acyclic: false,
                weight_range: (0, 3),
                num_initial: 2,
                num_final: 1,
                ..RandomWfaConfig::default()
            })
            .unwrap();
            if !is_cycle_unambiguous(&a) {
                continue;
            }
            let n = a.num_states();
            let fast = has_weak_twins(&a).unwrap().holds;
            assert_eq!(
                fast,
                brute_force_weak_twins(&a, n * n, n * n).unwrap(),
                "seed {seed}"
            );
            checked += 1;
            failing += usize::from(!fast);
        }
        assert!(
            checked > 30 && failing > 0,
            "{checked} checked, {failing} failing"
        );
    }

    /// Sum of every simple cycle, by DFS from each smallest node.
    fn any_simple_cycle_nonzero(n: usize, edges: &[(usize, usize, Rational)]) -> bool {
        fn dfs(
            start: usize,
            u: usize,
            sum: Rational,
            on_path: &mut Vec<bool>,
            edges: &[(usize, usize, Rational)],
        ) -> bool {
            for (x, v, w) in edges {
                if *x != u || *v < start {
                    continue;
                }
                let s = &sum + w;
                if *v == start {
                    if !s.is_zero() {
                        return true;
                    }
                } else if !on_path[*v] {
                    on_path[*v] = true;
                    let found = dfs(start, *v, s, on_path, edges);
                    on_path[*v] = false;
                    if found {
                        return true;
                    }
                }
            }
            false
        }
        (0..n).any(|s| {
            let mut on_path = vec![false; n];
            on_path[s] = true;
            dfs(s, s, Rational::zero(), &mut on_path, edges)
        })
    }

    proptest! {
        #[test]
        fn potential_test_matches_cycle_enumeration(
            n in 1usize..=6,
            raw in proptest::collection::vec((0usize..6, 0usize..6, -2i64..=2), 0..12),
        ) {
            let edges: Vec<_> = raw
                .into_iter()
                .map(|(u, v, w)| (u % n, v % n, r(w)))
                .collect();
            let walk = nonzero_cycle(n, &edges);
            prop_assert_eq!(walk.is_some(), any_simple_cycle_nonzero(n, &edges));
            if let Some(walk) = walk {
                // a closed walk of nonzero weight
                for pair in walk.windows(2) {
                    prop_assert_eq!(edges[pair[0]].1, edges[pair[1]].0);
                }
                prop_assert_eq!(edges[*walk.last().unwrap()].1, edges[walk[0]].0);
                let total: Rational = walk.iter().map(|&e| edges[e].2.clone()).sum();
                prop_assert!(!total.is_zero());
            }
        }
    }
}
