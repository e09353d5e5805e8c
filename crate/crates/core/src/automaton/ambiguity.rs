//! Ambiguity tests on the transition-pair self-product.
//!
//! Nodes of the self-product are state pairs `(p, q)` reachable from `I × I`
//! by a common string; each edge is a pair `(e1, e2)` of equal-label
//! transitions, identified by their positions in the transition multiset.
//! Only nodes that are also co-accessible to `F × F` are kept.

use std::collections::HashMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::{StateId, Wfa};

struct PairEdge {
    src: usize,
    dst: usize,
    distinct: bool,
}

struct PairGraph {
    nodes: Vec<(StateId, StateId)>,
    edges: Vec<PairEdge>,
    useful: Vec<bool>,
}

impl PairGraph {
    fn new(a: &Wfa) -> PairGraph {
        let mut nodes = Vec::new();
        let mut index: HashMap<(StateId, StateId), usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut intern = |pq: (StateId, StateId), nodes: &mut Vec<_>| -> (usize, bool) {
            if let Some(&i) = index.get(&pq) {
                return (i, false);
            }
            nodes.push(pq);
            index.insert(pq, nodes.len() - 1);
            (nodes.len() - 1, true)
        };
        let mut stack = Vec::new();
        for &p in a.initials().keys() {
            for &q in a.initials().keys() {
                let (i, _) = intern((p, q), &mut nodes);
                stack.push(i);
            }
        }
        while let Some(i) = stack.pop() {
            let (p, q) = nodes[i];
            for i1 in a.out_range(p) {
                let t1 = &a.transitions()[i1];
                for i2 in a.out_range(q) {
                    let t2 = &a.transitions()[i2];
                    if t1.label != t2.label {
                        continue;
                    }
                    let (j, fresh) = intern((t1.dst, t2.dst), &mut nodes);
                    if fresh {
                        stack.push(j);
                    }
                    edges.push(PairEdge {
                        src: i,
                        dst: j,
                        distinct: i1 != i2,
                    });
                }
            }
        }
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        for e in &edges {
            preds[e.dst].push(e.src);
        }
        let mut useful = vec![false; nodes.len()];
        let mut stack: Vec<usize> = (0..nodes.len())
            .filter(|&i| a.is_final(nodes[i].0) && a.is_final(nodes[i].1))
            .collect();
        for &i in &stack {
            useful[i] = true;
        }
        while let Some(i) = stack.pop() {
            for &j in &preds[i] {
                if !useful[j] {
                    useful[j] = true;
                    stack.push(j);
                }
            }
        }
        PairGraph {
            nodes,
            edges,
            useful,
        }
    }

    fn useful_edges(&self) -> impl Iterator<Item = &PairEdge> {
        self.edges
            .iter()
            .filter(|e| self.useful[e.src] && self.useful[e.dst])
    }
}

/// True iff no string labels two distinct accepting paths. Parallel copies
/// of a transition count as distinct paths.
pub fn is_unambiguous(a: &Wfa) -> bool {
    let g = PairGraph::new(a);
    let off_diagonal = g
        .nodes
        .iter()
        .zip(&g.useful)
        .any(|(&(p, q), &u)| u && p != q);
    !off_diagonal && !g.useful_edges().any(|e| e.distinct)
}

/// True iff no state carries two distinct cycles with the same label, i.e.
/// no cycle through a diagonal node `(q, q)` of the trimmed self-product uses
/// a pair of distinct transitions.
pub fn is_cycle_unambiguous(a: &Wfa) -> bool {
    let g = PairGraph::new(a);
    let mut graph: DiGraph<usize, ()> = DiGraph::new();
    let handles: Vec<_> = (0..g.nodes.len()).map(|i| graph.add_node(i)).collect();
    for e in g.useful_edges() {
        graph.add_edge(handles[e.src], handles[e.dst], ());
    }
    let mut component = vec![usize::MAX; g.nodes.len()];
    for (c, scc) in tarjan_scc(&graph).into_iter().enumerate() {
        for n in scc {
            component[graph[n]] = c;
        }
    }
    let mut has_diagonal = vec![false; g.nodes.len()];
    for (i, &(p, q)) in g.nodes.iter().enumerate() {
        if g.useful[i] && p == q {
            has_diagonal[component[i]] = true;
        }
    }
    let ambiguous = g.useful_edges().any(|e| {
        e.distinct && component[e.src] == component[e.dst] && has_diagonal[component[e.src]]
    });
    !ambiguous
}
