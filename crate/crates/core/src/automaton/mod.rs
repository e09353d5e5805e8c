//! The weighted automaton model `(Σ, Q, I, F, E, λ, ρ)` and the graph
//! algorithms shared by every construction in the crate.
//!
//! States are dense ids `0..n`; their numeric order is the total order used
//! whenever an algorithm needs to break ties between states. Transitions
//! form a multiset kept in canonical `(src, label, dst, weight)` order, so
//! the outgoing transitions of a state are a contiguous slice sorted by
//! label.

mod ambiguity;
mod product;
mod query;
mod trim;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::semiring::{SemiringKind, Weight};

pub use ambiguity::{is_cycle_unambiguous, is_unambiguous};
pub use product::{accessible_pairs, intersect, negate_automaton, Product};
pub use query::{delta, initial_weight_to, string_weight, weight_between};
pub use trim::{accessible, coaccessible, is_trim, trim};

pub type StateId = usize;
/// Index of a token in the automaton's [`Alphabet`].
pub type Label = usize;

/// Ordered, duplicate-free set of label tokens.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    tokens: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(tokens: I) -> Alphabet
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        tokens.sort();
        tokens.dedup();
        Alphabet { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token(&self, label: Label) -> &str {
        &self.tokens[label]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn label(&self, token: &str) -> Option<Label> {
        self.tokens.binary_search_by(|t| t.as_str().cmp(token)).ok()
    }

    pub fn labels(&self) -> std::ops::Range<Label> {
        0..self.tokens.len()
    }

    /// Resolves a sequence of tokens.
    pub fn word<'a, I: IntoIterator<Item = &'a str>>(&self, tokens: I) -> Result<Vec<Label>> {
        tokens
            .into_iter()
            .map(|t| {
                self.label(t)
                    .ok_or_else(|| Error::UnknownLabel(t.to_string()))
            })
            .collect()
    }

    /// Space-separated tokens; the empty word prints as `<eps>`.
    pub fn format_word(&self, word: &[Label]) -> String {
        if word.is_empty() {
            return "<eps>".to_string();
        }
        word.iter()
            .map(|&l| self.token(l))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub src: StateId,
    pub label: Label,
    pub dst: StateId,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wfa {
    kind: SemiringKind,
    alphabet: Alphabet,
    num_states: usize,
    transitions: Vec<Transition>,
    initials: BTreeMap<StateId, Weight>,
    finals: BTreeMap<StateId, Weight>,
    // transitions[out_offsets[q]..out_offsets[q + 1]] leave q
    out_offsets: Vec<usize>,
}

impl Wfa {
    /// Validates and assembles an automaton. Transitions are sorted into
    /// canonical order; duplicates are kept.
    pub fn from_parts(
        kind: SemiringKind,
        alphabet: Alphabet,
        num_states: usize,
        mut transitions: Vec<Transition>,
        initials: BTreeMap<StateId, Weight>,
        finals: BTreeMap<StateId, Weight>,
    ) -> Result<Wfa> {
        let check_weight = |what: String, w: &Weight| -> Result<()> {
            if w.kind() != kind {
                return Err(Error::KindMismatch(kind, w.kind()));
            }
            if w.is_zero() {
                return Err(Error::InvalidAutomaton(format!(
                    "{what} has the zero weight"
                )));
            }
            Ok(())
        };
        let check_state = |q: StateId| -> Result<()> {
            if q >= num_states {
                Err(Error::InvalidAutomaton(format!(
                    "state {q} out of range (automaton has {num_states} states)"
                )))
            } else {
                Ok(())
            }
        };
        for t in &transitions {
            check_state(t.src)?;
            check_state(t.dst)?;
            if t.label >= alphabet.len() {
                return Err(Error::InvalidAutomaton(format!(
                    "label index {} outside the alphabet",
                    t.label
                )));
            }
            check_weight(format!("transition {} -> {}", t.src, t.dst), &t.weight)?;
        }
        for (&q, w) in &initials {
            check_state(q)?;
            check_weight(format!("initial state {q}"), w)?;
        }
        for (&q, w) in &finals {
            check_state(q)?;
            check_weight(format!("final state {q}"), w)?;
        }
        transitions.sort();
        let mut out_offsets = vec![0; num_states + 1];
        for t in &transitions {
            out_offsets[t.src + 1] += 1;
        }
        for q in 0..num_states {
            out_offsets[q + 1] += out_offsets[q];
        }
        Ok(Wfa {
            kind,
            alphabet,
            num_states,
            transitions,
            initials,
            finals,
            out_offsets,
        })
    }

    /// An automaton with no states.
    pub fn empty(kind: SemiringKind, alphabet: Alphabet) -> Wfa {
        Wfa::from_parts(kind, alphabet, 0, vec![], BTreeMap::new(), BTreeMap::new())
            .expect("empty automaton is valid")
    }

    pub fn kind(&self) -> SemiringKind {
        self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    /// `|Q| + |E|`.
    pub fn size(&self) -> usize {
        self.num_states + self.transitions.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.num_states
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn out(&self, q: StateId) -> &[Transition] {
        &self.transitions[self.out_range(q)]
    }

    /// Positions in [`Wfa::transitions`] of the transitions leaving `q`.
    pub fn out_range(&self, q: StateId) -> std::ops::Range<usize> {
        self.out_offsets[q]..self.out_offsets[q + 1]
    }

    /// Outgoing transitions of `q` labeled `label`, sorted by destination.
    pub fn out_with(&self, q: StateId, label: Label) -> &[Transition] {
        let out = self.out(q);
        let lo = out.partition_point(|t| t.label < label);
        let hi = out.partition_point(|t| t.label <= label);
        &out[lo..hi]
    }

    pub fn initials(&self) -> &BTreeMap<StateId, Weight> {
        &self.initials
    }

    pub fn finals(&self) -> &BTreeMap<StateId, Weight> {
        &self.finals
    }

    pub fn initial_weight(&self, q: StateId) -> Option<&Weight> {
        self.initials.get(&q)
    }

    pub fn final_weight(&self, q: StateId) -> Option<&Weight> {
        self.finals.get(&q)
    }

    pub fn is_initial(&self, q: StateId) -> bool {
        self.initials.contains_key(&q)
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains_key(&q)
    }

    pub fn zero(&self) -> Weight {
        Weight::zero(self.kind)
    }

    pub fn one(&self) -> Weight {
        Weight::one(self.kind)
    }

    /// True when no state has two equal-label transitions and there is at
    /// most one initial state.
    pub fn is_deterministic(&self) -> bool {
        self.initials.len() <= 1
            && self
                .transitions
                .windows(2)
                .all(|w| (w[0].src, w[0].label) != (w[1].src, w[1].label))
    }

    /// Keeps the states flagged in `keep`, renumbering them in increasing
    /// order. Transitions touching a dropped state are dropped.
    pub fn restrict(&self, keep: &[bool]) -> Wfa {
        let mut new_id = vec![usize::MAX; self.num_states];
        let mut n = 0;
        for q in self.states() {
            if keep[q] {
                new_id[q] = n;
                n += 1;
            }
        }
        let transitions = self
            .transitions
            .iter()
            .filter(|t| keep[t.src] && keep[t.dst])
            .map(|t| Transition {
                src: new_id[t.src],
                label: t.label,
                dst: new_id[t.dst],
                weight: t.weight.clone(),
            })
            .collect();
        let remap = |m: &BTreeMap<StateId, Weight>| {
            m.iter()
                .filter(|(q, _)| keep[**q])
                .map(|(q, w)| (new_id[*q], w.clone()))
                .collect()
        };
        Wfa::from_parts(
            self.kind,
            self.alphabet.clone(),
            n,
            transitions,
            remap(&self.initials),
            remap(&self.finals),
        )
        .expect("restriction of a valid automaton is valid")
    }
}

impl fmt::Display for Wfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::write_wfa(self))
    }
}

/// Incremental construction with labels given as tokens.
#[derive(Clone, Debug)]
pub struct WfaBuilder {
    kind: SemiringKind,
    alphabet: Alphabet,
    num_states: usize,
    transitions: Vec<Transition>,
    initials: BTreeMap<StateId, Weight>,
    finals: BTreeMap<StateId, Weight>,
}

impl WfaBuilder {
    pub fn new(kind: SemiringKind, alphabet: Alphabet) -> WfaBuilder {
        WfaBuilder {
            kind,
            alphabet,
            num_states: 0,
            transitions: Vec::new(),
            initials: BTreeMap::new(),
            finals: BTreeMap::new(),
        }
    }

    pub fn add_state(&mut self) -> StateId {
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn ensure_states(&mut self, n: usize) {
        self.num_states = self.num_states.max(n);
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn add_transition(&mut self, src: StateId, label: Label, weight: Weight, dst: StateId) {
        self.transitions.push(Transition {
            src,
            label,
            dst,
            weight,
        });
    }

    /// Adds a transition by token; panics if the token is not in the alphabet.
    pub fn arc(&mut self, src: StateId, token: &str, weight: Weight, dst: StateId) -> &mut Self {
        let label = self
            .alphabet
            .label(token)
            .unwrap_or_else(|| panic!("token `{token}` not in alphabet"));
        self.ensure_states(src.max(dst) + 1);
        self.add_transition(src, label, weight, dst);
        self
    }

    pub fn set_initial(&mut self, q: StateId, weight: Weight) -> &mut Self {
        self.ensure_states(q + 1);
        self.initials.insert(q, weight);
        self
    }

    pub fn set_final(&mut self, q: StateId, weight: Weight) -> &mut Self {
        self.ensure_states(q + 1);
        self.finals.insert(q, weight);
        self
    }

    pub fn build(self) -> Result<Wfa> {
        Wfa::from_parts(
            self.kind,
            self.alphabet,
            self.num_states,
            self.transitions,
            self.initials,
            self.finals,
        )
    }
}
