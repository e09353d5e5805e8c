//! Line-oriented text format for automata and relations.
//!
//! ```text
//! wfa v1 tropical
//! sigma a b c
//! initial 0 0
//! final 3 1/2
//! trans 0 1 a 1
//! ```
//!
//! `#` starts a comment line. The `sigma` line is optional; without it the
//! alphabet is the set of labels used by transitions. A `states N` line
//! declares trailing isolated states that no other line mentions. Weights
//! are integers, `p/q` rationals or `inf`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::automaton::{Alphabet, StateId, Transition, Wfa};
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::semiring::{SemiringKind, Weight};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            None
        } else {
            Some((i + 1, l.split_whitespace().collect()))
        }
    })
}

fn parse_state(line: usize, s: &str) -> Result<StateId> {
    s.parse::<StateId>()
        .map_err(|_| parse_err(line, format!("bad state id `{s}`")))
}

pub fn parse_wfa(text: &str) -> Result<Wfa> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `wfa v1 <semiring>` header"))?;
    let kind = match header.as_slice() {
        ["wfa", "v1", kind] => kind
            .parse::<SemiringKind>()
            .map_err(|e| parse_err(hline, e))?,
        _ => return Err(parse_err(hline, "expected `wfa v1 <tropical|probability>`")),
    };

    let weight = |line: usize, s: &str| Weight::parse(kind, s).map_err(|e| parse_err(line, e));
    let mut sigma: Option<Vec<String>> = None;
    let mut declared_states = 0;
    let mut num_states = 0;
    let mut raw = Vec::new();
    let mut initials = BTreeMap::new();
    let mut finals = BTreeMap::new();
    for (line, fields) in lines {
        match fields.as_slice() {
            ["sigma", tokens @ ..] => {
                if sigma.is_some() {
                    return Err(parse_err(line, "duplicate `sigma` line"));
                }
                sigma = Some(tokens.iter().map(|t| t.to_string()).collect());
            }
            ["states", n] => {
                declared_states = n
                    .parse::<usize>()
                    .map_err(|_| parse_err(line, format!("bad state count `{n}`")))?;
            }
            ["initial", q, w] | ["final", q, w] => {
                let q = parse_state(line, q)?;
                let w = weight(line, w)?;
                if w.is_zero() {
                    return Err(parse_err(line, "zero weight"));
                }
                num_states = num_states.max(q + 1);
                let map = if fields[0] == "initial" {
                    &mut initials
                } else {
                    &mut finals
                };
                if map.insert(q, w).is_some() {
                    return Err(parse_err(line, format!("state {q} listed twice")));
                }
            }
            ["trans", src, dst, label, w] => {
                let src = parse_state(line, src)?;
                let dst = parse_state(line, dst)?;
                let w = weight(line, w)?;
                if w.is_zero() {
                    return Err(parse_err(line, "zero weight"));
                }
                num_states = num_states.max(src + 1).max(dst + 1);
                raw.push((line, src, label.to_string(), w, dst));
            }
            _ => {
                return Err(parse_err(
                    line,
                    format!("unrecognized line `{}`", fields.join(" ")),
                ))
            }
        }
    }
    if declared_states != 0 && declared_states < num_states {
        return Err(parse_err(
            hline,
            format!("`states {declared_states}` is smaller than the highest state id used"),
        ));
    }
    num_states = num_states.max(declared_states);

    let alphabet = match sigma {
        Some(tokens) => Alphabet::new(tokens),
        None => Alphabet::new(raw.iter().map(|r| r.2.clone())),
    };
    let mut transitions = Vec::with_capacity(raw.len());
    for (line, src, label, weight, dst) in raw {
        let label = alphabet
            .label(&label)
            .ok_or_else(|| parse_err(line, format!("label `{label}` not in sigma")))?;
        transitions.push(Transition {
            src,
            label,
            dst,
            weight,
        });
    }
    Wfa::from_parts(kind, alphabet, num_states, transitions, initials, finals)
}

/// Canonical serialization: states in id order, transitions in canonical
/// sort, weights in lowest terms.
pub fn write_wfa(a: &Wfa) -> String {
    let mut out = String::new();
    writeln!(out, "wfa v1 {}", a.kind()).unwrap();
    if !a.alphabet().is_empty() {
        writeln!(out, "sigma {}", a.alphabet().tokens().join(" ")).unwrap();
    }
    let referenced = a
        .transitions()
        .iter()
        .map(|t| t.src.max(t.dst) + 1)
        .chain(a.initials().keys().map(|q| q + 1))
        .chain(a.finals().keys().map(|q| q + 1))
        .max()
        .unwrap_or(0);
    if referenced != a.num_states() {
        writeln!(out, "states {}", a.num_states()).unwrap();
    }
    for (q, w) in a.initials() {
        writeln!(out, "initial {q} {w}").unwrap();
    }
    for (q, w) in a.finals() {
        writeln!(out, "final {q} {w}").unwrap();
    }
    for t in a.transitions() {
        writeln!(
            out,
            "trans {} {} {} {}",
            t.src,
            t.dst,
            a.alphabet().token(t.label),
            t.weight
        )
        .unwrap();
    }
    out
}

/// Reads `rel p q` lines; the result is symmetrized.
pub fn parse_relation(text: &str, num_states: usize) -> Result<Relation> {
    let mut rel = Relation::empty(num_states);
    for (line, fields) in content_lines(text) {
        match fields.as_slice() {
            ["rel", p, q] => {
                let p = parse_state(line, p)?;
                let q = parse_state(line, q)?;
                if p >= num_states || q >= num_states {
                    return Err(parse_err(
                        line,
                        format!("state out of range (automaton has {num_states} states)"),
                    ));
                }
                rel.insert(p, q);
                rel.insert(q, p);
            }
            _ => {
                return Err(parse_err(
                    line,
                    format!("expected `rel <p> <q>`, got `{}`", fields.join(" ")),
                ))
            }
        }
    }
    Ok(rel)
}

/// One `rel p q` line per related pair with `p <= q`.
pub fn write_relation(rel: &Relation) -> String {
    let mut out = String::new();
    for (p, q) in rel.pairs() {
        if p <= q {
            writeln!(out, "rel {p} {q}").unwrap();
        }
    }
    out
}
