//! Path queries: `δ(U, x)`, `W(U, x, V)`, `W_I(x, V)` and the string weight
//! `A(x)`, all computed by a forward sweep over state vectors.

use std::collections::BTreeSet;

use super::{Label, StateId, Wfa};
use crate::error::{Error, Result};
use crate::semiring::Weight;

fn check_word(a: &Wfa, word: &[Label]) -> Result<()> {
    match word.iter().find(|&&l| l >= a.alphabet().len()) {
        Some(l) => Err(Error::UnknownLabel(format!("#{l}"))),
        None => Ok(()),
    }
}

/// Forward sweep: `vec[q]` is the ⊕-sum of weights of paths reading `word`
/// and ending in `q`, or `None` when there is no such path.
fn sweep(a: &Wfa, mut vec: Vec<Option<Weight>>, word: &[Label]) -> Vec<Option<Weight>> {
    for &label in word {
        let mut next: Vec<Option<Weight>> = vec![None; a.num_states()];
        for (q, w) in vec.iter().enumerate() {
            let Some(w) = w else { continue };
            for t in a.out_with(q, label) {
                let v = w.otimes(&t.weight);
                next[t.dst] = Some(match next[t.dst].take() {
                    Some(acc) => acc.oplus(&v),
                    None => v,
                });
            }
        }
        vec = next;
    }
    vec
}

fn from_set(a: &Wfa, states: &BTreeSet<StateId>) -> Vec<Option<Weight>> {
    let mut vec = vec![None; a.num_states()];
    for &q in states {
        vec[q] = Some(a.one());
    }
    vec
}

fn from_initials(a: &Wfa) -> Vec<Option<Weight>> {
    let mut vec = vec![None; a.num_states()];
    for (&q, w) in a.initials() {
        vec[q] = Some(w.clone());
    }
    vec
}

/// States reached from `from` by paths labeled `word`.
pub fn delta(a: &Wfa, from: &BTreeSet<StateId>, word: &[Label]) -> Result<BTreeSet<StateId>> {
    check_word(a, word)?;
    let mut current: Vec<bool> = vec![false; a.num_states()];
    for &q in from {
        current[q] = true;
    }
    for &label in word {
        let mut next = vec![false; a.num_states()];
        for q in a.states().filter(|&q| current[q]) {
            for t in a.out_with(q, label) {
                next[t.dst] = true;
            }
        }
        current = next;
    }
    Ok(a.states().filter(|&q| current[q]).collect())
}

/// `W(U, x, V)`: ⊕-sum of the weights of paths from `from` to `to` labeled
/// `word`; 0̄ when there are none.
pub fn weight_between(
    a: &Wfa,
    from: &BTreeSet<StateId>,
    word: &[Label],
    to: &BTreeSet<StateId>,
) -> Result<Weight> {
    check_word(a, word)?;
    let vec = sweep(a, from_set(a, from), word);
    Ok(sum_over(a, &vec, to))
}

/// `W_I(x, V)`: like [`weight_between`] from the initial states, including
/// the initial weights.
pub fn initial_weight_to(a: &Wfa, word: &[Label], to: &BTreeSet<StateId>) -> Result<Weight> {
    check_word(a, word)?;
    let vec = sweep(a, from_initials(a), word);
    Ok(sum_over(a, &vec, to))
}

fn sum_over(a: &Wfa, vec: &[Option<Weight>], to: &BTreeSet<StateId>) -> Weight {
    to.iter()
        .filter_map(|&q| vec[q].as_ref())
        .fold(a.zero(), |acc, w| acc.oplus(w))
}

/// `A(x)`: ⊕ over accepting paths of `λ ⊗ w[π] ⊗ ρ`.
pub fn string_weight(a: &Wfa, word: &[Label]) -> Result<Weight> {
    check_word(a, word)?;
    let vec = sweep(a, from_initials(a), word);
    Ok(a.finals()
        .iter()
        .filter_map(|(&q, rho)| vec[q].as_ref().map(|w| w.otimes(rho)))
        .fold(a.zero(), |acc, w| acc.oplus(&w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::families::a0;
    use crate::semiring::Weight;

    fn set(v: &[StateId]) -> BTreeSet<StateId> {
        v.iter().copied().collect()
    }

    fn w(a: &Wfa, s: &str) -> Vec<Label> {
        a.alphabet().word(s.split_whitespace()).unwrap()
    }

    #[test]
    fn delta_examples() {
        let a = a0();
        let init: BTreeSet<_> = a.initials().keys().copied().collect();
        assert_eq!(delta(&a, &init, &[]).unwrap(), init);
        assert_eq!(delta(&a, &set(&[0]), &w(&a, "a")).unwrap(), set(&[1, 2]));
        assert_eq!(delta(&a, &set(&[0]), &w(&a, "a b")).unwrap(), set(&[3]));
        assert!(matches!(
            delta(&a, &set(&[0]), &[7]),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn weight_between_examples() {
        let a = a0();
        assert_eq!(
            weight_between(&a, &set(&[0]), &w(&a, "a"), &set(&[1, 2])).unwrap(),
            Weight::tropical_int(1)
        );
        assert!(weight_between(&a, &set(&[0]), &w(&a, "a"), &set(&[]))
            .unwrap()
            .is_zero());
        assert_eq!(
            weight_between(&a, &set(&[1]), &w(&a, "b"), &set(&[3])).unwrap(),
            Weight::tropical_int(3)
        );
    }

    #[test]
    fn initial_weight_examples() {
        let a = a0();
        assert_eq!(
            initial_weight_to(&a, &[], &set(&[0])).unwrap(),
            Weight::tropical_int(0)
        );
        assert_eq!(
            initial_weight_to(&a, &w(&a, "a"), &set(&[1])).unwrap(),
            Weight::tropical_int(1)
        );
        assert_eq!(
            initial_weight_to(&a, &w(&a, "a"), &set(&[1, 2])).unwrap(),
            Weight::tropical_int(1)
        );
    }

    #[test]
    fn string_weight_examples() {
        let a = a0();
        assert_eq!(
            string_weight(&a, &w(&a, "a b")).unwrap(),
            Weight::tropical_int(4)
        );
        assert!(string_weight(&a, &w(&a, "a")).unwrap().is_zero());
        assert!(string_weight(&a, &[]).unwrap().is_zero());
    }
}
