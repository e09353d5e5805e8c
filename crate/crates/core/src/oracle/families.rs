//! Hand-built automata used throughout the tests, benchmarks and the CLI
//! corpus generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{trim, Alphabet, Wfa, WfaBuilder};
use crate::semiring::{SemiringKind, Weight};

fn w(v: i64) -> Weight {
    Weight::tropical_int(v)
}

fn builder(tokens: &[&str]) -> WfaBuilder {
    WfaBuilder::new(
        SemiringKind::Tropical,
        Alphabet::new(tokens.iter().copied()),
    )
}

/// Two `a` paths to a shared `b` transition into the final state: `ab` has
/// two accepting paths of weights 4 and 5.
pub fn a0() -> Wfa {
    let mut b = builder(&["a", "b"]);
    b.set_initial(0, w(0))
        .set_final(3, w(0))
        .arc(0, "a", w(1), 1)
        .arc(0, "a", w(2), 2)
        .arc(1, "b", w(3), 3)
        .arc(2, "b", w(3), 3);
    b.build().expect("valid")
}

/// A single path of `n` transitions alternating `a` and `b`, weights `1..=n`.
pub fn chain(n: usize) -> Wfa {
    let mut b = builder(&["a", "b"]);
    b.set_initial(0, w(0)).set_final(n, w(0));
    for i in 0..n {
        let token = if i % 2 == 0 { "a" } else { "b" };
        b.arc(i, token, w(i as i64 + 1), i + 1);
    }
    b.build().expect("valid")
}

/// Unambiguous automaton with `O(n²)` states for
/// `{(a+b)^(k-1) b (a+b)^(n-k) c a^k : 1 <= k <= n}`; every equivalent
/// deterministic automaton needs at least `2ⁿ` states. All weights are 1̄.
pub fn t4(n: usize) -> Wfa {
    assert!(n >= 1);
    let mut b = builder(&["a", "b", "c"]);
    let zero = || w(0);
    // prefix[i]: i symbols of (a+b) read
    let prefix: Vec<usize> = (0..n).map(|_| b.add_state()).collect();
    b.set_initial(prefix[0], zero());
    for i in 0..n - 1 {
        b.arc(prefix[i], "a", zero(), prefix[i + 1]);
        b.arc(prefix[i], "b", zero(), prefix[i + 1]);
    }
    for k in 1..=n {
        let mut cur = b.add_state();
        b.arc(prefix[k - 1], "b", zero(), cur);
        for _ in 0..n - k {
            let next = b.add_state();
            b.arc(cur, "a", zero(), next);
            b.arc(cur, "b", zero(), next);
            cur = next;
        }
        let mut tail = b.add_state();
        b.arc(cur, "c", zero(), tail);
        for _ in 0..k {
            let next = b.add_state();
            b.arc(tail, "a", zero(), next);
            tail = next;
        }
        b.set_final(tail, zero());
    }
    b.build().expect("valid")
}

/// States 1 and 2 are both reached by `a` and carry `b`-loops of weights 1
/// and 2. With `shared_future` both continue with `c` into state 3; otherwise
/// 1 continues with `c` and 2 with `d`.
pub fn two_cycles(shared_future: bool) -> Wfa {
    let mut b = builder(&["a", "b", "c", "d"]);
    b.set_initial(0, w(0))
        .arc(0, "a", w(0), 1)
        .arc(0, "a", w(0), 2)
        .arc(1, "b", w(1), 1)
        .arc(2, "b", w(2), 2)
        .arc(1, "c", w(0), 3)
        .set_final(3, w(0));
    if shared_future {
        b.arc(2, "c", w(0), 3);
    } else {
        b.arc(2, "d", w(0), 4).set_final(4, w(0));
    }
    b.build().expect("valid")
}

/// [`two_cycles`] with disjoint futures plus an ambiguous branch: state 5 is
/// also reached by `a` and shares the future `c` with state 1, so `ac` has
/// two accepting paths. Not determinizable (subsets `{(1, 0), (2, n)}` after
/// `a bⁿ`) but it has the weak twins property.
pub fn disambiguable_not_determinizable() -> Wfa {
    let mut b = builder(&["a", "b", "c", "d"]);
    b.set_initial(0, w(0))
        .arc(0, "a", w(0), 1)
        .arc(0, "a", w(0), 2)
        .arc(1, "b", w(1), 1)
        .arc(2, "b", w(2), 2)
        .arc(1, "c", w(0), 3)
        .arc(2, "d", w(0), 4)
        .arc(0, "a", w(1), 5)
        .arc(5, "c", w(0), 3)
        .arc(5, "d", w(3), 6)
        .set_final(3, w(0))
        .set_final(4, w(0))
        .set_final(6, w(1));
    b.build().expect("valid")
}

/// A random acyclic lattice: states `0..num_states` in topological order,
/// initial 0 and final `num_states - 1`, each state linked to its successor
/// plus random skips of up to three states. Labels come from a vocabulary of
/// `vocab` tokens, weights from `0..=5`.
pub fn random_lattice(seed: u64, num_states: usize, vocab: usize) -> Wfa {
    assert!(num_states >= 2 && vocab >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tokens: Vec<String> = (0..vocab).map(|i| format!("w{i}")).collect();
    let mut b = WfaBuilder::new(SemiringKind::Tropical, Alphabet::new(tokens.clone()));
    b.ensure_states(num_states);
    b.set_initial(0, w(0)).set_final(num_states - 1, w(0));
    for src in 0..num_states - 1 {
        let fanout = rng.random_range(1..=3);
        for _ in 0..fanout {
            let dst = (src + rng.random_range(1..=3)).min(num_states - 1);
            let token = &tokens[rng.random_range(0..vocab)];
            b.arc(src, token, w(rng.random_range(0..=5)), dst);
        }
    }
    trim(&b.build().expect("valid"))
}

/// `count` lattices named `lattice_000.wfa`, ... with pinned seeds.
pub fn lattice_corpus(count: usize, base_seed: u64) -> Vec<(String, Wfa)> {
    (0..count)
        .map(|i| {
            let seed = base_seed.wrapping_add(i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let states = rng.random_range(6..=16);
            let vocab = rng.random_range(2..=4);
            (
                format!("lattice_{i:03}.wfa"),
                random_lattice(seed, states, vocab),
            )
        })
        .collect()
}
