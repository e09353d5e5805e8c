//! Inputs shared by the benchmarks.

use wfa_core::oracle::families::{lattice_corpus, t4};
use wfa_core::Wfa;

/// The exponential-gap family for each `n`.
pub fn t4_family(sizes: &[usize]) -> Vec<(usize, Wfa)> {
    sizes.iter().map(|&n| (n, t4(n))).collect()
}

/// A fixed slice of the pinned lattice corpus.
pub fn lattices(count: usize) -> Vec<Wfa> {
    lattice_corpus(count, 2013)
        .into_iter()
        .map(|(_, a)| a)
        .collect()
}
