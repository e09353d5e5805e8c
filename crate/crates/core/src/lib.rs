//! Weighted finite automata over the tropical and probability semirings,
//! with pre-disambiguation, disambiguation, a weak twins test and a
//! determinization baseline.

pub mod automaton;
pub mod determinize;
pub mod disambiguate;
pub mod error;
pub mod oracle;
pub mod predis;
pub mod relation;
pub mod semiring;
pub mod stats;
pub mod text;
pub mod twins;

pub use automaton::{Alphabet, Label, StateId, Transition, Wfa, WfaBuilder};
pub use determinize::determinize;
pub use disambiguate::{
    disambiguate, DisambiguateOptions, Disambiguation, RemovalOptions, Strategy,
};
pub use error::{Error, Result};
pub use predis::{predisambiguate, PredisResult, PredisState, WeightedSubset};
pub use relation::{common_future_relation, complete_relation, Relation};
pub use semiring::{Rational, SemiringKind, Tropical, Weight};
pub use stats::{stats_run, Operation, StatsConfig, StatsReport};
pub use text::{parse_relation, parse_wfa, write_relation, write_wfa};
pub use twins::{brute_force_weak_twins, has_twins, has_weak_twins, CycleCheckReport};
