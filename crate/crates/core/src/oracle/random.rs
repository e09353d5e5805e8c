use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{trim, Alphabet, StateId, Transition, Wfa};
use crate::error::{Error, Result};
use crate::semiring::{SemiringKind, Weight};

const MAX_ATTEMPTS: usize = 10_000;

/// Parameters of the random automaton generator. Generation is a pure
/// function of the configuration, seed included.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomWfaConfig {
    pub kind: SemiringKind,
    pub num_states: usize,
    pub alphabet_size: usize,
    /// Probability that any given `(src, label, dst)` triple is a transition.
    pub density: f64,
    /// Only `src < dst` transitions.
    pub acyclic: bool,
    /// Inclusive integer range. Probability weights are `v / hi` for `v`
    /// drawn from the range clipped to `1..=hi`.
    pub weight_range: (i64, i64),
    pub num_initial: usize,
    pub num_final: usize,
    pub seed: u64,
}

impl Default for RandomWfaConfig {
    fn default() -> Self {
        RandomWfaConfig {
            kind: SemiringKind::Tropical,
            num_states: 5,
            alphabet_size: 2,
            density: 0.3,
            acyclic: true,
            weight_range: (0, 5),
            num_initial: 1,
            num_final: 1,
            seed: 0,
        }
    }
}

impl RandomWfaConfig {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.num_states == 0 {
            return bad("num_states must be positive");
        }
        if self.alphabet_size == 0 {
            return bad("alphabet_size must be positive");
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return bad("density must lie in (0, 1]");
        }
        let (lo, hi) = self.weight_range;
        if lo > hi {
            return bad("empty weight range");
        }
        if self.kind == SemiringKind::Probability && hi < 1 {
            return bad("probability weights need a positive upper bound");
        }
        if self.num_initial == 0 || self.num_initial > self.num_states {
            return bad("num_initial must lie in 1..=num_states");
        }
        if self.num_final == 0 || self.num_final > self.num_states {
            return bad("num_final must lie in 1..=num_states");
        }
        Ok(())
    }

    fn alphabet(&self) -> Alphabet {
        Alphabet::new((0..self.alphabet_size).map(label_name))
    }

    fn weight(&self, rng: &mut ChaCha8Rng) -> Weight {
        let (lo, hi) = self.weight_range;
        match self.kind {
            SemiringKind::Tropical => Weight::tropical_int(rng.random_range(lo..=hi)),
            SemiringKind::Probability => {
                Weight::probability_ratio(rng.random_range(lo.max(1)..=hi), hi)
            }
        }
    }

    fn pick_states(&self, rng: &mut ChaCha8Rng, count: usize) -> Vec<StateId> {
        let mut states: Vec<StateId> = (0..self.num_states).collect();
        states.shuffle(rng);
        states.truncate(count);
        states
    }

    fn assemble(&self, rng: &mut ChaCha8Rng, transitions: Vec<Transition>) -> Result<Wfa> {
        let initials: BTreeMap<_, _> = self
            .pick_states(rng, self.num_initial)
            .into_iter()
            .map(|q| (q, self.weight(rng)))
            .collect();
        let finals: BTreeMap<_, _> = self
            .pick_states(rng, self.num_final)
            .into_iter()
            .map(|q| (q, self.weight(rng)))
            .collect();
        Wfa::from_parts(
            self.kind,
            self.alphabet(),
            self.num_states,
            transitions,
            initials,
            finals,
        )
    }
}

/// `a`, `b`, ..., `z`, then `l26`, `l27`, ...
fn label_name(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("l{i}")
    }
}

fn sample_trimmed<F>(config: &RandomWfaConfig, mut draw: F) -> Result<Wfa>
where
    F: FnMut(&mut ChaCha8Rng) -> Result<Wfa>,
{
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..MAX_ATTEMPTS {
        let a = trim(&draw(&mut rng)?);
        if a.num_states() > 0 && (a.num_transitions() > 0 || config.num_states == 1) {
            return Ok(a);
        }
    }
    Err(Error::Config(format!(
        "no non-trivial automaton after {MAX_ATTEMPTS} attempts"
    )))
}

/// A random trim automaton; resamples until the trimmed result has at least
/// one transition (or a state, when `num_states` is 1).
pub fn random_wfa(config: &RandomWfaConfig) -> Result<Wfa> {
    sample_trimmed(config, |rng| {
        let mut transitions = Vec::new();
        for src in 0..config.num_states {
            for label in 0..config.alphabet_size {
                let first_dst = if config.acyclic { src + 1 } else { 0 };
                for dst in first_dst..config.num_states {
                    if rng.random_bool(config.density) {
                        transitions.push(Transition {
                            src,
                            label,
                            dst,
                            weight: config.weight(rng),
                        });
                    }
                }
            }
        }
        config.assemble(rng, transitions)
    })
}

/// A random trim deterministic automaton: one initial state and at most one
/// successor per `(state, label)`, present with probability `density`.
/// `num_initial` is ignored.
pub fn random_deterministic(config: &RandomWfaConfig) -> Result<Wfa> {
    let config = RandomWfaConfig {
        num_initial: 1,
        ..config.clone()
    };
    sample_trimmed(&config, |rng| {
        let mut transitions = Vec::new();
        for src in 0..config.num_states {
            for label in 0..config.alphabet_size {
                if config.acyclic && src + 1 == config.num_states {
                    continue;
                }
                if rng.random_bool(config.density) {
                    let dst = if config.acyclic {
                        rng.random_range(src + 1..config.num_states)
                    } else {
                        rng.random_range(0..config.num_states)
                    };
                    transitions.push(Transition {
                        src,
                        label,
                        dst,
                        weight: config.weight(rng),
                    });
                }
            }
        }
        config.assemble(rng, transitions)
    })
}
