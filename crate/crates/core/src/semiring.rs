//! Exact weights over the tropical and probability semirings.
//!
//! | kind        | carrier            | ⊕   | ⊗ | 0̄  | 1̄ |
//! |-------------|--------------------|-----|---|----|---|
//! | tropical    | ℚ ∪ {+∞}           | min | + | +∞ | 0 |
//! | probability | non-negative ℚ     | +   | × | 0  | 1 |
//!
//! All arithmetic is exact; there is no floating point anywhere in the crate's
//! weight handling.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemiringKind {
    Tropical,
    Probability,
}

impl fmt::Display for SemiringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemiringKind::Tropical => "tropical",
            SemiringKind::Probability => "probability",
        })
    }
}

impl FromStr for SemiringKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tropical" => Ok(SemiringKind::Tropical),
            "probability" => Ok(SemiringKind::Probability),
            other => Err(format!("unknown semiring `{other}`")),
        }
    }
}

/// A tropical value. `Finite < Infinity` under the derived order, so `min`
/// is the semiring sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tropical {
    Finite(Rational),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weight {
    Tropical(Tropical),
    Probability(Rational),
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

impl Weight {
    pub fn zero(kind: SemiringKind) -> Weight {
        match kind {
            SemiringKind::Tropical => Weight::Tropical(Tropical::Infinity),
            SemiringKind::Probability => Weight::Probability(Rational::zero()),
        }
    }

    pub fn one(kind: SemiringKind) -> Weight {
        match kind {
            SemiringKind::Tropical => Weight::Tropical(Tropical::Finite(Rational::zero())),
            SemiringKind::Probability => Weight::Probability(Rational::one()),
        }
    }

    /// A finite tropical weight.
    pub fn tropical(value: Rational) -> Weight {
        Weight::Tropical(Tropical::Finite(value))
    }

    pub fn tropical_int(value: i64) -> Weight {
        Weight::tropical(int(value))
    }

    /// A probability weight; negative values are rejected.
    pub fn probability(value: Rational) -> Result<Weight> {
        if value.is_negative() {
            return Err(Error::InvalidAutomaton(format!(
                "probability weight {value} is negative"
            )));
        }
        Ok(Weight::Probability(value))
    }

    /// `numer / denom` in the probability semiring. Panics on a zero or
    /// negative denominator or a negative result.
    pub fn probability_ratio(numer: i64, denom: i64) -> Weight {
        assert!(denom > 0, "denominator must be positive");
        Weight::probability(Rational::new(BigInt::from(numer), BigInt::from(denom)))
            .expect("non-negative probability")
    }

    /// Builds a weight from an integer in the given semiring.
    pub fn from_int(kind: SemiringKind, value: i64) -> Result<Weight> {
        match kind {
            SemiringKind::Tropical => Ok(Weight::tropical_int(value)),
            SemiringKind::Probability => Weight::probability(int(value)),
        }
    }

    pub fn kind(&self) -> SemiringKind {
        match self {
            Weight::Tropical(_) => SemiringKind::Tropical,
            Weight::Probability(_) => SemiringKind::Probability,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Weight::Tropical(t) => *t == Tropical::Infinity,
            Weight::Probability(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Weight::Tropical(Tropical::Finite(v)) => v.is_zero(),
            Weight::Tropical(Tropical::Infinity) => false,
            Weight::Probability(p) => p.is_one(),
        }
    }

    /// The underlying rational, `None` for tropical +∞.
    pub fn value(&self) -> Option<&Rational> {
        match self {
            Weight::Tropical(Tropical::Finite(v)) | Weight::Probability(v) => Some(v),
            Weight::Tropical(Tropical::Infinity) => None,
        }
    }

    fn same_kind(&self, other: &Weight) -> Result<()> {
        if self.kind() == other.kind() {
            Ok(())
        } else {
            Err(Error::KindMismatch(self.kind(), other.kind()))
        }
    }

    /// Semiring sum ⊕.
    pub fn plus(&self, other: &Weight) -> Result<Weight> {
        self.same_kind(other)?;
        Ok(self.oplus(other))
    }

    /// Semiring product ⊗.
    pub fn times(&self, other: &Weight) -> Result<Weight> {
        self.same_kind(other)?;
        Ok(self.otimes(other))
    }

    /// The residual `z` with `self ⊗ z = part`: `part - self` in the tropical
    /// semiring, `part / self` in the probability semiring.
    pub fn residual(&self, part: &Weight) -> Result<Weight> {
        self.same_kind(part)?;
        if self.is_zero() {
            return Err(Error::DivisionByZero(self.kind()));
        }
        Ok(self.left_divide(part))
    }

    /// Additive negation of a tropical value, `+∞` maps to `+∞`.
    pub fn negate(&self) -> Result<Weight> {
        match self {
            Weight::Tropical(Tropical::Finite(v)) => Ok(Weight::tropical(-v)),
            Weight::Tropical(Tropical::Infinity) => Ok(self.clone()),
            Weight::Probability(_) => Err(Error::Unsupported {
                op: "negation",
                kind: SemiringKind::Probability,
            }),
        }
    }

    // Unchecked variants for use inside an automaton whose weights are known
    // to share one kind.

    pub(crate) fn oplus(&self, other: &Weight) -> Weight {
        match (self, other) {
            (Weight::Tropical(a), Weight::Tropical(b)) => {
                Weight::Tropical(std::cmp::min(a, b).clone())
            }
            (Weight::Probability(a), Weight::Probability(b)) => Weight::Probability(a + b),
            _ => panic!("semiring mismatch"),
        }
    }

    pub(crate) fn otimes(&self, other: &Weight) -> Weight {
        match (self, other) {
            (Weight::Tropical(Tropical::Finite(a)), Weight::Tropical(Tropical::Finite(b))) => {
                Weight::tropical(a + b)
            }
            (Weight::Tropical(_), Weight::Tropical(_)) => Weight::Tropical(Tropical::Infinity),
            (Weight::Probability(a), Weight::Probability(b)) => Weight::Probability(a * b),
            _ => panic!("semiring mismatch"),
        }
    }

    /// `self⁻¹ ⊗ part`; `self` must not be 0̄.
    pub(crate) fn left_divide(&self, part: &Weight) -> Weight {
        match (self, part) {
            (Weight::Tropical(Tropical::Finite(t)), Weight::Tropical(Tropical::Finite(p))) => {
                Weight::tropical(p - t)
            }
            (Weight::Tropical(Tropical::Finite(_)), Weight::Tropical(Tropical::Infinity)) => {
                Weight::Tropical(Tropical::Infinity)
            }
            (Weight::Probability(t), Weight::Probability(p)) if !t.is_zero() => {
                Weight::Probability(p / t)
            }
            _ => panic!("residual by zero or across semirings"),
        }
    }

    /// ⊕-sum of an iterator, 0̄ when empty.
    pub fn sum<'a, I: IntoIterator<Item = &'a Weight>>(kind: SemiringKind, items: I) -> Weight {
        items
            .into_iter()
            .fold(Weight::zero(kind), |acc, w| acc.oplus(w))
    }

    /// Parses `3`, `-2`, `7/4` or `inf` (tropical only).
    pub fn parse(kind: SemiringKind, text: &str) -> Result<Weight, String> {
        if text == "inf" || text == "+inf" || text == "Infinity" {
            return match kind {
                SemiringKind::Tropical => Ok(Weight::Tropical(Tropical::Infinity)),
                SemiringKind::Probability => Err("`inf` is not a probability weight".to_string()),
            };
        }
        let value = parse_rational(text)?;
        match kind {
            SemiringKind::Tropical => Ok(Weight::tropical(value)),
            SemiringKind::Probability => {
                Weight::probability(value).map_err(|_| format!("negative probability `{text}`"))
            }
        }
    }
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    let bad = || format!("malformed weight `{text}`");
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let parse_int = |s: &str| -> Result<BigInt, String> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    let numer = parse_int(num)?;
    let denom = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.starts_with('-') {
                return Err(format!("denominator must be positive in `{text}`"));
            }
            parse_int(d)?
        }
    };
    if denom.is_zero() {
        return Err(format!("zero denominator in `{text}`"));
    }
    Ok(Rational::new(numer, denom))
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inf"),
        }
    }
}
