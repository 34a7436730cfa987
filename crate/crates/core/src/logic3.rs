//! Three-valued logic kernel.
//!
//! A single carrier, [`TriValue`], is shared by target decisions
//! (`1_T`, `0_T`, `⊥_T`) and policy decisions (`1_P`, `0_P`, `⊥_P`). For
//! targets, `Bottom` means the request lacked the attribute needed to decide
//! applicability; for policies it means "not applicable". The operator
//! tables are identical for both readings, so only one kernel exists.
//!
//! Every operator is a hard-coded table. Orderings are provided for
//! cross-checks and for the n-ary lattice fast path in `policies`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriValue {
    One,
    Zero,
    Bottom,
}

use TriValue::{Bottom, One, Zero};

/// Indexes rows and columns of the tables below.
const fn idx(v: TriValue) -> usize {
    match v {
        One => 0,
        Zero => 1,
        Bottom => 2,
    }
}

// Rows are the left operand, columns the right, both in the order 1, 0, ⊥.

const WEAK_AND: [[TriValue; 3]; 3] = [
    [One, Zero, Bottom],
    [Zero, Zero, Bottom],
    [Bottom, Bottom, Bottom],
];

const WEAK_OR: [[TriValue; 3]; 3] = [
    [One, One, Bottom],
    [One, Zero, Bottom],
    [Bottom, Bottom, Bottom],
];

const STRONG_AND: [[TriValue; 3]; 3] = [
    [One, Zero, Bottom],
    [Zero, Zero, Zero],
    [Bottom, Zero, Bottom],
];

const STRONG_OR: [[TriValue; 3]; 3] = [
    [One, One, One],
    [One, Zero, Bottom],
    [One, Bottom, Bottom],
];

const SUP: [[TriValue; 3]; 3] = [
    [One, One, One],
    [One, Zero, Zero],
    [One, Zero, Bottom],
];

const NEG: [TriValue; 3] = [Zero, One, Bottom];
const WEAKEN: [TriValue; 3] = [One, Zero, Zero];
const SWAP: [TriValue; 3] = [One, Bottom, Zero];

impl TriValue {
    pub const ALL: [TriValue; 3] = [One, Zero, Bottom];

    pub fn is_conclusive(self) -> bool {
        !matches!(self, Bottom)
    }

    /// Position in the target order `⊥ < 0 < 1`, which is also the weak
    /// monotonicity order `⊥ ≺ 0 ≺ 1`.
    pub fn rank(self) -> u8 {
        match self {
            Bottom => 0,
            Zero => 1,
            One => 2,
        }
    }

    /// Compares under the order `⊥ < 0 < 1`.
    pub fn cmp_target_order(self, other: TriValue) -> Ordering {
        self.rank().cmp(&other.rank())
    }

    /// `self ≼ other` under `⊥ ≺ 0 ≺ 1`.
    pub fn weakly_below(self, other: TriValue) -> bool {
        self.rank() <= other.rank()
    }

    /// Symbol with a domain suffix, e.g. `1_P` or `⊥_T`.
    pub fn symbol(self, suffix: char) -> String {
        match self {
            One => format!("1_{suffix}"),
            Zero => format!("0_{suffix}"),
            Bottom => format!("⊥_{suffix}"),
        }
    }
}

impl fmt::Display for TriValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            One => "1",
            Zero => "0",
            Bottom => "⊥",
        })
    }
}

/// Weak Kleene conjunction `⊓`; `⊥` is contagious.
pub fn weak_and(a: TriValue, b: TriValue) -> TriValue {
    WEAK_AND[idx(a)][idx(b)]
}

/// Weak Kleene disjunction `⊔`; `⊥` is contagious.
pub fn weak_or(a: TriValue, b: TriValue) -> TriValue {
    WEAK_OR[idx(a)][idx(b)]
}

/// Strong Kleene conjunction `⊓~`; `0` dominates.
pub fn strong_and(a: TriValue, b: TriValue) -> TriValue {
    STRONG_AND[idx(a)][idx(b)]
}

/// Strong Kleene disjunction `⊔~`; `1` dominates.
pub fn strong_or(a: TriValue, b: TriValue) -> TriValue {
    STRONG_OR[idx(a)][idx(b)]
}

pub fn neg(a: TriValue) -> TriValue {
    NEG[idx(a)]
}

/// `~`: maps `⊥` to `0`, leaves conclusive values alone. Backs `opt` on
/// targets and `dbd` on policies.
pub fn weaken(a: TriValue) -> TriValue {
    WEAKEN[idx(a)]
}

/// Least upper bound `⊔̇` under `1 > 0 > ⊥`.
pub fn sup(a: TriValue, b: TriValue) -> TriValue {
    SUP[idx(a)][idx(b)]
}

/// `↕`: exchanges `0` and `⊥`, fixes `1`.
pub fn swap(a: TriValue) -> TriValue {
    SWAP[idx(a)]
}

/// Constructions of the derived operators from `⊔~`, `¬` and `~` only.
/// These are evaluated literally and serve as independent routes to the
/// hard-coded tables.
pub mod derived {
    use super::*;

    pub fn strong_and_via_or(a: TriValue, b: TriValue) -> TriValue {
        neg(strong_or(neg(a), neg(b)))
    }

    pub fn strong_or_via_and(a: TriValue, b: TriValue) -> TriValue {
        neg(strong_and(neg(a), neg(b)))
    }

    pub fn weak_and(a: TriValue, b: TriValue) -> TriValue {
        strong_or(
            strong_and(a, b),
            strong_or(strong_and(a, neg(a)), strong_and(b, neg(b))),
        )
    }

    pub fn weak_or(a: TriValue, b: TriValue) -> TriValue {
        strong_and(
            strong_or(a, b),
            strong_and(strong_or(a, neg(a)), strong_or(b, neg(b))),
        )
    }

    pub fn sup(a: TriValue, b: TriValue) -> TriValue {
        strong_and(strong_or(a, weaken(b)), strong_or(weaken(a), b))
    }

    /// `(x ⊔~ ⊥) ⊓~ ~(x ⊔~ ¬x)`.
    pub fn swap(a: TriValue) -> TriValue {
        strong_and(strong_or(a, Bottom), weaken(strong_or(a, neg(a))))
    }
}
