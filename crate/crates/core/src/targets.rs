//! Targets: requests, target ASTs, evaluation and brute-force equivalence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget::{self, BudgetExceeded};
use crate::logic3::{self, TriValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("attribute {0} must be a non-empty string")]
pub struct EmptyAttribute(&'static str);

macro_rules! attribute_string {
    ($name:ident, $what:literal) => {
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(try_from = "String", into = "String")]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Result<Self, EmptyAttribute> {
                let s = s.into();
                if s.is_empty() {
                    Err(EmptyAttribute($what))
                } else {
                    Ok(Self(s))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl TryFrom<String> for $name {
            type Error = EmptyAttribute;

            fn try_from(s: String) -> Result<Self, Self::Error> {
                Self::new(s)
            }
        }

        impl From<$name> for String {
            fn from(v: $name) -> String {
                v.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

attribute_string!(AttributeName, "name");
attribute_string!(AttributeValue, "value");

pub type Pair = (AttributeName, AttributeValue);

/// A finite set of name/value pairs. A name may occur with several values;
/// identical pairs collapse.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Request {
    pairs: BTreeSet<Pair>,
}

impl Request {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a request from string pairs.
    ///
    /// # Panics
    ///
    /// If a name or value is empty. Use [`Request::try_from_pairs`] for
    /// untrusted input.
    pub fn from_pairs<N, V>(pairs: impl IntoIterator<Item = (N, V)>) -> Self
    where
        N: Into<String>,
        V: Into<String>,
    {
        Self::try_from_pairs(pairs).expect("non-empty attribute names and values")
    }

    pub fn try_from_pairs<N, V>(pairs: impl IntoIterator<Item = (N, V)>) -> Result<Self, EmptyAttribute>
    where
        N: Into<String>,
        V: Into<String>,
    {
        let mut request = Request::new();
        for (n, v) in pairs {
            request.insert(AttributeName::new(n)?, AttributeValue::new(v)?);
        }
        Ok(request)
    }

    pub fn insert(&mut self, name: AttributeName, value: AttributeValue) -> bool {
        self.pairs.insert((name, value))
    }

    pub fn contains(&self, name: &str, value: &str) -> bool {
        self.iter().any(|(n, v)| n.as_str() == name && v.as_str() == value)
    }

    pub fn has_name(&self, name: &str) -> bool {
        self.iter().any(|(n, _)| n.as_str() == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Pair> + '_ {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_subset(&self, other: &Request) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Distinct attribute names in lexicographic order.
    pub fn names(&self) -> Vec<&AttributeName> {
        let mut names: Vec<_> = self.iter().map(|(n, _)| n).collect();
        names.dedup();
        names
    }

    /// Pairs of `self` not present in `other`.
    pub fn difference(&self, other: &Request) -> Vec<Pair> {
        self.pairs.difference(&other.pairs).cloned().collect()
    }
}

/// Serialized as an array of `[name, value]` records.
impl Serialize for Request {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|(n, v)| (n.as_str(), v.as_str())))
    }
}

impl<'de> Deserialize<'de> for Request {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(String, String)>::deserialize(deserializer)?;
        Request::try_from_pairs(pairs).map_err(serde::de::Error::custom)
    }
}

impl FromIterator<Pair> for Request {
    fn from_iter<I: IntoIterator<Item = Pair>>(iter: I) -> Self {
        Request {
            pairs: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Request {
    type Item = &'a Pair;
    type IntoIter = std::collections::btree_set::Iter<'a, Pair>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Target {
    Null,
    Name(AttributeName),
    Match(AttributeName, AttributeValue),
    Opt(Box<Target>),
    Not(Box<Target>),
    /// `and`: weak conjunction `⊓`.
    And(Box<Target>, Box<Target>),
    /// `or`: strong disjunction `⊔~`.
    Or(Box<Target>, Box<Target>),
    /// Strong conjunction `⊓~`.
    StrongAnd(Box<Target>, Box<Target>),
    /// Weak disjunction `⊔`.
    WeakOr(Box<Target>, Box<Target>),
    /// Supremum `⊔̇`.
    Sup(Box<Target>, Box<Target>),
}

impl Target {
    /// # Panics
    ///
    /// If `name` is empty.
    pub fn name(name: &str) -> Target {
        Target::Name(AttributeName::new(name).expect("non-empty attribute name"))
    }

    /// # Panics
    ///
    /// If `name` or `value` is empty.
    pub fn matching(name: &str, value: &str) -> Target {
        Target::Match(
            AttributeName::new(name).expect("non-empty attribute name"),
            AttributeValue::new(value).expect("non-empty attribute value"),
        )
    }

    pub fn opt(t: Target) -> Target {
        Target::Opt(Box::new(t))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Target) -> Target {
        Target::Not(Box::new(t))
    }

    pub fn and(a: Target, b: Target) -> Target {
        Target::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Target, b: Target) -> Target {
        Target::Or(Box::new(a), Box::new(b))
    }

    pub fn strong_and(a: Target, b: Target) -> Target {
        Target::StrongAnd(Box::new(a), Box::new(b))
    }

    pub fn weak_or(a: Target, b: Target) -> Target {
        Target::WeakOr(Box::new(a), Box::new(b))
    }

    pub fn sup(a: Target, b: Target) -> Target {
        Target::Sup(Box::new(a), Box::new(b))
    }

    /// True when the tree only uses `null`, names, matches, `opt`, `not`
    /// and `or`.
    pub fn is_core(&self) -> bool {
        match self {
            Target::Null | Target::Name(_) | Target::Match(..) => true,
            Target::Opt(t) | Target::Not(t) => t.is_core(),
            Target::Or(a, b) => a.is_core() && b.is_core(),
            Target::And(..) | Target::StrongAnd(..) | Target::WeakOr(..) | Target::Sup(..) => false,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Target::Null | Target::Name(_) | Target::Match(..) => 0,
            Target::Opt(t) | Target::Not(t) => 1 + t.depth(),
            Target::And(a, b)
            | Target::Or(a, b)
            | Target::StrongAnd(a, b)
            | Target::WeakOr(a, b)
            | Target::Sup(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Visits every atomic leaf.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a Target)) {
        match self {
            Target::Null | Target::Name(_) | Target::Match(..) => f(self),
            Target::Opt(t) | Target::Not(t) => t.for_each_atom(f),
            Target::And(a, b)
            | Target::Or(a, b)
            | Target::StrongAnd(a, b)
            | Target::WeakOr(a, b)
            | Target::Sup(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
        }
    }
}

/// Verdict of an atomic target against a single pair.
fn atom_verdict(target: &Target, (name, value): &Pair) -> TriValue {
    match target {
        Target::Name(n) if n == name => TriValue::One,
        Target::Match(n, v) if n == name => {
            if v == value {
                TriValue::One
            } else {
                TriValue::Zero
            }
        }
        _ => TriValue::Bottom,
    }
}

pub fn eval_target(target: &Target, request: &Request) -> TriValue {
    match target {
        Target::Null => TriValue::One,
        // Splitting: the supremum of the per-pair verdicts, ⊥ for ∅.
        Target::Name(_) | Target::Match(..) => request
            .iter()
            .map(|pair| atom_verdict(target, pair))
            .fold(TriValue::Bottom, logic3::sup),
        Target::Opt(t) => logic3::weaken(eval_target(t, request)),
        Target::Not(t) => logic3::neg(eval_target(t, request)),
        Target::And(a, b) => logic3::weak_and(eval_target(a, request), eval_target(b, request)),
        Target::Or(a, b) => logic3::strong_or(eval_target(a, request), eval_target(b, request)),
        Target::StrongAnd(a, b) => {
            logic3::strong_and(eval_target(a, request), eval_target(b, request))
        }
        Target::WeakOr(a, b) => logic3::weak_or(eval_target(a, request), eval_target(b, request)),
        Target::Sup(a, b) => logic3::sup(eval_target(a, request), eval_target(b, request)),
    }
}

fn core_strong_and(a: Target, b: Target) -> Target {
    Target::not(Target::or(Target::not(a), Target::not(b)))
}

/// Rewrites extended and `and` nodes into `null`/names/matches combined with
/// `opt`, `not` and `or` only. Subterms are duplicated by the encodings, so
/// the output can be exponentially larger in the nesting depth.
pub fn desugar_target(target: &Target) -> Target {
    match target {
        Target::Null | Target::Name(_) | Target::Match(..) => target.clone(),
        Target::Opt(t) => Target::opt(desugar_target(t)),
        Target::Not(t) => Target::not(desugar_target(t)),
        Target::Or(a, b) => Target::or(desugar_target(a), desugar_target(b)),
        Target::StrongAnd(a, b) => core_strong_and(desugar_target(a), desugar_target(b)),
        Target::And(a, b) => {
            let (x, y) = (desugar_target(a), desugar_target(b));
            // (x ⊓~ y) ⊔~ ((x ⊓~ ¬x) ⊔~ (y ⊓~ ¬y))
            Target::or(
                core_strong_and(x.clone(), y.clone()),
                Target::or(
                    core_strong_and(x.clone(), Target::not(x)),
                    core_strong_and(y.clone(), Target::not(y)),
                ),
            )
        }
        Target::WeakOr(a, b) => {
            let (x, y) = (desugar_target(a), desugar_target(b));
            // (x ⊔~ y) ⊓~ ((x ⊔~ ¬x) ⊓~ (y ⊔~ ¬y))
            core_strong_and(
                Target::or(x.clone(), y.clone()),
                core_strong_and(
                    Target::or(x.clone(), Target::not(x)),
                    Target::or(y.clone(), Target::not(y)),
                ),
            )
        }
        Target::Sup(a, b) => {
            let (x, y) = (desugar_target(a), desugar_target(b));
            // (x ⊔~ ~y) ⊓~ (~x ⊔~ y)
            core_strong_and(
                Target::or(x.clone(), Target::opt(y.clone())),
                Target::or(Target::opt(x), y),
            )
        }
    }
}

/// Candidate pairs for brute-force procedures. Every mentioned pair, plus one
/// value per mentioned name that no target mentions.
///
/// With equality as the only predicate, evaluation only distinguishes a value
/// by whether it equals some mentioned value, so one fresh value per name
/// stands for all of the others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    pairs: Vec<Pair>,
}

impl Universe {
    /// The pairs of a concrete request, for enumerating its sub-requests.
    pub fn from_request(request: &Request) -> Universe {
        Universe {
            pairs: request.iter().cloned().collect(),
        }
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The request made of the pairs selected by `mask`.
    pub fn request(&self, mask: u32) -> Request {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| p.clone())
            .collect()
    }

    /// Bitmask of the pairs belonging to each name, in name order.
    pub fn name_groups(&self) -> Vec<u32> {
        let mut groups: BTreeMap<&AttributeName, u32> = BTreeMap::new();
        for (i, (n, _)) in self.pairs.iter().enumerate() {
            *groups.entry(n).or_default() |= 1 << i;
        }
        groups.into_values().collect()
    }

    /// Fails if `2^len` requests would exceed the budget `2^limit`.
    pub fn check_budget(&self, limit: usize) -> Result<(), BudgetExceeded> {
        budget::check("universe pairs", self.len(), limit)
    }

    /// Every request over the universe, ordered by mask.
    pub fn requests(&self) -> impl Iterator<Item = (u32, Request)> + '_ {
        (0..1u32 << self.len()).map(|m| (m, self.request(m)))
    }
}

pub fn build_universe<'a>(targets: impl IntoIterator<Item = &'a Target>) -> Universe {
    let mut values: BTreeMap<AttributeName, BTreeSet<AttributeValue>> = BTreeMap::new();
    let mut mentioned: BTreeSet<String> = BTreeSet::new();
    for t in targets {
        t.for_each_atom(&mut |atom| match atom {
            Target::Name(n) => {
                values.entry(n.clone()).or_default();
            }
            Target::Match(n, v) => {
                values.entry(n.clone()).or_default().insert(v.clone());
                mentioned.insert(v.as_str().to_owned());
            }
            _ => {}
        });
    }
    let fresh = fresh_value(&mentioned);
    let mut pairs = Vec::new();
    for (name, vals) in values {
        for v in vals {
            pairs.push((name.clone(), v));
        }
        pairs.push((name, fresh.clone()));
    }
    pairs.sort();
    Universe { pairs }
}

fn fresh_value(mentioned: &BTreeSet<String>) -> AttributeValue {
    let mut candidate = String::from("_other");
    let mut n = 0;
    while mentioned.contains(&candidate) {
        n += 1;
        candidate = format!("_other{n}");
    }
    AttributeValue::new(candidate).expect("non-empty")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// A request on which the two targets evaluate differently.
    Distinguished {
        request: Request,
        left: TriValue,
        right: TriValue,
    },
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Compares two targets on every request over their joint universe.
pub fn targets_equivalent(
    left: &Target,
    right: &Target,
    limit: usize,
) -> Result<Equivalence, BudgetExceeded> {
    let universe = build_universe([left, right]);
    universe.check_budget(limit)?;
    for (_, request) in universe.requests() {
        let (l, r) = (eval_target(left, &request), eval_target(right, &request));
        if l != r {
            return Ok(Equivalence::Distinguished {
                request,
                left: l,
                right: r,
            });
        }
    }
    Ok(Equivalence::Equivalent)
}
