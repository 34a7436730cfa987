//! Policies: decision sets, decision operators, set-valued evaluation and the
//! conservative resolver.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget::{self, BudgetExceeded};
use crate::logic3::{self, TriValue};
use crate::targets::{eval_target, Request, Target};

use TriValue::{Bottom, One, Zero};

/// A nonempty subset of `{1_P, 0_P, ⊥_P}`, stored as a three-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecisionSet(u8);

const fn bit(v: TriValue) -> u8 {
    match v {
        One => 0b001,
        Zero => 0b010,
        Bottom => 0b100,
    }
}

impl DecisionSet {
    pub const ALLOW: DecisionSet = DecisionSet(bit(One));
    pub const DENY: DecisionSet = DecisionSet(bit(Zero));
    pub const NOT_APPLICABLE: DecisionSet = DecisionSet(bit(Bottom));

    pub fn singleton(v: TriValue) -> Self {
        DecisionSet(bit(v))
    }

    /// `None` for the empty mask or stray bits.
    pub fn from_mask(mask: u8) -> Option<Self> {
        (mask != 0 && mask & !0b111 == 0).then_some(DecisionSet(mask))
    }

    /// `None` if `values` is empty.
    pub fn from_values(values: impl IntoIterator<Item = TriValue>) -> Option<Self> {
        Self::from_mask(values.into_iter().fold(0, |m, v| m | bit(v)))
    }

    /// All seven nonempty decision sets.
    pub fn all() -> impl Iterator<Item = DecisionSet> {
        (1..=7u8).map(DecisionSet)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn contains(self, v: TriValue) -> bool {
        self.0 & bit(v) != 0
    }

    /// Members in canonical order `1_P, 0_P, ⊥_P`.
    pub fn iter(self) -> impl Iterator<Item = TriValue> {
        TriValue::ALL.into_iter().filter(move |v| self.contains(*v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(self) -> bool {
        false
    }

    pub fn as_singleton(self) -> Option<TriValue> {
        (self.len() == 1).then(|| self.iter().next().expect("nonempty"))
    }

    pub fn union(self, other: DecisionSet) -> DecisionSet {
        DecisionSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: DecisionSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn map(self, f: impl Fn(TriValue) -> TriValue) -> DecisionSet {
        DecisionSet(self.iter().fold(0, |m, v| m | bit(f(v))))
    }

    /// `{f(x, y) : x ∈ self, y ∈ other}`.
    pub fn lift2(self, other: DecisionSet, f: impl Fn(TriValue, TriValue) -> TriValue) -> DecisionSet {
        let mut mask = 0;
        for x in self.iter() {
            for y in other.iter() {
                mask |= bit(f(x, y));
            }
        }
        DecisionSet(mask)
    }

    pub fn symbols(self) -> Vec<String> {
        self.iter().map(|v| v.symbol('P')).collect()
    }
}

impl fmt::Debug for DecisionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DecisionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols().join(", "))
    }
}

impl Serialize for DecisionSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.symbols().serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AccessDecision {
    Allow,
    Deny,
}

impl fmt::Display for AccessDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AccessDecision::Allow => "allow",
            AccessDecision::Deny => "deny",
        })
    }
}

/// Conservative resolution: allow exactly when the only possible decision is
/// `1_P`.
pub fn resolve(decisions: DecisionSet) -> AccessDecision {
    if decisions == DecisionSet::ALLOW {
        AccessDecision::Allow
    } else {
        AccessDecision::Deny
    }
}

/// Allow-by-default: `⊥_P` becomes `1_P`.
pub fn abd(v: TriValue) -> TriValue {
    match v {
        Bottom => One,
        other => other,
    }
}

/// Deny-by-default, the policy reading of `~`.
pub fn dbd(v: TriValue) -> TriValue {
    logic3::weaken(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DecisionOp {
    /// Core conjunction, `⊓~` on policy decisions.
    AndP,
    /// Deny-overrides.
    AndCup,
    /// Allow-overrides.
    OrCup,
    AndCap,
    OrCap,
    /// First-applicable `▷`.
    FirstApplicable,
    /// Last-applicable `◁`.
    LastApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineMode {
    /// Children form a set; order is irrelevant.
    Set,
    /// Children form a list evaluated in order.
    List,
}

/// Whether a lattice operator takes the minimum or maximum of its operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

// Rows: left operand, columns: right operand, both ordered 1, 0, ⊥.
const AND_CUP: [[TriValue; 3]; 3] = [[One, Zero, One], [Zero, Zero, Zero], [One, Zero, Bottom]];
const OR_CUP: [[TriValue; 3]; 3] = [[One, One, One], [One, Zero, Zero], [One, Zero, Bottom]];
const FIRST_APPLICABLE: [[TriValue; 3]; 3] =
    [[One, One, One], [Zero, Zero, Zero], [One, Zero, Bottom]];
const LAST_APPLICABLE: [[TriValue; 3]; 3] =
    [[One, Zero, One], [One, Zero, Zero], [One, Zero, Bottom]];

fn idx(v: TriValue) -> usize {
    match v {
        One => 0,
        Zero => 1,
        Bottom => 2,
    }
}

impl DecisionOp {
    pub const ALL: [DecisionOp; 7] = [
        DecisionOp::AndP,
        DecisionOp::AndCup,
        DecisionOp::OrCup,
        DecisionOp::AndCap,
        DecisionOp::OrCap,
        DecisionOp::FirstApplicable,
        DecisionOp::LastApplicable,
    ];

    pub fn apply(self, a: TriValue, b: TriValue) -> TriValue {
        match self {
            DecisionOp::AndP => logic3::strong_and(a, b),
            DecisionOp::AndCup => AND_CUP[idx(a)][idx(b)],
            DecisionOp::OrCup => OR_CUP[idx(a)][idx(b)],
            DecisionOp::AndCap => logic3::weak_and(a, b),
            DecisionOp::OrCap => logic3::weak_or(a, b),
            DecisionOp::FirstApplicable => FIRST_APPLICABLE[idx(a)][idx(b)],
            DecisionOp::LastApplicable => LAST_APPLICABLE[idx(a)][idx(b)],
        }
    }

    pub fn is_commutative(self) -> bool {
        !matches!(self, DecisionOp::FirstApplicable | DecisionOp::LastApplicable)
    }

    pub fn mode(self) -> CombineMode {
        if self.is_commutative() {
            CombineMode::Set
        } else {
            CombineMode::List
        }
    }

    /// The total order (lowest first) under which the operator is a glb or
    /// lub, for the five commutative operators.
    pub fn lattice(self) -> Option<(Extremum, [TriValue; 3])> {
        match self {
            DecisionOp::AndP => Some((Extremum::Min, [Zero, Bottom, One])),
            DecisionOp::AndCup => Some((Extremum::Min, [Zero, One, Bottom])),
            DecisionOp::AndCap => Some((Extremum::Min, [Bottom, Zero, One])),
            DecisionOp::OrCup => Some((Extremum::Max, [Bottom, Zero, One])),
            DecisionOp::OrCap => Some((Extremum::Max, [Zero, One, Bottom])),
            DecisionOp::FirstApplicable | DecisionOp::LastApplicable => None,
        }
    }

    /// Keyword in the textual syntax.
    pub fn keyword(self) -> &'static str {
        match self {
            DecisionOp::AndP => "and",
            DecisionOp::AndCup => "and_cup",
            DecisionOp::OrCup => "or_cup",
            DecisionOp::AndCap => "and_cap",
            DecisionOp::OrCap => "or_cap",
            DecisionOp::FirstApplicable => "fa",
            DecisionOp::LastApplicable => "la",
        }
    }

    pub fn from_keyword(word: &str) -> Option<DecisionOp> {
        DecisionOp::ALL.into_iter().find(|op| op.keyword() == word)
    }
}

impl fmt::Display for DecisionOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Constructions of the decision operators from `not`, `dbd` and the core
/// conjunction, evaluated literally.
pub mod encodings {
    use super::*;
    use crate::logic3::{neg, strong_and, strong_or};

    pub fn and_cap(x: TriValue, y: TriValue) -> TriValue {
        logic3::derived::weak_and(x, y)
    }

    pub fn or_cap(x: TriValue, y: TriValue) -> TriValue {
        logic3::derived::weak_or(x, y)
    }

    /// `or∪` is the supremum under `1 > 0 > ⊥`.
    pub fn or_cup(x: TriValue, y: TriValue) -> TriValue {
        logic3::derived::sup(x, y)
    }

    /// `not((not x) or∪ (not y))`.
    pub fn and_cup(x: TriValue, y: TriValue) -> TriValue {
        neg(or_cup(neg(x), neg(y)))
    }

    /// `not(dbd(not x))`.
    pub fn abd(x: TriValue) -> TriValue {
        neg(dbd(neg(x)))
    }

    /// `x or∪ (abd x ⊓~ y)`: the right operand only survives when `x` is
    /// `⊥_P`, in which case `abd x` is the identity of `⊓~`.
    pub fn first_applicable(x: TriValue, y: TriValue) -> TriValue {
        or_cup(x, strong_and(abd(x), y))
    }

    /// `(abd(x ⊔~ ¬x)) ⊓~ (x or∪ y)`, kept only to document where it departs
    /// from the first-applicable table.
    pub fn first_applicable_literal(x: TriValue, y: TriValue) -> TriValue {
        strong_and(abd(strong_or(x, neg(x))), or_cup(x, y))
    }

    pub fn last_applicable(x: TriValue, y: TriValue) -> TriValue {
        first_applicable(y, x)
    }

    pub fn apply(op: DecisionOp, x: TriValue, y: TriValue) -> TriValue {
        match op {
            DecisionOp::AndP => strong_and(x, y),
            DecisionOp::AndCup => and_cup(x, y),
            DecisionOp::OrCup => or_cup(x, y),
            DecisionOp::AndCap => and_cap(x, y),
            DecisionOp::OrCap => or_cap(x, y),
            DecisionOp::FirstApplicable => first_applicable(x, y),
            DecisionOp::LastApplicable => last_applicable(x, y),
        }
    }
}

pub fn apply_decision_op(op: DecisionOp, a: TriValue, b: TriValue) -> TriValue {
    op.apply(a, b)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombineError {
    #[error("a combined policy needs at least two children, got {0}")]
    TooFewChildren(usize),
    #[error("operator {0} has no lattice fast path; evaluate it as a list")]
    NotALattice(DecisionOp),
    #[error("no operand sets to combine")]
    NoOperands,
}

/// `(t, ⊕, children)`. Commutative operators treat the children as a set;
/// first- and last-applicable treat them as an ordered list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Combination {
    target: Target,
    op: DecisionOp,
    children: Vec<Policy>,
}

impl Combination {
    pub fn new(target: Target, op: DecisionOp, children: Vec<Policy>) -> Result<Self, CombineError> {
        if children.len() < 2 {
            return Err(CombineError::TooFewChildren(children.len()));
        }
        Ok(Combination {
            target,
            op,
            children,
        })
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn op(&self) -> DecisionOp {
        self.op
    }

    pub fn mode(&self) -> CombineMode {
        self.op.mode()
    }

    pub fn children(&self) -> &[Policy] {
        &self.children
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Policy {
    Allow,
    Deny,
    Not(Box<Policy>),
    Dbd(Box<Policy>),
    /// Core conjunction, `⊓~` lifted to sets.
    And(Box<Policy>, Box<Policy>),
    Targeted(Target, Box<Policy>),
    Combined(Combination),
}

impl Policy {
    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Policy) -> Policy {
        Policy::Not(Box::new(p))
    }

    pub fn dbd(p: Policy) -> Policy {
        Policy::Dbd(Box::new(p))
    }

    /// `not dbd not p`.
    pub fn abd(p: Policy) -> Policy {
        Policy::not(Policy::dbd(Policy::not(p)))
    }

    pub fn and(a: Policy, b: Policy) -> Policy {
        Policy::And(Box::new(a), Box::new(b))
    }

    pub fn targeted(t: Target, p: Policy) -> Policy {
        Policy::Targeted(t, Box::new(p))
    }

    pub fn combined(t: Target, op: DecisionOp, children: Vec<Policy>) -> Result<Policy, CombineError> {
        Combination::new(t, op, children).map(Policy::Combined)
    }

    /// Visits every target in the policy tree.
    pub fn for_each_target<'a>(&'a self, f: &mut impl FnMut(&'a Target)) {
        match self {
            Policy::Allow | Policy::Deny => {}
            Policy::Not(p) | Policy::Dbd(p) => p.for_each_target(f),
            Policy::And(a, b) => {
                a.for_each_target(f);
                b.for_each_target(f);
            }
            Policy::Targeted(t, p) => {
                f(t);
                p.for_each_target(f);
            }
            Policy::Combined(c) => {
                f(&c.target);
                for child in &c.children {
                    child.for_each_target(f);
                }
            }
        }
    }

    pub fn targets(&self) -> Vec<&Target> {
        let mut out = Vec::new();
        self.for_each_target(&mut |t| out.push(t));
        out
    }

    /// True when the tree only uses decisions, `not`, `dbd`, `and` and
    /// targeted policies.
    pub fn is_core(&self) -> bool {
        match self {
            Policy::Allow | Policy::Deny => true,
            Policy::Not(p) | Policy::Dbd(p) | Policy::Targeted(_, p) => p.is_core(),
            Policy::And(a, b) => a.is_core() && b.is_core(),
            Policy::Combined(_) => false,
        }
    }
}

fn apply_target(value: TriValue, child: impl FnOnce() -> DecisionSet) -> DecisionSet {
    match value {
        One => child(),
        Zero => DecisionSet::NOT_APPLICABLE,
        Bottom => child().union(DecisionSet::NOT_APPLICABLE),
    }
}

/// Combines child decision sets with `op`: lattice operators use the linear
/// fast path, the others a left fold.
pub fn combine_sets(op: DecisionOp, sets: &[DecisionSet]) -> Result<DecisionSet, CombineError> {
    if op.lattice().is_some() {
        eval_nary_fast(op, sets)
    } else {
        eval_list_fold(op, sets)
    }
}

pub fn eval_policy(policy: &Policy, request: &Request) -> DecisionSet {
    match policy {
        Policy::Allow => DecisionSet::ALLOW,
        Policy::Deny => DecisionSet::DENY,
        Policy::Not(p) => eval_policy(p, request).map(logic3::neg),
        Policy::Dbd(p) => eval_policy(p, request).map(dbd),
        Policy::And(a, b) => {
            eval_policy(a, request).lift2(eval_policy(b, request), logic3::strong_and)
        }
        Policy::Targeted(t, p) => apply_target(eval_target(t, request), || eval_policy(p, request)),
        Policy::Combined(c) => apply_target(eval_target(&c.target, request), || {
            let sets: Vec<_> = c.children.iter().map(|p| eval_policy(p, request)).collect();
            combine_sets(c.op, &sets).expect("combination has at least two children")
        }),
    }
}

/// One node of an evaluation trace: the node label, the value of its target
/// (for targeted and combined nodes) and the resulting decision set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceNode {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_value: Option<String>,
    pub decisions: DecisionSet,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TraceNode>,
}

/// Evaluates like [`eval_policy`] and records every intermediate result.
/// Children of targeted nodes are evaluated even when the target is `0_T`.
pub fn eval_policy_traced(policy: &Policy, request: &Request) -> TraceNode {
    let node = |label: String, target_value: Option<TriValue>, decisions, children| TraceNode {
        label,
        target_value: target_value.map(|v| v.symbol('T')),
        decisions,
        children,
    };
    match policy {
        Policy::Allow => node("allow".into(), None, DecisionSet::ALLOW, vec![]),
        Policy::Deny => node("deny".into(), None, DecisionSet::DENY, vec![]),
        Policy::Not(p) => {
            let child = eval_policy_traced(p, request);
            node("not".into(), None, child.decisions.map(logic3::neg), vec![child])
        }
        Policy::Dbd(p) => {
            let child = eval_policy_traced(p, request);
            node("dbd".into(), None, child.decisions.map(dbd), vec![child])
        }
        Policy::And(a, b) => {
            let (l, r) = (eval_policy_traced(a, request), eval_policy_traced(b, request));
            let d = l.decisions.lift2(r.decisions, logic3::strong_and);
            node("and".into(), None, d, vec![l, r])
        }
        Policy::Targeted(t, p) => {
            let value = eval_target(t, request);
            let child = eval_policy_traced(p, request);
            let d = apply_target(value, || child.decisions);
            node(crate::syntax::print_target(t), Some(value), d, vec![child])
        }
        Policy::Combined(c) => {
            let value = eval_target(&c.target, request);
            let children: Vec<_> = c.children.iter().map(|p| eval_policy_traced(p, request)).collect();
            let sets: Vec<_> = children.iter().map(|n| n.decisions).collect();
            let d = apply_target(value, || combine_sets(c.op, &sets).expect("at least two children"));
            let label = format!("{} ? {}", crate::syntax::print_target(&c.target), c.op);
            node(label, Some(value), d, children)
        }
    }
}

/// Exact `{d1 ⊕ … ⊕ dk : di ∈ sets[i]}` for a lattice operator in linear
/// time.
///
/// For a min-operator, `v` is achievable iff it occurs in some operand set
/// and every set has a member at least `v`, i.e. `v ≤ min_i max(sets[i])`.
/// Max-operators are dual.
pub fn eval_nary_fast(op: DecisionOp, sets: &[DecisionSet]) -> Result<DecisionSet, CombineError> {
    let (extremum, order) = op.lattice().ok_or(CombineError::NotALattice(op))?;
    if sets.is_empty() {
        return Err(CombineError::NoOperands);
    }
    let rank = |v: TriValue| order.iter().position(|o| *o == v).expect("total order");
    let union = sets.iter().fold(0u8, |m, s| m | s.mask());
    let bound = match extremum {
        Extremum::Min => sets
            .iter()
            .map(|s| s.iter().map(rank).max().expect("nonempty"))
            .min(),
        Extremum::Max => sets
            .iter()
            .map(|s| s.iter().map(rank).min().expect("nonempty"))
            .max(),
    }
    .expect("nonempty");
    let keep = |v: TriValue| match extremum {
        Extremum::Min => rank(v) <= bound,
        Extremum::Max => rank(v) >= bound,
    };
    let union = DecisionSet::from_mask(union).expect("nonempty operands");
    Ok(DecisionSet::from_values(union.iter().filter(|v| keep(*v))).expect("the bound is attained"))
}

/// Exact `{d1 ⊕ … ⊕ dk}` (left-nested) as a fold of the set-lifted binary
/// operator. The accumulator never exceeds three members, so this is linear
/// in `k` for any operator.
pub fn eval_list_fold(op: DecisionOp, sets: &[DecisionSet]) -> Result<DecisionSet, CombineError> {
    let (first, rest) = sets.split_first().ok_or(CombineError::NoOperands)?;
    Ok(rest
        .iter()
        .fold(*first, |acc, s| acc.lift2(*s, |a, b| op.apply(a, b))))
}

/// The literal comprehension `{d1 ⊕ … ⊕ dk : di ∈ sets[i]}`, enumerating
/// every choice. Exponential; used as an oracle.
pub fn naive_product(
    op: DecisionOp,
    sets: &[DecisionSet],
    limit: usize,
) -> Result<Option<DecisionSet>, BudgetExceeded> {
    budget::check("operand sets", sets.len(), limit)?;
    let members: Vec<Vec<TriValue>> = sets.iter().map(|s| s.iter().collect()).collect();
    let mut results = Vec::new();
    let mut choice = vec![0usize; members.len()];
    if members.is_empty() {
        return Ok(None);
    }
    loop {
        let mut acc = members[0][choice[0]];
        for (i, m) in members.iter().enumerate().skip(1) {
            acc = op.apply(acc, m[choice[i]]);
        }
        results.push(acc);
        // odometer increment
        let mut i = members.len();
        loop {
            if i == 0 {
                return Ok(DecisionSet::from_values(results));
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < members[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

fn core_or(a: Policy, b: Policy) -> Policy {
    Policy::not(Policy::and(Policy::not(a), Policy::not(b)))
}

fn encode_binary(op: DecisionOp, x: Policy, y: Policy) -> Policy {
    match op {
        DecisionOp::AndP => Policy::and(x, y),
        DecisionOp::AndCap => core_or(
            Policy::and(x.clone(), y.clone()),
            core_or(
                Policy::and(x.clone(), Policy::not(x)),
                Policy::and(y.clone(), Policy::not(y)),
            ),
        ),
        DecisionOp::OrCap => Policy::and(
            core_or(x.clone(), y.clone()),
            Policy::and(
                core_or(x.clone(), Policy::not(x)),
                core_or(y.clone(), Policy::not(y)),
            ),
        ),
        DecisionOp::OrCup => Policy::and(
            core_or(x.clone(), Policy::dbd(y.clone())),
            core_or(Policy::dbd(x), y),
        ),
        DecisionOp::AndCup => Policy::not(encode_binary(
            DecisionOp::OrCup,
            Policy::not(x),
            Policy::not(y),
        )),
        DecisionOp::FirstApplicable => encode_binary(
            DecisionOp::OrCup,
            x.clone(),
            Policy::and(Policy::abd(x), y),
        ),
        DecisionOp::LastApplicable => encode_binary(DecisionOp::FirstApplicable, y, x),
    }
}

/// Lowers combined policies to decisions, `not`, `dbd`, `and` and targeted
/// policies. `(t, ⊕, [p1, …, pk])` becomes `(t, (p1 ⊕ p2) ⊕ … ⊕ pk)` with each
/// `⊕` replaced by its encoding.
///
/// Most encodings mention an operand more than once, and set-valued
/// evaluation picks a member independently at each occurrence. The result
/// therefore agrees exactly with the original whenever every sub-policy
/// evaluates to a singleton, and is a superset of it otherwise.
pub fn desugar_policy(policy: &Policy) -> Policy {
    match policy {
        Policy::Allow | Policy::Deny => policy.clone(),
        Policy::Not(p) => Policy::not(desugar_policy(p)),
        Policy::Dbd(p) => Policy::dbd(desugar_policy(p)),
        Policy::And(a, b) => Policy::and(desugar_policy(a), desugar_policy(b)),
        Policy::Targeted(t, p) => Policy::targeted(t.clone(), desugar_policy(p)),
        Policy::Combined(c) => {
            let mut children = c.children.iter().map(desugar_policy);
            let first = children.next().expect("at least two children");
            let body = children.fold(first, |acc, p| encode_binary(c.op, acc, p));
            Policy::targeted(c.target.clone(), body)
        }
    }
}
