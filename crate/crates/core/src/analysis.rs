//! Monotonicity analysis and attribute-hiding attack search.
//!
//! A target is *monotonic* if removing pairs from a request can only turn
//! its value into `⊥_T` or leave it unchanged, and *weakly monotonic* if
//! removing pairs can only lower it under `⊥ ≺ 0 ≺ 1`. Sub-requests are
//! either arbitrary subsets or, under the all-or-nothing assumption, formed
//! by dropping whole name groups.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget::{self, BudgetExceeded, DEFAULT_LIMIT};
use crate::logic3::TriValue;
use crate::policies::{desugar_policy, eval_policy, resolve, AccessDecision, DecisionSet, Policy};
use crate::targets::{build_universe, eval_target, Pair, Request, Target, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubRequestMode {
    /// Any subset of the request.
    ArbitrarySubset,
    /// Whole name groups are kept or dropped together.
    AllOrNothing,
}

impl fmt::Display for SubRequestMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubRequestMode::ArbitrarySubset => "arbitrary-subset",
            SubRequestMode::AllOrNothing => "all-or-nothing",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonotonicityKind {
    Strong,
    Weak,
}

/// Sufficient (not necessary) monotonicity flags derived from the syntax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityClass {
    /// Monotonic when sub-requests drop whole name groups.
    pub strong_under_all_or_nothing: bool,
    /// Monotonic for arbitrary sub-requests.
    pub strong: bool,
    pub weak: bool,
    /// Why a flag was lost, or how it was established, per node.
    pub notes: Vec<String>,
}

impl MonotonicityClass {
    pub fn strong_in(&self, mode: SubRequestMode) -> bool {
        match mode {
            SubRequestMode::ArbitrarySubset => self.strong,
            SubRequestMode::AllOrNothing => self.strong_under_all_or_nothing,
        }
    }
}

#[derive(Clone, Copy)]
struct Flags {
    strong_aon: bool,
    strong: bool,
    weak: bool,
}

impl Flags {
    fn and(self, o: Flags) -> Flags {
        Flags {
            strong_aon: self.strong_aon && o.strong_aon,
            strong: self.strong && o.strong,
            weak: self.weak && o.weak,
        }
    }
}

/// Bottom-up classification. Atomic targets are weakly monotonic, and
/// strongly monotonic under all-or-nothing; `null` and bare names are also
/// strongly monotonic for arbitrary sub-requests. Strong monotonicity is
/// preserved by `not`, `and`, `or`, `sand` and `wor` and lost by `opt`; weak
/// monotonicity is preserved by `opt`, `and`, `or` and `wor` and lost by `not`
/// and `sand`. `sup` nodes are settled by the exhaustive semantic check.
pub fn classify_target(target: &Target) -> MonotonicityClass {
    let mut notes = Vec::new();
    let f = classify_node(target, &mut notes);
    MonotonicityClass {
        strong_under_all_or_nothing: f.strong_aon,
        strong: f.strong,
        weak: f.weak,
        notes,
    }
}

fn classify_node(t: &Target, notes: &mut Vec<String>) -> Flags {
    let all = Flags {
        strong_aon: true,
        strong: true,
        weak: true,
    };
    match t {
        Target::Null | Target::Name(_) => all,
        Target::Match(..) => {
            notes.push(format!("{t}: one of several values for a name can be hidden"));
            Flags { strong: false, ..all }
        }
        Target::Opt(inner) => {
            let f = classify_node(inner, notes);
            if f.strong_aon || f.strong {
                notes.push(format!("{t}: opt turns ⊥_T into 0_T"));
            }
            Flags {
                strong_aon: false,
                strong: false,
                ..f
            }
        }
        Target::Not(inner) => {
            let f = classify_node(inner, notes);
            if f.weak {
                notes.push(format!("{t}: not reverses the weak order"));
            }
            Flags { weak: false, ..f }
        }
        Target::And(a, b) | Target::Or(a, b) | Target::WeakOr(a, b) => {
            classify_node(a, notes).and(classify_node(b, notes))
        }
        Target::StrongAnd(a, b) => {
            let f = classify_node(a, notes).and(classify_node(b, notes));
            if f.weak {
                notes.push(format!("{t}: sand does not preserve weak monotonicity"));
            }
            Flags { weak: false, ..f }
        }
        Target::Sup(..) => {
            let mut semantic = |kind, mode| {
                match check_monotonic_semantic(t, kind, mode, DEFAULT_LIMIT) {
                    Ok(Verdict::Holds) => true,
                    Ok(Verdict::Counterexample(_)) => false,
                    Err(e) => {
                        notes.push(format!("{t}: not checked ({e})"));
                        false
                    }
                }
            };
            let f = Flags {
                strong_aon: semantic(MonotonicityKind::Strong, SubRequestMode::AllOrNothing),
                strong: semantic(MonotonicityKind::Strong, SubRequestMode::ArbitrarySubset),
                weak: semantic(MonotonicityKind::Weak, SubRequestMode::ArbitrarySubset),
            };
            notes.push(format!(
                "{t}: settled exhaustively (strong(AON) {}, strong {}, weak {})",
                yes_no(f.strong_aon),
                yes_no(f.strong),
                yes_no(f.weak)
            ));
            f
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityCounterexample {
    pub request: Request,
    pub sub_request: Request,
    pub full: TriValue,
    pub reduced: TriValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Counterexample(MonotonicityCounterexample),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

fn violates(kind: MonotonicityKind, full: TriValue, reduced: TriValue) -> bool {
    match kind {
        MonotonicityKind::Strong => reduced != TriValue::Bottom && reduced != full,
        MonotonicityKind::Weak => !reduced.weakly_below(full),
    }
}

/// Proper sub-masks of `mask` allowed by `mode`, in ascending order.
fn sub_masks(mask: u32, mode: SubRequestMode, groups: &[u32]) -> Vec<u32> {
    match mode {
        SubRequestMode::ArbitrarySubset => {
            let mut subs = Vec::new();
            let mut sub = mask;
            // standard sub-mask walk, descending; reversed below
            loop {
                sub = sub.wrapping_sub(1) & mask;
                subs.push(sub);
                if sub == 0 {
                    break;
                }
            }
            if mask == 0 {
                subs.clear();
            }
            subs.reverse();
            subs
        }
        SubRequestMode::AllOrNothing => {
            let present: Vec<u32> = groups.iter().map(|g| g & mask).filter(|g| *g != 0).collect();
            let mut subs: Vec<u32> = (0..(1u32 << present.len()) - 1)
                .map(|keep| {
                    present
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| keep & (1 << i) != 0)
                        .fold(0, |m, (_, g)| m | g)
                })
                .collect();
            subs.sort_unstable();
            subs
        }
    }
}

/// Exhaustively checks monotonicity over every request on the target's
/// universe and every sub-request allowed by `mode`. The first violation in
/// ascending mask order is reported.
pub fn check_monotonic_semantic(
    target: &Target,
    kind: MonotonicityKind,
    mode: SubRequestMode,
    limit: usize,
) -> Result<Verdict, BudgetExceeded> {
    let universe = build_universe([target]);
    universe.check_budget(limit)?;
    let groups = universe.name_groups();
    let values: Vec<TriValue> = universe
        .requests()
        .map(|(_, q)| eval_target(target, &q))
        .collect();
    for mask in 0..1u32 << universe.len() {
        let full = values[mask as usize];
        for sub in sub_masks(mask, mode, &groups) {
            let reduced = values[sub as usize];
            if violates(kind, full, reduced) {
                return Ok(Verdict::Counterexample(MonotonicityCounterexample {
                    request: universe.request(mask),
                    sub_request: universe.request(sub),
                    full,
                    reduced,
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Random sub-mask of `mask` allowed by `mode` (possibly `mask` itself).
fn random_sub_mask(rng: &mut StdRng, mask: u32, mode: SubRequestMode, groups: &[u32]) -> u32 {
    match mode {
        SubRequestMode::ArbitrarySubset => mask & rng.gen::<u32>(),
        SubRequestMode::AllOrNothing => groups
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .fold(0, |m, g| m | (g & mask)),
    }
}

/// Non-exhaustive variant of [`check_monotonic_semantic`] for universes too
/// large to enumerate: draws `samples` random (request, sub-request) pairs.
/// `Holds` only means no violation was sampled.
pub fn sample_monotonic(
    target: &Target,
    kind: MonotonicityKind,
    mode: SubRequestMode,
    samples: usize,
    seed: u64,
) -> Result<Verdict, BudgetExceeded> {
    let universe = build_universe([target]);
    budget::check("universe pairs", universe.len(), 30)?;
    let groups = universe.name_groups();
    let full_mask = if universe.is_empty() { 0 } else { u32::MAX >> (32 - universe.len()) };
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..samples {
        let mask = rng.gen::<u32>() & full_mask;
        let sub = random_sub_mask(&mut rng, mask, mode, &groups);
        let (q, q_sub) = (universe.request(mask), universe.request(sub));
        let (full, reduced) = (eval_target(target, &q), eval_target(target, &q_sub));
        if violates(kind, full, reduced) {
            return Ok(Verdict::Counterexample(MonotonicityCounterexample {
                request: q,
                sub_request: q_sub,
                full,
                reduced,
            }));
        }
    }
    Ok(Verdict::Holds)
}

/// Guarantees a policy enjoys against attribute hiding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Guarantee {
    None,
    /// Dbd/and policies over weakly monotonic targets: a sub-request that
    /// yields `{1_P}` implies the full request does.
    AllowStable,
    /// Not/and policies over weakly monotonic targets: a conclusive
    /// singleton on a sub-request is the result on the full request.
    ConclusiveStable,
    /// Monotonic targets: `eval(q) ⊆ eval(q')` for every sub-request `q'`.
    SetInclusion,
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Guarantee::None => "none",
            Guarantee::AllowStable => "allow-stable",
            Guarantee::ConclusiveStable => "conclusive-stable",
            Guarantee::SetInclusion => "set-inclusion",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GuaranteeClass {
    pub mode: SubRequestMode,
    pub set_inclusion: bool,
    pub conclusive_stable: bool,
    pub allow_stable: bool,
    /// What broke each guarantee that does not hold.
    pub reasons: Vec<String>,
}

impl GuaranteeClass {
    pub fn strongest(&self) -> Guarantee {
        if self.set_inclusion {
            Guarantee::SetInclusion
        } else if self.conclusive_stable {
            Guarantee::ConclusiveStable
        } else if self.allow_stable {
            Guarantee::AllowStable
        } else {
            Guarantee::None
        }
    }
}

#[derive(Default)]
struct Connectives {
    not: bool,
    dbd: bool,
}

fn connectives(p: &Policy, c: &mut Connectives) {
    match p {
        Policy::Allow | Policy::Deny => {}
        Policy::Not(inner) => {
            c.not = true;
            connectives(inner, c);
        }
        Policy::Dbd(inner) => {
            c.dbd = true;
            connectives(inner, c);
        }
        Policy::And(a, b) => {
            connectives(a, c);
            connectives(b, c);
        }
        Policy::Targeted(_, inner) => connectives(inner, c),
        Policy::Combined(_) => unreachable!("classified after desugaring"),
    }
}

/// Classifies the policy after desugaring. `mode` selects which sub-requests
/// the set-inclusion guarantee must cover; the two stability guarantees hold
/// for arbitrary sub-requests.
pub fn classify_policy_guarantee(policy: &Policy, mode: SubRequestMode) -> GuaranteeClass {
    let core = desugar_policy(policy);
    let mut reasons = Vec::new();

    let mut set_inclusion = true;
    let mut all_weak = true;
    for t in core.targets() {
        let class = classify_target(t);
        if !class.strong_in(mode) {
            set_inclusion = false;
            reasons.push(format!("set-inclusion: target {t} is not monotonic ({mode})"));
        }
        if !class.weak {
            all_weak = false;
            reasons.push(format!("stability: target {t} is not weakly monotonic"));
        }
    }

    let mut used = Connectives::default();
    connectives(&core, &mut used);
    if !policy.is_core() {
        reasons.push("derived operators were desugared before classification".into());
    }
    let conclusive_stable = all_weak && !used.dbd;
    let allow_stable = all_weak && !used.not;
    if all_weak && used.dbd {
        reasons.push("conclusive-stable: policy uses dbd".into());
    }
    if all_weak && used.not {
        reasons.push("allow-stable: policy uses not".into());
    }
    reasons.sort();
    reasons.dedup();
    GuaranteeClass {
        mode,
        set_inclusion,
        conclusive_stable,
        allow_stable,
        reasons,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub decisions: DecisionSet,
    pub resolved: AccessDecision,
}

impl Outcome {
    fn of(policy: &Policy, request: &Request) -> Outcome {
        let decisions = eval_policy(policy, request);
        Outcome {
            decisions,
            resolved: resolve(decisions),
        }
    }
}

/// A strict sub-request that is allowed while the full request is denied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HidingWitness {
    pub original_request: Request,
    pub reduced_request: Request,
    pub hidden: Request,
    pub original_outcome: Outcome,
    pub reduced_outcome: Outcome,
    pub mode: SubRequestMode,
}

fn witnesses_for(
    policy: &Policy,
    request: &Request,
    mode: SubRequestMode,
    subs: impl IntoIterator<Item = Request>,
) -> Vec<HidingWitness> {
    let original = Outcome::of(policy, request);
    if original.resolved == AccessDecision::Allow {
        return Vec::new();
    }
    let mut found: Vec<HidingWitness> = subs
        .into_iter()
        .filter_map(|reduced| {
            let outcome = Outcome::of(policy, &reduced);
            (outcome.resolved == AccessDecision::Allow).then(|| HidingWitness {
                original_request: request.clone(),
                hidden: request.difference(&reduced).into_iter().collect(),
                reduced_request: reduced,
                original_outcome: original.clone(),
                reduced_outcome: outcome,
                mode,
            })
        })
        .collect();
    found.sort_by(|a, b| {
        a.hidden
            .len()
            .cmp(&b.hidden.len())
            .then_with(|| a.hidden.iter().cmp(b.hidden.iter()))
    });
    found.dedup_by(|a, b| a.reduced_request == b.reduced_request);
    found
}

/// Every strict sub-request (per `mode`) that resolves to allow while
/// `request` resolves to deny, fewest hidden pairs first.
pub fn find_hiding_attacks(
    policy: &Policy,
    request: &Request,
    mode: SubRequestMode,
    limit: usize,
) -> Result<Vec<HidingWitness>, BudgetExceeded> {
    let universe = Universe::from_request(request);
    let groups = universe.name_groups();
    let required = match mode {
        SubRequestMode::ArbitrarySubset => universe.len(),
        SubRequestMode::AllOrNothing => groups.len(),
    };
    budget::check("hideable items", required, limit)?;
    let full = if universe.is_empty() { 0 } else { u32::MAX >> (32 - universe.len()) };
    let subs = sub_masks(full, mode, &groups)
        .into_iter()
        .map(|m| universe.request(m));
    Ok(witnesses_for(policy, request, mode, subs))
}

/// Non-exhaustive variant of [`find_hiding_attacks`] drawing `samples`
/// random strict sub-requests.
pub fn sample_hiding_attacks(
    policy: &Policy,
    request: &Request,
    mode: SubRequestMode,
    samples: usize,
    seed: u64,
) -> Result<Vec<HidingWitness>, BudgetExceeded> {
    let universe = Universe::from_request(request);
    budget::check("request pairs", universe.len(), 30)?;
    let groups = universe.name_groups();
    let full = if universe.is_empty() { 0 } else { u32::MAX >> (32 - universe.len()) };
    let mut rng = StdRng::seed_from_u64(seed);
    let subs = (0..samples)
        .map(|_| random_sub_mask(&mut rng, full, mode, &groups))
        .filter(|m| *m != full)
        .map(|m| universe.request(m))
        .collect::<Vec<_>>();
    Ok(witnesses_for(policy, request, mode, subs))
}

/// Pairs hidden by a witness, for display.
pub fn hidden_pairs(w: &HidingWitness) -> Vec<&Pair> {
    w.hidden.iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policies::DecisionOp;
    use TriValue::{Bottom, One, Zero};

    fn a1() -> Target {
        Target::matching("a", "1")
    }

    #[test]
    fn syntactic_classes() {
        let c = classify_target(&Target::and(a1(), Target::name("b")));
        assert!(c.strong_under_all_or_nothing && c.weak);
        let c = classify_target(&Target::opt(a1()));
        assert!(!c.strong_under_all_or_nothing && c.weak);
        let c = classify_target(&Target::not(Target::opt(a1())));
        assert!(!c.strong_under_all_or_nothing && !c.weak);
        assert!(!c.notes.is_empty());
    }

    #[test]
    fn semantic_checks_on_atoms() {
        let v = check_monotonic_semantic(&a1(), MonotonicityKind::Strong, SubRequestMode::ArbitrarySubset, 12)
            .unwrap();
        let Verdict::Counterexample(cx) = v else { panic!("expected a counterexample") };
        assert_eq!(cx.request, Request::from_pairs([("a", "1"), ("a", "_other")]));
        assert_eq!(cx.sub_request, Request::from_pairs([("a", "_other")]));
        assert_eq!((cx.full, cx.reduced), (One, Zero));

        assert!(check_monotonic_semantic(&a1(), MonotonicityKind::Strong, SubRequestMode::AllOrNothing, 12)
            .unwrap()
            .holds());
    }

    #[test]
    fn opt_is_weak_but_not_strong() {
        let t = Target::opt(a1());
        for mode in [SubRequestMode::ArbitrarySubset, SubRequestMode::AllOrNothing] {
            assert!(check_monotonic_semantic(&t, MonotonicityKind::Weak, mode, 12).unwrap().holds());
            let Verdict::Counterexample(cx) =
                check_monotonic_semantic(&t, MonotonicityKind::Strong, mode, 12).unwrap()
            else {
                panic!("expected a counterexample")
            };
            assert_eq!(cx.request, Request::from_pairs([("a", "1")]));
            assert!(cx.sub_request.is_empty());
        }
    }

    #[test]
    fn sup_is_settled_semantically() {
        let c = classify_target(&Target::sup(a1(), Target::name("b")));
        assert!(c.weak);
        assert!(c.notes.iter().any(|n| n.contains("exhaustively")));
    }

    #[test]
    fn sub_mask_orders() {
        assert_eq!(sub_masks(0b101, SubRequestMode::ArbitrarySubset, &[]), vec![0, 1, 4]);
        assert_eq!(sub_masks(0b111, SubRequestMode::AllOrNothing, &[0b011, 0b100]), vec![0, 3, 4]);
        assert!(sub_masks(0, SubRequestMode::ArbitrarySubset, &[]).is_empty());
    }

    #[test]
    fn attack_policy_has_one_partial_witness() {
        let p = Policy::combined(
            Target::Null,
            DecisionOp::AndCup,
            vec![Policy::Allow, Policy::targeted(Target::matching("n", "v"), Policy::Deny)],
        )
        .unwrap();
        let q = Request::from_pairs([("n", "v"), ("n", "v'")]);
        let w = find_hiding_attacks(&p, &q, SubRequestMode::ArbitrarySubset, 12).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].reduced_request, Request::from_pairs([("n", "v'")]));
        assert_eq!(w[0].original_outcome.decisions, DecisionSet::DENY);
        assert!(find_hiding_attacks(&p, &q, SubRequestMode::AllOrNothing, 12).unwrap().is_empty());

        let class = classify_policy_guarantee(&p, SubRequestMode::ArbitrarySubset);
        assert_eq!(class.strongest(), Guarantee::None);
        let class = classify_policy_guarantee(&p, SubRequestMode::AllOrNothing);
        assert_eq!(class.strongest(), Guarantee::SetInclusion);
    }

    #[test]
    fn single_rule_has_every_guarantee() {
        let p = Policy::targeted(a1(), Policy::Allow);
        let c = classify_policy_guarantee(&p, SubRequestMode::AllOrNothing);
        assert!(c.set_inclusion && c.conclusive_stable && c.allow_stable);
    }

    #[test]
    fn dbd_conjunction_is_allow_stable() {
        let p = Policy::dbd(Policy::and(
            Policy::targeted(Target::opt(a1()), Policy::Allow),
            Policy::targeted(Target::name("b"), Policy::Allow),
        ));
        let c = classify_policy_guarantee(&p, SubRequestMode::ArbitrarySubset);
        assert_eq!(c.strongest(), Guarantee::AllowStable);
        assert!(!c.conclusive_stable);
    }

    #[test]
    fn hiding_budget() {
        let q = Request::from_pairs((0..13).map(|i| (format!("n{i}"), "v")));
        let p = Policy::Allow;
        assert!(find_hiding_attacks(&p, &q, SubRequestMode::ArbitrarySubset, 12).is_err());
        assert!(sample_hiding_attacks(&p, &q, SubRequestMode::ArbitrarySubset, 10, 1).unwrap().is_empty());
    }

    #[test]
    fn bottom_is_always_allowed_by_strong_check() {
        assert!(!violates(MonotonicityKind::Strong, One, Bottom));
        assert!(violates(MonotonicityKind::Strong, Bottom, One));
        assert!(violates(MonotonicityKind::Weak, Zero, One));
    }
}
