mod common;

use ptacl_core::generate::{random_request, PolicyNodes, TargetNodes, Vocabulary};
use ptacl_core::targets::{build_universe, Universe};
use ptacl_core::{
    classify_policy_guarantee, eval_policy, find_hiding_attacks, parse_policy, DecisionSet,
    Policy, SubRequestMode, TriValue,
};
use proptest::prelude::*;

/// Decisions for every request over the policy's universe, indexed by mask.
fn table(p: &Policy) -> (Universe, Vec<DecisionSet>) {
    let universe = build_universe(p.targets());
    assert!(universe.len() <= 14);
    let decisions = universe.requests().map(|(_, q)| eval_policy(p, &q)).collect();
    (universe, decisions)
}

fn group_sub_masks(mask: u32, groups: &[u32]) -> impl Iterator<Item = u32> + '_ {
    (0..1u32 << groups.len()).map(move |keep| {
        groups
            .iter()
            .enumerate()
            .filter(|(i, _)| keep & (1 << i) != 0)
            .fold(0, |m, (_, g)| m | (g & mask))
    })
}

/// Every (sub-request, request) mask pair with `sub ⊆ full`.
fn inclusions(n: usize) -> impl Iterator<Item = (u32, u32)> {
    (0..1u32 << n).flat_map(|full| {
        let mut sub = full;
        std::iter::from_fn(move || {
            let out = sub;
            if out == u32::MAX {
                return None;
            }
            sub = if sub == 0 { u32::MAX } else { (sub - 1) & full };
            Some((out, full))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn set_inclusion_under_name_group_hiding(seed in any::<u64>()) {
        let p = common::policy(seed, PolicyNodes::ALL, TargetNodes::STRONG, 3);
        prop_assert!(classify_policy_guarantee(&p, SubRequestMode::AllOrNothing).set_inclusion);
        let (universe, decisions) = table(&p);
        let groups = universe.name_groups();
        for full in 0..1u32 << universe.len() {
            for sub in group_sub_masks(full, &groups) {
                prop_assert!(
                    decisions[full as usize].is_subset(decisions[sub as usize]),
                    "{} on {:?} vs {:?}", p, universe.request(full), universe.request(sub)
                );
            }
        }
    }

    #[test]
    fn conclusive_decisions_are_stable(seed in any::<u64>()) {
        let p = common::policy(seed, PolicyNodes::NOT_AND, TargetNodes::WEAK, 3);
        prop_assert!(classify_policy_guarantee(&p, SubRequestMode::ArbitrarySubset).conclusive_stable);
        let (universe, decisions) = table(&p);
        for (sub, full) in inclusions(universe.len()) {
            let small = decisions[sub as usize];
            if small.as_singleton().is_some_and(TriValue::is_conclusive) {
                prop_assert_eq!(decisions[full as usize], small, "{}", p);
            }
        }
    }

    #[test]
    fn allow_decisions_are_stable(seed in any::<u64>()) {
        let p = common::policy(seed, PolicyNodes::DBD_AND, TargetNodes::WEAK, 3);
        prop_assert!(classify_policy_guarantee(&p, SubRequestMode::ArbitrarySubset).allow_stable);
        let (universe, decisions) = table(&p);
        for (sub, full) in inclusions(universe.len()) {
            if decisions[sub as usize] == DecisionSet::ALLOW {
                prop_assert_eq!(decisions[full as usize], DecisionSet::ALLOW, "{}", p);
            }
        }
    }

    #[test]
    fn conforming_policies_resist_hiding(seed in any::<u64>(), dbd in any::<bool>()) {
        let nodes = if dbd { PolicyNodes::DBD_AND } else { PolicyNodes::NOT_AND };
        let p = common::policy(seed, nodes, TargetNodes::WEAK, 3);
        let q = random_request(&mut common::rng(!seed), &Vocabulary::default(), 6);
        let found = find_hiding_attacks(&p, &q, SubRequestMode::ArbitrarySubset, 12).unwrap();
        prop_assert!(found.is_empty(), "{} on {:?}", p, q);
    }
}

#[test]
fn inclusions_enumerates_all_pairs() {
    assert_eq!(inclusions(3).count(), 27);
}

fn eval(src: &str, pairs: &[(&str, &str)]) -> DecisionSet {
    eval_policy(&parse_policy(src).unwrap(), &ptacl_core::Request::from_pairs(pairs.iter().copied()))
}

#[test]
fn opt_target_breaks_set_inclusion() {
    let src = "{opt (a = 1) ? allow}";
    assert!(!classify_policy_guarantee(&parse_policy(src).unwrap(), SubRequestMode::AllOrNothing).set_inclusion);
    let full = eval(src, &[("a", "1")]);
    let reduced = eval(src, &[]);
    assert_eq!((full, reduced), (DecisionSet::ALLOW, DecisionSet::NOT_APPLICABLE));
    assert!(!full.is_subset(reduced));
}

#[test]
fn dbd_breaks_conclusive_stability() {
    let src = "dbd {(a = 1) ? allow}";
    let c = classify_policy_guarantee(&parse_policy(src).unwrap(), SubRequestMode::ArbitrarySubset);
    assert!(!c.conclusive_stable && c.allow_stable);
    assert_eq!(eval(src, &[("a", "2")]), DecisionSet::DENY);
    assert_eq!(eval(src, &[("a", "1"), ("a", "2")]), DecisionSet::ALLOW);
}

#[test]
fn negated_target_breaks_allow_stability() {
    let src = "dbd {not (a = 1) ? allow}";
    let c = classify_policy_guarantee(&parse_policy(src).unwrap(), SubRequestMode::ArbitrarySubset);
    assert!(!c.allow_stable);
    assert_eq!(eval(src, &[("a", "2")]), DecisionSet::ALLOW);
    assert_eq!(eval(src, &[("a", "1"), ("a", "2")]), DecisionSet::DENY);
}
