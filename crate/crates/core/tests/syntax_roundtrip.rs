mod common;

use std::path::PathBuf;

use ptacl_core::generate::{random_policy, random_request, random_target, PolicyNodes, TargetNodes, Vocabulary};
use ptacl_core::{
    parse_policy, parse_request, parse_target, print_policy, print_request, print_target,
    DecisionOp, Policy, Request, Target,
};
use proptest::prelude::*;

/// Names and values that need quoting or collide with keywords.
fn awkward() -> Vocabulary {
    Vocabulary {
        names: vec!["a".into(), "or".into(), "full name".into(), "x\"y".into(), "allow".into(), "é".into()],
        values: vec!["1".into(), "test.txt".into(), "two\nlines".into(), "\\".into(), "v'".into()],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn targets_round_trip(seed in any::<u64>()) {
        let t = random_target(&mut common::rng(seed), &awkward(), TargetNodes::ALL, 5);
        let text = print_target(&t);
        prop_assert_eq!(parse_target(&text).unwrap(), t, "{}", text);
    }

    #[test]
    fn policies_round_trip(seed in any::<u64>()) {
        let vocab = awkward();
        let p = random_policy(&mut common::rng(seed), PolicyNodes::ALL, 5, &mut |r| {
            random_target(r, &vocab, TargetNodes::ALL, 2)
        });
        let text = print_policy(&p);
        prop_assert_eq!(parse_policy(&text).unwrap(), p, "{}", text);
    }

    #[test]
    fn requests_round_trip(seed in any::<u64>()) {
        let q = random_request(&mut common::rng(seed), &awkward(), 6);
        prop_assert_eq!(parse_request(&print_request(&q)).unwrap(), q);
    }
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn rule(t: Target, p: Policy) -> Policy {
    Policy::targeted(t, p)
}

fn m(n: &str, v: &str) -> Target {
    Target::matching(n, v)
}

fn nested_rules() -> Policy {
    let inner = Policy::and(rule(m("x", "1"), Policy::Allow), rule(m("x", "2"), Policy::Deny));
    Policy::dbd(rule(
        Target::name("x"),
        Policy::and(Policy::not(rule(m("y", "1"), inner)), rule(m("w", "1"), Policy::Allow)),
    ))
}

fn chinese_wall() -> Policy {
    let inner = Policy::combined(
        Target::Null,
        DecisionOp::AndCup,
        vec![rule(m("employer", "A"), Policy::Allow), rule(m("employer", "B"), Policy::Deny)],
    )
    .unwrap();
    Policy::combined(
        Target::Null,
        DecisionOp::AndCup,
        vec![rule(m("confidential", "true"), inner), Policy::Allow],
    )
    .unwrap()
}

#[test]
fn policy_fixtures() {
    let partial_hiding = Policy::combined(
        Target::Null,
        DecisionOp::AndCup,
        vec![Policy::Allow, rule(m("n", "v"), Policy::Deny)],
    )
    .unwrap();
    let ward = Policy::and(rule(m("role", "doctor"), Policy::Allow), rule(m("ward", "a"), Policy::Allow));
    for (file, expected) in [
        ("nested_rules.ptp", nested_rules()),
        ("chinese_wall.ptp", chinese_wall()),
        ("partial_hiding.ptp", partial_hiding),
        ("ward_access.ptp", ward),
        ("null_allow.ptp", rule(Target::Null, Policy::Allow)),
    ] {
        assert_eq!(parse_policy(&fixture(file)).unwrap(), expected, "{file}");
    }
}

#[test]
fn target_fixtures() {
    let interface = Target::opt(Target::and(
        Target::and(m("object", "test.txt"), Target::name("subject")),
        Target::name("action"),
    ));
    assert_eq!(parse_target(&fixture("interface.ptt")).unwrap(), interface);
    assert_eq!(parse_target(&fixture("opt_atom.ptt")).unwrap(), Target::opt(m("a", "1")));
    assert_eq!(parse_target(&fixture("atom.ptt")).unwrap(), m("a", "1"));
}

#[test]
fn request_fixtures() {
    let cases: [(&str, &[(&str, &str)]); 8] = [
        ("nested_rules.ptq", &[("x", "1"), ("w", "1")]),
        ("chinese_wall_r1.ptq", &[("employer", "A"), ("confidential", "true")]),
        ("chinese_wall_r2.ptq", &[("employer", "A"), ("employer", "B"), ("confidential", "true")]),
        ("chinese_wall_r3.ptq", &[("confidential", "false")]),
        ("chinese_wall_r4.ptq", &[("confidential", "true")]),
        ("partial_hiding.ptq", &[("n", "v"), ("n", "v'")]),
        ("ward_access.ptq", &[("role", "doctor"), ("ward", "b")]),
        ("empty.ptq", &[]),
    ];
    for (file, pairs) in cases {
        assert_eq!(parse_request(&fixture(file)).unwrap(), Request::from_pairs(pairs.iter().copied()), "{file}");
    }
}

#[test]
fn nested_rules_prints_to_golden_string() {
    assert_eq!(print_policy(&nested_rules()), fixture("nested_rules.printed").trim_end());
}
