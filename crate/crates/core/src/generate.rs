//! Random targets, policies and requests over a small vocabulary, for
//! property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::policies::{DecisionOp, Policy};
use crate::targets::{Request, Target};

/// Attribute names and values random trees draw from. Keeping it small
/// makes collisions between targets and requests likely.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    pub names: Vec<String>,
    pub values: Vec<String>,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Vocabulary {
            names: vec!["a".into(), "b".into(), "c".into()],
            values: vec!["1".into(), "2".into()],
        }
    }
}

impl Vocabulary {
    fn name<R: Rng + ?Sized>(&self, rng: &mut R) -> &str {
        self.names.choose(rng).expect("non-empty vocabulary")
    }

    fn value<R: Rng + ?Sized>(&self, rng: &mut R) -> &str {
        self.values.choose(rng).expect("non-empty vocabulary")
    }
}

/// Target node kinds a generator may use. Leaves are always allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TargetNodes {
    pub null: bool,
    pub name: bool,
    pub opt: bool,
    pub not: bool,
    pub and: bool,
    pub or: bool,
    pub strong_and: bool,
    pub weak_or: bool,
    pub sup: bool,
}

impl TargetNodes {
    pub const CORE: TargetNodes = TargetNodes {
        null: true,
        name: true,
        opt: true,
        not: true,
        and: true,
        or: true,
        strong_and: false,
        weak_or: false,
        sup: false,
    };

    pub const ALL: TargetNodes = TargetNodes {
        strong_and: true,
        weak_or: true,
        sup: true,
        ..TargetNodes::CORE
    };

    /// Nodes preserving weak monotonicity.
    pub const WEAK: TargetNodes = TargetNodes {
        not: false,
        strong_and: false,
        weak_or: true,
        sup: false,
        ..TargetNodes::CORE
    };

    /// Nodes preserving strong monotonicity (under all-or-nothing).
    pub const STRONG: TargetNodes = TargetNodes {
        opt: false,
        strong_and: true,
        weak_or: true,
        sup: false,
        ..TargetNodes::CORE
    };
}

pub fn random_target<R: Rng + ?Sized>(rng: &mut R, vocab: &Vocabulary, nodes: TargetNodes, depth: usize) -> Target {
    let mut unary: Vec<fn(Target) -> Target> = Vec::new();
    let mut binary: Vec<fn(Target, Target) -> Target> = Vec::new();
    if nodes.opt {
        unary.push(Target::opt);
    }
    if nodes.not {
        unary.push(Target::not);
    }
    for (on, f) in [
        (nodes.and, Target::and as fn(Target, Target) -> Target),
        (nodes.or, Target::or),
        (nodes.strong_and, Target::strong_and),
        (nodes.weak_or, Target::weak_or),
        (nodes.sup, Target::sup),
    ] {
        if on {
            binary.push(f);
        }
    }
    let inner = unary.len() + binary.len();
    if depth == 0 || inner == 0 || rng.gen_bool(0.3) {
        return random_leaf(rng, vocab, nodes);
    }
    let k = rng.gen_range(0..inner);
    if k < unary.len() {
        unary[k](random_target(rng, vocab, nodes, depth - 1))
    } else {
        let a = random_target(rng, vocab, nodes, depth - 1);
        let b = random_target(rng, vocab, nodes, depth - 1);
        binary[k - unary.len()](a, b)
    }
}

fn random_leaf<R: Rng + ?Sized>(rng: &mut R, vocab: &Vocabulary, nodes: TargetNodes) -> Target {
    match rng.gen_range(0..6) {
        0 if nodes.null => Target::Null,
        1 | 2 if nodes.name => Target::name(vocab.name(rng)),
        _ => Target::matching(vocab.name(rng), vocab.value(rng)),
    }
}

/// Policy connectives a generator may use besides `allow`, `deny` and
/// targeted policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolicyNodes {
    pub not: bool,
    pub dbd: bool,
    pub and: bool,
    /// Combined policies with any derived operator.
    pub combined: bool,
}

impl PolicyNodes {
    pub const CORE: PolicyNodes = PolicyNodes {
        not: true,
        dbd: true,
        and: true,
        combined: false,
    };
    pub const ALL: PolicyNodes = PolicyNodes {
        combined: true,
        ..PolicyNodes::CORE
    };
    pub const NOT_AND: PolicyNodes = PolicyNodes {
        dbd: false,
        ..PolicyNodes::CORE
    };
    pub const DBD_AND: PolicyNodes = PolicyNodes {
        not: false,
        ..PolicyNodes::CORE
    };
}

/// A random policy whose targets come from `target`.
pub fn random_policy<R: Rng + ?Sized>(
    rng: &mut R,
    nodes: PolicyNodes,
    depth: usize,
    target: &mut dyn FnMut(&mut R) -> Target,
) -> Policy {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..4) {
            0 => Policy::Allow,
            1 => Policy::Deny,
            2 => Policy::targeted(target(rng), Policy::Allow),
            _ => Policy::targeted(target(rng), Policy::Deny),
        };
    }
    loop {
        let next = depth - 1;
        match rng.gen_range(0..5) {
            0 => return Policy::targeted(target(rng), random_policy(rng, nodes, next, target)),
            1 if nodes.not => return Policy::not(random_policy(rng, nodes, next, target)),
            2 if nodes.dbd => return Policy::dbd(random_policy(rng, nodes, next, target)),
            3 if nodes.and => {
                let a = random_policy(rng, nodes, next, target);
                let b = random_policy(rng, nodes, next, target);
                return Policy::and(a, b);
            }
            4 if nodes.combined => {
                let op = *DecisionOp::ALL.choose(rng).expect("operators");
                let k = rng.gen_range(2..=3);
                let children = (0..k).map(|_| random_policy(rng, nodes, next, target)).collect();
                let t = if rng.gen_bool(0.5) { Target::Null } else { target(rng) };
                return Policy::combined(t, op, children).expect("at least two children");
            }
            _ => {}
        }
    }
}

/// A request of up to `max_pairs` pairs drawn from the vocabulary.
pub fn random_request<R: Rng + ?Sized>(rng: &mut R, vocab: &Vocabulary, max_pairs: usize) -> Request {
    let n = rng.gen_range(0..=max_pairs);
    Request::from_pairs((0..n).map(|_| (vocab.name(rng).to_owned(), vocab.value(rng).to_owned())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn respects_node_sets() {
        let mut rng = StdRng::seed_from_u64(7);
        let vocab = Vocabulary::default();
        for _ in 0..200 {
            let t = random_target(&mut rng, &vocab, TargetNodes::CORE, 3);
            assert!(t.depth() <= 3);
            assert!(!matches!(t, Target::StrongAnd(..) | Target::WeakOr(..) | Target::Sup(..)));
            let p = random_policy(&mut rng, PolicyNodes::CORE, 3, &mut |r| {
                random_target(r, &vocab, TargetNodes::CORE, 2)
            });
            assert!(!matches!(p, Policy::Combined(_)));
        }
    }
}
