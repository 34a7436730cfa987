#![allow(dead_code)]

use ptacl_core::generate::{random_policy, random_target, PolicyNodes, TargetNodes, Vocabulary};
use ptacl_core::{Policy, Target};
use rand::rngs::StdRng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn target(seed: u64, nodes: TargetNodes, depth: usize) -> Target {
    random_target(&mut rng(seed), &Vocabulary::default(), nodes, depth)
}

pub fn policy(seed: u64, nodes: PolicyNodes, targets: TargetNodes, depth: usize) -> Policy {
    let vocab = Vocabulary::default();
    random_policy(&mut rng(seed), nodes, depth, &mut |r| random_target(r, &vocab, targets, 2))
}
