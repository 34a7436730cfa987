use criterion::{black_box, criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use ptacl_core::generate::{random_policy, random_request, random_target, PolicyNodes, TargetNodes, Vocabulary};
use ptacl_core::policies::{eval_list_fold, eval_nary_fast, naive_product, DecisionSet};
use ptacl_core::{
    eval_policy, eval_target, find_hiding_attacks, parse_policy, print_policy, DecisionOp, Policy, Request,
    SubRequestMode, Target,
};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn vocab() -> Vocabulary {
    Vocabulary {
        names: ["a", "b", "c", "d", "e"].map(String::from).to_vec(),
        values: ["1", "2", "3"].map(String::from).to_vec(),
    }
}

fn policy(rng: &mut StdRng, depth: usize) -> Policy {
    let vocab = vocab();
    random_policy(rng, PolicyNodes::ALL, depth, &mut |r| random_target(r, &vocab, TargetNodes::ALL, 3))
}

fn targets(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(1);
    let vocab = vocab();
    let cases: Vec<(Target, Request)> = (0..64)
        .map(|_| (random_target(&mut rng, &vocab, TargetNodes::ALL, 5), random_request(&mut rng, &vocab, 8)))
        .collect();
    c.bench_function("eval_target/depth5x64", |b| {
        b.iter(|| for (t, q) in &cases { black_box(eval_target(t, q)); })
    });
}

fn policies(c: &mut Criterion) {
    let mut group = c.benchmark_group("eval_policy");
    for depth in [2, 4, 6] {
        let mut rng = StdRng::seed_from_u64(depth as u64);
        let cases: Vec<(Policy, Request)> =
            (0..32).map(|_| (policy(&mut rng, depth), random_request(&mut rng, &vocab(), 8))).collect();
        group.bench_with_input(BenchmarkId::from_parameter(depth), &cases, |b, cases| {
            b.iter(|| for (p, q) in cases { black_box(eval_policy(p, q)); })
        });
    }
    group.finish();
}

fn nary(c: &mut Criterion) {
    let sets: Vec<DecisionSet> = DecisionSet::all().collect();
    let mut group = c.benchmark_group("combine");
    for k in [2usize, 4, 6] {
        let tuple: Vec<DecisionSet> = (0..k).map(|i| sets[(i * 3 + 6) % sets.len()]).collect();
        let op = DecisionOp::AndCup;
        group.bench_with_input(BenchmarkId::new("fast", k), &tuple, |b, t| b.iter(|| eval_nary_fast(op, black_box(t))));
        group.bench_with_input(BenchmarkId::new("fold", k), &tuple, |b, t| b.iter(|| eval_list_fold(op, black_box(t))));
        group.bench_with_input(BenchmarkId::new("product", k), &tuple, |b, t| {
            b.iter(|| naive_product(op, black_box(t), 16))
        });
    }
    group.finish();
}

fn hiding(c: &mut Criterion) {
    let p = parse_policy("allow and_cup {(n = v) ? deny}").unwrap();
    let mut group = c.benchmark_group("hiding");
    for n in [4, 8, 10] {
        let q = Request::from_pairs((0..n).map(|i| ("n".to_string(), if i == 0 { "v".to_string() } else { format!("w{i}") })));
        for mode in [SubRequestMode::ArbitrarySubset, SubRequestMode::AllOrNothing] {
            group.bench_with_input(BenchmarkId::new(mode.to_string(), n), &q, |b, q| {
                b.iter(|| find_hiding_attacks(&p, q, mode, 12).unwrap())
            });
        }
    }
    group.finish();
}

fn parsing(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(9);
    let text = print_policy(&policy(&mut rng, 6));
    c.bench_function("parse_policy/depth6", |b| {
        b.iter_batched(|| text.clone(), |t| parse_policy(&t).unwrap(), BatchSize::SmallInput)
    });
}

criterion_group!(benches, targets, policies, nary, hiding, parsing);
criterion_main!(benches);
