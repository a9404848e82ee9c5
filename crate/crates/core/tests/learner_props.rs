mod common;

use std::collections::BTreeSet;

use common::*;
use dmono::families::{random_antichain, random_composed};
use dmono::{
    consistent, learn, BoolFn, ComposedTarget, Elem, ExhaustiveEq, LabeledSample, MembershipOracle,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check_run(target: &ComposedTarget, d: usize) {
    let l = target.lattice();
    let mut mq = MembershipOracle::for_target(target);
    let mut eq = ExhaustiveEq::new(target);
    let out = learn(l, d, &mut mq, &mut eq).unwrap();
    let sigma = l.sigma();
    let stats = out.stats.clone().with_bounds(&target.inner_sizes(), sigma);

    assert_eq!(out.hypothesis.to_dense(), target.to_dense());
    assert!(stats.within_bounds(), "{stats:?}");
    assert_eq!(stats.eq_used, stats.counterexamples + 1);
    assert!(stats.max_descent_inspections as u64 <= sigma);
    assert!(stats.mq_used as u64 <= sigma * stats.counterexamples as u64);
    assert!(out.trace.iter().all(|t| t.inspections as u64 <= sigma));

    let sets: Vec<Vec<Elem>> = target
        .inner()
        .iter()
        .map(|g| g.minimals().to_vec())
        .collect();
    let span = brute_join_span(l, &sets);
    assert!(out.sample.points().all(|(x, _)| span.contains(&x)));

    // every prefix of the collected points yields a hypothesis fitting it
    let mut prefix = LabeledSample::default();
    let mut seen = BTreeSet::new();
    for t in &out.trace {
        assert!(seen.insert(t.point), "point collected twice");
        assert_eq!(t.label, target.eval(t.point));
        prefix.insert(t.point, t.label);
        let h = consistent(l, d, &prefix).unwrap();
        assert!(prefix.points().all(|(x, v)| h.eval(x) == v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn learner_is_exact_and_bounded(d in 1usize..=3, n in 2u32..=8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sizes: Vec<usize> = (0..d).map(|_| rng.gen_range(1..=3)).collect();
        if let Ok(inst) = random_composed(n, &sizes, seed) {
            check_run(&inst.target, d);
        }
    }
}

#[test]
fn monotone_targets_take_size_counterexamples() {
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = rng.gen_range(1..=6);
        let inst = match random_composed(8, &[size], seed) {
            Ok(inst) => inst,
            Err(_) => continue,
        };
        // F = identity makes the target the monotone g_1 itself
        let g = inst.target.inner()[0].clone();
        let target =
            ComposedTarget::new(inst.lattice().clone(), vec![false, true], vec![g]).unwrap();
        let mut mq = MembershipOracle::for_target(&target);
        let mut eq = ExhaustiveEq::new(&target);
        let out = learn(inst.lattice(), 1, &mut mq, &mut eq).unwrap();
        assert_eq!(out.stats.counterexamples, size);
        assert_eq!(out.hypothesis.levels(), target.inner());
    }
}

#[test]
fn learns_on_explicit_lattices() {
    for l in explicit_lattices() {
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = rng.gen_range(1..=3);
            let inner = (0..d)
                .map(|_| random_antichain(&l, 1, &mut rng).unwrap())
                .collect::<Vec<_>>();
            let mut outer: Vec<bool> = (0..1 << d).map(|_| rng.gen()).collect();
            outer[0] = false;
            let target = ComposedTarget::new(l.clone(), outer, inner).unwrap();
            check_run(&target, d);
        }
    }
}
