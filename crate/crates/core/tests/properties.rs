use proptest::prelude::*;

use markov_binning::binning::{estimate_distributions, EpsilonGraph};
use markov_binning::chernoff::{boundary_coefficients, chernoff_information};
use markov_binning::markov::{
    conditional_entropy, conditional_relative_entropy, context_divergence, context_entropy, empirical_type, joint_divergence,
    joint_entropy, Alphabet, Contig, JointDistribution, MarkovModel,
};
use markov_binning::rng::stream;
use markov_binning::simulator::{random_model, sample_sequence};

fn alphabet(k: usize) -> Alphabet {
    if k == 2 { Alphabet::binary() } else { Alphabet::dna() }
}

fn model(order: usize, k: usize, seed: u64) -> MarkovModel {
    random_model(order, &alphabet(k), 0.01, &mut stream(seed, 0)).unwrap()
}

fn shapes() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![(1usize..=3).prop_map(|m| (m, 2)), (1usize..=2).prop_map(|m| (m, 4))]
}

fn random_type(order: usize, k: usize, len: usize, seed: u64) -> JointDistribution {
    let mut r = stream(seed, 1);
    let a = alphabet(k);
    let symbols: Vec<u8> = (0..len).map(|_| rand::Rng::gen_range(&mut r, 0..k as u8)).collect();
    empirical_type(&Contig::new(symbols, &a, None).unwrap(), order, &a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divergence_and_entropy_decompose((order, k) in shapes(), s1: u64, s2: u64) {
        let (p, q) = (model(order, k, s1), model(order, k, s2));
        let dc = conditional_relative_entropy(p.joint(), q.joint());
        prop_assert!((dc - (joint_divergence(p.joint(), q.joint()) - context_divergence(p.joint(), q.joint()))).abs() < 1e-10);
        prop_assert!((conditional_entropy(p.joint()) - (joint_entropy(p.joint()) - context_entropy(p.joint()))).abs() < 1e-10);
        prop_assert!(dc >= -1e-12);
        prop_assert!(conditional_relative_entropy(p.joint(), p.joint()).abs() < 1e-12);
    }

    #[test]
    fn divergence_is_convex_in_its_first_argument((order, k) in shapes(), s1: u64, s2: u64, s3: u64, w in 0.0f64..1.0) {
        let (a, b, q) = (model(order, k, s1), model(order, k, s2), model(order, k, s3));
        let mixed = a.joint().mix(b.joint(), w);
        let lhs = conditional_relative_entropy(&mixed, q.joint());
        let rhs = w * conditional_relative_entropy(a.joint(), q.joint()) + (1.0 - w) * conditional_relative_entropy(b.joint(), q.joint());
        prop_assert!(lhs <= rhs + 1e-10);
    }

    #[test]
    fn cyclic_types_are_exactly_consistent((order, k) in shapes(), len in 4usize..200, seed: u64) {
        let t = random_type(order, k, len.max(order + 1), seed);
        prop_assert!(t.consistency_gap() < 1e-12);
        prop_assert!((t.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_likelihood_ratio_is_linear_in_the_type((order, k) in shapes(), s1: u64, s2: u64, seed: u64) {
        let (p1, p2) = (model(order, k, s1), model(order, k, s2));
        let r = boundary_coefficients(&p1, &p2);
        let t = random_type(order, k, 64, seed);
        let lhs = conditional_relative_entropy(&t, p1.joint()) - conditional_relative_entropy(&t, p2.joint());
        let rhs: f64 = r.iter().zip(t.probs()).map(|(a, b)| a * b).sum();
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn decision_regions_are_convex(s1: u64, s2: u64, a: u64, b: u64, w in 0.0f64..1.0) {
        let (p1, p2) = (model(1, 2, s1), model(1, 2, s2));
        let (ta, tb) = (random_type(1, 2, 40, a), random_type(1, 2, 40, b));
        let first = |t: &JointDistribution| {
            conditional_relative_entropy(t, p1.joint()) <= conditional_relative_entropy(t, p2.joint())
        };
        if first(&ta) && first(&tb) {
            let d1 = conditional_relative_entropy(&ta.mix(&tb, w), p1.joint());
            let d2 = conditional_relative_entropy(&ta.mix(&tb, w), p2.joint());
            prop_assert!(d1 <= d2 + 1e-10);
        }
    }

    #[test]
    fn models_round_trip_through_json((order, k) in shapes(), seed: u64) {
        let m = model(order, k, seed);
        let text = serde_json::to_string(&m).unwrap();
        let back: MarkovModel = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn edges_only_appear_as_epsilon_grows(seed: u64, e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
        let types: Vec<_> = (0..24).map(|i| random_type(1, 2, 30, seed.wrapping_add(i))).collect();
        let (lo, hi) = (e1.min(e2), e1.max(e2));
        let (g_lo, g_hi) = (EpsilonGraph::build(&types, lo), EpsilonGraph::build(&types, hi));
        for i in 0..types.len() {
            for j in 0..types.len() {
                prop_assert!(!g_lo.has_edge(i, j) || g_hi.has_edge(i, j));
            }
        }
    }

    #[test]
    fn clique_means_stay_consistent(seed: u64, size in 1usize..10) {
        let types: Vec<_> = (0..10).map(|i| random_type(2, 2, 25, seed.wrapping_add(i))).collect();
        let est = estimate_distributions(&[(0..size).collect()], &types).unwrap();
        prop_assert!(est[0].consistency_gap() < 1e-12);
    }

    #[test]
    fn chernoff_is_symmetric_and_below_both_divergences(s1: u64, s2: u64) {
        let (p1, p2) = (model(1, 2, s1), model(1, 2, s2));
        let c12 = chernoff_information(&p1, &p2, 1e-10).unwrap();
        let c21 = chernoff_information(&p2, &p1, 1e-10).unwrap();
        prop_assert!((c12.value - c21.value).abs() < 1e-7);
        let d12 = conditional_relative_entropy(p1.joint(), p2.joint());
        let d21 = conditional_relative_entropy(p2.joint(), p1.joint());
        prop_assert!(c12.value <= d12.min(d21) + 1e-9);
        prop_assert!(c12.constraint_gap < 1e-8);
    }

    #[test]
    fn seeded_sampling_is_reproducible((order, k) in shapes(), seed: u64) {
        let m = model(order, k, seed);
        let a = sample_sequence(&m, 100, &mut stream(seed, 7)).unwrap();
        let b = sample_sequence(&m, 100, &mut stream(seed, 7)).unwrap();
        prop_assert_eq!(a, b);
    }
}
