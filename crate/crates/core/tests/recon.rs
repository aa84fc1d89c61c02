mod common;

use proptest::prelude::*;
use rigidity_core::oracle::constrained_isomorphism;
use rigidity_core::recon::{deck, deck_determines, degree_sequence_from_deck, is_k32_free, reconstruct_from_deck, reconstruct_small, ReconOutcome};
use rigidity_core::sample::{gnp_sample, random_permutation, rng_from_seed};
use rigidity_core::Graph;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn k32_freeness_matches_naive_search(n in 5usize..=12, p in 0.1f64..0.7, seed in any::<u64>()) {
        let g = gnp_sample(n, p, seed).unwrap();
        prop_assert_eq!(is_k32_free(&g), !common::naive_has_k32(&g));
    }

    #[test]
    fn degree_sequence_identity(n in 3usize..40, p in 0.0f64..0.5, seed in any::<u64>()) {
        let g = gnp_sample(n, p, seed).unwrap();
        let mut d = g.degree_sequence();
        d.sort_unstable();
        prop_assert_eq!(degree_sequence_from_deck(&deck(&g).unwrap()).unwrap(), d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn deck_is_invariant(n in 2usize..50, c in 1.0f64..8.0, seed in any::<u64>(), pseed in any::<u64>()) {
        let g = gnp_sample(n, (c / n as f64).min(1.0), seed).unwrap();
        let h = g.permute(&random_permutation(n, &mut rng_from_seed(pseed)));
        prop_assert_eq!(deck(&g).unwrap(), deck(&h).unwrap());
    }
}

#[test]
fn seven_vertex_samples_are_determined_and_agree() {
    for seed in 0..40 {
        let g = gnp_sample(7, 0.45, seed).unwrap();
        assert!(deck_determines(&g).unwrap());
        let d = deck(&g).unwrap();
        let small = reconstruct_small(&d).unwrap();
        assert!(constrained_isomorphism(&small, &g, &[]).unwrap().is_some());
        if let ReconOutcome::Success { graph, .. } = reconstruct_from_deck(&d) {
            assert!(constrained_isomorphism(&graph, &g, &[]).unwrap().is_some());
        }
    }
}

#[test]
fn successes_reproduce_the_input_deck() {
    for seed in 0..10 {
        let n = 50;
        let g = gnp_sample(n, 2.0 * (n as f64).ln() / n as f64, seed).unwrap();
        let d = deck(&g).unwrap();
        if let ReconOutcome::Success { graph, .. } = reconstruct_from_deck(&d) {
            assert_eq!(deck(&graph).unwrap(), d);
        }
    }
}

#[test]
fn synthetic_inconsistent_decks_always_fail() {
    for seed in 0..10 {
        let g = gnp_sample(30, 0.15, seed).unwrap();
        let mut d = deck(&g).unwrap();
        // replace one card by the card of a different graph with one more edge
        let mut e: Vec<_> = d.cards[0].edges.clone();
        let extra = (0..29).flat_map(|a| (a + 1..29).map(move |b| (a, b))).find(|x| !e.contains(x)).unwrap();
        e.push(extra);
        let forged = Graph::from_edges(29, e).unwrap();
        d.cards[0] = rigidity_core::recon::canonical_card(&forged).unwrap().0;
        d.cards.sort();
        assert!(matches!(reconstruct_from_deck(&d), ReconOutcome::Failure(_)));
    }
}
