mod common;

use std::collections::BTreeMap;

use rigidity_core::trees::{free_tree_code, rooted_tree_code};
use rigidity_core::Graph;

use common::{all_labeled_trees, brute_isomorphisms};

fn rooted_iso(a: &Graph, ra: usize, b: &Graph, rb: usize) -> bool {
    !brute_isomorphisms(a, b, &[(ra, rb)], 1).is_empty()
}

#[test]
fn rooted_codes_classify_small_trees() {
    let expected = [1, 1, 2, 4, 9, 20];
    for (i, &count) in expected.iter().enumerate() {
        let n = i + 1;
        let mut classes: BTreeMap<String, (Graph, usize)> = BTreeMap::new();
        for t in all_labeled_trees(n) {
            for r in 0..n {
                let code = rooted_tree_code(&t, r).unwrap().code;
                let (rep, rr) = classes.entry(code).or_insert_with(|| (t.clone(), r));
                assert!(rooted_iso(&t, r, rep, *rr));
            }
        }
        assert_eq!(classes.len(), count, "n = {n}");
        let reps: Vec<_> = classes.values().collect();
        for (x, a) in reps.iter().enumerate() {
            for b in &reps[x + 1..] {
                assert!(!rooted_iso(&a.0, a.1, &b.0, b.1));
            }
        }
    }
}

#[test]
fn free_codes_count_small_trees() {
    let expected = [1, 1, 1, 2, 3, 6, 11];
    for (i, &count) in expected.iter().enumerate() {
        let n = i + 1;
        let codes: std::collections::BTreeSet<String> =
            all_labeled_trees(n).iter().map(|t| free_tree_code(t).unwrap().code).collect();
        assert_eq!(codes.len(), count, "n = {n}");
    }
}

#[test]
fn positions_are_a_preorder() {
    for t in all_labeled_trees(6) {
        let c = free_tree_code(&t).unwrap();
        let mut p = c.position.clone();
        p.sort_unstable();
        assert!(p.into_iter().eq(0..6));
        assert_eq!(c.position[c.root], 0);
    }
}
