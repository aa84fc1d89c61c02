mod common;

use proptest::prelude::*;
use rigidity_core::signature::{approx_equal, IntMultiset};

fn multiset(max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=12, 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn approx_equal_matches_reach_sets(a in multiset(6), b in multiset(6)) {
        let expect = common::reach_equal(&a, &b);
        prop_assert_eq!(approx_equal(&IntMultiset::new(a), &IntMultiset::new(b)), expect);
    }

    #[test]
    fn approx_equal_matches_on_near_pairs(a in multiset(7), edits in prop::collection::vec((0usize..8, 0u32..4), 0..5)) {
        let mut b = a.clone();
        for (i, d) in edits {
            if b.is_empty() {
                break;
            }
            let i = i % b.len();
            if d == 3 {
                b.remove(i);
            } else {
                b[i] = b[i].saturating_sub(d) + u32::from(d == 0);
            }
        }
        let expect = common::reach_equal(&a, &b);
        prop_assert_eq!(approx_equal(&IntMultiset::new(a), &IntMultiset::new(b)), expect);
    }
}
