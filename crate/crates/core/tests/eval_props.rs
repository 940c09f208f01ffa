use mcor::eval::{next_item_supports, score_from_supports, score_recommendations, split_db};
use mcor::matcher::db_support;
use mcor::{GapConstraint, Item, Pattern, SequenceDatabase};
use proptest::prelude::*;

fn in_unit(x: Option<f64>) -> bool {
    x.is_none_or(|v| (0.0..=1.0).contains(&v))
}

proptest! {
    #[test]
    fn next_item_mass_is_partitioned(
        lines in prop::collection::vec("[a-e]{1,12}", 1..8),
        rec in prop::collection::btree_set("[a-f]", 0..4),
        b in 0u32..3,
    ) {
        let test = SequenceDatabase::from_char_lines(lines.iter().map(String::as_str));
        let p = Pattern::from_chars("a", GapConstraint::new(0, b).unwrap()).unwrap();
        let recommended: Vec<Item> = rec.iter().map(|s| Item::new(s).unwrap()).collect();
        let supports = next_item_supports(&test.index(), &p);
        let total: usize = supports.iter().map(|(_, s)| s).sum();
        let score = score_from_supports(&recommended, &supports);
        prop_assert_eq!(score.tp + score.false_negatives, total);
        prop_assert!(score.fp <= recommended.len());
        prop_assert!(in_unit(score.precision) && in_unit(score.recall) && in_unit(score.f1));

        let full = score_recommendations(&recommended, &test, &p);
        if db_support(&test.index(), &p) == 0 {
            prop_assert_eq!((full.tp, full.fp, full.false_negatives), (0, 0, 0));
        } else {
            prop_assert_eq!(full, score);
        }
    }

    #[test]
    fn split_keeps_order_and_sizes(k in 0usize..50, f in 0.01f64..0.99) {
        let lines: Vec<String> = (0..k).map(|i| "ab".repeat(i % 3 + 1)).collect();
        let db = SequenceDatabase::from_char_lines(lines.iter().map(String::as_str));
        let (train, test) = split_db(&db, f).unwrap();
        prop_assert_eq!(train.len() + test.len(), k);
        prop_assert!(train.len() <= k);
        prop_assert!((train.len() as f64) <= k as f64 * f + 1e-6);
        let joined: Vec<_> = train.sequences().iter().chain(test.sequences()).map(|s| s.id.clone()).collect();
        let orig: Vec<_> = db.sequences().iter().map(|s| s.id.clone()).collect();
        prop_assert_eq!(joined, orig);
    }
}
