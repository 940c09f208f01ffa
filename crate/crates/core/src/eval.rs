//! Next-item recommendation evaluation: ordered train/test split, items
//! recommended by mined rules, and precision/recall/F1 on the test part.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matcher::db_support;
use crate::miner::{MiningReport, Rule};
use crate::seqdb::{IndexedDatabase, Item, Pattern, SequenceDatabase};

/// Split into the first `⌊k·train_fraction⌋` sequences and the rest.
pub fn split_db(
    db: &SequenceDatabase,
    train_fraction: f64,
) -> Result<(SequenceDatabase, SequenceDatabase)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::param(format!(
            "train fraction must be in (0,1), got {train_fraction}"
        )));
    }
    let k = db.len();
    // Small slack so that e.g. 100 × 0.29 lands on 29 and not 28.
    let cut = ((k as f64 * train_fraction) + 1e-9).floor() as usize;
    let cut = cut.min(k);
    let seqs = db.sequences();
    Ok((
        SequenceDatabase::new(seqs[..cut].to_vec()),
        SequenceDatabase::new(seqs[cut..].to_vec()),
    ))
}

/// First consequent item of every rule, deduplicated, in alphabet order.
pub fn recommend_from_rules(rules: &[Rule]) -> Vec<Item> {
    rules
        .iter()
        .filter_map(|r| r.consequent.first().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

pub fn recommend_items(report: &MiningReport) -> Vec<Item> {
    recommend_from_rules(&report.rules)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RecommendationScore {
    /// Sum of test supports of recommended next items.
    pub tp: usize,
    /// Number of recommended items never seen after the prefix in the test set.
    pub fp: usize,
    /// Sum of test supports of observed next items that were not recommended.
    pub false_negatives: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

impl RecommendationScore {
    pub fn from_counts(tp: usize, fp: usize, false_negatives: usize) -> Self {
        let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + false_negatives);
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            _ => None,
        };
        RecommendationScore {
            tp,
            fp,
            false_negatives,
            precision,
            recall,
            f1,
        }
    }
}

/// Score against precomputed next-item supports `s_y`.
pub fn score_from_supports(recommended: &[Item], next_supports: &[(Item, usize)]) -> RecommendationScore {
    let rec: BTreeSet<&Item> = recommended.iter().collect();
    let mut tp = 0;
    let mut fn_ = 0;
    for (y, s) in next_supports {
        if rec.contains(y) {
            tp += s;
        } else {
            fn_ += s;
        }
    }
    let fp = rec
        .iter()
        .filter(|y| {
            next_supports
                .iter()
                .find(|(x, _)| x == **y)
                .map_or(0, |(_, s)| *s)
                == 0
        })
        .count();
    RecommendationScore::from_counts(tp, fp, fn_)
}

/// `s_y = sup(p·y, test)` for every item `y` of the test alphabet.
pub fn next_item_supports(test: &IndexedDatabase, prefix: &Pattern) -> Vec<(Item, usize)> {
    test.alphabet()
        .items()
        .iter()
        .map(|y| (y.clone(), db_support(test, &prefix.extended(std::slice::from_ref(y)))))
        .collect()
}

/// Score `recommended` on `test` using the prefix's gap. When the prefix
/// never occurs in `test` there is nothing to recommend for, and every count
/// is zero with all metrics undefined.
pub fn score_recommendations(
    recommended: &[Item],
    test: &SequenceDatabase,
    prefix: &Pattern,
) -> RecommendationScore {
    let idx = test.index();
    if db_support(&idx, prefix) == 0 {
        return RecommendationScore::from_counts(0, 0, 0);
    }
    score_from_supports(recommended, &next_item_supports(&idx, prefix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqdb::GapConstraint;

    fn items(s: &str) -> Vec<Item> {
        s.chars().map(Item::from).collect()
    }

    fn gamesale_supports() -> Vec<(Item, usize)> {
        [("a", 110), ("b", 108), ("d", 139), ("e", 281), ("j", 126), ("k", 83)]
            .iter()
            .map(|(c, s)| (Item::new(c).unwrap(), *s))
            .collect()
    }

    fn fmt4(x: Option<f64>) -> String {
        format!("{:.4}", x.unwrap())
    }

    #[test]
    fn split_sizes() {
        let db = |k: usize| SequenceDatabase::from_char_lines(vec!["ab"; k]);
        for (k, train) in [(10, 8), (5, 4), (1, 0), (0, 0), (100, 80)] {
            let (a, b) = split_db(&db(k), 0.8).unwrap();
            assert_eq!((a.len(), b.len()), (train, k - train));
        }
        let (a, _) = split_db(&db(100), 0.29).unwrap();
        assert_eq!(a.len(), 29);
        for bad in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(split_db(&db(3), bad).unwrap_err().is_parameter());
        }
    }

    #[test]
    fn split_preserves_order() {
        let db = SequenceDatabase::from_char_lines(["a", "b", "c", "d", "e"]);
        let (tr, te) = split_db(&db, 0.6).unwrap();
        assert_eq!(tr.sequences()[2].id, db.sequences()[2].id);
        assert_eq!(te.sequences()[0].items, items("d"));
    }

    #[test]
    fn worked_example_arithmetic() {
        let s = score_from_supports(&items("de"), &gamesale_supports());
        assert_eq!((s.tp, s.fp, s.false_negatives), (420, 0, 427));
        assert_eq!(fmt4(s.precision), "1.0000");
        assert_eq!(fmt4(s.recall), "0.4959");
        assert_eq!(fmt4(s.f1), "0.6630");
    }

    #[test]
    fn empty_and_full_recommendations() {
        let s = score_from_supports(&[], &gamesale_supports());
        assert_eq!((s.tp, s.fp), (0, 0));
        assert_eq!(s.recall, Some(0.0));
        assert_eq!(s.precision, None);
        assert_eq!(s.f1, None);

        let s = score_from_supports(&items("abdejk"), &gamesale_supports());
        assert_eq!(s.false_negatives, 0);
        assert_eq!(s.recall, Some(1.0));
    }

    #[test]
    fn unseen_recommendation_is_false_positive() {
        let s = score_from_supports(&items("dz"), &gamesale_supports());
        assert_eq!((s.tp, s.fp), (139, 1));
    }

    #[test]
    fn first_items_of_consequents() {
        let gap = GapConstraint::new(0, 3).unwrap();
        let rule = |ante: &str, cons: &str| Rule {
            antecedent: Pattern::from_chars(ante, gap).unwrap(),
            consequent: items(cons),
            support: 1,
            confidence: 1.0,
        };
        assert_eq!(recommend_from_rules(&[rule("d", "e"), rule("d", "d")]), items("de"));
        assert_eq!(recommend_from_rules(&[rule("ad", "cd"), rule("ad", "dd")]), items("cd"));
        assert!(recommend_from_rules(&[]).is_empty());
    }

    #[test]
    fn supports_from_test_database() {
        let gap = GapConstraint::new(0, 0).unwrap();
        let test = SequenceDatabase::from_char_lines(["de", "de", "da", "xy"]);
        let p = Pattern::from_chars("d", gap).unwrap();
        let s = score_recommendations(&items("e"), &test, &p);
        assert_eq!((s.tp, s.fp, s.false_negatives), (2, 0, 1));

        let none = score_recommendations(&items("e"), &SequenceDatabase::from_char_lines(["xy"]), &p);
        assert_eq!((none.tp, none.fp, none.false_negatives), (0, 0, 0));
        assert_eq!((none.precision, none.recall, none.f1), (None, None, None));
    }
}
