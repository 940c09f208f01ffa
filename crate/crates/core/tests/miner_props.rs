use mcor::candgen::{extend, frequent_items, frequent_pairs, Strategy as Cand};
use mcor::matcher::{db_support, db_support_symbols};
use mcor::prep::sdb_filt;
use mcor::verify::{check_miner_case, check_strategy_invariance, MinerCase};
use mcor::{mine_mcor, GapConstraint, MinerConfig, Pattern};
use proptest::prelude::*;

fn miner_case() -> impl Strategy<Value = MinerCase> {
    (2usize..=4)
        .prop_flat_map(|sigma| {
            let class = format!("[{}]", &"abcd"[..sigma]);
            (
                prop::collection::vec(proptest::string::string_regex(&format!("{class}{{1,15}}")).unwrap(), 1..=5),
                proptest::string::string_regex(&format!("{class}{{1,2}}")).unwrap(),
                (0u32..=2).prop_flat_map(|b| (0..=b, Just(b))),
                prop::sample::select(vec![0.5, 0.7]),
            )
        })
        .prop_map(|(sequences, prefix, (a, b), mincf)| MinerCase {
            sequences,
            prefix,
            gap: GapConstraint::new(a, b).unwrap(),
            mincf,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn miner_matches_oracle(case in miner_case()) {
        prop_assert_eq!(check_miner_case(&case), Ok(()));
    }

    #[test]
    fn configurations_agree(case in miner_case()) {
        prop_assert_eq!(check_strategy_invariance(&case), Ok(()));
    }

    #[test]
    fn rules_are_strong_maximal_and_prefix_closed(case in miner_case()) {
        let idx = case.database().index();
        let p = case.pattern();
        let r = mine_mcor(&idx, &p, case.mincf, &MinerConfig::default()).unwrap();
        for rule in &r.rules {
            let conf = rule.support as f64 / r.prefix_support as f64;
            prop_assert_eq!(rule.confidence, conf);
            prop_assert!(rule.confidence >= case.mincf && rule.confidence <= 1.0);
            let full = p.extended(&rule.consequent);
            prop_assert_eq!(db_support(&idx, &full), rule.support);
            // Every pattern between the prefix and the rule's pattern is frequent.
            for k in p.len()..full.len() {
                let q = Pattern::new(full.items()[..k].to_vec(), p.gap()).unwrap();
                prop_assert!(db_support(&idx, &q) as f64 >= r.minsup);
            }
            // No one-item extension is frequent.
            for y in idx.alphabet().items() {
                prop_assert!((db_support(&idx, &full.extended(std::slice::from_ref(y))) as f64) < r.minsup);
            }
        }
        for a in &r.rules {
            for b in &r.rules {
                if a != b {
                    prop_assert!(!b.consequent.starts_with(&a.consequent));
                }
            }
        }
        if r.rules.is_empty() && r.prefix_support > 0 {
            prop_assert!(r.antecedent_is_maximal);
        }
    }

    #[test]
    fn counters_are_consistent(case in miner_case()) {
        let db = case.database();
        let idx = db.index();
        let r = mine_mcor(&idx, &case.pattern(), case.mincf, &MinerConfig::default()).unwrap();
        let c = &r.counters;
        if !r.zero_prefix_support {
            prop_assert_eq!(c.kept_sequences + c.filtered_sequences, db.len());
            prop_assert_eq!(c.kept_positions + c.filtered_positions, db.total_len());
            prop_assert_eq!(c.frequent_patterns, r.cor_count + 1);
            prop_assert!(c.frequent_items <= c.all_items);
            prop_assert!(c.bet_pairs <= c.frequent_items * c.frequent_items);
        }
        prop_assert_eq!(c.candidates_generated, c.candidates_pruned_by_bet + c.candidates_not_pruned);
    }

    #[test]
    fn filtering_preserves_supports(case in miner_case(), suffix in "[a-d]{0,3}") {
        let idx = case.database().index();
        let p = case.pattern();
        let prep = sdb_filt(&idx, &p, case.mincf).unwrap();
        prop_assert_eq!(prep.sup_p, db_support(&idx, &p));
        prop_assert_eq!(prep.minsup, prep.sup_p as f64 * case.mincf);
        let q = Pattern::from_chars(&format!("{}{suffix}", case.prefix), case.gap).unwrap();
        prop_assert_eq!(db_support(&prep.shrunk, &q), db_support(&idx, &q));
    }

    #[test]
    fn candidate_sets_nest_and_are_complete(case in miner_case(), minsup in 1.0f64..6.0) {
        let idx = case.database().index();
        let alphabet = idx.alphabet();
        let Some(q) = alphabet.resolve(case.pattern().items()) else { return Ok(()); };
        let f1 = frequent_items(&idx, minsup);
        let f2 = frequent_pairs(&idx, &f1, case.gap, minsup);
        let aet = extend(&q, &f1, &f2, Cand::Aet, alphabet);
        let fet = extend(&q, &f1, &f2, Cand::Fet, alphabet);
        let bet = extend(&q, &f1, &f2, Cand::Bet, alphabet);
        prop_assert!(bet.iter().all(|c| fet.contains(c)));
        prop_assert!(fet.iter().all(|c| aet.contains(c)));
        prop_assert_eq!(aet.len(), alphabet.len());
        for c in &aet {
            if db_support_symbols(&idx, c, case.gap, false) as f64 >= minsup {
                prop_assert!(bet.contains(c), "frequent extension pruned");
            }
        }
    }

    #[test]
    fn rule_count_shrinks_as_confidence_grows(case in miner_case()) {
        let idx = case.database().index();
        let p = case.pattern();
        let run = |c: f64| mine_mcor(&idx, &p, c, &MinerConfig::default()).unwrap();
        let (lo, hi) = (run(0.3), run(case.mincf));
        prop_assert!(hi.cor_count <= lo.cor_count);
        prop_assert!(hi.mcor_count() <= lo.mcor_count());
    }
}
