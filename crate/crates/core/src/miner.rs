//! Maximal co-occurrence rule mining.
//!
//! A stack of frequent patterns is grown depth-first from the antecedent.
//! Each popped pattern `q` is extended by one item per the candidate
//! strategy; frequent extensions are pushed. With screening, `q` is maximal
//! exactly when none of its extensions is frequent. Without screening all
//! frequent patterns are collected first and the maximal ones are found
//! afterwards. CoP-Miner runs the same loop with an absolute support
//! threshold and keeps every frequent pattern.

use std::borrow::Cow;
use std::collections::HashSet;

use crate::candgen::{extension_items, frequent_items, frequent_pairs_with, FrequentItems, FrequentPairs, Strategy};
use crate::error::{Error, Result};
use crate::matcher::db_support_symbols;
use crate::prep::{check_mincf, filter_sequences, per_sequence_support};
use crate::seqdb::{Alphabet, GapConstraint, IndexedDatabase, Item, Pattern, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinerConfig {
    pub strategy: Strategy,
    pub filtering: bool,
    pub screening: bool,
    /// Scan sequences on the current rayon pool.
    pub parallel: bool,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            strategy: Strategy::Bet,
            filtering: true,
            screening: true,
            parallel: false,
        }
    }
}

impl MinerConfig {
    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_filtering(mut self, on: bool) -> Self {
        self.filtering = on;
        self
    }

    pub fn with_screening(mut self, on: bool) -> Self {
        self.screening = on;
        self
    }

    pub fn with_parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }
}

/// `antecedent → consequent`
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub antecedent: Pattern,
    pub consequent: Vec<Item>,
    /// `sup(antecedent · consequent, D)`
    pub support: usize,
    /// `support / sup(antecedent, D)`
    pub confidence: f64,
}

/// Diagnostic counters of one mining run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub filtered_sequences: usize,
    pub kept_sequences: usize,
    pub filtered_positions: usize,
    pub kept_positions: usize,
    pub all_items: usize,
    pub frequent_items: usize,
    pub bet_pairs: usize,
    /// Extensions generated before the pair test (|F1| per expanded pattern
    /// under FET/BET, |Σ| under AET).
    pub candidates_generated: usize,
    pub candidates_pruned_by_bet: usize,
    /// Candidates whose support was computed.
    pub candidates_not_pruned: usize,
    pub frequent_patterns: usize,
    /// Pattern supports computed over a whole (working) database.
    pub support_calls: usize,
    /// Sequence positions covered by those support computations.
    pub scanned_positions: usize,
}

impl Counters {
    /// Name/value pairs in a fixed order, for reporting.
    pub fn entries(&self) -> [(&'static str, usize); 13] {
        [
            ("filtered_sequences", self.filtered_sequences),
            ("kept_sequences", self.kept_sequences),
            ("filtered_positions", self.filtered_positions),
            ("kept_positions", self.kept_positions),
            ("all_items", self.all_items),
            ("frequent_items", self.frequent_items),
            ("bet_pairs", self.bet_pairs),
            ("candidates_generated", self.candidates_generated),
            ("candidates_pruned_by_bet", self.candidates_pruned_by_bet),
            ("candidates_not_pruned", self.candidates_not_pruned),
            ("frequent_patterns", self.frequent_patterns),
            ("support_calls", self.support_calls),
            ("scanned_positions", self.scanned_positions),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MiningReport {
    pub prefix: Pattern,
    pub prefix_support: usize,
    pub minsup: f64,
    /// MCoRs, sorted by consequent.
    pub rules: Vec<Rule>,
    /// Maximal co-occurrence patterns with their supports, sorted.
    pub maximal_patterns: Vec<(Pattern, usize)>,
    /// Strong co-occurrence rules seen (frequent proper extensions of the prefix).
    pub cor_count: usize,
    pub counters: Counters,
    pub antecedent_is_maximal: bool,
    /// The prefix does not occur at all; nothing was mined.
    pub zero_prefix_support: bool,
}

impl MiningReport {
    pub fn mcor_count(&self) -> usize {
        self.rules.len()
    }
}

/// Result of CoP-Miner: every frequent pattern with the given prefix.
#[derive(Clone, Debug, PartialEq)]
pub struct CopReport {
    pub prefix: Pattern,
    pub prefix_support: usize,
    pub minsup: f64,
    /// Sorted; includes the prefix itself when frequent.
    pub patterns: Vec<(Pattern, usize)>,
    pub counters: Counters,
}

impl CopReport {
    /// Co-occurrence rules `p → r` for every frequent proper extension.
    pub fn rules(&self) -> Vec<Rule> {
        self.patterns
            .iter()
            .filter(|(q, _)| q.len() > self.prefix.len())
            .map(|(q, s)| Rule {
                antecedent: self.prefix.clone(),
                consequent: q.items()[self.prefix.len()..].to_vec(),
                support: *s,
                confidence: *s as f64 / self.prefix_support as f64,
            })
            .collect()
    }
}

enum Threshold {
    Confidence(f64),
    Support(f64),
}

struct Workspace<'a> {
    work: Cow<'a, IndexedDatabase>,
    prefix: Vec<Symbol>,
    sup_p: usize,
    minsup: f64,
    f1: FrequentItems,
    f2: FrequentPairs,
    gap: GapConstraint,
    counters: Counters,
    cfg: MinerConfig,
}

/// Filter (optionally), derive minsup, and compute F1 (+F2 under BET).
/// `None` when the prefix has zero support.
fn prepare<'a>(
    db: &'a IndexedDatabase,
    p: &Pattern,
    threshold: Threshold,
    cfg: MinerConfig,
) -> Result<(Option<Workspace<'a>>, usize, f64, Counters)> {
    match threshold {
        Threshold::Confidence(c) => check_mincf(c)?,
        Threshold::Support(s) => {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::param(format!("minsup must be a positive number, got {s}")));
            }
        }
    }
    let mut counters = Counters {
        all_items: db.alphabet().len(),
        support_calls: 1,
        scanned_positions: db.total_positions(),
        ..Counters::default()
    };

    let (work, sup_p) = if cfg.filtering {
        let prep = filter_sequences(db, p, cfg.parallel);
        counters.filtered_sequences = prep.filtered_sequences;
        counters.kept_sequences = prep.kept_sequences;
        counters.filtered_positions = prep.filtered_positions;
        counters.kept_positions = prep.kept_positions;
        (Cow::Owned(prep.shrunk), prep.sup_p)
    } else {
        let sup_p = per_sequence_support(db, p, cfg.parallel).iter().sum();
        counters.kept_sequences = db.len();
        counters.kept_positions = db.total_positions();
        (Cow::Borrowed(db), sup_p)
    };
    let minsup = match threshold {
        Threshold::Confidence(c) => sup_p as f64 * c,
        Threshold::Support(s) => s,
    };
    if sup_p == 0 {
        return Ok((None, sup_p, minsup, counters));
    }
    let prefix = db
        .alphabet()
        .resolve(p.items())
        .expect("prefix with positive support resolves");

    counters.scanned_positions += work.total_positions();
    let f1 = frequent_items(&work, minsup);
    counters.frequent_items = f1.len();
    let f2 = if cfg.strategy == Strategy::Bet {
        let f2 = frequent_pairs_with(&work, &f1, p.gap(), minsup, cfg.parallel);
        let calls = f1.len() * f1.len();
        counters.support_calls += calls;
        counters.scanned_positions += calls * work.total_positions();
        counters.bet_pairs = f2.len();
        f2
    } else {
        FrequentPairs::empty(db.alphabet().len())
    };
    let ws = Workspace {
        work,
        prefix,
        sup_p,
        minsup,
        f1,
        f2,
        gap: p.gap(),
        counters: counters.clone(),
        cfg,
    };
    Ok((Some(ws), sup_p, minsup, counters))
}

impl Workspace<'_> {
    /// Depth-first enumeration of the frequent patterns reachable from the
    /// prefix. `visit(q, sup_q, has_frequent_extension)` is called once per
    /// popped pattern, the prefix included. Returns the number of frequent
    /// proper extensions found.
    fn explore(&mut self, mut visit: impl FnMut(&[Symbol], usize, bool)) -> usize {
        let alphabet_len = self.work.alphabet().len();
        let positions = self.work.total_positions();
        let mut stack: Vec<(Vec<Symbol>, usize)> = vec![(self.prefix.clone(), self.sup_p)];
        let mut found = 0;
        while let Some((q, sup_q)) = stack.pop() {
            let last = *q.last().expect("non-empty");
            self.counters.candidates_generated += match self.cfg.strategy {
                Strategy::Aet => alphabet_len,
                Strategy::Fet | Strategy::Bet => self.f1.len(),
            };
            let ys = extension_items(
                last,
                &self.f1,
                &self.f2,
                self.cfg.strategy,
                alphabet_len,
                &mut self.counters.candidates_pruned_by_bet,
            );
            let mut has_frequent = false;
            let mut r = q.clone();
            r.push(last);
            for y in ys {
                *r.last_mut().unwrap() = y;
                self.counters.candidates_not_pruned += 1;
                self.counters.support_calls += 1;
                self.counters.scanned_positions += positions;
                let sup = db_support_symbols(&self.work, &r, self.gap, self.cfg.parallel);
                if sup as f64 >= self.minsup && sup > 0 {
                    has_frequent = true;
                    found += 1;
                    stack.push((r.clone(), sup));
                }
            }
            visit(&q, sup_q, has_frequent);
        }
        self.counters.frequent_patterns = found + 1;
        found
    }
}

fn to_pattern(alphabet: &Alphabet, syms: &[Symbol], gap: GapConstraint) -> Pattern {
    Pattern::new(alphabet.items_of(syms), gap).expect("non-empty")
}

/// Mine all maximal co-occurrence rules with antecedent `p`.
pub fn mine_mcor(
    db: &IndexedDatabase,
    p: &Pattern,
    mincf: f64,
    cfg: &MinerConfig,
) -> Result<MiningReport> {
    let (ws, sup_p, minsup, counters) = prepare(db, p, Threshold::Confidence(mincf), *cfg)?;
    let Some(mut ws) = ws else {
        return Ok(MiningReport {
            prefix: p.clone(),
            prefix_support: sup_p,
            minsup,
            rules: Vec::new(),
            maximal_patterns: Vec::new(),
            cor_count: 0,
            counters,
            antecedent_is_maximal: false,
            zero_prefix_support: true,
        });
    };

    let mut maximal: Vec<(Vec<Symbol>, usize)> = Vec::new();
    let cor_count = if cfg.screening {
        ws.explore(|q, s, has_frequent| {
            if !has_frequent {
                maximal.push((q.to_vec(), s));
            }
        })
    } else {
        let mut all: Vec<(Vec<Symbol>, usize)> = Vec::new();
        let n = ws.explore(|q, s, _| all.push((q.to_vec(), s)));
        let parents: HashSet<&[Symbol]> = all
            .iter()
            .filter(|(q, _)| q.len() > ws.prefix.len())
            .map(|(q, _)| &q[..q.len() - 1])
            .collect();
        maximal = all
            .iter()
            .filter(|(q, _)| !parents.contains(q.as_slice()))
            .cloned()
            .collect();
        n
    };
    maximal.sort();

    let alphabet = db.alphabet();
    let plen = ws.prefix.len();
    let antecedent_is_maximal = maximal.len() == 1 && maximal[0].0.len() == plen;
    let rules: Vec<Rule> = maximal
        .iter()
        .filter(|(q, _)| q.len() > plen)
        .map(|(q, s)| {
            let confidence = *s as f64 / sup_p as f64;
            debug_assert!(confidence <= 1.0 && confidence >= mincf);
            Rule {
                antecedent: p.clone(),
                consequent: alphabet.items_of(&q[plen..]),
                support: *s,
                confidence,
            }
        })
        .collect();
    let maximal_patterns = maximal
        .iter()
        .map(|(q, s)| (to_pattern(alphabet, q, p.gap()), *s))
        .collect();

    Ok(MiningReport {
        prefix: p.clone(),
        prefix_support: sup_p,
        minsup,
        rules,
        maximal_patterns,
        cor_count,
        counters: ws.counters,
        antecedent_is_maximal,
        zero_prefix_support: false,
    })
}

/// CoP-Miner: every pattern with prefix `p` whose support reaches `minsup`.
pub fn mine_cop(
    db: &IndexedDatabase,
    p: &Pattern,
    minsup: f64,
    strategy: Strategy,
    filtering: bool,
) -> Result<CopReport> {
    let cfg = MinerConfig::default()
        .with_strategy(strategy)
        .with_filtering(filtering);
    mine_cop_with(db, p, minsup, &cfg)
}

pub fn mine_cop_with(
    db: &IndexedDatabase,
    p: &Pattern,
    minsup: f64,
    cfg: &MinerConfig,
) -> Result<CopReport> {
    let (ws, sup_p, minsup, counters) = prepare(db, p, Threshold::Support(minsup), *cfg)?;
    let empty = |counters| CopReport {
        prefix: p.clone(),
        prefix_support: sup_p,
        minsup,
        patterns: Vec::new(),
        counters,
    };
    let Some(mut ws) = ws else {
        return Ok(empty(counters));
    };
    if (sup_p as f64) < minsup {
        return Ok(empty(ws.counters));
    }
    let mut all: Vec<(Vec<Symbol>, usize)> = Vec::new();
    ws.explore(|q, s, _| all.push((q.to_vec(), s)));
    all.sort();
    let alphabet = db.alphabet();
    Ok(CopReport {
        prefix: p.clone(),
        prefix_support: sup_p,
        minsup,
        patterns: all
            .iter()
            .map(|(q, s)| (to_pattern(alphabet, q, p.gap()), *s))
            .collect(),
        counters: ws.counters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::db_support;
    use crate::seqdb::{items_from_chars, SequenceDatabase};

    fn gap03() -> GapConstraint {
        GapConstraint::new(0, 3).unwrap()
    }

    fn running() -> IndexedDatabase {
        SequenceDatabase::from_char_lines(["adbdadcdccabadcd"]).index()
    }

    fn ad() -> Pattern {
        Pattern::from_chars("ad", gap03()).unwrap()
    }

    fn consequents(r: &MiningReport) -> Vec<String> {
        r.rules
            .iter()
            .map(|r| r.consequent.iter().map(Item::to_string).collect())
            .collect()
    }

    #[test]
    fn running_example_mcor() {
        let r = mine_mcor(&running(), &ad(), 0.7, &MinerConfig::default()).unwrap();
        assert_eq!(r.prefix_support, 4);
        assert_eq!(r.cor_count, 3);
        assert_eq!(consequents(&r), ["cd", "d"]);
        let cd = &r.rules[0];
        assert_eq!(cd.support, 3);
        assert!((cd.confidence - 0.75).abs() < 1e-12);
        assert!(!r.antecedent_is_maximal);
        assert_eq!(r.mcor_count(), 2);
    }

    #[test]
    fn full_confidence_leaves_antecedent_maximal() {
        let r = mine_mcor(&running(), &ad(), 1.0, &MinerConfig::default()).unwrap();
        assert!((r.minsup - 4.0).abs() < 1e-12);
        assert!(r.rules.is_empty());
        assert!(r.antecedent_is_maximal);
        assert_eq!(r.maximal_patterns.len(), 1);
        assert_eq!(r.maximal_patterns[0].0, ad());
    }

    #[test]
    fn screening_trace_supports() {
        let db = running();
        let sup = |s: &str| db_support(&db, &Pattern::from_chars(s, gap03()).unwrap());
        assert_eq!(sup("adca"), 2);
        assert_eq!(sup("adcd"), 3);
        // Witnesses <1,4,7,8,9> and <5,6,10,14,15>.
        assert_eq!(sup("adcdc"), 2);
        assert_eq!(sup("adcdd"), 1);
        let r = mine_mcor(&db, &ad(), 0.7, &MinerConfig::default()).unwrap();
        let maximal: Vec<String> = r
            .maximal_patterns
            .iter()
            .map(|(p, _)| p.items().iter().map(Item::to_string).collect())
            .collect();
        assert_eq!(maximal, ["adcd", "add"]);
    }

    #[test]
    fn ablations_agree() {
        let db = running();
        let base = mine_mcor(&db, &ad(), 0.7, &MinerConfig::default()).unwrap();
        for strategy in [Strategy::Aet, Strategy::Fet, Strategy::Bet] {
            for filtering in [false, true] {
                for screening in [false, true] {
                    let cfg = MinerConfig::default()
                        .with_strategy(strategy)
                        .with_filtering(filtering)
                        .with_screening(screening);
                    let r = mine_mcor(&db, &ad(), 0.7, &cfg).unwrap();
                    assert_eq!(r.rules, base.rules, "{cfg:?}");
                    assert_eq!(r.maximal_patterns, base.maximal_patterns, "{cfg:?}");
                    assert_eq!(r.cor_count, base.cor_count);
                }
            }
        }
    }

    #[test]
    fn bet_counters_balance() {
        let r = mine_mcor(&running(), &ad(), 0.7, &MinerConfig::default()).unwrap();
        let c = &r.counters;
        assert_eq!(c.candidates_pruned_by_bet + c.candidates_not_pruned, c.candidates_generated);
        assert_eq!(c.frequent_items, 3);
        assert_eq!(c.bet_pairs, 4);
        assert_eq!(c.all_items, 4);
        assert_eq!(c.frequent_patterns, 4);
    }

    #[test]
    fn zero_support_prefix() {
        let db = SequenceDatabase::from_char_lines(["bcbc"]).index();
        let r = mine_mcor(&db, &ad(), 0.5, &MinerConfig::default()).unwrap();
        assert!(r.zero_prefix_support);
        assert!(!r.antecedent_is_maximal);
        assert!(r.rules.is_empty());
        let unseen = Pattern::new(vec![Item::new("zz").unwrap()], gap03()).unwrap();
        assert!(mine_mcor(&db, &unseen, 0.5, &MinerConfig::default()).unwrap().zero_prefix_support);
    }

    #[test]
    fn parameter_errors() {
        let db = running();
        assert!(mine_mcor(&db, &ad(), 0.0, &MinerConfig::default()).unwrap_err().is_parameter());
        assert!(mine_mcor(&db, &ad(), 1.5, &MinerConfig::default()).is_err());
        assert!(mine_cop(&db, &ad(), 0.0, Strategy::Bet, true).is_err());
    }

    #[test]
    fn cop_running_example() {
        let r = mine_cop(&running(), &ad(), 3.0, Strategy::Bet, true).unwrap();
        let got: Vec<(String, usize)> = r
            .patterns
            .iter()
            .map(|(p, s)| (p.items().iter().map(Item::to_string).collect(), *s))
            .collect();
        let want = [("ad", 4), ("adc", 3), ("adcd", 3), ("add", 3)];
        assert_eq!(got, want.map(|(p, s)| (p.to_string(), s)));
        assert_eq!(r.rules().len(), 3);

        let none = mine_cop(&running(), &ad(), 5.0, Strategy::Bet, true).unwrap();
        assert!(none.patterns.is_empty());
    }

    #[test]
    fn parallel_matches_sequential() {
        let db = SequenceDatabase::from_char_lines(["adbdadcdccabadcd", "adcadd", "ddcca", "adadad"]).index();
        let seq = mine_mcor(&db, &ad(), 0.5, &MinerConfig::default()).unwrap();
        let par = mine_mcor(&db, &ad(), 0.5, &MinerConfig::default().with_parallel(true)).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn consequent_items_are_items() {
        let r = mine_mcor(&running(), &ad(), 0.7, &MinerConfig::default()).unwrap();
        assert_eq!(r.rules[0].consequent, items_from_chars("cd"));
    }
}
