//! Seeded random cross-checks of the matcher and the miner against the
//! brute-force oracle. A failing case is reported in a form that can be
//! pasted back into a test.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::candgen::Strategy;
use crate::matcher::occurrences_in;
use crate::miner::{mine_cop_with, mine_mcor, MinerConfig, MiningReport};
use crate::oracle::{oracle_all_occurrences, oracle_max_nonoverlapping, oracle_mine_mcor};
use crate::seqdb::{items_from_chars, GapConstraint, Item, Pattern, SequenceDatabase};

const LETTERS: &[u8] = b"abcd";

/// Size limits for matcher instances.
#[derive(Clone, Copy, Debug)]
pub struct MatcherSizes {
    pub max_alphabet: usize,
    pub max_len: usize,
    pub max_pattern: usize,
    pub max_gap: u32,
}

impl Default for MatcherSizes {
    fn default() -> Self {
        MatcherSizes {
            max_alphabet: 4,
            max_len: 20,
            max_pattern: 4,
            max_gap: 3,
        }
    }
}

/// Size limits for mining instances.
#[derive(Clone, Copy, Debug)]
pub struct MinerSizes {
    pub max_alphabet: usize,
    pub max_sequences: usize,
    pub max_len: usize,
    pub max_gap: u32,
}

impl Default for MinerSizes {
    fn default() -> Self {
        MinerSizes {
            max_alphabet: 4,
            max_sequences: 5,
            max_len: 15,
            max_gap: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatcherCase {
    pub sequence: String,
    pub pattern: String,
    pub gap: GapConstraint,
}

impl fmt::Display for MatcherCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sequence={:?} pattern={:?} gap={}", self.sequence, self.pattern, self.gap)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinerCase {
    pub sequences: Vec<String>,
    pub prefix: String,
    pub gap: GapConstraint,
    pub mincf: f64,
}

impl fmt::Display for MinerCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sequences={:?} prefix={:?} gap={} mincf={}",
            self.sequences, self.prefix, self.gap, self.mincf
        )
    }
}

impl MinerCase {
    pub fn database(&self) -> SequenceDatabase {
        SequenceDatabase::from_char_lines(self.sequences.iter().map(String::as_str))
    }

    pub fn pattern(&self) -> Pattern {
        Pattern::from_chars(&self.prefix, self.gap).expect("non-empty prefix")
    }

    /// Longer than any pattern that can occur, so the oracle never truncates.
    pub fn oracle_max_len(&self) -> usize {
        self.sequences.iter().map(|s| s.len()).max().unwrap_or(0) + 1
    }
}

fn random_gap(rng: &mut impl Rng, max_gap: u32) -> GapConstraint {
    let b = rng.gen_range(0..=max_gap);
    let a = rng.gen_range(0..=b);
    GapConstraint::new(a, b).expect("a <= b")
}

fn random_string(rng: &mut impl Rng, letters: &[u8], len: usize) -> String {
    (0..len)
        .map(|_| *letters.choose(rng).expect("non-empty") as char)
        .collect()
}

pub fn random_matcher_case(rng: &mut impl Rng, sizes: &MatcherSizes) -> MatcherCase {
    let sigma = rng.gen_range(2..=sizes.max_alphabet.clamp(2, LETTERS.len()));
    let letters = &LETTERS[..sigma];
    let n = rng.gen_range(0..=sizes.max_len);
    let m = rng.gen_range(1..=sizes.max_pattern.max(1));
    MatcherCase {
        sequence: random_string(rng, letters, n),
        pattern: random_string(rng, letters, m),
        gap: random_gap(rng, sizes.max_gap),
    }
}

pub fn random_miner_case(rng: &mut impl Rng, sizes: &MinerSizes) -> MinerCase {
    let sigma = rng.gen_range(2..=sizes.max_alphabet.clamp(2, LETTERS.len()));
    let letters = &LETTERS[..sigma];
    let k = rng.gen_range(1..=sizes.max_sequences.max(1));
    let sequences: Vec<String> = (0..k)
        .map(|_| {
            let n = rng.gen_range(1..=sizes.max_len.max(1));
            random_string(rng, letters, n)
        })
        .collect();
    let gap = random_gap(rng, sizes.max_gap);
    let mincf = if rng.gen_bool(0.5) { 0.5 } else { 0.7 };
    // Mostly take a prefix that occurs, so that the mining step has work to do.
    let len = rng.gen_range(1..=2);
    let prefix = if rng.gen_bool(0.9) {
        let s = sequences.choose(rng).expect("k >= 1").as_bytes();
        let start = rng.gen_range(0..s.len());
        let mut p = vec![s[start]];
        let next = start + 1 + gap.min() as usize + rng.gen_range(0..=(gap.max() - gap.min()) as usize);
        if len == 2 && next < s.len() {
            p.push(s[next]);
        }
        String::from_utf8(p).expect("ascii")
    } else {
        random_string(rng, letters, len)
    };
    MinerCase {
        sequences,
        prefix,
        gap,
        mincf,
    }
}

/// DBI support equals the oracle maximum, and DBI's witnesses are valid and
/// pairwise nonoverlapping.
pub fn check_matcher_case(case: &MatcherCase) -> Result<(), String> {
    let db = SequenceDatabase::from_char_lines([case.sequence.as_str()]);
    let idx = db.index();
    let pattern = Pattern::from_chars(&case.pattern, case.gap).map_err(|e| e.to_string())?;
    let seq = items_from_chars(&case.sequence);
    let expected = oracle_max_nonoverlapping(&oracle_all_occurrences(&seq, &pattern));
    let found = idx
        .sequences()
        .first()
        .map(|s| occurrences_in(s, idx.alphabet(), &pattern))
        .unwrap_or_default();
    if found.len() != expected {
        return Err(format!("{case}: dbi support {} != oracle {expected}", found.len()));
    }
    let items = pattern.items();
    for o in &found {
        let pos = o.positions();
        let ok = pos.len() == items.len()
            && pos.iter().zip(items).all(|(&p, it)| seq.get(p as usize - 1) == Some(it))
            && pos.windows(2).all(|w| case.gap.admits(w[0], w[1]));
        if !ok {
            return Err(format!("{case}: invalid witness {pos:?}"));
        }
    }
    for j in 0..items.len() {
        let mut at: Vec<u32> = found.iter().map(|o| o.positions()[j]).collect();
        at.sort_unstable();
        if at.windows(2).any(|w| w[0] == w[1]) {
            return Err(format!("{case}: witnesses share a position at index {j}"));
        }
    }
    Ok(())
}

fn consequents(report: &MiningReport) -> BTreeMap<Vec<Item>, usize> {
    report
        .rules
        .iter()
        .map(|r| (r.consequent.clone(), r.support))
        .collect()
}

/// Miner output (default configuration) equals the oracle: prefix support,
/// CoR count and set (via CoP-Miner at the same threshold), MCoRs with
/// supports, and the antecedent-maximal flag.
pub fn check_miner_case(case: &MinerCase) -> Result<(), String> {
    let db = case.database();
    let idx = db.index();
    let p = case.pattern();
    let oracle = oracle_mine_mcor(&db, &p, case.mincf, case.oracle_max_len()).map_err(|e| e.to_string())?;
    let report = mine_mcor(&idx, &p, case.mincf, &MinerConfig::default()).map_err(|e| e.to_string())?;
    if report.prefix_support != oracle.prefix_support {
        return Err(format!(
            "{case}: prefix support {} != oracle {}",
            report.prefix_support, oracle.prefix_support
        ));
    }
    if report.cor_count != oracle.cors.len() {
        return Err(format!("{case}: {} CoRs != oracle {}", report.cor_count, oracle.cors.len()));
    }
    let got = consequents(&report);
    if got != oracle.mcors {
        return Err(format!("{case}: MCoRs {got:?} != oracle {:?}", oracle.mcors));
    }
    if oracle.prefix_support > 0 && report.antecedent_is_maximal != oracle.antecedent_is_maximal {
        return Err(format!("{case}: antecedent-maximal flag differs from oracle"));
    }
    for r in &report.rules {
        if !(r.confidence >= case.mincf && r.confidence <= 1.0) {
            return Err(format!("{case}: confidence {} out of range", r.confidence));
        }
    }
    if oracle.prefix_support > 0 {
        let cop = mine_cop_with(&idx, &p, oracle.minsup, &MinerConfig::default()).map_err(|e| e.to_string())?;
        let cors: BTreeMap<Vec<Item>, usize> = cop
            .rules()
            .into_iter()
            .map(|r| (r.consequent, r.support))
            .collect();
        if cors != oracle.cors {
            return Err(format!("{case}: CoRs {cors:?} != oracle {:?}", oracle.cors));
        }
    }
    Ok(())
}

/// Every strategy × filtering × screening combination gives the same rules
/// and CoR count, and generated candidates split into pruned and evaluated.
pub fn check_strategy_invariance(case: &MinerCase) -> Result<(), String> {
    let idx = case.database().index();
    let p = case.pattern();
    let base = mine_mcor(&idx, &p, case.mincf, &MinerConfig::default()).map_err(|e| e.to_string())?;
    let want = consequents(&base);
    for strategy in [Strategy::Aet, Strategy::Fet, Strategy::Bet] {
        for filtering in [false, true] {
            for screening in [false, true] {
                let cfg = MinerConfig::default()
                    .with_strategy(strategy)
                    .with_filtering(filtering)
                    .with_screening(screening);
                let r = mine_mcor(&idx, &p, case.mincf, &cfg).map_err(|e| e.to_string())?;
                let tag = format!("{strategy}/filtering={filtering}/screening={screening}");
                if consequents(&r) != want || r.cor_count != base.cor_count {
                    return Err(format!("{case}: {tag} differs from default configuration"));
                }
                let c = &r.counters;
                if c.candidates_pruned_by_bet + c.candidates_not_pruned != c.candidates_generated {
                    return Err(format!("{case}: {tag} candidate counters do not add up: {c:?}"));
                }
                if strategy != Strategy::Bet && c.candidates_pruned_by_bet != 0 {
                    return Err(format!("{case}: {tag} reports pair pruning"));
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckSummary {
    pub matcher_trials: usize,
    pub miner_trials: usize,
    pub failures: Vec<String>,
}

impl CheckSummary {
    pub fn trials(&self) -> usize {
        self.matcher_trials + self.miner_trials
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run `matcher_trials` matcher cases then `miner_trials` miner cases (each
/// checked against the oracle and for strategy invariance) from one seeded
/// stream, writing a transcript to `out`.
pub fn run_checks(
    seed: u64,
    matcher_trials: usize,
    miner_trials: usize,
    matcher_sizes: &MatcherSizes,
    miner_sizes: &MinerSizes,
    out: &mut impl Write,
) -> io::Result<CheckSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = CheckSummary {
        matcher_trials,
        miner_trials,
        ..Default::default()
    };
    let mut matcher_failures = 0;
    for _ in 0..matcher_trials {
        let case = random_matcher_case(&mut rng, matcher_sizes);
        if let Err(e) = check_matcher_case(&case) {
            writeln!(out, "counterexample: {e}")?;
            summary.failures.push(e);
            matcher_failures += 1;
        }
    }
    if matcher_trials > 0 {
        writeln!(out, "matcher: {matcher_trials} trials, {matcher_failures} failures")?;
    }
    let mut miner_failures = 0;
    for _ in 0..miner_trials {
        let case = random_miner_case(&mut rng, miner_sizes);
        for res in [check_miner_case(&case), check_strategy_invariance(&case)] {
            if let Err(e) = res {
                writeln!(out, "counterexample: {e}")?;
                summary.failures.push(e);
                miner_failures += 1;
            }
        }
    }
    if miner_trials > 0 {
        writeln!(out, "miner: {miner_trials} trials, {miner_failures} failures")?;
    }
    writeln!(out, "{} trials, {} failures", summary.trials(), summary.failures.len())?;
    Ok(summary)
}
