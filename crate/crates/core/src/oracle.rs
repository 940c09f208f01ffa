//! Exhaustive reference implementations used to verify the matcher and the
//! miner. They work on raw item lists and never touch index arrays, so they
//! stay independent of the code paths they check. Exponential in the worst
//! case; meant for small inputs.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::matcher::Occurrence;
use crate::seqdb::{GapConstraint, Item, Pattern, SequenceDatabase};

/// Every occurrence of `pattern` in `seq`, in lexicographic order.
pub fn oracle_all_occurrences(seq: &[Item], pattern: &Pattern) -> Vec<Occurrence> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(pattern.len());
    for start in 0..seq.len() {
        if seq[start] == pattern.items()[0] {
            cur.push(start as u32 + 1);
            extend_occurrence(seq, pattern.items(), pattern.gap(), &mut cur, &mut out);
            cur.pop();
        }
    }
    out
}

fn extend_occurrence(
    seq: &[Item],
    items: &[Item],
    gap: GapConstraint,
    cur: &mut Vec<u32>,
    out: &mut Vec<Occurrence>,
) {
    let j = cur.len();
    if j == items.len() {
        out.push(Occurrence(cur.clone()));
        return;
    }
    let prev = *cur.last().unwrap() as usize; // 1-based
    let first = prev + 1 + gap.min() as usize; // 1-based candidate
    let last = (prev + 1 + gap.max() as usize).min(seq.len());
    for pos in first..=last {
        if seq[pos - 1] == items[j] {
            cur.push(pos as u32);
            extend_occurrence(seq, items, gap, cur, out);
            cur.pop();
        }
    }
}

/// Largest set of pairwise nonoverlapping occurrences (no shared position at
/// the same pattern index), by branch and bound.
pub fn oracle_max_nonoverlapping(occs: &[Occurrence]) -> usize {
    if occs.is_empty() {
        return 0;
    }
    let m = occs[0].len();
    let mut used: Vec<HashSet<u32>> = vec![HashSet::new(); m];
    let mut best = 0;
    branch(occs, 0, 0, &mut used, &mut best);
    best
}

fn branch(
    occs: &[Occurrence],
    i: usize,
    chosen: usize,
    used: &mut [HashSet<u32>],
    best: &mut usize,
) {
    if chosen > *best {
        *best = chosen;
    }
    if i == occs.len() {
        return;
    }
    // Bound: at each index, only distinct unused positions among the rest can be added.
    let bound = (0..used.len())
        .map(|j| {
            occs[i..]
                .iter()
                .map(|o| o.0[j])
                .filter(|p| !used[j].contains(p))
                .collect::<HashSet<_>>()
                .len()
        })
        .min()
        .unwrap_or(0);
    if chosen + bound <= *best {
        return;
    }
    let o = &occs[i].0;
    if o.iter().enumerate().all(|(j, p)| !used[j].contains(p)) {
        for (j, p) in o.iter().enumerate() {
            used[j].insert(*p);
        }
        branch(occs, i + 1, chosen + 1, used, best);
        for (j, p) in o.iter().enumerate() {
            used[j].remove(p);
        }
    }
    branch(occs, i + 1, chosen, used, best);
}

/// Oracle support of `pattern` in a database.
pub fn oracle_support(db: &SequenceDatabase, pattern: &Pattern) -> usize {
    db.sequences()
        .iter()
        .map(|s| oracle_max_nonoverlapping(&oracle_all_occurrences(&s.items, pattern)))
        .sum()
}

/// Brute-force co-occurrence mining result. Keys are consequents.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OracleMining {
    pub prefix_support: usize,
    pub minsup: f64,
    /// Strong co-occurrence rules: consequent → sup(p·r).
    pub cors: BTreeMap<Vec<Item>, usize>,
    /// Maximal co-occurrence rules: consequent → sup(p·r).
    pub mcors: BTreeMap<Vec<Item>, usize>,
    /// True when the prefix itself is frequent with no frequent extension.
    pub antecedent_is_maximal: bool,
    /// A frequent pattern reached `max_len`; results may be incomplete.
    pub truncated: bool,
}

/// Enumerate the patterns with prefix `p` (up to `max_len` items), compute
/// oracle supports, and derive CoRs and MCoRs.
///
/// Only frequent patterns are extended. Truncating each occurrence in a
/// nonoverlapping set of `q·y` gives a nonoverlapping set of `q` of the same
/// size, so no extension of an infrequent pattern can be frequent.
pub fn oracle_mine_mcor(
    db: &SequenceDatabase,
    p: &Pattern,
    mincf: f64,
    max_len: usize,
) -> Result<OracleMining> {
    if !(mincf > 0.0 && mincf <= 1.0) {
        return Err(Error::param(format!("mincf must be in (0,1], got {mincf}")));
    }
    let prefix_support = oracle_support(db, p);
    let minsup = prefix_support as f64 * mincf;
    let mut res = OracleMining {
        prefix_support,
        minsup,
        ..Default::default()
    };
    if prefix_support == 0 {
        return Ok(res);
    }
    let alphabet = db.alphabet().items();
    let mut frequent: BTreeMap<Vec<Item>, usize> = BTreeMap::new();
    let mut frontier = vec![p.clone()];
    while let Some(q) = frontier.pop() {
        if q.len() >= max_len {
            continue;
        }
        for y in alphabet {
            let r = q.extended(std::slice::from_ref(y));
            let sup = oracle_support(db, &r);
            if sup as f64 >= minsup {
                if r.len() >= max_len {
                    res.truncated = true;
                }
                frequent.insert(r.items()[p.len()..].to_vec(), sup);
                frontier.push(r);
            }
        }
    }
    // Maximal: no frequent pattern extends it by exactly one item.
    let parents: BTreeSet<&[Item]> = frequent.keys().map(|r| &r[..r.len() - 1]).collect();
    res.mcors = frequent
        .iter()
        .filter(|(r, _)| !parents.contains(r.as_slice()))
        .map(|(r, s)| (r.clone(), *s))
        .collect();
    res.antecedent_is_maximal = frequent.is_empty();
    res.cors = frequent;
    if res.truncated {
        eprintln!("warning: oracle enumeration reached max_len={max_len}; results may be truncated");
    }
    Ok(res)
}

/// All frequent patterns (any prefix) up to `max_len`, with oracle supports.
/// `minsup` should be positive; support-0 patterns are never reported.
pub fn oracle_frequent_patterns(
    db: &SequenceDatabase,
    gap: GapConstraint,
    minsup: f64,
    max_len: usize,
) -> BTreeMap<Vec<Item>, usize> {
    let mut out = BTreeMap::new();
    let alphabet = db.alphabet().items();
    let mut frontier: Vec<Vec<Item>> = vec![Vec::new()];
    while let Some(q) = frontier.pop() {
        if q.len() >= max_len {
            continue;
        }
        for y in alphabet {
            let mut items = q.clone();
            items.push(y.clone());
            let r = Pattern::new(items, gap).expect("non-empty");
            let sup = oracle_support(db, &r);
            if sup as f64 >= minsup && sup > 0 {
                out.insert(r.items().to_vec(), sup);
                frontier.push(r.items().to_vec());
            }
        }
    }
    out
}

/// A rule `antecedent → consequent` between two frequent patterns.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct OracleRule {
    pub antecedent: Vec<Item>,
    pub consequent: Vec<Item>,
    pub confidence: f64,
}

/// Strong rules over every antecedent: for each frequent pattern q and each
/// proper non-empty prefix p of q (p frequent too), emit p → rest when
/// sup(q)/sup(p) ≥ mincf.
pub fn oracle_all_rules(frequent: &BTreeMap<Vec<Item>, usize>, mincf: f64) -> Vec<OracleRule> {
    let mut rules = Vec::new();
    for (q, &sq) in frequent {
        for k in 1..q.len() {
            if let Some(&sp) = frequent.get(&q[..k]) {
                let confidence = sq as f64 / sp as f64;
                if confidence >= mincf {
                    rules.push(OracleRule {
                        antecedent: q[..k].to_vec(),
                        consequent: q[k..].to_vec(),
                        confidence,
                    });
                }
            }
        }
    }
    rules
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqdb::items_from_chars;

    fn pat(s: &str, a: u32, b: u32) -> Pattern {
        Pattern::from_chars(s, GapConstraint::new(a, b).unwrap()).unwrap()
    }

    fn tuples(v: &[Occurrence]) -> Vec<Vec<u32>> {
        v.iter().map(|o| o.0.clone()).collect()
    }

    #[test]
    fn all_occurrences_of_ad() {
        let s = items_from_chars("adbdadcdccabadcd");
        let occ = oracle_all_occurrences(&s, &pat("ad", 0, 3));
        assert_eq!(
            tuples(&occ),
            vec![
                vec![1, 2],
                vec![1, 4],
                vec![5, 6],
                vec![5, 8],
                vec![11, 14],
                vec![13, 14],
                vec![13, 16]
            ]
        );
        assert_eq!(oracle_max_nonoverlapping(&occ), 4);
    }

    #[test]
    fn nonoverlapping_example() {
        let s = items_from_chars("aabbaaba");
        let occ = oracle_all_occurrences(&s, &pat("aba", 0, 1));
        for want in [vec![1, 3, 5], vec![2, 4, 6], vec![6, 7, 8]] {
            assert!(tuples(&occ).contains(&want), "{want:?}");
        }
        assert_eq!(oracle_max_nonoverlapping(&occ), 3);
    }

    #[test]
    fn degenerate_inputs() {
        let s = items_from_chars("ab");
        assert!(oracle_all_occurrences(&s, &pat("abc", 0, 3)).is_empty());
        assert_eq!(oracle_max_nonoverlapping(&[]), 0);
        let empty = SequenceDatabase::from_char_lines(Vec::<&str>::new());
        let r = oracle_mine_mcor(&empty, &pat("ad", 0, 3), 0.7, 6).unwrap();
        assert!(r.cors.is_empty() && r.mcors.is_empty());
    }

    #[test]
    fn running_example_rules() {
        let db = SequenceDatabase::from_char_lines(["adbdadcdccabadcd"]);
        let r = oracle_mine_mcor(&db, &pat("ad", 0, 3), 0.7, 8).unwrap();
        let cons: Vec<String> = r.cors.keys().map(|k| k.iter().map(|i| i.to_string()).collect()).collect();
        assert_eq!(cons, ["c", "cd", "d"]);
        let max: Vec<String> = r.mcors.keys().map(|k| k.iter().map(|i| i.to_string()).collect()).collect();
        assert_eq!(max, ["cd", "d"]);
        assert!(!r.truncated);

        let strict = oracle_mine_mcor(&db, &pat("ad", 0, 3), 1.0, 8).unwrap();
        assert!(strict.mcors.is_empty());
        assert!(strict.antecedent_is_maximal);
    }

    #[test]
    fn truncation_is_flagged() {
        let db = SequenceDatabase::from_char_lines(["aaaaaaaa"]);
        let r = oracle_mine_mcor(&db, &pat("a", 0, 0), 0.1, 3).unwrap();
        assert!(r.truncated);
    }
}
