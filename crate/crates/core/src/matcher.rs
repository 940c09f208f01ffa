//! Nonoverlapping support by depth-first search with backtracking over
//! index arrays (DBI).
//!
//! Each pattern level owns a cursor into the index array of its item. The
//! cursors only ever move forward during one support computation, so every
//! array element is consumed at most once per level. A child candidate that
//! lies too far from the current node (gap > max) is only peeked: the search
//! backtracks to the parent and the candidate stays available to a later
//! sibling. A node that was descended into stays consumed even if its subtree
//! fails. Occurrences are the leftmost minimal ones, found in root order.

use rayon::prelude::*;

use crate::seqdb::{Alphabet, GapConstraint, IndexedDatabase, IndexedSequence, Pattern, Symbol};

/// Position tuple (1-based) witnessing a pattern in one sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence(pub Vec<u32>);

impl Occurrence {
    pub fn positions(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&[u32]> for Occurrence {
    fn from(p: &[u32]) -> Self {
        Occurrence(p.to_vec())
    }
}

/// Work done by one scan: index-array elements consumed or peeked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanStats {
    pub visits: usize,
}

/// Core DBI scan. Calls `on_occurrence` for every occurrence found and
/// returns the support.
pub fn dbi_scan<F>(
    idx: &IndexedSequence,
    pattern: &[Symbol],
    gap: GapConstraint,
    stats: &mut ScanStats,
    mut on_occurrence: F,
) -> usize
where
    F: FnMut(&[u32]),
{
    let m = pattern.len();
    if m == 0 {
        return 0;
    }
    let roots = idx.positions(pattern[0]);
    if m == 1 {
        stats.visits += roots.len();
        for &r in roots {
            on_occurrence(std::slice::from_ref(&r));
        }
        return roots.len();
    }

    let levels: Vec<&[u32]> = pattern.iter().map(|&s| idx.positions(s)).collect();
    if levels.iter().any(|l| l.is_empty()) {
        return 0;
    }
    let (min_gap, max_gap) = (gap.min(), gap.max());
    let mut cursors = vec![0usize; m];
    let mut occ = vec![0u32; m];
    let mut support = 0;

    'roots: for &root in roots {
        stats.visits += 1;
        occ[0] = root;
        let mut level = 0;
        loop {
            let next = level + 1;
            let arr = levels[next];
            let cursor = &mut cursors[next];
            let node = occ[level];
            // Child x is admissible iff lo <= x <= hi.
            let lo = node as u64 + 1 + min_gap as u64;
            let hi = node as u64 + 1 + max_gap as u64;
            while *cursor < arr.len() && (arr[*cursor] as u64) < lo {
                *cursor += 1;
                stats.visits += 1;
            }
            if *cursor == arr.len() {
                // This level is exhausted; no later root can complete either.
                break 'roots;
            }
            stats.visits += 1;
            let child = arr[*cursor];
            if child as u64 <= hi {
                *cursor += 1;
                occ[next] = child;
                level = next;
                if level == m - 1 {
                    support += 1;
                    on_occurrence(&occ);
                    break;
                }
            } else if level == 0 {
                break;
            } else {
                level -= 1;
            }
        }
    }
    support
}

/// `sup(p, s)`: number of nonoverlapping occurrences found by DBI.
pub fn dbi_support(idx: &IndexedSequence, pattern: &[Symbol], gap: GapConstraint) -> usize {
    dbi_scan(idx, pattern, gap, &mut ScanStats::default(), |_| {})
}

/// The occurrences counted by [`dbi_support`], in discovery (root) order.
pub fn dbi_occurrences(
    idx: &IndexedSequence,
    pattern: &[Symbol],
    gap: GapConstraint,
) -> Vec<Occurrence> {
    let mut out = Vec::new();
    dbi_scan(idx, pattern, gap, &mut ScanStats::default(), |o| {
        out.push(Occurrence::from(o))
    });
    out
}

/// `sup(p, D)` over symbols: sum of per-sequence supports. With `parallel`
/// the sequences are scanned on the current rayon pool.
pub fn db_support_symbols(
    db: &IndexedDatabase,
    pattern: &[Symbol],
    gap: GapConstraint,
    parallel: bool,
) -> usize {
    if parallel {
        db.sequences()
            .par_iter()
            .map(|s| dbi_support(s, pattern, gap))
            .sum()
    } else {
        db.sequences()
            .iter()
            .map(|s| dbi_support(s, pattern, gap))
            .sum()
    }
}

/// `sup(p, D)`. Patterns with items outside the database's alphabet have support 0.
pub fn db_support(db: &IndexedDatabase, pattern: &Pattern) -> usize {
    match db.alphabet().resolve(pattern.items()) {
        Some(syms) => db_support_symbols(db, &syms, pattern.gap(), false),
        None => 0,
    }
}

/// [`dbi_occurrences`] for a token-level pattern against one indexed sequence.
pub fn occurrences_in(
    idx: &IndexedSequence,
    alphabet: &Alphabet,
    pattern: &Pattern,
) -> Vec<Occurrence> {
    match alphabet.resolve(pattern.items()) {
        Some(syms) => dbi_occurrences(idx, &syms, pattern.gap()),
        None => Vec::new(),
    }
}
