//! Preparation stage: antecedent support, sequence filtering, and the
//! minimum support derived from the confidence threshold.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matcher::dbi_support;
use crate::seqdb::{IndexedDatabase, Pattern};

#[derive(Clone, Debug)]
pub struct PrepResult {
    /// `sup_p × mincf`, unrounded.
    pub minsup: f64,
    /// Sequences with non-zero antecedent support, input order preserved.
    pub shrunk: IndexedDatabase,
    /// Positions of the kept sequences in the input database.
    pub kept: Vec<usize>,
    pub sup_p: usize,
    pub filtered_sequences: usize,
    pub kept_sequences: usize,
    pub filtered_positions: usize,
    pub kept_positions: usize,
}

pub(crate) fn check_mincf(mincf: f64) -> Result<()> {
    if mincf > 0.0 && mincf <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("mincf must be in (0,1], got {mincf}")))
    }
}

/// Per-sequence supports of `p` (all zero when `p` has items outside the alphabet).
pub(crate) fn per_sequence_support(db: &IndexedDatabase, p: &Pattern, parallel: bool) -> Vec<usize> {
    let Some(syms) = db.alphabet().resolve(p.items()) else {
        return vec![0; db.len()];
    };
    let gap = p.gap();
    if parallel {
        db.sequences()
            .par_iter()
            .map(|s| dbi_support(s, &syms, gap))
            .collect()
    } else {
        db.sequences()
            .iter()
            .map(|s| dbi_support(s, &syms, gap))
            .collect()
    }
}

/// Drop every sequence in which `p` has support zero. Returns everything in
/// [`PrepResult`] except that `minsup` is left at 0.
pub fn filter_sequences(db: &IndexedDatabase, p: &Pattern, parallel: bool) -> PrepResult {
    let supports = per_sequence_support(db, p, parallel);
    let kept: Vec<usize> = supports
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0)
        .map(|(i, _)| i)
        .collect();
    let shrunk = db.subset(&kept);
    let kept_positions = shrunk.total_positions();
    PrepResult {
        minsup: 0.0,
        sup_p: supports.iter().sum(),
        filtered_sequences: db.len() - kept.len(),
        kept_sequences: kept.len(),
        filtered_positions: db.total_positions() - kept_positions,
        kept_positions,
        shrunk,
        kept,
    }
}

/// SDB-Filt: filter sequences lacking `p` and set `minsup = sup(p, D) × mincf`.
pub fn sdb_filt(db: &IndexedDatabase, p: &Pattern, mincf: f64) -> Result<PrepResult> {
    sdb_filt_with(db, p, mincf, false)
}

pub fn sdb_filt_with(db: &IndexedDatabase, p: &Pattern, mincf: f64, parallel: bool) -> Result<PrepResult> {
    check_mincf(mincf)?;
    let mut res = filter_sequences(db, p, parallel);
    res.minsup = res.sup_p as f64 * mincf;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqdb::{GapConstraint, SequenceDatabase};

    fn ad() -> Pattern {
        Pattern::from_chars("ad", GapConstraint::new(0, 3).unwrap()).unwrap()
    }

    #[test]
    fn running_example() {
        let db = SequenceDatabase::from_char_lines(["adbdadcdccabadcd"]).index();
        let r = sdb_filt(&db, &ad(), 0.7).unwrap();
        assert_eq!(r.sup_p, 4);
        assert!((r.minsup - 2.8).abs() < 1e-12);
        assert_eq!(r.shrunk.len(), 1);
        assert_eq!(r.kept_positions, 16);
    }

    #[test]
    fn drops_sequences_without_prefix() {
        let db = SequenceDatabase::from_char_lines(["bbbb", "adbdadcdccabadcd", "dada"]).index();
        let r = sdb_filt(&db, &ad(), 0.7).unwrap();
        assert_eq!(r.sup_p, 5);
        assert_eq!(r.kept, [1, 2]);
        assert_eq!(r.filtered_sequences, 1);
        assert_eq!(r.filtered_positions, 4);
        assert_eq!(r.kept_positions, 20);
        assert_eq!(r.shrunk.sequences()[0], db.sequences()[1]);
    }

    #[test]
    fn absent_prefix() {
        let db = SequenceDatabase::from_char_lines(["bcbc", "cc"]).index();
        let r = sdb_filt(&db, &ad(), 0.5).unwrap();
        assert_eq!(r.sup_p, 0);
        assert_eq!(r.minsup, 0.0);
        assert!(r.shrunk.is_empty());
    }

    #[test]
    fn mincf_range() {
        let db = SequenceDatabase::from_char_lines(["ad"]).index();
        for bad in [0.0, -0.1, 1.01, f64::NAN] {
            assert!(sdb_filt(&db, &ad(), bad).unwrap_err().is_parameter());
        }
        assert!(sdb_filt(&db, &ad(), 1.0).is_ok());
    }

    #[test]
    fn parallel_matches_sequential() {
        let db = SequenceDatabase::from_char_lines(["adbdadcdccabadcd", "bbbb", "aadd"]).index();
        let a = sdb_filt_with(&db, &ad(), 0.5, false).unwrap();
        let b = sdb_filt_with(&db, &ad(), 0.5, true).unwrap();
        assert_eq!(a.kept, b.kept);
        assert_eq!(a.sup_p, b.sup_p);
    }
}
