//! Candidate extensions of a pattern: all items (AET), frequent items (FET),
//! or frequent items whose pair with the pattern's last item is frequent
//! (BET).

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::matcher::db_support_symbols;
use crate::seqdb::{Alphabet, GapConstraint, IndexedDatabase, Item, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Every alphabet item.
    Aet,
    /// Frequent items only.
    Fet,
    /// Frequent items `y` with `(last, y)` a frequent pair.
    Bet,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Aet => "aet",
            Strategy::Fet => "fet",
            Strategy::Bet => "bet",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "aet" => Ok(Strategy::Aet),
            "fet" => Ok(Strategy::Fet),
            "bet" => Ok(Strategy::Bet),
            _ => Err(Error::param(format!("unknown strategy {s:?}"))),
        }
    }
}

/// Items whose single-item support reaches `minsup`, in alphabet order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrequentItems {
    items: Vec<Symbol>,
}

impl FrequentItems {
    pub fn symbols(&self) -> &[Symbol] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self, alphabet: &Alphabet) -> Vec<Item> {
        alphabet.items_of(&self.items)
    }
}

/// Frequent length-two patterns `x[a,b]y` with `x, y` frequent items.
/// Stored as a dense |Σ|×|Σ| bitmap.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrequentPairs {
    width: usize,
    bits: Vec<bool>,
    count: usize,
}

impl FrequentPairs {
    pub fn empty(alphabet_len: usize) -> Self {
        FrequentPairs {
            width: alphabet_len,
            bits: vec![false; alphabet_len * alphabet_len],
            count: 0,
        }
    }

    pub fn insert(&mut self, x: Symbol, y: Symbol) {
        let slot = &mut self.bits[x.index() * self.width + y.index()];
        if !*slot {
            *slot = true;
            self.count += 1;
        }
    }

    #[inline]
    pub fn contains(&self, x: Symbol, y: Symbol) -> bool {
        x.index() < self.width
            && y.index() < self.width
            && self.bits[x.index() * self.width + y.index()]
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Pairs in (x, y) order.
    pub fn pairs(&self) -> Vec<(Symbol, Symbol)> {
        (0..self.bits.len())
            .filter(|&i| self.bits[i])
            .map(|i| (Symbol((i / self.width) as u32), Symbol((i % self.width) as u32)))
            .collect()
    }
}

pub fn frequent_items(db: &IndexedDatabase, minsup: f64) -> FrequentItems {
    let mut counts = vec![0usize; db.alphabet().len()];
    for s in db.sequences() {
        for (i, arr) in s.arrays().iter().enumerate() {
            counts[i] += arr.len();
        }
    }
    let items = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c as f64 >= minsup && c > 0)
        .map(|(i, _)| Symbol(i as u32))
        .collect();
    FrequentItems { items }
}

/// F2 over the join F1 × F1.
pub fn frequent_pairs(
    db: &IndexedDatabase,
    f1: &FrequentItems,
    gap: GapConstraint,
    minsup: f64,
) -> FrequentPairs {
    frequent_pairs_with(db, f1, gap, minsup, false)
}

pub fn frequent_pairs_with(
    db: &IndexedDatabase,
    f1: &FrequentItems,
    gap: GapConstraint,
    minsup: f64,
    parallel: bool,
) -> FrequentPairs {
    let mut f2 = FrequentPairs::empty(db.alphabet().len());
    for &x in f1.symbols() {
        for &y in f1.symbols() {
            let sup = db_support_symbols(db, &[x, y], gap, parallel);
            if sup as f64 >= minsup && sup > 0 {
                f2.insert(x, y);
            }
        }
    }
    f2
}

/// Candidate extension items for a pattern ending in `last`, in alphabet order.
/// `pruned_by_bet` receives the number of F1 items rejected by the pair test.
pub fn extension_items(
    last: Symbol,
    f1: &FrequentItems,
    f2: &FrequentPairs,
    strategy: Strategy,
    alphabet_len: usize,
    pruned_by_bet: &mut usize,
) -> Vec<Symbol> {
    match strategy {
        Strategy::Aet => (0..alphabet_len as u32).map(Symbol).collect(),
        Strategy::Fet => f1.symbols().to_vec(),
        Strategy::Bet => {
            let out: Vec<Symbol> = f1
                .symbols()
                .iter()
                .copied()
                .filter(|&y| f2.contains(last, y))
                .collect();
            *pruned_by_bet += f1.len() - out.len();
            out
        }
    }
}

/// Candidate patterns `q·y` under `strategy`.
pub fn extend(
    q: &[Symbol],
    f1: &FrequentItems,
    f2: &FrequentPairs,
    strategy: Strategy,
    alphabet: &Alphabet,
) -> Vec<Vec<Symbol>> {
    let Some(&last) = q.last() else {
        return Vec::new();
    };
    let mut pruned = 0;
    extension_items(last, f1, f2, strategy, alphabet.len(), &mut pruned)
        .into_iter()
        .map(|y| {
            let mut r = q.to_vec();
            r.push(y);
            r
        })
        .collect()
}
