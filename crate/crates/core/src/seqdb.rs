//! Sequence databases: items, sequences, gap-constrained patterns, text
//! formats, and the per-item index arrays used by the matcher.
//!
//! Positions are 1-based everywhere they leave this crate. Items are
//! opaque tokens ordered lexicographically by their bytes; that order fixes
//! symbol ids, candidate iteration order, and therefore output order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A single item (token). Compared and ordered by its bytes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Item(Arc<str>);

impl Item {
    pub fn new(token: &str) -> Result<Self> {
        if token.is_empty() {
            return Err(Error::param("item token must be non-empty"));
        }
        Ok(Item(Arc::from(token)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<char> for Item {
    fn from(c: char) -> Self {
        Item(Arc::from(c.to_string()))
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Split a string into one item per (non-whitespace) character.
pub fn items_from_chars(s: &str) -> Vec<Item> {
    s.chars().filter(|c| !c.is_whitespace()).map(Item::from).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    /// Line number (chars/tokens formats) or header text (fasta).
    pub id: String,
    pub items: Vec<Item>,
}

impl Sequence {
    pub fn new(id: impl Into<String>, items: Vec<Item>) -> Self {
        Sequence { id: id.into(), items }
    }

    pub fn from_chars(id: impl Into<String>, s: &str) -> Self {
        Sequence::new(id, items_from_chars(s))
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Dense id of an item within one [`Alphabet`]. Symbol order equals item order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u32);

impl Symbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Sorted, deduplicated set of items with a symbol lookup.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    items: Vec<Item>,
    lookup: HashMap<Item, Symbol>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn from_items<'a>(items: impl IntoIterator<Item = &'a Item>) -> Self {
        let set: BTreeSet<&Item> = items.into_iter().collect();
        let items: Vec<Item> = set.into_iter().cloned().collect();
        let lookup = items
            .iter()
            .enumerate()
            .map(|(i, it)| (it.clone(), Symbol(i as u32)))
            .collect();
        Alphabet { items, lookup }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.items.len() as u32).map(Symbol)
    }

    pub fn symbol(&self, item: &Item) -> Option<Symbol> {
        self.lookup.get(item).copied()
    }

    pub fn item(&self, sym: Symbol) -> &Item {
        &self.items[sym.index()]
    }

    /// Map items to symbols; `None` if any item is not in the alphabet.
    pub fn resolve(&self, items: &[Item]) -> Option<Vec<Symbol>> {
        items.iter().map(|it| self.symbol(it)).collect()
    }

    pub fn items_of(&self, syms: &[Symbol]) -> Vec<Item> {
        syms.iter().map(|&s| self.item(s).clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceDatabase {
    sequences: Vec<Sequence>,
    alphabet: Alphabet,
}

impl SequenceDatabase {
    pub fn new(sequences: Vec<Sequence>) -> Self {
        let alphabet = Alphabet::from_items(sequences.iter().flat_map(|s| s.items.iter()));
        SequenceDatabase { sequences, alphabet }
    }

    pub fn from_char_lines<'a>(lines: impl IntoIterator<Item = &'a str>) -> Self {
        let sequences = lines
            .into_iter()
            .enumerate()
            .map(|(i, l)| Sequence::from_chars((i + 1).to_string(), l))
            .collect();
        SequenceDatabase::new(sequences)
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn total_len(&self) -> usize {
        self.sequences.iter().map(Sequence::len).sum()
    }

    pub fn into_sequences(self) -> Vec<Sequence> {
        self.sequences
    }

    pub fn index(&self) -> IndexedDatabase {
        let sequences = self
            .sequences
            .iter()
            .map(|s| build_index(s, &self.alphabet))
            .collect();
        IndexedDatabase {
            alphabet: self.alphabet.clone(),
            sequences,
        }
    }
}

/// Sorted distinct items across all sequences.
pub fn alphabet_of(db: &SequenceDatabase) -> Vec<Item> {
    db.alphabet.items().to_vec()
}

/// Per-item position arrays for one sequence (1-based, strictly increasing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedSequence {
    len: usize,
    arrays: Vec<Vec<u32>>,
}

impl IndexedSequence {
    /// Build from symbol ids drawn from an alphabet of `alphabet_len` symbols.
    pub fn from_symbols(symbols: &[Symbol], alphabet_len: usize) -> Self {
        let mut arrays = vec![Vec::new(); alphabet_len];
        for (i, s) in symbols.iter().enumerate() {
            arrays[s.index()].push(i as u32 + 1);
        }
        IndexedSequence {
            len: symbols.len(),
            arrays,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Positions of `sym`; empty for symbols outside this sequence's alphabet.
    #[inline]
    pub fn positions(&self, sym: Symbol) -> &[u32] {
        self.arrays.get(sym.index()).map_or(&[], Vec::as_slice)
    }

    pub fn arrays(&self) -> &[Vec<u32>] {
        &self.arrays
    }
}

/// Build the index arrays of `seq`.
///
/// # Panics
///
/// If `seq` contains an item that is not in `alphabet`.
pub fn build_index(seq: &Sequence, alphabet: &Alphabet) -> IndexedSequence {
    let symbols: Vec<Symbol> = seq
        .items
        .iter()
        .map(|it| {
            alphabet
                .symbol(it)
                .unwrap_or_else(|| panic!("item {it:?} missing from alphabet"))
        })
        .collect();
    IndexedSequence::from_symbols(&symbols, alphabet.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedDatabase {
    alphabet: Alphabet,
    sequences: Vec<IndexedSequence>,
}

impl IndexedDatabase {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn sequences(&self) -> &[IndexedSequence] {
        &self.sequences
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn total_positions(&self) -> usize {
        self.sequences.iter().map(IndexedSequence::len).sum()
    }

    /// Database restricted to the sequences at `keep` (in the given order),
    /// sharing this database's alphabet.
    pub fn subset(&self, keep: &[usize]) -> IndexedDatabase {
        IndexedDatabase {
            alphabet: self.alphabet.clone(),
            sequences: keep.iter().map(|&i| self.sequences[i].clone()).collect(),
        }
    }
}

/// Gap constraint `[min, max]`: number of wildcards allowed between
/// consecutive pattern items.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GapConstraint {
    min: u32,
    max: u32,
}

impl GapConstraint {
    pub fn new(min: u32, max: u32) -> Result<Self> {
        if min > max {
            return Err(Error::param(format!(
                "gap lower bound {min} exceeds upper bound {max}"
            )));
        }
        Ok(GapConstraint { min, max })
    }

    pub fn min(&self) -> u32 {
        self.min
    }

    pub fn max(&self) -> u32 {
        self.max
    }

    /// Whether the wildcard count between positions `prev < next` is allowed.
    #[inline]
    pub fn admits(&self, prev: u32, next: u32) -> bool {
        next > prev && (self.min..=self.max).contains(&(next - prev - 1))
    }
}

impl fmt::Display for GapConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.min, self.max)
    }
}

impl FromStr for GapConstraint {
    type Err = Error;

    /// Parses `A,B`, optionally wrapped in brackets.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let (a, b) = body
            .split_once(',')
            .ok_or_else(|| Error::param(format!("gap must be A,B (got {s:?})")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::param(format!("gap bound {t:?} is not a non-negative integer")))
        };
        GapConstraint::new(parse(a)?, parse(b)?)
    }
}

/// Items plus one global gap constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    items: Vec<Item>,
    gap: GapConstraint,
}

impl Pattern {
    pub fn new(items: Vec<Item>, gap: GapConstraint) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::param("pattern must contain at least one item"));
        }
        Ok(Pattern { items, gap })
    }

    /// One item per character, e.g. `Pattern::from_chars("ad", gap)`.
    pub fn from_chars(s: &str, gap: GapConstraint) -> Result<Self> {
        Pattern::new(items_from_chars(s), gap)
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn gap(&self) -> GapConstraint {
        self.gap
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn last(&self) -> &Item {
        self.items.last().expect("pattern is non-empty")
    }

    /// `self · suffix`
    pub fn extended(&self, suffix: &[Item]) -> Pattern {
        let mut items = self.items.clone();
        items.extend_from_slice(suffix);
        Pattern {
            items,
            gap: self.gap,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, it) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, "{}", self.gap)?;
            }
            write!(f, "{it}")?;
        }
        Ok(())
    }
}

/// Input text layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Format {
    /// One sequence per line, one item per character.
    Chars,
    /// One sequence per line, items separated by `delimiter`.
    Tokens { delimiter: String },
    /// `>`-headed records; body lines concatenate into one sequence of characters.
    Fasta,
}

impl Format {
    pub fn tokens() -> Self {
        Format::Tokens {
            delimiter: ",".to_string(),
        }
    }

    /// Split a pattern/prefix string into items using this format's convention.
    pub fn split_items(&self, text: &str) -> Result<Vec<Item>> {
        match self {
            Format::Chars | Format::Fasta => Ok(items_from_chars(text)),
            Format::Tokens { delimiter } => text
                .split(delimiter.as_str())
                .map(|t| Item::new(t.trim()))
                .collect(),
        }
    }

    pub fn join_items(&self, items: &[Item]) -> String {
        let sep = match self {
            Format::Chars | Format::Fasta => "",
            Format::Tokens { delimiter } => delimiter.as_str(),
        };
        items
            .iter()
            .map(Item::as_str)
            .collect::<Vec<_>>()
            .join(sep)
    }
}

pub fn parse_database(text: &str, format: &Format) -> Result<SequenceDatabase> {
    let mut sequences = Vec::new();
    match format {
        Format::Chars => {
            for (no, line) in text.lines().enumerate() {
                let items = items_from_chars(line);
                if !items.is_empty() {
                    sequences.push(Sequence::new((no + 1).to_string(), items));
                }
            }
        }
        Format::Tokens { delimiter } => {
            if delimiter.is_empty() {
                return Err(Error::param("token delimiter must be non-empty"));
            }
            for (no, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let mut items = Vec::new();
                for tok in line.split(delimiter.as_str()) {
                    let tok = tok.trim();
                    if tok.is_empty() {
                        return Err(Error::Format {
                            line: no + 1,
                            message: "empty token".to_string(),
                        });
                    }
                    items.push(Item::new(tok)?);
                }
                sequences.push(Sequence::new((no + 1).to_string(), items));
            }
        }
        Format::Fasta => {
            let mut current: Option<Sequence> = None;
            for (no, line) in text.lines().enumerate() {
                if let Some(header) = line.strip_prefix('>') {
                    if let Some(seq) = current.take().filter(|s| !s.is_empty()) {
                        sequences.push(seq);
                    }
                    current = Some(Sequence::new(header.trim(), Vec::new()));
                } else {
                    let seq = current
                        .get_or_insert_with(|| Sequence::new((no + 1).to_string(), Vec::new()));
                    seq.items.extend(items_from_chars(line));
                }
            }
            if let Some(seq) = current.filter(|s| !s.is_empty()) {
                sequences.push(seq);
            }
        }
    }
    Ok(SequenceDatabase::new(sequences))
}

pub fn read_database(path: impl AsRef<Path>, format: &Format) -> Result<SequenceDatabase> {
    let bytes = fs::read(path.as_ref())?;
    let text = String::from_utf8(bytes).map_err(|e| {
        Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    })?;
    parse_database(&text, format)
}

/// Render a database back into `format`. Fails if an item cannot be
/// represented (multi-character item in a character format, or a token
/// containing the delimiter).
pub fn write_database(db: &SequenceDatabase, format: &Format) -> Result<String> {
    let mut out = String::new();
    for seq in db.sequences() {
        for it in &seq.items {
            let ok = match format {
                Format::Chars | Format::Fasta => {
                    let mut cs = it.as_str().chars();
                    matches!((cs.next(), cs.next()), (Some(c), None) if !c.is_whitespace() && c != '>')
                }
                Format::Tokens { delimiter } => {
                    !it.as_str().contains(delimiter.as_str())
                        && it.as_str().trim() == it.as_str()
                        && !it.as_str().contains('\n')
                }
            };
            if !ok {
                return Err(Error::param(format!(
                    "item {it:?} cannot be written in {format:?} format"
                )));
            }
        }
        if *format == Format::Fasta {
            out.push('>');
            out.push_str(&seq.id);
            out.push('\n');
        }
        out.push_str(&format.join_items(&seq.items));
        out.push('\n');
    }
    Ok(out)
}
