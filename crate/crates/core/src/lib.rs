//! Gap-constrained nonoverlapping co-occurrence rule mining.
//!
//! Given a sequence database, an antecedent pattern with a gap constraint,
//! and a minimum confidence, [`miner::mine_mcor`] finds every maximal
//! co-occurrence rule. Supports are counted with the index-array matcher in
//! [`matcher`]; [`oracle`] holds brute-force references used for
//! verification.

pub mod bench;
pub mod candgen;
pub mod error;
pub mod eval;
pub mod matcher;
pub mod miner;
pub mod oracle;
pub mod prep;
pub mod record;
pub mod seqdb;
pub mod verify;

pub use candgen::Strategy;
pub use error::{Error, Result};
pub use miner::{mine_cop, mine_mcor, MinerConfig, MiningReport, Rule};
pub use seqdb::{
    parse_database, read_database, Format, GapConstraint, IndexedDatabase, Item, Pattern,
    Sequence, SequenceDatabase,
};
