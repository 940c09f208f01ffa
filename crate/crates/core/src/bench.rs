//! Configuration matrices over datasets, thresholds and miner variants.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::candgen::Strategy;
use crate::error::{Error, Result};
use crate::miner::{mine_cop_with, mine_mcor, Counters, MinerConfig, Rule};
use crate::oracle::oracle_mine_mcor;
use crate::record::{rule_record, Record};
use crate::seqdb::{read_database, Format, GapConstraint, IndexedDatabase, Item, Pattern, SequenceDatabase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    McorMiner,
    McorNoFilt,
    McorAet,
    McorFet,
    McorNoScr,
    CopMiner,
    Oracle,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::McorMiner,
        Variant::McorNoFilt,
        Variant::McorAet,
        Variant::McorFet,
        Variant::McorNoScr,
        Variant::CopMiner,
        Variant::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::McorMiner => "mcor-miner",
            Variant::McorNoFilt => "mcor-nofilt",
            Variant::McorAet => "mcor-aet",
            Variant::McorFet => "mcor-fet",
            Variant::McorNoScr => "mcor-noscr",
            Variant::CopMiner => "cop-miner",
            Variant::Oracle => "oracle",
        }
    }

    /// Miner settings for the MCoR variants and CoP-Miner; `None` for the oracle.
    pub fn miner_config(self) -> Option<MinerConfig> {
        let base = MinerConfig::default();
        match self {
            Variant::McorMiner | Variant::CopMiner => Some(base),
            Variant::McorNoFilt => Some(base.with_filtering(false)),
            Variant::McorAet => Some(base.with_strategy(Strategy::Aet)),
            Variant::McorFet => Some(base.with_strategy(Strategy::Fet)),
            Variant::McorNoScr => Some(base.with_screening(false)),
            Variant::Oracle => None,
        }
    }

    pub fn takes_minsup(self) -> bool {
        self == Variant::CopMiner
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::param(format!("unknown variant {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Threshold {
    MinConf(f64),
    MinSup(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub dataset: PathBuf,
    pub format: Format,
    pub prefix: Vec<Item>,
    pub gap: GapConstraint,
    pub threshold: Threshold,
    pub variant: Variant,
    /// Bound on pattern length for the oracle; ignored by the miners.
    pub max_len: Option<usize>,
    /// Scan sequences on the current rayon pool.
    pub parallel: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prefix.is_empty() {
            return Err(Error::param("empty prefix"));
        }
        match (self.variant.takes_minsup(), self.threshold) {
            (true, Threshold::MinSup(s)) if s > 0.0 => {}
            (true, Threshold::MinSup(s)) => {
                return Err(Error::param(format!("minsup must be positive, got {s}")))
            }
            (true, _) => return Err(Error::param("cop-miner takes minsup, not mincf")),
            (false, Threshold::MinConf(c)) if c > 0.0 && c <= 1.0 => {}
            (false, Threshold::MinConf(c)) => {
                return Err(Error::param(format!("mincf must be in (0,1], got {c}")))
            }
            (false, _) => {
                return Err(Error::param(format!("{} takes mincf, not minsup", self.variant)))
            }
        }
        if self.variant == Variant::Oracle && self.max_len.is_none() {
            return Err(Error::param("oracle variant requires max_len"));
        }
        Ok(())
    }

    pub fn pattern(&self) -> Result<Pattern> {
        Pattern::new(self.prefix.clone(), self.gap)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub prefix_support: usize,
    pub minsup: f64,
    /// Frequent proper extensions of the prefix.
    pub cor_count: usize,
    /// `None` for CoP-Miner, which does not separate maximal rules.
    pub mcor_count: Option<usize>,
    pub counters: Counters,
    /// MCoRs, or every CoR for CoP-Miner.
    pub rules: Vec<Rule>,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub config: RunConfig,
    pub outcome: std::result::Result<RunSummary, String>,
    pub wall_time_ms: f64,
}

impl RunResult {
    /// One `run` record; timing is included only when asked for, so that
    /// default output is reproducible byte for byte.
    pub fn record(&self, with_timing: bool) -> Record {
        let c = &self.config;
        let mut r = Record::new("run")
            .field("dataset", c.dataset.display().to_string())
            .field("variant", c.variant.name())
            .field("prefix", c.prefix.as_slice())
            .field("gap", c.gap.to_string());
        r = match c.threshold {
            Threshold::MinConf(x) => r.field("mincf", x),
            Threshold::MinSup(x) => r.field("minsup_abs", x),
        };
        match &self.outcome {
            Ok(s) => {
                r = r
                    .field("status", "ok")
                    .field("prefix_support", s.prefix_support)
                    .field("minsup", s.minsup)
                    .field("cor_count", s.cor_count);
                r = match s.mcor_count {
                    Some(n) => r.field("mcor_count", n),
                    None => r.field("mcor_count", crate::record::Value::Null),
                };
                for (name, v) in s.counters.entries() {
                    r = r.field(name, v);
                }
            }
            Err(e) => r = r.field("status", "error").field("error", e.as_str()),
        }
        if with_timing {
            r = r.field("wall_time_ms", self.wall_time_ms);
        }
        r
    }

    pub fn rule_records(&self) -> Vec<Record> {
        match &self.outcome {
            Ok(s) => s.rules.iter().map(rule_record).collect(),
            Err(_) => Vec::new(),
        }
    }
}

/// Run one configuration against an already loaded database.
pub fn run_on(db: &SequenceDatabase, idx: &IndexedDatabase, cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let p = cfg.pattern()?;
    match (cfg.variant, cfg.threshold) {
        (Variant::Oracle, Threshold::MinConf(mincf)) => {
            let o = oracle_mine_mcor(db, &p, mincf, cfg.max_len.unwrap_or(usize::MAX))?;
            let rules = o
                .mcors
                .iter()
                .map(|(r, &s)| Rule {
                    antecedent: p.clone(),
                    consequent: r.clone(),
                    support: s,
                    confidence: s as f64 / o.prefix_support as f64,
                })
                .collect();
            Ok(RunSummary {
                prefix_support: o.prefix_support,
                minsup: o.minsup,
                cor_count: o.cors.len(),
                mcor_count: Some(o.mcors.len()),
                counters: Counters::default(),
                rules,
            })
        }
        (Variant::CopMiner, Threshold::MinSup(minsup)) => {
            let cfg_m = Variant::CopMiner.miner_config().unwrap().with_parallel(cfg.parallel);
            let r = mine_cop_with(idx, &p, minsup, &cfg_m)?;
            let rules = r.rules();
            Ok(RunSummary {
                prefix_support: r.prefix_support,
                minsup: r.minsup,
                cor_count: rules.len(),
                mcor_count: None,
                counters: r.counters,
                rules,
            })
        }
        (v, Threshold::MinConf(mincf)) => {
            let m_cfg = v.miner_config().expect("miner variant").with_parallel(cfg.parallel);
            let m = mine_mcor(idx, &p, mincf, &m_cfg)?;
            Ok(RunSummary {
                prefix_support: m.prefix_support,
                minsup: m.minsup,
                cor_count: m.cor_count,
                mcor_count: Some(m.mcor_count()),
                counters: m.counters,
                rules: m.rules,
            })
        }
        _ => unreachable!("validated"),
    }
}

fn timed(db: &SequenceDatabase, idx: &IndexedDatabase, cfg: &RunConfig) -> RunResult {
    let t = Instant::now();
    let outcome = run_on(db, idx, cfg).map_err(|e| e.to_string());
    RunResult {
        config: cfg.clone(),
        outcome,
        wall_time_ms: t.elapsed().as_secs_f64() * 1000.0,
    }
}

/// Run every configuration in order. Each dataset is read and indexed once.
pub fn run_matrix(configs: &[RunConfig]) -> Vec<RunResult> {
    run_matrix_with(configs, false)
}

/// With `concurrent`, configurations run in parallel on the rayon pool and
/// their timings are no longer comparable.
pub fn run_matrix_with(configs: &[RunConfig], concurrent: bool) -> Vec<RunResult> {
    type Loaded = std::result::Result<(SequenceDatabase, IndexedDatabase), String>;
    let mut cache: Vec<((PathBuf, Format), Loaded)> = Vec::new();
    for c in configs {
        let key = (c.dataset.clone(), c.format.clone());
        if !cache.iter().any(|(k, _)| *k == key) {
            let loaded = read_database(&c.dataset, &c.format)
                .map(|db| {
                    let idx = db.index();
                    (db, idx)
                })
                .map_err(|e| format!("{}: {e}", c.dataset.display()));
            cache.push((key, loaded));
        }
    }
    let run = |c: &RunConfig| {
        let loaded = &cache
            .iter()
            .find(|(k, _)| k.0 == c.dataset && k.1 == c.format)
            .expect("cached")
            .1;
        match loaded {
            Ok((db, idx)) => timed(db, idx, c),
            Err(e) => RunResult {
                config: c.clone(),
                outcome: Err(e.clone()),
                wall_time_ms: 0.0,
            },
        }
    };
    if concurrent {
        configs.par_iter().map(run).collect()
    } else {
        configs.iter().map(run).collect()
    }
}
