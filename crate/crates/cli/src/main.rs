use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mcor::bench::{run_matrix_with, run_on, RunConfig, Threshold, Variant};
use mcor::eval::{recommend_from_rules, score_recommendations, split_db};
use mcor::record::{metric_record, rule_record, stat_record, Record, Value};
use mcor::verify::{run_checks, MatcherSizes, MinerSizes};
use mcor::{read_database, Error, Format, GapConstraint};

#[derive(Parser)]
#[command(name = "mcor", version, about = "Maximal co-occurrence rule mining over sequence databases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine maximal co-occurrence rules for one antecedent.
    Mine(MineArgs),
    /// Mine every co-occurrence pattern above an absolute support.
    Cop(CopArgs),
    /// Mine on the leading part of the database and score next-item recommendations on the rest.
    Eval(EvalArgs),
    /// Run the cartesian product of gaps, thresholds and variants.
    Bench(BenchArgs),
    /// Compare the matcher and miner with brute force on random instances.
    OracleCheck(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Chars,
    Tokens,
    Fasta,
}

#[derive(Args)]
struct DataArgs {
    /// Sequence database file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: FormatArg,
    /// Item separator for the tokens format.
    #[arg(long, default_value = ",")]
    delimiter: String,
    /// Antecedent items, written like a sequence of the input format.
    #[arg(long)]
    prefix: String,
    /// Worker threads for support computation (0 = all cores).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl DataArgs {
    fn format(&self) -> Format {
        match self.format {
            FormatArg::Chars => Format::Chars,
            FormatArg::Tokens => Format::Tokens {
                delimiter: self.delimiter.clone(),
            },
            FormatArg::Fasta => Format::Fasta,
        }
    }
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Gap constraint as MIN,MAX wildcards.
    #[arg(long)]
    gap: GapConstraint,
    #[arg(long, required_unless_present = "minsup")]
    mincf: Option<f64>,
    /// Absolute support threshold, for cop-miner only.
    #[arg(long, conflicts_with = "mincf")]
    minsup: Option<f64>,
    #[arg(long, default_value = "mcor-miner")]
    variant: Variant,
    /// Longest pattern the oracle enumerates.
    #[arg(long)]
    max_len: Option<usize>,
}

#[derive(Args)]
struct CopArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    gap: GapConstraint,
    #[arg(long)]
    minsup: f64,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    mine: MineArgs,
    #[arg(long, default_value_t = 0.8)]
    train_fraction: f64,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Repeat for a gap sweep.
    #[arg(long, required = true)]
    gap: Vec<GapConstraint>,
    /// Repeat for a confidence sweep.
    #[arg(long)]
    mincf: Vec<f64>,
    /// Absolute supports used for cop-miner.
    #[arg(long)]
    minsup: Vec<f64>,
    /// Repeat to compare variants.
    #[arg(long, default_value = "mcor-miner")]
    variant: Vec<Variant>,
    #[arg(long)]
    max_len: Option<usize>,
    /// Run configurations concurrently.
    #[arg(long)]
    concurrent: bool,
    /// Include wall-clock time in run records.
    #[arg(long)]
    timing: bool,
    /// Also print the rules of each run.
    #[arg(long)]
    rules: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Matcher instances.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Mining instances (default: a fifth of --trials).
    #[arg(long)]
    miner_trials: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    max_alphabet: usize,
    #[arg(long, default_value_t = 20)]
    max_seq_len: usize,
    #[arg(long, default_value_t = 4)]
    max_pattern: usize,
    #[arg(long, default_value_t = 3)]
    max_gap: u32,
    #[arg(long, default_value_t = 5)]
    miner_max_sequences: usize,
    #[arg(long, default_value_t = 15)]
    miner_max_seq_len: usize,
    #[arg(long, default_value_t = 2)]
    miner_max_gap: u32,
}

enum Failure {
    Usage(String),
    Data(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_parameter() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Data(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

fn emit(out: &mut Out, r: &Record) -> io::Result<()> {
    writeln!(out, "{}", r.to_line())
}

fn setup_pool(jobs: usize) -> Result<bool, Failure> {
    if jobs != 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(jobs != 1)
}

fn run_config(args: &MineArgs) -> Result<RunConfig, Failure> {
    let format = args.data.format();
    let threshold = match (args.mincf, args.minsup) {
        (_, Some(s)) => Threshold::MinSup(s),
        (Some(c), None) => Threshold::MinConf(c),
        (None, None) => unreachable!("enforced by clap"),
    };
    let cfg = RunConfig {
        dataset: args.data.input.clone(),
        prefix: format.split_items(&args.data.prefix)?,
        format,
        gap: args.gap,
        threshold,
        variant: args.variant,
        max_len: args.max_len,
        parallel: setup_pool(args.data.jobs)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_mine(args: &MineArgs, out: &mut Out) -> Result<(), Failure> {
    let cfg = run_config(args)?;
    let db = read_database(&cfg.dataset, &cfg.format)?;
    let idx = db.index();
    let s = run_on(&db, &idx, &cfg)?;
    if s.prefix_support == 0 {
        eprintln!("warning: the prefix does not occur in the database");
    }
    for r in &s.rules {
        emit(out, &rule_record(r))?;
    }
    emit(out, &stat_record("prefix_support", s.prefix_support))?;
    emit(out, &stat_record("minsup", s.minsup))?;
    emit(out, &stat_record("cor_count", s.cor_count))?;
    if let Some(n) = s.mcor_count {
        emit(out, &stat_record("mcor_count", n))?;
    }
    if cfg.variant != Variant::Oracle {
        for (name, v) in s.counters.entries() {
            emit(out, &stat_record(name, v))?;
        }
    }
    Ok(())
}

fn cmd_eval(args: &EvalArgs, out: &mut Out) -> Result<(), Failure> {
    let cfg = run_config(&args.mine)?;
    let db = read_database(&cfg.dataset, &cfg.format)?;
    let (train, test) = split_db(&db, args.train_fraction)?;
    if train.is_empty() {
        return Err(Failure::Usage(format!(
            "empty training set: {} sequences with train fraction {}",
            db.len(),
            args.train_fraction
        )));
    }
    let s = run_on(&train, &train.index(), &cfg)?;
    let recommended = recommend_from_rules(&s.rules);
    let score = score_recommendations(&recommended, &test, &cfg.pattern()?);
    for r in &s.rules {
        emit(out, &rule_record(r))?;
    }
    emit(out, &stat_record("train_sequences", train.len()))?;
    emit(out, &stat_record("test_sequences", test.len()))?;
    emit(out, &stat_record("recommended", Value::Items(recommended)))?;
    emit(out, &metric_record(&score))?;
    Ok(())
}

fn cmd_bench(args: &BenchArgs, out: &mut Out) -> Result<(), Failure> {
    let format = args.data.format();
    let prefix = format.split_items(&args.data.prefix)?;
    let parallel = setup_pool(args.data.jobs)?;
    let mut configs = Vec::new();
    for &variant in &args.variant {
        let thresholds: Vec<Threshold> = if variant.takes_minsup() {
            args.minsup.iter().map(|&s| Threshold::MinSup(s)).collect()
        } else {
            args.mincf.iter().map(|&c| Threshold::MinConf(c)).collect()
        };
        if thresholds.is_empty() {
            return Err(Failure::Usage(format!(
                "variant {variant} needs at least one --{}",
                if variant.takes_minsup() { "minsup" } else { "mincf" }
            )));
        }
        for &gap in &args.gap {
            for &threshold in &thresholds {
                configs.push(RunConfig {
                    dataset: args.data.input.clone(),
                    format: format.clone(),
                    prefix: prefix.clone(),
                    gap,
                    threshold,
                    variant,
                    max_len: args.max_len,
                    parallel,
                });
            }
        }
    }
    for c in &configs {
        c.validate()?;
    }
    for r in run_matrix_with(&configs, args.concurrent) {
        if let Err(e) = &r.outcome {
            eprintln!("error: {} {} {:?}: {e}", r.config.variant, r.config.gap, r.config.threshold);
        }
        if args.rules {
            for rr in r.rule_records() {
                emit(out, &rr)?;
            }
        }
        emit(out, &r.record(args.timing))?;
    }
    Ok(())
}

fn cmd_oracle_check(args: &OracleArgs, out: &mut Out) -> Result<(), Failure> {
    let matcher = MatcherSizes {
        max_alphabet: args.max_alphabet,
        max_len: args.max_seq_len,
        max_pattern: args.max_pattern,
        max_gap: args.max_gap,
    };
    let miner = MinerSizes {
        max_alphabet: args.max_alphabet,
        max_sequences: args.miner_max_sequences,
        max_len: args.miner_max_seq_len,
        max_gap: args.miner_max_gap,
    };
    let miner_trials = args.miner_trials.unwrap_or(args.trials / 5);
    let summary = run_checks(args.seed, args.trials, miner_trials, &matcher, &miner, out)?;
    if summary.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let res = match &cli.command {
        Command::Mine(a) => cmd_mine(a, &mut out),
        Command::Cop(a) => {
            let m = MineArgs {
                data: DataArgs {
                    input: a.data.input.clone(),
                    format: a.data.format,
                    delimiter: a.data.delimiter.clone(),
                    prefix: a.data.prefix.clone(),
                    jobs: a.data.jobs,
                },
                gap: a.gap,
                mincf: None,
                minsup: Some(a.minsup),
                variant: Variant::CopMiner,
                max_len: None,
            };
            cmd_mine(&m, &mut out)
        }
        Command::Eval(a) => cmd_eval(a, &mut out),
        Command::Bench(a) => cmd_bench(a, &mut out),
        Command::OracleCheck(a) => cmd_oracle_check(a, &mut out),
    };
    let flushed = out.flush();
    match (res, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Err(Failure::Usage(m)), _) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        (Err(Failure::Data(m)), _) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        (Err(Failure::Checks), _) => {
            eprintln!("oracle check failed");
            ExitCode::from(1)
        }
        (Ok(()), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
