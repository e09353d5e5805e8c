//! `wfa`: command-line front end.
//!
//! Exit codes: 0 success, 1 the property asked about does not hold,
//! 2 usage or input error, 3 a construction hit its state limit.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wfa_core::automaton::{is_cycle_unambiguous, is_trim, is_unambiguous, trim};
use wfa_core::disambiguate::{disambiguate, DisambiguateOptions, RemovalOptions, Strategy};
use wfa_core::oracle::{equivalent_up_to, random_wfa, RandomWfaConfig};
use wfa_core::predis::{predisambiguate, DEFAULT_STATE_LIMIT};
use wfa_core::relation::{common_future_relation, complete_relation, Relation};
use wfa_core::stats::{stats_run, write_lattice_corpus, Operation, StatsConfig};
use wfa_core::twins::{has_twins, has_weak_twins};
use wfa_core::{determinize, parse_relation, parse_wfa, write_wfa, Error, SemiringKind, Wfa};

#[derive(Parser)]
#[command(
    name = "wfa",
    version,
    about = "Disambiguate, determinize and analyse weighted automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pre-disambiguate: print A' (or its state table with --dump).
    Predis {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        relation: RelationArg,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        state_limit: usize,
        /// Print one line per state instead of the automaton.
        #[arg(long)]
        dump: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Build an equivalent unambiguous automaton.
    Disambiguate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        relation: RelationArg,
        #[arg(long, value_enum, default_value_t = StrategyArg::Lists)]
        strategy: StrategyArg,
        /// Relaxed removal condition (lists strategy).
        #[arg(long)]
        relaxed: bool,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        state_limit: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Weighted determinization (tropical).
    Determinize {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        state_limit: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Test the (weak) twins property; exit 1 with a witness cycle if it fails.
    TwinsCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = TwinsMode::Weak)]
        mode: TwinsMode,
    },
    /// Compare two automata on every word up to --max-len.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Exit 0 if unambiguous, 1 otherwise.
    AmbiguityCheck {
        #[command(flatten)]
        input: Input,
    },
    /// Generate a random trim automaton, or a lattice corpus with --corpus.
    Random(RandomArgs),
    /// Expansion statistics over a directory of .wfa files.
    Stats {
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = OperationArg::Disambiguate)]
        op: OperationArg,
        #[arg(long, value_enum, default_value_t = StrategyArg::Lists)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        state_limit: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Summary of an automaton.
    Info {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Args)]
struct Input {
    /// Input file; `-` or absent reads stdin.
    input: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RelationArg {
    /// rstar, complete, or file:<path> (a file needs a trim input).
    #[arg(long, default_value = "rstar")]
    relation: String,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long, default_value_t = 5)]
    states: usize,
    #[arg(long, default_value_t = 2)]
    labels: usize,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    /// Allow cycles (the default generates src < dst transitions only).
    #[arg(long)]
    cyclic: bool,
    #[arg(long, default_value_t = 0)]
    min_weight: i64,
    #[arg(long, default_value_t = 5)]
    max_weight: i64,
    #[arg(long, default_value_t = 1)]
    initial: usize,
    #[arg(long, default_value_t = 1)]
    r#final: usize,
    #[arg(long, default_value = "tropical")]
    kind: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write a pinned lattice corpus into this directory instead.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Number of corpus files.
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Lists,
    Pairs,
}

#[derive(Clone, Copy, ValueEnum)]
enum TwinsMode {
    Weak,
    Classic,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperationArg {
    Disambiguate,
    Determinize,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Lists => Strategy::Lists,
            StrategyArg::Pairs => Strategy::Pairs,
        }
    }
}

/// Why a command stopped.
enum Failure {
    /// The answer is "no"; already reported on stdout.
    Negative,
    /// Malformed input, named by its source.
    Input(String),
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Error(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn read_text(path: Option<&Path>) -> Result<String, Error> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_wfa(path: Option<&Path>) -> Result<Wfa, Failure> {
    let name = path.map_or("<stdin>".into(), |p| p.display().to_string());
    parse_wfa(&read_text(path)?).map_err(|e| Failure::Input(format!("{name}: {e}")))
}

fn emit(out: &Output, text: &str) -> io::Result<()> {
    match &out.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

/// Loads the input and the relation over it. Built-in relations work on the
/// trimmed input; a relation file refers to the states as given, so the
/// input must already be trim.
fn load_with_relation(input: &Input, relation: &RelationArg) -> Result<(Wfa, Relation), Failure> {
    let a = read_wfa(input.input.as_deref())?;
    match relation.relation.as_str() {
        "rstar" => {
            let a = trim(&a);
            let rel = common_future_relation(&a)?;
            Ok((a, rel))
        }
        "complete" => {
            let a = trim(&a);
            let rel = complete_relation(&a);
            Ok((a, rel))
        }
        other => match other.strip_prefix("file:") {
            Some(path) => {
                if !is_trim(&a) {
                    return Err(Error::NotTrim.into());
                }
                let rel = parse_relation(&read_text(Some(Path::new(path)))?, a.num_states())?;
                let report = wfa_core::relation::validate_admissible(&a, &rel)?;
                if !report.is_admissible() {
                    return Err(Error::Precondition(format!(
                        "relation is not admissible ({} pairs of R* missing, {} incompatible)",
                        report.missing.len(),
                        report.incompatible.len()
                    ))
                    .into());
                }
                Ok((a, rel))
            }
            None => Err(Failure::Input(format!(
                "unknown relation `{other}` (expected rstar, complete or file:<path>)"
            ))),
        },
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Predis {
            input,
            relation,
            state_limit,
            dump,
            out,
        } => {
            let (a, rel) = load_with_relation(&input, &relation)?;
            let r = predisambiguate(&a, &rel, state_limit)?;
            let text = if dump {
                r.dump()
            } else {
                write_wfa(&r.automaton)
            };
            emit(&out, &text)?;
        }
        Command::Disambiguate {
            input,
            relation,
            strategy,
            relaxed,
            state_limit,
            out,
        } => {
            let (a, rel) = load_with_relation(&input, &relation)?;
            let options = DisambiguateOptions {
                removal: RemovalOptions {
                    strategy: strategy.into(),
                    relaxed,
                    ..RemovalOptions::default()
                },
                state_limit,
            };
            let d = disambiguate(&a, &rel, &options)?;
            emit(&out, &write_wfa(&d.automaton))?;
        }
        Command::Determinize {
            input,
            state_limit,
            out,
        } => {
            let a = trim(&read_wfa(input.input.as_deref())?);
            emit(&out, &write_wfa(&determinize(&a, state_limit)?))?;
        }
        Command::TwinsCheck { input, mode } => {
            let a = trim(&read_wfa(input.input.as_deref())?);
            let report = match mode {
                TwinsMode::Weak => has_weak_twins(&a)?,
                TwinsMode::Classic => has_twins(&a)?,
            };
            let name = match mode {
                TwinsMode::Weak => "weak twins property",
                TwinsMode::Classic => "twins property",
            };
            match report.witness {
                None => println!("{name}: holds"),
                Some(w) => {
                    println!("{name}: fails");
                    let states: Vec<String> =
                        w.states.iter().map(|(p, q)| format!("({p},{q})")).collect();
                    println!("cycle {}", states.join(" "));
                    println!("labels {}", a.alphabet().format_word(&w.labels));
                    println!("weight {}", w.weight);
                    return Err(Failure::Negative);
                }
            }
        }
        Command::Equiv {
            left,
            right,
            max_len,
        } => {
            let a = read_wfa(Some(&left))?;
            let b = read_wfa(Some(&right))?;
            match equivalent_up_to(&a, &b, max_len)?.counterexample {
                None => println!("equivalent"),
                Some(c) => {
                    println!(
                        "not equivalent: `{}` weighs {} vs {}",
                        a.alphabet().format_word(&c.word),
                        c.left,
                        c.right
                    );
                    return Err(Failure::Negative);
                }
            }
        }
        Command::AmbiguityCheck { input } => {
            let a = read_wfa(input.input.as_deref())?;
            if is_unambiguous(&a) {
                println!("unambiguous");
            } else {
                println!("ambiguous");
                return Err(Failure::Negative);
            }
        }
        Command::Random(args) => {
            if let Some(dir) = &args.corpus {
                let paths = write_lattice_corpus(dir, args.count, args.seed)?;
                println!("wrote {} files to {}", paths.len(), dir.display());
                return Ok(());
            }
            let kind: SemiringKind = args
                .kind
                .parse()
                .map_err(|e: String| Failure::Error(Error::Config(e)))?;
            let config = RandomWfaConfig {
                kind,
                num_states: args.states,
                alphabet_size: args.labels,
                density: args.density,
                acyclic: !args.cyclic,
                weight_range: (args.min_weight, args.max_weight),
                num_initial: args.initial,
                num_final: args.r#final,
                seed: args.seed,
            };
            emit(&args.out, &write_wfa(&random_wfa(&config)?))?;
        }
        Command::Stats {
            dir,
            op,
            strategy,
            state_limit,
            out,
        } => {
            let mut config = StatsConfig::new(match op {
                OperationArg::Disambiguate => Operation::Disambiguate,
                OperationArg::Determinize => Operation::Determinize,
            });
            config.disambiguation.removal.strategy = strategy.into();
            config.disambiguation.state_limit = state_limit;
            let report = stats_run(&dir, &config)
                .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
            emit(&out, &report.render())?;
        }
        Command::Info { input } => {
            let a = read_wfa(input.input.as_deref())?;
            let yes_no = |b: bool| if b { "yes" } else { "no" };
            println!("kind {}", a.kind());
            println!("alphabet {}", a.alphabet().tokens().join(" "));
            println!("states {}", a.num_states());
            println!("transitions {}", a.num_transitions());
            println!("size {}", a.size());
            println!("initial {}", a.initials().len());
            println!("final {}", a.finals().len());
            println!("trim {}", yes_no(is_trim(&a)));
            println!("deterministic {}", yes_no(a.is_deterministic()));
            println!("unambiguous {}", yes_no(is_unambiguous(&a)));
            println!("cycle-unambiguous {}", yes_no(is_cycle_unambiguous(&a)));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Input(message)) => {
            eprintln!("wfa: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Error(e)) => {
            eprintln!("wfa: {e}");
            ExitCode::from(if e.is_limit() { 3 } else { 2 })
        }
    }
}
