//! `qset`: parse, compare, label and count quasi-sets from the command line.
//!
//! Exit codes: 0 success, 1 usage or syntax error, 2 ill-formed formula or
//! input of the wrong shape, 3 property failures, 4 scale or overflow.

use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qset::labelling::{label, verify_weak_labelling};
use qset::notation::{parse, print_canonical};
use qset::relations::{ext_eq, indist};
use qset::statistics::{enumerate_occupancies, mb_weight, microstate_count};
use qset::suite::{run_suite, GenConfig};
use qset::{Entity, Error, StatKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exit {
    Success = 0,
    Usage = 1,
    IllFormed = 2,
    PropertyFailures = 3,
    Scale = 4,
}

impl From<&Error> for Exit {
    fn from(e: &Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::CountZero { .. }
            | Error::InvalidName(_)
            | Error::UniverseMiss(_)
            | Error::NotAMember(_)
            | Error::EmptyQset
            | Error::CardinalTooLarge { .. } => Exit::Usage,
            Error::IllFormedFormula(_) | Error::NotPure(_) | Error::MalformedPair(_) => Exit::IllFormed,
            Error::Overflow(_) | Error::ScaleExceeded(_) | Error::DepthExceeded { .. } => Exit::Scale,
        }
    }
}

/// A failure to report on standard error.
struct Failure {
    exit: Exit,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            exit: Exit::from(&e),
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            exit: Exit::Usage,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Parser)]
#[command(name = "qset", version, about = "Finite quasi-set model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form and quasi-cardinal of an expression.
    Parse {
        /// Qset notation, e.g. "[m:e*2, M:A]".
        #[arg(required_unless_present = "file", conflicts_with = "file")]
        expr: Option<String>,
        /// Read one expression per line; blank lines are skipped.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Compare two entities under ≡ and =_E.
    Eq {
        a: String,
        b: String,
        /// Which relations to evaluate.
        #[arg(long, value_enum, default_value_t = Relation::Both)]
        relation: Relation,
    },
    /// Label the elements of a pure weak singleton.
    Label { expr: String },
    /// Count microstates of n particles over k states.
    Stats {
        #[arg(long)]
        particles: u64,
        #[arg(long)]
        states: u64,
        #[arg(long, value_parser = parse_kind)]
        kind: StatKind,
        /// Also list every occupancy vector with its multinomial weight.
        #[arg(long)]
        enumerate: bool,
    },
    /// Run the property battery.
    Check {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        cases: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Relation {
    Both,
    Indist,
    ExtEq,
}

fn parse_kind(s: &str) -> Result<StatKind, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                Exit::Usage as u8
            } else {
                Exit::Success as u8
            });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let exit = match run(cli.command, &mut out) {
        Ok(exit) => exit,
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {f}");
            f.exit
        }
    };
    let _ = out.flush();
    ExitCode::from(exit as u8)
}

fn run(command: Command, out: &mut impl Write) -> Result<Exit, Failure> {
    match command {
        Command::Parse { expr: Some(expr), .. } => cmd_parse(&expr, out),
        Command::Parse { file: Some(path), .. } => {
            let text = std::fs::read_to_string(&path)?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                cmd_parse(line, out).map_err(|f| Failure {
                    message: format!("{}:{}: {f}", path.display(), i + 1),
                    ..f
                })?;
            }
            Ok(Exit::Success)
        }
        Command::Parse { .. } => unreachable!("clap requires an expression or --file"),
        Command::Eq { a, b, relation } => cmd_eq(&a, &b, relation, out),
        Command::Label { expr } => cmd_label(&expr, out),
        Command::Stats {
            particles,
            states,
            kind,
            enumerate,
        } => cmd_stats(particles, states, kind, enumerate, out),
        Command::Check { seed, cases } => cmd_check(seed, cases, out),
    }
}

fn cmd_parse(expr: &str, out: &mut impl Write) -> Result<Exit, Failure> {
    let e = parse(expr)?;
    writeln!(out, "{}", print_canonical(&e))?;
    if let Entity::Q(q) = &e {
        writeln!(out, "qc={}", q.qc())?;
    }
    Ok(Exit::Success)
}

fn cmd_eq(a: &str, b: &str, relation: Relation, out: &mut impl Write) -> Result<Exit, Failure> {
    let (x, y) = (parse(a)?, parse(b)?);
    if relation != Relation::ExtEq {
        writeln!(out, "indist={}", indist(&x, &y))?;
    }
    if relation == Relation::Indist {
        return Ok(Exit::Success);
    }
    match ext_eq(&x, &y) {
        Ok(v) => writeln!(out, "ext_eq={v}")?,
        Err(Error::IllFormedFormula(msg)) => {
            writeln!(out, "ext_eq=ill-formed")?;
            // Only an error when no requested relation had an answer.
            if relation == Relation::ExtEq {
                return Err(Failure {
                    exit: Exit::IllFormed,
                    message: format!("ill-formed formula: {msg}"),
                });
            }
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Exit::Success)
}

fn cmd_label(expr: &str, out: &mut impl Write) -> Result<Exit, Failure> {
    let x = match parse(expr)? {
        Entity::Q(q) => q,
        other => return Err(Error::NotPure(format!("{other} is not a qset")).into()),
    };
    let lw = label(&x)?;
    if !verify_weak_labelling(&lw)? {
        return Err(Failure {
            exit: Exit::PropertyFailures,
            message: format!("warehouse for {x} fails the weak-labelling check"),
        });
    }
    for (first, m) in lw.pairs()? {
        writeln!(out, "{m}: {first}")?;
    }
    writeln!(out, "qc(w)={}", lw.warehouse().qc())?;
    Ok(Exit::Success)
}

fn cmd_stats(n: u64, k: u64, kind: StatKind, enumerate: bool, out: &mut impl Write) -> Result<Exit, Failure> {
    let count = microstate_count(n, k, kind)?;
    let vectors = if enumerate {
        Some(enumerate_occupancies(n, k, kind.exclusion())?)
    } else {
        None
    };
    writeln!(out, "count={count}")?;
    for v in vectors.iter().flatten() {
        writeln!(out, "{v} weight={}", mb_weight(v)?)?;
    }
    Ok(Exit::Success)
}

fn cmd_check(seed: u64, cases: u64, out: &mut impl Write) -> Result<Exit, Failure> {
    let report = run_suite(&GenConfig::with_seed(seed), cases)?;
    writeln!(out, "{report}")?;
    Ok(if report.is_clean() {
        Exit::Success
    } else {
        Exit::PropertyFailures
    })
}
