//! `cosetmod`: modular data of affine Lie algebras and their diagonal cosets.
//!
//! Exit codes: 0 success, 2 usage, 3 numeric check failure, 4 hypothesis
//! refusal, 5 scale guard.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cosetmod::{Exec, Series};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "cosetmod", version, about = "Modular data, fusion rules and branching functions of diagonal affine cosets")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct AlgebraArgs {
    /// Cartan series, A to G.
    #[arg(long, value_parser = parse_series)]
    series: Series,
    #[arg(long)]
    rank: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Root-system data: h∨, positive roots, marks, comarks, |P/Q|, J.
    AlgebraInfo {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
    /// The level-k Kac–Peterson S-matrix.
    Smatrix {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        level: u32,
        /// Run the unitarity, normalization and congruence-class checks.
        #[arg(long)]
        check: bool,
    },
    /// Level-k fusion coefficients from the Verlinde formula.
    Fusion {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        level: u32,
        /// Omit products with the vacuum.
        #[arg(long)]
        sparse: bool,
        /// Distance-to-integer tolerance.
        #[arg(long, default_value_t = cosetmod::fusion::INTEGRALITY_TOL)]
        tol: f64,
    },
    /// The diagonal coset at levels (k, l).
    Coset {
        #[arg(value_enum)]
        action: CosetAction,
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        l: u32,
        /// Assume the coset is rational and C2-cofinite.
        #[arg(long)]
        assume_rational: bool,
        /// Distance-to-integer tolerance for fusion.
        #[arg(long, default_value_t = cosetmod::fusion::INTEGRALITY_TOL)]
        tol: f64,
    },
    /// Branching functions of L(k, dot) ⊗ L(l, ddot) over L(k+l).
    Branching {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        l: u32,
        /// Dynkin labels of the level-k weight, comma separated.
        #[arg(long, value_parser = parse_labels, allow_hyphen_values = true)]
        dot: Labels,
        /// Dynkin labels of the level-l weight, comma separated.
        #[arg(long, value_parser = parse_labels, allow_hyphen_values = true)]
        ddot: Labels,
        /// Truncation grade.
        #[arg(long, default_value_t = cosetmod::characters::DEFAULT_ORDER)]
        order: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CosetAction {
    Classify,
    Qdims,
    Globaldim,
    Smatrix,
    Fusion,
}

fn parse_series(s: &str) -> Result<Series, String> {
    s.parse()
}

/// Comma-separated Dynkin labels.
#[derive(Debug, Clone)]
struct Labels(Vec<i64>);

fn parse_labels(s: &str) -> Result<Labels, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("bad label `{t}`: {e}")))
        .collect::<Result<_, _>>()
        .map(Labels)
}

/// Honours `COSETMOD_THREADS`; one thread selects the sequential path.
fn configure_threads() -> Exec {
    let Ok(v) = std::env::var("COSETMOD_THREADS") else {
        return Exec::Parallel;
    };
    match v.trim().parse::<usize>() {
        Ok(1) => Exec::Sequential,
        Ok(n) if n > 1 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("warning: could not size the thread pool: {e}");
            }
            Exec::Parallel
        }
        _ => {
            eprintln!("warning: ignoring COSETMOD_THREADS={v}");
            Exec::Parallel
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = configure_threads();
    let result = match &cli.command {
        Command::AlgebraInfo { algebra } => commands::algebra_info(algebra.series, algebra.rank),
        Command::Smatrix { algebra, level, check } => {
            commands::smatrix(algebra.series, algebra.rank, *level, *check, exec)
        }
        Command::Fusion {
            algebra,
            level,
            sparse,
            tol,
        } => commands::fusion(algebra.series, algebra.rank, *level, *sparse, *tol, exec),
        Command::Coset {
            action,
            algebra,
            k,
            l,
            assume_rational,
            tol,
        } => commands::coset(*action, algebra.series, algebra.rank, *k, *l, *assume_rational, *tol, exec),
        Command::Branching {
            algebra,
            k,
            l,
            dot,
            ddot,
            order,
        } => commands::branching(algebra.series, algebra.rank, *k, *l, &dot.0, &ddot.0, *order),
    };

    let (report, code, message) = match result {
        Ok(outcome) => (Some(outcome.report), outcome.code, outcome.message),
        Err(e) => (e.report.map(|r| *r), e.code, Some(e.message)),
    };
    if let Some(report) = &report {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
        if let Err(e) = emit(report, cli.format, cli.out.as_ref()) {
            eprintln!("error: writing output: {e}");
            return ExitCode::FAILURE;
        }
    }
    if let Some(m) = message {
        eprintln!("error: {m}");
    }
    ExitCode::from(code)
}

fn emit(report: &output::Report, format: Format, out: Option<&PathBuf>) -> io::Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.render(format, &mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            report.render(format, &mut w)?;
            w.flush()
        }
    }
}
