mod cert;
mod demos;
mod load;
mod report;
mod verbs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shiftlab::{DyadicDistance, Point, Word};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "shiftlab", version, about = "Subshifts of Baire space: shadowing, chain transitivity and omega-limit sets")]
pub struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a subshift spec, optionally testing a point for membership.
    Check {
        #[arg(long, value_name = "FILE")]
        subshift: PathBuf,
        #[arg(long, value_parser = load::point)]
        point: Option<Point>,
        #[arg(long, default_value_t = 1024)]
        horizon: usize,
    },
    /// Local and global admissibility of a word.
    Allowed {
        #[arg(long, value_name = "FILE")]
        subshift: PathBuf,
        #[arg(long, value_parser = load::word)]
        word: Word,
    },
    /// The gluing implication uw, wv allowed => uwv allowed.
    Glue {
        #[arg(long, value_name = "FILE")]
        subshift: PathBuf,
        #[arg(long, value_parser = load::word, default_value = "")]
        u: Word,
        #[arg(long, value_parser = load::word)]
        w: Word,
        #[arg(long, value_parser = load::word, default_value = "")]
        v: Word,
    },
    /// Synthesize and verify a shadow of a finite pseudo-orbit.
    Shadow {
        #[arg(long, value_name = "FILE")]
        subshift: PathBuf,
        #[arg(long, value_name = "FILE")]
        po: PathBuf,
        #[arg(long, value_parser = load::dyadic)]
        eps: DyadicDistance,
        #[arg(long, default_value_t = 1024)]
        horizon: usize,
    },
    /// Search for a delta-chain; prints an absence certificate when none exists.
    Chain {
        #[arg(long, value_parser = load::point)]
        from: Point,
        #[arg(long, value_parser = load::point)]
        to: Point,
        #[arg(long, value_parser = load::dyadic)]
        delta: DyadicDistance,
        /// Set to search in; defaults to {from, to}.
        #[arg(long, value_name = "FILE")]
        set: Option<PathBuf>,
        /// Subshift for membership checks and the window-graph certificate.
        #[arg(long, value_name = "FILE")]
        subshift: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        max_len: usize,
    },
    /// Internal chain transitivity of a finite set at one scale and at all scales.
    Ict {
        #[arg(long, value_name = "FILE")]
        set: PathBuf,
        #[arg(long, value_parser = load::dyadic)]
        delta: DyadicDistance,
        #[arg(long, default_value_t = 64)]
        max_len: usize,
    },
    /// Build a point whose omega-limit set is the given set.
    Realize {
        #[arg(long, value_name = "FILE")]
        subshift: PathBuf,
        #[arg(long, value_name = "FILE")]
        set: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        /// Check omega equality at depths 1..=depth.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 64)]
        t0: usize,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 4096)]
        horizon: usize,
    },
    /// Depth-n prefixes of the omega-limit set of a point.
    Omega {
        #[arg(long, value_parser = load::point)]
        point: Point,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 64)]
        t0: usize,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Compare against the prefixes of this set.
        #[arg(long, value_name = "FILE")]
        set: Option<PathBuf>,
    },
    /// Run a pinned reproduction bundle.
    Demo {
        #[arg(value_enum)]
        name: demos::Demo,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// ICT construction when the subshift is SBT and the set is ICT, else the SFT construction.
    Auto,
    Ict,
    Invariant,
}

fn run(cli: Cli) -> anyhow::Result<Report> {
    match cli.command {
        Command::Check { subshift, point, horizon } => verbs::check(&subshift, point, horizon),
        Command::Allowed { subshift, word } => verbs::allowed(&subshift, &word),
        Command::Glue { subshift, u, w, v } => verbs::glue(&subshift, &u, &w, &v),
        Command::Shadow { subshift, po, eps, horizon } => verbs::shadow(&subshift, &po, eps, horizon),
        Command::Chain { from, to, delta, set, subshift, max_len } => {
            verbs::chain(&from, &to, delta, set.as_deref(), subshift.as_deref(), max_len)
        }
        Command::Ict { set, delta, max_len } => verbs::ict(&set, delta, max_len),
        Command::Realize { subshift, set, mode, depth, t0, levels, horizon } => {
            verbs::realize(&subshift, &set, mode, depth, (t0, levels), horizon)
        }
        Command::Omega { point, depth, t0, levels, set } => verbs::omega(&point, depth, t0, levels, set.as_deref()),
        Command::Demo { name } => Ok(demos::run(name)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = cli.json.clone();
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
            let failed = report.assertions.iter().filter(|a| !a.passed).count();
            eprintln!("{}: {} assertions, {failed} failed; report in {}", report.verb, report.assertions.len(), path.display());
        }
        None => print!("{text}"),
    }
    ExitCode::from(if report.passed { 0 } else { 1 })
}
