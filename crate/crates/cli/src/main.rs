mod commands;
mod error;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use selfsim::frontends::{Multigeometric, PlanarIFS};
use selfsim::levelsets::DEFAULT_MAX_VALUES;
use selfsim::report::{records_csv, render_svg, ReportDocument};

use commands::{
    parse_ratio, parse_sigma, verdict_code, verify_document, DecideParams, IfsMode, IfsParams, MultigeoParams,
    RenderParams, SearchParams,
};
use error::{CliError, EXIT_USAGE};

/// Decide positive Lebesgue measure of self-similar digit sets exactly.
#[derive(Parser)]
#[command(name = "selfsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SearchLimits {
    /// Deepest level and largest frequency searched.
    #[arg(long, default_value_t = 8)]
    nmax: u32,
    /// Largest level tried per frequency (default: valuation + 3).
    #[arg(long)]
    kmax: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the decision chain on a digit set at q = 1/|Σ|.
    Decide {
        /// Comma-separated digits, e.g. 0,1,8,9 or 0,1,sqrt(2).
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[command(flatten)]
        limits: SearchLimits,
        /// Also report level intervals 1..=L.
        #[arg(long)]
        levels: Option<u32>,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Draw the level approximations as SVG rows and CSV intervals.
    Render {
        /// Comma-separated digits.
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        /// Contraction ratio a/b (default 1/|Σ|).
        #[arg(long)]
        q: Option<String>,
        /// Draw levels 1..=L.
        #[arg(long)]
        levels: u32,
        /// Write the rows as SVG to this file.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the intervals as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Abort when a level would hold more points than this.
        #[arg(long, default_value_t = DEFAULT_MAX_VALUES)]
        max_points: usize,
    },
    /// Classify the achievement set of a multigeometric series.
    Multigeo {
        /// Terms k_1,...,k_m.
        #[arg(long)]
        k: String,
        /// n, so that q = 1/n.
        #[arg(long)]
        base: u64,
        #[command(flatten)]
        limits: SearchLimits,
        /// Levels of intervals to report.
        #[arg(long, default_value_t = 3)]
        levels: u32,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decide projections of a planar IFS.
    Ifs {
        /// Translations a1,b1:a2,b2:...
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        /// Sweep all u = p/s with |p|, s at most this height.
        #[arg(long, conflicts_with = "u", required_unless_present = "u")]
        sweep: Option<u64>,
        /// A single projection parameter, rational or quadratic.
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[command(flatten)]
        limits: SearchLimits,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Look for positive-measure sets whose residues are incomplete.
    Search {
        /// Number of digits.
        #[arg(long)]
        size: usize,
        /// Largest digit.
        #[arg(long)]
        bound: u64,
        #[command(flatten)]
        limits: SearchLimits,
        /// Also write the report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Recompute the certificates of a saved report.
    Verify {
        /// A JSON report written by another command.
        report: PathBuf,
    },
}

fn emit(mut doc: ReportDocument, started: Instant, json: Option<&PathBuf>) -> Result<(), CliError> {
    doc.timing_ms = started.elapsed().as_millis() as u64;
    let text = doc.to_json();
    if let Some(path) = json {
        fs::write(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let started = Instant::now();
    match cli.command {
        Command::Decide { sigma, limits, levels, json } => {
            let params = DecideParams {
                sigma: parse_sigma(&sigma)?,
                n_max: limits.nmax,
                k_max: limits.kmax,
                levels,
            };
            let doc = params.run()?;
            let code = verdict_code(doc.decision.as_ref().expect("decide sets a decision").verdict);
            emit(doc, started, json.as_ref())?;
            Ok(code)
        }
        Command::Render { sigma, q, levels, svg, csv, json, max_points } => {
            let q = q.as_deref().map(parse_ratio).transpose()?;
            let params = RenderParams::new(parse_sigma(&sigma)?, q, levels, max_points)?;
            let doc = params.run()?;
            if let Some(path) = svg {
                fs::write(path, render_svg(&params.sigma, &doc.levels)?)?;
            }
            if let Some(path) = csv {
                fs::write(path, records_csv(&doc.levels))?;
            }
            emit(doc, started, json.as_ref())?;
            Ok(0)
        }
        Command::Multigeo { k, base, limits, levels, json } => {
            let params = MultigeoParams {
                mg: Multigeometric::parse(&k, base)?,
                n_max: limits.nmax,
                k_max: limits.kmax,
                levels,
            };
            emit(params.run()?, started, json.as_ref())?;
            Ok(0)
        }
        Command::Ifs { points, sweep, u, limits, json } => {
            let mode = match (sweep, u) {
                (Some(h), _) => IfsMode::Sweep(h),
                (None, Some(u)) => IfsMode::Single(u.parse()?),
                (None, None) => return Err(CliError::Usage("give --sweep or --u".into())),
            };
            let params = IfsParams {
                ifs: PlanarIFS::parse(&points)?,
                mode,
                n_max: limits.nmax,
                k_max: limits.kmax,
            };
            let doc = params.run()?;
            let code = doc.decision.as_ref().map_or(0, |d| verdict_code(d.verdict));
            emit(doc, started, json.as_ref())?;
            Ok(code)
        }
        Command::Search { size, bound, limits, json } => {
            let params = SearchParams {
                size,
                bound,
                n_max: limits.nmax,
                k_max: limits.kmax,
            };
            emit(params.run()?, started, json.as_ref())?;
            Ok(0)
        }
        Command::Verify { report } => {
            let text = fs::read_to_string(&report)?;
            let doc = ReportDocument::from_json(&text).map_err(|e| CliError::Usage(format!("bad report: {e}")))?;
            match verify_document(&doc) {
                Ok(()) => {
                    println!("accepted");
                    Ok(0)
                }
                Err(reason) => {
                    println!("rejected: {reason}");
                    Ok(1)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("selfsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
