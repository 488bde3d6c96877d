//! Command-line front end.

mod commands;
pub mod grid;
pub mod report;
pub mod tags;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::directsum::EtaSpec;
use crate::error::{Error, Result};
use crate::indexing::DeltaSpec;
use crate::sparse::PContext;
use crate::synthesis::ConcaveFamily;
pub use report::{Format, Row};

#[derive(Debug, Parser)]
#[command(
    name = "lindy",
    version,
    about = "Lindenstrauss bases of l_p, greedy algorithms and their constants"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// σ, Λ and Γ on an m grid.
    Indexing(Options),
    /// δ from a concave profile; writes a `table:` file with --out.
    Synthesize(Options),
    /// Biorthogonality, norm facts and the embedding into l_p.
    Basis(Options),
    /// Quasi-greedy scan, democracy and restricted truncations.
    Greedy(Options),
    /// Bounds for k_m, k_m^c and L_m.
    Constants(Options),
    /// The quotient map onto step functions.
    Quotient(Options),
    /// Direct sums of initial sections.
    Directsum(Options),
    /// Dual basis quantities.
    Dual(Options),
    /// Every invariant battery at moderate size.
    Verify(Options),
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Exponent p in (0, 1], as a decimal or `1/q`.
    #[arg(long, default_value = "1")]
    pub p: String,
    /// δ: const:<c> | list:<c1,...>[;tail=<c>] | list:<c1>,<c2>,... | pow:<a> | table:<file>
    #[arg(long, default_value = "const:2")]
    pub delta: String,
    /// Block sizes: geom:<r> | linear | list:<n1,...>
    #[arg(long)]
    pub eta: Option<String>,
    /// m grid: 8 | 1..4096 | 2,4,8,...,4096 | 3,5,9
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Rational arithmetic; needs 1/p to be an integer.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 2048)]
    pub max_support: u64,
    /// Concave profile for synthesis: pow:<c> | log1p
    #[arg(long)]
    pub phi: Option<String>,
    /// Number of synthesized levels.
    #[arg(long)]
    pub len: Option<usize>,
    #[arg(long, default_value_t = 16)]
    pub blocks: usize,
}

/// Parsed and validated options.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub ctx: PContext,
    pub delta: DeltaSpec,
    pub eta: Option<EtaSpec>,
    pub grid: Option<Vec<u64>>,
    pub trials: Option<u64>,
    pub seed: u64,
    pub exact: bool,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub max_support: u64,
    pub phi: Option<ConcaveFamily>,
    pub len: Option<usize>,
    pub blocks: usize,
}

impl ExperimentConfig {
    pub fn from_options(o: &Options) -> Result<Self> {
        let ctx: PContext = o.p.parse()?;
        if o.exact {
            ctx.require_exact()?;
        }
        if o.max_support == 0 || o.blocks == 0 {
            return Err(Error::InvalidSpec(
                "--max-support and --blocks must be positive".into(),
            ));
        }
        Ok(ExperimentConfig {
            ctx,
            delta: o.delta.parse()?,
            eta: o.eta.as_deref().map(str::parse).transpose()?,
            grid: o.m.as_deref().map(grid::parse_grid).transpose()?,
            trials: o.trials,
            seed: o.seed,
            exact: o.exact,
            format: o.format,
            out: o.out.clone(),
            max_support: o.max_support,
            phi: o.phi.as_deref().map(str::parse).transpose()?,
            len: o.len,
            blocks: o.blocks,
        })
    }

    pub fn grid_or(&self, default: impl FnOnce() -> Vec<u64>) -> Vec<u64> {
        self.grid.clone().unwrap_or_else(default)
    }

    pub fn trials_or(&self, default: u64) -> u64 {
        self.trials.unwrap_or(default)
    }
}

/// Rows plus optional extra JSON carried next to them.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub rows: Vec<Row>,
    pub diagnostics: Option<serde_json::Value>,
}

impl From<Vec<Row>> for Report {
    fn from(rows: Vec<Row>) -> Self {
        Report {
            rows,
            diagnostics: None,
        }
    }
}

/// 2 for configuration errors, 3 for capacity, 1 for invariant violations.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapacityExceeded(_) => 3,
        Error::Invariant(_) | Error::Io(_) => 1,
        _ => 2,
    }
}

pub fn run(command: &Command) -> Result<Report> {
    let (opts, f): (&Options, fn(&ExperimentConfig) -> Result<Report>) = match command {
        Command::Indexing(o) => (o, commands::indexing),
        Command::Synthesize(o) => (o, commands::synthesize),
        Command::Basis(o) => (o, commands::basis),
        Command::Greedy(o) => (o, commands::greedy),
        Command::Constants(o) => (o, commands::constants),
        Command::Quotient(o) => (o, commands::quotient),
        Command::Directsum(o) => (o, commands::directsum),
        Command::Dual(o) => (o, commands::dual),
        Command::Verify(o) => (o, verify::verify),
    };
    let cfg = ExperimentConfig::from_options(opts)?;
    f(&cfg)
}

fn options(command: &Command) -> &Options {
    match command {
        Command::Indexing(o)
        | Command::Synthesize(o)
        | Command::Basis(o)
        | Command::Greedy(o)
        | Command::Constants(o)
        | Command::Quotient(o)
        | Command::Directsum(o)
        | Command::Dual(o)
        | Command::Verify(o) => o,
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("LINDY_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // A second call in the same process fails harmlessly.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

/// Parses `args`, runs the subcommand, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    configure_threads();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let opts = options(&cli.command);
    let text = match render_report(&report, opts.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    // For `synthesize`, --out receives the δ table and the report goes to stdout.
    let target = match cli.command {
        Command::Synthesize(_) => None,
        _ => opts.out.as_deref(),
    };
    if let Err(e) = report::emit(&text, target) {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    let failures: Vec<&Row> = report.rows.iter().filter(|r| !r.pass).collect();
    for row in &failures {
        eprintln!(
            "violation: {} at m={} (lower {:?}, upper {:?}){}",
            row.quantity,
            row.m.map_or("-".to_string(), |m| m.to_string()),
            row.lower,
            row.upper,
            if row.witness.is_empty() {
                String::new()
            } else {
                format!(": {}", row.witness)
            }
        );
    }
    if failures.is_empty() {
        0
    } else {
        1
    }
}

pub fn render_report(report: &Report, format: Format) -> Result<String> {
    match (&report.diagnostics, format) {
        (Some(diag), Format::Json) => {
            #[derive(serde::Serialize)]
            struct Wrapped<'a> {
                diagnostics: &'a serde_json::Value,
                rows: &'a [Row],
            }
            let value = Wrapped {
                diagnostics: diag,
                rows: &report.rows,
            };
            let mut s =
                serde_json::to_string_pretty(&value).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        _ => report::render(&report.rows, format),
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}
