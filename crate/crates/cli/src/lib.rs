//! Command dispatch for the `mesh-array` binary.
//!
//! Every command renders into a [`CommandResult`] instead of printing, so the
//! exit-code contract can be exercised in tests: `0` success, `1` a requested
//! check failed, `2` usage or I/O error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mesh_array::conformance::{run_suite, ReferenceArtifacts};
use mesh_array::matrix::random_pair;
use mesh_array::placement::placement_table;
use mesh_array::scramble::{block_descramble, block_scramble, order_table, ORDER_TABLE_MAX_N};
use mesh_array::sim::{
    simulate, symmetric_readout_bound, symmetric_readout_time, ArrayKind, ReportSummary, SimConfig,
};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mesh-array",
    version,
    about = "Mesh and standard systolic array toolkit"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Seed for generated input matrices.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the command's output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Mesh,
    Standard,
}

impl From<Kind> for ArrayKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Mesh => ArrayKind::Mesh,
            Kind::Standard => ArrayKind::Standard,
        }
    }
}

fn dimension(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a dimension >= 1, got {s:?}")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the mesh placement table for an n x n array.
    Table {
        #[arg(long, value_parser = dimension)]
        n: usize,
    },
    /// Multiply seeded random matrices on a simulated array.
    Simulate(SimulateArgs),
    /// Scramble a file in n x n byte blocks.
    Scramble {
        #[arg(long, value_parser = dimension)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        input: PathBuf,
    },
    /// Undo `scramble`; n and k are read from the file header.
    Descramble {
        #[arg(long)]
        input: PathBuf,
    },
    /// Order and cycle structure of the scrambling permutation.
    Order(OrderArgs),
    /// Check every generated artifact against the reference tables.
    VerifyPaper,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Kind::Mesh)]
    pub kind: Kind,
    #[arg(long, value_parser = dimension)]
    pub n: usize,
    /// Write the per-MAC trace as JSON lines to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Also report the symmetric-product readout step and its bound.
    #[arg(long)]
    pub symmetric: bool,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    #[arg(long, value_parser = dimension, conflicts_with_all = ["from", "to"])]
    pub n: Option<usize>,
    #[arg(long, value_parser = dimension, requires = "to")]
    pub from: Option<usize>,
    #[arg(long, value_parser = dimension, requires = "from")]
    pub to: Option<usize>,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: impl Into<Vec<u8>>) -> Self {
        Self {
            exit_code: EXIT_OK,
            stdout: stdout.into(),
            stderr: String::new(),
        }
    }

    fn with_verdict(mut self, passed: bool) -> Self {
        if !passed {
            self.exit_code = EXIT_CHECK_FAILED;
        }
        self
    }

    fn error(err: anyhow::Error) -> Self {
        Self {
            exit_code: EXIT_USAGE,
            stdout: Vec::new(),
            stderr: format!("error: {err:#}\n"),
        }
    }

    pub fn stdout_str(&self) -> &str {
        std::str::from_utf8(&self.stdout).unwrap_or("<binary>")
    }
}

/// Simulation report as exported by `simulate --format json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulateOutput {
    #[serde(flatten)]
    pub report: ReportSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub readout: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
}

pub fn run(cli: &Cli) -> CommandResult {
    run_with(cli, &ReferenceArtifacts::embedded())
}

/// As [`run`], with the reference artifacts `verify-paper` checks against.
pub fn run_with(cli: &Cli, refs: &ReferenceArtifacts) -> CommandResult {
    let result = match &cli.command {
        Command::Table { n } => cmd_table(*n, cli.format),
        Command::Simulate(args) => cmd_simulate(args, cli.format, cli.seed),
        Command::Scramble { n, k, input } => cmd_scramble(*n, *k, input),
        Command::Descramble { input } => cmd_descramble(input),
        Command::Order(args) => cmd_order(args, cli.format),
        Command::VerifyPaper => cmd_verify_paper(refs, cli.format),
    };
    let mut result = result.unwrap_or_else(CommandResult::error);
    if let Some(path) = &cli.out {
        if result.exit_code != EXIT_USAGE {
            if let Err(e) = fs::write(path, &result.stdout) {
                return CommandResult::error(
                    anyhow::Error::new(e).context(format!("writing {}", path.display())),
                );
            }
            result.stdout.clear();
        }
    }
    result
}

pub fn cmd_table(n: usize, format: Format) -> Result<CommandResult> {
    let table = placement_table(n)?;
    let out = match format {
        Format::Pretty => table.to_pretty(),
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json()? + "\n",
    };
    Ok(CommandResult::ok(out))
}

pub fn cmd_simulate(args: &SimulateArgs, format: Format, seed: u64) -> Result<CommandResult> {
    let n = args.n;
    let (a, b) = random_pair(n, seed)?;
    let mut config = SimConfig::new(args.kind.into(), n);
    if args.trace.is_some() {
        config = config.with_trace();
    }
    let report = simulate(config, &a, &b)?;
    if let (Some(path), Some(trace)) = (&args.trace, &report.trace) {
        let file =
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        trace
            .write_json_lines(std::io::BufWriter::new(file))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let readout = args
        .symmetric
        .then(|| symmetric_readout_time(n))
        .transpose()?;
    let bound = args.symmetric.then(|| symmetric_readout_bound(n));
    let verdict = |ok: bool| if ok { "ok" } else { "FAILED" };

    let out = match format {
        Format::Pretty => {
            let mut s = format!(
                "steps={} oracle={}\n",
                report.total_steps,
                verdict(report.oracle_ok)
            );
            if !report.placement_ok {
                s.push_str("placement=FAILED\n");
            }
            if let (Some(r), Some(b)) = (readout, bound) {
                let _ = writeln!(s, "readout={r} bound={b}");
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("kind,n,total_steps,placement_ok,oracle_ok");
            if args.symmetric {
                s.push_str(",readout,bound");
            }
            let _ = write!(
                s,
                "\n{},{},{},{},{}",
                report.kind, n, report.total_steps, report.placement_ok, report.oracle_ok
            );
            if let (Some(r), Some(b)) = (readout, bound) {
                let _ = write!(s, ",{r},{b}");
            }
            s.push('\n');
            s
        }
        Format::Json => {
            let out = SimulateOutput {
                report: report.summary(),
                readout,
                bound,
            };
            serde_json::to_string(&out)? + "\n"
        }
    };
    let passed =
        report.oracle_ok && report.placement_ok && readout.zip(bound).is_none_or(|(r, b)| r <= b);
    Ok(CommandResult::ok(out).with_verdict(passed))
}

pub fn cmd_scramble(n: usize, k: u32, input: &PathBuf) -> Result<CommandResult> {
    let payload = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    Ok(CommandResult::ok(block_scramble(&payload, n, k)?))
}

pub fn cmd_descramble(input: &PathBuf) -> Result<CommandResult> {
    let data = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    Ok(CommandResult::ok(block_descramble(&data)?))
}

pub fn cmd_order(args: &OrderArgs, format: Format) -> Result<CommandResult> {
    let (from, to) = match (args.n, args.from, args.to) {
        (Some(n), None, None) => (n, n),
        (None, Some(f), Some(t)) => (f, t),
        _ => anyhow::bail!("give either --n or both --from and --to (max {ORDER_TABLE_MAX_N})"),
    };
    let table = order_table(from, to)?;
    let out = match format {
        Format::Pretty => table.to_pretty(),
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json()? + "\n",
    };
    Ok(CommandResult::ok(out))
}

pub fn cmd_verify_paper(refs: &ReferenceArtifacts, format: Format) -> Result<CommandResult> {
    let suite = run_suite(refs)?;
    let out = match format {
        Format::Json => serde_json::to_string(&suite)? + "\n",
        Format::Pretty | Format::Csv => {
            let mut s = String::new();
            for check in &suite.checks {
                let tag = if check.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{tag} {}: {}", check.name, check.detail);
            }
            let _ = writeln!(s, "errata ({}):", suite.errata.len());
            for e in &suite.errata {
                let _ = writeln!(s, "  {e}");
            }
            let _ = writeln!(
                s,
                "{}",
                if suite.passed() {
                    "verdict: pass"
                } else {
                    "verdict: FAIL"
                }
            );
            s
        }
    };
    Ok(CommandResult::ok(out).with_verdict(suite.passed()))
}
