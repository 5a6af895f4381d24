//! The `qwgrow` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use qwgrow_core::star::{compare_recurrence, RecurrenceConvention};
use qwgrow_core::walk::Propagator;
use qwgrow_core::{grow, CollapsePolicy, MetricsReport, RunConfig, StarChain};

use crate::config::parse_config;
use crate::experiment::{run_experiment, summary_csv};
use crate::formats::{self, GraphFormat};
use crate::report::{analyze_text, stars_table, RecurrenceDoc};
use crate::trace::trace_to_json_pretty;

/// Grow random graphs with quantum walkers and analyze them.
#[derive(Debug, Parser)]
#[command(name = "qwgrow", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grow one graph.
    Grow {
        /// Number of walkers.
        #[arg(long, default_value_t = 1)]
        walkers: usize,
        /// Mean collapse time.
        #[arg(long)]
        tau: f64,
        /// Nodes to add.
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutFormat::Edgelist)]
        format: OutFormat,
        #[arg(long, value_enum, default_value_t = PropagatorArg::Spectral)]
        propagator: PropagatorArg,
        /// Where walkers restart after each measurement.
        #[arg(long, value_enum, default_value_t = PolicyArg::MeasuredNode)]
        policy: PolicyArg,
    },
    /// Run a tau sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print metrics of a graph file (.edgelist or .graphml).
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        /// Overrides the extension-based format choice.
        #[arg(long, value_enum)]
        format: Option<GraphFormatArg>,
    },
    /// Tabulate closed-form star escape probabilities.
    Stars {
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 20)]
        max_k: usize,
    },
    /// Compare the star-chain recurrence with the exact determinant.
    Charpoly {
        /// Comma-separated leaf counts, e.g. "3,2,4".
        #[arg(long)]
        chain: String,
        /// Only this convention; both when absent.
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Edgelist,
    Graphml,
    TraceJson,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormatArg {
    Edgelist,
    Graphml,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PropagatorArg {
    Spectral,
    Chebyshev,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    MeasuredNode,
    NewNode,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    NodeCount,
    LeafCount,
}

/// Parses `args` (program name first), runs the command and maps failures
/// to a one-line message on stderr and a nonzero exit code.
pub fn cli_main<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    match execute(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Runs a parsed command, writing its report to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    match cli.command {
        Command::Grow { walkers, tau, steps, seed, out: path, format, propagator, policy } => {
            let mut config = RunConfig::new(walkers, tau, steps, seed);
            config.propagator = match propagator {
                PropagatorArg::Spectral => Propagator::Spectral,
                PropagatorArg::Chebyshev => Propagator::Chebyshev,
            };
            config.policy = match policy {
                PolicyArg::MeasuredNode => CollapsePolicy::MeasuredNode,
                PolicyArg::NewNode => CollapsePolicy::NewNode,
            };
            let trace = grow(&config)?;
            let bytes = match format {
                OutFormat::Edgelist => formats::serialize(&trace.final_graph, GraphFormat::EdgeList),
                OutFormat::Graphml => formats::serialize(&trace.final_graph, GraphFormat::GraphMl),
                OutFormat::TraceJson => trace_to_json_pretty(&trace).into_bytes(),
            };
            emit(path.as_deref(), &bytes, out)
        }
        Command::Sweep { config } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("cannot read {}", config.display()))?;
            let spec = parse_config(&text).with_context(|| config.display().to_string())?;
            let summary = run_experiment(&spec)?;
            out.write_all(summary_csv(&summary).as_bytes())?;
            Ok(())
        }
        Command::Analyze { input, format } => {
            let bytes =
                std::fs::read(&input).with_context(|| format!("cannot read {}", input.display()))?;
            let format = match format {
                Some(GraphFormatArg::Edgelist) => GraphFormat::EdgeList,
                Some(GraphFormatArg::Graphml) => GraphFormat::GraphMl,
                None => GraphFormat::from_path(&input),
            };
            let g = formats::deserialize(&bytes, format)
                .with_context(|| input.display().to_string())?;
            let m = MetricsReport::compute(&g, false)?;
            out.write_all(analyze_text(&m).as_bytes())?;
            Ok(())
        }
        Command::Stars { tau, max_k } => {
            if max_k == 0 {
                bail!("--max-k must be at least 1");
            }
            out.write_all(stars_table(tau, max_k)?.as_bytes())?;
            Ok(())
        }
        Command::Charpoly { chain, convention } => {
            let chain = StarChain::new(parse_chain(&chain)?)?;
            let conventions = match convention {
                Some(ConventionArg::NodeCount) => vec![RecurrenceConvention::NodeCount],
                Some(ConventionArg::LeafCount) => vec![RecurrenceConvention::LeafCount],
                None => vec![RecurrenceConvention::NodeCount, RecurrenceConvention::LeafCount],
            };
            let docs = conventions
                .into_iter()
                .map(|c| compare_recurrence(&chain, c).map(|r| RecurrenceDoc::from(&r)))
                .collect::<Result<Vec<_>, _>>()?;
            serde_json::to_writer_pretty(&mut *out, &docs)?;
            writeln!(out)?;
            Ok(())
        }
    }
}

fn emit(path: Option<&Path>, bytes: &[u8], out: &mut dyn Write) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("cannot write {}", p.display())),
        None => Ok(out.write_all(bytes)?),
    }
}

fn parse_chain(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<usize>().with_context(|| format!("invalid leaf count {t:?} in --chain"))
        })
        .collect()
}
