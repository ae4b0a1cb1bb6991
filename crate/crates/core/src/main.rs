use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cumentropy::commands::{
    cmd_bounds, cmd_entropy, cmd_harter, cmd_ingest, cmd_oracle, cmd_series, cmd_table1, parse_measures, Format,
    Options, OutputRecord, Truncation,
};
use cumentropy::series::DEFAULT_M_MAX;
use cumentropy::{Error, Extreme, SeriesKind};

#[derive(Parser)]
#[command(name = "cumentropy", version, about = "Cumulative entropies, order-statistic series and bounds")]
struct Cli {
    /// Output format: json or csv.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    /// Quadrature tolerance (absolute and relative).
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Seed for Monte Carlo commands.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropies of a distribution by quadrature.
    Entropy {
        /// Distribution, e.g. `exp(lambda=2)` or `table1:row4`.
        spec: String,
        #[arg(long, default_value = "cre,ce,wcre,wce")]
        measures: String,
    },
    /// Truncated order-statistic series with a certified bracket.
    Series {
        spec: String,
        /// cre, ce, wcre, wce or sum.
        #[arg(long, default_value = "cre")]
        measure: SeriesKind,
        /// Number of terms, or `auto` to grow until the bracket is narrow enough.
        #[arg(long, default_value = "auto")]
        m: Truncation,
        /// Target bracket width for `--m auto`.
        #[arg(long, default_value_t = 0.01)]
        width: f64,
        #[arg(long, default_value_t = DEFAULT_M_MAX)]
        m_max: usize,
        /// Write the per-term ledger to this CSV file.
        #[arg(long)]
        terms_out: Option<PathBuf>,
    },
    /// Every bound with its applicability and slack.
    Bounds { spec: String },
    /// Recompute the six-row reference table and compare.
    Table1,
    /// Normal-law series sum against the symmetric-law bound sum.
    Harter {
        #[arg(long, default_value_t = 99)]
        m: usize,
    },
    /// Monte Carlo estimate of an extreme order-statistic moment.
    Oracle {
        spec: String,
        /// largest or smallest.
        #[arg(long, default_value = "largest")]
        which: Extreme,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        order: u32,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Plug-in entropies of a sample file (one value per line, `#` comments).
    Ingest {
        path: PathBuf,
        #[arg(long, default_value = "cre,ce,wcre,wce")]
        measures: String,
    },
}

fn run(cli: &Cli) -> Result<OutputRecord, Error> {
    let opts = Options {
        tol: cli.tol,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Entropy { spec, measures } => cmd_entropy(spec, &parse_measures(measures)?, &opts),
        Command::Series {
            spec,
            measure,
            m,
            width,
            m_max,
            terms_out,
        } => cmd_series(spec, *measure, *m, *width, *m_max, terms_out.as_deref(), &opts),
        Command::Bounds { spec } => cmd_bounds(spec, &opts),
        Command::Table1 => cmd_table1(&opts),
        Command::Harter { m } => cmd_harter(*m, &opts),
        Command::Oracle {
            spec,
            which,
            n,
            order,
            samples,
            threads,
        } => cmd_oracle(spec, *which, *n, *order, *samples, *threads, &opts),
        Command::Ingest { path, measures } => cmd_ingest(path, &parse_measures(measures)?, &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(record) => {
            print!("{}", record.render(cli.format));
            for e in &record.errors {
                eprintln!("error: {e}");
            }
            if record.success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) | Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
