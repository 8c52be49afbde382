use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use csa_core::risk::ValuationMode;
use time::Date;

use crate::commands::{self, CreditSource, HistorySource, MarketInputs, PairSource, VarOptions};
use crate::error::{PricerError, Result};
use crate::formats::parse_date;
use crate::report::Report;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "CSA_PRICER_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "csa-pricer",
    version,
    about = "Collateral-adjusted pricing and risk for swap portfolios"
)]
pub struct Cli {
    /// Valuation date.
    #[arg(long, global = true, value_parser = parse_date)]
    pub anchor: Option<Date>,
    /// Also write <command>.json and <command>.txt here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Curve instruments CSV.
    #[arg(long)]
    pub curve: PathBuf,
    /// Short-rate lattice JSON; defaults to a = 0.03, sigma = 0.01, max step 0.25y.
    #[arg(long)]
    pub lattice: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BookArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Counterparty JSON, repeatable.
    #[arg(long = "counterparty", required = true)]
    pub counterparties: Vec<PathBuf>,
    /// CSA JSON, repeatable. Counterparties without one are uncollateralized.
    #[arg(long = "csa")]
    pub csas: Vec<PathBuf>,
    /// Trades JSON.
    #[arg(long)]
    pub trades: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    Riskfree,
    Risky,
    Csa,
}

impl From<Mode> for ValuationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Riskfree => ValuationMode::RiskFree,
            Mode::Risky => ValuationMode::Risky,
            Mode::Csa => ValuationMode::Collateralized,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bootstrap the discount curve and reprice its instruments.
    Bootstrap {
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Calibrate piecewise-constant hazard rates to CDS quotes.
    CalibrateCredit {
        #[command(flatten)]
        curve: CurveArgs,
        /// Counterparty JSON, repeatable.
        #[arg(long = "counterparty")]
        counterparties: Vec<PathBuf>,
        /// CDS quotes CSV (`tenor_years,spread`); needs --recovery.
        #[arg(long, requires = "recovery")]
        cds: Option<PathBuf>,
        #[arg(long)]
        recovery: Option<f64>,
        #[arg(long, default_value = "counterparty")]
        name: String,
    },
    /// Risk-free, risky and collateralized values of each netting set.
    Price {
        #[command(flatten)]
        book: BookArgs,
    },
    /// Collateralized par rates of the swaps in --trades.
    Parrate {
        #[command(flatten)]
        book: BookArgs,
        /// Existing trades the new swaps are netted with.
        #[arg(long)]
        portfolio: Option<PathBuf>,
    },
    /// CVA across effective thresholds.
    Cva {
        #[command(flatten)]
        book: BookArgs,
        /// Comma-separated effective thresholds; `inf` means no CSA.
        #[arg(long, value_delimiter = ',', value_parser = parse_threshold, required = true)]
        thresholds: Vec<f64>,
    },
    /// Historical VaR of one netting set.
    Var {
        #[command(flatten)]
        book: BookArgs,
        #[arg(long, default_value_t = 0.99)]
        confidence: f64,
        /// Holding period, e.g. `10d`.
        #[arg(long, default_value = "10d", value_parser = parse_horizon)]
        horizon: usize,
        #[arg(long, value_enum, default_value_t = Mode::Csa)]
        mode: Mode,
        /// Thresholds for the collateralized row; the CSA's own by default.
        #[arg(long, value_delimiter = ',', value_parser = parse_threshold)]
        thresholds: Vec<f64>,
        /// History CSV of daily changes in bp. Synthesized when absent.
        #[arg(long)]
        history: Option<PathBuf>,
        /// Days of synthetic history.
        #[arg(long, default_value_t = 500)]
        history_days: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Netting set to use when trades span several counterparties.
        #[arg(long)]
        counterparty_name: Option<String>,
    },
    /// Regress market premium spreads on CDS differences and model spreads.
    Regress {
        /// Curve instruments CSV; needed with --synthetic.
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long)]
        lattice: Option<PathBuf>,
        /// Pair CSV.
        #[arg(long, conflicts_with = "synthetic")]
        pairs: Option<PathBuf>,
        /// Generate and price this many synthetic pairs; needs --curve.
        #[arg(long)]
        synthetic: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Save the synthetic pairs as CSV.
        #[arg(long)]
        save_pairs: Option<PathBuf>,
    },
    /// Write a seeded synthetic history CSV.
    SynthHistory {
        #[arg(long, default_value_t = 500)]
        days: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output CSV.
        #[arg(long)]
        file: PathBuf,
    },
}

fn parse_threshold(s: &str) -> std::result::Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "none" => Ok(f64::INFINITY),
        t => t
            .parse::<f64>()
            .map_err(|e| format!("bad threshold '{s}': {e}")),
    }
}

fn parse_horizon(s: &str) -> std::result::Result<usize, String> {
    let t = s.trim();
    let digits = t.strip_suffix(['d', 'D']).unwrap_or(t);
    match digits.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("bad horizon '{s}', expected e.g. 10d")),
    }
}

fn market(anchor: Option<Date>, curve: &CurveArgs, book: Option<&BookArgs>) -> MarketInputs {
    MarketInputs {
        anchor,
        curve: curve.curve.clone(),
        counterparties: book.map(|b| b.counterparties.clone()).unwrap_or_default(),
        csas: book.map(|b| b.csas.clone()).unwrap_or_default(),
        lattice: curve.lattice.clone(),
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            PricerError::Input(format!(
                "{THREADS_ENV} must be a positive integer, got '{v}'"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| PricerError::Input(format!("cannot start worker threads: {e}")))
}

pub fn execute(cli: &Cli) -> Result<Report> {
    let anchor = cli.anchor;
    match &cli.command {
        Command::Bootstrap { curve } => commands::bootstrap(&market(anchor, curve, None)),
        Command::CalibrateCredit {
            curve,
            counterparties,
            cds,
            recovery,
            name,
        } => {
            let mut sources: Vec<CreditSource> = counterparties
                .iter()
                .cloned()
                .map(CreditSource::Json)
                .collect();
            if let (Some(path), Some(recovery)) = (cds, recovery) {
                sources.push(CreditSource::Csv {
                    path: path.clone(),
                    name: name.clone(),
                    recovery: *recovery,
                });
            }
            commands::calibrate_credit(&market(anchor, curve, None), &sources)
        }
        Command::Price { book } => {
            commands::price(&market(anchor, &book.curve, Some(book)), &book.trades)
        }
        Command::Parrate { book, portfolio } => commands::parrate(
            &market(anchor, &book.curve, Some(book)),
            &book.trades,
            portfolio.as_deref(),
        ),
        Command::Cva { book, thresholds } => commands::cva_sweep(
            &market(anchor, &book.curve, Some(book)),
            &book.trades,
            thresholds,
        ),
        Command::Var {
            book,
            confidence,
            horizon,
            mode,
            thresholds,
            history,
            history_days,
            seed,
            counterparty_name,
        } => {
            let opts = VarOptions {
                confidence: *confidence,
                horizon_days: *horizon,
                mode: (*mode).into(),
                thresholds: thresholds.clone(),
                history: match history {
                    Some(p) => HistorySource::File(p.clone()),
                    None => HistorySource::Synthetic {
                        days: *history_days,
                        seed: *seed,
                    },
                },
                counterparty: counterparty_name.clone(),
            };
            commands::var(
                &market(anchor, &book.curve, Some(book)),
                &book.trades,
                &opts,
            )
        }
        Command::Regress {
            curve,
            lattice,
            pairs,
            synthetic,
            seed,
            save_pairs,
        } => {
            let source = match (pairs, synthetic) {
                (Some(p), _) => PairSource::File(p.clone()),
                (None, Some(n)) => PairSource::Synthetic {
                    n: *n,
                    seed: *seed,
                    save: save_pairs.clone(),
                },
                (None, None) => {
                    return Err(PricerError::Input(
                        "regress needs --pairs or --synthetic".into(),
                    ))
                }
            };
            let inputs = match (curve, &source) {
                (Some(c), _) => MarketInputs {
                    anchor,
                    curve: c.clone(),
                    lattice: lattice.clone(),
                    ..MarketInputs::default()
                },
                (None, PairSource::Synthetic { .. }) => {
                    return Err(PricerError::Input("--synthetic needs --curve".into()));
                }
                (None, PairSource::File(_)) => MarketInputs::default(),
            };
            commands::regress(&inputs, &source)
        }
        Command::SynthHistory { days, seed, file } => commands::history(anchor, *days, *seed, file),
    }
}

fn write_file(path: PathBuf, contents: &str) -> Result<()> {
    fs::write(&path, contents).map_err(|source| PricerError::Io { path, source })
}

/// Run a parsed command line: compute, print, and write report files.
pub fn run(cli: Cli) -> Result<()> {
    let report = thread_pool()?.install(|| execute(&cli))?;
    let json = serde_json::to_string_pretty(&report.json)? + "\n";
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).map_err(|source| PricerError::Io {
            path: dir.clone(),
            source,
        })?;
        write_file(dir.join(format!("{}.json", report.name)), &json)?;
        write_file(dir.join(format!("{}.txt", report.name)), &report.text)?;
    }
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let shown = if cli.json { &json } else { &report.text };
    // a closed pipe is not worth an error exit
    let _ = lock.write_all(shown.as_bytes());
    Ok(())
}
