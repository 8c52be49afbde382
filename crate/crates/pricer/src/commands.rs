//! One function per subcommand. Each loads its inputs, runs the core library and
//! returns a [`Report`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use csa_core::analysis::{
    apply_rates, ols, premium_spread, price_pair, synth_pair_dataset, RegressionResult, SynthParams,
};
use csa_core::credit::{bootstrap_hazards, par_cds_spread};
use csa_core::curve::{par_swap_rate, CurveInstrument, SwapConvention, ZeroCurve};
use csa_core::dates::{add_months, time_between, WeekendCalendar};
use csa_core::lattice::LatticeConfig;
use csa_core::pricing::{
    generic_par_rate, price_collateralized, solve_collateralized_par_rate, NettingSet, Product,
    SwapSide, Trade,
};
use csa_core::risk::{
    cva, historical_var, synth_history, threshold_sweep, HistoryParams, MarketHistory,
    ScenarioContext, ValuationMode,
};
use rayon::prelude::*;
use serde_json::{json, Value};
use time::Date;

use crate::error::{PricerError, Result};
use crate::formats::{
    self, format_date, load_curve, read_cds_csv, read_history, read_lattice, read_pairs,
    read_trades, write_history, write_pairs, BankSide, CounterpartyFile, CreditBook, PairRecord,
    TradeRecord,
};
use crate::report::{bp, ccy, j_bp, j_ccy, j_rate, pct, rate, Report, Table};

/// Files shared by the valuation commands.
#[derive(Debug, Clone, Default)]
pub struct MarketInputs {
    pub anchor: Option<Date>,
    pub curve: PathBuf,
    pub counterparties: Vec<PathBuf>,
    pub csas: Vec<PathBuf>,
    pub lattice: Option<PathBuf>,
}

pub const DEFAULT_ANCHOR: Date = time::macros::date!(2005 - 09 - 15);

struct Market {
    curve: ZeroCurve,
    book: CreditBook,
    lattice: LatticeConfig,
}

impl MarketInputs {
    fn anchor(&self) -> Date {
        self.anchor.unwrap_or(DEFAULT_ANCHOR)
    }

    fn load(&self) -> Result<Market> {
        let (_, curve) = load_curve(&self.curve, self.anchor())?;
        Ok(Market {
            curve,
            book: CreditBook::load(&self.counterparties, &self.csas)?,
            lattice: read_lattice(self.lattice.as_deref())?,
        })
    }
}

fn threshold_json(h: f64) -> Value {
    if h.is_finite() {
        j_ccy(h)
    } else {
        json!("inf")
    }
}

// ---------------------------------------------------------------- bootstrap

const PAR_TENORS: [i32; 9] = [1, 2, 3, 5, 7, 10, 15, 20, 30];

pub fn bootstrap(inputs: &MarketInputs) -> Result<Report> {
    let anchor = inputs.anchor();
    let (instruments, curve) = load_curve(&inputs.curve, anchor)?;
    let cal = WeekendCalendar;

    let mut table = Table::new([
        "Instrument",
        "Quote",
        "Implied",
        "Error",
        "End",
        "DF",
        "Zero",
    ]);
    let mut rows = Vec::new();
    for inst in &instruments {
        let implied = inst.implied_quote(&curve, &cal)?;
        let error = implied - inst.quote();
        let end = match inst {
            CurveInstrument::Deposit { maturity, .. } | CurveInstrument::Swap { maturity, .. } => {
                maturity.resolve(anchor)?
            }
            CurveInstrument::Future { end, .. } => *end,
        };
        let df = curve.df(end)?;
        let zero = curve.zero_rate(time_between(anchor, end));
        table.row([
            inst.label().to_string(),
            rate(inst.quote()),
            rate(implied),
            format!("{error:.1e}"),
            format_date(end),
            rate(df),
            rate(zero),
        ]);
        rows.push(json!({
            "label": inst.label(),
            "quote": j_rate(inst.quote()),
            "implied": j_rate(implied),
            "abs_error_below_1e-8": error.abs() < 1e-8,
            "end": format_date(end),
            "discount_factor": j_rate(df),
            "zero_rate": j_rate(zero),
        }));
    }

    let conv = SwapConvention::default();
    let mut par = Table::new(["Tenor", "Par swap rate"]);
    let mut par_json = Vec::new();
    for years in PAR_TENORS {
        let maturity = add_months(anchor, 12 * years)?;
        let (fixed, float) = conv.schedules(anchor, maturity, &cal)?;
        let r = par_swap_rate(
            &curve,
            &fixed,
            &float,
            conv.fixed_day_count,
            conv.float_day_count,
        )?;
        par.row([format!("{years}Y"), pct(r)]);
        par_json.push(json!({ "tenor_years": years, "par_rate": j_rate(r) }));
    }

    let text = format!(
        "Curve anchored {}\n\n{}\n{}",
        format_date(anchor),
        table.render(),
        par.render()
    );
    Ok(Report {
        name: "bootstrap",
        json: json!({ "anchor": format_date(anchor), "instruments": rows, "par_rates": par_json }),
        text,
    })
}

// ---------------------------------------------------------------- calibrate-credit

/// A counterparty read either from JSON or from a CDS CSV plus recovery.
pub enum CreditSource {
    Json(PathBuf),
    Csv {
        path: PathBuf,
        name: String,
        recovery: f64,
    },
}

pub fn calibrate_credit(inputs: &MarketInputs, sources: &[CreditSource]) -> Result<Report> {
    let anchor = inputs.anchor();
    let (_, curve) = load_curve(&inputs.curve, anchor)?;
    if sources.is_empty() {
        return Err(PricerError::Input("no counterparty given".into()));
    }
    let mut text = String::new();
    let mut out = Vec::new();
    for src in sources {
        let cp = match src {
            CreditSource::Json(p) => formats::read_counterparty(p)?,
            CreditSource::Csv {
                path,
                name,
                recovery,
            } => CounterpartyFile {
                name: name.clone(),
                recovery: *recovery,
                cds_quotes: read_cds_csv(path)?,
            },
        };
        let quotes = cp.quotes();
        let hazard = bootstrap_hazards(&quotes, cp.recovery, &curve)?;
        let mut table = Table::new([
            "Tenor",
            "Spread (bp)",
            "Repriced (bp)",
            "Hazard",
            "Survival",
        ]);
        let mut rows = Vec::new();
        let segments: Vec<(f64, f64)> = hazard.segments().collect();
        for (q, (_, h)) in quotes.iter().zip(&segments) {
            let repriced = par_cds_spread(&hazard, q.tenor, &curve)?;
            let survival = (-hazard.cumulative_hazard(q.tenor)).exp();
            table.row([
                format!("{}", q.tenor),
                bp(q.spread * 1e4),
                bp(repriced * 1e4),
                rate(*h),
                rate(survival),
            ]);
            rows.push(json!({
                "tenor_years": q.tenor,
                "spread_bp": j_bp(q.spread * 1e4),
                "repriced_bp": j_bp(repriced * 1e4),
                "abs_error_below_1e-8": (repriced - q.spread).abs() < 1e-8,
                "hazard": j_rate(*h),
                "survival": j_rate(survival),
            }));
        }
        text.push_str(&format!(
            "{} (recovery {})\n\n{}\n",
            cp.name,
            rate(cp.recovery),
            table.render()
        ));
        out.push(json!({ "name": cp.name, "recovery": j_rate(cp.recovery), "segments": rows }));
    }
    Ok(Report {
        name: "calibrate-credit",
        json: json!({ "anchor": format_date(anchor), "counterparties": out }),
        text,
    })
}

// ---------------------------------------------------------------- netting sets

fn load_trades(path: &Path) -> Result<Vec<(TradeRecord, Trade)>> {
    read_trades(path)?
        .into_iter()
        .map(|r| {
            let t = r.to_trade().map_err(|m| PricerError::parse(path, m))?;
            Ok((r, t))
        })
        .collect()
}

/// Trades grouped by counterparty name, in name order.
fn group_trades(
    trades: Vec<(TradeRecord, Trade)>,
    book: &CreditBook,
) -> Result<BTreeMap<String, Vec<Trade>>> {
    let mut groups: BTreeMap<String, Vec<Trade>> = BTreeMap::new();
    for (rec, trade) in trades {
        let name = match (&rec.counterparty, book.counterparties.len()) {
            (Some(n), _) => n.clone(),
            (None, 1) => book
                .counterparties
                .keys()
                .next()
                .cloned()
                .unwrap_or_default(),
            (None, _) => {
                return Err(PricerError::Input(format!(
                    "trade {} names no counterparty",
                    rec.id
                )));
            }
        };
        book.counterparty(&name)?;
        groups.entry(name).or_default().push(trade);
    }
    Ok(groups)
}

fn netting_set(name: &str, trades: Vec<Trade>, market: &Market) -> Result<NettingSet> {
    let cp = market.book.counterparty(name)?;
    Ok(NettingSet {
        counterparty: name.to_string(),
        hazard: cp.hazard(&market.curve)?,
        csa: market.book.csa(name)?,
        trades,
    })
}

fn netting_sets(inputs: &MarketInputs, trades_path: &Path) -> Result<(Market, Vec<NettingSet>)> {
    let market = inputs.load()?;
    let groups = group_trades(load_trades(trades_path)?, &market.book)?;
    let sets = groups
        .into_iter()
        .map(|(name, trades)| netting_set(&name, trades, &market))
        .collect::<Result<Vec<_>>>()?;
    Ok((market, sets))
}

// ---------------------------------------------------------------- price

pub fn price(inputs: &MarketInputs, trades: &Path) -> Result<Report> {
    let (market, sets) = netting_sets(inputs, trades)?;
    let reports = sets
        .par_iter()
        .map(|set| -> Result<_> {
            let lattice = set.build_lattice(&market.curve, market.lattice)?;
            Ok(price_collateralized(set, &lattice, &market.curve)?)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new([
        "Counterparty",
        "Trades",
        "Threshold",
        "V^F",
        "V^N",
        "V^C",
        "CVA (no CSA)",
        "CVA (CSA)",
    ]);
    let mut totals = [0.0; 3];
    let mut out = Vec::new();
    for (set, r) in sets.iter().zip(&reports) {
        totals[0] += r.v_free;
        totals[1] += r.v_risky;
        totals[2] += r.v_csa;
        table.row([
            set.counterparty.clone(),
            set.trades.len().to_string(),
            ccy(r.threshold),
            ccy(r.v_free),
            ccy(r.v_risky),
            ccy(r.v_csa),
            ccy(r.v_free - r.v_risky),
            ccy(r.v_free - r.v_csa),
        ]);
        let diagnostics: Vec<Value> = r
            .diagnostics
            .iter()
            .map(|d| {
                json!({
                    "time": j_rate(d.time),
                    "expected_continuation": j_ccy(d.expected_continuation),
                    "expected_value": j_ccy(d.expected_value),
                    "expected_collateral": j_ccy(d.expected_collateral),
                    "collateralized_share": j_rate(d.collateralized_share),
                })
            })
            .collect();
        out.push(json!({
            "counterparty": set.counterparty,
            "trades": set.trades.iter().map(|t| t.id.clone()).collect::<Vec<_>>(),
            "threshold": threshold_json(r.threshold),
            "v_free": j_ccy(r.v_free),
            "v_risky": j_ccy(r.v_risky),
            "v_csa": j_ccy(r.v_csa),
            "diagnostics": diagnostics,
        }));
    }
    table.row([
        "Total".to_string(),
        sets.iter()
            .map(|s| s.trades.len())
            .sum::<usize>()
            .to_string(),
        String::new(),
        ccy(totals[0]),
        ccy(totals[1]),
        ccy(totals[2]),
        ccy(totals[0] - totals[1]),
        ccy(totals[0] - totals[2]),
    ]);
    Ok(Report {
        name: "price",
        json: json!({
            "anchor": format_date(market.curve.anchor()),
            "netting_sets": out,
            "total": { "v_free": j_ccy(totals[0]), "v_risky": j_ccy(totals[1]), "v_csa": j_ccy(totals[2]) },
        }),
        text: table.render(),
    })
}

// ---------------------------------------------------------------- parrate

struct ParRow {
    id: String,
    counterparty: String,
    side: SwapSide,
    generic: f64,
    model: f64,
    quoted: Option<f64>,
    risk: f64,
}

/// Collateralized par rates of each swap in `templates`, given any existing
/// trades with the same counterparty in `portfolio`.
pub fn parrate(
    inputs: &MarketInputs,
    templates: &Path,
    portfolio: Option<&Path>,
) -> Result<Report> {
    let market = inputs.load()?;
    let context = match portfolio {
        Some(p) => group_trades(load_trades(p)?, &market.book)?,
        None => BTreeMap::new(),
    };
    let templates = load_trades(templates)?;
    let mut jobs = Vec::new();
    for (rec, trade) in templates {
        let Product::Swap { side, .. } = trade.product else {
            return Err(PricerError::Input(format!(
                "trade {} is not a swap",
                rec.id
            )));
        };
        let name = rec
            .counterparty
            .clone()
            .ok_or_else(|| PricerError::Input(format!("trade {} names no counterparty", rec.id)))?;
        let set = netting_set(
            &name,
            context.get(&name).cloned().unwrap_or_default(),
            &market,
        )?;
        jobs.push((rec, trade, side, set));
    }

    let rows = jobs
        .par_iter()
        .map(|(rec, trade, side, set)| -> Result<ParRow> {
            let mut probe = set.clone();
            probe.trades.push(trade.clone());
            let lattice = probe.build_lattice(&market.curve, market.lattice)?;
            let model = solve_collateralized_par_rate(trade, set, &lattice, &market.curve)?;
            let generic = generic_par_rate(trade, &market.curve)?;
            let end = trade_end(trade).map_or(0.0, |d| time_between(market.curve.anchor(), d));
            Ok(ParRow {
                id: rec.id.clone(),
                counterparty: set.counterparty.clone(),
                side: *side,
                generic,
                model,
                quoted: rec.rate,
                risk: set.hazard.cumulative_hazard(end) * (1.0 - set.hazard.recovery()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = rows;
    // least risky counterparty first; ties keep file order
    rows.sort_by(|a, b| a.risk.total_cmp(&b.risk));

    let mut table = Table::new([
        "Trade",
        "Counterparty",
        "Bank",
        "Generic",
        "Model rate",
        "Model premium (bp)",
        "Quoted rate",
        "Quoted premium (bp)",
    ]);
    let mut out = Vec::new();
    for r in &rows {
        let model_premium = premium_spread(r.generic, r.model, r.generic).premium_b_bp;
        let quoted_premium = r.quoted.map(|q| (q - r.generic) * 1e4);
        table.row([
            r.id.clone(),
            r.counterparty.clone(),
            side_label(r.side).to_string(),
            pct(r.generic),
            pct(r.model),
            bp(model_premium),
            r.quoted.map_or("-".into(), pct),
            quoted_premium.map_or("-".into(), bp),
        ]);
        out.push(json!({
            "trade": r.id,
            "counterparty": r.counterparty,
            "bank": side_label(r.side),
            "generic_rate": j_rate(r.generic),
            "model_rate": j_rate(r.model),
            "model_premium_bp": j_bp(model_premium),
            "quoted_rate": r.quoted.map(j_rate),
            "quoted_premium_bp": quoted_premium.map(j_bp),
        }));
    }
    let mut text = table.render();
    let mut spreads = Vec::new();
    if let [first, rest @ ..] = rows.as_slice() {
        for r in rest {
            let model = premium_spread(first.model, r.model, first.generic).spread_bp;
            let quoted = first
                .quoted
                .zip(r.quoted)
                .map(|(a, b)| premium_spread(a, b, first.generic).spread_bp);
            text.push_str(&format!(
                "\nPremium spread {} - {}: model {} bp, quoted {} bp",
                r.counterparty,
                first.counterparty,
                bp(model),
                quoted.map_or("-".into(), bp)
            ));
            spreads.push(json!({
                "from": first.counterparty,
                "to": r.counterparty,
                "model_spread_bp": j_bp(model),
                "quoted_spread_bp": quoted.map(j_bp),
            }));
        }
        if !rest.is_empty() {
            text.push('\n');
        }
    }
    Ok(Report {
        name: "parrate",
        json: json!({ "anchor": format_date(market.curve.anchor()), "rates": out, "premium_spreads": spreads }),
        text,
    })
}

fn trade_end(t: &Trade) -> Option<Date> {
    match &t.product {
        Product::Swap { fixed, float, .. } | Product::Swaption { fixed, float, .. } => fixed
            .schedule
            .pay_dates()
            .chain(float.schedule.pay_dates())
            .max(),
        Product::Cap { leg, .. } | Product::Floor { leg, .. } => leg.schedule.pay_dates().max(),
    }
}

fn side_label(s: SwapSide) -> &'static str {
    match s {
        SwapSide::PayFixed => "pay fixed",
        SwapSide::ReceiveFixed => "receive fixed",
    }
}

// ---------------------------------------------------------------- cva

pub fn cva_sweep(inputs: &MarketInputs, trades: &Path, thresholds: &[f64]) -> Result<Report> {
    if thresholds.is_empty() {
        return Err(PricerError::Input("no thresholds given".into()));
    }
    if thresholds.iter().any(|h| h.is_nan()) {
        return Err(PricerError::Input("threshold is NaN".into()));
    }
    let (market, sets) = netting_sets(inputs, trades)?;
    let results = sets
        .par_iter()
        .map(|set| -> Result<_> {
            let lattice = set.build_lattice(&market.curve, market.lattice)?;
            let base = cva(set, &lattice, &market.curve)?;
            let sweep = if set.trades.is_empty() {
                Vec::new()
            } else {
                threshold_sweep(set, &lattice, thresholds)?
            };
            Ok((base, sweep))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut text = String::new();
    let mut out = Vec::new();
    let mut total = vec![0.0; thresholds.len()];
    for (set, (base, sweep)) in sets.iter().zip(&results) {
        for (t, p) in total.iter_mut().zip(sweep) {
            *t += p.cva;
        }
        text.push_str(&format!(
            "{}: V^F {}, V^N {}, CVA without CSA {}\n\n{}\n",
            set.counterparty,
            ccy(base.v_free),
            ccy(base.v_risky),
            ccy(base.cva_uncollateralized),
            sweep_table(thresholds, sweep.iter().map(|p| p.cva)),
        ));
        out.push(json!({
            "counterparty": set.counterparty,
            "v_free": j_ccy(base.v_free),
            "v_risky": j_ccy(base.v_risky),
            "cva_uncollateralized": j_ccy(base.cva_uncollateralized),
            "sweep": sweep.iter().map(|p| json!({
                "threshold": threshold_json(p.threshold),
                "v_csa": j_ccy(p.v_csa),
                "cva": j_ccy(p.cva),
            })).collect::<Vec<_>>(),
        }));
    }
    if sets.len() > 1 {
        text.push_str(&format!(
            "All counterparties\n\n{}",
            sweep_table(thresholds, total.iter().copied())
        ));
    }
    if sets.is_empty() {
        text.push_str(&sweep_table(thresholds, thresholds.iter().map(|_| 0.0)));
    }
    Ok(Report {
        name: "cva",
        json: json!({
            "anchor": format_date(market.curve.anchor()),
            "thresholds": thresholds.iter().map(|h| threshold_json(*h)).collect::<Vec<_>>(),
            "netting_sets": out,
            "total_cva": total.iter().map(|c| j_ccy(*c)).collect::<Vec<_>>(),
        }),
        text,
    })
}

fn sweep_table(thresholds: &[f64], cva: impl Iterator<Item = f64>) -> String {
    let mut table = Table::new(Vec::<String>::new());
    table.row(
        std::iter::once("Effective Threshold".to_string())
            .chain(thresholds.iter().map(|h| ccy(*h))),
    );
    table.row(std::iter::once("CVA".to_string()).chain(cva.map(ccy)));
    table.render()
}

// ---------------------------------------------------------------- var

#[derive(Debug, Clone)]
pub enum HistorySource {
    File(PathBuf),
    Synthetic { days: usize, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct VarOptions {
    pub confidence: f64,
    pub horizon_days: usize,
    pub mode: ValuationMode,
    /// Thresholds of the collateralized row; the CSA's own when empty.
    pub thresholds: Vec<f64>,
    pub history: HistorySource,
    /// Netting set to use when the trades span several counterparties.
    pub counterparty: Option<String>,
}

pub fn var(inputs: &MarketInputs, trades: &Path, opts: &VarOptions) -> Result<Report> {
    let (market, sets) = netting_sets(inputs, trades)?;
    let set = match (&opts.counterparty, sets.len()) {
        (Some(name), _) => sets
            .into_iter()
            .find(|s| &s.counterparty == name)
            .ok_or_else(|| PricerError::Input(format!("no trades with counterparty '{name}'")))?,
        (None, 1) => sets.into_iter().next().expect("one set"),
        (None, 0) => {
            let name = market.book.counterparties.keys().next().cloned();
            let name = name.ok_or_else(|| PricerError::Input("no counterparty given".into()))?;
            netting_set(&name, Vec::new(), &market)?
        }
        (None, _) => {
            return Err(PricerError::Input(
                "trades span several counterparties; pick one with --counterparty-name".into(),
            ));
        }
    };
    let cp = market.book.counterparty(&set.counterparty)?;
    let ctx = ScenarioContext {
        counterparty: set.counterparty.clone(),
        curve: market.curve.clone(),
        cds_quotes: cp.quotes(),
        recovery: cp.recovery,
        csa: set.csa,
        trades: set.trades,
        lattice: market.lattice,
    };
    let history = match &opts.history {
        HistorySource::File(p) => read_history(p)?,
        HistorySource::Synthetic { days, seed } => synth_history(
            market.curve.anchor(),
            *seed,
            &HistoryParams {
                days: *days,
                ..HistoryParams::default()
            },
        )?,
    };
    var_report(&ctx, &history, opts)
}

fn var_report(ctx: &ScenarioContext, history: &MarketHistory, opts: &VarOptions) -> Result<Report> {
    let mut thresholds = opts.thresholds.clone();
    if thresholds.is_empty() {
        thresholds.push(ctx.mode_threshold(ValuationMode::Collateralized));
    }
    if thresholds.iter().any(|h| h.is_nan()) {
        return Err(PricerError::Input("threshold is NaN".into()));
    }
    let windows = history.windows(opts.horizon_days)?;
    // column 0 is the risky value, the rest are the requested thresholds
    let columns: Vec<f64> = std::iter::once(f64::INFINITY)
        .chain(thresholds.iter().copied())
        .collect();
    let base = ctx.values(None, &columns)?;
    let shifted = windows
        .par_iter()
        .map(|w| ctx.values(Some(w), &columns))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let pnl_free: Vec<f64> = shifted.iter().map(|v| v.v_free - base.v_free).collect();
    let pnl_col = |c: usize| -> Vec<f64> {
        shifted
            .iter()
            .map(|v| v.by_threshold[c] - base.by_threshold[c])
            .collect()
    };
    let var_free = historical_var(&pnl_free, opts.confidence)?;
    let var_risky = historical_var(&pnl_col(0), opts.confidence)?;
    let var_csa = (1..columns.len())
        .map(|c| historical_var(&pnl_col(c), opts.confidence))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let headline = match opts.mode {
        ValuationMode::RiskFree => var_free,
        ValuationMode::Risky => var_risky,
        ValuationMode::Collateralized => var_csa[0],
    };
    // shown as negative numbers, losses being negative P&L
    let signed = |loss: f64| ccy(-loss);
    let mut table = Table::new(Vec::<String>::new());
    table.row(
        std::iter::once("Effective Threshold".to_string())
            .chain(thresholds.iter().map(|h| ccy(*h))),
    );
    table.row(
        std::iter::once("VaR risk-free".to_string())
            .chain(thresholds.iter().map(|_| signed(var_free.loss))),
    );
    table.row(
        std::iter::once("VaR risky (no CSA)".to_string())
            .chain(thresholds.iter().map(|_| signed(var_risky.loss))),
    );
    table.row(
        std::iter::once("VaR collateralized".to_string())
            .chain(var_csa.iter().map(|v| signed(v.loss))),
    );
    let mode = mode_label(opts.mode);
    let text = format!(
        "{} VaR, {}-day horizon, {} confidence, {} scenarios (rank {})\nVaR ({}): {}\n\n{}",
        ctx.counterparty,
        opts.horizon_days,
        rate(opts.confidence),
        headline.scenarios,
        headline.rank,
        mode,
        signed(headline.loss),
        table.render(),
    );
    let est =
        |v: &csa_core::risk::VarEstimate| json!({ "var": j_ccy(v.var), "loss": j_ccy(v.loss) });
    Ok(Report {
        name: "var",
        json: json!({
            "counterparty": ctx.counterparty,
            "confidence": j_rate(opts.confidence),
            "horizon_days": opts.horizon_days,
            "scenarios": headline.scenarios,
            "rank": headline.rank,
            "mode": mode,
            "var": j_ccy(headline.var),
            "loss": j_ccy(headline.loss),
            "base": { "v_free": j_ccy(base.v_free), "v_risky": j_ccy(base.by_threshold[0]) },
            "risk_free": est(&var_free),
            "risky": est(&var_risky),
            "collateralized": thresholds.iter().zip(&var_csa).map(|(h, v)| json!({
                "threshold": threshold_json(*h),
                "var": j_ccy(v.var),
                "loss": j_ccy(v.loss),
            })).collect::<Vec<_>>(),
        }),
        text,
    })
}

fn mode_label(m: ValuationMode) -> &'static str {
    match m {
        ValuationMode::RiskFree => "riskfree",
        ValuationMode::Risky => "risky",
        ValuationMode::Collateralized => "csa",
    }
}

// ---------------------------------------------------------------- synth-history

pub fn history(anchor: Option<Date>, days: usize, seed: u64, out: &Path) -> Result<Report> {
    let end = anchor.unwrap_or(DEFAULT_ANCHOR);
    let h = synth_history(
        end,
        seed,
        &HistoryParams {
            days,
            ..HistoryParams::default()
        },
    )?;
    write_history(out, &h)?;
    let first = h.dates.first().map(|d| format_date(*d)).unwrap_or_default();
    let last = h.dates.last().map(|d| format_date(*d)).unwrap_or_default();
    Ok(Report {
        name: "synth-history",
        json: json!({ "path": out.display().to_string(), "days": h.len(), "first": first, "last": last, "seed": seed }),
        text: format!(
            "{} days of history ({first} to {last}, seed {seed}) written to {}\n",
            h.len(),
            out.display()
        ),
    })
}

// ---------------------------------------------------------------- regress

#[derive(Debug, Clone)]
pub enum PairSource {
    File(PathBuf),
    Synthetic {
        n: usize,
        seed: u64,
        /// Where to save the generated pairs, if anywhere.
        save: Option<PathBuf>,
    },
}

pub fn regress(inputs: &MarketInputs, source: &PairSource) -> Result<Report> {
    let pairs = match source {
        PairSource::File(p) => {
            let pairs = read_pairs(p)?;
            if pairs.is_empty() {
                return Err(PricerError::parse(p, "no pairs"));
            }
            pairs
        }
        PairSource::Synthetic { n, seed, save } => {
            let pairs = synthetic_pairs(inputs, *n, *seed)?;
            if let Some(path) = save {
                write_pairs(path, &pairs)?;
            }
            pairs
        }
    };
    let cds: Vec<f64> = pairs.iter().map(PairRecord::cds_difference_bp).collect();
    let model: Vec<f64> = pairs.iter().map(PairRecord::model_spread_bp).collect();
    let market: Vec<f64> = pairs.iter().map(PairRecord::market_spread_bp).collect();
    let on_cds = ols(&cds, &market)?;
    let on_model = ols(&model, &market)?;

    let mut reg = Table::new([
        "",
        "Slope",
        "Intercept",
        "Adjusted R^2",
        "Significance F",
        "T value",
        "P value",
    ]);
    for (label, r) in [
        ("CDS spread difference", &on_cds),
        ("Model premium spread", &on_model),
    ] {
        reg.row([
            label.to_string(),
            rate(r.slope),
            rate(r.intercept),
            rate(r.adjusted_r_squared),
            sci(r.significance_f),
            rate(r.t_value),
            sci(r.p_value),
        ]);
    }
    let mut stats = Table::new(["Spread (bp)", "Max", "Min", "Mean", "Median", "Std"]);
    let mut stats_json = serde_json::Map::new();
    for (label, key, xs) in [
        ("Market premium spread", "market_spread_bp", &market),
        ("Model premium spread", "model_spread_bp", &model),
        ("CDS spread difference", "cds_difference_bp", &cds),
    ] {
        let s = Summary::of(xs);
        stats.row([
            label.to_string(),
            bp(s.max),
            bp(s.min),
            bp(s.mean),
            bp(s.median),
            bp(s.std),
        ]);
        stats_json.insert(
            key.into(),
            json!({ "max": j_bp(s.max), "min": j_bp(s.min), "mean": j_bp(s.mean), "median": j_bp(s.median), "std": j_bp(s.std) }),
        );
    }
    let text = format!(
        "{} swap pairs; dependent variable: market premium spread\n\n{}\n{}",
        pairs.len(),
        reg.render(),
        stats.render()
    );
    Ok(Report {
        name: "regress",
        json: json!({
            "pairs": pairs.len(),
            "regressions": {
                "on_cds_difference": regression_json(&on_cds),
                "on_model_spread": regression_json(&on_model),
            },
            "summary": stats_json,
        }),
        text,
    })
}

fn sci(v: f64) -> String {
    format!("{v:.4e}")
}

fn regression_json(r: &RegressionResult) -> Value {
    json!({
        "n": r.n,
        "Slope": j_rate(r.slope),
        "Intercept": j_rate(r.intercept),
        "R^2": j_rate(r.r_squared),
        "Adjusted R^2": j_rate(r.adjusted_r_squared),
        "Significance F": sci(r.significance_f),
        "T value": j_rate(r.t_value),
        "P value": sci(r.p_value),
    })
}

fn synthetic_pairs(inputs: &MarketInputs, n: usize, seed: u64) -> Result<Vec<PairRecord>> {
    let anchor = inputs.anchor();
    let (_, curve) = load_curve(&inputs.curve, anchor)?;
    let lattice = read_lattice(inputs.lattice.as_deref())?;
    let params = SynthParams::default();
    let mut pairs = synth_pair_dataset(n, seed, &params)?;
    let rates = pairs
        .par_iter()
        .map(|p| price_pair(p, &curve, lattice))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(pairs
        .iter_mut()
        .zip(rates)
        .map(|(p, (a, b, _))| {
            apply_rates(p, (a, b), params.dealer_margin_bp);
            let t = p.tenor_years as f64;
            let (ma, mb) = p.market_rates.unwrap_or((a, b));
            PairRecord {
                pair: p.id,
                tenor_years: p.tenor_years,
                bank: match p.side {
                    SwapSide::PayFixed => BankSide::PayFixed,
                    SwapSide::ReceiveFixed => BankSide::ReceiveFixed,
                },
                counterparty_a: p.a.name.clone(),
                counterparty_b: p.b.name.clone(),
                cds_a_bp: p.a.cds_bp(t),
                cds_b_bp: p.b.cds_bp(t),
                model_rate_a: a,
                model_rate_b: b,
                market_rate_a: ma,
                market_rate_b: mb,
            }
        })
        .collect())
}

struct Summary {
    max: f64,
    min: f64,
    mean: f64,
    median: f64,
    std: f64,
}

impl Summary {
    /// Sample statistics; `std` uses n − 1.
    fn of(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mut sorted = xs.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mean = xs.iter().sum::<f64>() / n;
        let m = sorted.len();
        let median = if m % 2 == 1 {
            sorted[m / 2]
        } else {
            0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
        };
        let var = if m > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            max: sorted[m - 1],
            min: sorted[0],
            mean,
            median,
            std: var.sqrt(),
        }
    }
}
