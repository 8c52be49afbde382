//! Readers and writers for the CSV and JSON input files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use csa_core::credit::{bootstrap_hazards, CdsQuote, HazardCurve};
use csa_core::csa::CsaTerms;
use csa_core::curve::{CurveInstrument, Maturity, SwapConvention, ZeroCurve};
use csa_core::dates::{
    add_months, imm_date, BusinessDayConvention, Calendar, DayCount, Frequency, WeekendCalendar,
};
use csa_core::lattice::LatticeConfig;
use csa_core::pricing::{Leg, Position, Product, SwapSide, Trade};
use csa_core::risk::MarketHistory;
use serde::{Deserialize, Serialize};
use time::format_description::well_known::Iso8601;
use time::Date;

use crate::error::{PricerError, Result};

pub fn parse_date(s: &str) -> std::result::Result<Date, String> {
    Date::parse(s.trim(), &Iso8601::DATE).map_err(|e| format!("bad date '{s}': {e}"))
}

pub fn format_date(d: Date) -> String {
    format!("{:04}-{:02}-{:02}", d.year(), d.month() as u8, d.day())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| PricerError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| PricerError::parse(path, e))
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| PricerError::parse(path, e))
}

// ---------------------------------------------------------------- curve

#[derive(Debug, Deserialize)]
struct CurveRow {
    kind: String,
    label: String,
    maturity: String,
    quote: String,
}

/// A rate quote: `4.8771%` or a decimal `0.048771`.
fn parse_rate(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    match t.strip_suffix('%') {
        Some(pct) => pct.trim().parse::<f64>().map(|v| v / 100.0),
        None => t.parse::<f64>(),
    }
    .map_err(|e| format!("bad rate '{s}': {e}"))
}

/// `2025-09-15` or a tenor such as `18M` / `20Y`.
fn parse_maturity(s: &str) -> std::result::Result<Maturity, String> {
    let t = s.trim();
    let upper = t.to_ascii_uppercase();
    if let Some(n) = upper.strip_suffix('Y') {
        return n
            .parse::<i32>()
            .map(|y| Maturity::Months(12 * y))
            .map_err(|e| format!("bad tenor '{s}': {e}"));
    }
    if let Some(n) = upper.strip_suffix('M') {
        return n
            .parse::<i32>()
            .map(Maturity::Months)
            .map_err(|e| format!("bad tenor '{s}': {e}"));
    }
    parse_date(t).map(Maturity::Date)
}

/// Curve CSV: `kind,label,maturity,quote`; futures give their IMM start date as maturity.
pub fn read_curve_instruments(path: &Path) -> Result<Vec<CurveInstrument>> {
    let mut out = Vec::new();
    for (i, row) in csv_reader(path)?.deserialize::<CurveRow>().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| PricerError::parse(path, e))?;
        let err = |m: String| PricerError::parse(path, format!("line {line}: {m}"));
        let inst = match row.kind.to_ascii_lowercase().as_str() {
            "deposit" => CurveInstrument::Deposit {
                label: row.label,
                maturity: parse_maturity(&row.maturity).map_err(err)?,
                rate: parse_rate(&row.quote).map_err(err)?,
            },
            "future" => {
                let start = parse_date(&row.maturity).map_err(err)?;
                if imm_date(start.year(), start.month()).ok() != Some(start) {
                    return Err(err(format!("future start {start} is not an IMM date")));
                }
                let price = row
                    .quote
                    .parse::<f64>()
                    .map_err(|e| err(format!("bad price '{}': {e}", row.quote)))?;
                CurveInstrument::imm_future(row.label, start.year(), start.month(), price)?
            }
            "swap" => CurveInstrument::Swap {
                label: row.label,
                maturity: parse_maturity(&row.maturity).map_err(err)?,
                rate: parse_rate(&row.quote).map_err(err)?,
                convention: SwapConvention::default(),
            },
            other => return Err(err(format!("unknown instrument kind '{other}'"))),
        };
        out.push(inst);
    }
    if out.is_empty() {
        return Err(PricerError::parse(path, "no instruments"));
    }
    Ok(out)
}

pub fn load_curve(path: &Path, anchor: Date) -> Result<(Vec<CurveInstrument>, ZeroCurve)> {
    let instruments = read_curve_instruments(path)?;
    let curve = csa_core::curve::bootstrap_curve(anchor, &instruments)?;
    Ok((instruments, curve))
}

// ---------------------------------------------------------------- credit

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct QuoteRecord {
    pub tenor_years: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CounterpartyFile {
    pub name: String,
    pub recovery: f64,
    pub cds_quotes: Vec<QuoteRecord>,
}

impl CounterpartyFile {
    pub fn quotes(&self) -> Vec<CdsQuote> {
        self.cds_quotes
            .iter()
            .map(|q| CdsQuote::new(q.tenor_years, q.spread))
            .collect()
    }

    pub fn hazard(&self, curve: &ZeroCurve) -> Result<HazardCurve> {
        Ok(bootstrap_hazards(&self.quotes(), self.recovery, curve)?)
    }
}

pub fn read_counterparty(path: &Path) -> Result<CounterpartyFile> {
    let cp: CounterpartyFile = read_json(path)?;
    if cp.cds_quotes.is_empty() {
        return Err(PricerError::parse(path, "no CDS quotes"));
    }
    Ok(cp)
}

/// CDS CSV: `tenor_years,spread`.
pub fn read_cds_csv(path: &Path) -> Result<Vec<QuoteRecord>> {
    let rows: Vec<QuoteRecord> = csv_reader(path)?
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| PricerError::parse(path, e))?;
    if rows.is_empty() {
        return Err(PricerError::parse(path, "no CDS quotes"));
    }
    Ok(rows)
}

// ---------------------------------------------------------------- CSA

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CsaFile {
    pub counterparty: String,
    pub threshold: f64,
    pub mta: f64,
    #[serde(default)]
    pub independent_amount: f64,
}

impl CsaFile {
    pub fn terms(&self) -> Result<CsaTerms> {
        Ok(CsaTerms::new(
            self.threshold,
            self.mta,
            self.independent_amount,
        )?)
    }
}

pub fn read_csa(path: &Path) -> Result<CsaFile> {
    read_json(path)
}

// ---------------------------------------------------------------- lattice

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct LatticeFile {
    pub mean_reversion: f64,
    pub sigma: f64,
    pub max_dt_years: f64,
}

impl From<LatticeFile> for LatticeConfig {
    fn from(f: LatticeFile) -> Self {
        LatticeConfig {
            mean_reversion: f.mean_reversion,
            sigma: f.sigma,
            max_dt: f.max_dt_years,
        }
    }
}

pub fn read_lattice(path: Option<&Path>) -> Result<LatticeConfig> {
    match path {
        Some(p) => Ok(read_json::<LatticeFile>(p)?.into()),
        None => Ok(LatticeConfig::default()),
    }
}

// ---------------------------------------------------------------- trades

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TradeType {
    Swap,
    Cap,
    Floor,
    Swaption,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BankSide {
    PayFixed,
    ReceiveFixed,
}

/// One trade as it appears in a trades file. Field names follow a swap term sheet.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TradeRecord {
    pub id: String,
    #[serde(default)]
    pub counterparty: Option<String>,
    #[serde(rename = "type", default = "default_type")]
    pub trade_type: TradeType,
    pub notional: f64,
    pub effective: String,
    pub maturity: String,
    /// Swaption expiry; defaults to the effective date.
    #[serde(default)]
    pub expiry: Option<String>,
    /// Fixed rate, cap/floor strike or swaption strike.
    #[serde(default)]
    pub rate: Option<f64>,
    #[serde(default)]
    pub bank: Option<BankSide>,
    #[serde(default)]
    pub position: Option<String>,
    #[serde(default = "default_fixed_dc")]
    pub fixed_day_count: String,
    #[serde(default = "default_float_dc")]
    pub float_day_count: String,
    #[serde(default = "default_fixed_freq")]
    pub fixed_frequency: String,
    #[serde(default = "default_float_freq")]
    pub float_frequency: String,
    #[serde(default = "default_roll")]
    pub roll: String,
    #[serde(default = "default_index")]
    pub index: String,
    #[serde(default)]
    pub float_spread: f64,
}

fn default_type() -> TradeType {
    TradeType::Swap
}
fn default_fixed_dc() -> String {
    "30/360".into()
}
fn default_float_dc() -> String {
    "ACT/360".into()
}
fn default_fixed_freq() -> String {
    "semiannual".into()
}
fn default_float_freq() -> String {
    "quarterly".into()
}
fn default_roll() -> String {
    "modified_following".into()
}
fn default_index() -> String {
    "3M LIBOR".into()
}

fn parse_day_count(s: &str) -> std::result::Result<DayCount, String> {
    match s.trim().to_ascii_uppercase().replace(' ', "").as_str() {
        "30/360" | "30360" | "THIRTY360" | "30/360ISDA" => Ok(DayCount::Thirty360),
        "ACT/360" | "ACT360" | "A/360" => Ok(DayCount::Act360),
        "ACT/365F" | "ACT/365" | "ACT365F" | "A/365F" => Ok(DayCount::Act365F),
        _ => Err(format!("unknown day count '{s}'")),
    }
}

fn parse_frequency(s: &str) -> std::result::Result<Frequency, String> {
    match s
        .trim()
        .to_ascii_lowercase()
        .replace(['-', '_', ' '], "")
        .as_str()
    {
        "quarterly" | "3m" => Ok(Frequency::Quarterly),
        "semiannual" | "semiannually" | "6m" => Ok(Frequency::SemiAnnual),
        "annual" | "annually" | "1y" | "12m" => Ok(Frequency::Annual),
        _ => Err(format!("unknown frequency '{s}'")),
    }
}

fn parse_roll(s: &str) -> std::result::Result<BusinessDayConvention, String> {
    match s
        .trim()
        .to_ascii_lowercase()
        .replace(['-', '_', ' '], "")
        .as_str()
    {
        "modifiedfollowing" | "modfollow" | "mf" => Ok(BusinessDayConvention::ModifiedFollowing),
        "following" | "f" => Ok(BusinessDayConvention::Following),
        "unadjusted" | "none" => Ok(BusinessDayConvention::Unadjusted),
        _ => Err(format!("unknown roll convention '{s}'")),
    }
}

impl TradeRecord {
    pub fn to_trade(&self) -> std::result::Result<Trade, String> {
        let calendar = WeekendCalendar;
        let effective = parse_date(&self.effective)?;
        let maturity = match parse_maturity(&self.maturity)? {
            Maturity::Date(d) => d,
            Maturity::Months(m) => add_months(effective, m).map_err(|e| e.to_string())?,
        };
        let roll = parse_roll(&self.roll)?;
        let leg =
            |freq: &str, dc: &str, start: Date, end: Date| -> std::result::Result<Leg, String> {
                let schedule = csa_core::dates::generate_schedule(
                    start,
                    end,
                    parse_frequency(freq)?,
                    roll,
                    &calendar,
                )
                .map_err(|e| e.to_string())?;
                Ok(Leg {
                    schedule,
                    day_count: parse_day_count(dc)?,
                })
            };
        let rate = || {
            self.rate
                .ok_or_else(|| format!("trade {}: missing rate", self.id))
        };
        let side = match self.bank {
            Some(BankSide::PayFixed) => SwapSide::PayFixed,
            Some(BankSide::ReceiveFixed) | None => SwapSide::ReceiveFixed,
        };
        let position = match self
            .position
            .as_deref()
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            None | Some("long") | Some("buy") | Some("bought") => Position::Long,
            Some("short") | Some("sell") | Some("sold") => Position::Short,
            Some(other) => return Err(format!("trade {}: unknown position '{other}'", self.id)),
        };
        let product = match self.trade_type {
            TradeType::Swap => Product::Swap {
                side,
                fixed_rate: rate()?,
                fixed: leg(
                    &self.fixed_frequency,
                    &self.fixed_day_count,
                    effective,
                    maturity,
                )?,
                float: leg(
                    &self.float_frequency,
                    &self.float_day_count,
                    effective,
                    maturity,
                )?,
                float_spread: self.float_spread,
            },
            TradeType::Cap => Product::Cap {
                strike: rate()?,
                leg: leg(
                    &self.float_frequency,
                    &self.float_day_count,
                    effective,
                    maturity,
                )?,
            },
            TradeType::Floor => Product::Floor {
                strike: rate()?,
                leg: leg(
                    &self.float_frequency,
                    &self.float_day_count,
                    effective,
                    maturity,
                )?,
            },
            TradeType::Swaption => {
                let expiry = match &self.expiry {
                    Some(e) => parse_date(e)?,
                    None => effective,
                };
                Product::Swaption {
                    side,
                    strike: rate()?,
                    expiry: calendar.adjust(expiry, roll),
                    fixed: leg(
                        &self.fixed_frequency,
                        &self.fixed_day_count,
                        effective,
                        maturity,
                    )?,
                    float: leg(
                        &self.float_frequency,
                        &self.float_day_count,
                        effective,
                        maturity,
                    )?,
                }
            }
        };
        let trade = Trade {
            id: self.id.clone(),
            notional: self.notional,
            position,
            product,
        };
        trade.validate().map_err(|e| e.to_string())?;
        Ok(trade)
    }
}

/// A trades file is a JSON array of trade records.
pub fn read_trades(path: &Path) -> Result<Vec<TradeRecord>> {
    let records: Vec<TradeRecord> = read_json(path)?;
    for r in &records {
        r.to_trade().map_err(|m| PricerError::parse(path, m))?;
    }
    Ok(records)
}

// ---------------------------------------------------------------- history

/// History CSV: `date,curve_<years>...,cds_<years>...`, daily changes in bp.
pub fn read_history(path: &Path) -> Result<MarketHistory> {
    let mut rdr = csv_reader(path)?;
    let headers = rdr
        .headers()
        .map_err(|e| PricerError::parse(path, e))?
        .clone();
    if headers.get(0) != Some("date") {
        return Err(PricerError::parse(path, "first column must be 'date'"));
    }
    let mut curve_cols = Vec::new();
    let mut cds_cols = Vec::new();
    for (i, h) in headers.iter().enumerate().skip(1) {
        let (target, tenor) = if let Some(t) = h.strip_prefix("curve_") {
            (&mut curve_cols, t)
        } else if let Some(t) = h.strip_prefix("cds_") {
            (&mut cds_cols, t)
        } else {
            return Err(PricerError::parse(path, format!("unexpected column '{h}'")));
        };
        let years: f64 = tenor
            .trim_end_matches(['y', 'Y'])
            .parse()
            .map_err(|_| PricerError::parse(path, format!("bad tenor in column '{h}'")))?;
        target.push((i, years));
    }
    if curve_cols.is_empty() || cds_cols.is_empty() {
        return Err(PricerError::parse(path, "need curve_ and cds_ columns"));
    }
    let mut history = MarketHistory {
        curve_tenors: curve_cols.iter().map(|c| c.1).collect(),
        cds_tenors: cds_cols.iter().map(|c| c.1).collect(),
        dates: Vec::new(),
        curve_changes: Vec::new(),
        cds_changes: Vec::new(),
    };
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| PricerError::parse(path, e))?;
        let line = n + 2;
        let field = |i: usize| -> Result<f64> {
            rec.get(i).unwrap_or("").parse::<f64>().map_err(|_| {
                PricerError::parse(path, format!("line {line}: bad number in column {}", i + 1))
            })
        };
        history.dates.push(
            parse_date(rec.get(0).unwrap_or(""))
                .map_err(|m| PricerError::parse(path, format!("line {line}: {m}")))?,
        );
        history.curve_changes.push(
            curve_cols
                .iter()
                .map(|c| field(c.0))
                .collect::<Result<_>>()?,
        );
        history
            .cds_changes
            .push(cds_cols.iter().map(|c| field(c.0)).collect::<Result<_>>()?);
    }
    if history.dates.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PricerError::parse(
            path,
            "dates must be strictly increasing",
        ));
    }
    Ok(history)
}

pub fn write_history(path: &Path, h: &MarketHistory) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| PricerError::parse(path, e))?;
    let mut header = vec!["date".to_string()];
    header.extend(h.curve_tenors.iter().map(|t| format!("curve_{t}")));
    header.extend(h.cds_tenors.iter().map(|t| format!("cds_{t}")));
    w.write_record(&header)
        .map_err(|e| PricerError::parse(path, e))?;
    for ((d, c), s) in h.dates.iter().zip(&h.curve_changes).zip(&h.cds_changes) {
        let mut row = vec![format_date(*d)];
        row.extend(c.iter().chain(s).map(|v| format!("{v:.6}")));
        w.write_record(&row)
            .map_err(|e| PricerError::parse(path, e))?;
    }
    w.flush().map_err(|source| PricerError::Io {
        path: path.to_path_buf(),
        source,
    })
}

// ---------------------------------------------------------------- pairs

/// One row of a pair CSV. CDS spreads are at the swap tenor, in bp.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PairRecord {
    pub pair: usize,
    pub tenor_years: i32,
    pub bank: BankSide,
    pub counterparty_a: String,
    pub counterparty_b: String,
    pub cds_a_bp: f64,
    pub cds_b_bp: f64,
    pub model_rate_a: f64,
    pub model_rate_b: f64,
    pub market_rate_a: f64,
    pub market_rate_b: f64,
}

impl PairRecord {
    fn sign(&self) -> f64 {
        match self.bank {
            BankSide::ReceiveFixed => 1.0,
            BankSide::PayFixed => -1.0,
        }
    }

    pub fn cds_difference_bp(&self) -> f64 {
        self.cds_b_bp - self.cds_a_bp
    }

    pub fn model_spread_bp(&self) -> f64 {
        self.sign() * (self.model_rate_b - self.model_rate_a) * 1e4
    }

    pub fn market_spread_bp(&self) -> f64 {
        self.sign() * (self.market_rate_b - self.market_rate_a) * 1e4
    }
}

pub fn read_pairs(path: &Path) -> Result<Vec<PairRecord>> {
    csv_reader(path)?
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| PricerError::parse(path, e))
}

pub fn write_pairs(path: &Path, pairs: &[PairRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| PricerError::parse(path, e))?;
    for p in pairs {
        w.serialize(p).map_err(|e| PricerError::parse(path, e))?;
    }
    w.flush().map_err(|source| PricerError::Io {
        path: path.to_path_buf(),
        source,
    })
}

// ---------------------------------------------------------------- market bundle

/// Counterparties and CSAs keyed by counterparty name.
#[derive(Debug, Clone, Default)]
pub struct CreditBook {
    pub counterparties: BTreeMap<String, CounterpartyFile>,
    pub csas: BTreeMap<String, CsaFile>,
}

impl CreditBook {
    pub fn load(counterparties: &[impl AsRef<Path>], csas: &[impl AsRef<Path>]) -> Result<Self> {
        let mut book = CreditBook::default();
        for p in counterparties {
            let cp = read_counterparty(p.as_ref())?;
            book.counterparties.insert(cp.name.clone(), cp);
        }
        for p in csas {
            let csa = read_csa(p.as_ref())?;
            if !book.counterparties.contains_key(&csa.counterparty) {
                return Err(PricerError::parse(
                    p.as_ref(),
                    format!("CSA names unknown counterparty '{}'", csa.counterparty),
                ));
            }
            book.csas.insert(csa.counterparty.clone(), csa);
        }
        Ok(book)
    }

    pub fn counterparty(&self, name: &str) -> Result<&CounterpartyFile> {
        self.counterparties
            .get(name)
            .ok_or_else(|| PricerError::Input(format!("no counterparty file for '{name}'")))
    }

    pub fn csa(&self, name: &str) -> Result<Option<CsaTerms>> {
        self.csas.get(name).map(CsaFile::terms).transpose()
    }
}
