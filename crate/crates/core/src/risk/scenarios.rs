use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use time::Date;

use crate::credit::{bootstrap_hazards, CdsQuote, HazardCurve};
use crate::csa::CsaTerms;
use crate::curve::ZeroCurve;
use crate::lattice::LatticeConfig;
use crate::pricing::{NettingSet, PreparedSet, Trade};
use crate::{Error, Result};

/// Which of the three values a P&L series tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValuationMode {
    RiskFree,
    Risky,
    Collateralized,
}

/// Piecewise-linear shift in basis points, flat beyond the end tenors.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyRateShift {
    tenors: Vec<f64>,
    shifts_bp: Vec<f64>,
}

impl KeyRateShift {
    pub fn new(tenors: Vec<f64>, shifts_bp: Vec<f64>) -> Result<Self> {
        if tenors.len() != shifts_bp.len() {
            return Err(Error::InvalidInput(
                "key-rate tenors and shifts differ in length".into(),
            ));
        }
        if tenors.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidInput(
                "key-rate tenors must be strictly increasing".into(),
            ));
        }
        if shifts_bp.iter().chain(&tenors).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("key-rate shift is not finite".into()));
        }
        Ok(Self { tenors, shifts_bp })
    }

    pub fn zero(tenors: Vec<f64>) -> Self {
        let shifts_bp = alloc::vec![0.0; tenors.len()];
        Self { tenors, shifts_bp }
    }

    pub fn tenors(&self) -> &[f64] {
        &self.tenors
    }

    pub fn shifts_bp(&self) -> &[f64] {
        &self.shifts_bp
    }

    /// Shift at tenor `t`, in basis points.
    pub fn at(&self, t: f64) -> f64 {
        let (ts, ss) = (&self.tenors, &self.shifts_bp);
        match ts.len() {
            0 => 0.0,
            _ if t <= ts[0] => ss[0],
            n if t >= ts[n - 1] => ss[n - 1],
            _ => {
                let i = ts.partition_point(|&x| x <= t);
                let w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
                ss[i - 1] + w * (ss[i] - ss[i - 1])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarketShift {
    /// First day of the window.
    pub start: Date,
    pub curve: KeyRateShift,
    pub cds: KeyRateShift,
}

/// Daily changes, in basis points, of zero rates and CDS spreads at key tenors.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketHistory {
    pub curve_tenors: Vec<f64>,
    pub cds_tenors: Vec<f64>,
    pub dates: Vec<Date>,
    /// One row per date: curve changes then CDS changes.
    pub curve_changes: Vec<Vec<f64>>,
    pub cds_changes: Vec<Vec<f64>>,
}

impl MarketHistory {
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    fn check(&self) -> Result<()> {
        let n = self.dates.len();
        if self.curve_changes.len() != n || self.cds_changes.len() != n {
            return Err(Error::InvalidInput(
                "history columns have different lengths".into(),
            ));
        }
        if self
            .curve_changes
            .iter()
            .any(|r| r.len() != self.curve_tenors.len())
            || self
                .cds_changes
                .iter()
                .any(|r| r.len() != self.cds_tenors.len())
        {
            return Err(Error::InvalidInput(
                "history row does not match its tenors".into(),
            ));
        }
        Ok(())
    }

    /// Overlapping windows of `horizon` days, each the sum of its daily changes.
    pub fn windows(&self, horizon: usize) -> Result<Vec<MarketShift>> {
        self.check()?;
        if horizon == 0 {
            return Err(Error::InvalidInput(
                "horizon must be at least one day".into(),
            ));
        }
        if self.len() < horizon {
            return Err(Error::InsufficientData(format!(
                "{} days of history for a {horizon}-day horizon",
                self.len()
            )));
        }
        let sum = |rows: &[Vec<f64>], width: usize| -> Vec<f64> {
            (0..width)
                .map(|c| rows.iter().map(|r| r[c]).sum())
                .collect()
        };
        (0..=self.len() - horizon)
            .map(|w| {
                let range = w..w + horizon;
                Ok(MarketShift {
                    start: self.dates[w],
                    curve: KeyRateShift::new(
                        self.curve_tenors.clone(),
                        sum(&self.curve_changes[range.clone()], self.curve_tenors.len()),
                    )?,
                    cds: KeyRateShift::new(
                        self.cds_tenors.clone(),
                        sum(&self.cds_changes[range], self.cds_tenors.len()),
                    )?,
                })
            })
            .collect()
    }
}

/// Market inputs and portfolio that scenarios are applied to.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioContext {
    pub counterparty: String,
    pub curve: ZeroCurve,
    pub cds_quotes: Vec<CdsQuote>,
    pub recovery: f64,
    pub csa: Option<CsaTerms>,
    pub trades: Vec<Trade>,
    pub lattice: LatticeConfig,
}

/// Values of one market state: V^F plus V^C at each requested threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioValues {
    pub v_free: f64,
    pub by_threshold: Vec<f64>,
}

impl ScenarioContext {
    fn shifted_market(&self, shift: Option<&MarketShift>) -> Result<(ZeroCurve, HazardCurve)> {
        let Some(shift) = shift else {
            let hazard = bootstrap_hazards(&self.cds_quotes, self.recovery, &self.curve)?;
            return Ok((self.curve.clone(), hazard));
        };
        let curve = self
            .curve
            .with_zero_rate_shift(|t| shift.curve.at(t) * 1e-4)?;
        let quotes: Vec<CdsQuote> = self
            .cds_quotes
            .iter()
            .map(|q| CdsQuote::new(q.tenor, (q.spread + shift.cds.at(q.tenor) * 1e-4).max(0.0)))
            .collect();
        let hazard = bootstrap_hazards(&quotes, self.recovery, &curve)?;
        Ok((curve, hazard))
    }

    /// Rebuild curve, hazards and lattice under `shift`, then value at each threshold.
    pub fn values(
        &self,
        shift: Option<&MarketShift>,
        thresholds: &[f64],
    ) -> Result<ScenarioValues> {
        if self.trades.is_empty() {
            return Ok(ScenarioValues {
                v_free: 0.0,
                by_threshold: alloc::vec![0.0; thresholds.len()],
            });
        }
        let (curve, hazard) = self.shifted_market(shift)?;
        let set = NettingSet {
            counterparty: self.counterparty.clone(),
            hazard,
            csa: self.csa,
            trades: self.trades.clone(),
        };
        let lattice = set.build_lattice(&curve, self.lattice)?;
        let prepared = PreparedSet::new(&set, &lattice)?;
        Ok(ScenarioValues {
            v_free: prepared.risk_free_value()?,
            by_threshold: thresholds
                .iter()
                .map(|&h| prepared.value(h))
                .collect::<Result<_>>()?,
        })
    }

    /// Threshold used by a mode: infinite when risky, the CSA's otherwise.
    pub fn mode_threshold(&self, mode: ValuationMode) -> f64 {
        match mode {
            ValuationMode::Collateralized => {
                self.csa.map_or(f64::INFINITY, |c| c.effective_threshold())
            }
            _ => f64::INFINITY,
        }
    }

    pub fn revalue(&self, shift: Option<&MarketShift>, mode: ValuationMode) -> Result<f64> {
        let h = self.mode_threshold(mode);
        let v = self.values(shift, &[h])?;
        Ok(match mode {
            ValuationMode::RiskFree => v.v_free,
            _ => v.by_threshold[0],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PnlScenario {
    pub start: Date,
    pub base: f64,
    pub revalued: f64,
    pub pnl: f64,
}

/// Revalue under every window shift; P&L is shifted value minus base value.
pub fn pnl_scenarios(
    ctx: &ScenarioContext,
    shifts: &[MarketShift],
    mode: ValuationMode,
) -> Result<Vec<PnlScenario>> {
    let base = ctx.revalue(None, mode)?;
    shifts
        .iter()
        .map(|s| {
            let revalued = ctx.revalue(Some(s), mode)?;
            Ok(PnlScenario {
                start: s.start,
                base,
                revalued,
                pnl: revalued - base,
            })
        })
        .collect()
}
