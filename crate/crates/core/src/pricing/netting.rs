use alloc::string::String;
use alloc::vec::Vec;

use time::Date;

use crate::credit::HazardCurve;
use crate::csa::CsaTerms;
use crate::curve::ZeroCurve;
use crate::lattice::{build_lattice, LatticeConfig, RateLattice};
use crate::{Error, Result};

use super::engine::{backward_induction, GridCashflows, SliceDiagnostics};
use super::grid::{PaymentGrid, PeriodCredit};
use super::trade::Trade;

/// Trades with one counterparty under one master agreement and (optionally) one CSA.
#[derive(Debug, Clone, PartialEq)]
pub struct NettingSet {
    pub counterparty: String,
    /// Default intensity and recovery of the counterparty.
    pub hazard: HazardCurve,
    pub csa: Option<CsaTerms>,
    pub trades: Vec<Trade>,
}

impl NettingSet {
    /// Effective threshold H; infinite without a CSA.
    pub fn threshold(&self) -> f64 {
        self.csa.map_or(f64::INFINITY, |c| c.effective_threshold())
    }

    pub fn with_threshold(&self, threshold: f64) -> Self {
        let csa = threshold.is_finite().then_some(CsaTerms {
            threshold,
            mta: 0.0,
            independent_amount: 0.0,
        });
        Self {
            csa,
            ..self.clone()
        }
    }

    /// Payment and reset dates after `anchor`: the credit periods of the induction.
    pub fn grid_dates(&self, anchor: Date) -> Vec<Date> {
        let mut out: Vec<Date> = self
            .trades
            .iter()
            .flat_map(|t| t.grid_dates(anchor))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn lattice_dates(&self, anchor: Date) -> Vec<Date> {
        let mut out: Vec<Date> = self
            .trades
            .iter()
            .flat_map(|t| t.lattice_dates(anchor))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// A lattice carrying every date this netting set needs.
    pub fn build_lattice(&self, curve: &ZeroCurve, cfg: LatticeConfig) -> Result<RateLattice> {
        let anchor = curve.anchor();
        let dates = self.lattice_dates(anchor);
        let horizon = dates.last().copied().unwrap_or(anchor).max(anchor);
        build_lattice(curve, cfg, horizon, &dates)
    }

    pub fn notional(&self) -> f64 {
        self.trades.iter().map(|t| t.notional).sum()
    }
}

/// Risk-free, uncollateralized risky and collateralized values of a netting set.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationReport {
    /// V^F.
    pub v_free: f64,
    /// V^N.
    pub v_risky: f64,
    /// V^C.
    pub v_csa: f64,
    pub threshold: f64,
    /// Collateralized induction, one entry per credit period.
    pub diagnostics: Vec<SliceDiagnostics>,
}

impl ValuationReport {
    pub fn zero(threshold: f64) -> Self {
        Self {
            v_free: 0.0,
            v_risky: 0.0,
            v_csa: 0.0,
            threshold,
            diagnostics: Vec::new(),
        }
    }
}

/// Everything the induction needs for one netting set on one lattice, reusable
/// across thresholds.
#[derive(Debug, Clone)]
pub struct PreparedSet<'a> {
    pub lattice: &'a RateLattice,
    pub grid: PaymentGrid,
    pub flows: GridCashflows,
    pub credit: Vec<PeriodCredit>,
}

impl<'a> PreparedSet<'a> {
    pub fn new(set: &NettingSet, lattice: &'a RateLattice) -> Result<Self> {
        if set.hazard.anchor() != lattice.anchor() {
            return Err(Error::InvalidInput(alloc::format!(
                "hazard curve anchor {} differs from lattice anchor {}",
                set.hazard.anchor(),
                lattice.anchor()
            )));
        }
        let grid = PaymentGrid::new(lattice, &set.grid_dates(lattice.anchor()))?;
        let flows = GridCashflows::project(&set.trades, lattice, &grid)?;
        let credit = PeriodCredit::schedule(&set.hazard, &grid)?;
        Ok(Self {
            lattice,
            grid,
            flows,
            credit,
        })
    }

    pub fn value(&self, threshold: f64) -> Result<f64> {
        Ok(backward_induction(
            self.lattice,
            &self.grid,
            &self.flows,
            &self.credit,
            threshold,
        )?
        .value)
    }

    pub fn risk_free_value(&self) -> Result<f64> {
        let free = alloc::vec![PeriodCredit::RISK_FREE; self.grid.len()];
        Ok(backward_induction(self.lattice, &self.grid, &self.flows, &free, f64::INFINITY)?.value)
    }

    pub fn report(&self, threshold: f64) -> Result<ValuationReport> {
        let csa = backward_induction(
            self.lattice,
            &self.grid,
            &self.flows,
            &self.credit,
            threshold,
        )?;
        Ok(ValuationReport {
            v_free: self.risk_free_value()?,
            v_risky: self.value(f64::INFINITY)?,
            v_csa: csa.value,
            threshold,
            diagnostics: csa.diagnostics,
        })
    }
}

/// Value the netting set with and without credit risk and collateral.
pub fn price_collateralized(
    set: &NettingSet,
    lattice: &RateLattice,
    curve: &ZeroCurve,
) -> Result<ValuationReport> {
    if curve.anchor() != lattice.anchor() {
        return Err(Error::InvalidInput(
            "curve and lattice anchors differ".into(),
        ));
    }
    if set.trades.is_empty() {
        return Ok(ValuationReport::zero(set.threshold()));
    }
    PreparedSet::new(set, lattice)?.report(set.threshold())
}
