use alloc::format;
use alloc::vec::Vec;

use time::Date;

use crate::credit::HazardCurve;
use crate::dates::time_between;
use crate::lattice::RateLattice;
use crate::{Error, Result};

/// The dates T_0 = anchor < T_1 < … < T_m between which credit and collateral
/// are applied, with their lattice slices.
#[derive(Debug, Clone, PartialEq)]
pub struct PaymentGrid {
    dates: Vec<Date>,
    times: Vec<f64>,
    slices: Vec<usize>,
}

/// One period (T_j, T_{j+1}) of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CreditPeriod {
    pub index: usize,
    pub start_date: Date,
    pub end_date: Date,
    pub start_time: f64,
    pub end_time: f64,
    pub start_slice: usize,
    pub end_slice: usize,
}

impl PaymentGrid {
    /// `dates` after the lattice anchor, sorted and de-duplicated; each must be a slice.
    pub fn new(lattice: &RateLattice, dates: &[Date]) -> Result<Self> {
        let anchor = lattice.anchor();
        let mut ds: Vec<Date> = dates.iter().copied().filter(|&d| d > anchor).collect();
        ds.sort();
        ds.dedup();
        ds.insert(0, anchor);
        let slices = ds
            .iter()
            .map(|&d| lattice.slice_of_date(d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            times: ds.iter().map(|&d| time_between(anchor, d)).collect(),
            dates: ds,
            slices,
        })
    }

    /// Number of payment dates m (excluding the anchor).
    pub fn len(&self) -> usize {
        self.dates.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dates(&self) -> &[Date] {
        &self.dates
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn slices(&self) -> &[usize] {
        &self.slices
    }

    pub fn period(&self, j: usize) -> Result<CreditPeriod> {
        if j >= self.len() {
            return Err(Error::InvalidInput(format!(
                "credit period {j} out of range"
            )));
        }
        Ok(CreditPeriod {
            index: j,
            start_date: self.dates[j],
            end_date: self.dates[j + 1],
            start_time: self.times[j],
            end_time: self.times[j + 1],
            start_slice: self.slices[j],
            end_slice: self.slices[j + 1],
        })
    }

    pub fn periods(&self) -> impl Iterator<Item = CreditPeriod> + '_ {
        (0..self.len()).filter_map(|j| self.period(j).ok())
    }
}

/// Survival and recovery over one credit period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodCredit {
    pub survival: f64,
    pub default: f64,
    pub recovery: f64,
}

impl PeriodCredit {
    pub const RISK_FREE: PeriodCredit = PeriodCredit {
        survival: 1.0,
        default: 0.0,
        recovery: 0.0,
    };

    /// I = p + φ·q.
    pub fn ratio(&self) -> f64 {
        self.survival + self.recovery * self.default
    }

    /// Per-period factors for every credit period of `grid`.
    pub fn schedule(hazard: &HazardCurve, grid: &PaymentGrid) -> Result<Vec<PeriodCredit>> {
        grid.periods()
            .map(|p| {
                let survival = hazard.survival_between(p.start_time, p.end_time)?;
                Ok(PeriodCredit {
                    survival,
                    default: 1.0 - survival,
                    recovery: hazard.recovery(),
                })
            })
            .collect()
    }
}
