use alloc::vec::Vec;

use time::Date;

use super::calendar::{add_months, BusinessDayConvention, Calendar};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frequency {
    Quarterly,
    SemiAnnual,
    Annual,
}

impl Frequency {
    pub fn months(self) -> i32 {
        match self {
            Frequency::Quarterly => 3,
            Frequency::SemiAnnual => 6,
            Frequency::Annual => 12,
        }
    }

    pub fn per_year(self) -> u32 {
        12 / self.months() as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Period {
    pub accrual_start: Date,
    pub accrual_end: Date,
    pub pay_date: Date,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub effective: Date,
    pub maturity: Date,
    pub frequency: Frequency,
    pub convention: BusinessDayConvention,
    pub periods: Vec<Period>,
}

impl Schedule {
    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn pay_dates(&self) -> impl Iterator<Item = Date> + '_ {
        self.periods.iter().map(|p| p.pay_date)
    }
}

/// Regular schedule rolled back from `maturity`, with a short front stub when
/// the tenor is not a whole number of periods.
///
/// Accrual boundaries and pay dates are adjusted with `convention`.
pub fn generate_schedule(
    effective: Date,
    maturity: Date,
    frequency: Frequency,
    convention: BusinessDayConvention,
    calendar: &dyn Calendar,
) -> Result<Schedule> {
    if effective >= maturity {
        return Err(Error::DateOrder {
            start: effective,
            end: maturity,
        });
    }
    let step = frequency.months();
    let mut unadjusted = Vec::new();
    let mut k = 0;
    loop {
        let d = add_months(maturity, -step * k)?;
        if d <= effective {
            break;
        }
        unadjusted.push(d);
        k += 1;
    }
    unadjusted.push(effective);
    unadjusted.reverse();

    let adjusted: Vec<Date> = unadjusted
        .iter()
        .map(|&d| calendar.adjust(d, convention))
        .collect();
    let periods = adjusted
        .windows(2)
        .map(|w| Period {
            accrual_start: w[0],
            accrual_end: w[1],
            pay_date: w[1],
        })
        .collect();
    Ok(Schedule {
        effective,
        maturity,
        frequency,
        convention,
        periods,
    })
}
