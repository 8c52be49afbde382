//! Risk-free zero curve: log-linear discount factors bootstrapped from
//! deposits, money-market futures and par swaps.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use time::{Date, Month};

use crate::dates::{
    add_months, generate_schedule, imm_date, time_between, year_fraction, BusinessDayConvention,
    Calendar, DayCount, Frequency, Schedule, WeekendCalendar,
};
use crate::math::{brent, exp, log};
use crate::{Error, Result};

/// Market conventions of a fixed-for-floating swap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapConvention {
    pub fixed_frequency: Frequency,
    pub fixed_day_count: DayCount,
    pub float_frequency: Frequency,
    pub float_day_count: DayCount,
    pub roll: BusinessDayConvention,
}

impl Default for SwapConvention {
    /// USD: semiannual 30/360 fixed against 3M LIBOR ACT/360, modified following.
    fn default() -> Self {
        Self {
            fixed_frequency: Frequency::SemiAnnual,
            fixed_day_count: DayCount::Thirty360,
            float_frequency: Frequency::Quarterly,
            float_day_count: DayCount::Act360,
            roll: BusinessDayConvention::ModifiedFollowing,
        }
    }
}

impl SwapConvention {
    pub fn schedules(
        &self,
        effective: Date,
        maturity: Date,
        calendar: &dyn Calendar,
    ) -> Result<(Schedule, Schedule)> {
        let fixed = generate_schedule(
            effective,
            maturity,
            self.fixed_frequency,
            self.roll,
            calendar,
        )?;
        let float = generate_schedule(
            effective,
            maturity,
            self.float_frequency,
            self.roll,
            calendar,
        )?;
        Ok((fixed, float))
    }
}

/// Where an instrument ends: an explicit date or a tenor in months from the anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Maturity {
    Date(Date),
    Months(i32),
}

impl Maturity {
    pub fn resolve(self, anchor: Date) -> Result<Date> {
        match self {
            Maturity::Date(d) => Ok(d),
            Maturity::Months(m) => add_months(anchor, m),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveInstrument {
    /// Simple ACT/360 deposit from the anchor.
    Deposit {
        label: String,
        maturity: Maturity,
        rate: f64,
    },
    /// Money-market future on the ACT/360 forward rate over `[start, end]`.
    /// No convexity adjustment is applied.
    Future {
        label: String,
        start: Date,
        end: Date,
        price: f64,
    },
    /// Spot-starting par swap.
    Swap {
        label: String,
        maturity: Maturity,
        rate: f64,
        convention: SwapConvention,
    },
}

impl CurveInstrument {
    /// A 3M future on the IMM date of `month`, ending on the IMM date three months later.
    pub fn imm_future(
        label: impl Into<String>,
        year: i32,
        month: Month,
        price: f64,
    ) -> Result<Self> {
        let start = imm_date(year, month)?;
        let next = add_months(start, 3)?;
        let end = imm_date(next.year(), next.month())?;
        Ok(CurveInstrument::Future {
            label: label.into(),
            start,
            end,
            price,
        })
    }

    pub fn label(&self) -> &str {
        match self {
            CurveInstrument::Deposit { label, .. }
            | CurveInstrument::Future { label, .. }
            | CurveInstrument::Swap { label, .. } => label,
        }
    }

    /// The quote in its native units (rate or futures price).
    pub fn quote(&self) -> f64 {
        match *self {
            CurveInstrument::Deposit { rate, .. } | CurveInstrument::Swap { rate, .. } => rate,
            CurveInstrument::Future { price, .. } => price,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            CurveInstrument::Deposit { rate, .. } | CurveInstrument::Swap { rate, .. } => {
                rate > -0.1 && rate < 1.0
            }
            CurveInstrument::Future {
                price, start, end, ..
            } => price > 0.0 && price < 200.0 && start < end,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "instrument {} has an out-of-range quote",
                self.label()
            )))
        }
    }

    fn end_date(&self, anchor: Date, calendar: &dyn Calendar) -> Result<Date> {
        match self {
            CurveInstrument::Deposit { maturity, .. } => maturity.resolve(anchor),
            CurveInstrument::Future { end, .. } => Ok(*end),
            CurveInstrument::Swap {
                maturity,
                convention,
                ..
            } => {
                let (fixed, float) =
                    convention.schedules(anchor, maturity.resolve(anchor)?, calendar)?;
                let last = |s: &Schedule| s.periods.last().map(|p| p.pay_date).unwrap_or(anchor);
                Ok(last(&fixed).max(last(&float)))
            }
        }
    }

    /// Model-implied quote on `curve`, in the same units as [`quote`](Self::quote).
    pub fn implied_quote(&self, curve: &ZeroCurve, calendar: &dyn Calendar) -> Result<f64> {
        let anchor = curve.anchor();
        match self {
            CurveInstrument::Deposit { maturity, .. } => {
                let end = maturity.resolve(anchor)?;
                let tau = year_fraction(anchor, end, DayCount::Act360)?;
                Ok((1.0 / curve.df(end)? - 1.0) / tau)
            }
            CurveInstrument::Future { start, end, .. } => {
                let tau = year_fraction(*start, *end, DayCount::Act360)?;
                let fwd = (curve.df(*start)? / curve.df(*end)? - 1.0) / tau;
                Ok(100.0 * (1.0 - fwd))
            }
            CurveInstrument::Swap {
                maturity,
                convention,
                ..
            } => {
                let (fixed, float) =
                    convention.schedules(anchor, maturity.resolve(anchor)?, calendar)?;
                par_swap_rate(
                    curve,
                    &fixed,
                    &float,
                    convention.fixed_day_count,
                    convention.float_day_count,
                )
            }
        }
    }
}

/// Discount curve with log-linear interpolation in discount factors on the
/// ACT/365F clock and flat-forward extrapolation past the last pillar.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCurve {
    anchor: Date,
    dates: Vec<Date>,
    times: Vec<f64>,
    log_dfs: Vec<f64>,
}

impl ZeroCurve {
    /// Build from `(date, discount factor)` pillars after `anchor`.
    ///
    /// Discount factors must be positive and non-increasing.
    pub fn from_pillars(anchor: Date, pillars: &[(Date, f64)]) -> Result<Self> {
        if pillars.is_empty() {
            return Err(Error::InvalidInput(
                "zero curve needs at least one pillar".into(),
            ));
        }
        let mut curve = ZeroCurve {
            anchor,
            dates: Vec::with_capacity(pillars.len() + 1),
            times: Vec::with_capacity(pillars.len() + 1),
            log_dfs: Vec::with_capacity(pillars.len() + 1),
        };
        curve.push(anchor, 0.0);
        for &(date, df) in pillars {
            if date <= *curve.dates.last().unwrap_or(&anchor) {
                return Err(Error::InvalidInput(format!(
                    "pillar {date} is not after the previous pillar"
                )));
            }
            if !(df > 0.0 && df.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "non-positive discount factor at {date}"
                )));
            }
            curve.push(date, log(df));
        }
        curve.check_monotone()?;
        Ok(curve)
    }

    /// Flat continuously compounded zero rate.
    pub fn flat(anchor: Date, rate: f64) -> Self {
        let one_year = anchor + time::Duration::days(365);
        ZeroCurve {
            anchor,
            dates: alloc::vec![anchor, one_year],
            times: alloc::vec![0.0, 1.0],
            log_dfs: alloc::vec![0.0, -rate],
        }
    }

    fn push(&mut self, date: Date, log_df: f64) {
        self.dates.push(date);
        self.times.push(time_between(self.anchor, date));
        self.log_dfs.push(log_df);
    }

    fn check_monotone(&self) -> Result<()> {
        for (i, w) in self.log_dfs.windows(2).enumerate() {
            if w[1] > w[0] {
                return Err(Error::InvalidInput(format!(
                    "discount factor increases at pillar {}",
                    self.dates[i + 1]
                )));
            }
        }
        Ok(())
    }

    pub fn anchor(&self) -> Date {
        self.anchor
    }

    /// Pillars after the anchor as `(date, discount factor)`.
    pub fn pillars(&self) -> impl Iterator<Item = (Date, f64)> + '_ {
        self.dates
            .iter()
            .zip(&self.log_dfs)
            .skip(1)
            .map(|(&d, &l)| (d, exp(l)))
    }

    /// Pillar times in years from the anchor, excluding the anchor itself.
    pub fn pillar_times(&self) -> &[f64] {
        &self.times[1..]
    }

    fn log_df_at(&self, t: f64) -> f64 {
        let n = self.times.len();
        if t <= 0.0 {
            // before the anchor: extend the first segment's forward rate
            let slope = (self.log_dfs[1] - self.log_dfs[0]) / (self.times[1] - self.times[0]);
            return slope * t;
        }
        let i = match self.times.iter().position(|&x| x >= t) {
            Some(0) => return self.log_dfs[0],
            Some(i) => i,
            None => n - 1,
        };
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let (l0, l1) = (self.log_dfs[i - 1], self.log_dfs[i]);
        l0 + (l1 - l0) * (t - t0) / (t1 - t0)
    }

    /// D(anchor, t) for a time in years on the ACT/365F clock.
    pub fn df_time(&self, t: f64) -> f64 {
        exp(self.log_df_at(t))
    }

    /// D(anchor, date).
    pub fn df(&self, date: Date) -> Result<f64> {
        if date < self.anchor {
            return Err(Error::DateOrder {
                start: self.anchor,
                end: date,
            });
        }
        Ok(self.df_time(time_between(self.anchor, date)))
    }

    /// D(t, T) = D(anchor, T) / D(anchor, t).
    pub fn discount_factor(&self, t: Date, maturity: Date) -> Result<f64> {
        if maturity < t {
            return Err(Error::DateOrder {
                start: t,
                end: maturity,
            });
        }
        if t < self.anchor {
            return Err(Error::DateOrder {
                start: self.anchor,
                end: t,
            });
        }
        let lt = self.log_df_at(time_between(self.anchor, t));
        let lm = self.log_df_at(time_between(self.anchor, maturity));
        Ok(exp(lm - lt))
    }

    /// Continuously compounded zero rate to time `t` (years).
    pub fn zero_rate(&self, t: f64) -> f64 {
        if t <= 0.0 {
            let slope = (self.log_dfs[1] - self.log_dfs[0]) / (self.times[1] - self.times[0]);
            return -slope;
        }
        -self.log_df_at(t) / t
    }

    /// The same pillars with each zero rate shifted by `shift(t)` (absolute, decimal).
    pub fn with_zero_rate_shift(&self, shift: impl Fn(f64) -> f64) -> Result<Self> {
        let mut out = self.clone();
        for i in 1..out.times.len() {
            out.log_dfs[i] -= shift(out.times[i]) * out.times[i];
        }
        out.check_monotone()?;
        Ok(out)
    }
}

/// Fixed rate equating the fixed-leg and floating-leg present values.
///
/// Floating coupons are projected off the same curve (single-curve setup).
pub fn par_swap_rate(
    curve: &ZeroCurve,
    fixed: &Schedule,
    float: &Schedule,
    fixed_dc: DayCount,
    float_dc: DayCount,
) -> Result<f64> {
    let annuity = fixed_annuity(curve, fixed, fixed_dc)?;
    if annuity == 0.0 {
        return Err(Error::ZeroAnnuity);
    }
    Ok(float_leg_pv(curve, float, float_dc)? / annuity)
}

/// Σ τ_i D(pay_i) over the fixed schedule.
pub fn fixed_annuity(curve: &ZeroCurve, fixed: &Schedule, dc: DayCount) -> Result<f64> {
    fixed.periods.iter().try_fold(0.0, |acc, p| {
        Ok(acc + dc.year_fraction(p.accrual_start, p.accrual_end)? * curve.df(p.pay_date)?)
    })
}

/// PV per unit notional of a floating leg paying the simple forward over each accrual period.
pub fn float_leg_pv(curve: &ZeroCurve, float: &Schedule, dc: DayCount) -> Result<f64> {
    float.periods.iter().try_fold(0.0, |acc, p| {
        let tau = dc.year_fraction(p.accrual_start, p.accrual_end)?;
        let fwd = (curve.df(p.accrual_start)? / curve.df(p.accrual_end)? - 1.0) / tau;
        Ok(acc + tau * fwd * curve.df(p.pay_date)?)
    })
}

/// Bootstrap on a weekend-only calendar.
pub fn bootstrap_curve(anchor: Date, instruments: &[CurveInstrument]) -> Result<ZeroCurve> {
    bootstrap_curve_with(anchor, instruments, &WeekendCalendar)
}

/// Sequential bootstrap: each instrument adds one pillar at its end date, solved
/// so the instrument reprices to its quote with earlier pillars held fixed.
pub fn bootstrap_curve_with(
    anchor: Date,
    instruments: &[CurveInstrument],
    calendar: &dyn Calendar,
) -> Result<ZeroCurve> {
    if instruments.is_empty() {
        return Err(Error::InvalidInput("no curve instruments".into()));
    }
    let mut pillars: Vec<(Date, f64)> = Vec::with_capacity(instruments.len());
    let mut last_end = anchor;
    for inst in instruments {
        inst.validate()?;
        let end = inst.end_date(anchor, calendar)?;
        if end <= last_end {
            return Err(Error::InvalidInput(format!(
                "instrument {} ends on {end}, not after the previous pillar {last_end}",
                inst.label()
            )));
        }
        if let CurveInstrument::Future { start, .. } = inst {
            if *start < anchor {
                return Err(Error::InvalidInput(format!(
                    "future {} starts before the anchor",
                    inst.label()
                )));
            }
        }
        let target = inst.quote();
        let prev_log_df = pillars.last().map(|&(_, df)| log(df)).unwrap_or(0.0);
        let span = time_between(last_end, end);
        let trial = |log_df: f64, pillars: &mut Vec<(Date, f64)>| -> Result<f64> {
            pillars.push((end, exp(log_df)));
            let curve = ZeroCurve::from_pillars_unchecked(anchor, pillars);
            pillars.pop();
            inst.implied_quote(&curve, calendar)
        };
        // futures quote in price, which rises as the discount factor rises
        let sign = if matches!(inst, CurveInstrument::Future { .. }) {
            -1.0
        } else {
            1.0
        };
        let mut failure: Option<Error> = None;
        let lo = prev_log_df - 2.0 * span - 0.5;
        let hi = prev_log_df + 0.5 * span + 0.05;
        let root = brent(
            |x| match trial(x, &mut pillars) {
                Ok(q) => sign * (q - target),
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            lo,
            hi,
            1e-16,
            0.0,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let log_df = root.map_err(|e| Error::Bootstrap {
            pillar: inst.label().to_string(),
            reason: e.to_string(),
        })?;
        if log_df > prev_log_df {
            return Err(Error::Bootstrap {
                pillar: inst.label().to_string(),
                reason: "implied discount factor increases (negative forward rate)".to_string(),
            });
        }
        pillars.push((end, exp(log_df)));
        last_end = end;
    }
    ZeroCurve::from_pillars(anchor, &pillars)
}

impl ZeroCurve {
    fn from_pillars_unchecked(anchor: Date, pillars: &[(Date, f64)]) -> Self {
        let mut curve = ZeroCurve {
            anchor,
            dates: Vec::with_capacity(pillars.len() + 1),
            times: Vec::with_capacity(pillars.len() + 1),
            log_dfs: Vec::with_capacity(pillars.len() + 1),
        };
        curve.push(anchor, 0.0);
        for &(d, df) in pillars {
            curve.push(d, log(df));
        }
        curve
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use time::macros::date;

    const ANCHOR: Date = date!(2005 - 09 - 15);

    #[test]
    fn flat_curve_discount() {
        let c = ZeroCurve::flat(ANCHOR, 0.05);
        assert!((c.df_time(2.0) - (-0.10f64).exp()).abs() < 1e-15);
        assert!((c.df_time(2.0) - 0.904837).abs() < 1e-6);
        let d = date!(2011 - 01 - 01);
        assert_eq!(c.discount_factor(d, d).unwrap(), 1.0);
    }

    #[test]
    fn single_deposit() {
        let end = date!(2005 - 12 - 15);
        let c = bootstrap_curve(
            ANCHOR,
            &[CurveInstrument::Deposit {
                label: "3M".into(),
                maturity: Maturity::Date(end),
                rate: 0.04,
            }],
        )
        .unwrap();
        let expect = 1.0 / (1.0 + 0.04 * 91.0 / 360.0);
        assert!((c.df(end).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn empty_and_unsorted_rejected() {
        assert!(bootstrap_curve(ANCHOR, &[]).is_err());
        let dep = |m: i32| CurveInstrument::Deposit {
            label: format!("{m}M"),
            maturity: Maturity::Months(m),
            rate: 0.03,
        };
        assert!(bootstrap_curve(ANCHOR, &[dep(6), dep(3)]).is_err());
        assert!(bootstrap_curve(ANCHOR, &[dep(3), dep(3)]).is_err());
    }

    #[test]
    fn zero_rate_curve_gives_zero_par_rate() {
        let c = ZeroCurve::from_pillars(ANCHOR, &[(date!(2030 - 01 - 01), 1.0)]).unwrap();
        let conv = SwapConvention::default();
        let (fx, fl) = conv
            .schedules(ANCHOR, date!(2015 - 09 - 15), &WeekendCalendar)
            .unwrap();
        let r = par_swap_rate(&c, &fx, &fl, conv.fixed_day_count, conv.float_day_count).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn increasing_discount_factors_rejected() {
        let r = ZeroCurve::from_pillars(
            ANCHOR,
            &[
                (date!(2006 - 01 - 01), 0.99),
                (date!(2007 - 01 - 01), 0.995),
            ],
        );
        assert!(r.is_err());
    }

    #[test]
    fn ordering_error_for_reversed_dates() {
        let c = ZeroCurve::flat(ANCHOR, 0.03);
        assert!(matches!(
            c.discount_factor(date!(2007 - 01 - 01), date!(2006 - 01 - 01)),
            Err(Error::DateOrder { .. })
        ));
    }
}
