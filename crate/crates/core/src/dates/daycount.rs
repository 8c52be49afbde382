use time::Date;

use crate::{Error, Result};

/// Accrual day-count conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DayCount {
    /// 30/360 bond basis (ISDA).
    Thirty360,
    Act360,
    Act365F,
}

impl DayCount {
    pub fn year_fraction(self, start: Date, end: Date) -> Result<f64> {
        year_fraction(start, end, self)
    }
}

pub fn year_fraction(start: Date, end: Date, dc: DayCount) -> Result<f64> {
    if start > end {
        return Err(Error::DateOrder { start, end });
    }
    let days = (end - start).whole_days() as f64;
    Ok(match dc {
        DayCount::Act360 => days / 360.0,
        DayCount::Act365F => days / 365.0,
        DayCount::Thirty360 => thirty_360(start, end),
    })
}

fn thirty_360(start: Date, end: Date) -> f64 {
    let d1 = start.day().min(30) as i32;
    let mut d2 = end.day() as i32;
    if d1 == 30 && d2 == 31 {
        d2 = 30;
    }
    let years = end.year() - start.year();
    let months = end.month() as i32 - start.month() as i32;
    (360 * years + 30 * months + (d2 - d1)) as f64 / 360.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use time::macros::date;

    #[test]
    fn thirty_360_half_year() {
        let yf = year_fraction(
            date!(2005 - 09 - 15),
            date!(2006 - 03 - 15),
            DayCount::Thirty360,
        );
        assert_eq!(yf.unwrap(), 0.5);
    }

    #[test]
    fn act_360_quarter() {
        // calendar count: 15 days left in September, 31 in October, 30 in November, 15 in December
        let days = 15 + 31 + 30 + 15;
        assert_eq!(days, 91);
        let yf = year_fraction(
            date!(2005 - 09 - 15),
            date!(2005 - 12 - 15),
            DayCount::Act360,
        )
        .unwrap();
        assert!((yf - 91.0 / 360.0).abs() < 1e-15);
        assert!((yf - 0.252778).abs() < 1e-6);
    }

    #[test]
    fn empty_period_is_zero() {
        let d = date!(2010 - 02 - 28);
        for dc in [DayCount::Thirty360, DayCount::Act360, DayCount::Act365F] {
            assert_eq!(year_fraction(d, d, dc).unwrap(), 0.0);
        }
    }

    #[test]
    fn reversed_dates_rejected() {
        let err = year_fraction(
            date!(2006 - 01 - 01),
            date!(2005 - 01 - 01),
            DayCount::Act360,
        );
        assert!(matches!(err, Err(Error::DateOrder { .. })));
    }

    #[test]
    fn thirty_360_end_of_month_rules() {
        // 31st start is treated as the 30th, and then a 31st end follows suit
        let yf = year_fraction(
            date!(2005 - 01 - 31),
            date!(2005 - 03 - 31),
            DayCount::Thirty360,
        )
        .unwrap();
        assert!((yf - 60.0 / 360.0).abs() < 1e-15);
        // 31st end with a start before the 30th is kept
        let yf = year_fraction(
            date!(2005 - 01 - 15),
            date!(2005 - 03 - 31),
            DayCount::Thirty360,
        )
        .unwrap();
        assert!((yf - 76.0 / 360.0).abs() < 1e-15);
    }

    #[test]
    fn act_is_additive() {
        let (a, b, c) = (
            date!(2005 - 02 - 11),
            date!(2007 - 06 - 30),
            date!(2011 - 12 - 01),
        );
        for dc in [DayCount::Act360, DayCount::Act365F] {
            let whole = year_fraction(a, c, dc).unwrap();
            let parts = year_fraction(a, b, dc).unwrap() + year_fraction(b, c, dc).unwrap();
            assert!((whole - parts).abs() < 1e-14);
        }
    }
}
