use alloc::collections::BTreeSet;
use alloc::format;

use time::{Date, Duration, Month, Weekday};

use crate::{Error, Result};

/// Business-day rolling rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BusinessDayConvention {
    Unadjusted,
    Following,
    #[default]
    ModifiedFollowing,
}

pub trait Calendar {
    fn is_business_day(&self, date: Date) -> bool;

    fn adjust(&self, date: Date, convention: BusinessDayConvention) -> Date {
        match convention {
            BusinessDayConvention::Unadjusted => date,
            BusinessDayConvention::Following => self.following(date),
            BusinessDayConvention::ModifiedFollowing => {
                let next = self.following(date);
                if next.month() == date.month() {
                    next
                } else {
                    self.preceding(date)
                }
            }
        }
    }

    fn following(&self, mut date: Date) -> Date {
        while !self.is_business_day(date) {
            date += Duration::days(1);
        }
        date
    }

    fn preceding(&self, mut date: Date) -> Date {
        while !self.is_business_day(date) {
            date -= Duration::days(1);
        }
        date
    }
}

fn is_weekend(date: Date) -> bool {
    matches!(date.weekday(), Weekday::Saturday | Weekday::Sunday)
}

/// Saturdays and Sundays are the only non-business days.
#[derive(Debug, Clone, Copy, Default)]
pub struct WeekendCalendar;

impl Calendar for WeekendCalendar {
    fn is_business_day(&self, date: Date) -> bool {
        !is_weekend(date)
    }
}

/// Weekends plus an explicit holiday list.
#[derive(Debug, Clone, Default)]
pub struct HolidayCalendar {
    holidays: BTreeSet<Date>,
}

impl HolidayCalendar {
    pub fn new(holidays: impl IntoIterator<Item = Date>) -> Self {
        Self {
            holidays: holidays.into_iter().collect(),
        }
    }
}

impl Calendar for HolidayCalendar {
    fn is_business_day(&self, date: Date) -> bool {
        !is_weekend(date) && !self.holidays.contains(&date)
    }
}

/// Shift by whole months, clamping the day to the end of the target month.
pub fn add_months(date: Date, months: i32) -> Result<Date> {
    let total = date.year() * 12 + (date.month() as i32 - 1) + months;
    let year = total.div_euclid(12);
    let month = Month::try_from((total.rem_euclid(12) + 1) as u8)
        .map_err(|e| Error::InvalidDate(format!("{e}")))?;
    let day = date.day().min(days_in_month(year, month));
    Date::from_calendar_date(year, month, day).map_err(|e| Error::InvalidDate(format!("{e}")))
}

fn days_in_month(year: i32, month: Month) -> u8 {
    month.length(year)
}

/// Third Wednesday of the month: the IMM date of a money-market future.
pub fn imm_date(year: i32, month: Month) -> Result<Date> {
    let first =
        Date::from_calendar_date(year, month, 1).map_err(|e| Error::InvalidDate(format!("{e}")))?;
    let offset = (Weekday::Wednesday.number_days_from_monday() as i64
        - first.weekday().number_days_from_monday() as i64)
        .rem_euclid(7);
    Ok(first + Duration::days(offset + 14))
}
