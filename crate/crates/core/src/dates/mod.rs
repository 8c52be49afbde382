//! Calendars, day counts and coupon schedules.

mod calendar;
mod daycount;
mod schedule;

pub use calendar::{
    add_months, imm_date, BusinessDayConvention, Calendar, HolidayCalendar, WeekendCalendar,
};
pub use daycount::{year_fraction, DayCount};
pub use schedule::{generate_schedule, Frequency, Period, Schedule};

use time::Date;

/// Year fraction on the ACT/365F clock used for all model times.
///
/// Curves, hazard curves and lattices measure time from their anchor with
/// this convention so dates map to the same `f64` everywhere.
pub fn time_between(anchor: Date, date: Date) -> f64 {
    (date - anchor).whole_days() as f64 / 365.0
}
