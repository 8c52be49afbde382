use alloc::string::String;
use alloc::vec::Vec;

use time::Date;

use crate::dates::{DayCount, Schedule};
use crate::lattice::RateLattice;
use crate::{Error, Result};

use super::grid::{CreditPeriod, PaymentGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TradeKind {
    PayerSwap,
    ReceiverSwap,
    Cap,
    Floor,
    EuropeanSwaption,
}

/// Fixed-leg direction from the bank's side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwapSide {
    PayFixed,
    ReceiveFixed,
}

impl SwapSide {
    /// +1 when the bank receives the fixed leg.
    pub fn fixed_sign(self) -> f64 {
        match self {
            SwapSide::PayFixed => -1.0,
            SwapSide::ReceiveFixed => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Position {
    #[default]
    Long,
    Short,
}

impl Position {
    pub fn sign(self) -> f64 {
        match self {
            Position::Long => 1.0,
            Position::Short => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Leg {
    pub schedule: Schedule,
    pub day_count: DayCount,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Product {
    Swap {
        side: SwapSide,
        fixed_rate: f64,
        fixed: Leg,
        float: Leg,
        /// Spread over the floating index.
        float_spread: f64,
    },
    Cap {
        strike: f64,
        leg: Leg,
    },
    Floor {
        strike: f64,
        leg: Leg,
    },
    /// Cash-settled at expiry into the underlying swap's value. `side` is the
    /// fixed-leg direction of the underlying when exercised (pay fixed = payer).
    Swaption {
        side: SwapSide,
        strike: f64,
        expiry: Date,
        fixed: Leg,
        float: Leg,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trade {
    pub id: String,
    pub notional: f64,
    /// Bought or sold. Swaps take their direction from [`SwapSide`] and are always `Long`.
    pub position: Position,
    pub product: Product,
}

/// Whether a cashflow paid at the end of a credit period is fixed by the lattice
/// state at the start of the period (coupons) or at its end (exercise values).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    PeriodStart,
    PeriodEnd,
}

impl Trade {
    pub fn kind(&self) -> TradeKind {
        match &self.product {
            Product::Swap {
                side: SwapSide::PayFixed,
                ..
            } => TradeKind::PayerSwap,
            Product::Swap {
                side: SwapSide::ReceiveFixed,
                ..
            } => TradeKind::ReceiverSwap,
            Product::Cap { .. } => TradeKind::Cap,
            Product::Floor { .. } => TradeKind::Floor,
            Product::Swaption { .. } => TradeKind::EuropeanSwaption,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.notional > 0.0 && self.notional.is_finite()) {
            return Err(Error::InvalidInput(alloc::format!(
                "trade {}: notional must be positive",
                self.id
            )));
        }
        if let Product::Swaption {
            expiry,
            fixed,
            float,
            ..
        } = &self.product
        {
            let starts_before = |leg: &Leg| {
                leg.schedule
                    .periods
                    .iter()
                    .any(|p| p.accrual_start < *expiry)
            };
            if starts_before(fixed) || starts_before(float) {
                return Err(Error::InvalidInput(alloc::format!(
                    "trade {}: swaption underlying must start on or after expiry",
                    self.id
                )));
            }
        }
        Ok(())
    }

    /// Dates on which the trade pays, plus floating reset dates, after `anchor`.
    /// These become credit periods of the backward induction.
    pub fn grid_dates(&self, anchor: Date) -> Vec<Date> {
        let mut out = Vec::new();
        let mut legs = |leg: &Leg, resets: bool| {
            for p in &leg.schedule.periods {
                if p.pay_date > anchor {
                    out.push(p.pay_date);
                    if resets && p.accrual_start > anchor {
                        out.push(p.accrual_start);
                    }
                }
            }
        };
        match &self.product {
            Product::Swap { fixed, float, .. } => {
                legs(fixed, false);
                legs(float, true);
            }
            Product::Cap { leg, .. } | Product::Floor { leg, .. } => legs(leg, true),
            Product::Swaption { expiry, .. } => {
                if *expiry > anchor {
                    out.push(*expiry);
                }
            }
        }
        out
    }

    /// Every date the lattice must carry to value the trade.
    pub fn lattice_dates(&self, anchor: Date) -> Vec<Date> {
        let mut out = self.grid_dates(anchor);
        if let Product::Swaption { fixed, float, .. } = &self.product {
            for p in fixed.schedule.periods.iter().chain(&float.schedule.periods) {
                out.push(p.accrual_start);
                out.push(p.pay_date);
            }
        }
        out.retain(|&d| d >= anchor);
        out
    }
}

/// Inputs shared by every node of one credit period.
pub(crate) struct PeriodState<'a> {
    pub period: CreditPeriod,
    /// P(T_j, T_{j+1}) at each node of the period-start slice.
    pub zero_bond: &'a [f64],
}

/// Cashflow the trade pays the bank at the end of `period`, as fixed at `node`
/// on the slice given by `timing`. Negative amounts are paid by the bank.
///
/// Floating coupons fix at the later of their accrual start and the period
/// start, off the lattice's simple forward to the payment date.
pub fn node_cashflows(
    trade: &Trade,
    lattice: &RateLattice,
    grid: &PaymentGrid,
    period: usize,
    timing: Timing,
    node: usize,
) -> Result<f64> {
    let period = grid.period(period)?;
    let zero_bond = lattice.zero_bond(period.start_slice, period.end_slice);
    let state = PeriodState {
        period,
        zero_bond: &zero_bond,
    };
    match timing {
        Timing::PeriodStart => start_amount(trade, &state, node),
        Timing::PeriodEnd => {
            let values = end_amounts(trade, lattice, period)?;
            values
                .and_then(|v| v.get(node).copied())
                .map_or(Ok(0.0), Ok)
        }
    }
}

fn coupons_paid_in<'l>(
    leg: &'l Leg,
    period: &CreditPeriod,
) -> impl Iterator<Item = &'l crate::dates::Period> + 'l {
    let end = period.end_date;
    leg.schedule
        .periods
        .iter()
        .filter(move |p| p.pay_date == end)
}

fn forward_at(state: &PeriodState, accrual_start: Date, dc: DayCount, node: usize) -> Result<f64> {
    let fixing = accrual_start.max(state.period.start_date);
    let tau = dc.year_fraction(fixing, state.period.end_date)?;
    Ok((1.0 / state.zero_bond[node] - 1.0) / tau)
}

pub(crate) fn start_amount(trade: &Trade, state: &PeriodState, node: usize) -> Result<f64> {
    let n = trade.notional;
    let pos = trade.position.sign();
    let mut total = 0.0;
    match &trade.product {
        Product::Swap {
            side,
            fixed_rate,
            fixed,
            float,
            float_spread,
        } => {
            let sign = side.fixed_sign();
            for p in coupons_paid_in(fixed, &state.period) {
                total += sign
                    * n
                    * fixed_rate
                    * fixed
                        .day_count
                        .year_fraction(p.accrual_start, p.accrual_end)?;
            }
            for p in coupons_paid_in(float, &state.period) {
                let tau = float
                    .day_count
                    .year_fraction(p.accrual_start, p.accrual_end)?;
                let l = forward_at(state, p.accrual_start, float.day_count, node)?;
                total -= sign * n * tau * (l + float_spread);
            }
        }
        Product::Cap { strike, leg } | Product::Floor { strike, leg } => {
            let is_cap = matches!(trade.product, Product::Cap { .. });
            for p in coupons_paid_in(leg, &state.period) {
                let tau = leg
                    .day_count
                    .year_fraction(p.accrual_start, p.accrual_end)?;
                let l = forward_at(state, p.accrual_start, leg.day_count, node)?;
                let payoff = if is_cap {
                    (l - strike).max(0.0)
                } else {
                    (strike - l).max(0.0)
                };
                total += pos * n * tau * payoff;
            }
        }
        Product::Swaption { .. } => {}
    }
    Ok(total)
}

/// Amounts fixed on the period-end slice, if the trade has any in this period.
pub(crate) fn end_amounts(
    trade: &Trade,
    lattice: &RateLattice,
    period: CreditPeriod,
) -> Result<Option<Vec<f64>>> {
    let Product::Swaption {
        side,
        strike,
        expiry,
        fixed,
        float,
    } = &trade.product
    else {
        return Ok(None);
    };
    if *expiry != period.end_date {
        return Ok(None);
    }
    let k = period.end_slice;
    let width = lattice.slice(k).nodes.len();
    let mut payer_value = alloc::vec![0.0; width];
    for p in &float.schedule.periods {
        let start = zero_bond_or_one(lattice, k, p.accrual_start)?;
        let end = zero_bond_or_one(lattice, k, p.pay_date)?;
        for (v, (s, e)) in payer_value.iter_mut().zip(start.iter().zip(&end)) {
            *v += s - e;
        }
    }
    for p in &fixed.schedule.periods {
        let tau = fixed
            .day_count
            .year_fraction(p.accrual_start, p.accrual_end)?;
        let pay = zero_bond_or_one(lattice, k, p.pay_date)?;
        for (v, df) in payer_value.iter_mut().zip(&pay) {
            *v -= strike * tau * df;
        }
    }
    let omega = -side.fixed_sign();
    let pos = trade.position.sign();
    Ok(Some(
        payer_value
            .into_iter()
            .map(|v| pos * trade.notional * (omega * v).max(0.0))
            .collect(),
    ))
}

fn zero_bond_or_one(lattice: &RateLattice, from: usize, date: Date) -> Result<Vec<f64>> {
    let to = lattice.slice_of_date(date)?;
    if to == from {
        return Ok(alloc::vec![1.0; lattice.slice(from).nodes.len()]);
    }
    Ok(lattice.zero_bond(from, to))
}
