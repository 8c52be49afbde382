//! Collateral-adjusted valuation by backward induction on the rate lattice.
//!
//! Cashflows of a netting set are laid out on a grid of payment dates
//! T_0 < T_1 < … < T_m. Between consecutive dates the counterparty survives
//! with probability p and otherwise pays `φ·X` plus the collateral it had
//! posted. Working back from T_m, each node compares its risky continuation
//! value with the effective threshold H and switches to the collateralized
//! closed form above it.

mod engine;
mod grid;
mod netting;
mod par_rate;
mod single;
mod trade;

pub use engine::{backward_induction, GridCashflows, Induction, SliceDiagnostics};
pub use grid::{CreditPeriod, PaymentGrid, PeriodCredit};
pub use netting::{price_collateralized, NettingSet, PreparedSet, ValuationReport};
pub use par_rate::{generic_par_rate, solve_collateralized_par_rate};
pub use single::{
    collateralize, continuation_value, exposure_ratio, risk_adjusted_ratio, value_single_period,
    Outcome, SinglePeriodValue,
};
pub use trade::{node_cashflows, Leg, Position, Product, SwapSide, Timing, Trade, TradeKind};
