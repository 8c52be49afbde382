//! CVA, threshold sweeps and historical VaR built on the collateral pricer.

mod cva;
mod history;
mod scenarios;
mod var;

pub use cva::{cva, threshold_sweep, CvaReport, SweepPoint};
pub use history::{synth_history, HistoryParams};
pub use scenarios::{
    pnl_scenarios, KeyRateShift, MarketHistory, MarketShift, PnlScenario, ScenarioContext,
    ScenarioValues, ValuationMode,
};
pub use var::{historical_var, VarEstimate};
