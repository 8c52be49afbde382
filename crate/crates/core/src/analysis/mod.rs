//! Swap premium spreads across counterparties and the simple regression harness.

mod ols;
mod spread;
pub mod stats;
mod synth;

pub use ols::{ols, RegressionResult};
pub use spread::{premium_spread, PremiumSpread};
pub use synth::{
    apply_rates, price_pair, price_pairs, regress_pairs, synth_pair_dataset, PairCounterparty,
    PairRegressions, SwapPair, SynthParams, CDS_TENORS,
};
