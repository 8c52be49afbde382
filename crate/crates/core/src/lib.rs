//! Valuation and risk for derivatives traded under a collateral agreement.
//!
//! The crate is organised bottom-up:
//!
//! * [`dates`] and [`curve`] build the risk-free discounting term structure.
//! * [`credit`] calibrates deterministic hazard rates to CDS quotes.
//! * [`csa`] holds the collateral terms and the posting / default-payment laws.
//! * [`lattice`] is a Hull-White trinomial short-rate tree fitted to the curve.
//! * [`pricing`] runs the collateral-adjusted backward induction over the tree.
//! * [`risk`] derives CVA, threshold sweeps and historical VaR from the pricer.
//! * [`analysis`] computes swap premium spreads and the simple OLS harness.
//!
//! Everything here is pure computation on `alloc` collections; file formats and
//! the command line live in the `csa-pricer` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod credit;
pub mod csa;
pub mod curve;
pub mod dates;
mod error;
pub mod lattice;
pub mod math;
pub mod pricing;
pub mod risk;

pub use error::{Error, Result};
