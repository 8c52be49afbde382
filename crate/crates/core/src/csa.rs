//! Collateral agreement terms and the two collateral laws.
//!
//! Only the counterparty posts collateral, cash collateral accrues at the
//! risk-free rate, and the effective threshold is constant over the life of
//! the agreement.

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CsaTerms {
    pub threshold: f64,
    /// Minimum transfer amount.
    pub mta: f64,
    /// Upfront collateral, acting like an initial margin.
    pub independent_amount: f64,
}

impl CsaTerms {
    pub fn new(threshold: f64, mta: f64, independent_amount: f64) -> crate::Result<Self> {
        if !(mta >= 0.0) {
            return Err(crate::Error::InvalidInput(alloc::format!(
                "MTA {mta} must be non-negative"
            )));
        }
        Ok(Self {
            threshold,
            mta,
            independent_amount,
        })
    }

    /// H = threshold + MTA − independent amount. Negative H means over-collateralization.
    pub fn effective_threshold(&self) -> f64 {
        effective_threshold(self)
    }
}

pub fn effective_threshold(terms: &CsaTerms) -> f64 {
    terms.threshold + terms.mta - terms.independent_amount
}

/// Collateral held against `value` under effective threshold `h`: max(value − h, 0).
pub fn collateral_amount(value: f64, h: f64) -> f64 {
    (value - h).max(0.0)
}

/// Amount received on counterparty default when `x` is owed and `c` is held as
/// collateral: the collateral in full plus recovery on the unsecured remainder.
pub fn default_payment(x: f64, c: f64, recovery: f64) -> f64 {
    recovery * x + c * (1.0 - recovery)
}
