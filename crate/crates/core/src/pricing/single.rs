use crate::math::abs;
use crate::{Error, Result};

/// I = p + φ·q, the expected fraction of a promised payment that is received.
pub fn risk_adjusted_ratio(p: f64, q: f64, recovery: f64) -> Result<f64> {
    if abs(p + q - 1.0) > 1e-12 || !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
        return Err(Error::Probability { sum: p + q });
    }
    if !(0.0..1.0).contains(&recovery) {
        return Err(Error::InvalidInput(alloc::format!(
            "recovery {recovery} must lie in [0, 1)"
        )));
    }
    Ok(p + recovery * q)
}

/// Credit multiplier applied to a continuation value.
///
/// Default only costs the bank when it is owed money, so a non-positive
/// continuation value is carried at its risk-free amount.
#[inline]
pub fn exposure_ratio(risk_free_value: f64, ratio: f64) -> f64 {
    if risk_free_value > 0.0 {
        ratio
    } else {
        1.0
    }
}

/// Collateralized value from the uncollateralized one.
///
/// Below the threshold no collateral is posted and the risky value stands;
/// above it the posted collateral `V − H` is recovered in full on default,
/// which solves to `V = V^N / I − H·q·(1 − φ) / I`.
#[inline]
pub fn collateralize(
    risky: f64,
    risk_free: f64,
    ratio: f64,
    default: f64,
    recovery: f64,
    threshold: f64,
) -> f64 {
    if risk_free <= 0.0 || risky <= threshold {
        risky
    } else {
        risky / ratio - threshold * default * (1.0 - recovery) / ratio
    }
}

/// One state of the world at the payment date.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub prob: f64,
    pub discount: f64,
    pub payoff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinglePeriodValue {
    /// E[D·X].
    pub risk_free: f64,
    /// E[D·I·X].
    pub risky: f64,
    pub collateralized: f64,
    /// Collateral posted at the valuation date.
    pub collateral: f64,
}

/// Value of a single payment under a collateral agreement with effective threshold `threshold`.
pub fn value_single_period(
    outcomes: &[Outcome],
    survival: f64,
    recovery: f64,
    threshold: f64,
) -> Result<SinglePeriodValue> {
    let default = 1.0 - survival;
    let ratio = risk_adjusted_ratio(survival, default, recovery)?;
    if ratio == 0.0 {
        return Err(Error::DegenerateRatio);
    }
    let risk_free: f64 = outcomes
        .iter()
        .map(|o| o.prob * o.discount * o.payoff)
        .sum();
    let risky = exposure_ratio(risk_free, ratio) * risk_free;
    let collateralized = collateralize(risky, risk_free, ratio, default, recovery, threshold);
    Ok(SinglePeriodValue {
        risk_free,
        risky,
        collateralized,
        collateral: crate::csa::collateral_amount(collateralized, threshold),
    })
}

/// J = Σ prob · D · I · (V + X) over the branches leaving one node.
pub fn continuation_value(branches: &[Outcome], ratio: f64) -> f64 {
    branches
        .iter()
        .map(|b| b.prob * b.discount * ratio * b.payoff)
        .sum()
}
