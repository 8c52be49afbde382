use alloc::vec::Vec;

use crate::math::ceil;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarEstimate {
    /// Signed VaR: the k-th smallest P&L. Negative when it is a loss.
    pub var: f64,
    /// Reported magnitude, the loss as a positive number (zero if no loss).
    pub loss: f64,
    /// k, 1-based rank of the order statistic.
    pub rank: usize,
    pub scenarios: usize,
}

/// Historical VaR as the k-th smallest P&L with k = ceil((1 − c)·N).
pub fn historical_var(pnl: &[f64], confidence: f64) -> Result<VarEstimate> {
    if pnl.is_empty() {
        return Err(Error::InsufficientData("no P&L scenarios".into()));
    }
    if !(confidence > 0.5 && confidence < 1.0) {
        return Err(Error::InvalidInput(alloc::format!(
            "confidence {confidence} must lie in (0.5, 1)"
        )));
    }
    if pnl.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidInput("P&L contains NaN".into()));
    }
    let n = pnl.len();
    // guard against (1 − 0.99)·1000 = 10.000000000000009
    let k = (ceil((1.0 - confidence) * n as f64 - 1e-9) as usize).clamp(1, n);
    let mut sorted: Vec<f64> = pnl.to_vec();
    sorted.sort_by(f64::total_cmp);
    let var = sorted[k - 1];
    Ok(VarEstimate {
        var,
        loss: (-var).max(0.0),
        rank: k,
        scenarios: n,
    })
}
