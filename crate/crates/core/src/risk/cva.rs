use alloc::vec::Vec;

use crate::curve::ZeroCurve;
use crate::lattice::RateLattice;
use crate::pricing::{NettingSet, PreparedSet};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvaReport {
    pub v_free: f64,
    pub v_risky: f64,
    pub v_csa: f64,
    pub threshold: f64,
    /// V^F − V^N.
    pub cva_uncollateralized: f64,
    /// V^F − V^C.
    pub cva_collateralized: f64,
}

pub fn cva(set: &NettingSet, lattice: &RateLattice, curve: &ZeroCurve) -> Result<CvaReport> {
    if curve.anchor() != lattice.anchor() {
        return Err(Error::InvalidInput(
            "curve and lattice anchors differ".into(),
        ));
    }
    let threshold = set.threshold();
    if set.trades.is_empty() {
        return Ok(CvaReport {
            v_free: 0.0,
            v_risky: 0.0,
            v_csa: 0.0,
            threshold,
            cva_uncollateralized: 0.0,
            cva_collateralized: 0.0,
        });
    }
    let prepared = PreparedSet::new(set, lattice)?;
    let v_free = prepared.risk_free_value()?;
    let v_risky = prepared.value(f64::INFINITY)?;
    let v_csa = prepared.value(threshold)?;
    Ok(CvaReport {
        v_free,
        v_risky,
        v_csa,
        threshold,
        cva_uncollateralized: v_free - v_risky,
        cva_collateralized: v_free - v_csa,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub threshold: f64,
    pub v_csa: f64,
    pub cva: f64,
}

/// CVA against each effective threshold; `f64::INFINITY` means no CSA.
pub fn threshold_sweep(
    set: &NettingSet,
    lattice: &RateLattice,
    thresholds: &[f64],
) -> Result<Vec<SweepPoint>> {
    if thresholds.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidInput(
            "thresholds must be sorted ascending".into(),
        ));
    }
    if set.trades.is_empty() {
        return Ok(thresholds
            .iter()
            .map(|&threshold| SweepPoint {
                threshold,
                v_csa: 0.0,
                cva: 0.0,
            })
            .collect());
    }
    let prepared = PreparedSet::new(set, lattice)?;
    let v_free = prepared.risk_free_value()?;
    thresholds
        .iter()
        .map(|&threshold| {
            let v_csa = prepared.value(threshold)?;
            Ok(SweepPoint {
                threshold,
                v_csa,
                cva: v_free - v_csa,
            })
        })
        .collect()
}
