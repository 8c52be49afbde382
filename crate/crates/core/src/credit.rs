//! Deterministic piecewise-constant hazard rates calibrated to CDS quotes.

use alloc::format;
use alloc::vec::Vec;

use time::Date;

use crate::curve::ZeroCurve;
use crate::dates::time_between;
use crate::math::{brent, ceil, exp};
use crate::{Error, Result};

/// Premium payments per year on the CDS calibration grid.
const PREMIUM_FREQUENCY: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdsQuote {
    /// Tenor in years.
    pub tenor: f64,
    /// Running spread, decimal per annum.
    pub spread: f64,
}

impl CdsQuote {
    pub fn new(tenor: f64, spread: f64) -> Self {
        Self { tenor, spread }
    }
}

/// Piecewise-constant default intensity plus a constant recovery rate.
///
/// Segment `i` covers `(end[i-1], end[i]]` in years from the anchor; the last
/// hazard rate is extended flat beyond the final segment end.
#[derive(Debug, Clone, PartialEq)]
pub struct HazardCurve {
    anchor: Date,
    ends: Vec<f64>,
    hazards: Vec<f64>,
    recovery: f64,
}

impl HazardCurve {
    pub fn new(anchor: Date, segments: &[(f64, f64)], recovery: f64) -> Result<Self> {
        check_recovery(recovery)?;
        if segments.is_empty() {
            return Err(Error::InvalidInput(
                "hazard curve needs at least one segment".into(),
            ));
        }
        let mut prev = 0.0;
        for &(end, h) in segments {
            if !(end > prev) {
                return Err(Error::InvalidInput(format!(
                    "hazard segment end {end} is not increasing"
                )));
            }
            if !(h >= 0.0 && h.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "hazard rate {h} must be non-negative"
                )));
            }
            prev = end;
        }
        Ok(Self {
            anchor,
            ends: segments.iter().map(|s| s.0).collect(),
            hazards: segments.iter().map(|s| s.1).collect(),
            recovery,
        })
    }

    pub fn flat(anchor: Date, hazard: f64, recovery: f64) -> Result<Self> {
        Self::new(anchor, &[(1.0, hazard)], recovery)
    }

    /// No default risk at all.
    pub fn risk_free(anchor: Date) -> Self {
        Self {
            anchor,
            ends: alloc::vec![1.0],
            hazards: alloc::vec![0.0],
            recovery: 0.0,
        }
    }

    pub fn anchor(&self) -> Date {
        self.anchor
    }

    pub fn recovery(&self) -> f64 {
        self.recovery
    }

    /// `(segment end in years, hazard rate)` pairs.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.ends.iter().copied().zip(self.hazards.iter().copied())
    }

    pub fn with_recovery(&self, recovery: f64) -> Result<Self> {
        check_recovery(recovery)?;
        Ok(Self {
            recovery,
            ..self.clone()
        })
    }

    /// ∫₀ᵗ h(u) du.
    pub fn cumulative_hazard(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        let mut start = 0.0;
        for (&end, &h) in self.ends.iter().zip(&self.hazards) {
            if t <= end {
                return acc + h * (t - start);
            }
            acc += h * (end - start);
            start = end;
        }
        acc + self.hazards.last().copied().unwrap_or(0.0) * (t - start)
    }

    /// p(t0, t1) on the year clock.
    pub fn survival_between(&self, t0: f64, t1: f64) -> Result<f64> {
        if t1 < t0 {
            return Err(Error::TimeOrder { start: t0, end: t1 });
        }
        Ok(exp(
            -(self.cumulative_hazard(t1.max(0.0)) - self.cumulative_hazard(t0.max(0.0)))
        ))
    }

    /// q(t0, t1) = 1 − p(t0, t1).
    pub fn default_between(&self, t0: f64, t1: f64) -> Result<f64> {
        Ok(1.0 - self.survival_between(t0, t1)?)
    }

    /// p(t, s): probability of surviving to `s` given survival to `t`.
    pub fn survival_prob(&self, t: Date, s: Date) -> Result<f64> {
        if s < t {
            return Err(Error::DateOrder { start: t, end: s });
        }
        self.survival_between(time_between(self.anchor, t), time_between(self.anchor, s))
    }

    /// q(t, s) = 1 − p(t, s).
    pub fn default_prob(&self, t: Date, s: Date) -> Result<f64> {
        Ok(1.0 - self.survival_prob(t, s)?)
    }

    pub fn is_risk_free(&self) -> bool {
        self.hazards.iter().all(|&h| h == 0.0)
    }
}

fn check_recovery(recovery: f64) -> Result<()> {
    if (0.0..1.0).contains(&recovery) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "recovery {recovery} must lie in [0, 1)"
        )))
    }
}

fn premium_grid(tenor: f64) -> Vec<f64> {
    let n = ceil(tenor * PREMIUM_FREQUENCY - 1e-9) as usize;
    (1..=n)
        .map(|k| (k as f64 / PREMIUM_FREQUENCY).min(tenor))
        .collect()
}

/// Fair running spread of a CDS with quarterly premiums and default settlement
/// at the end of the period of default. Accrued premium on default is ignored.
pub fn par_cds_spread(hc: &HazardCurve, tenor: f64, curve: &ZeroCurve) -> Result<f64> {
    let (premium, protection) = cds_legs(hc, tenor, curve)?;
    if premium == 0.0 {
        return Err(Error::ZeroAnnuity);
    }
    Ok(protection / premium)
}

/// (risky annuity, protection leg PV) per unit notional.
fn cds_legs(hc: &HazardCurve, tenor: f64, curve: &ZeroCurve) -> Result<(f64, f64)> {
    if !(tenor > 0.0) {
        return Err(Error::InvalidInput(format!(
            "CDS tenor {tenor} must be positive"
        )));
    }
    let mut annuity = 0.0;
    let mut protection = 0.0;
    let mut prev_t = 0.0;
    let mut prev_p = 1.0;
    for t in premium_grid(tenor) {
        let df = curve.df_time(t);
        let p = exp(-hc.cumulative_hazard(t));
        annuity += (t - prev_t) * df * p;
        protection += df * (prev_p - p);
        prev_t = t;
        prev_p = p;
    }
    Ok((annuity, (1.0 - hc.recovery) * protection))
}

/// Sequentially solve one hazard rate per quote so each tenor reprices exactly.
pub fn bootstrap_hazards(
    quotes: &[CdsQuote],
    recovery: f64,
    curve: &ZeroCurve,
) -> Result<HazardCurve> {
    check_recovery(recovery)?;
    if quotes.is_empty() {
        return Err(Error::InvalidInput("no CDS quotes".into()));
    }
    let mut prev = 0.0;
    for q in quotes {
        if !(q.tenor > prev) {
            return Err(Error::InvalidInput(format!(
                "CDS tenor {} is not increasing",
                q.tenor
            )));
        }
        if !(q.spread >= 0.0 && q.spread.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "CDS spread {} must be non-negative",
                q.spread
            )));
        }
        prev = q.tenor;
    }

    let anchor = curve.anchor();
    let mut segments: Vec<(f64, f64)> = Vec::with_capacity(quotes.len());
    for q in quotes {
        let spread_with = |h: f64, segments: &mut Vec<(f64, f64)>| -> Result<f64> {
            segments.push((q.tenor, h));
            let hc = HazardCurve {
                anchor,
                ends: segments.iter().map(|s| s.0).collect(),
                hazards: segments.iter().map(|s| s.1).collect(),
                recovery,
            };
            segments.pop();
            par_cds_spread(&hc, q.tenor, curve)
        };
        let floor = spread_with(0.0, &mut segments)?;
        let gap = q.spread - floor;
        if gap < 0.0 {
            if gap > -1e-14 {
                segments.push((q.tenor, 0.0));
                continue;
            }
            return Err(Error::NegativeHazard { tenor: q.tenor });
        }
        if gap == 0.0 {
            segments.push((q.tenor, 0.0));
            continue;
        }
        let mut hi = (2.0 * q.spread / (1.0 - recovery)).max(1e-4);
        while spread_with(hi, &mut segments)? < q.spread {
            hi *= 2.0;
            if hi > 100.0 {
                return Err(Error::NotBracketed { lo: 0.0, hi });
            }
        }
        let mut failure = None;
        let h = brent(
            |h| match spread_with(h, &mut segments) {
                Ok(s) => s - q.spread,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            0.0,
            hi,
            1e-16,
            1e-16,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        segments.push((q.tenor, h));
    }
    HazardCurve::new(anchor, &segments, recovery)
}
