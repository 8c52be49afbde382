use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use time::{Date, Duration, Weekday};

use super::scenarios::MarketHistory;
use crate::{Error, Result};

/// Volatilities, in bp per day, of a synthetic daily market history.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryParams {
    pub days: usize,
    pub curve_tenors: Vec<f64>,
    pub cds_tenors: Vec<f64>,
    /// Parallel move shared by every curve tenor.
    pub level_bp: f64,
    /// Slope move, scaled by tenor / longest tenor.
    pub slope_bp: f64,
    /// Independent noise per tenor.
    pub curve_noise_bp: f64,
    /// Parallel move of the CDS curve.
    pub cds_level_bp: f64,
    pub cds_noise_bp: f64,
    /// Loading of the CDS level move on the rate level move.
    pub cds_rate_beta: f64,
}

impl Default for HistoryParams {
    fn default() -> Self {
        Self {
            days: 500,
            curve_tenors: alloc::vec![0.25, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0],
            cds_tenors: alloc::vec![1.0, 5.0, 10.0, 30.0],
            level_bp: 5.0,
            slope_bp: 2.0,
            curve_noise_bp: 1.0,
            cds_level_bp: 4.0,
            cds_noise_bp: 0.5,
            cds_rate_beta: -2.0,
        }
    }
}

/// Seeded weekday history ending the business day before `end`.
pub fn synth_history(end: Date, seed: u64, params: &HistoryParams) -> Result<MarketHistory> {
    if params.days == 0 || params.curve_tenors.is_empty() || params.cds_tenors.is_empty() {
        return Err(Error::InvalidInput("history needs days and tenors".into()));
    }
    let vols = [
        params.level_bp,
        params.slope_bp,
        params.curve_noise_bp,
        params.cds_level_bp,
        params.cds_noise_bp,
    ];
    if vols.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidInput(
            "history volatilities must be finite and non-negative".into(),
        ));
    }
    let z = Normal::new(0.0, 1.0).map_err(|_| Error::InvalidInput("normal distribution".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dates = Vec::with_capacity(params.days);
    let mut d = end;
    while dates.len() < params.days {
        d -= Duration::days(1);
        if !matches!(d.weekday(), Weekday::Saturday | Weekday::Sunday) {
            dates.push(d);
        }
    }
    dates.reverse();
    let longest = params.curve_tenors.iter().copied().fold(0.0, f64::max);
    let mut curve_changes = Vec::with_capacity(params.days);
    let mut cds_changes = Vec::with_capacity(params.days);
    for _ in 0..params.days {
        let level = params.level_bp * z.sample(&mut rng);
        let slope = params.slope_bp * z.sample(&mut rng);
        curve_changes.push(
            params
                .curve_tenors
                .iter()
                .map(|t| level + slope * t / longest + params.curve_noise_bp * z.sample(&mut rng))
                .collect(),
        );
        let cds_level = params.cds_rate_beta * level + params.cds_level_bp * z.sample(&mut rng);
        cds_changes.push(
            params
                .cds_tenors
                .iter()
                .map(|_| cds_level + params.cds_noise_bp * z.sample(&mut rng))
                .collect(),
        );
    }
    Ok(MarketHistory {
        curve_tenors: params.curve_tenors.clone(),
        cds_tenors: params.cds_tenors.clone(),
        dates,
        curve_changes,
        cds_changes,
    })
}
