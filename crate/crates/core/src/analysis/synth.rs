use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ols::{ols, RegressionResult};
use super::spread::premium_spread;
use crate::credit::{bootstrap_hazards, CdsQuote};
use crate::csa::CsaTerms;
use crate::curve::{SwapConvention, ZeroCurve};
use crate::dates::{add_months, WeekendCalendar};
use crate::lattice::LatticeConfig;
use crate::math::{exp, log};
use crate::pricing::{
    generic_par_rate, solve_collateralized_par_rate, Leg, NettingSet, Position, Product, SwapSide,
    Trade,
};
use crate::{Error, Result};

/// CDS tenors used for synthetic counterparties.
pub const CDS_TENORS: [f64; 11] = [0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 7.0, 10.0, 15.0, 20.0, 30.0];
/// Term-structure shape relative to the 5y spread.
const CDS_SHAPE: [f64; 11] = [
    0.24, 0.30, 0.45, 0.62, 0.80, 1.0, 1.25, 1.54, 1.69, 1.76, 1.88,
];

#[derive(Debug, Clone, PartialEq)]
pub struct PairCounterparty {
    pub name: String,
    pub recovery: f64,
    pub cds_quotes: Vec<CdsQuote>,
    pub csa: CsaTerms,
}

impl PairCounterparty {
    /// CDS spread at `tenor`, linear between quotes and flat outside, in bp.
    pub fn cds_bp(&self, tenor: f64) -> f64 {
        let q = &self.cds_quotes;
        let Some(first) = q.first() else { return 0.0 };
        if tenor <= first.tenor {
            return first.spread * 1e4;
        }
        for w in q.windows(2) {
            if tenor <= w[1].tenor {
                let u = (tenor - w[0].tenor) / (w[1].tenor - w[0].tenor);
                return (w[0].spread + u * (w[1].spread - w[0].spread)) * 1e4;
            }
        }
        q[q.len() - 1].spread * 1e4
    }
}

/// Two swaps with identical terms traded with different counterparties.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapPair {
    pub id: usize,
    pub tenor_years: i32,
    pub notional: f64,
    pub side: SwapSide,
    pub a: PairCounterparty,
    pub b: PairCounterparty,
    /// Collateralized par rates (A, B).
    pub model_rates: Option<(f64, f64)>,
    /// Quoted rates (A, B).
    pub market_rates: Option<(f64, f64)>,
    /// Quote noise added to each model rate, in bp.
    pub quote_noise_bp: (f64, f64),
}

impl SwapPair {
    /// CDS spread difference B − A at the swap tenor, in bp.
    pub fn cds_difference_bp(&self) -> f64 {
        let t = self.tenor_years as f64;
        self.b.cds_bp(t) - self.a.cds_bp(t)
    }

    /// Premium spread B − A in bp, signed so that a positive value means B is
    /// charged more. For a bank paying fixed that is a lower rate.
    pub fn model_spread_bp(&self) -> Option<f64> {
        self.model_rates
            .map(|(a, b)| self.side.fixed_sign() * premium_spread(a, b, 0.0).spread_bp)
    }

    pub fn market_spread_bp(&self) -> Option<f64> {
        self.market_rates
            .map(|(a, b)| self.side.fixed_sign() * premium_spread(a, b, 0.0).spread_bp)
    }

    /// The swap traded with each counterparty, starting at `effective`.
    pub fn trade(&self, effective: time::Date) -> Result<Trade> {
        let maturity = add_months(effective, 12 * self.tenor_years)?;
        let conv = SwapConvention::default();
        let (fixed, float) = conv.schedules(effective, maturity, &WeekendCalendar)?;
        Ok(Trade {
            id: format!("pair-{}", self.id),
            notional: self.notional,
            position: Position::Long,
            product: Product::Swap {
                side: self.side,
                fixed_rate: 0.0,
                fixed: Leg {
                    schedule: fixed,
                    day_count: conv.fixed_day_count,
                },
                float: Leg {
                    schedule: float,
                    day_count: conv.float_day_count,
                },
                float_spread: 0.0,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub tenors_years: Vec<i32>,
    pub notional: f64,
    /// Range of 5y CDS spreads, decimal; drawn log-uniformly.
    pub cds_5y_range: (f64, f64),
    pub recovery_range: (f64, f64),
    pub thresholds: Vec<f64>,
    pub mtas: Vec<f64>,
    /// Common dealer margin over the model rate, bp.
    pub dealer_margin_bp: f64,
    /// Half-width of uniform quote noise, bp.
    pub noise_bp: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            tenors_years: alloc::vec![5, 10, 20],
            notional: 25_000_000.0,
            cds_5y_range: (0.0010, 0.0300),
            recovery_range: (0.30, 0.45),
            thresholds: alloc::vec![0.0, 250_000.0, 1_000_000.0, 5_000_000.0],
            mtas: alloc::vec![0.0, 100_000.0, 500_000.0],
            dealer_margin_bp: 2.5,
            noise_bp: 0.05,
        }
    }
}

impl SynthParams {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.cds_5y_range;
        let (rlo, rhi) = self.recovery_range;
        if self.tenors_years.is_empty() || self.thresholds.is_empty() || self.mtas.is_empty() {
            return Err(Error::InvalidInput(
                "synthetic parameters need tenors, thresholds and MTAs".into(),
            ));
        }
        if !(lo > 0.0 && lo <= hi) || !(0.0 <= rlo && rlo <= rhi && rhi < 1.0) {
            return Err(Error::InvalidInput(
                "synthetic CDS or recovery range is invalid".into(),
            ));
        }
        if self.tenors_years.iter().any(|&t| t <= 0)
            || !(self.notional > 0.0)
            || self.noise_bp < 0.0
        {
            return Err(Error::InvalidInput(
                "synthetic tenor, notional or noise is invalid".into(),
            ));
        }
        Ok(())
    }
}

fn draw_counterparty(
    rng: &mut ChaCha8Rng,
    name: String,
    p: &SynthParams,
) -> Result<PairCounterparty> {
    let (lo, hi) = p.cds_5y_range;
    let level = exp(rng.gen_range(log(lo)..=log(hi)));
    let recovery = rng.gen_range(p.recovery_range.0..=p.recovery_range.1);
    // wide curves flatten so every tenor stays attainable with a positive hazard
    let steepness = (1.0 - level / 0.04).clamp(0.25, 1.0);
    let threshold = *p.thresholds.choose(rng).unwrap_or(&0.0);
    let mta = *p.mtas.choose(rng).unwrap_or(&0.0);
    Ok(PairCounterparty {
        name,
        recovery,
        cds_quotes: CDS_TENORS
            .iter()
            .zip(CDS_SHAPE)
            .map(|(&t, s)| CdsQuote::new(t, level * (1.0 + (s - 1.0) * steepness)))
            .collect(),
        csa: CsaTerms::new(threshold, mta, 0.0)?,
    })
}

/// Seeded synthetic swap pairs; rates are filled in by [`price_pairs`].
pub fn synth_pair_dataset(n: usize, seed: u64, params: &SynthParams) -> Result<Vec<SwapPair>> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one pair".into()));
    }
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|id| {
            let tenor_years = *params.tenors_years.choose(&mut rng).unwrap_or(&10);
            let side = if rng.gen_bool(0.5) {
                SwapSide::ReceiveFixed
            } else {
                SwapSide::PayFixed
            };
            let a = draw_counterparty(&mut rng, format!("CP{:04}A", id), params)?;
            let b = draw_counterparty(&mut rng, format!("CP{:04}B", id), params)?;
            let w = params.noise_bp;
            let quote_noise_bp = if w > 0.0 {
                (rng.gen_range(-w..=w), rng.gen_range(-w..=w))
            } else {
                (0.0, 0.0)
            };
            Ok(SwapPair {
                id,
                tenor_years,
                notional: params.notional,
                side,
                a,
                b,
                model_rates: None,
                market_rates: None,
                quote_noise_bp,
            })
        })
        .collect()
}

/// Collateralized par rates of both swaps of a pair, plus the generic rate.
pub fn price_pair(
    pair: &SwapPair,
    curve: &ZeroCurve,
    cfg: LatticeConfig,
) -> Result<(f64, f64, f64)> {
    let template = pair.trade(curve.anchor())?;
    let generic = generic_par_rate(&template, curve)?;
    let solve = |cp: &PairCounterparty, lattice: &crate::lattice::RateLattice| -> Result<f64> {
        let set = NettingSet {
            counterparty: cp.name.clone(),
            hazard: bootstrap_hazards(&cp.cds_quotes, cp.recovery, curve)?,
            csa: Some(cp.csa),
            trades: Vec::new(),
        };
        solve_collateralized_par_rate(&template, &set, lattice, curve)
    };
    let probe = NettingSet {
        counterparty: String::new(),
        hazard: crate::credit::HazardCurve::risk_free(curve.anchor()),
        csa: None,
        trades: alloc::vec![template.clone()],
    };
    let lattice = probe.build_lattice(curve, cfg)?;
    Ok((
        solve(&pair.a, &lattice)?,
        solve(&pair.b, &lattice)?,
        generic,
    ))
}

/// Fill model rates, and market rates as model + dealer margin ± noise.
pub fn apply_rates(pair: &mut SwapPair, model: (f64, f64), dealer_margin_bp: f64) {
    pair.model_rates = Some(model);
    let side = pair.side.fixed_sign();
    // the margin is charged to the client: a higher rate when the bank receives fixed
    let quote = |r: f64, noise: f64| r + side * dealer_margin_bp * 1e-4 + noise * 1e-4;
    pair.market_rates = Some((
        quote(model.0, pair.quote_noise_bp.0),
        quote(model.1, pair.quote_noise_bp.1),
    ));
}

pub fn price_pairs(
    pairs: &mut [SwapPair],
    curve: &ZeroCurve,
    cfg: LatticeConfig,
    params: &SynthParams,
) -> Result<()> {
    for pair in pairs.iter_mut() {
        let (a, b, _) = price_pair(pair, curve, cfg)?;
        apply_rates(pair, (a, b), params.dealer_margin_bp);
    }
    Ok(())
}

/// Regressions of the market spread on the CDS difference and on the model spread.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRegressions {
    pub on_cds: RegressionResult,
    pub on_model: RegressionResult,
}

pub fn regress_pairs(pairs: &[SwapPair]) -> Result<PairRegressions> {
    let mut cds = Vec::with_capacity(pairs.len());
    let mut model = Vec::with_capacity(pairs.len());
    let mut market = Vec::with_capacity(pairs.len());
    for p in pairs {
        let (Some(m), Some(q)) = (p.model_spread_bp(), p.market_spread_bp()) else {
            return Err(Error::InvalidInput(format!("pair {} has no rates", p.id)));
        };
        cds.push(p.cds_difference_bp());
        model.push(m);
        market.push(q);
    }
    Ok(PairRegressions {
        on_cds: ols(&cds, &market)?,
        on_model: ols(&model, &market)?,
    })
}
