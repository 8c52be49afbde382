#![allow(dead_code)]

use csa_core::credit::{bootstrap_hazards, CdsQuote, HazardCurve};
use csa_core::csa::CsaTerms;
use csa_core::curve::{bootstrap_curve, CurveInstrument, Maturity, SwapConvention, ZeroCurve};
use csa_core::dates::WeekendCalendar;
use csa_core::pricing::{Leg, NettingSet, Position, Product, SwapSide, Trade};
use time::macros::date;
use time::{Date, Month};

pub const ANCHOR: Date = date!(2005 - 09 - 15);
pub const CDS_TENORS: [f64; 11] = [0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 7.0, 10.0, 15.0, 20.0, 30.0];
pub const CDS_X: [f64; 11] = [
    0.000489, 0.00056, 0.000866, 0.001147, 0.00147, 0.001783, 0.002289, 0.002952, 0.003283,
    0.003266, 0.00336,
];
pub const CDS_Y: [f64; 11] = [
    0.000808, 0.001017, 0.00154, 0.002114, 0.002768, 0.003439, 0.004283, 0.005281, 0.005814,
    0.006064, 0.006461,
];
pub const RECOVERY_X: f64 = 0.35847;
pub const RECOVERY_Y: f64 = 0.33872;

pub fn instruments() -> Vec<CurveInstrument> {
    let mut out = vec![CurveInstrument::Deposit {
        label: "LIBOR 2005-09-21".into(),
        maturity: Maturity::Date(date!(2005 - 09 - 21)),
        rate: 0.036067,
    }];
    let futures = [
        (2005, Month::September, 96.1050),
        (2005, Month::December, 95.9100),
        (2006, Month::March, 95.8100),
        (2006, Month::June, 95.7500),
        (2006, Month::September, 95.7150),
        (2006, Month::December, 95.6800),
    ];
    for (y, m, p) in futures {
        out.push(CurveInstrument::imm_future(format!("ED {m} {y}"), y, m, p).unwrap());
    }
    let swaps = [
        (2, 4.2778),
        (3, 4.3327),
        (4, 4.3770),
        (5, 4.4213),
        (6, 4.4679),
        (7, 4.5120),
        (8, 4.5561),
        (9, 4.5952),
        (10, 4.6368),
        (12, 4.7089),
        (15, 4.7957),
        (20, 4.8771),
        (25, 4.9135),
    ];
    for (years, pct) in swaps {
        out.push(CurveInstrument::Swap {
            label: format!("{years}Y swap"),
            maturity: Maturity::Months(12 * years),
            rate: pct / 100.0,
            convention: SwapConvention::default(),
        });
    }
    out
}

pub fn market_curve() -> ZeroCurve {
    bootstrap_curve(ANCHOR, &instruments()).unwrap()
}

pub fn quotes(spreads: &[f64]) -> Vec<CdsQuote> {
    CDS_TENORS
        .iter()
        .zip(spreads)
        .map(|(&t, &s)| CdsQuote::new(t, s))
        .collect()
}

pub fn hazard_x(curve: &ZeroCurve) -> HazardCurve {
    bootstrap_hazards(&quotes(&CDS_X), RECOVERY_X, curve).unwrap()
}

pub fn hazard_y(curve: &ZeroCurve) -> HazardCurve {
    bootstrap_hazards(&quotes(&CDS_Y), RECOVERY_Y, curve).unwrap()
}

pub fn swap(
    id: &str,
    side: SwapSide,
    rate: f64,
    notional: f64,
    effective: Date,
    maturity: Date,
) -> Trade {
    let conv = SwapConvention::default();
    let (fixed, float) = conv
        .schedules(effective, maturity, &WeekendCalendar)
        .unwrap();
    Trade {
        id: id.into(),
        notional,
        position: Position::Long,
        product: Product::Swap {
            side,
            fixed_rate: rate,
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
    }
}

/// The 20y receive-fixed swap against a counterparty with the (0, 500000) CSA.
pub fn twenty_year_receiver(rate: f64) -> Trade {
    swap(
        "20y",
        SwapSide::ReceiveFixed,
        rate,
        25_000_000.0,
        ANCHOR,
        date!(2025 - 09 - 15),
    )
}

pub fn csa_0_500k() -> CsaTerms {
    CsaTerms::new(0.0, 500_000.0, 0.0).unwrap()
}

pub fn empty_set(name: &str, hazard: HazardCurve, csa: Option<CsaTerms>) -> NettingSet {
    NettingSet {
        counterparty: name.into(),
        hazard,
        csa,
        trades: Vec::new(),
    }
}

/// A small random netting set: swaps both ways, bought or sold caps and floors, swaptions.
pub fn random_set(rng: &mut impl rand::Rng, curve: &ZeroCurve, max_trades: usize) -> NettingSet {
    use csa_core::dates::add_months;
    let anchor = curve.anchor();
    let n = rng.gen_range(1..=max_trades);
    let mut trades = Vec::with_capacity(n);
    let conv = SwapConvention::default();
    for i in 0..n {
        let notional = rng.gen_range(1.0e6..1.0e7);
        let years = rng.gen_range(1..=5);
        let start = add_months(anchor, 3 * rng.gen_range(0..=4)).unwrap();
        let end = add_months(start, 12 * years).unwrap();
        let (fixed, float) = conv.schedules(start, end, &WeekendCalendar).unwrap();
        let fixed = Leg {
            schedule: fixed,
            day_count: conv.fixed_day_count,
        };
        let float = Leg {
            schedule: float,
            day_count: conv.float_day_count,
        };
        let side = if rng.gen_bool(0.5) {
            SwapSide::PayFixed
        } else {
            SwapSide::ReceiveFixed
        };
        let position = if rng.gen_bool(0.5) {
            Position::Long
        } else {
            Position::Short
        };
        let strike = rng.gen_range(0.02..0.07);
        let product = match rng.gen_range(0..4) {
            0 => Product::Swap {
                side,
                fixed_rate: strike,
                fixed,
                float,
                float_spread: 0.0,
            },
            1 => Product::Cap { strike, leg: float },
            2 => Product::Floor { strike, leg: float },
            _ => {
                let expiry = add_months(anchor, 6 * rng.gen_range(1..=3)).unwrap();
                let (fixed_s, float_s) = conv
                    .schedules(
                        expiry,
                        add_months(expiry, 12 * years).unwrap(),
                        &WeekendCalendar,
                    )
                    .unwrap();
                Product::Swaption {
                    side,
                    strike,
                    expiry: csa_core::dates::Calendar::adjust(&WeekendCalendar, expiry, conv.roll),
                    fixed: Leg {
                        schedule: fixed_s,
                        day_count: conv.fixed_day_count,
                    },
                    float: Leg {
                        schedule: float_s,
                        day_count: conv.float_day_count,
                    },
                }
            }
        };
        let position = if matches!(product, Product::Swap { .. }) {
            Position::Long
        } else {
            position
        };
        trades.push(Trade {
            id: format!("t{i}"),
            notional,
            position,
            product,
        });
    }
    let hazard = HazardCurve::new(
        anchor,
        &[
            (1.0, rng.gen_range(0.001..0.05)),
            (3.0, rng.gen_range(0.001..0.08)),
            (10.0, rng.gen_range(0.001..0.1)),
        ],
        rng.gen_range(0.0..0.8),
    )
    .unwrap();
    NettingSet {
        counterparty: "toy".into(),
        hazard,
        csa: None,
        trades,
    }
}
