mod common;

use common::*;
use csa_core::curve::ZeroCurve;
use csa_core::dates::{year_fraction, DayCount};
use csa_core::lattice::LatticeConfig;
use csa_core::pricing::{price_collateralized, NettingSet, Position, Product, SwapSide, Trade};
use csa_core::risk::{cva, threshold_sweep};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use time::macros::date;

const SWEEP: [f64; 6] = [0.0, 2.1e6, 4.1e6, 6.1e6, 8.1e6, f64::INFINITY];

fn sloped_curve() -> ZeroCurve {
    ZeroCurve::from_pillars(
        ANCHOR,
        &[
            (date!(2006 - 09 - 15), (-0.035f64).exp()),
            (date!(2010 - 09 - 15), (-0.041f64 * 5.0).exp()),
            (date!(2015 - 09 - 15), (-0.046f64 * 10.0).exp()),
        ],
    )
    .unwrap()
}

#[test]
fn full_collateral_equals_risk_free() {
    let curve = sloped_curve();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let set = random_set(&mut rng, &curve, 4).with_threshold(0.0);
        let lattice = set.build_lattice(&curve, LatticeConfig::default()).unwrap();
        let r = price_collateralized(&set, &lattice, &curve).unwrap();
        assert!(
            (r.v_csa - r.v_free).abs() < 1e-9 * set.notional(),
            "{} vs {}",
            r.v_csa,
            r.v_free
        );
    }
}

fn bought_options(seed: u64) -> NettingSet {
    let curve = sloped_curve();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = random_set(&mut rng, &curve, 5);
    for t in &mut set.trades {
        if let Product::Swap { side, .. } = &mut t.product {
            // pay fixed well below the forwards
            *side = SwapSide::PayFixed;
            if let Product::Swap { fixed_rate, .. } = &mut t.product {
                *fixed_rate = 0.01;
            }
        }
        t.position = Position::Long;
    }
    set
}

#[test]
fn collateral_sits_between_risky_and_risk_free() {
    let curve = sloped_curve();
    for seed in 0..20 {
        let set = bought_options(seed);
        let lattice = set.build_lattice(&curve, LatticeConfig::default()).unwrap();
        for h in [0.0, 1e5, 1e6, f64::INFINITY] {
            let r = price_collateralized(&set.with_threshold(h), &lattice, &curve).unwrap();
            let tol = 1e-9 * set.notional();
            assert!(
                r.v_risky <= r.v_csa + tol && r.v_csa <= r.v_free + tol,
                "{r:?}"
            );
        }
    }
}

#[test]
fn cva_sweep_is_monotone() {
    let curve = sloped_curve();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let set = random_set(&mut rng, &curve, 5);
        let lattice = set.build_lattice(&curve, LatticeConfig::default()).unwrap();
        let sweep = threshold_sweep(&set, &lattice, &SWEEP).unwrap();
        let full = cva(&set, &lattice, &curve).unwrap();
        let tol = 1e-9 * set.notional();
        assert!(sweep[0].cva.abs() < tol);
        assert!((sweep[5].cva - full.cva_uncollateralized).abs() < tol);
        for w in sweep.windows(2) {
            assert!(w[1].cva >= w[0].cva - tol);
        }
    }
}

#[test]
fn lattice_swap_value_matches_curve() {
    let curve = market_curve();
    let trade = swap(
        "s",
        SwapSide::PayFixed,
        0.045,
        1e7,
        ANCHOR,
        date!(2012 - 09 - 17),
    );
    let Product::Swap { fixed, float, .. } = &trade.product else {
        unreachable!()
    };
    let annuity: f64 = fixed
        .schedule
        .periods
        .iter()
        .map(|p| {
            year_fraction(p.accrual_start, p.accrual_end, DayCount::Thirty360).unwrap()
                * curve.df(p.pay_date).unwrap()
        })
        .sum();
    let first = float.schedule.periods.first().unwrap().accrual_start;
    let last = float.schedule.periods.last().unwrap().pay_date;
    let expected = 1e7 * (curve.df(first).unwrap() - curve.df(last).unwrap() - 0.045 * annuity);
    for sigma in [0.0, 0.01, 0.02] {
        let set = NettingSet {
            trades: vec![trade.clone()],
            ..empty_set("X", hazard_x(&curve), None)
        };
        let cfg = LatticeConfig {
            sigma,
            ..LatticeConfig::default()
        };
        let lattice = set.build_lattice(&curve, cfg).unwrap();
        let r = price_collateralized(&set, &lattice, &curve).unwrap();
        assert!(
            (r.v_free - expected).abs() < 1e-6,
            "{} vs {expected}",
            r.v_free
        );
    }
}

#[test]
fn empty_set_is_worth_nothing() {
    let curve = market_curve();
    let set = empty_set("X", hazard_x(&curve), Some(csa_0_500k()));
    let lattice = set.build_lattice(&curve, LatticeConfig::default()).unwrap();
    let r = price_collateralized(&set, &lattice, &curve).unwrap();
    assert_eq!((r.v_free, r.v_risky, r.v_csa), (0.0, 0.0, 0.0));
}

#[test]
fn fixed_coupon_amount() {
    let t: Trade = twenty_year_receiver(0.049042);
    let Product::Swap {
        fixed, fixed_rate, ..
    } = &t.product
    else {
        unreachable!()
    };
    let p = &fixed.schedule.periods[0];
    let tau = year_fraction(p.accrual_start, p.accrual_end, fixed.day_count).unwrap();
    assert!((fixed_rate * tau * t.notional - 613_025.0).abs() < 1e-6);
}
