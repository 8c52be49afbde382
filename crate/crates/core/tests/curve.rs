mod common;

use common::*;
use csa_core::curve::{bootstrap_curve, CurveInstrument, ZeroCurve};
use csa_core::dates::{time_between, WeekendCalendar};
use time::macros::date;

#[test]
fn every_instrument_reprices() {
    let curve = market_curve();
    for inst in instruments() {
        let implied = inst.implied_quote(&curve, &WeekendCalendar).unwrap();
        let err = match inst {
            // futures are quoted as prices; compare the implied rate
            CurveInstrument::Future { .. } => (implied - inst.quote()) / 100.0,
            _ => implied - inst.quote(),
        };
        assert!(err.abs() < 1e-8, "{}: {err:e}", inst.label());
    }
}

#[test]
fn twenty_year_par_rate() {
    let curve = market_curve();
    let rate = csa_core::pricing::generic_par_rate(&twenty_year_receiver(0.0), &curve).unwrap();
    assert!((rate - 0.048771).abs() < 1e-8, "{rate}");
}

#[test]
fn discount_factors_decrease() {
    let curve = market_curve();
    let pillars: Vec<(time::Date, f64)> = curve.pillars().collect();
    assert_eq!(pillars.len(), 20);
    for w in pillars.windows(2) {
        assert!(w[0].0 < w[1].0);
        assert!(w[1].1 < w[0].1);
        assert!(w[1].1 > 0.0);
    }
}

#[test]
fn interpolation_matches_log_linear_oracle() {
    let curve = market_curve();
    let pillars: Vec<(time::Date, f64)> = curve.pillars().collect();
    let anchor = curve.anchor();
    for w in pillars.windows(2) {
        let (d0, p0) = w[0];
        let (d1, p1) = w[1];
        let mid = d0 + (d1 - d0) / 2;
        let (t0, t1, t) = (
            time_between(anchor, d0),
            time_between(anchor, d1),
            time_between(anchor, mid),
        );
        let u = (t - t0) / (t1 - t0);
        let oracle = (p0.ln() * (1.0 - u) + p1.ln() * u).exp();
        assert!((curve.df(mid).unwrap() - oracle).abs() < 1e-14);
    }
}

#[test]
fn forward_discount_factor_is_a_ratio() {
    let curve = market_curve();
    let (t, s) = (date!(2008 - 03 - 17), date!(2016 - 06 - 15));
    let ratio = curve.df(s).unwrap() / curve.df(t).unwrap();
    assert!((curve.discount_factor(t, s).unwrap() - ratio).abs() < 1e-15);
    assert_eq!(curve.discount_factor(t, t).unwrap(), 1.0);
    assert!(curve.discount_factor(s, t).is_err());
}

#[test]
fn flat_extrapolation_keeps_last_forward() {
    let curve = ZeroCurve::from_pillars(
        ANCHOR,
        &[(date!(2006 - 09 - 15), 0.96), (date!(2007 - 09 - 15), 0.92)],
    )
    .unwrap();
    let f = |a: time::Date, b: time::Date| {
        -(curve.df(b).unwrap() / curve.df(a).unwrap()).ln() / time_between(a, b)
    };
    let last = f(date!(2006 - 09 - 15), date!(2007 - 09 - 15));
    assert!((f(date!(2007 - 09 - 15), date!(2012 - 09 - 15)) - last).abs() < 1e-12);
}

#[test]
fn bootstrap_errors() {
    assert!(bootstrap_curve(ANCHOR, &[]).is_err());
    let mut rev = instruments();
    rev.swap(8, 9);
    assert!(bootstrap_curve(ANCHOR, &rev).is_err());
}
