mod common;

use common::*;
use csa_core::lattice::LatticeConfig;
use csa_core::pricing::SwapSide;
use csa_core::risk::{
    historical_var, pnl_scenarios, synth_history, HistoryParams, ScenarioContext, ValuationMode,
};
use time::macros::date;

fn context() -> ScenarioContext {
    ScenarioContext {
        counterparty: "Y".into(),
        curve: market_curve(),
        cds_quotes: quotes(&CDS_Y),
        recovery: RECOVERY_Y,
        csa: Some(csa_0_500k()),
        trades: vec![
            swap(
                "a",
                SwapSide::PayFixed,
                0.010,
                2.0e7,
                ANCHOR,
                date!(2015 - 09 - 15),
            ),
            swap(
                "b",
                SwapSide::PayFixed,
                0.010,
                1.0e7,
                ANCHOR,
                date!(2012 - 09 - 17),
            ),
        ],
        lattice: LatticeConfig::default(),
    }
}

#[test]
fn var_pattern_across_thresholds() {
    let ctx = context();
    let params = HistoryParams {
        days: 260,
        ..HistoryParams::default()
    };
    let history = synth_history(ANCHOR, 42, &params).unwrap();
    let windows = history.windows(10).unwrap();
    assert_eq!(windows.len(), 251);
    let thresholds = [0.0, 2.1e6, 4.1e6, 6.1e6, 8.1e6, f64::INFINITY];
    let base = ctx.values(None, &thresholds).unwrap();
    let mut free = Vec::new();
    let mut by_h = vec![Vec::new(); thresholds.len()];
    for w in &windows {
        let v = ctx.values(Some(w), &thresholds).unwrap();
        free.push(v.v_free - base.v_free);
        for (i, x) in v.by_threshold.iter().enumerate() {
            by_h[i].push(x - base.by_threshold[i]);
        }
    }
    let losses: Vec<f64> = by_h
        .iter()
        .map(|p| historical_var(p, 0.99).unwrap().loss)
        .collect();
    let free_loss = historical_var(&free, 0.99).unwrap().loss;
    for w in losses.windows(2) {
        assert!(w[1] >= w[0] - 1e-6, "{losses:?} {free_loss}");
    }
    assert!(
        losses[5] >= free_loss - 1e-6,
        "{} vs {free_loss}",
        losses[5]
    );
}

#[test]
fn zero_shift_has_zero_pnl() {
    let ctx = context();
    let mut history = synth_history(
        ANCHOR,
        1,
        &HistoryParams {
            days: 12,
            ..HistoryParams::default()
        },
    )
    .unwrap();
    for row in history
        .curve_changes
        .iter_mut()
        .chain(history.cds_changes.iter_mut())
    {
        row.iter_mut().for_each(|x| *x = 0.0);
    }
    let shifts = history.windows(10).unwrap();
    for mode in [
        ValuationMode::RiskFree,
        ValuationMode::Risky,
        ValuationMode::Collateralized,
    ] {
        for s in pnl_scenarios(&ctx, &shifts, mode).unwrap() {
            assert_eq!(s.pnl, 0.0);
        }
    }
}

#[test]
fn history_is_seeded() {
    let p = HistoryParams::default();
    assert_eq!(
        synth_history(ANCHOR, 5, &p).unwrap(),
        synth_history(ANCHOR, 5, &p).unwrap()
    );
    assert_ne!(
        synth_history(ANCHOR, 5, &p).unwrap(),
        synth_history(ANCHOR, 6, &p).unwrap()
    );
    let short = synth_history(ANCHOR, 5, &HistoryParams { days: 5, ..p }).unwrap();
    assert!(short.windows(10).is_err());
}

#[test]
fn rising_rates_hurt_a_receiver() {
    let ctx = ScenarioContext {
        trades: vec![twenty_year_receiver(0.049)],
        ..context()
    };
    let up = csa_core::risk::MarketShift {
        start: ANCHOR,
        curve: csa_core::risk::KeyRateShift::new(vec![1.0], vec![1.0]).unwrap(),
        cds: csa_core::risk::KeyRateShift::zero(vec![1.0]),
    };
    let base = ctx.revalue(None, ValuationMode::RiskFree).unwrap();
    let shifted = ctx.revalue(Some(&up), ValuationMode::RiskFree).unwrap();
    // a +1bp parallel move costs roughly the DV01 of a 25m 20y swap
    let dv01 = shifted - base;
    assert!(dv01 < -25_000.0 && dv01 > -40_000.0, "{dv01}");
}
