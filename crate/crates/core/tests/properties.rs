use csa_core::analysis::{ols, premium_spread};
use csa_core::csa::{default_payment, CsaTerms};
use csa_core::risk::historical_var;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn default_payment_dominates_recovery(x in -1e9..1e9f64, c in 0.0..1e9f64, phi in 0.0..0.999f64) {
        let pay = default_payment(x, c, phi);
        prop_assert!(pay >= phi * x - 1e-6 * (1.0 + x.abs()));
        if c == 0.0 {
            prop_assert_eq!(pay, phi * x);
        } else if phi < 1.0 {
            prop_assert!(pay > phi * x);
        }
    }
}

proptest! {
    #[test]
    fn effective_threshold_adds_mta(h in -1e7..1e7f64, mta in 0.0..1e6f64, ia in 0.0..1e6f64) {
        let t = CsaTerms::new(h, mta, ia).unwrap();
        prop_assert!((t.effective_threshold() - (h + mta - ia)).abs() < 1e-6);
    }

    #[test]
    fn ols_is_affine_equivariant(
        pts in prop::collection::vec((-100.0..100.0f64, -100.0..100.0f64), 5..40),
        c in prop_oneof![0.1..10.0f64, -10.0..-0.1f64],
        shift in -50.0..50.0f64,
    ) {
        let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let base = ols(&x, &y);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        prop_assume!(base.r_squared > 1e-6);
        let scaled: Vec<f64> = x.iter().map(|v| v * c).collect();
        let shifted: Vec<f64> = y.iter().map(|v| v + shift).collect();
        let s = ols(&scaled, &y).unwrap();
        let t = ols(&x, &shifted).unwrap();
        prop_assert!((s.slope - base.slope / c).abs() < 1e-9 * (1.0 + base.slope.abs() / c.abs()));
        prop_assert!((t.slope - base.slope).abs() < 1e-9 * (1.0 + base.slope.abs()));
        prop_assert!((t.intercept - base.intercept - shift).abs() < 1e-8);
        prop_assert!((s.r_squared - base.r_squared).abs() < 1e-9);
        prop_assert!((t.r_squared - base.r_squared).abs() < 1e-9);
        prop_assert!(base.adjusted_r_squared <= base.r_squared && base.r_squared <= 1.0);
        let resid: f64 = base.residuals.iter().sum();
        prop_assert!(resid.abs() < 1e-8);
    }

    #[test]
    fn var_is_translation_equivariant(
        pnl in prop::collection::vec(-1e6..1e6f64, 1..300),
        shift in -1e5..1e5f64,
        conf in 0.51..0.999f64,
    ) {
        let a = historical_var(&pnl, conf).unwrap();
        let moved: Vec<f64> = pnl.iter().map(|v| v + shift).collect();
        let b = historical_var(&moved, conf).unwrap();
        prop_assert_eq!(a.rank, b.rank);
        prop_assert!((b.var - a.var - shift).abs() < 1e-6);
    }

    #[test]
    fn var_rank_follows_the_quantile(n in 1usize..2000, conf in 0.51..0.999f64) {
        let pnl: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let v = historical_var(&pnl, conf).unwrap();
        let k = (((1.0 - conf) * n as f64) - 1e-9).ceil().max(1.0) as usize;
        prop_assert_eq!(v.rank, k.min(n));
        prop_assert_eq!(v.var, (v.rank - 1) as f64);
    }

    #[test]
    fn premium_spread_is_antisymmetric(a in 0.0..0.1f64, b in 0.0..0.1f64, g in 0.0..0.1f64) {
        let s = premium_spread(a, b, g);
        let r = premium_spread(b, a, g);
        prop_assert_eq!(s.spread_bp, -r.spread_bp);
        prop_assert!((s.spread_bp - (s.premium_b_bp - s.premium_a_bp)).abs() < 1e-9);
    }
}
