use alloc::format;

use crate::curve::{fixed_annuity, float_leg_pv, ZeroCurve};
use crate::lattice::RateLattice;
use crate::math::{abs, brent};
use crate::{Error, Result};

use super::engine::{backward_induction, GridCashflows};
use super::grid::{PaymentGrid, PeriodCredit};
use super::netting::NettingSet;
use super::trade::{Product, Trade};

const FIRST_BRACKET: f64 = 0.01;
const WIDE_BRACKET: f64 = 0.10;

/// Risk-free par rate of a swap trade's schedules on the curve.
pub fn generic_par_rate(template: &Trade, curve: &ZeroCurve) -> Result<f64> {
    let Product::Swap { fixed, float, .. } = &template.product else {
        return Err(Error::InvalidInput(format!(
            "trade {} is not a swap",
            template.id
        )));
    };
    let annuity = fixed_annuity(curve, &fixed.schedule, fixed.day_count)?;
    if annuity == 0.0 {
        return Err(Error::ZeroAnnuity);
    }
    Ok(float_leg_pv(curve, &float.schedule, float.day_count)? / annuity)
}

/// Fixed rate at which adding `template` to `context` leaves its collateralized
/// value unchanged. With an empty context this is the rate making the swap's
/// own collateralized value zero.
pub fn solve_collateralized_par_rate(
    template: &Trade,
    context: &NettingSet,
    lattice: &RateLattice,
    curve: &ZeroCurve,
) -> Result<f64> {
    let Product::Swap {
        side,
        fixed,
        float,
        float_spread,
        ..
    } = &template.product
    else {
        return Err(Error::InvalidInput(format!(
            "trade {} is not a swap",
            template.id
        )));
    };
    template.validate()?;
    let anchor = lattice.anchor();
    let mut set = context.clone();
    set.trades.push(template.clone());
    let grid = PaymentGrid::new(lattice, &set.grid_dates(anchor))?;
    let credit = PeriodCredit::schedule(&set.hazard, &grid)?;
    let threshold = set.threshold();

    let with_rate = |rate: f64| Trade {
        product: Product::Swap {
            side: *side,
            fixed_rate: rate,
            fixed: fixed.clone(),
            float: float.clone(),
            float_spread: *float_spread,
        },
        ..template.clone()
    };
    let base = GridCashflows::project(&context.trades, lattice, &grid)?;
    let at_zero = GridCashflows::project(&[with_rate(0.0)], lattice, &grid)?;
    let mut unit = GridCashflows::project(&[with_rate(1.0)], lattice, &grid)?;
    unit.add_scaled(&at_zero, -1.0);
    let context_value = if context.trades.is_empty() {
        0.0
    } else {
        backward_induction(lattice, &grid, &base, &credit, threshold)?.value
    };

    let failure = core::cell::RefCell::new(None);
    let mut objective = |rate: f64| {
        let mut flows = base.clone();
        flows.add_scaled(&at_zero, 1.0);
        flows.add_scaled(&unit, rate);
        match backward_induction(lattice, &grid, &flows, &credit, threshold) {
            Ok(ind) => ind.value - context_value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };

    let guess = generic_par_rate(template, curve)?;
    let tol = template.notional * 1e-10;
    let mut root = Err(Error::NotBracketed {
        lo: guess - FIRST_BRACKET,
        hi: guess + FIRST_BRACKET,
    });
    for width in [FIRST_BRACKET, WIDE_BRACKET] {
        root = brent(
            &mut objective,
            guess - width,
            guess + width,
            1e-16,
            0.1 * tol,
        );
        if !matches!(root, Err(Error::NotBracketed { .. })) {
            break;
        }
    }
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let rate = root?;
    if abs(objective(rate)) >= tol {
        return Err(Error::NoConvergence { iterations: 0 });
    }
    Ok(rate)
}
