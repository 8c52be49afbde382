use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::csa::collateral_amount;
use crate::lattice::RateLattice;
use crate::{Error, Result};

use super::grid::{PaymentGrid, PeriodCredit};
use super::single::{collateralize, exposure_ratio};
use super::trade::{end_amounts, start_amount, PeriodState, Trade};

/// Node-level cashflows of a netting set laid out on a payment grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCashflows {
    /// `[j][n]`: paid at T_{j+1}, fixed at node `n` of the T_j slice.
    pub at_start: Vec<Vec<f64>>,
    /// `[i][n]`: paid at T_i, fixed at node `n` of the T_i slice. Row 0 is unused.
    pub at_end: Vec<Vec<f64>>,
}

impl GridCashflows {
    pub fn zeros(lattice: &RateLattice, grid: &PaymentGrid) -> Self {
        let width = |k: usize| lattice.slice(k).nodes.len();
        let slices = grid.slices();
        Self {
            at_start: slices[..grid.len()]
                .iter()
                .map(|&k| vec![0.0; width(k)])
                .collect(),
            at_end: slices.iter().map(|&k| vec![0.0; width(k)]).collect(),
        }
    }

    /// Project every trade's cashflows onto the grid.
    pub fn project(trades: &[Trade], lattice: &RateLattice, grid: &PaymentGrid) -> Result<Self> {
        let mut flows = Self::zeros(lattice, grid);
        for t in trades {
            t.validate()?;
            for d in t.grid_dates(lattice.anchor()) {
                if !grid.dates().contains(&d) {
                    return Err(Error::Misaligned(d));
                }
            }
        }
        for period in grid.periods() {
            let zero_bond = lattice.zero_bond(period.start_slice, period.end_slice);
            let state = PeriodState {
                period,
                zero_bond: &zero_bond,
            };
            let row = &mut flows.at_start[period.index];
            for t in trades {
                for (n, cell) in row.iter_mut().enumerate() {
                    *cell += start_amount(t, &state, n)?;
                }
                if let Some(values) = end_amounts(t, lattice, period)? {
                    for (cell, v) in flows.at_end[period.index + 1].iter_mut().zip(values) {
                        *cell += v;
                    }
                }
            }
        }
        Ok(flows)
    }

    /// self + scale · other, cell by cell.
    pub fn add_scaled(&mut self, other: &GridCashflows, scale: f64) {
        let rows = self
            .at_start
            .iter_mut()
            .zip(&other.at_start)
            .chain(self.at_end.iter_mut().zip(&other.at_end));
        for (a, b) in rows {
            for (x, y) in a.iter_mut().zip(b) {
                *x += scale * y;
            }
        }
    }

    fn check_shape(&self, lattice: &RateLattice, grid: &PaymentGrid) -> Result<()> {
        let width = |k: usize| lattice.slice(k).nodes.len();
        let slices = grid.slices();
        let ok = self.at_start.len() == grid.len()
            && self.at_end.len() == grid.len() + 1
            && self
                .at_start
                .iter()
                .zip(slices)
                .all(|(r, &k)| r.len() == width(k))
            && self
                .at_end
                .iter()
                .zip(slices)
                .all(|(r, &k)| r.len() == width(k));
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "cashflow layout does not match the payment grid".into(),
            ))
        }
    }
}

/// Per credit period summary of the induction, weighted by risk-neutral node probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceDiagnostics {
    /// T_j in years.
    pub time: f64,
    /// E[J(T_j, T_{j+1})].
    pub expected_continuation: f64,
    /// E[V^C(T_j)].
    pub expected_value: f64,
    /// E[max(V^C(T_j) − H, 0)].
    pub expected_collateral: f64,
    /// Probability that the continuation value exceeds the threshold.
    pub collateralized_share: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Induction {
    pub value: f64,
    /// Node values V^C(T_m) + X_m on the final payment slice.
    pub terminal: Vec<f64>,
    /// One entry per credit period, earliest first.
    pub diagnostics: Vec<SliceDiagnostics>,
}

/// Collateral-adjusted backward induction over the grid.
///
/// At each node of T_j the risk-free continuation `R = E[D·(V^C(T_{j+1}) + X_{j+1})]`
/// becomes `J = I·R`; the node then carries `J` when `J <= H` and
/// `J/I − H·q·(1−φ)/I` otherwise. Pass `f64::INFINITY` for an uncollateralized
/// value and [`PeriodCredit::RISK_FREE`] factors for the risk-free value.
pub fn backward_induction(
    lattice: &RateLattice,
    grid: &PaymentGrid,
    flows: &GridCashflows,
    credit: &[PeriodCredit],
    threshold: f64,
) -> Result<Induction> {
    flows.check_shape(lattice, grid)?;
    if credit.len() != grid.len() {
        return Err(Error::InvalidInput(format!(
            "{} credit periods for {} payment periods",
            credit.len(),
            grid.len()
        )));
    }
    if threshold.is_nan() {
        return Err(Error::InvalidInput("threshold is NaN".into()));
    }
    let m = grid.len();
    let slices = grid.slices();
    let reach = lattice.reach_probabilities();

    let terminal = flows.at_end[m].clone();
    let mut next = terminal.clone();
    let mut diagnostics = Vec::with_capacity(m);
    for j in (0..m).rev() {
        let (k0, k1) = (slices[j], slices[j + 1]);
        let c = credit[j];
        let ratio = c.ratio();
        if ratio <= 0.0 {
            return Err(Error::DegenerateRatio);
        }
        let rolled = lattice.roll_back(k0, k1, &next);
        let bond = lattice.zero_bond(k0, k1);
        let mut diag = SliceDiagnostics {
            time: grid.times()[j],
            expected_continuation: 0.0,
            expected_value: 0.0,
            expected_collateral: 0.0,
            collateralized_share: 0.0,
        };
        let mut values = Vec::with_capacity(rolled.len());
        for n in 0..rolled.len() {
            let risk_free = rolled[n] + flows.at_start[j][n] * bond[n];
            let risky = exposure_ratio(risk_free, ratio) * risk_free;
            let v = collateralize(risky, risk_free, ratio, c.default, c.recovery, threshold);
            let w = reach[k0][n];
            diag.expected_continuation += w * risky;
            diag.expected_value += w * v;
            if threshold.is_finite() {
                diag.expected_collateral += w * collateral_amount(v, threshold);
            }
            if risk_free > 0.0 && risky > threshold {
                diag.collateralized_share += w;
            }
            values.push(v + flows.at_end[j][n]);
        }
        diagnostics.push(diag);
        next = values;
    }
    diagnostics.reverse();
    Ok(Induction {
        value: next[0],
        terminal,
        diagnostics,
    })
}
