//! Recombining Hull-White trinomial tree fitted to a zero curve.
//!
//! The tree carries an Ornstein-Uhlenbeck factor `x` with zero mean on a
//! spatial grid of spacing `σ·sqrt(3·V)`; the short rate on slice `k` is
//! `x + α_k`, where `α_k` is fitted by forward induction on Arrow-Debreu prices
//! so that every slice reprices the curve's zero-coupon bond exactly. Steps
//! may be uneven: every required date is a slice, and gaps are split so no
//! step exceeds the configured maximum.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use time::Date;

use crate::curve::ZeroCurve;
use crate::dates::time_between;
use crate::math::{ceil, exp, log, round, sqrt};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConfig {
    /// Mean reversion speed `a`, per annum.
    pub mean_reversion: f64,
    /// Absolute (normal) short-rate volatility σ, per annum.
    pub sigma: f64,
    /// Largest permitted time step in years.
    pub max_dt: f64,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            mean_reversion: 0.03,
            sigma: 0.01,
            max_dt: 0.25,
        }
    }
}

impl LatticeConfig {
    fn validate(&self) -> Result<()> {
        if !(self.mean_reversion > 0.0) || !(self.sigma >= 0.0) || !(self.max_dt > 0.0) {
            return Err(Error::InvalidInput(format!(
                "lattice needs a > 0, sigma >= 0, max_dt > 0 (got a = {}, sigma = {}, max_dt = {})",
                self.mean_reversion, self.sigma, self.max_dt
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub target: usize,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    /// Deviation of the short rate from the fitted drift.
    pub x: f64,
    /// Short rate applying over the step to the next slice.
    pub rate: f64,
    /// Down, middle and up transitions. Empty on the final slice.
    pub branches: Vec<Branch>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub time: f64,
    /// Step length to the next slice; zero on the final slice.
    pub dt: f64,
    pub nodes: Vec<Node>,
    /// Arrow-Debreu price of each node seen from the root.
    pub state_prices: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateLattice {
    anchor: Date,
    config: LatticeConfig,
    slices: Vec<Slice>,
}

/// Build a tree from the curve anchor to `horizon` with a slice on every date in `dates`.
pub fn build_lattice(
    curve: &ZeroCurve,
    cfg: LatticeConfig,
    horizon: Date,
    dates: &[Date],
) -> Result<RateLattice> {
    cfg.validate()?;
    let anchor = curve.anchor();
    if horizon < anchor {
        return Err(Error::DateOrder {
            start: anchor,
            end: horizon,
        });
    }
    let mut key_times: Vec<f64> = Vec::with_capacity(dates.len() + 2);
    key_times.push(0.0);
    for &d in dates {
        if d > horizon {
            return Err(Error::InvalidInput(format!(
                "date {d} lies beyond the lattice horizon {horizon}"
            )));
        }
        if d > anchor {
            key_times.push(time_between(anchor, d));
        }
    }
    key_times.push(time_between(anchor, horizon));
    key_times.sort_by(f64::total_cmp);
    key_times.dedup();

    let mut times = Vec::new();
    for w in key_times.windows(2) {
        let gap = w[1] - w[0];
        let n = ceil(gap / cfg.max_dt - 1e-9).max(1.0) as usize;
        for k in 0..n {
            times.push(if k == 0 {
                w[0]
            } else {
                w[0] + gap * k as f64 / n as f64
            });
        }
    }
    times.push(*key_times.last().unwrap_or(&0.0));
    RateLattice::on_times(curve, cfg, anchor, &times)
}

impl RateLattice {
    fn on_times(
        curve: &ZeroCurve,
        cfg: LatticeConfig,
        anchor: Date,
        times: &[f64],
    ) -> Result<Self> {
        let a = cfg.mean_reversion;
        let sigma = cfg.sigma;
        let mut slices: Vec<Slice> = Vec::with_capacity(times.len());
        slices.push(Slice {
            time: 0.0,
            dt: 0.0,
            nodes: vec![Node {
                x: 0.0,
                rate: 0.0,
                branches: Vec::new(),
            }],
            state_prices: vec![1.0],
        });

        for k in 0..times.len().saturating_sub(1) {
            let dt = times[k + 1] - times[k];
            let decay = exp(-a * dt);
            let variance = sigma * sigma * (1.0 - exp(-2.0 * a * dt)) / (2.0 * a);
            let dx = sqrt(3.0 * variance);

            let current = &mut slices[k];
            current.dt = dt;

            // branching geometry; targets are expressed as grid indices j on the next slice
            let mut raw: Vec<(i64, [f64; 3])> = Vec::with_capacity(current.nodes.len());
            for node in &current.nodes {
                if dx == 0.0 {
                    raw.push((0, [0.0, 1.0, 0.0]));
                    continue;
                }
                let mean = node.x * decay;
                let centre = round(mean / dx) as i64;
                let eta = mean - centre as f64 * dx;
                let v = variance / (dx * dx);
                let e = eta / dx;
                let up = 0.5 * (v + e * e + e);
                let down = 0.5 * (v + e * e - e);
                let mid = 1.0 - up - down;
                for prob in [up, mid, down] {
                    if prob < 0.0 {
                        return Err(Error::StepTooLarge { slice: k, prob });
                    }
                }
                raw.push((centre, [down, mid, up]));
            }
            let (j_min, j_max) = if dx == 0.0 {
                (0, 0)
            } else {
                let lo = raw.iter().map(|r| r.0).min().unwrap_or(0) - 1;
                let hi = raw.iter().map(|r| r.0).max().unwrap_or(0) + 1;
                (lo, hi)
            };
            let width = (j_max - j_min + 1) as usize;

            // fit the drift so the next slice's zero-coupon bond reprices
            let target_df = curve.df_time(times[k + 1]);
            let unshifted: f64 = current
                .nodes
                .iter()
                .zip(&current.state_prices)
                .map(|(n, q)| q * exp(-n.x * dt))
                .sum();
            let alpha = log(unshifted / target_df) / dt;

            let mut next_prices = vec![0.0; width];
            for ((node, q), (centre, probs)) in current
                .nodes
                .iter_mut()
                .zip(&current.state_prices)
                .zip(&raw)
            {
                node.rate = node.x + alpha;
                let disc = exp(-node.rate * dt);
                node.branches = if dx == 0.0 {
                    vec![Branch {
                        target: 0,
                        prob: 1.0,
                    }]
                } else {
                    (0..3)
                        .map(|b| Branch {
                            target: (centre - 1 + b as i64 - j_min) as usize,
                            prob: probs[b],
                        })
                        .collect()
                };
                for br in &node.branches {
                    next_prices[br.target] += q * br.prob * disc;
                }
            }
            let nodes = (0..width)
                .map(|i| Node {
                    x: (j_min + i as i64) as f64 * dx,
                    rate: 0.0,
                    branches: Vec::new(),
                })
                .collect();
            slices.push(Slice {
                time: times[k + 1],
                dt: 0.0,
                nodes,
                state_prices: next_prices,
            });
        }
        Ok(RateLattice {
            anchor,
            config: cfg,
            slices,
        })
    }

    pub fn anchor(&self) -> Date {
        self.anchor
    }

    pub fn config(&self) -> LatticeConfig {
        self.config
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn slice(&self, k: usize) -> &Slice {
        &self.slices[k]
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// Index of the slice at exactly time `t`.
    pub fn slice_at_time(&self, t: f64) -> Option<usize> {
        self.slices.iter().position(|s| s.time == t)
    }

    pub fn slice_of_date(&self, date: Date) -> Result<usize> {
        if date < self.anchor {
            return Err(Error::Misaligned(date));
        }
        self.slice_at_time(time_between(self.anchor, date))
            .ok_or(Error::Misaligned(date))
    }

    /// exp(−r·Δt) for the step leaving `node` on slice `k`.
    pub fn node_step_discount(&self, k: usize, node: usize) -> Result<f64> {
        let slice = self
            .slices
            .get(k)
            .ok_or_else(|| Error::InvalidInput(format!("slice {k} out of range")))?;
        if k + 1 == self.slices.len() {
            return Err(Error::InvalidInput("no step leaves the final slice".into()));
        }
        let n = slice
            .nodes
            .get(node)
            .ok_or_else(|| Error::InvalidInput(format!("node {node} out of range on slice {k}")))?;
        Ok(exp(-n.rate * slice.dt))
    }

    /// Discounted expectation one step back: values on slice `k + 1` to slice `k`.
    pub fn step_back(&self, k: usize, next: &[f64]) -> Vec<f64> {
        let slice = &self.slices[k];
        slice
            .nodes
            .iter()
            .map(|n| {
                let ev: f64 = n.branches.iter().map(|b| b.prob * next[b.target]).sum();
                ev * exp(-n.rate * slice.dt)
            })
            .collect()
    }

    /// Roll values on slice `to_k` back to slice `from_k` (risk-free).
    pub fn roll_back(&self, from_k: usize, to_k: usize, values: &[f64]) -> Vec<f64> {
        let mut v = values.to_vec();
        for k in (from_k..to_k).rev() {
            v = self.step_back(k, &v);
        }
        v
    }

    /// Price at each node of slice `from_k` of a unit zero-coupon bond paying at slice `to_k`.
    pub fn zero_bond(&self, from_k: usize, to_k: usize) -> Vec<f64> {
        self.roll_back(from_k, to_k, &vec![1.0; self.slices[to_k].nodes.len()])
    }

    /// Risk-neutral probability of reaching each node of every slice.
    pub fn reach_probabilities(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(self.slices.len());
        out.push(vec![1.0]);
        for k in 0..self.slices.len() - 1 {
            let mut next = vec![0.0; self.slices[k + 1].nodes.len()];
            for (node, p) in self.slices[k].nodes.iter().zip(&out[k]) {
                for b in &node.branches {
                    next[b.target] += p * b.prob;
                }
            }
            out.push(next);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use time::macros::date;

    const ANCHOR: Date = date!(2005 - 09 - 15);

    fn quarterly_dates(years: i32) -> Vec<Date> {
        (1..=4 * years)
            .map(|q| crate::dates::add_months(ANCHOR, 3 * q).unwrap())
            .collect()
    }

    #[test]
    fn reprices_flat_curve() {
        let curve = ZeroCurve::flat(ANCHOR, 0.05);
        let cfg = LatticeConfig {
            mean_reversion: 0.03,
            sigma: 0.01,
            max_dt: 0.25,
        };
        let dates = quarterly_dates(5);
        let lat = build_lattice(&curve, cfg, *dates.last().unwrap(), &dates).unwrap();
        for s in lat.slices() {
            let model: f64 = s.state_prices.iter().sum();
            assert!((model - curve.df_time(s.time)).abs() < 1e-8);
        }
    }

    #[test]
    fn probabilities_are_valid() {
        let curve = ZeroCurve::flat(ANCHOR, 0.03);
        let dates = quarterly_dates(10);
        let lat = build_lattice(
            &curve,
            LatticeConfig::default(),
            *dates.last().unwrap(),
            &dates,
        )
        .unwrap();
        for s in &lat.slices()[..lat.len() - 1] {
            for n in &s.nodes {
                let sum: f64 = n.branches.iter().map(|b| b.prob).sum();
                assert!((sum - 1.0).abs() <= 4.0 * f64::EPSILON);
                assert!(n.branches.iter().all(|b| (0.0..=1.0).contains(&b.prob)));
            }
        }
    }

    #[test]
    fn deterministic_limit_follows_forwards() {
        let curve = ZeroCurve::from_pillars(
            ANCHOR,
            &[
                (date!(2006 - 09 - 15), 0.96),
                (date!(2008 - 09 - 15), 0.90),
                (date!(2010 - 09 - 15), 0.82),
            ],
        )
        .unwrap();
        let cfg = LatticeConfig {
            sigma: 0.0,
            ..LatticeConfig::default()
        };
        let dates = quarterly_dates(5);
        let lat = build_lattice(&curve, cfg, *dates.last().unwrap(), &dates).unwrap();
        let mut product = 1.0;
        for (k, s) in lat.slices()[..lat.len() - 1].iter().enumerate() {
            assert_eq!(s.nodes.len(), 1);
            let t1 = lat.slice(k + 1).time;
            let fwd = (curve.df_time(s.time) / curve.df_time(t1)).ln() / s.dt;
            assert!((s.nodes[0].rate - fwd).abs() < 1e-12);
            product *= lat.node_step_discount(k, 0).unwrap();
        }
        let end = lat.slices().last().unwrap().time;
        assert!((product - curve.df_time(end)).abs() < 1e-10);
    }

    #[test]
    fn node_discount_values() {
        let curve = ZeroCurve::from_pillars(ANCHOR, &[(date!(2030 - 01 - 01), 1.0)]).unwrap();
        let cfg = LatticeConfig {
            sigma: 0.0,
            ..LatticeConfig::default()
        };
        let d = date!(2006 - 09 - 15);
        let lat = build_lattice(&curve, cfg, d, &[d]).unwrap();
        assert!((lat.node_step_discount(0, 0).unwrap() - 1.0).abs() < 1e-15);
        let last = lat.len() - 1;
        assert!(lat.node_step_discount(last, 0).is_err());
    }

    #[test]
    fn every_date_is_a_slice_and_steps_are_capped() {
        let curve = ZeroCurve::flat(ANCHOR, 0.04);
        let dates = [date!(2006 - 01 - 20), date!(2007 - 06 - 01)];
        let lat = build_lattice(
            &curve,
            LatticeConfig::default(),
            date!(2008 - 01 - 01),
            &dates,
        )
        .unwrap();
        for d in dates {
            assert!(lat.slice_of_date(d).is_ok());
        }
        for s in &lat.slices()[..lat.len() - 1] {
            assert!(s.dt <= 0.25 + 1e-12 && s.dt > 0.0);
        }
        assert!(lat.slice_of_date(date!(2006 - 02 - 01)).is_err());
    }

    #[test]
    fn rejects_bad_config() {
        let curve = ZeroCurve::flat(ANCHOR, 0.04);
        let bad = LatticeConfig {
            mean_reversion: 0.0,
            ..LatticeConfig::default()
        };
        assert!(build_lattice(&curve, bad, date!(2008 - 01 - 01), &[]).is_err());
    }

    #[test]
    fn every_node_is_reachable() {
        let curve = ZeroCurve::flat(ANCHOR, 0.04);
        let dates = quarterly_dates(20);
        let lat = build_lattice(
            &curve,
            LatticeConfig::default(),
            *dates.last().unwrap(),
            &dates,
        )
        .unwrap();
        for s in lat.slices() {
            assert!(s.state_prices.iter().all(|&q| q > 0.0));
        }
    }
}
