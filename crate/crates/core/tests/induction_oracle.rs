//! Backward induction against exhaustive enumeration of lattice paths.

use csa_core::curve::ZeroCurve;
use csa_core::lattice::{build_lattice, LatticeConfig, RateLattice};
use csa_core::pricing::{backward_induction, GridCashflows, PaymentGrid, PeriodCredit};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use time::macros::date;
use time::{Date, Duration};

const ANCHOR: Date = date!(2010 - 01 - 04);

struct Case {
    lattice: RateLattice,
    grid: PaymentGrid,
    flows: GridCashflows,
    credit: Vec<PeriodCredit>,
    threshold: f64,
}

fn random_case(seed: u64, nonnegative: bool) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rate = rng.gen_range(0.0..0.08);
        let curve = ZeroCurve::from_pillars(
            ANCHOR,
            &[
                (ANCHOR + Duration::days(180), (-rate * 0.5f64).exp()),
                (
                    ANCHOR + Duration::days(720),
                    (-(rate + rng.gen_range(0.0..0.02)) * 2.0f64).exp(),
                ),
            ],
        )
        .unwrap();
        let cfg = LatticeConfig {
            mean_reversion: rng.gen_range(0.01..0.3),
            sigma: if rng.gen_bool(0.1) {
                0.0
            } else {
                rng.gen_range(0.001..0.03)
            },
            max_dt: rng.gen_range(0.1..0.5),
        };
        let n_dates = rng.gen_range(1..=3);
        let mut dates = Vec::new();
        let mut d = ANCHOR;
        for _ in 0..n_dates {
            d += Duration::days(rng.gen_range(20..=120));
            dates.push(d);
        }
        let lattice = build_lattice(&curve, cfg, d, &dates).unwrap();
        if lattice.len() > 4 {
            continue;
        }
        let mut grid_dates: Vec<Date> = dates
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.7))
            .collect();
        if grid_dates.is_empty() {
            grid_dates.push(d);
        }
        let grid = PaymentGrid::new(&lattice, &grid_dates).unwrap();
        let mut flows = GridCashflows::zeros(&lattice, &grid);
        let lo = if nonnegative { 0.0 } else { -100.0 };
        for row in flows
            .at_start
            .iter_mut()
            .chain(flows.at_end.iter_mut().skip(1))
        {
            for cell in row.iter_mut() {
                *cell = if rng.gen_bool(0.2) {
                    0.0
                } else {
                    rng.gen_range(lo..100.0)
                };
            }
        }
        let credit = (0..grid.len())
            .map(|_| {
                let survival = rng.gen_range(0.8..=1.0);
                PeriodCredit {
                    survival,
                    default: 1.0 - survival,
                    recovery: rng.gen_range(0.0..0.9),
                }
            })
            .collect();
        let threshold = match rng.gen_range(0..4) {
            0 => 0.0,
            1 => f64::INFINITY,
            _ => rng.gen_range(0.0..150.0),
        };
        return Case {
            lattice,
            grid,
            flows,
            credit,
            threshold,
        };
    }
}

/// Every (probability, discount, end node) path from `node` on slice `from` to slice `to`.
fn paths(lattice: &RateLattice, from: usize, to: usize, node: usize) -> Vec<(f64, f64, usize)> {
    if from == to {
        return vec![(1.0, 1.0, node)];
    }
    let slice = &lattice.slices()[from];
    let n = &slice.nodes[node];
    let disc = (-n.rate * slice.dt).exp();
    let mut out = Vec::new();
    for b in &n.branches {
        for (p, d, end) in paths(lattice, from + 1, to, b.target) {
            out.push((b.prob * p, disc * d, end));
        }
    }
    out
}

/// Collateralized value at grid date j and node n, excluding the cashflow paid there.
fn enumerate(case: &Case, j: usize, n: usize) -> f64 {
    let m = case.grid.len();
    if j == m {
        return 0.0;
    }
    let (k0, k1) = (case.grid.slices()[j], case.grid.slices()[j + 1]);
    let mut continuation = 0.0;
    let mut bond = 0.0;
    for (p, d, end) in paths(&case.lattice, k0, k1, n) {
        continuation += p * d * (enumerate(case, j + 1, end) + case.flows.at_end[j + 1][end]);
        bond += p * d;
    }
    let r = continuation + case.flows.at_start[j][n] * bond;
    let c = case.credit[j];
    let i = c.survival + c.recovery * c.default;
    if r <= 0.0 {
        return r;
    }
    let risky = i * r;
    if risky <= case.threshold {
        risky
    } else {
        (risky - case.threshold * c.default * (1.0 - c.recovery)) / i
    }
}

/// Σ over full paths of Π(prob·D·I)·X for non-negative flows without collateral.
fn uncollateralized_sum(case: &Case) -> f64 {
    fn walk(case: &Case, j: usize, n: usize, weight: f64) -> f64 {
        if j == case.grid.len() {
            return 0.0;
        }
        let (k0, k1) = (case.grid.slices()[j], case.grid.slices()[j + 1]);
        let c = case.credit[j];
        let i = c.survival + c.recovery * c.default;
        let mut total = 0.0;
        for (p, d, end) in paths(&case.lattice, k0, k1, n) {
            let w = weight * p * d * i;
            total += w * (case.flows.at_start[j][n] + case.flows.at_end[j + 1][end]);
            total += walk(case, j + 1, end, w);
        }
        total
    }
    walk(case, 0, 0, 1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn induction_matches_path_enumeration(seed in any::<u64>()) {
        let case = random_case(seed, false);
        let v = backward_induction(&case.lattice, &case.grid, &case.flows, &case.credit, case.threshold).unwrap();
        let oracle = enumerate(&case, 0, 0);
        prop_assert!((v.value - oracle).abs() < 1e-12 * oracle.abs().max(1.0), "{} vs {}", v.value, oracle);
    }

    #[test]
    fn positive_flows_match_expanded_sum(seed in any::<u64>()) {
        let case = random_case(seed, true);
        let v = backward_induction(&case.lattice, &case.grid, &case.flows, &case.credit, f64::INFINITY).unwrap();
        let oracle = uncollateralized_sum(&case);
        prop_assert!((v.value - oracle).abs() < 1e-12 * oracle.abs().max(1.0), "{} vs {}", v.value, oracle);
    }
}
