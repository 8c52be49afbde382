use csa_core::analysis::{ols, stats};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

const X: [f64; 10] = [1.2, 2.9, 3.1, 4.8, 5.0, 6.7, 7.3, 8.8, 9.1, 10.4];
const Y: [f64; 10] = [3.4, 6.1, 7.2, 9.9, 10.1, 13.8, 14.2, 18.3, 18.0, 21.5];

#[test]
fn exact_line() {
    let x = [1.0, 2.0, 3.0, 4.0, 5.0];
    let y = x.map(|v| 2.0 * v + 1.0);
    let r = ols(&x, &y).unwrap();
    assert!((r.slope - 2.0).abs() < 1e-12);
    assert!((r.intercept - 1.0).abs() < 1e-12);
    assert!((r.r_squared - 1.0).abs() < 1e-12);
}

#[test]
fn matches_normal_equations() {
    // [n Σx; Σx Σx²] [a; b] = [Σy; Σxy] by Cramer's rule
    let n = X.len() as f64;
    let sx: f64 = X.iter().sum();
    let sy: f64 = Y.iter().sum();
    let sxx: f64 = X.iter().map(|v| v * v).sum();
    let sxy: f64 = X.iter().zip(&Y).map(|(a, b)| a * b).sum();
    let det = n * sxx - sx * sx;
    let a = (sy * sxx - sx * sxy) / det;
    let b = (n * sxy - sx * sy) / det;
    let r = ols(&X, &Y).unwrap();
    assert!((r.slope - b).abs() < 1e-12);
    assert!((r.intercept - a).abs() < 1e-12);

    let sse: f64 = X.iter().zip(&Y).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    let ybar = sy / n;
    let sst: f64 = Y.iter().map(|y| (y - ybar).powi(2)).sum();
    let r2 = 1.0 - sse / sst;
    assert!((r.r_squared - r2).abs() < 1e-12);
    assert!((r.adjusted_r_squared - (1.0 - (1.0 - r2) * (n - 1.0) / (n - 2.0))).abs() < 1e-12);
}

#[test]
fn p_values_match_reference_distributions() {
    let r = ols(&X, &Y).unwrap();
    let t = StudentsT::new(0.0, 1.0, 8.0).unwrap();
    let p = 2.0 * (1.0 - t.cdf(r.t_value.abs()));
    assert!((r.p_value - p).abs() < 1e-12, "{} vs {p}", r.p_value);
    let f = FisherSnedecor::new(1.0, 8.0).unwrap();
    assert!((r.significance_f - (1.0 - f.cdf(r.f_statistic))).abs() < 1e-12);
}

#[test]
fn tail_probabilities_on_a_grid() {
    for dof in [1.0, 3.0, 8.0, 30.0, 500.0] {
        let dist = StudentsT::new(0.0, 1.0, dof).unwrap();
        for t in [0.1, 0.7, 1.5, 2.2, 4.0] {
            let expected = 2.0 * dist.sf(t);
            assert!(
                (stats::t_two_sided(t, dof) - expected).abs() < 1e-12,
                "t={t} dof={dof}"
            );
        }
    }
}

#[test]
fn noisy_data_statistics() {
    let x: Vec<f64> = (0..30).map(|i| i as f64).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|v| 0.5 * v + ((v * 12.9898).sin() * 43758.5453).fract())
        .collect();
    let r = ols(&x, &y).unwrap();
    assert!(r.slope > 0.0 && r.p_value < 0.01);
    assert!((r.f_statistic - r.t_value * r.t_value).abs() < 1e-9 * r.f_statistic);
}
