use alloc::vec::Vec;

use super::stats::{f_upper_tail, t_two_sided};
use crate::math::sqrt;
use crate::{Error, Result};

/// Simple regression `y = a + b·x + ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    pub n: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub adjusted_r_squared: f64,
    pub std_error_slope: f64,
    pub t_value: f64,
    /// Two-sided, from the t distribution with n − 2 degrees of freedom.
    pub p_value: f64,
    pub f_statistic: f64,
    pub significance_f: f64,
    pub residuals: Vec<f64>,
}

pub fn ols(x: &[f64], y: &[f64]) -> Result<RegressionResult> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(alloc::format!(
            "x has {} points, y has {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientData(alloc::format!(
            "{n} observations, need at least 3"
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("regression data is not finite".into()));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (xi, yi) in x.iter().zip(y) {
        let (dx, dy) = (xi - mx, yi - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 || x.iter().all(|&v| v == x[0]) {
        return Err(Error::Singular);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| yi - intercept - slope * xi)
        .collect();
    let sse: f64 = residuals.iter().map(|e| e * e).sum();
    let dof = nf - 2.0;
    let r_squared = if syy == 0.0 {
        0.0
    } else {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    };
    let adjusted_r_squared = 1.0 - (1.0 - r_squared) * (nf - 1.0) / dof;
    let std_error_slope = sqrt(sse / dof / sxx);
    let t_value = if std_error_slope == 0.0 {
        if slope == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(slope)
        }
    } else {
        slope / std_error_slope
    };
    let f_statistic = t_value * t_value;
    Ok(RegressionResult {
        n,
        slope,
        intercept,
        r_squared,
        adjusted_r_squared,
        std_error_slope,
        t_value,
        p_value: t_two_sided(t_value, dof),
        f_statistic,
        significance_f: f_upper_tail(f_statistic, 1.0, dof),
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let r = ols(&x, &y).unwrap();
        assert!((r.slope - 2.0).abs() < 1e-12);
        assert!((r.intercept - 1.0).abs() < 1e-12);
        assert!((r.r_squared - 1.0).abs() < 1e-12);
        assert!(r.p_value < 1e-12);
    }

    #[test]
    fn constant_y() {
        let r = ols(&[1.0, 2.0, 3.0, 4.0], &[5.0; 4]).unwrap();
        assert_eq!(r.slope, 0.0);
        assert_eq!(r.r_squared, 0.0);
        assert_eq!(r.t_value, 0.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            ols(&[1.0; 4], &[1.0, 2.0, 3.0, 4.0]),
            Err(Error::Singular)
        ));
        assert!(ols(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(ols(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }
}
