//! Small numerical helpers shared across modules.

use nalgebra::DMatrix;

/// Singular values of `m`, sorted in decreasing order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Rank cutoff `max(rows, cols) * eps * sigma_max`.
pub fn rank_threshold(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// Numeric rank: number of singular values strictly above [`rank_threshold`].
pub fn numeric_rank(m: &DMatrix<f64>) -> usize {
    rank_of(m.nrows(), m.ncols(), &singular_values(m))
}

pub(crate) fn rank_of(rows: usize, cols: usize, sv: &[f64]) -> usize {
    let Some(&smax) = sv.first() else {
        return 0;
    };
    if smax == 0.0 {
        return 0;
    }
    let tol = rank_threshold(rows, cols, smax);
    sv.iter().filter(|&&s| s > tol).count()
}

/// Wrap an angle into (-pi, pi].
pub fn normalize_angle(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut r = a.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Wrap an angle into [0, 2pi).
pub fn mod_two_pi(a: f64) -> f64 {
    let r = a.rem_euclid(std::f64::consts::TAU);
    if r >= std::f64::consts::TAU {
        0.0
    } else {
        r
    }
}

/// `x - sin(x)` without cancellation for small `|x|`.
pub fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // x^3/3! - x^5/5! + ... up to x^13
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        for k in (5..=13).step_by(2) {
            term *= -x2 / ((k - 1) as f64 * k as f64);
            sum += term;
        }
        sum
    } else {
        x - x.sin()
    }
}
