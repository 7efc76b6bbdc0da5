//! Linear control systems `x' = A x + B u`.
//!
//! Matrix exponential, exact propagation under piecewise-constant controls,
//! the Kalman rank test with a Gramian-based cross-check, and finite-difference
//! linearization of nonlinear systems at an equilibrium.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{rank_of, singular_values};

/// Number of Simpson panels used for the controllability Gramian.
pub const GRAMIAN_PANELS: usize = 1024;

/// `|f(x0, u0)|_inf` must not exceed this for [`linearize`] to accept the point.
pub const EQUILIBRIUM_TOL: f64 = 1e-8;

/// Pair `(A, B)` of a linear control system.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
}

impl LinearSystem {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>) -> Result<Self> {
        if a.nrows() == 0 || b.ncols() == 0 {
            return Err(Error::Dimension("need n >= 1 and k >= 1".into()));
        }
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "A must be square, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if b.nrows() != a.nrows() {
            return Err(Error::Dimension(format!(
                "B has {} rows but A is {}x{}",
                b.nrows(),
                a.nrows(),
                a.ncols()
            )));
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        Ok(LinearSystem { a, b })
    }

    /// Build from row-major nested rows, as parsed from JSON.
    pub fn from_rows(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<Self> {
        LinearSystem::new(matrix_from_rows(a)?, matrix_from_rows(b)?)
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn input_dim(&self) -> usize {
        self.b.ncols()
    }
}

/// Dense matrix from row-major rows; rows must have equal length.
pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Dimension("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

/// Row-major nested rows of `m`.
pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ControllabilityReport {
    pub rank: usize,
    pub controllable: bool,
    /// Singular values of the Kalman matrix, decreasing.
    pub singular_values: Vec<f64>,
}

// Pade [13/13] numerator coefficients.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// `e^{A t}` by scaling and squaring with a degree-13 Pade approximant.
pub fn matrix_exponential(a: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "matrix exponential needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    let at = a * t;
    let norm1 = (0..n)
        .map(|j| at.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    if !norm1.is_finite() {
        return Err(Error::InvalidArgument("non-finite matrix entry".into()));
    }
    let squarings = if norm1 > THETA13 {
        (norm1 / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let x = at / 2f64.powi(squarings);

    let id = DMatrix::<f64>::identity(n, n);
    let x2 = &x * &x;
    let x4 = &x2 * &x2;
    let x6 = &x4 * &x2;
    let b = &PADE13;
    let u_inner = &x6 * (&x6 * b[13] + &x4 * b[11] + &x2 * b[9])
        + &x6 * b[7]
        + &x4 * b[5]
        + &x2 * b[3]
        + &id * b[1];
    let u = &x * u_inner;
    let v = &x6 * (&x6 * b[12] + &x4 * b[10] + &x2 * b[8])
        + &x6 * b[6]
        + &x4 * b[4]
        + &x2 * b[2]
        + &id * b[0];
    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = denom
        .lu()
        .solve(&numer)
        .ok_or_else(|| Error::InvalidArgument("singular Pade denominator".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

/// Piecewise-constant control: consecutive `(duration, value)` pieces starting at t = 0.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PiecewiseControl {
    pieces: Vec<(f64, DVector<f64>)>,
}

impl PiecewiseControl {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(value: DVector<f64>, duration: f64) -> Self {
        let mut u = Self::new();
        u.push(duration, value);
        u
    }

    pub fn push(&mut self, duration: f64, value: DVector<f64>) -> &mut Self {
        self.pieces.push((duration, value));
        self
    }

    pub fn pieces(&self) -> &[(f64, DVector<f64>)] {
        &self.pieces
    }

    pub fn horizon(&self) -> f64 {
        self.pieces.iter().map(|(d, _)| d).sum()
    }
}

/// State at the end of `control`, starting from `x0`.
///
/// Each constant piece is integrated exactly: the exponential of the augmented
/// matrix `[[A, B u], [0, 0]]` carries both `e^{A tau}` and `int_0^tau e^{A s} ds B u`.
pub fn propagate(
    sys: &LinearSystem,
    x0: &DVector<f64>,
    control: &PiecewiseControl,
) -> Result<DVector<f64>> {
    let n = sys.state_dim();
    if x0.len() != n {
        return Err(Error::Dimension(format!(
            "x0 has length {}, expected {n}",
            x0.len()
        )));
    }
    let mut x = x0.clone();
    for (i, (tau, u)) in control.pieces().iter().enumerate() {
        if u.len() != sys.input_dim() {
            return Err(Error::Dimension(format!(
                "control piece {i} has length {}, expected {}",
                u.len(),
                sys.input_dim()
            )));
        }
        if !(tau.is_finite() && *tau >= 0.0) || u.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "control piece {i} must have a finite nonnegative duration and finite values"
            )));
        }
        if u.iter().all(|&v| v == 0.0) {
            x = matrix_exponential(sys.a(), *tau)? * x;
            continue;
        }
        let mut aug = DMatrix::zeros(n + 1, n + 1);
        aug.view_mut((0, 0), (n, n)).copy_from(sys.a());
        aug.view_mut((0, n), (n, 1)).copy_from(&(sys.b() * u));
        let e = matrix_exponential(&aug, *tau)?;
        x = e.view((0, 0), (n, n)) * &x + e.view((0, n), (n, 1));
    }
    Ok(x)
}

/// Kalman matrix `[B, AB, ..., A^{n-1} B]`.
pub fn kalman_matrix(sys: &LinearSystem) -> DMatrix<f64> {
    let n = sys.state_dim();
    let k = sys.input_dim();
    let mut m = DMatrix::zeros(n, n * k);
    let mut block = sys.b().clone();
    for i in 0..n {
        m.view_mut((0, i * k), (n, k)).copy_from(&block);
        block = sys.a() * block;
    }
    m
}

pub fn kalman_test(sys: &LinearSystem) -> ControllabilityReport {
    let m = kalman_matrix(sys);
    let singular_values = singular_values(&m);
    let rank = rank_of(m.nrows(), m.ncols(), &singular_values);
    ControllabilityReport {
        rank,
        controllable: rank == sys.state_dim(),
        singular_values,
    }
}

/// Square-root factor `L` of the Simpson sum, `W(T) = L L^T`: the columns
/// are `sqrt(w_j) e^{-A t_j} B` over the quadrature nodes.
fn gramian_factor(sys: &LinearSystem, horizon: f64) -> Result<DMatrix<f64>> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Gramian horizon must be positive, got {horizon}"
        )));
    }
    let (n, k) = (sys.state_dim(), sys.input_dim());
    let h = horizon / GRAMIAN_PANELS as f64;
    let mut l = DMatrix::zeros(n, k * (GRAMIAN_PANELS + 1));
    for j in 0..=GRAMIAN_PANELS {
        let weight = if j == 0 || j == GRAMIAN_PANELS {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let eb = matrix_exponential(sys.a(), -(j as f64) * h)? * sys.b();
        l.view_mut((0, j * k), (n, k))
            .copy_from(&(eb * (weight * h / 3.0).sqrt()));
    }
    Ok(l)
}

/// `W(T) = int_0^T e^{-At} B B^T e^{-A^T t} dt` by composite Simpson.
pub fn gramian(sys: &LinearSystem, horizon: f64) -> Result<DMatrix<f64>> {
    let l = gramian_factor(sys, horizon)?;
    Ok(&l * l.transpose())
}

/// Numeric rank of `W(T)`.
///
/// The singular values of `W` are taken as the squared singular values of its
/// factor; forming `W` first leaves rounding noise of a few `eps * |W|` in
/// directions where `W` vanishes, right at the rank threshold.
pub fn gramian_rank(sys: &LinearSystem, horizon: f64) -> Result<usize> {
    let l = gramian_factor(sys, horizon)?;
    let n = l.nrows();
    let sv: Vec<f64> = singular_values(&l).iter().map(|s| s * s).collect();
    Ok(rank_of(n, n, &sv))
}

type ControlledFn = dyn Fn(&DVector<f64>, &DVector<f64>) -> DVector<f64> + Send + Sync;

/// Nonlinear control system `x' = f(x, u)`.
#[derive(Clone)]
pub struct ControlledField {
    state_dim: usize,
    input_dim: usize,
    f: Arc<ControlledFn>,
}

impl fmt::Debug for ControlledField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ControlledField")
            .field("state_dim", &self.state_dim)
            .field("input_dim", &self.input_dim)
            .finish_non_exhaustive()
    }
}

impl ControlledField {
    pub fn new(
        state_dim: usize,
        input_dim: usize,
        f: impl Fn(&DVector<f64>, &DVector<f64>) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        ControlledField {
            state_dim,
            input_dim,
            f: Arc::new(f),
        }
    }

    /// `x' = A x + B u` as a generic controlled field.
    pub fn from_linear(sys: &LinearSystem) -> Self {
        let a = sys.a().clone();
        let b = sys.b().clone();
        ControlledField::new(sys.state_dim(), sys.input_dim(), move |x, u| {
            &a * x + &b * u
        })
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn eval(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        (self.f)(x, u)
    }
}

fn fd_step(coord: f64) -> f64 {
    f64::EPSILON.cbrt() * coord.abs().max(1.0)
}

/// Linearization `(df/dx, df/du)` at an equilibrium, by central differences.
pub fn linearize(
    field: &ControlledField,
    x0: &DVector<f64>,
    u0: &DVector<f64>,
) -> Result<LinearSystem> {
    let n = field.state_dim();
    let k = field.input_dim();
    if x0.len() != n || u0.len() != k {
        return Err(Error::Dimension(format!(
            "expected x0 in R^{n} and u0 in R^{k}, got lengths {} and {}",
            x0.len(),
            u0.len()
        )));
    }
    let f0 = field.eval(x0, u0);
    if f0.len() != n {
        return Err(Error::Dimension(format!(
            "field returned length {}, expected {n}",
            f0.len()
        )));
    }
    let residual = f0.amax();
    if residual.is_nan() || residual > EQUILIBRIUM_TOL {
        return Err(Error::NotEquilibrium {
            residual,
            tolerance: EQUILIBRIUM_TOL,
        });
    }

    let mut a = DMatrix::zeros(n, n);
    for j in 0..n {
        let h = fd_step(x0[j]);
        let mut xp = x0.clone();
        let mut xm = x0.clone();
        xp[j] += h;
        xm[j] -= h;
        let col = (field.eval(&xp, u0) - field.eval(&xm, u0)) / (2.0 * h);
        a.set_column(j, &col);
    }
    let mut b = DMatrix::zeros(n, k);
    for j in 0..k {
        let h = fd_step(u0[j]);
        let mut up = u0.clone();
        let mut um = u0.clone();
        up[j] += h;
        um[j] -= h;
        let col = (field.eval(x0, &up) - field.eval(x0, &um)) / (2.0 * h);
        b.set_column(j, &col);
    }
    LinearSystem::new(a, b)
}
