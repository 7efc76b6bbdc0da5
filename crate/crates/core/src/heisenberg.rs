//! Sub-Riemannian problem on the Heisenberg group
//! `q' = u1 f1 + u2 f2`, `f1 = d/dx - y/2 d/dz`, `f2 = d/dy + x/2 d/dz`,
//! from the origin.
//!
//! Geodesics are parameterized by the initial covector angle `theta0`, the
//! vertical covector component `h3` and arclength `t`. For `h3 != 0` the
//! projection to the plane is a circle of radius `1/|h3|`; geodesics stay
//! optimal up to `t = 2 pi / |h3|`, where they simultaneously reach the first
//! conjugate and the first Maxwell point.
//!
//! The closed forms use `z = (h3 t - sin h3 t) / h3^2`, which is twice the
//! signed area swept by `(x, y)`. That is the geometry of the frame
//! `d/dx - y d/dz`, `d/dy + x d/dz`; the frame above, with the halves, sweeps
//! `z` at half that rate. Distances below follow the closed forms, so the
//! distance to `(0, 0, z)` is `sqrt(2 pi |z|)`.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::numeric::{normalize_angle, x_minus_sin};

/// Below this `|h3 t|` the exponential map uses its Taylor expansion in `h3`.
pub const SERIES_SWITCH: f64 = 1e-4;

/// Bisection bracket for `p` is `(P_EPS, pi - P_EPS)`.
pub const P_EPS: f64 = 1e-12;

/// Bisection stops once the bracket is narrower than this.
pub const P_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        HPoint { x, y, z }
    }

    /// Distance from the z-axis.
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeodesicParam {
    /// Initial covector angle: `h1 = cos theta0`, `h2 = sin theta0`.
    pub theta0: f64,
    pub h3: f64,
    pub t: f64,
}

impl GeodesicParam {
    pub fn new(theta0: f64, h3: f64, t: f64) -> Self {
        GeodesicParam {
            theta0: normalize_angle(theta0),
            h3,
            t,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceResult {
    pub distance: f64,
    /// Empty at the origin; one representative otherwise.
    pub minimizers: Vec<GeodesicParam>,
    /// Set on the z-axis, where the representative's rotations about the axis
    /// (any `theta0`) are minimizers as well.
    pub rotation_family: bool,
}

/// Endpoint of the normal geodesic with parameters `g`.
pub fn exp_map(g: &GeodesicParam) -> HPoint {
    let GeodesicParam { theta0, h3, t } = *g;
    let s = h3 * t;
    let (sin0, cos0) = theta0.sin_cos();
    if s.abs() < SERIES_SWITCH {
        // sin s / s, (1 - cos s)/s and (s - sin s)/s^2 to fourth order in s
        let s2 = s * s;
        let sinc = 1.0 - s2 / 6.0 + s2 * s2 / 120.0;
        let cosc = s / 2.0 - s * s2 / 24.0;
        let twice_area = s / 6.0 - s * s2 / 120.0;
        return HPoint {
            x: t * (cos0 * sinc - sin0 * cosc),
            y: t * (sin0 * sinc + cos0 * cosc),
            z: t * t * twice_area,
        };
    }
    let th = theta0 + s;
    HPoint {
        x: (th.sin() - sin0) / h3,
        y: (cos0 - th.cos()) / h3,
        z: x_minus_sin(s) / (h3 * h3),
    }
}

/// `n` points at uniform times along the geodesic `g` on `[0, g.t]`.
pub fn sample_geodesic(g: &GeodesicParam, n: usize) -> Vec<HPoint> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            exp_map(&GeodesicParam {
                t: g.t * i as f64 / (n - 1) as f64,
                ..*g
            })
        })
        .collect()
}

/// `phi(p) = (2p - sin 2p) cos p - (1 - cos 2p) sin p`.
pub fn jacobian_factor(p: f64) -> f64 {
    x_minus_sin(2.0 * p) * p.cos() - 2.0 * p.sin().powi(3)
}

/// Jacobian of `(tau, p, h3) -> (x, y, z)`: `8 sin(p) phi(p) / h3^5`.
pub fn jacobian_determinant(p: f64, h3: f64) -> f64 {
    8.0 * p.sin() * jacobian_factor(p) / h3.powi(5)
}

/// First conjugate time `2 pi / |h3|`; infinite for `h3 = 0`.
pub fn conjugate_time(h3: f64) -> f64 {
    if h3 == 0.0 {
        f64::INFINITY
    } else {
        TAU / h3.abs()
    }
}

/// First Maxwell time for the rotation symmetry about the z-axis.
pub fn maxwell_time(h3: f64) -> f64 {
    // Maxwell points x = y = 0 are reached at t = 2 pi n / |h3|
    if h3 == 0.0 {
        f64::INFINITY
    } else {
        TAU / h3.abs()
    }
}

/// `mu(p) = (2p - sin 2p) / (4 sin^2 p)`, increasing from 0 to infinity on `(0, pi)`.
pub fn mu(p: f64) -> f64 {
    let s = p.sin();
    x_minus_sin(2.0 * p) / (4.0 * s * s)
}

/// Solve `mu(p) = ratio` for `p` in `(0, pi)`; `ratio > 0`.
pub fn solve_mu(ratio: f64) -> f64 {
    let mut lo = P_EPS;
    let mut hi = PI - P_EPS;
    if ratio <= mu(lo) {
        return lo;
    }
    if ratio >= mu(hi) {
        return hi;
    }
    while hi - lo > P_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mu(mid) < ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sub-Riemannian distance from the origin and the minimizing geodesic(s).
pub fn solve_geodesic(q: &HPoint) -> DistanceResult {
    let r = q.radius();
    if q.z == 0.0 {
        if r == 0.0 {
            return DistanceResult {
                distance: 0.0,
                minimizers: Vec::new(),
                rotation_family: false,
            };
        }
        return DistanceResult {
            distance: r,
            minimizers: vec![GeodesicParam::new(q.y.atan2(q.x), 0.0, r)],
            rotation_family: false,
        };
    }
    let sign = q.z.signum();
    if r == 0.0 {
        let d = (TAU * q.z.abs()).sqrt();
        return DistanceResult {
            distance: d,
            minimizers: vec![GeodesicParam::new(0.0, sign * TAU / d, d)],
            rotation_family: true,
        };
    }
    // z < 0 is the mirror image of z > 0 under (x, y, z) -> (x, -y, -z),
    // which maps (theta0, h3) -> (-theta0, -h3)
    let p = solve_mu(q.z.abs() / (r * r));
    let sin_p = p.sin();
    let d = p / sin_p * r;
    let h3 = sign * 2.0 * sin_p / r;
    let theta0 = q.y.atan2(q.x) - sign * p;
    DistanceResult {
        distance: d,
        minimizers: vec![GeodesicParam::new(theta0, h3, d)],
        rotation_family: false,
    }
}
