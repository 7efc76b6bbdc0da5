//! Euler elasticae as normal extremals of `x' = cos th, y' = sin th, th' = u`
//! minimizing `1/2 int u^2`.
//!
//! The vertical subsystem reduces to the pendulum `beta' = h2, h2' = -r sin beta`
//! with energy `E = h2^2/2 - r cos beta`; the curvature is `u = h2` and the
//! heading satisfies `th = beta - beta0`.

use serde::Serialize;

use crate::dubins::PlanarPose;

/// Tolerance on `|E -+ r|` when classifying regimes.
pub const REGIME_TOL: f64 = 1e-12;

/// Default integration step (arclength).
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PendulumState {
    pub beta: f64,
    pub h2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ElasticaParams {
    /// `sqrt(h1^2 + h3^2)`, nonnegative.
    pub r: f64,
    pub beta0: f64,
    pub h2_0: f64,
    /// Arclength of the curve.
    pub length: f64,
}

impl ElasticaParams {
    pub fn new(r: f64, beta0: f64, h2_0: f64, length: f64) -> Self {
        ElasticaParams {
            r,
            beta0,
            h2_0,
            length,
        }
    }

    pub fn energy(&self) -> f64 {
        pendulum_energy(self.r, self.beta0, self.h2_0)
    }

    /// Step count giving a step close to [`DEFAULT_STEP`].
    pub fn default_steps(&self) -> usize {
        ((self.length / DEFAULT_STEP).ceil() as usize).max(1)
    }
}

pub fn pendulum_energy(r: f64, beta: f64, h2: f64) -> f64 {
    0.5 * h2 * h2 - r * beta.cos()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElasticaRegime {
    /// `E = -r < 0`: pendulum at rest at the stable equilibrium.
    Line,
    /// `-r < E < r`: oscillation, curves with inflection points.
    Inflectional,
    /// `E = r > 0`: unstable equilibrium or the separatrix.
    CriticalSeparatrix,
    /// `E > r > 0`: rotation, curves without inflection points.
    NonInflectional,
    /// `r = 0`: uniform rotation or rest; circles or a line.
    CircleOrLine,
}

pub fn classify(p: &ElasticaParams) -> ElasticaRegime {
    if p.r == 0.0 {
        return ElasticaRegime::CircleOrLine;
    }
    let e = p.energy();
    if (e + p.r).abs() <= REGIME_TOL {
        ElasticaRegime::Line
    } else if (e - p.r).abs() <= REGIME_TOL {
        ElasticaRegime::CriticalSeparatrix
    } else if e < p.r {
        ElasticaRegime::Inflectional
    } else {
        ElasticaRegime::NonInflectional
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ElasticaSample {
    /// Arclength.
    pub t: f64,
    pub pose: PlanarPose,
    pub pendulum: PendulumState,
}

/// Joint state `(x, y, th, beta, h2)`; `th` is kept unwrapped while integrating.
type Joint = [f64; 5];

fn rhs(r: f64, s: &Joint) -> Joint {
    let [_, _, th, beta, h2] = *s;
    [th.cos(), th.sin(), h2, h2, -r * beta.sin()]
}

fn axpy(a: &Joint, k: f64, b: &Joint) -> Joint {
    std::array::from_fn(|i| a[i] + k * b[i])
}

fn rk4_step(r: f64, s: &Joint, h: f64) -> Joint {
    let k1 = rhs(r, s);
    let k2 = rhs(r, &axpy(s, h / 2.0, &k1));
    let k3 = rhs(r, &axpy(s, h / 2.0, &k2));
    let k4 = rhs(r, &axpy(s, h, &k3));
    std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Unwrapped heading, which may leave `(-pi, pi]` on looping curves.
#[derive(Clone, Debug, PartialEq)]
pub struct ElasticaCurve {
    pub samples: Vec<ElasticaSample>,
    /// `th(t)` without wrapping, aligned with `samples`.
    pub heading: Vec<f64>,
}

/// RK4 integration of the extremal from `(0, 0, 0)` with `n_steps` equal steps;
/// returns `n_steps + 1` samples.
pub fn integrate_extremal(p: &ElasticaParams, n_steps: usize) -> ElasticaCurve {
    let n = n_steps.max(1);
    let h = p.length / n as f64;
    let mut state: Joint = [0.0, 0.0, 0.0, p.beta0, p.h2_0];
    let mut samples = Vec::with_capacity(n + 1);
    let mut heading = Vec::with_capacity(n + 1);
    let mut push = |i: usize, s: &Joint| {
        samples.push(ElasticaSample {
            t: i as f64 * h,
            pose: PlanarPose::new(s[0], s[1], s[2]),
            pendulum: PendulumState {
                beta: s[3],
                h2: s[4],
            },
        });
        heading.push(s[2]);
    };
    push(0, &state);
    for i in 1..=n {
        state = rk4_step(p.r, &state, h);
        push(i, &state);
    }
    ElasticaCurve { samples, heading }
}

/// The abnormal extremal `u = 0`: the segment from the origin along the x-axis.
pub fn abnormal_extremal(length: f64, n_samples: usize) -> ElasticaCurve {
    let n = n_samples.max(2);
    let samples: Vec<ElasticaSample> = (0..n)
        .map(|i| {
            let t = length * i as f64 / (n - 1) as f64;
            ElasticaSample {
                t,
                pose: PlanarPose::new(t, 0.0, 0.0),
                pendulum: PendulumState { beta: 0.0, h2: 0.0 },
            }
        })
        .collect();
    let heading = vec![0.0; n];
    ElasticaCurve { samples, heading }
}

/// `1/2 int h2^2 dt` by the trapezoidal rule over the samples.
pub fn elastic_energy(curve: &[ElasticaSample]) -> f64 {
    curve
        .windows(2)
        .map(|w| {
            let dt = w[1].t - w[0].t;
            0.25 * dt * (w[0].pendulum.h2.powi(2) + w[1].pendulum.h2.powi(2))
        })
        .sum()
}
