//! Time-optimal synthesis for the double integrator `x1' = x2, x2' = u, |u| <= 1`,
//! steering any state to the origin.
//!
//! The switching curve is `Gamma = {x1 = x2^2/2, x2 <= 0} U {x1 = -x2^2/2, x2 >= 0}`.
//! Below `Gamma` (and on its first branch) the optimal control is `+1`; above it
//! (and on the second branch) it is `-1`. Optimal trajectories switch at most once.

use serde::Serialize;

/// Relative tolerance for deciding that a state lies on `Gamma`.
pub const ON_CURVE_TOL: f64 = 1e-12;

/// Radius within which a state counts as the origin.
pub const ORIGIN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DIState {
    pub x1: f64,
    pub x2: f64,
}

impl DIState {
    pub fn new(x1: f64, x2: f64) -> Self {
        DIState { x1, x2 }
    }

    pub fn norm(&self) -> f64 {
        self.x1.hypot(self.x2)
    }

    /// State after applying the constant control `u` for time `t`.
    pub fn advance(&self, u: f64, t: f64) -> DIState {
        DIState {
            x1: self.x1 + self.x2 * t + 0.5 * u * t * t,
            x2: self.x2 + u * t,
        }
    }
}

/// Bang-bang plan: `u_first` on `[0, t_switch]`, then `-u_first` until `t_total`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DIPlan {
    pub u_first: i8,
    pub t_switch: f64,
    pub t_total: f64,
}

impl DIPlan {
    pub const AT_TARGET: DIPlan = DIPlan {
        u_first: 0,
        t_switch: 0.0,
        t_total: 0.0,
    };

    /// Control in effect at time `t` (the first arc owns its right endpoint).
    pub fn control_at(&self, t: f64) -> f64 {
        if t <= self.t_switch {
            self.u_first as f64
        } else {
            -self.u_first as f64
        }
    }

    /// State reached from `s` at time `t` in `[0, t_total]`.
    pub fn state_at(&self, s: DIState, t: f64) -> DIState {
        let u = self.u_first as f64;
        if t <= self.t_switch {
            s.advance(u, t)
        } else {
            s.advance(u, self.t_switch).advance(-u, t - self.t_switch)
        }
    }
}

fn on_branch(x1: f64, parabola: f64, x2: f64) -> bool {
    (x1 - parabola).abs() <= ON_CURVE_TOL * (x2 * x2).max(1.0)
}

/// Which side of `Gamma` the state is on, with the branches resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Region {
    Origin,
    /// `x1 = x2^2/2, x2 < 0`: ride `u = +1` into the origin.
    PlusBranch,
    /// `x1 = -x2^2/2, x2 > 0`: ride `u = -1` into the origin.
    MinusBranch,
    Below,
    Above,
}

fn region(s: DIState) -> Region {
    let DIState { x1, x2 } = s;
    if s.norm() <= ORIGIN_TOL {
        return Region::Origin;
    }
    let half_sq = 0.5 * x2 * x2;
    if x2 <= 0.0 && on_branch(x1, half_sq, x2) {
        return Region::PlusBranch;
    }
    if x2 >= 0.0 && on_branch(x1, -half_sq, x2) {
        return Region::MinusBranch;
    }
    // Gamma is the graph x1 = -x2 |x2| / 2
    if x1 + 0.5 * x2 * x2.abs() > 0.0 {
        Region::Above
    } else {
        Region::Below
    }
}

/// Optimal feedback `u(x1, x2)`; 0 only at the origin.
pub fn feedback(s: DIState) -> i8 {
    match region(s) {
        Region::Origin => 0,
        Region::PlusBranch | Region::Below => 1,
        Region::MinusBranch | Region::Above => -1,
    }
}

/// Closed-form minimum-time plan from `s`.
pub fn min_time(s: DIState) -> DIPlan {
    let DIState { x1, x2 } = s;
    match region(s) {
        Region::Origin => DIPlan::AT_TARGET,
        Region::PlusBranch | Region::MinusBranch => {
            let t = x2.abs();
            DIPlan {
                u_first: feedback(s),
                t_switch: t,
                t_total: t,
            }
        }
        Region::Above => {
            // u = -1 keeps x1 + x2^2/2 constant; switch on x1 = x2^2/2, x2 < 0
            let v = (x1 + 0.5 * x2 * x2).sqrt();
            let t_switch = x2 + v;
            DIPlan {
                u_first: -1,
                t_switch,
                t_total: t_switch + v,
            }
        }
        Region::Below => {
            // u = +1 keeps x1 - x2^2/2 constant; switch on x1 = -x2^2/2, x2 > 0
            let v = (0.5 * x2 * x2 - x1).sqrt();
            let t_switch = v - x2;
            DIPlan {
                u_first: 1,
                t_switch,
                t_total: t_switch + v,
            }
        }
    }
}

/// `n_samples` states at uniform times along `plan` starting from `s`.
pub fn simulate(s: DIState, plan: &DIPlan, n_samples: usize) -> Vec<DIState> {
    let n = n_samples.max(2);
    (0..n)
        .map(|i| {
            let t = plan.t_total * i as f64 / (n - 1) as f64;
            plan.state_at(s, t)
        })
        .collect()
}
