//! Built-in control systems.
//!
//! Drift-free systems are given as the list of their control vector fields;
//! systems with drift and control as a [`ControlledField`].

use nalgebra::DVector;

use crate::jet::Jet;
use crate::linear_ctrl::ControlledField;
use crate::vf_calculus::VectorField;

fn c(v: f64) -> Jet {
    Jet::constant(v)
}

/// Heisenberg group: `f1 = d/dx - y/2 d/dz`, `f2 = d/dy + x/2 d/dz`.
pub fn heisenberg() -> Vec<VectorField> {
    vec![
        VectorField::smooth(3, |q| vec![c(1.0), c(0.0), q[1].scale(-0.5)]),
        VectorField::smooth(3, |q| vec![c(0.0), c(1.0), q[0].scale(0.5)]),
    ]
}

/// Car fields on `R^2 x S^1`: forward motion and rotation.
fn car_fields() -> Vec<VectorField> {
    vec![
        VectorField::smooth(3, |q| vec![q[2].cos(), q[2].sin(), c(0.0)]),
        VectorField::smooth(3, |_| vec![c(0.0), c(0.0), c(1.0)]),
    ]
}

/// Dubins car: drift `f0 = (cos th, sin th, 0)` and steering `f1 = d/dth`.
pub fn dubins() -> Vec<VectorField> {
    car_fields()
}

/// Reeds-Shepp car: `V = (cos th, sin th, 0)`, `W = d/dth`.
pub fn reeds_shepp() -> Vec<VectorField> {
    car_fields()
}

/// Left-invariant frame of SE(2) in `(x, y, th)` coordinates.
pub fn se2() -> Vec<VectorField> {
    car_fields()
}

/// Engel group on `R^4_{x,y,z,v}`.
pub fn engel() -> Vec<VectorField> {
    vec![
        VectorField::smooth(4, |q| {
            let r2 = &(&q[0] * &q[0]) + &(&q[1] * &q[1]);
            vec![c(1.0), c(0.0), q[1].scale(-0.5), r2.scale(-0.5)]
        }),
        VectorField::smooth(4, |q| vec![c(0.0), c(1.0), q[0].scale(0.5), c(0.0)]),
    ]
}

/// Sphere rolling without slipping or twisting, embedded in `R^11`:
/// contact point `(x, y)` followed by the row-major entries of `R in SO(3)`,
/// with `R' = R * Omega(u, v)`.
pub fn rolling_sphere() -> Vec<VectorField> {
    // Omega_u = E31 - E13, Omega_v = E32 - E23
    fn field(dx: f64, dy: f64, a: usize, b: usize) -> VectorField {
        // R * (E_ab - E_ba): column b gets R[:, a], column a gets -R[:, b]
        VectorField::smooth(11, move |q| {
            let r = |i: usize, j: usize| &q[2 + 3 * i + j];
            let mut out = vec![c(dx), c(dy)];
            for i in 0..3 {
                for j in 0..3 {
                    let v = if j == b {
                        r(i, a).clone()
                    } else if j == a {
                        -r(i, b)
                    } else {
                        c(0.0)
                    };
                    out.push(v);
                }
            }
            out
        })
    }
    vec![field(1.0, 0.0, 2, 0), field(0.0, 1.0, 2, 1)]
}

/// `(x, y, R) = (0, 0, I)` in the rolling-sphere embedding.
pub fn rolling_sphere_origin() -> DVector<f64> {
    let mut q = DVector::zeros(11);
    q[2] = 1.0;
    q[6] = 1.0;
    q[10] = 1.0;
    q
}

/// Double integrator `x1' = x2, x2' = u`.
pub fn train() -> ControlledField {
    ControlledField::new(2, 1, |x, u| DVector::from_vec(vec![x[1], u[0]]))
}

/// Linear oscillator `x1' = x2, x2' = -x1 + u`.
pub fn oscillator() -> ControlledField {
    ControlledField::new(2, 1, |x, u| DVector::from_vec(vec![x[1], -x[0] + u[0]]))
}

/// Forced pendulum `x1' = x2, x2' = -sin x1 + u`.
pub fn pendulum() -> ControlledField {
    ControlledField::new(2, 1, |x, u| {
        DVector::from_vec(vec![x[1], -x[0].sin() + u[0]])
    })
}

/// Names accepted by [`fields_by_name`].
pub const FIELD_SYSTEMS: [&str; 6] = [
    "heisenberg",
    "dubins",
    "reeds-shepp",
    "se2",
    "engel",
    "rolling-sphere",
];

pub fn fields_by_name(name: &str) -> Option<Vec<VectorField>> {
    match name {
        "heisenberg" => Some(heisenberg()),
        "dubins" => Some(dubins()),
        "reeds-shepp" => Some(reeds_shepp()),
        "se2" => Some(se2()),
        "engel" => Some(engel()),
        "rolling-sphere" => Some(rolling_sphere()),
        _ => None,
    }
}

/// Default evaluation point for a named system.
pub fn default_point(name: &str) -> Option<DVector<f64>> {
    match name {
        "rolling-sphere" => Some(rolling_sphere_origin()),
        "engel" => Some(DVector::zeros(4)),
        "heisenberg" | "dubins" | "reeds-shepp" | "se2" => Some(DVector::zeros(3)),
        _ => None,
    }
}

/// Names accepted by [`controlled_by_name`].
pub const CONTROLLED_SYSTEMS: [&str; 3] = ["train", "oscillator", "pendulum"];

pub fn controlled_by_name(name: &str) -> Option<ControlledField> {
    match name {
        "train" => Some(train()),
        "oscillator" => Some(oscillator()),
        "pendulum" => Some(pendulum()),
        _ => None,
    }
}
