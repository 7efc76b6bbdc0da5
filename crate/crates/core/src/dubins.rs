//! Shortest paths of the Dubins car `x' = cos th, y' = sin th, th' = u, |u| <= 1`.
//!
//! Candidates are the six words built from unit-circle arcs (`L`, `R`) and
//! straight segments (`S`): four `CSC` words obtained from common tangents of
//! the start and goal circles, and two `CCC` words whose middle arc must turn
//! through an angle in `[pi, 2 pi)`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::numeric::{mod_two_pi, normalize_angle};

/// Two candidate lengths closer than this are treated as equal.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlanarPose {
    pub x: f64,
    pub y: f64,
    /// Heading in `(-pi, pi]`.
    pub theta: f64,
}

impl PlanarPose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        PlanarPose {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }

    /// Reflection across the x-axis.
    pub fn mirrored(&self) -> Self {
        PlanarPose::new(self.x, -self.y, -self.theta)
    }

    pub fn distance_to(&self, other: &PlanarPose) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    /// Pose after moving for arclength `s` with constant curvature `kappa`.
    pub fn advance(&self, kappa: f64, s: f64) -> PlanarPose {
        if kappa == 0.0 {
            let (sin, cos) = self.theta.sin_cos();
            return PlanarPose::new(self.x + s * cos, self.y + s * sin, self.theta);
        }
        let th1 = self.theta + kappa * s;
        PlanarPose::new(
            self.x + (th1.sin() - self.theta.sin()) / kappa,
            self.y + (self.theta.cos() - th1.cos()) / kappa,
            th1,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Segment {
    L,
    S,
    R,
}

impl Segment {
    pub fn curvature(self) -> f64 {
        match self {
            Segment::L => 1.0,
            Segment::S => 0.0,
            Segment::R => -1.0,
        }
    }

    fn mirrored(self) -> Segment {
        match self {
            Segment::L => Segment::R,
            Segment::S => Segment::S,
            Segment::R => Segment::L,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum DubinsWord {
    Lsl,
    Rsr,
    Lsr,
    Rsl,
    Lrl,
    Rlr,
}

impl DubinsWord {
    /// All words in tie-breaking order.
    pub const ALL: [DubinsWord; 6] = [
        DubinsWord::Lsl,
        DubinsWord::Rsr,
        DubinsWord::Lsr,
        DubinsWord::Rsl,
        DubinsWord::Lrl,
        DubinsWord::Rlr,
    ];

    pub fn segments(self) -> [Segment; 3] {
        use Segment::*;
        match self {
            DubinsWord::Lsl => [L, S, L],
            DubinsWord::Rsr => [R, S, R],
            DubinsWord::Lsr => [L, S, R],
            DubinsWord::Rsl => [R, S, L],
            DubinsWord::Lrl => [L, R, L],
            DubinsWord::Rlr => [R, L, R],
        }
    }

    pub fn is_csc(self) -> bool {
        self.segments()[1] == Segment::S
    }

    /// Word with left and right turns exchanged.
    pub fn mirrored(self) -> DubinsWord {
        let m = self.segments().map(Segment::mirrored);
        DubinsWord::ALL
            .into_iter()
            .find(|w| w.segments() == m)
            .unwrap_or(self)
    }
}

impl fmt::Display for DubinsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DubinsWord::Lsl => "LSL",
            DubinsWord::Rsr => "RSR",
            DubinsWord::Lsr => "LSR",
            DubinsWord::Rsl => "RSL",
            DubinsWord::Lrl => "LRL",
            DubinsWord::Rlr => "RLR",
        };
        f.write_str(s)
    }
}

impl FromStr for DubinsWord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DubinsWord::ALL
            .into_iter()
            .find(|w| w.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown Dubins word {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DubinsPath {
    pub word: DubinsWord,
    /// Arc angles (radians) for turning segments, length for the straight one.
    pub segment_params: [f64; 3],
    pub length: f64,
}

impl DubinsPath {
    fn new(word: DubinsWord, segment_params: [f64; 3]) -> Self {
        DubinsPath {
            word,
            segment_params,
            length: segment_params.iter().sum(),
        }
    }

    /// Pose at arclength `s` along the path started at `q0`.
    pub fn pose_at(&self, q0: &PlanarPose, s: f64) -> PlanarPose {
        let mut pose = *q0;
        let mut remaining = s.clamp(0.0, self.length);
        for (seg, &len) in self.word.segments().iter().zip(&self.segment_params) {
            let step = remaining.min(len);
            pose = pose.advance(seg.curvature(), step);
            remaining -= step;
            if remaining <= 0.0 {
                break;
            }
        }
        pose
    }

    pub fn endpoint(&self, q0: &PlanarPose) -> PlanarPose {
        let mut pose = *q0;
        for (seg, &len) in self.word.segments().iter().zip(&self.segment_params) {
            pose = pose.advance(seg.curvature(), len);
        }
        pose
    }
}

/// Center of the unit turning circle on side `turn` (+1 left, -1 right) of `q`.
fn circle_center(q: &PlanarPose, turn: f64) -> (f64, f64) {
    let (sin, cos) = q.theta.sin_cos();
    (q.x - turn * sin, q.y + turn * cos)
}

/// Angle swept turning from heading `from` to heading `to` in direction `turn`.
fn sweep(from: f64, to: f64, turn: f64) -> f64 {
    mod_two_pi(turn * (to - from))
}

fn solve_csc(q0: &PlanarPose, q1: &PlanarPose, word: DubinsWord) -> Option<DubinsPath> {
    let [first, _, last] = word.segments();
    let (k0, k1) = (first.curvature(), last.curvature());
    let c0 = circle_center(q0, k0);
    let c1 = circle_center(q1, k1);
    let (dx, dy) = (c1.0 - c0.0, c1.1 - c0.1);
    let dist = dx.hypot(dy);
    let (heading, straight) = if k0 == k1 {
        // outer tangent, parallel to the line of centers
        if dist == 0.0 {
            (q0.theta, 0.0)
        } else {
            (dy.atan2(dx), dist)
        }
    } else {
        // inner tangent: |c1 - c0|^2 = L^2 + 4
        if dist < 2.0 {
            return None;
        }
        let straight = (dist * dist - 4.0).max(0.0).sqrt();
        (dy.atan2(dx) + k0 * 2f64.atan2(straight), straight)
    };
    Some(DubinsPath::new(
        word,
        [
            sweep(q0.theta, heading, k0),
            straight,
            sweep(heading, q1.theta, k1),
        ],
    ))
}

fn solve_ccc(q0: &PlanarPose, q1: &PlanarPose, word: DubinsWord) -> Option<DubinsPath> {
    let k = word.segments()[0].curvature();
    let c0 = circle_center(q0, k);
    let c2 = circle_center(q1, k);
    let (dx, dy) = (c2.0 - c0.0, c2.1 - c0.1);
    let dist = dx.hypot(dy);
    if dist > 4.0 {
        return None;
    }
    let phi = if dist == 0.0 { 0.0 } else { dy.atan2(dx) };
    let spread = (dist / 4.0).min(1.0).acos();
    let mut best: Option<DubinsPath> = None;
    for side in [1.0, -1.0] {
        // middle circle touches both outer circles
        let gamma = phi + side * spread;
        let c1 = (c0.0 + 2.0 * gamma.cos(), c0.1 + 2.0 * gamma.sin());
        let m1 = ((c0.0 + c1.0) / 2.0, (c0.1 + c1.1) / 2.0);
        let m2 = ((c1.0 + c2.0) / 2.0, (c1.1 + c2.1) / 2.0);
        // heading at a point p of a circle with center c turning in direction k
        let tangent =
            |p: (f64, f64), c: (f64, f64), k: f64| (p.1 - c.1).atan2(p.0 - c.0) + k * PI / 2.0;
        let h1 = tangent(m1, c0, k);
        let h2 = tangent(m2, c2, k);
        let params = [
            sweep(q0.theta, h1, k),
            sweep(h1, h2, -k),
            sweep(h2, q1.theta, k),
        ];
        if !(PI..TAU).contains(&params[1]) {
            continue;
        }
        let candidate = DubinsPath::new(word, params);
        if best.is_none_or(|b| candidate.length < b.length) {
            best = Some(candidate);
        }
    }
    best
}

/// Path of the given word from `q0` to `q1`, or `None` when geometrically infeasible.
pub fn solve_word(q0: &PlanarPose, q1: &PlanarPose, word: DubinsWord) -> Option<DubinsPath> {
    if word.is_csc() {
        solve_csc(q0, q1, word)
    } else {
        solve_ccc(q0, q1, word)
    }
}

/// Shortest of the feasible words; ties go to the earlier word in [`DubinsWord::ALL`].
pub fn shortest_path(q0: &PlanarPose, q1: &PlanarPose) -> DubinsPath {
    let mut best: Option<DubinsPath> = None;
    for word in DubinsWord::ALL {
        if let Some(p) = solve_word(q0, q1, word) {
            if best.is_none_or(|b| p.length < b.length - TIE_TOL) {
                best = Some(p);
            }
        }
    }
    // LSL and RSR always exist
    best.expect("outer tangents always exist")
}

/// `n` poses at uniform arclength along `path`, from `q0` to the path's end.
pub fn sample_path(path: &DubinsPath, q0: &PlanarPose, n: usize) -> Vec<PlanarPose> {
    let n = n.max(2);
    let mut out: Vec<PlanarPose> = (0..n - 1)
        .map(|i| path.pose_at(q0, path.length * i as f64 / (n - 1) as f64))
        .collect();
    out.push(path.endpoint(q0));
    out
}
