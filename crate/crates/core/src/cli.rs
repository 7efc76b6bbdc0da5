//! Command-line front end.
//!
//! Every subcommand prints one [`OutputEnvelope`] as pretty JSON. `elastica`
//! and `hb-dist` can print CSV instead. Exit codes: 0 on success, 1 when a
//! solver fails (the envelope then carries an `error` object), 2 on usage
//! errors (message on standard error).

use std::collections::BTreeMap;
use std::fs::File;
use std::path::PathBuf;

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bangbang::{self, DIState};
use crate::catalog;
use crate::dubins::{self, DubinsWord, PlanarPose};
use crate::elastica::{self, ElasticaParams};
use crate::heisenberg::{self, GeodesicParam, HPoint};
use crate::linear_ctrl::{self, LinearSystem};
use crate::vf_calculus::{self, BracketTree};
use crate::Error;

/// Environment variable selecting the default output format.
pub const FORMAT_ENV: &str = "GEOCTRL_FORMAT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Result of one invocation: exit code and the text for each stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorObject {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub version: String,
    pub tolerances: BTreeMap<String, Value>,
}

/// Top-level JSON document. Object keys inside `inputs` and `results` are
/// sorted, so identical inputs give identical bytes.
#[derive(Clone, Debug, Serialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub inputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorObject>,
    pub meta: Meta,
}

#[derive(Parser, Debug)]
#[command(name = "geoctrl", version, about = "Geometric control toolkit")]
struct Cli {
    /// Output format (overrides GEOCTRL_FORMAT).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kalman rank test of x' = Ax + Bu, optionally with the Gramian rank.
    Kalman(KalmanArgs),
    /// Linearize a catalog system at an equilibrium.
    Linearize(LinearizeArgs),
    /// Lie bracket of two catalog fields at a point.
    Bracket(BracketArgs),
    /// Rank of the Lie algebra generated by a catalog system.
    Larc(LarcArgs),
    /// Frobenius test on random sample points.
    Involutive(InvolutiveArgs),
    /// Time-optimal plan for the double integrator.
    Train(TrainArgs),
    /// Shortest Dubins path between two poses.
    Dubins(DubinsArgs),
    /// Integrate an elastica extremal.
    Elastica(ElasticaArgs),
    /// Heisenberg geodesic from the origin.
    HbExp(HbExpArgs),
    /// Heisenberg distance from the origin.
    HbDist(HbDistArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Kalman(_) => "kalman",
            Command::Linearize(_) => "linearize",
            Command::Bracket(_) => "bracket",
            Command::Larc(_) => "larc",
            Command::Involutive(_) => "involutive",
            Command::Train(_) => "train",
            Command::Dubins(_) => "dubins",
            Command::Elastica(_) => "elastica",
            Command::HbExp(_) => "hb-exp",
            Command::HbDist(_) => "hb-dist",
        }
    }

    fn supports_csv(&self) -> bool {
        matches!(self, Command::Elastica(_) | Command::HbDist(_))
    }
}

/// Matrix given as a JSON array of rows.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
struct Rows(Vec<Vec<f64>>);

/// Comma-separated numbers.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
struct List(Vec<f64>);

impl List {
    fn to_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }
}

fn parse_finite(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("malformed number {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("number must be finite, got {s:?}"))
    }
}

fn parse_list(s: &str) -> Result<List, String> {
    if s.trim().is_empty() {
        return Ok(List(Vec::new()));
    }
    s.split(',')
        .map(parse_finite)
        .collect::<Result<_, _>>()
        .map(List)
}

fn parse_pose(s: &str) -> Result<List, String> {
    let l = parse_list(s)?;
    if l.0.len() != 3 {
        return Err(format!("expected x,y,theta, got {} values", l.0.len()));
    }
    Ok(l)
}

fn parse_rows(s: &str) -> Result<Rows, String> {
    let rows: Vec<Vec<f64>> =
        serde_json::from_str(s).map_err(|e| format!("malformed matrix {s:?}: {e}"))?;
    Ok(Rows(rows))
}

#[derive(Args, Debug, Serialize)]
struct KalmanArgs {
    /// State matrix, e.g. "[[0,1],[0,0]]".
    #[arg(long = "A", value_parser = parse_rows, allow_hyphen_values = true)]
    #[serde(rename = "A")]
    a: Rows,
    /// Input matrix, e.g. "[[0],[1]]".
    #[arg(long = "B", value_parser = parse_rows, allow_hyphen_values = true)]
    #[serde(rename = "B")]
    b: Rows,
    /// Also compute the rank of the Gramian on [0, T].
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    gramian: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct LinearizeArgs {
    #[arg(long, value_parser = PossibleValuesParser::new(catalog::CONTROLLED_SYSTEMS))]
    system: String,
    /// Equilibrium state, comma-separated (default: origin).
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    x0: Option<List>,
    /// Equilibrium control, comma-separated (default: zero).
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    u0: Option<List>,
}

#[derive(Args, Debug, Serialize)]
struct BracketArgs {
    #[arg(long, value_parser = PossibleValuesParser::new(catalog::FIELD_SYSTEMS))]
    system: String,
    /// Index of the first field.
    #[arg(long, default_value_t = 0)]
    v: usize,
    /// Index of the second field.
    #[arg(long, default_value_t = 1)]
    w: usize,
    /// Evaluation point (default: the system's base point).
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    at: Option<List>,
    /// Also estimate the bracket from the flow commutator at this time.
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    flows: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct LarcArgs {
    #[arg(long, value_parser = PossibleValuesParser::new(catalog::FIELD_SYSTEMS))]
    system: String,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    at: Option<List>,
    #[arg(long, default_value_t = vf_calculus::DEFAULT_MAX_DEPTH)]
    depth: usize,
}

#[derive(Args, Debug, Serialize)]
struct InvolutiveArgs {
    #[arg(long, value_parser = PossibleValuesParser::new(catalog::FIELD_SYSTEMS))]
    system: String,
    /// Number of random sample points around the base point.
    #[arg(long, default_value_t = 8)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct TrainArgs {
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    x1: f64,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    x2: f64,
    /// Number of sampled states along the optimal trajectory.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct DubinsArgs {
    /// Start pose x,y,theta.
    #[arg(long, value_parser = parse_pose, allow_hyphen_values = true)]
    from: List,
    /// Goal pose x,y,theta.
    #[arg(long, value_parser = parse_pose, allow_hyphen_values = true)]
    to: List,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct ElasticaArgs {
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    r: f64,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    beta0: f64,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    h20: f64,
    #[arg(long, default_value_t = 1.0, value_parser = parse_finite, allow_hyphen_values = true)]
    length: f64,
    /// Integration steps (default: step close to 1e-3).
    #[arg(long)]
    steps: Option<usize>,
    /// Emit every k-th sample (the last one is always emitted).
    #[arg(long, default_value_t = 1)]
    stride: usize,
}

#[derive(Args, Debug, Serialize)]
struct HbExpArgs {
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    theta0: f64,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    h3: f64,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    t: f64,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct HbDistArgs {
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true,
          required_unless_present = "batch", conflicts_with = "batch")]
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true,
          required_unless_present = "batch", conflicts_with = "batch")]
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<f64>,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true,
          required_unless_present = "batch", conflicts_with = "batch")]
    #[serde(skip_serializing_if = "Option::is_none")]
    z: Option<f64>,
    /// CSV file with columns x,y,z (header optional).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    batch: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Solver(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Solver(e)
    }
}

enum Payload {
    Json(Value),
    /// CSV-capable payload: JSON results plus a header and rows.
    Table {
        json: Value,
        header: Vec<&'static str>,
        rows: Vec<Vec<f64>>,
    },
}

fn tolerances(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn command_tolerances(cmd: &Command) -> BTreeMap<String, Value> {
    let eps = json!(f64::EPSILON);
    match cmd {
        Command::Kalman(_) => tolerances(&[
            ("rank_relative_eps", eps),
            ("gramian_panels", json!(linear_ctrl::GRAMIAN_PANELS)),
        ]),
        Command::Linearize(_) => tolerances(&[
            ("equilibrium", json!(linear_ctrl::EQUILIBRIUM_TOL)),
            ("rank_relative_eps", eps),
        ]),
        Command::Bracket(_) => {
            tolerances(&[("flow_steps_per_leg", json!(vf_calculus::FLOW_STEPS_PER_LEG))])
        }
        Command::Larc(_) => tolerances(&[("rank_relative_eps", eps)]),
        Command::Involutive(_) => {
            tolerances(&[("involutivity", json!(vf_calculus::INVOLUTIVITY_TOL))])
        }
        Command::Train(_) => tolerances(&[
            ("on_curve", json!(bangbang::ON_CURVE_TOL)),
            ("origin", json!(bangbang::ORIGIN_TOL)),
        ]),
        Command::Dubins(_) => tolerances(&[("tie", json!(dubins::TIE_TOL))]),
        Command::Elastica(_) => tolerances(&[
            ("regime", json!(elastica::REGIME_TOL)),
            ("default_step", json!(elastica::DEFAULT_STEP)),
        ]),
        Command::HbExp(_) | Command::HbDist(_) => tolerances(&[
            ("series_switch", json!(heisenberg::SERIES_SWITCH)),
            ("p_bracket_eps", json!(heisenberg::P_EPS)),
            ("p_bisection_tol", json!(heisenberg::P_TOL)),
        ]),
    }
}

fn inputs_of(cmd: &Command) -> Value {
    let v = match cmd {
        Command::Kalman(a) => serde_json::to_value(a),
        Command::Linearize(a) => serde_json::to_value(a),
        Command::Bracket(a) => serde_json::to_value(a),
        Command::Larc(a) => serde_json::to_value(a),
        Command::Involutive(a) => serde_json::to_value(a),
        Command::Train(a) => serde_json::to_value(a),
        Command::Dubins(a) => serde_json::to_value(a),
        Command::Elastica(a) => serde_json::to_value(a),
        Command::HbExp(a) => serde_json::to_value(a),
        Command::HbDist(a) => serde_json::to_value(a),
    };
    v.unwrap_or(Value::Null)
}

fn vec_of(v: &DVector<f64>) -> Vec<f64> {
    v.iter().copied().collect()
}

fn fields_for(system: &str) -> Vec<vf_calculus::VectorField> {
    // names are restricted by the argument parser
    catalog::fields_by_name(system).unwrap_or_default()
}

fn point_for(system: &str, at: &Option<List>) -> Result<DVector<f64>, Failure> {
    let base = catalog::default_point(system).unwrap_or_else(|| DVector::zeros(0));
    match at {
        None => Ok(base),
        Some(l) if l.0.len() == base.len() => Ok(l.to_vector()),
        Some(l) => Err(Failure::Usage(format!(
            "--at for {system} needs {} coordinates, got {}",
            base.len(),
            l.0.len()
        ))),
    }
}

fn kalman(a: &KalmanArgs) -> Result<Payload, Failure> {
    let sys = LinearSystem::from_rows(&a.a.0, &a.b.0)?;
    let report = linear_ctrl::kalman_test(&sys);
    let mut out = json!({
        "rank": report.rank,
        "controllable": report.controllable,
        "singular_values": report.singular_values,
        "state_dim": sys.state_dim(),
    });
    if let Some(t) = a.gramian {
        out["gramian_rank"] = json!(linear_ctrl::gramian_rank(&sys, t)?);
    }
    Ok(Payload::Json(out))
}

fn linearize(a: &LinearizeArgs) -> Result<Payload, Failure> {
    let field = catalog::controlled_by_name(&a.system)
        .ok_or_else(|| Failure::Usage(format!("unknown system {:?}", a.system)))?;
    let x0 =
        a.x0.as_ref()
            .map_or_else(|| DVector::zeros(field.state_dim()), List::to_vector);
    let u0 =
        a.u0.as_ref()
            .map_or_else(|| DVector::zeros(field.input_dim()), List::to_vector);
    let sys = linear_ctrl::linearize(&field, &x0, &u0)?;
    let report = linear_ctrl::kalman_test(&sys);
    Ok(Payload::Json(json!({
        "A": linear_ctrl::matrix_to_rows(sys.a()),
        "B": linear_ctrl::matrix_to_rows(sys.b()),
        "rank": report.rank,
        "controllable": report.controllable,
    })))
}

fn bracket(a: &BracketArgs) -> Result<Payload, Failure> {
    let fields = fields_for(&a.system);
    for i in [a.v, a.w] {
        if i >= fields.len() {
            return Err(Failure::Usage(format!(
                "{} has fields 0..{}, got index {i}",
                a.system,
                fields.len() - 1
            )));
        }
    }
    let q = point_for(&a.system, &a.at)?;
    let tree = BracketTree::Bracket(
        Box::new(BracketTree::Field(a.v)),
        Box::new(BracketTree::Field(a.w)),
    );
    let value = vf_calculus::bracket(&fields[a.v], &fields[a.w], &q)?;
    let mut out = json!({
        "bracket": tree.to_string(),
        "value": vec_of(&value),
    });
    if let Some(t) = a.flows {
        let est = vf_calculus::bracket_by_flows(&fields[a.v], &fields[a.w], &q, t)?;
        out["flow_estimate"] = json!(vec_of(&est));
        out["flow_error"] = json!((est - &value).norm());
    }
    Ok(Payload::Json(out))
}

fn larc(a: &LarcArgs) -> Result<Payload, Failure> {
    let fields = fields_for(&a.system);
    let q = point_for(&a.system, &a.at)?;
    let report = vf_calculus::larc_rank(&fields, &q, a.depth)?;
    let basis: Vec<String> = report.basis.iter().map(|t| t.to_string()).collect();
    Ok(Payload::Json(json!({
        "rank": report.rank,
        "dim": report.dim,
        "full_rank": report.full_rank(),
        "full_rank_depth": report.full_rank_depth,
        "rank_by_depth": report.rank_by_depth,
        "basis": basis,
    })))
}

fn involutive(a: &InvolutiveArgs) -> Result<Payload, Failure> {
    let fields = fields_for(&a.system);
    let base = point_for(&a.system, &None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let points: Vec<DVector<f64>> = (0..a.points)
        .map(|_| base.map(|b| b + rng.random_range(-1.0..1.0)))
        .collect();
    let result = vf_calculus::is_involutive(&fields, &points)?;
    let echoed: Vec<Vec<f64>> = points.iter().map(vec_of).collect();
    Ok(Payload::Json(json!({
        "involutive": result,
        "points": echoed,
    })))
}

fn train(a: &TrainArgs) -> Result<Payload, Failure> {
    let s = DIState::new(a.x1, a.x2);
    let plan = bangbang::min_time(s);
    let mut out = json!({
        "feedback": bangbang::feedback(s),
        "u_first": plan.u_first,
        "t_switch": plan.t_switch,
        "t_total": plan.t_total,
    });
    if let Some(n) = a.samples {
        let n = n.max(2);
        let states = bangbang::simulate(s, &plan, n);
        let samples: Vec<Value> = states
            .iter()
            .enumerate()
            .map(|(i, st)| {
                let t = plan.t_total * i as f64 / (n - 1) as f64;
                json!({"t": t, "x1": st.x1, "x2": st.x2})
            })
            .collect();
        out["samples"] = json!(samples);
    }
    Ok(Payload::Json(out))
}

fn pose_of(l: &List) -> PlanarPose {
    PlanarPose::new(l.0[0], l.0[1], l.0[2])
}

fn dubins(a: &DubinsArgs) -> Result<Payload, Failure> {
    let q0 = pose_of(&a.from);
    let q1 = pose_of(&a.to);
    let path = dubins::shortest_path(&q0, &q1);
    let candidates: Vec<Value> = DubinsWord::ALL
        .iter()
        .filter_map(|&w| dubins::solve_word(&q0, &q1, w))
        .map(|p| json!({"word": p.word.to_string(), "length": p.length}))
        .collect();
    let mut out = json!({
        "word": path.word.to_string(),
        "segment_params": path.segment_params,
        "length": path.length,
        "candidates": candidates,
    });
    if let Some(n) = a.samples {
        let poses = dubins::sample_path(&path, &q0, n);
        out["samples"] = json!(poses);
    }
    Ok(Payload::Json(out))
}

fn elastica(a: &ElasticaArgs) -> Result<Payload, Failure> {
    if a.r < 0.0 {
        return Err(Failure::Usage("--r must be nonnegative".into()));
    }
    if a.length <= 0.0 {
        return Err(Failure::Usage("--length must be positive".into()));
    }
    if a.stride == 0 {
        return Err(Failure::Usage("--stride must be at least 1".into()));
    }
    let p = ElasticaParams::new(a.r, a.beta0, a.h20, a.length);
    let steps = a.steps.unwrap_or_else(|| p.default_steps()).max(1);
    let curve = elastica::integrate_extremal(&p, steps);
    let last = curve.samples.len() - 1;
    let rows: Vec<Vec<f64>> = curve
        .samples
        .iter()
        .zip(&curve.heading)
        .enumerate()
        .filter(|(i, _)| i % a.stride == 0 || *i == last)
        .map(|(_, (s, &th))| vec![s.t, s.pose.x, s.pose.y, th, s.pendulum.beta, s.pendulum.h2])
        .collect();
    if let Some(bad) = rows.iter().find(|r| r.iter().any(|v| !v.is_finite())) {
        return Err(Error::Diverged { point: bad.clone() }.into());
    }
    let header = vec!["t", "x", "y", "theta", "beta", "h2"];
    let samples: Vec<Value> = rows
        .iter()
        .map(|r| {
            let obj: serde_json::Map<String, Value> = header
                .iter()
                .zip(r)
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let json = json!({
        "regime": elastica::classify(&p),
        "energy": p.energy(),
        "steps": steps,
        "bending_energy": elastica::elastic_energy(&curve.samples),
        "samples": samples,
    });
    Ok(Payload::Table { json, header, rows })
}

fn hb_exp(a: &HbExpArgs) -> Result<Payload, Failure> {
    if a.t < 0.0 {
        return Err(Failure::Usage("--t must be nonnegative".into()));
    }
    let g = GeodesicParam::new(a.theta0, a.h3, a.t);
    let end = heisenberg::exp_map(&g);
    let conj = heisenberg::conjugate_time(a.h3);
    let mut out = json!({
        "endpoint": end,
        "conjugate_time": finite_or_null(conj),
        "maxwell_time": finite_or_null(heisenberg::maxwell_time(a.h3)),
        "optimal": a.t <= heisenberg::maxwell_time(a.h3),
    });
    if let Some(n) = a.samples {
        out["samples"] = json!(heisenberg::sample_geodesic(&g, n));
    }
    Ok(Payload::Json(out))
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn read_points(path: &PathBuf) -> Result<Vec<HPoint>, Failure> {
    let file = File::open(path)
        .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut points = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let fields: Vec<&str> = record.iter().collect();
        if i == 0
            && fields
                .iter()
                .map(|f| f.to_ascii_lowercase())
                .eq(["x", "y", "z"])
        {
            continue;
        }
        let line = i + 1;
        if fields.len() != 3 {
            return Err(Failure::Usage(format!(
                "{} line {line}: expected x,y,z, got {} fields",
                path.display(),
                fields.len()
            )));
        }
        let vals = fields
            .iter()
            .map(|f| parse_finite(f))
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| Failure::Usage(format!("{} line {line}: {e}", path.display())))?;
        points.push(HPoint::new(vals[0], vals[1], vals[2]));
    }
    Ok(points)
}

fn hb_dist(a: &HbDistArgs) -> Result<Payload, Failure> {
    let header = vec!["x", "y", "z", "d"];
    if let Some(path) = &a.batch {
        let points = read_points(path)?;
        let dists: Vec<f64> = points
            .par_iter()
            .map(|q| heisenberg::solve_geodesic(q).distance)
            .collect();
        let rows: Vec<Vec<f64>> = points
            .iter()
            .zip(&dists)
            .map(|(q, &d)| vec![q.x, q.y, q.z, d])
            .collect();
        let table: Vec<Value> = rows
            .iter()
            .map(|r| json!({"x": r[0], "y": r[1], "z": r[2], "d": r[3]}))
            .collect();
        return Ok(Payload::Table {
            json: json!({ "rows": table }),
            header,
            rows,
        });
    }
    let (Some(x), Some(y), Some(z)) = (a.x, a.y, a.z) else {
        return Err(Failure::Usage("need --x, --y and --z, or --batch".into()));
    };
    let q = HPoint::new(x, y, z);
    let res = heisenberg::solve_geodesic(&q);
    let rows = vec![vec![x, y, z, res.distance]];
    Ok(Payload::Table {
        json: serde_json::to_value(&res).unwrap_or(Value::Null),
        header,
        rows,
    })
}

fn dispatch(cmd: &Command) -> Result<Payload, Failure> {
    match cmd {
        Command::Kalman(a) => kalman(a),
        Command::Linearize(a) => linearize(a),
        Command::Bracket(a) => bracket(a),
        Command::Larc(a) => larc(a),
        Command::Involutive(a) => involutive(a),
        Command::Train(a) => train(a),
        Command::Dubins(a) => dubins(a),
        Command::Elastica(a) => elastica(a),
        Command::HbExp(a) => hb_exp(a),
        Command::HbDist(a) => hb_dist(a),
    }
}

fn to_csv(header: &[&str], rows: &[Vec<f64>]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| e.to_string())?;
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string()))
            .map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn to_json(env: &OutputEnvelope) -> String {
    let mut s = serde_json::to_string_pretty(env).unwrap_or_default();
    s.push('\n');
    s
}

fn usage(msg: impl Into<String>) -> CliOutput {
    let mut stderr = msg.into();
    if !stderr.ends_with('\n') {
        stderr.push('\n');
    }
    CliOutput {
        code: 2,
        stdout: String::new(),
        stderr,
    }
}

/// Runs the CLI with `argv` (program name first), reading the default format
/// from `GEOCTRL_FORMAT`.
pub fn run<I, S>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let env = std::env::var(FORMAT_ENV).ok();
    run_with_env(argv, env.as_deref())
}

/// Like [`run`], with the `GEOCTRL_FORMAT` value passed in explicitly.
pub fn run_with_env<I, S>(argv: I, env_format: Option<&str>) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput {
                    code: e.exit_code(),
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutput {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let env_choice = match env_format {
        None | Some("") => None,
        Some(v) => match Format::from_str(v, true) {
            Ok(f) => Some(f),
            Err(_) => return usage(format!("{FORMAT_ENV}: unknown format {v:?}")),
        },
    };
    let cmd = &cli.command;
    let format = match (cli.format, env_choice) {
        (Some(Format::Csv), _) if !cmd.supports_csv() => {
            return usage(format!("{} has no CSV output", cmd.name()));
        }
        (Some(f), _) => f,
        // the environment only sets a default; fall back to JSON where CSV is unavailable
        (None, Some(Format::Csv)) if cmd.supports_csv() => Format::Csv,
        _ => Format::Json,
    };

    let mut envelope = OutputEnvelope {
        command: cmd.name().to_string(),
        inputs: inputs_of(cmd),
        results: None,
        error: None,
        meta: Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: command_tolerances(cmd),
        },
    };
    match dispatch(cmd) {
        Err(Failure::Usage(msg)) => usage(format!("error: {msg}")),
        Err(Failure::Solver(e)) => {
            let message = e.to_string();
            envelope.error = Some(ErrorObject {
                kind: e.kind().to_string(),
                message: message.clone(),
            });
            CliOutput {
                code: 1,
                stdout: to_json(&envelope),
                stderr: format!("error: {message}\n"),
            }
        }
        Ok(payload) => {
            let stdout = match (payload, format) {
                (Payload::Table { header, rows, .. }, Format::Csv) => {
                    match to_csv(&header, &rows) {
                        Ok(s) => s,
                        Err(e) => return usage(format!("error: {e}")),
                    }
                }
                (Payload::Table { json, .. }, Format::Json) | (Payload::Json(json), _) => {
                    envelope.results = Some(json);
                    to_json(&envelope)
                }
            };
            CliOutput {
                code: 0,
                stdout,
                stderr: String::new(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(args: &[&str]) -> Value {
        let mut argv = vec!["geoctrl"];
        argv.extend_from_slice(args);
        let out = run_with_env(argv, None);
        assert_eq!(out.code, 0, "stderr: {}", out.stderr);
        serde_json::from_str(&out.stdout).unwrap()
    }

    fn code(args: &[&str], env: Option<&str>) -> i32 {
        let mut argv = vec!["geoctrl"];
        argv.extend_from_slice(args);
        run_with_env(argv, env).code
    }

    #[test]
    fn kalman_train_fixture() {
        let v = ok(&["kalman", "--A", "[[0,1],[0,0]]", "--B", "[[0],[1]]"]);
        assert_eq!(v["command"], "kalman");
        assert_eq!(v["results"]["controllable"], true);
        assert_eq!(v["results"]["rank"], 2);
        assert_eq!(v["inputs"]["A"], json!([[0.0, 1.0], [0.0, 0.0]]));
    }

    #[test]
    fn hb_dist_on_the_axis() {
        let v = ok(&["hb-dist", "--x", "0", "--y", "0", "--z", "6.283185307"]);
        let d = v["results"]["distance"].as_f64().unwrap();
        assert!((d - std::f64::consts::TAU).abs() < 1e-9);
        assert_eq!(v["results"]["rotation_family"], true);
    }

    #[test]
    fn train_fixture() {
        let v = ok(&["train", "--x1", "1", "--x2", "0"]);
        assert_eq!(v["results"]["u_first"], -1);
        assert!((v["results"]["t_total"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn negative_values_parse() {
        let v = ok(&["dubins", "--from", "-1,0,0", "--to", "3,-2,-1.5"]);
        assert!(v["results"]["length"].as_f64().unwrap() > 0.0);
        let v = ok(&["train", "--x1", "-1", "--x2", "-0.5"]);
        assert_eq!(v["results"]["feedback"], 1);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(code(&["frobnicate"], None), 2);
        assert_eq!(code(&["train", "--x1", "abc", "--x2", "0"], None), 2);
        assert_eq!(code(&["train", "--x1", "1"], None), 2);
        assert_eq!(code(&["kalman", "--A", "[[0,1]", "--B", "[[1]]"], None), 2);
        assert_eq!(code(&["larc", "--system", "unicycle"], None), 2);
        assert_eq!(code(&["hb-dist", "--x", "1", "--y", "0"], None), 2);
        assert_eq!(
            code(
                &["train", "--x1", "1", "--x2", "0", "--format", "csv"],
                None
            ),
            2
        );
        assert_eq!(code(&["train", "--x1", "1", "--x2", "0"], Some("yaml")), 2);
        assert_eq!(
            code(&["bracket", "--system", "heisenberg", "--w", "5"], None),
            2
        );
        assert_eq!(code(&[], None), 2);
    }

    #[test]
    fn solver_errors_exit_1_with_error_object() {
        let out = run_with_env(
            ["geoctrl", "kalman", "--A", "[[0,1],[0,0]]", "--B", "[[1]]"],
            None,
        );
        assert_eq!(out.code, 1);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["error"]["kind"], "dimension");
        assert!(v.get("results").is_none());

        let out = run_with_env(
            [
                "geoctrl",
                "linearize",
                "--system",
                "pendulum",
                "--x0",
                "1,0",
            ],
            None,
        );
        assert_eq!(out.code, 1);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["error"]["kind"], "not_equilibrium");
    }

    #[test]
    fn env_format_selects_csv_where_available() {
        let out = run_with_env(
            ["geoctrl", "hb-dist", "--x", "3", "--y", "4", "--z", "0"],
            Some("csv"),
        );
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout, "x,y,z,d\n3,4,0,5\n");
        // commands without CSV output ignore the environment default
        let out = run_with_env(["geoctrl", "train", "--x1", "1", "--x2", "0"], Some("csv"));
        assert_eq!(out.code, 0);
        assert!(out.stdout.starts_with('{'));
        // an explicit flag wins over the environment
        let out = run_with_env(
            [
                "geoctrl", "hb-dist", "--x", "3", "--y", "4", "--z", "0", "--format", "json",
            ],
            Some("csv"),
        );
        assert!(out.stdout.starts_with('{'));
    }

    #[test]
    fn involutive_is_seeded() {
        let a = ok(&["involutive", "--system", "heisenberg", "--seed", "7"]);
        let b = ok(&["involutive", "--system", "heisenberg", "--seed", "7"]);
        let c = ok(&["involutive", "--system", "heisenberg", "--seed", "8"]);
        assert_eq!(a, b);
        assert_ne!(a["results"]["points"], c["results"]["points"]);
        assert_eq!(a["results"]["involutive"], false);
    }

    #[test]
    fn help_goes_to_stdout() {
        let out = run_with_env(["geoctrl", "--help"], None);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("hb-dist"));
    }
}
