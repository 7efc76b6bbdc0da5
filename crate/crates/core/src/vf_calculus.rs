//! Vector fields on coordinate charts and their Lie brackets.
//!
//! The bracket convention is `[V, W] = (dW/dx) V - (dV/dx) W`, so that the
//! flow commutator `e^{-tW} e^{-tV} e^{tW} e^{tV}(q) = q + t^2 [V, W](q) + o(t^2)`.
//!
//! Fields come in two flavours. A *smooth* field is written once against
//! [`Jet`] arithmetic; its Jacobian and the Jacobians of all its iterated
//! brackets are exact. A *sampled* field only evaluates on `f64` vectors and
//! may carry an analytic Jacobian; otherwise central differences are used.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numeric::{rank_of, singular_values};

/// Default maximal bracket depth for LARC certification.
pub const DEFAULT_MAX_DEPTH: usize = 4;

/// Residual tolerance for the Frobenius test, relative to the bracket norm.
pub const INVOLUTIVITY_TOL: f64 = 1e-6;

/// RK4 steps per leg of the flow commutator.
pub const FLOW_STEPS_PER_LEG: usize = 100;

type JetFn = dyn Fn(&[Jet]) -> Vec<Jet> + Send + Sync;
type EvalFn = dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync;
type JacFn = dyn Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync;

#[derive(Clone)]
enum Repr {
    Smooth(Arc<JetFn>),
    Sampled {
        eval: Arc<EvalFn>,
        jac: Option<Arc<JacFn>>,
    },
}

/// A vector field `q -> V(q)` on `R^n`.
#[derive(Clone)]
pub struct VectorField {
    dim: usize,
    repr: Repr,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.repr {
            Repr::Smooth(_) => "smooth",
            Repr::Sampled { jac: Some(_), .. } => "sampled+jacobian",
            Repr::Sampled { jac: None, .. } => "sampled",
        };
        f.debug_struct("VectorField")
            .field("dim", &self.dim)
            .field("kind", &kind)
            .finish()
    }
}

fn fd_step(coord: f64) -> f64 {
    f64::EPSILON.cbrt() * coord.abs().max(1.0)
}

impl VectorField {
    /// Field written against jet arithmetic; derivatives of every order are exact.
    pub fn smooth(dim: usize, f: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static) -> Self {
        VectorField {
            dim,
            repr: Repr::Smooth(Arc::new(f)),
        }
    }

    /// Field known only through point evaluations; Jacobians by central differences.
    pub fn sampled(
        dim: usize,
        eval: impl Fn(&DVector<f64>) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        VectorField {
            dim,
            repr: Repr::Sampled {
                eval: Arc::new(eval),
                jac: None,
            },
        }
    }

    /// Field with an analytic Jacobian.
    pub fn with_jacobian(
        dim: usize,
        eval: impl Fn(&DVector<f64>) -> DVector<f64> + Send + Sync + 'static,
        jac: impl Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        VectorField {
            dim,
            repr: Repr::Sampled {
                eval: Arc::new(eval),
                jac: Some(Arc::new(jac)),
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True when the Jacobian is not a finite-difference estimate.
    pub fn has_exact_jacobian(&self) -> bool {
        !matches!(self.repr, Repr::Sampled { jac: None, .. })
    }

    pub fn eval(&self, q: &DVector<f64>) -> DVector<f64> {
        match &self.repr {
            Repr::Smooth(f) => {
                let jq: Vec<Jet> = q.iter().map(|&v| Jet::constant(v)).collect();
                DVector::from_iterator(self.dim, f(&jq).iter().map(Jet::value))
            }
            Repr::Sampled { eval, .. } => eval(q),
        }
    }

    /// `dV/dx (q) * dir`.
    pub fn directional_derivative(&self, q: &DVector<f64>, dir: &DVector<f64>) -> DVector<f64> {
        match &self.repr {
            Repr::Smooth(f) => {
                let jq: Vec<Jet> = q
                    .iter()
                    .zip(dir.iter())
                    .map(|(&x, &d)| Jet::perturbed(&Jet::constant(x), &Jet::constant(d), 0))
                    .collect();
                DVector::from_iterator(self.dim, f(&jq).iter().map(|j| j.top_derivative().value()))
            }
            Repr::Sampled { .. } => self.jacobian(q) * dir,
        }
    }

    pub fn jacobian(&self, q: &DVector<f64>) -> DMatrix<f64> {
        match &self.repr {
            Repr::Smooth(_) => {
                let mut j = DMatrix::zeros(self.dim, self.dim);
                for c in 0..self.dim {
                    let mut e = DVector::zeros(self.dim);
                    e[c] = 1.0;
                    j.set_column(c, &self.directional_derivative(q, &e));
                }
                j
            }
            Repr::Sampled { jac: Some(jac), .. } => jac(q),
            Repr::Sampled { eval, jac: None } => finite_difference_jacobian(eval.as_ref(), q),
        }
    }

    /// Largest entrywise gap between the Jacobian in use and central differences at `q`.
    pub fn jacobian_discrepancy(&self, q: &DVector<f64>) -> f64 {
        let eval = |x: &DVector<f64>| self.eval(x);
        (self.jacobian(q) - finite_difference_jacobian(&eval, q)).amax()
    }

    /// The bracket `[self, other]` as a vector field.
    ///
    /// Brackets of smooth fields stay smooth (exact to any depth); otherwise
    /// the result is a sampled field whose own Jacobian is approximated.
    pub fn bracket_field(&self, other: &VectorField) -> Result<VectorField> {
        check_dims(self.dim, other.dim, "bracket operands")?;
        let dim = self.dim;
        match (&self.repr, &other.repr) {
            (Repr::Smooth(v), Repr::Smooth(w)) => {
                let v = Arc::clone(v);
                let w = Arc::clone(w);
                Ok(VectorField::smooth(dim, move |q| jet_bracket(&v, &w, q)))
            }
            _ => {
                let v = self.clone();
                let w = other.clone();
                Ok(VectorField::sampled(dim, move |q| {
                    w.directional_derivative(q, &v.eval(q))
                        - v.directional_derivative(q, &w.eval(q))
                }))
            }
        }
    }
}

fn finite_difference_jacobian(
    eval: &dyn Fn(&DVector<f64>) -> DVector<f64>,
    q: &DVector<f64>,
) -> DMatrix<f64> {
    let n = q.len();
    let mut j = DMatrix::zeros(n, n);
    for c in 0..n {
        let h = fd_step(q[c]);
        let mut qp = q.clone();
        let mut qm = q.clone();
        qp[c] += h;
        qm[c] -= h;
        let col = (eval(&qp) - eval(&qm)) / (2.0 * h);
        j.set_column(c, &col);
    }
    j
}

fn jet_bracket(v: &Arc<JetFn>, w: &Arc<JetFn>, q: &[Jet]) -> Vec<Jet> {
    let order = q.iter().map(Jet::order).max().unwrap_or(0);
    let vq = v(q);
    let wq = w(q);
    let order = vq
        .iter()
        .chain(wq.iter())
        .map(Jet::order)
        .fold(order, usize::max);
    let along = |dir: &[Jet]| -> Vec<Jet> {
        q.iter()
            .zip(dir)
            .map(|(x, d)| Jet::perturbed(x, d, order))
            .collect()
    };
    let dw_v = w(&along(&vq));
    let dv_w = v(&along(&wq));
    dw_v.iter()
        .zip(&dv_w)
        .map(|(a, b)| &a.top_derivative() - &b.top_derivative())
        .collect()
}

fn check_dims(a: usize, b: usize, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("{what}: {a} vs {b}")));
    }
    Ok(())
}

/// `[V, W](q)`.
pub fn bracket(v: &VectorField, w: &VectorField, q: &DVector<f64>) -> Result<DVector<f64>> {
    check_dims(v.dim(), w.dim(), "bracket operands")?;
    check_dims(v.dim(), q.len(), "bracket point")?;
    Ok(w.directional_derivative(q, &v.eval(q)) - v.directional_derivative(q, &w.eval(q)))
}

fn rk4_flow(
    field: &VectorField,
    q: &DVector<f64>,
    time: f64,
    steps: usize,
) -> Result<DVector<f64>> {
    let h = time / steps as f64;
    let mut x = q.clone();
    for _ in 0..steps {
        let k1 = field.eval(&x);
        let k2 = field.eval(&(&x + &k1 * (h / 2.0)));
        let k3 = field.eval(&(&x + &k2 * (h / 2.0)));
        let k4 = field.eval(&(&x + &k3 * h));
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged {
                point: q.iter().copied().collect(),
            });
        }
    }
    Ok(x)
}

/// Flow-commutator estimate `(gamma(t) - q) / t^2` of `[V, W](q)`, where
/// `gamma(t) = e^{-tW} e^{-tV} e^{tW} e^{tV}(q)`.
pub fn bracket_by_flows(
    v: &VectorField,
    w: &VectorField,
    q: &DVector<f64>,
    t: f64,
) -> Result<DVector<f64>> {
    check_dims(v.dim(), w.dim(), "bracket operands")?;
    check_dims(v.dim(), q.len(), "bracket point")?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "commutator time must be positive, got {t}"
        )));
    }
    let n = FLOW_STEPS_PER_LEG;
    let p = rk4_flow(v, q, t, n)?;
    let p = rk4_flow(w, &p, t, n)?;
    let p = rk4_flow(v, &p, -t, n)?;
    let p = rk4_flow(w, &p, -t, n)?;
    Ok((p - q) / (t * t))
}

/// Left-normed iterated bracket `[f_{iN}, [..., [f_{i2}, f_{i1}]...]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BracketTree {
    Field(usize),
    Bracket(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    pub fn depth(&self) -> usize {
        match self {
            BracketTree::Field(_) => 1,
            BracketTree::Bracket(a, b) => a.depth().max(b.depth()) + 1,
        }
    }

    /// Field indices in left-normed order, innermost first.
    pub fn leaves(&self) -> Vec<usize> {
        match self {
            BracketTree::Field(i) => vec![*i],
            BracketTree::Bracket(a, b) => {
                let mut l = b.leaves();
                l.extend(a.leaves());
                l
            }
        }
    }

    /// Build the bracket as a vector field from the base `fields`.
    pub fn realize(&self, fields: &[VectorField]) -> Result<VectorField> {
        match self {
            BracketTree::Field(i) => fields
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::InvalidArgument(format!("field index {i} out of range"))),
            BracketTree::Bracket(a, b) => a.realize(fields)?.bracket_field(&b.realize(fields)?),
        }
    }
}

impl fmt::Display for BracketTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketTree::Field(i) => write!(f, "f{i}"),
            BracketTree::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LarcReport {
    /// Certified lower bound on `dim Lie_q(F)`.
    pub rank: usize,
    pub dim: usize,
    /// Greedily selected independent brackets.
    pub basis: Vec<BracketTree>,
    /// Smallest depth at which full rank was reached, if it was.
    pub full_rank_depth: Option<usize>,
    /// Rank after each depth `1..=max_depth`.
    pub rank_by_depth: Vec<usize>,
}

impl LarcReport {
    pub fn full_rank(&self) -> bool {
        self.rank == self.dim
    }
}

/// Numeric rank of all left-normed brackets of `fields` up to `max_depth`, at `q`.
pub fn larc_rank(fields: &[VectorField], q: &DVector<f64>, max_depth: usize) -> Result<LarcReport> {
    if max_depth < 1 {
        return Err(Error::InvalidArgument(
            "max_depth must be at least 1".into(),
        ));
    }
    let Some(first) = fields.first() else {
        return Err(Error::InvalidArgument("need at least one field".into()));
    };
    let dim = first.dim();
    for f in fields {
        check_dims(dim, f.dim(), "field dimensions")?;
    }
    check_dims(dim, q.len(), "evaluation point")?;

    let mut columns: Vec<DVector<f64>> = Vec::new();
    let mut basis: Vec<BracketTree> = Vec::new();
    let mut basis_cols: Vec<DVector<f64>> = Vec::new();
    let mut rank_by_depth = Vec::with_capacity(max_depth);
    let mut full_rank_depth = None;

    let mut level: Vec<(BracketTree, VectorField)> = fields
        .iter()
        .enumerate()
        .map(|(i, f)| (BracketTree::Field(i), f.clone()))
        .collect();

    for depth in 1..=max_depth {
        if depth > 1 {
            let mut next = Vec::with_capacity(level.len() * fields.len());
            for (tree, field) in &level {
                for (i, f) in fields.iter().enumerate() {
                    let t = BracketTree::Bracket(
                        Box::new(BracketTree::Field(i)),
                        Box::new(tree.clone()),
                    );
                    next.push((t, f.bracket_field(field)?));
                }
            }
            level = next;
        }
        for (tree, field) in &level {
            let col = field.eval(q);
            columns.push(col.clone());
            let mut trial = basis_cols.clone();
            trial.push(col);
            if rank_of_columns(dim, &trial) > basis_cols.len() {
                basis_cols = trial;
                basis.push(tree.clone());
            }
        }
        let rank = rank_of_columns(dim, &columns);
        rank_by_depth.push(rank);
        if rank == dim && full_rank_depth.is_none() {
            full_rank_depth = Some(depth);
        }
    }

    Ok(LarcReport {
        rank: *rank_by_depth.last().unwrap_or(&0),
        dim,
        basis,
        full_rank_depth,
        rank_by_depth,
    })
}

fn rank_of_columns(dim: usize, cols: &[DVector<f64>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let m = DMatrix::from_columns(cols);
    rank_of(dim, cols.len(), &singular_values(&m))
}

/// Frobenius test: every pairwise bracket lies in the span of `fields` at each sample point.
pub fn is_involutive(fields: &[VectorField], sample_points: &[DVector<f64>]) -> Result<bool> {
    let Some(first) = fields.first() else {
        return Err(Error::InvalidArgument("need at least one field".into()));
    };
    let dim = first.dim();
    for f in fields {
        check_dims(dim, f.dim(), "field dimensions")?;
    }
    for q in sample_points {
        check_dims(dim, q.len(), "sample point")?;
        let cols: Vec<DVector<f64>> = fields.iter().map(|f| f.eval(q)).collect();
        let frame = DMatrix::from_columns(&cols);
        let rank = rank_of(dim, cols.len(), &singular_values(&frame));
        if rank < fields.len() {
            return Err(Error::DependentFrame {
                point: q.iter().copied().collect(),
                rank,
                expected: fields.len(),
            });
        }
        let scale = cols.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let qr = frame.clone().qr();
        let qmat = qr.q();
        for i in 0..fields.len() {
            for j in (i + 1)..fields.len() {
                let b = bracket(&fields[i], &fields[j], q)?;
                let projected = &qmat * (qmat.transpose() * &b);
                let residual = (&b - projected).norm();
                if residual > INVOLUTIVITY_TOL * b.norm().max(scale) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn v3(a: f64, b: f64, c: f64) -> DVector<f64> {
        DVector::from_vec(vec![a, b, c])
    }

    #[test]
    fn reeds_shepp_bracket_is_sideways_motion() {
        let f = catalog::reeds_shepp();
        for &th in &[0.0, 0.3, -2.0, 3.0] {
            let b = bracket(&f[0], &f[1], &v3(1.0, -2.0, th)).unwrap();
            assert!((b - v3(th.sin(), -th.cos(), 0.0)).amax() < 1e-14);
        }
    }

    #[test]
    fn heisenberg_bracket_is_vertical() {
        let f = catalog::heisenberg();
        let b = bracket(&f[0], &f[1], &v3(0.4, -1.3, 2.0)).unwrap();
        assert!((b - v3(0.0, 0.0, 1.0)).amax() < 1e-14);
    }

    #[test]
    fn self_bracket_vanishes() {
        let f = catalog::reeds_shepp();
        let b = bracket(&f[0], &f[0], &v3(0.0, 0.0, 0.7)).unwrap();
        assert!(b.amax() < 1e-15);
    }

    #[test]
    fn sampled_fields_agree_with_smooth_ones() {
        let smooth = catalog::reeds_shepp();
        let v = VectorField::sampled(3, |q| v3(q[2].cos(), q[2].sin(), 0.0));
        let w = VectorField::sampled(3, |_| v3(0.0, 0.0, 1.0));
        let q = v3(0.1, 0.2, 0.9);
        let a = bracket(&v, &w, &q).unwrap();
        let b = bracket(&smooth[0], &smooth[1], &q).unwrap();
        assert!((a - b).amax() < 1e-9);
        assert!(!v.has_exact_jacobian());
    }

    #[test]
    fn analytic_jacobian_matches_finite_differences() {
        let v = VectorField::with_jacobian(
            3,
            |q| v3(q[2].cos(), q[2].sin(), 0.0),
            |q| {
                DMatrix::from_row_slice(
                    3,
                    3,
                    &[0.0, 0.0, -q[2].sin(), 0.0, 0.0, q[2].cos(), 0.0, 0.0, 0.0],
                )
            },
        );
        assert!(v.has_exact_jacobian());
        for &th in &[0.0, 1.0, -2.5] {
            assert!(v.jacobian_discrepancy(&v3(0.0, 0.0, th)) < 1e-5);
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = catalog::heisenberg();
        let b = catalog::engel();
        assert!(matches!(
            bracket(&a[0], &b[0], &v3(0.0, 0.0, 0.0)),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            bracket(&a[0], &a[1], &DVector::zeros(2)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn flow_commutator_reeds_shepp() {
        let f = catalog::reeds_shepp();
        let b = bracket_by_flows(&f[0], &f[1], &v3(0.0, 0.0, 0.0), 1e-3).unwrap();
        assert!((b - v3(0.0, -1.0, 0.0)).amax() < 1e-3);
    }

    #[test]
    fn flow_commutator_of_commuting_fields_vanishes() {
        let e1 = VectorField::smooth(3, |_| vec![1.0.into(), 0.0.into(), 0.0.into()]);
        let e2 = VectorField::smooth(3, |_| vec![0.0.into(), 1.0.into(), 0.0.into()]);
        let b = bracket_by_flows(&e1, &e2, &v3(0.3, 0.1, 2.0), 1e-3).unwrap();
        assert!(b.amax() < 1e-6);
    }

    #[test]
    fn flow_commutator_heisenberg() {
        let f = catalog::heisenberg();
        let b = bracket_by_flows(&f[0], &f[1], &v3(0.0, 0.0, 0.0), 1e-3).unwrap();
        assert!((b - v3(0.0, 0.0, 1.0)).amax() < 1e-3);
    }

    #[test]
    fn flow_commutator_detects_blow_up() {
        // x' = x^2 escapes to infinity in finite time
        let v = VectorField::smooth(1, |q| vec![&q[0] * &q[0]]);
        let w = VectorField::smooth(1, |_| vec![1.0.into()]);
        let err = bracket_by_flows(&v, &w, &DVector::from_element(1, 1e154), 1.0).unwrap_err();
        assert!(matches!(err, Error::Diverged { .. }));
    }

    #[test]
    fn bracket_tree_display_and_depth() {
        let t = BracketTree::Bracket(
            Box::new(BracketTree::Field(1)),
            Box::new(BracketTree::Bracket(
                Box::new(BracketTree::Field(0)),
                Box::new(BracketTree::Field(1)),
            )),
        );
        assert_eq!(t.to_string(), "[f1,[f0,f1]]");
        assert_eq!(t.depth(), 3);
        assert_eq!(t.leaves(), vec![1, 0, 1]);
    }

    #[test]
    fn larc_heisenberg_and_dubins() {
        let q = v3(0.5, -0.2, 1.0);
        let r = larc_rank(&catalog::heisenberg(), &q, 2).unwrap();
        assert_eq!(r.rank, 3);
        assert_eq!(r.full_rank_depth, Some(2));
        assert_eq!(r.basis.len(), 3);
        assert_eq!(r.rank_by_depth, vec![2, 3]);
        let r = larc_rank(&catalog::dubins(), &q, 2).unwrap();
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn larc_depth_one_is_frame_rank() {
        let r = larc_rank(&catalog::heisenberg(), &v3(0.0, 0.0, 0.0), 1).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.full_rank_depth, None);
        assert!(larc_rank(&catalog::heisenberg(), &v3(0.0, 0.0, 0.0), 0).is_err());
    }

    #[test]
    fn larc_rolling_sphere() {
        let r = larc_rank(
            &catalog::rolling_sphere(),
            &catalog::rolling_sphere_origin(),
            3,
        )
        .unwrap();
        assert_eq!(r.rank, 5);
        assert_eq!(r.dim, 11);
        assert!(!r.full_rank());
    }

    #[test]
    fn larc_engel() {
        let r = larc_rank(
            &catalog::engel(),
            &DVector::from_vec(vec![0.3, -0.7, 0.1, 2.0]),
            3,
        )
        .unwrap();
        assert_eq!(r.rank, 4);
        assert_eq!(r.full_rank_depth, Some(3));
    }

    #[test]
    fn coordinate_fields_are_involutive() {
        let e1 = VectorField::smooth(3, |_| vec![1.0.into(), 0.0.into(), 0.0.into()]);
        let e2 = VectorField::smooth(3, |_| vec![0.0.into(), 1.0.into(), 0.0.into()]);
        let pts = vec![v3(0.0, 0.0, 0.0), v3(1.0, -2.0, 3.0)];
        assert!(is_involutive(&[e1, e2], &pts).unwrap());
    }

    #[test]
    fn heisenberg_distribution_is_not_involutive() {
        let pts = vec![v3(0.0, 0.0, 0.0), v3(1.0, 2.0, -1.0)];
        assert!(!is_involutive(&catalog::heisenberg(), &pts).unwrap());
    }

    #[test]
    fn rescaled_commuting_frame_is_involutive() {
        // {d/dx1, g d/dx2} with g = 1 + x1^2 + x3^2 > 0: [f, g h] = (f g) h
        let f = VectorField::smooth(3, |_| vec![1.0.into(), 0.0.into(), 0.0.into()]);
        let gh = VectorField::smooth(3, |q| {
            let g = 1.0 + &(&q[0] * &q[0]) + &q[2] * &q[2];
            vec![0.0.into(), g, 0.0.into()]
        });
        let pts = vec![v3(0.5, 0.0, 0.0), v3(-1.0, 3.0, 2.0)];
        assert!(is_involutive(&[f, gh], &pts).unwrap());
    }

    #[test]
    fn dependent_frame_is_reported() {
        let f = VectorField::smooth(3, |_| vec![1.0.into(), 0.0.into(), 0.0.into()]);
        let g = VectorField::smooth(3, |q| vec![&q[1] * 2.0, 0.0.into(), 0.0.into()]);
        let err = is_involutive(&[f, g], &[v3(0.0, 1.0, 0.0)]).unwrap_err();
        assert!(matches!(
            err,
            Error::DependentFrame {
                rank: 1,
                expected: 2,
                ..
            }
        ));
    }
}
