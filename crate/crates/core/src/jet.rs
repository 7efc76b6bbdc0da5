//! Multilinear hyper-dual numbers.
//!
//! A [`Jet`] of order `m` is a truncated polynomial in `m` nilpotent
//! infinitesimals `e_1, ..., e_m` with `e_i^2 = 0`. Coefficients are indexed by
//! subsets of `{e_1, ..., e_m}` encoded as bitmasks, so a jet of order `m`
//! carries `2^m` coefficients. Evaluating a smooth function on jets yields exact
//! mixed directional derivatives up to order `m`, which is what iterated Lie
//! brackets need: each bracket level adds one infinitesimal.
//!
//! Jets of different orders can be mixed freely; the lower-order operand is
//! treated as constant in the missing directions.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    /// Order-0 jet: a plain number.
    pub fn constant(value: f64) -> Self {
        Jet {
            coeffs: vec![value],
        }
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().trailing_zeros() as usize
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Promote to `order` by zero-padding; a no-op if already at least that order.
    pub fn lifted(&self, order: usize) -> Self {
        let len = 1usize << order;
        if self.coeffs.len() >= len {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len, 0.0);
        Jet { coeffs }
    }

    /// `base + e_new * dir`, where `e_new` is a fresh infinitesimal one above
    /// the highest order among `base` and `dir`.
    pub fn perturbed(base: &Jet, dir: &Jet, order: usize) -> Self {
        let half = 1usize << order;
        let mut coeffs = vec![0.0; 2 * half];
        coeffs[..base.coeffs.len()].copy_from_slice(&base.coeffs);
        for (i, &d) in dir.coeffs.iter().enumerate() {
            coeffs[half + i] += d;
        }
        Jet { coeffs }
    }

    /// Coefficient of the top infinitesimal, as a jet one order lower.
    ///
    /// For `f(base + e_new * dir)` this is the directional derivative
    /// `Df(base)[dir]`.
    pub fn top_derivative(&self) -> Self {
        let order = self.order();
        if order == 0 {
            return Jet::constant(0.0);
        }
        let half = 1usize << (order - 1);
        Jet {
            coeffs: self.coeffs[half..].to_vec(),
        }
    }

    /// Composition with a scalar function whose derivatives at `self.value()`
    /// are `derivs[0], derivs[1], ...` (at least `order + 1` entries).
    fn compose(&self, derivs: &[f64]) -> Self {
        let order = self.order();
        debug_assert!(derivs.len() > order);
        let mut delta = self.clone();
        delta.coeffs[0] = 0.0;
        let mut out = Jet {
            coeffs: vec![0.0; self.coeffs.len()],
        };
        out.coeffs[0] = derivs[0];
        let mut power = Jet::constant(1.0).lifted(order);
        let mut factorial = 1.0;
        for (k, &d) in derivs.iter().enumerate().take(order + 1).skip(1) {
            power = &power * &delta;
            factorial *= k as f64;
            let w = d / factorial;
            for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                *o += w * p;
            }
        }
        out
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        let derivs: Vec<f64> = (0..=self.order()).map(|k| cycle[k % 4]).collect();
        self.compose(&derivs)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        let derivs: Vec<f64> = (0..=self.order()).map(|k| cycle[k % 4]).collect();
        self.compose(&derivs)
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(&vec![e; self.order() + 1])
    }

    pub fn recip(&self) -> Self {
        let v = self.value();
        let mut derivs = Vec::with_capacity(self.order() + 1);
        let mut d = 1.0 / v;
        for k in 0..=self.order() {
            derivs.push(d);
            d *= -((k + 1) as f64) / v;
        }
        self.compose(&derivs)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Jet::constant(1.0).lifted(self.order());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, k: f64) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}

impl From<f64> for Jet {
    fn from(v: f64) -> Self {
        Jet::constant(v)
    }
}

fn zip_with(a: &Jet, b: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
    let len = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..len)
        .map(|i| {
            f(
                a.coeffs.get(i).copied().unwrap_or(0.0),
                b.coeffs.get(i).copied().unwrap_or(0.0),
            )
        })
        .collect();
    Jet { coeffs }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        zip_with(self, rhs, |a, b| a + b)
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        zip_with(self, rhs, |a, b| a - b)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let a = |i: usize| self.coeffs.get(i).copied().unwrap_or(0.0);
        let b = |i: usize| rhs.coeffs.get(i).copied().unwrap_or(0.0);
        let mut coeffs = vec![0.0; len];
        for (set, c) in coeffs.iter_mut().enumerate() {
            // sum over all splittings of `set` into two disjoint subsets
            let mut sub = set;
            loop {
                *c += a(sub) * b(set ^ sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & set;
            }
        }
        Jet { coeffs }
    }
}

impl Div for &Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Jet) -> Jet {
        self * &rhs.recip()
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
        impl $tr<f64> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: f64) -> Jet {
                self.$m(&Jet::constant(rhs))
            }
        }
        impl $tr<f64> for Jet {
            type Output = Jet;
            fn $m(self, rhs: f64) -> Jet {
                (&self).$m(&Jet::constant(rhs))
            }
        }
        impl $tr<&Jet> for f64 {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&Jet::constant(self)).$m(rhs)
            }
        }
        impl $tr<Jet> for f64 {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&Jet::constant(self)).$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
