//! Symbolic scalar expressions over chart coordinates.
//!
//! Expressions are immutable trees with exact rational constants; subtrees
//! are shared through `Arc` so clones are cheap and values are `Send + Sync`.
//! Differentiation is exact and purely structural. Evaluation to `f64` is
//! the only lossy step, and it reports division by a near-zero denominator
//! as a failure instead of producing an infinity.

use std::fmt;
use std::sync::Arc;

use num::rational::Ratio;
use num::{One, Signed, Zero};
use rand::Rng;

use crate::error::EvalKind;

/// Exact rational constant. `i128` is wide enough that constant folding in
/// derivative trees stays exact for every workload in this crate.
pub type Rat = Ratio<i128>;

/// Guard below which a denominator counts as vanishing during evaluation.
pub const DEFAULT_DIV_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Rat),
    Coord(usize),
    Add(Scalar, Scalar),
    Sub(Scalar, Scalar),
    Mul(Scalar, Scalar),
    Div(Scalar, Scalar),
    Pow(Scalar, i32),
    Exp(Scalar),
    Sin(Scalar),
    Cos(Scalar),
}

/// A symbolic scalar: shared-ownership handle to an expression tree.
#[derive(Clone)]
pub struct Scalar(Arc<Expr>);

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.print(&|i| format!("z{}", i)))
    }
}

impl Scalar {
    pub fn new(e: Expr) -> Scalar {
        Scalar(Arc::new(e))
    }

    pub fn expr(&self) -> &Expr {
        &self.0
    }

    pub fn zero() -> Scalar {
        Scalar::new(Expr::Const(Rat::zero()))
    }

    pub fn one() -> Scalar {
        Scalar::new(Expr::Const(Rat::one()))
    }

    pub fn constant(r: Rat) -> Scalar {
        Scalar::new(Expr::Const(r))
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::constant(Rat::from_integer(n as i128))
    }

    /// Exact rational representation of a float when its dyadic form fits
    /// `i128`, otherwise the best rational approximation.
    pub fn from_f64(v: f64) -> Option<Scalar> {
        if v == 0.0 {
            return Some(Scalar::zero());
        }
        if !v.is_finite() {
            return None;
        }
        let mut mant = v;
        let mut k = 0u32;
        while mant.fract() != 0.0 && k < 100 {
            mant *= 2.0;
            k += 1;
        }
        if mant.fract() == 0.0 && mant.abs() < 9e18 {
            return Some(Scalar::constant(Rat::new(mant as i128, 1i128 << k)));
        }
        Rat::approximate_float(v).map(Scalar::constant)
    }

    pub fn coord(i: usize) -> Scalar {
        Scalar::new(Expr::Coord(i))
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self.expr(), Expr::Const(r) if r.is_zero())
    }

    pub fn is_one_const(&self) -> bool {
        matches!(self.expr(), Expr::Const(r) if r.is_one())
    }

    pub fn as_const(&self) -> Option<Rat> {
        match self.expr() {
            Expr::Const(r) => Some(*r),
            _ => None,
        }
    }

    /// True when the expression is a constant that is not zero. Used to
    /// prefer safe pivots in symbolic elimination.
    pub fn is_nonzero_const(&self) -> bool {
        matches!(self.expr(), Expr::Const(r) if !r.is_zero())
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        if self.is_zero_const() {
            return rhs.clone();
        }
        if rhs.is_zero_const() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_const(), rhs.as_const()) {
            return Scalar::constant(a + b);
        }
        Scalar::new(Expr::Add(self.clone(), rhs.clone()))
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        if rhs.is_zero_const() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_const(), rhs.as_const()) {
            return Scalar::constant(a - b);
        }
        if self.is_zero_const() {
            return rhs.neg();
        }
        if self == rhs {
            return Scalar::zero();
        }
        Scalar::new(Expr::Sub(self.clone(), rhs.clone()))
    }

    pub fn neg(&self) -> Scalar {
        Scalar::from_int(-1).mul(self)
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        if self.is_zero_const() || rhs.is_zero_const() {
            return Scalar::zero();
        }
        if self.is_one_const() {
            return rhs.clone();
        }
        if rhs.is_one_const() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_const(), rhs.as_const()) {
            return Scalar::constant(a * b);
        }
        Scalar::new(Expr::Mul(self.clone(), rhs.clone()))
    }

    /// Quotient node. A structurally zero numerator folds to zero; all other
    /// quotients keep the denominator so evaluation can flag its zeros.
    pub fn div(&self, rhs: &Scalar) -> Scalar {
        if rhs.is_one_const() {
            return self.clone();
        }
        if self.is_zero_const() {
            return Scalar::zero();
        }
        if let (Some(a), Some(b)) = (self.as_const(), rhs.as_const()) {
            if !b.is_zero() {
                return Scalar::constant(a / b);
            }
        }
        Scalar::new(Expr::Div(self.clone(), rhs.clone()))
    }

    pub fn pow(&self, n: i32) -> Scalar {
        match n {
            0 => Scalar::one(),
            1 => self.clone(),
            _ => {
                if let Some(a) = self.as_const() {
                    if n > 0 {
                        return Scalar::constant(num::pow::pow(a, n as usize));
                    }
                    if !a.is_zero() {
                        return Scalar::constant(
                            Rat::one() / num::pow::pow(a, (-n) as usize),
                        );
                    }
                }
                Scalar::new(Expr::Pow(self.clone(), n))
            }
        }
    }

    pub fn exp(&self) -> Scalar {
        Scalar::new(Expr::Exp(self.clone()))
    }

    pub fn sin(&self) -> Scalar {
        if self.is_zero_const() {
            return Scalar::zero();
        }
        Scalar::new(Expr::Sin(self.clone()))
    }

    pub fn cos(&self) -> Scalar {
        if self.is_zero_const() {
            return Scalar::one();
        }
        Scalar::new(Expr::Cos(self.clone()))
    }

    /// Exact partial derivative with respect to coordinate `i`.
    pub fn diff(&self, i: usize) -> Scalar {
        match self.expr() {
            Expr::Const(_) => Scalar::zero(),
            Expr::Coord(j) => {
                if *j == i {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }
            Expr::Add(a, b) => a.diff(i).add(&b.diff(i)),
            Expr::Sub(a, b) => a.diff(i).sub(&b.diff(i)),
            Expr::Mul(a, b) => a.diff(i).mul(b).add(&a.mul(&b.diff(i))),
            Expr::Div(a, b) => {
                let num = a.diff(i).mul(b).sub(&a.mul(&b.diff(i)));
                num.div(&b.pow(2))
            }
            Expr::Pow(a, n) => Scalar::from_int(*n as i64)
                .mul(&a.pow(n - 1))
                .mul(&a.diff(i)),
            Expr::Exp(a) => self.clone().mul(&a.diff(i)),
            Expr::Sin(a) => a.cos().mul(&a.diff(i)),
            Expr::Cos(a) => a.sin().neg().mul(&a.diff(i)),
        }
    }

    /// Gradient: all first partials for a chart of dimension `dim`.
    pub fn gradient(&self, dim: usize) -> Vec<Scalar> {
        (0..dim).map(|i| self.diff(i)).collect()
    }

    /// Evaluates at raw coordinate values. `div_eps` is the threshold below
    /// which a denominator magnitude counts as a division failure.
    pub fn eval_at(&self, vals: &[f64], div_eps: f64) -> Result<f64, EvalKind> {
        match self.expr() {
            Expr::Const(r) => Ok(rat_to_f64(*r)),
            Expr::Coord(i) => {
                if *i < vals.len() {
                    Ok(vals[*i])
                } else {
                    Err(EvalKind::CoordOutOfRange {
                        index: *i,
                        dim: vals.len(),
                    })
                }
            }
            Expr::Add(a, b) => Ok(a.eval_at(vals, div_eps)? + b.eval_at(vals, div_eps)?),
            Expr::Sub(a, b) => Ok(a.eval_at(vals, div_eps)? - b.eval_at(vals, div_eps)?),
            Expr::Mul(a, b) => Ok(a.eval_at(vals, div_eps)? * b.eval_at(vals, div_eps)?),
            Expr::Div(a, b) => {
                let den = b.eval_at(vals, div_eps)?;
                if den.abs() <= div_eps {
                    return Err(EvalKind::DivisionNearZero { denom: den });
                }
                Ok(a.eval_at(vals, div_eps)? / den)
            }
            Expr::Pow(a, n) => Ok(a.eval_at(vals, div_eps)?.powi(*n)),
            Expr::Exp(a) => Ok(a.eval_at(vals, div_eps)?.exp()),
            Expr::Sin(a) => Ok(a.eval_at(vals, div_eps)?.sin()),
            Expr::Cos(a) => Ok(a.eval_at(vals, div_eps)?.cos()),
        }
    }

    /// Substitutes `map[i]` for coordinate `i`. Indices past the end of the
    /// map are a caller bug.
    pub fn subst(&self, map: &[Scalar]) -> Scalar {
        match self.expr() {
            Expr::Const(_) => self.clone(),
            Expr::Coord(i) => {
                assert!(*i < map.len(), "substitution map misses coordinate {}", i);
                map[*i].clone()
            }
            Expr::Add(a, b) => a.subst(map).add(&b.subst(map)),
            Expr::Sub(a, b) => a.subst(map).sub(&b.subst(map)),
            Expr::Mul(a, b) => a.subst(map).mul(&b.subst(map)),
            Expr::Div(a, b) => a.subst(map).div(&b.subst(map)),
            Expr::Pow(a, n) => a.subst(map).pow(*n),
            Expr::Exp(a) => a.subst(map).exp(),
            Expr::Sin(a) => a.subst(map).sin(),
            Expr::Cos(a) => a.subst(map).cos(),
        }
    }

    /// Largest coordinate index mentioned, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self.expr() {
            Expr::Const(_) => None,
            Expr::Coord(i) => Some(*i),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                match (a.max_coord(), b.max_coord()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
            Expr::Pow(a, _) | Expr::Exp(a) | Expr::Sin(a) | Expr::Cos(a) => a.max_coord(),
        }
    }

    /// Renders the expression with `name(i)` supplying coordinate names.
    pub fn print(&self, name: &dyn Fn(usize) -> String) -> String {
        let mut out = String::new();
        self.print_prec(name, 0, &mut out);
        out
    }

    // Precedence levels: 0 sum, 1 product, 2 unary minus, 3 power, 4 atom.
    fn print_prec(&self, name: &dyn Fn(usize) -> String, prec: u8, out: &mut String) {
        let level = match self.expr() {
            Expr::Add(_, _) | Expr::Sub(_, _) => 0,
            Expr::Mul(_, _) | Expr::Div(_, _) => 1,
            Expr::Pow(_, _) => 3,
            Expr::Const(r) => {
                if r.is_negative() || !r.denom().is_one() {
                    1
                } else {
                    4
                }
            }
            _ => 4,
        };
        let need_parens = level < prec;
        if need_parens {
            out.push('(');
        }
        match self.expr() {
            Expr::Const(r) => {
                if r.denom().is_one() {
                    out.push_str(&r.numer().to_string());
                } else {
                    out.push_str(&format!("{}/{}", r.numer(), r.denom()));
                }
            }
            Expr::Coord(i) => out.push_str(&name(*i)),
            Expr::Add(a, b) => {
                a.print_prec(name, 0, out);
                out.push_str(" + ");
                b.print_prec(name, 1, out);
            }
            Expr::Sub(a, b) => {
                a.print_prec(name, 0, out);
                out.push_str(" - ");
                b.print_prec(name, 1, out);
            }
            Expr::Mul(a, b) => {
                a.print_prec(name, 1, out);
                out.push_str("*");
                b.print_prec(name, 2, out);
            }
            Expr::Div(a, b) => {
                a.print_prec(name, 1, out);
                out.push_str("/");
                b.print_prec(name, 2, out);
            }
            Expr::Pow(a, n) => {
                a.print_prec(name, 4, out);
                out.push('^');
                if *n < 0 {
                    out.push_str(&format!("({})", n));
                } else {
                    out.push_str(&n.to_string());
                }
            }
            Expr::Exp(a) => {
                out.push_str("exp(");
                a.print_prec(name, 0, out);
                out.push(')');
            }
            Expr::Sin(a) => {
                out.push_str("sin(");
                a.print_prec(name, 0, out);
                out.push(')');
            }
            Expr::Cos(a) => {
                out.push_str("cos(");
                a.print_prec(name, 0, out);
                out.push(')');
            }
        }
        if need_parens {
            out.push(')');
        }
    }
}

fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Sum of a list of scalars; empty sums are zero.
pub fn sum(terms: impl IntoIterator<Item = Scalar>) -> Scalar {
    terms
        .into_iter()
        .fold(Scalar::zero(), |acc, t| acc.add(&t))
}

/// Random sparse polynomial in `dim` coordinates; used wherever identities
/// are quantified over "random smooth inputs".
pub fn random_polynomial<R: Rng>(rng: &mut R, dim: usize, max_degree: u32, terms: usize) -> Scalar {
    let mut acc = Scalar::from_int(rng.gen_range(-2i64..=2));
    for _ in 0..terms {
        let coeff = Scalar::from_int(rng.gen_range(-3i64..=3));
        let mut mono = coeff;
        let degree = rng.gen_range(1..=max_degree.max(1));
        for _ in 0..degree {
            let i = rng.gen_range(0..dim.max(1));
            mono = mono.mul(&Scalar::coord(i));
        }
        acc = acc.add(&mono);
    }
    acc
}
