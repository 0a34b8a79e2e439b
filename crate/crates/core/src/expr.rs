//! Univariate expression trees, evaluated pointwise or over intervals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use crate::interval::{DomainIssue, Interval};
use crate::trigpoly::UPoly;

#[derive(Clone, Debug)]
pub enum UExpr {
    Const(Interval),
    Var,
    Add(Arc<UExpr>, Arc<UExpr>),
    Sub(Arc<UExpr>, Arc<UExpr>),
    Mul(Arc<UExpr>, Arc<UExpr>),
    Div(Arc<UExpr>, Arc<UExpr>),
    Neg(Arc<UExpr>),
    Abs(Arc<UExpr>),
    Sqrt(Arc<UExpr>),
    Powi(Arc<UExpr>, u32),
    Poly(UPoly),
    Exp(Arc<UExpr>),
    Ln(Arc<UExpr>),
}

impl UExpr {
    pub fn var() -> Self {
        UExpr::Var
    }

    pub fn constant(c: f64) -> Self {
        UExpr::Const(Interval::point(c))
    }

    /// A constant known only up to an enclosure, e.g. `π` or `ln 3`.
    pub fn enclosed(c: Interval) -> Self {
        UExpr::Const(c)
    }

    pub fn pi() -> Self {
        UExpr::Const(Interval::pi())
    }

    pub fn poly(p: UPoly) -> Self {
        UExpr::Poly(p)
    }

    pub fn abs(self) -> Self {
        UExpr::Abs(Arc::new(self))
    }

    pub fn sqrt(self) -> Self {
        UExpr::Sqrt(Arc::new(self))
    }

    pub fn powi(self, n: u32) -> Self {
        UExpr::Powi(Arc::new(self), n)
    }

    pub fn exp(self) -> Self {
        UExpr::Exp(Arc::new(self))
    }

    pub fn ln(self) -> Self {
        UExpr::Ln(Arc::new(self))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            UExpr::Const(c) => c.mid(),
            UExpr::Var => x,
            UExpr::Add(a, b) => a.eval(x) + b.eval(x),
            UExpr::Sub(a, b) => a.eval(x) - b.eval(x),
            UExpr::Mul(a, b) => a.eval(x) * b.eval(x),
            UExpr::Div(a, b) => a.eval(x) / b.eval(x),
            UExpr::Neg(a) => -a.eval(x),
            UExpr::Abs(a) => a.eval(x).abs(),
            UExpr::Sqrt(a) => a.eval(x).sqrt(),
            UExpr::Powi(a, n) => a.eval(x).powi(*n as i32),
            UExpr::Poly(p) => p.eval(x),
            UExpr::Exp(a) => a.eval(x).exp(),
            UExpr::Ln(a) => a.eval(x).ln(),
        }
    }

    /// Rigorous enclosure of the range over `x`.
    pub fn eval_interval(&self, x: Interval) -> Result<Interval, DomainIssue> {
        Ok(match self {
            UExpr::Const(c) => *c,
            UExpr::Var => x,
            UExpr::Add(a, b) => a.eval_interval(x)? + b.eval_interval(x)?,
            UExpr::Sub(a, b) => a.eval_interval(x)? - b.eval_interval(x)?,
            UExpr::Mul(a, b) => mul_same_var(a, b, x)?,
            UExpr::Div(a, b) => a.eval_interval(x)?.checked_div(b.eval_interval(x)?)?,
            UExpr::Neg(a) => -a.eval_interval(x)?,
            UExpr::Abs(a) => a.eval_interval(x)?.abs(),
            UExpr::Sqrt(a) => a.eval_interval(x)?.sqrt()?,
            UExpr::Powi(a, n) => a.eval_interval(x)?.powi(*n),
            UExpr::Poly(p) => p.eval_interval(x),
            UExpr::Exp(a) => a.eval_interval(x)?.exp(),
            UExpr::Ln(a) => a.eval_interval(x)?.ln()?,
        })
    }
}

// `e * e` is a square; the plain product would lose the sign information.
fn mul_same_var(a: &Arc<UExpr>, b: &Arc<UExpr>, x: Interval) -> Result<Interval, DomainIssue> {
    if Arc::ptr_eq(a, b) {
        return Ok(a.eval_interval(x)?.sqr());
    }
    Ok(a.eval_interval(x)? * b.eval_interval(x)?)
}

impl From<f64> for UExpr {
    fn from(c: f64) -> Self {
        UExpr::constant(c)
    }
}

impl From<UPoly> for UExpr {
    fn from(p: UPoly) -> Self {
        UExpr::Poly(p)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl $trait for UExpr {
            type Output = UExpr;
            fn $method(self, rhs: UExpr) -> UExpr {
                UExpr::$variant(Arc::new(self), Arc::new(rhs))
            }
        }
        impl $trait<f64> for UExpr {
            type Output = UExpr;
            fn $method(self, rhs: f64) -> UExpr {
                UExpr::$variant(Arc::new(self), Arc::new(UExpr::constant(rhs)))
            }
        }
        impl $trait<UExpr> for f64 {
            type Output = UExpr;
            fn $method(self, rhs: UExpr) -> UExpr {
                UExpr::$variant(Arc::new(UExpr::constant(self)), Arc::new(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for UExpr {
    type Output = UExpr;
    fn neg(self) -> UExpr {
        UExpr::Neg(Arc::new(self))
    }
}

impl fmt::Display for UExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UExpr::Const(c) if c.lo == c.hi => write!(f, "{}", c.lo),
            UExpr::Const(c) => write!(f, "{c}"),
            UExpr::Var => write!(f, "u"),
            UExpr::Add(a, b) => write!(f, "({a} + {b})"),
            UExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            UExpr::Mul(a, b) => write!(f, "{a}*{b}"),
            UExpr::Div(a, b) => write!(f, "{a}/{b}"),
            UExpr::Neg(a) => write!(f, "-{a}"),
            UExpr::Abs(a) => write!(f, "|{a}|"),
            UExpr::Sqrt(a) => write!(f, "sqrt({a})"),
            UExpr::Powi(a, n) => write!(f, "{a}^{n}"),
            UExpr::Poly(p) => {
                write!(f, "poly[")?;
                for (i, c) in p.raw_coeffs().iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]·π^{}", p.pi_power())
            }
            UExpr::Exp(a) => write!(f, "exp({a})"),
            UExpr::Ln(a) => write!(f, "ln({a})"),
        }
    }
}
