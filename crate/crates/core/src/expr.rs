//! Expression trees for coefficients that leave the Laurent ring
//! (`cos z₁`, `e^{i z₁}`, `1/√2`, ...). Numeric evaluation and formal
//! differentiation only; the constructors fold constants and nothing more.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::coeff::Point;
use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::scalar::{Ring, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(Complex64),
    Z(usize),
    Zbar(usize),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Powi(Expr, i32),
    Exp(Expr),
    Sin(Expr),
    Cos(Expr),
    Sqrt(Expr),
}

#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Var {
    Z(usize),
    Zbar(usize),
}

impl Expr {
    fn node(n: Node) -> Self {
        Expr(Arc::new(n))
    }

    pub fn kind(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: Complex64) -> Self {
        Self::node(Node::Const(c))
    }

    pub fn real(v: f64) -> Self {
        Self::constant(Complex64::new(v, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    pub fn z(i: usize) -> Self {
        Self::node(Node::Z(i))
    }

    pub fn zbar(i: usize) -> Self {
        Self::node(Node::Zbar(i))
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|c| c == Complex64::new(0.0, 0.0))
    }

    pub fn sum(items: impl IntoIterator<Item = Expr>) -> Self {
        let mut konst = Complex64::new(0.0, 0.0);
        let mut rest = Vec::new();
        for e in items {
            match &*e.0 {
                Node::Const(c) => konst += c,
                Node::Sum(inner) => {
                    for x in inner {
                        match x.as_const() {
                            Some(c) => konst += c,
                            None => rest.push(x.clone()),
                        }
                    }
                }
                _ => rest.push(e),
            }
        }
        if konst != Complex64::new(0.0, 0.0) {
            rest.push(Self::constant(konst));
        }
        match rest.len() {
            0 => Self::zero(),
            1 => rest.pop().unwrap(),
            _ => Self::node(Node::Sum(rest)),
        }
    }

    pub fn product(items: impl IntoIterator<Item = Expr>) -> Self {
        let mut konst = Complex64::new(1.0, 0.0);
        let mut rest = Vec::new();
        for e in items {
            match &*e.0 {
                Node::Const(c) => konst *= c,
                Node::Prod(inner) => {
                    for x in inner {
                        match x.as_const() {
                            Some(c) => konst *= c,
                            None => rest.push(x.clone()),
                        }
                    }
                }
                _ => rest.push(e),
            }
        }
        if konst == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        if konst != Complex64::new(1.0, 0.0) || rest.is_empty() {
            rest.insert(0, Self::constant(konst));
        }
        match rest.len() {
            1 => rest.pop().unwrap(),
            _ => Self::node(Node::Prod(rest)),
        }
    }

    pub fn powi(&self, k: i32) -> Self {
        if k == 0 {
            return Self::one();
        }
        if k == 1 {
            return self.clone();
        }
        match self.as_const() {
            Some(c) if c != Complex64::new(0.0, 0.0) || k > 0 => Self::constant(c.powi(k)),
            _ => Self::node(Node::Powi(self.clone(), k)),
        }
    }

    pub fn exp(&self) -> Self {
        self.unary(Node::Exp, Complex64::exp)
    }

    pub fn sin(&self) -> Self {
        self.unary(Node::Sin, Complex64::sin)
    }

    pub fn cos(&self) -> Self {
        self.unary(Node::Cos, Complex64::cos)
    }

    pub fn sqrt(&self) -> Self {
        self.unary(Node::Sqrt, Complex64::sqrt)
    }

    fn unary(&self, make: fn(Expr) -> Node, fold: fn(Complex64) -> Complex64) -> Self {
        match self.as_const() {
            Some(c) => Self::constant(fold(c)),
            None => Self::node(make(self.clone())),
        }
    }

    fn diff(&self, v: Var) -> Self {
        match &*self.0 {
            Node::Const(_) => Self::zero(),
            Node::Z(i) => Self::real(if v == Var::Z(*i) { 1.0 } else { 0.0 }),
            Node::Zbar(i) => Self::real(if v == Var::Zbar(*i) { 1.0 } else { 0.0 }),
            Node::Sum(items) => Self::sum(items.iter().map(|e| e.diff(v))),
            Node::Prod(items) => Self::sum((0..items.len()).map(|k| {
                Self::product(
                    items
                        .iter()
                        .enumerate()
                        .map(|(j, e)| if j == k { e.diff(v) } else { e.clone() }),
                )
            })),
            Node::Powi(b, k) => {
                Self::product([Self::real(*k as f64), b.powi(k - 1), b.diff(v)])
            }
            Node::Exp(e) => Self::product([self.clone(), e.diff(v)]),
            Node::Sin(e) => Self::product([e.cos(), e.diff(v)]),
            Node::Cos(e) => Self::product([Self::real(-1.0), e.sin(), e.diff(v)]),
            Node::Sqrt(e) => Self::product([Self::real(0.5), self.powi(-1), e.diff(v)]),
        }
    }

    pub fn diff_z(&self, i: usize) -> Self {
        self.diff(Var::Z(i))
    }

    pub fn diff_zbar(&self, i: usize) -> Self {
        self.diff(Var::Zbar(i))
    }

    /// Formal conjugate. Every supported function has real Taylor
    /// coefficients, so conjugation passes through structurally (for `sqrt`
    /// this holds off the negative real axis).
    pub fn conj(&self) -> Self {
        match &*self.0 {
            Node::Const(c) => Self::constant(c.conj()),
            Node::Z(i) => Self::zbar(*i),
            Node::Zbar(i) => Self::z(*i),
            Node::Sum(items) => Self::sum(items.iter().map(Expr::conj)),
            Node::Prod(items) => Self::product(items.iter().map(Expr::conj)),
            Node::Powi(b, k) => b.conj().powi(*k),
            Node::Exp(e) => e.conj().exp(),
            Node::Sin(e) => e.conj().sin(),
            Node::Cos(e) => e.conj().cos(),
            Node::Sqrt(e) => e.conj().sqrt(),
        }
    }

    pub fn is_holomorphic(&self) -> bool {
        match &*self.0 {
            Node::Const(_) | Node::Z(_) => true,
            Node::Zbar(_) => false,
            Node::Sum(items) | Node::Prod(items) => items.iter().all(Expr::is_holomorphic),
            Node::Powi(e, _) | Node::Exp(e) | Node::Sin(e) | Node::Cos(e) | Node::Sqrt(e) => {
                e.is_holomorphic()
            }
        }
    }

    pub fn substitute(&self, zs: &[Expr], zbars: &[Expr]) -> Result<Self> {
        let get = |v: &[Expr], i: usize| {
            v.get(i).cloned().ok_or(Error::Dimension { expected: i + 1, found: v.len() })
        };
        Ok(match &*self.0 {
            Node::Const(_) => self.clone(),
            Node::Z(i) => get(zs, *i)?,
            Node::Zbar(i) => get(zbars, *i)?,
            Node::Sum(items) => {
                Self::sum(items.iter().map(|e| e.substitute(zs, zbars)).collect::<Result<Vec<_>>>()?)
            }
            Node::Prod(items) => Self::product(
                items.iter().map(|e| e.substitute(zs, zbars)).collect::<Result<Vec<_>>>()?,
            ),
            Node::Powi(b, k) => b.substitute(zs, zbars)?.powi(*k),
            Node::Exp(e) => e.substitute(zs, zbars)?.exp(),
            Node::Sin(e) => e.substitute(zs, zbars)?.sin(),
            Node::Cos(e) => e.substitute(zs, zbars)?.cos(),
            Node::Sqrt(e) => e.substitute(zs, zbars)?.sqrt(),
        })
    }

    pub fn eval(&self, pt: &Point<Complex64>) -> Result<Complex64> {
        let at = |i: usize| {
            pt.values().get(i).copied().ok_or(Error::Dimension { expected: i + 1, found: pt.dim() })
        };
        Ok(match &*self.0 {
            Node::Const(c) => *c,
            Node::Z(i) => at(*i)?,
            Node::Zbar(i) => at(*i)?.conj(),
            Node::Sum(items) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in items {
                    acc += e.eval(pt)?;
                }
                acc
            }
            Node::Prod(items) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for e in items {
                    acc *= e.eval(pt)?;
                }
                acc
            }
            Node::Powi(b, k) => {
                let v = b.eval(pt)?;
                if *k < 0 && v == Complex64::new(0.0, 0.0) {
                    return Err(Error::Pole { coord: pole_coord(b) });
                }
                v.powi(*k)
            }
            Node::Exp(e) => e.eval(pt)?.exp(),
            Node::Sin(e) => e.eval(pt)?.sin(),
            Node::Cos(e) => e.eval(pt)?.cos(),
            Node::Sqrt(e) => e.eval(pt)?.sqrt(),
        })
    }

    pub fn from_laurent<S: Scalar>(p: &Laurent<S>) -> Self {
        Self::sum(p.terms().map(|(mono, c)| {
            let mut factors = vec![Self::constant(c.to_c64())];
            for (i, &e) in mono.zexp.iter().enumerate() {
                if e != 0 {
                    factors.push(Self::z(i).powi(e));
                }
            }
            for (i, &e) in mono.zbarexp.iter().enumerate() {
                if e != 0 {
                    factors.push(Self::zbar(i).powi(e));
                }
            }
            Self::product(factors)
        }))
    }
}

fn pole_coord(e: &Expr) -> usize {
    match e.kind() {
        Node::Z(i) | Node::Zbar(i) => *i,
        _ => usize::MAX,
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, items: &[Expr], sep: &str| -> fmt::Result {
            write!(f, "(")?;
            for (k, e) in items.iter().enumerate() {
                if k > 0 {
                    write!(f, "{sep}")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, ")")
        };
        match &*self.0 {
            Node::Const(c) if c.im == 0.0 => write!(f, "{}", c.re),
            Node::Const(c) => write!(f, "({}{:+}i)", c.re, c.im),
            Node::Z(i) => write!(f, "z{}", i + 1),
            Node::Zbar(i) => write!(f, "zbar{}", i + 1),
            Node::Sum(items) => join(f, items, " + "),
            Node::Prod(items) => join(f, items, "*"),
            Node::Powi(b, k) => write!(f, "{b}^{k}"),
            Node::Exp(e) => write!(f, "exp({e})"),
            Node::Sin(e) => write!(f, "sin({e})"),
            Node::Cos(e) => write!(f, "cos({e})"),
            Node::Sqrt(e) => write!(f, "sqrt({e})"),
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        Expr::sum([self, o])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        Expr::sum([self, -o])
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        Expr::product([self, o])
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product([Expr::real(-1.0), self])
    }
}

impl Ring for Expr {
    fn zero_like(&self) -> Self {
        Expr::zero()
    }
    fn int_like(&self, k: i64) -> Self {
        Expr::real(k as f64)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}
