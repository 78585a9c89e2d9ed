//! The coefficient abstraction shared by every form, and evaluation points.

use std::fmt;

use num_complex::Complex64;

use crate::error::Result;
use crate::expr::Expr;
use crate::laurent::Laurent;
use crate::scalar::{GaussRational, Ring, Scalar};

/// A point of `C^m`, given by its `z` values only; `z̄` is always derived.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<S> {
    values: Vec<S>,
}

impl<S: Scalar> Point<S> {
    pub fn new(values: Vec<S>) -> Self {
        Self { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn to_c64(&self) -> Point<Complex64> {
        Point::new(self.values.iter().map(Scalar::to_c64).collect())
    }
}

impl Point<Complex64> {
    /// A point of the real slice `R^m ⊂ C^m`.
    pub fn real(xs: &[f64]) -> Self {
        Point::new(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }
}

/// Ring of coefficient functions of `z` and `z̄`, closed under the Wirtinger
/// derivatives and under substitution.
pub trait Coeff: Ring + PartialEq + fmt::Display + Send + Sync + 'static {
    /// Scalars that embed as constants.
    type Const: Scalar;

    fn zero(m: usize) -> Self;
    fn constant(m: usize, c: Self::Const) -> Self;
    fn z(m: usize, i: usize) -> Self;
    fn zbar(m: usize, i: usize) -> Self;
    fn is_zero(&self) -> bool;
    fn diff_z(&self, i: usize) -> Self;
    fn diff_zbar(&self, i: usize) -> Self;
    fn conj(&self) -> Self;
    fn is_holomorphic(&self) -> bool;
    /// Substitute `z_i ↦ zs[i]` and `z̄_i ↦ zbars[i]`, producing a coefficient
    /// in the ambient dimension `target`.
    fn substitute(&self, target: usize, zs: &[Self], zbars: &[Self]) -> Result<Self>;
    fn eval_c64(&self, pt: &Point<Complex64>) -> Result<Complex64>;
    fn to_expr(&self) -> Expr;
}

/// Evaluation into a specific scalar type (exact or numeric).
pub trait Evaluate<S: Scalar> {
    fn eval_at(&self, pt: &Point<S>) -> Result<S>;
}

impl<S: Scalar> Coeff for Laurent<S> {
    type Const = S;

    fn zero(m: usize) -> Self {
        Laurent::zero(m)
    }
    fn constant(m: usize, c: S) -> Self {
        Laurent::constant(m, c)
    }
    fn z(m: usize, i: usize) -> Self {
        Laurent::z(m, i)
    }
    fn zbar(m: usize, i: usize) -> Self {
        Laurent::zbar(m, i)
    }
    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }
    fn diff_z(&self, i: usize) -> Self {
        Laurent::diff_z(self, i)
    }
    fn diff_zbar(&self, i: usize) -> Self {
        Laurent::diff_zbar(self, i)
    }
    fn conj(&self) -> Self {
        Laurent::conj(self)
    }
    fn is_holomorphic(&self) -> bool {
        Laurent::is_holomorphic(self)
    }
    fn substitute(&self, target: usize, zs: &[Self], zbars: &[Self]) -> Result<Self> {
        if self.dim() == 0 || zs.is_empty() {
            return Ok(Laurent::constant(target, self.as_constant().unwrap_or_else(S::zero)));
        }
        Laurent::substitute(self, zs, zbars)
    }
    fn eval_c64(&self, pt: &Point<Complex64>) -> Result<Complex64> {
        self.eval_with(pt, Scalar::to_c64)
    }
    fn to_expr(&self) -> Expr {
        Expr::from_laurent(self)
    }
}

impl<S: Scalar> Evaluate<Complex64> for Laurent<S> {
    fn eval_at(&self, pt: &Point<Complex64>) -> Result<Complex64> {
        self.eval_with(pt, Scalar::to_c64)
    }
}

impl Evaluate<GaussRational> for Laurent<GaussRational> {
    fn eval_at(&self, pt: &Point<GaussRational>) -> Result<GaussRational> {
        self.eval_with(pt, Clone::clone)
    }
}

impl Coeff for Expr {
    type Const = Complex64;

    fn zero(_m: usize) -> Self {
        Expr::zero()
    }
    fn constant(_m: usize, c: Complex64) -> Self {
        Expr::constant(c)
    }
    fn z(_m: usize, i: usize) -> Self {
        Expr::z(i)
    }
    fn zbar(_m: usize, i: usize) -> Self {
        Expr::zbar(i)
    }
    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
    fn diff_z(&self, i: usize) -> Self {
        Expr::diff_z(self, i)
    }
    fn diff_zbar(&self, i: usize) -> Self {
        Expr::diff_zbar(self, i)
    }
    fn conj(&self) -> Self {
        Expr::conj(self)
    }
    fn is_holomorphic(&self) -> bool {
        Expr::is_holomorphic(self)
    }
    fn substitute(&self, _target: usize, zs: &[Self], zbars: &[Self]) -> Result<Self> {
        Expr::substitute(self, zs, zbars)
    }
    fn eval_c64(&self, pt: &Point<Complex64>) -> Result<Complex64> {
        self.eval(pt)
    }
    fn to_expr(&self) -> Expr {
        self.clone()
    }
}

impl Evaluate<Complex64> for Expr {
    fn eval_at(&self, pt: &Point<Complex64>) -> Result<Complex64> {
        self.eval(pt)
    }
}
