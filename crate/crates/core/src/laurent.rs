//! Laurent polynomials in `z_1..z_m` and `z̄_1..z̄_m`.
//!
//! `z̄_i` is an independent formal variable: `∂/∂z̄_i` differentiates in it and
//! conjugation is only imposed when a value is assigned at a [`Point`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::Point;
use crate::error::{Error, Result};
use crate::scalar::{Ring, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub zexp: Vec<i32>,
    pub zbarexp: Vec<i32>,
}

impl Monomial {
    pub fn one(m: usize) -> Self {
        Self { zexp: vec![0; m], zbarexp: vec![0; m] }
    }

    pub fn new(zexp: Vec<i32>, zbarexp: Vec<i32>) -> Result<Self> {
        if zexp.len() != zbarexp.len() {
            return Err(Error::Dimension { expected: zexp.len(), found: zbarexp.len() });
        }
        Ok(Self { zexp, zbarexp })
    }

    pub fn dim(&self) -> usize {
        self.zexp.len()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.zbarexp.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> i32 {
        self.zexp.iter().chain(&self.zbarexp).sum()
    }

    pub fn has_negative(&self) -> bool {
        self.zexp.iter().chain(&self.zbarexp).any(|&e| e < 0)
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            zexp: self.zexp.iter().zip(&o.zexp).map(|(a, b)| a + b).collect(),
            zbarexp: self.zbarexp.iter().zip(&o.zbarexp).map(|(a, b)| a + b).collect(),
        }
    }

    fn conj(&self) -> Self {
        Self { zexp: self.zbarexp.clone(), zbarexp: self.zexp.clone() }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut put = |f: &mut fmt::Formatter<'_>, name: &str, i: usize, e: i32| -> fmt::Result {
            if e == 0 {
                return Ok(());
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{name}{}", i + 1)
            } else {
                write!(f, "{name}{}^{e}", i + 1)
            }
        };
        for (i, &e) in self.zexp.iter().enumerate() {
            put(f, "z", i, e)?;
        }
        for (i, &e) in self.zbarexp.iter().enumerate() {
            put(f, "zbar", i, e)?;
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Finite sum of monomials with nonzero scalar coefficients, kept in the
/// canonical (lexicographic) monomial order of the map.
#[derive(Clone, PartialEq)]
pub struct Laurent<S: Scalar> {
    m: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Laurent<S> {
    pub fn zero(m: usize) -> Self {
        Self { m, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: S) -> Self {
        Self::term(m, Monomial::one(m), c)
    }

    pub fn term(m: usize, mono: Monomial, c: S) -> Self {
        assert_eq!(mono.dim(), m, "monomial dimension");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Self { m, terms }
    }

    pub fn z(m: usize, i: usize) -> Self {
        Self::z_pow(m, i, 1)
    }

    pub fn zbar(m: usize, i: usize) -> Self {
        let mut mono = Monomial::one(m);
        mono.zbarexp[i] = 1;
        Self::term(m, mono, S::one())
    }

    pub fn z_pow(m: usize, i: usize, e: i32) -> Self {
        let mut mono = Monomial::one(m);
        mono.zexp[i] = e;
        Self::term(m, mono, S::one())
    }

    /// `c · z^zexp`, a holomorphic monomial.
    pub fn z_monomial(c: S, zexp: &[i32]) -> Self {
        let m = zexp.len();
        Self::term(m, Monomial { zexp: zexp.to_vec(), zbarexp: vec![0; m] }, c)
    }

    pub fn from_terms(m: usize, it: impl IntoIterator<Item = (Monomial, S)>) -> Result<Self> {
        let mut out = Self::zero(m);
        for (mono, c) in it {
            if mono.dim() != m {
                return Err(Error::Dimension { expected: m, found: mono.dim() });
            }
            out.add_term(mono, c);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(Monomial::is_holomorphic)
    }

    /// The constant coefficient if this is a constant.
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => {
                let (mono, c) = self.terms.iter().next()?;
                (*mono == Monomial::one(self.m)).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, mono: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&mono) {
            Some(prev) => {
                let sum = prev + c;
                if !sum.is_zero() {
                    self.terms.insert(mono, sum);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.m);
        }
        Self {
            m: self.m,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.m, S::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn diff_z(&self, i: usize) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            let e = mono.zexp[i];
            if e != 0 {
                let mut m2 = mono.clone();
                m2.zexp[i] -= 1;
                out.add_term(m2, c.clone() * S::from_i64(e as i64));
            }
        }
        out
    }

    pub fn diff_zbar(&self, i: usize) -> Self {
        let mut out = Self::zero(self.m);
        for (mono, c) in &self.terms {
            let e = mono.zbarexp[i];
            if e != 0 {
                let mut m2 = mono.clone();
                m2.zbarexp[i] -= 1;
                out.add_term(m2, c.clone() * S::from_i64(e as i64));
            }
        }
        out
    }

    /// Formal conjugate: swaps `z ↔ z̄` exponents and conjugates coefficients.
    pub fn conj(&self) -> Self {
        Self {
            m: self.m,
            terms: self.terms.iter().map(|(k, v)| (k.conj(), v.conj())).collect(),
        }
    }

    /// Multiplicative inverse, available only for single-term polynomials.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (mono, c) = self.terms.iter().next()?;
        let inv = Monomial {
            zexp: mono.zexp.iter().map(|e| -e).collect(),
            zbarexp: mono.zbarexp.iter().map(|e| -e).collect(),
        };
        Some(Self::term(self.m, inv, c.inv()?))
    }

    /// Substitutes `z_i ↦ zs[i]`, `z̄_i ↦ zbars[i]`. The images live in a
    /// (possibly different) dimension `m'`. Negative exponents require the
    /// corresponding image to be a monomial.
    pub fn substitute(&self, zs: &[Self], zbars: &[Self]) -> Result<Self> {
        if zs.len() != self.m || zbars.len() != self.m {
            return Err(Error::Dimension { expected: self.m, found: zs.len().min(zbars.len()) });
        }
        let target = zs.first().map_or(self.m, Self::dim);
        let power = |base: &Self, e: i32, idx: usize| -> Result<Self> {
            if e >= 0 {
                Ok(base.pow(e as u32))
            } else {
                base.monomial_inverse()
                    .map(|inv| inv.pow(e.unsigned_abs()))
                    .ok_or(Error::NonMonomialInverse(idx))
            }
        };
        let mut out = Self::zero(target);
        for (mono, c) in &self.terms {
            let mut prod = Self::constant(target, c.clone());
            for i in 0..self.m {
                if mono.zexp[i] != 0 {
                    prod = &prod * &power(&zs[i], mono.zexp[i], i)?;
                }
                if mono.zbarexp[i] != 0 {
                    prod = &prod * &power(&zbars[i], mono.zbarexp[i], i)?;
                }
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    /// Evaluates after lifting coefficients into `T`; `z̄_i` takes the
    /// conjugate of the point's `z_i`.
    pub fn eval_with<T: Scalar>(&self, pt: &Point<T>, lift: impl Fn(&S) -> T) -> Result<T> {
        if pt.dim() != self.m {
            return Err(Error::Dimension { expected: self.m, found: pt.dim() });
        }
        let zb: Vec<T> = pt.values().iter().map(Scalar::conj).collect();
        let mut acc = T::zero();
        for (mono, c) in &self.terms {
            let mut v = lift(c);
            for i in 0..self.m {
                for (vals, e) in [(pt.values(), mono.zexp[i]), (&zb[..], mono.zbarexp[i])] {
                    if e != 0 {
                        v = v * vals[i].powi(e).ok_or(Error::Pole { coord: i })?;
                    }
                }
            }
            acc = acc + v;
        }
        Ok(acc)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Laurent<T> {
        let mut out = Laurent::zero(self.m);
        for (mono, c) in &self.terms {
            out.add_term(mono.clone(), f(c));
        }
        out
    }
}

impl<S: Scalar> fmt::Debug for Laurent<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<S: Scalar> fmt::Display for Laurent<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (mono, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}*{mono}")?;
        }
        Ok(())
    }
}

impl<'a, S: Scalar> Add<&'a Laurent<S>> for &'a Laurent<S> {
    type Output = Laurent<S>;
    fn add(self, o: &Laurent<S>) -> Laurent<S> {
        let mut out = self.clone();
        for (mono, c) in &o.terms {
            out.add_term(mono.clone(), c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Sub<&'a Laurent<S>> for &'a Laurent<S> {
    type Output = Laurent<S>;
    fn sub(self, o: &Laurent<S>) -> Laurent<S> {
        let mut out = self.clone();
        for (mono, c) in &o.terms {
            out.add_term(mono.clone(), -c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Mul<&'a Laurent<S>> for &'a Laurent<S> {
    type Output = Laurent<S>;
    fn mul(self, o: &Laurent<S>) -> Laurent<S> {
        let mut out = Laurent::zero(self.m);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Add for Laurent<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl<S: Scalar> Sub for Laurent<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl<S: Scalar> Mul for Laurent<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<S: Scalar> Neg for Laurent<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            m: self.m,
            terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl<S: Scalar> Ring for Laurent<S> {
    fn zero_like(&self) -> Self {
        Self::zero(self.m)
    }
    fn int_like(&self, k: i64) -> Self {
        Self::constant(self.m, S::from_i64(k))
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}
