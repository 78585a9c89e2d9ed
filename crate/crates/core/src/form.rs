//! Differential forms on `C^m` over the covector basis
//! `dz_1 < … < dz_m < dz̄_1 < … < dz̄_m`.
//!
//! A term is a strictly increasing word of basis indices with a nonzero
//! coefficient. Index `b < m` stands for `dz_{b+1}`, index `m + b` for
//! `dz̄_{b+1}`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::coeff::{Coeff, Evaluate, Point};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::laurent::Laurent;
use crate::polymap::PolyMap;
use crate::scalar::{GaussRational, Scalar};

pub type Word = Vec<u8>;

/// Exact Laurent forms, the workhorse for identities.
pub type LaurentForm = Form<Laurent<GaussRational>>;
/// Forms whose coefficients are expression trees.
pub type ExprForm = Form<Expr>;

/// Sorts `word` in place and returns the permutation sign, or `None` when a
/// covector repeats.
pub fn normalize_word(word: &mut Word) -> Option<i8> {
    let mut sign = 1i8;
    // insertion sort, counting transpositions
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && word[j - 1] > word[j] {
            word.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if word.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Concatenates two sorted words, returning the sorted result and the sign.
pub fn wedge_words(u: &[u8], v: &[u8]) -> Option<(Word, i8)> {
    let mut inversions = 0usize;
    for &b in v {
        let mut greater = 0;
        for &a in u {
            if a == b {
                return None;
            }
            if a > b {
                greater += 1;
            }
        }
        inversions += greater;
    }
    let mut w: Word = u.iter().chain(v).copied().collect();
    w.sort_unstable();
    Some((w, if inversions % 2 == 0 { 1 } else { -1 }))
}

pub fn basis_name(m: usize, b: u8) -> String {
    let b = b as usize;
    if b < m {
        format!("dz{}", b + 1)
    } else {
        format!("dzbar{}", b - m + 1)
    }
}

pub fn parse_basis_name(m: usize, s: &str) -> Result<u8> {
    let (base, rest) = if let Some(r) = s.strip_prefix("dzbar") {
        (m, r)
    } else if let Some(r) = s.strip_prefix("dz") {
        (0, r)
    } else {
        return Err(Error::Parse(format!("unknown basis covector {s:?}")));
    };
    let k: usize = rest.parse().map_err(|_| Error::Parse(format!("bad covector index in {s:?}")))?;
    if k == 0 || k > m {
        return Err(Error::Parse(format!("covector {s:?} out of range for m = {m}")));
    }
    Ok((base + k - 1) as u8)
}

#[derive(Clone, PartialEq)]
pub struct Form<C: Coeff> {
    m: usize,
    degree: usize,
    terms: BTreeMap<Word, C>,
}

impl<C: Coeff> Form<C> {
    pub fn zero(m: usize, degree: usize) -> Self {
        Self { m, degree, terms: BTreeMap::new() }
    }

    /// The 0-form given by a function.
    pub fn function(m: usize, f: C) -> Self {
        let mut out = Self::zero(m, 0);
        out.add_term(Word::new(), f);
        out
    }

    /// `coeff · dw_1 ∧ … ∧ dw_k` for an arbitrary (unsorted) word.
    pub fn monomial(m: usize, word: &[u8], coeff: C) -> Result<Self> {
        if let Some(&b) = word.iter().find(|&&b| b as usize >= 2 * m) {
            return Err(Error::Invalid(format!("basis index {b} out of range for m = {m}")));
        }
        let mut w = word.to_vec();
        let mut out = Self::zero(m, word.len());
        if let Some(sign) = normalize_word(&mut w) {
            let c = if sign < 0 { -coeff } else { coeff };
            out.add_term(w, c);
        }
        Ok(out)
    }

    pub fn dz(m: usize, i: usize) -> Self {
        Self::monomial(m, &[i as u8], C::constant(m, C::Const::one())).expect("index in range")
    }

    pub fn dzbar(m: usize, i: usize) -> Self {
        Self::monomial(m, &[(m + i) as u8], C::constant(m, C::Const::one())).expect("index in range")
    }

    /// `Σ a_i dz_i + Σ b_i dz̄_i`; either slice may be empty.
    pub fn one_form(m: usize, a: Vec<C>, b: Vec<C>) -> Result<Self> {
        if a.len() > m || b.len() > m {
            return Err(Error::Dimension { expected: m, found: a.len().max(b.len()) });
        }
        let mut out = Self::zero(m, 1);
        for (i, c) in a.into_iter().enumerate() {
            out.add_term(vec![i as u8], c);
        }
        for (i, c) in b.into_iter().enumerate() {
            out.add_term(vec![(m + i) as u8], c);
        }
        Ok(out)
    }

    /// `Σ_{i<j} β_{ij} dz_i ∧ dz_j` from a strictly upper-triangular table.
    pub fn two_form_holomorphic(m: usize, beta: impl Fn(usize, usize) -> C) -> Self {
        let mut out = Self::zero(m, 2);
        for i in 0..m {
            for j in i + 1..m {
                out.add_term(vec![i as u8, j as u8], beta(i, j));
            }
        }
        out
    }

    pub fn from_terms(m: usize, degree: usize, terms: impl IntoIterator<Item = (Word, C)>) -> Result<Self> {
        let mut out = Self::zero(m, degree);
        for (w, c) in terms {
            if w.len() != degree {
                return Err(Error::Degree(format!("word of length {} in a {degree}-form", w.len())));
            }
            out = out.add(&Self::monomial(m, &w, c)?)?;
        }
        Ok(out)
    }

    fn add_term(&mut self, word: Word, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&word) {
            Some(prev) => {
                let sum = prev + c;
                if !sum.is_zero() {
                    self.terms.insert(word, sum);
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &[u8]) -> C {
        self.terms.get(word).cloned().unwrap_or_else(|| C::zero(self.m))
    }

    /// Coefficient of `dz_i` (0-based).
    pub fn dz_coefficient(&self, i: usize) -> C {
        self.coefficient(&[i as u8])
    }

    /// Coefficient of `dz̄_i` (0-based).
    pub fn dzbar_coefficient(&self, i: usize) -> C {
        self.coefficient(&[(self.m + i) as u8])
    }

    /// Coefficient of `dz_1 ∧ … ∧ dz_m`.
    pub fn top_coefficient(&self) -> C {
        let w: Word = (0..self.m as u8).collect();
        self.coefficient(&w)
    }

    /// `(p, q)` counts of a word.
    pub fn word_type(&self, w: &[u8]) -> (usize, usize) {
        let p = w.iter().filter(|&&b| (b as usize) < self.m).count();
        (p, w.len() - p)
    }

    /// True iff every term has exactly `p` holomorphic covectors.
    pub fn is_of_type(&self, p: usize, q: usize) -> bool {
        p + q == self.degree && self.terms.keys().all(|w| self.word_type(w) == (p, q))
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.m != o.m {
            return Err(Error::Dimension { expected: self.m, found: o.m });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        if self.degree != o.degree && !self.is_zero() && !o.is_zero() {
            return Err(Error::Degree(format!("adding a {}-form and a {}-form", self.degree, o.degree)));
        }
        let mut out = if self.is_zero() { Self::zero(self.m, o.degree) } else { self.clone() };
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_terms(|c| -c.clone())
    }

    /// Multiplies every coefficient by the function `f`.
    pub fn mul_function(&self, f: &C) -> Self {
        self.map_terms(|c| c.clone() * f.clone())
    }

    pub fn scale(&self, k: &C::Const) -> Self {
        self.mul_function(&C::constant(self.m, k.clone()))
    }

    fn map_terms(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.m, self.degree);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    pub fn map_coefficients<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.m, self.degree);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    pub fn to_expr(&self) -> ExprForm {
        self.map_coefficients(Coeff::to_expr)
    }

    pub fn wedge(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let degree = self.degree + o.degree;
        let mut out = Self::zero(self.m, degree);
        if degree > 2 * self.m {
            return Ok(out);
        }
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                if let Some((w, sign)) = wedge_words(u, v) {
                    let prod = a.clone() * b.clone();
                    out.add_term(w, if sign < 0 { -prod } else { prod });
                }
            }
        }
        Ok(out)
    }

    /// `k`-th wedge power (`k = 0` gives the constant 0-form 1).
    pub fn wedge_power(&self, k: usize) -> Result<Self> {
        let mut acc = Self::function(self.m, C::constant(self.m, C::Const::one()));
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    fn differential(&self, holo: bool, anti: bool) -> Self {
        let m = self.m;
        let mut out = Self::zero(m, self.degree + 1);
        for (w, c) in &self.terms {
            for i in 0..m {
                let parts = [(holo, i, c.diff_z(i)), (anti, m + i, c.diff_zbar(i))];
                for (on, b, dc) in parts {
                    if !on || dc.is_zero() {
                        continue;
                    }
                    if let Some((word, sign)) = wedge_words(&[b as u8], w) {
                        out.add_term(word, if sign < 0 { -dc } else { dc });
                    }
                }
            }
        }
        out
    }

    /// Exterior derivative `d = ∂ + ∂̄`.
    pub fn ext_d(&self) -> Self {
        self.differential(true, true)
    }

    pub fn del(&self) -> Self {
        self.differential(true, false)
    }

    pub fn del_bar(&self) -> Self {
        self.differential(false, true)
    }

    pub fn pq_part(&self, p: usize, q: usize) -> Result<Self> {
        if p + q != self.degree {
            return Err(Error::Degree(format!("type ({p},{q}) requested from a {}-form", self.degree)));
        }
        let mut out = Self::zero(self.m, self.degree);
        for (w, c) in &self.terms {
            if self.word_type(w) == (p, q) {
                out.add_term(w.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// `F^* f` for `F: C^{m'} → C^m`.
    pub fn pullback(&self, map: &PolyMap<C>) -> Result<Self> {
        if map.target_dim() != self.m {
            return Err(Error::Dimension { expected: self.m, found: map.target_dim() });
        }
        let src = map.source_dim();
        let comps = map.components();
        let conjs: Vec<C> = comps.iter().map(Coeff::conj).collect();
        // images of dz_i and dz̄_i as 1-forms on the source
        let image = |f: &C| -> Self {
            let a = (0..src).map(|j| f.diff_z(j)).collect();
            let b = (0..src).map(|j| f.diff_zbar(j)).collect();
            Self::one_form(src, a, b).expect("sizes match")
        };
        let dz_img: Vec<Self> = comps.iter().map(image).collect();
        let dzb_img: Vec<Self> = conjs.iter().map(image).collect();
        let mut out = Self::zero(src, self.degree);
        for (w, c) in &self.terms {
            let mut acc = Self::function(src, c.substitute(src, comps, &conjs)?);
            for &b in w {
                let b = b as usize;
                let img = if b < self.m { &dz_img[b] } else { &dzb_img[b - self.m] };
                acc = acc.wedge(img)?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    pub fn evaluate<S: Scalar>(&self, pt: &Point<S>) -> Result<EvaluatedForm<S>>
    where
        C: Evaluate<S>,
    {
        if pt.dim() != self.m {
            return Err(Error::Dimension { expected: self.m, found: pt.dim() });
        }
        let mut comps = BTreeMap::new();
        for (w, c) in &self.terms {
            let v = c.eval_at(pt)?;
            if !v.is_zero() {
                comps.insert(w.clone(), v);
            }
        }
        Ok(EvaluatedForm { m: self.m, degree: self.degree, comps })
    }

    /// True when every coefficient is independent of `z̄`.
    pub fn has_holomorphic_coefficients(&self) -> bool {
        self.terms.values().all(Coeff::is_holomorphic)
    }
}

impl<C: Coeff> fmt::Debug for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Coeff> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]")?;
            for &b in w {
                write!(f, " {}", basis_name(self.m, b))?;
            }
        }
        Ok(())
    }
}

/// Pointwise values of a form: one scalar per wedge word.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluatedForm<S> {
    pub m: usize,
    pub degree: usize,
    pub comps: BTreeMap<Word, S>,
}

impl<S: Scalar> EvaluatedForm<S> {
    pub fn component(&self, word: &[u8]) -> S {
        self.comps.get(word).cloned().unwrap_or_else(S::zero)
    }

    pub fn top_component(&self) -> S {
        let w: Word = (0..self.m as u8).collect();
        self.component(&w)
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut comps: BTreeMap<Word, S> = BTreeMap::new();
        for (u, a) in &self.comps {
            for (v, b) in &o.comps {
                if let Some((w, sign)) = wedge_words(u, v) {
                    let p = a.clone() * b.clone();
                    let p = if sign < 0 { -p } else { p };
                    let e = comps.entry(w).or_insert_with(S::zero);
                    *e = e.clone() + p;
                }
            }
        }
        comps.retain(|_, v| !v.is_zero());
        Self { m: self.m, degree: self.degree + o.degree, comps }
    }

    pub fn to_c64(&self) -> EvaluatedForm<Complex64> {
        EvaluatedForm {
            m: self.m,
            degree: self.degree,
            comps: self.comps.iter().map(|(w, v)| (w.clone(), v.to_c64())).collect(),
        }
    }

    /// Largest component modulus.
    pub fn max_norm(&self) -> f64 {
        self.comps.values().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// Largest componentwise distance to `o`.
    pub fn distance(&self, o: &Self) -> f64 {
        let words: std::collections::BTreeSet<&Word> = self.comps.keys().chain(o.comps.keys()).collect();
        words
            .into_iter()
            .map(|w| (self.component(w) - o.component(w)).abs_f64())
            .fold(0.0, f64::max)
    }
}
