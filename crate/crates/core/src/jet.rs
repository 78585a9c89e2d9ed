//! First-order jets `(a, p)` with `p_ij = ∂a_i/∂x_j`, the open relation
//! `R = {h ≠ 0}` with `h = Σ_i (−1)^i a_i b_i(skew p)`, and its slices.
//!
//! Indices are 0-based throughout.

use crate::coeff::{Coeff, Evaluate, Point};
use crate::contact::{formal_value, half_dim, SkewMatrix};
use crate::error::{Error, Result};
use crate::form::Form;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet1<S> {
    pub n: usize,
    /// Base point, kept for reports only; `h` does not depend on it.
    pub base: Vec<f64>,
    pub a: Vec<S>,
    pub p: Vec<Vec<S>>,
}

impl<S: Scalar> Jet1<S> {
    pub fn new(base: Vec<f64>, a: Vec<S>, p: Vec<Vec<S>>) -> Result<Self> {
        let m = a.len();
        let n = half_dim(m)?;
        if p.len() != m {
            return Err(Error::Dimension { expected: m, found: p.len() });
        }
        if let Some(row) = p.iter().find(|r| r.len() != m) {
            return Err(Error::Dimension { expected: m, found: row.len() });
        }
        Ok(Self { n, base, a, p })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn beta(&self) -> SkewMatrix<S> {
        SkewMatrix::skew_part(&self.p, S::zero())
    }

    pub fn restrict(&self, row: usize) -> Result<RestrictedJet<S>> {
        if row >= self.dim() {
            return Err(Error::Invalid(format!("row {row} out of range for dimension {}", self.dim())));
        }
        Ok(RestrictedJet { jet: self.clone(), omitted: row })
    }
}

/// `h(j)`; the jet lies in `R` iff this is nonzero.
pub fn relation_value<S: Scalar>(j: &Jet1<S>) -> S {
    formal_value(&j.a, &j.beta()).expect("Jet1 dimensions are validated at construction")
}

/// A jet with row `omitted` free. The stored row is ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedJet<S> {
    pub jet: Jet1<S>,
    pub omitted: usize,
}

impl<S: Scalar> RestrictedJet<S> {
    /// `h` with the free row set to `row`.
    pub fn value_at(&self, row: &[S]) -> S {
        let mut j = self.jet.clone();
        j.p[self.omitted] = row.to_vec();
        relation_value(&j)
    }
}

/// The set of admissible values of a free row (or column):
/// `{r : ⟨w, r⟩ + c ≠ 0}` with `⟨w, r⟩ = Σ w_k r_k` (no conjugation).
#[derive(Clone, Debug, PartialEq)]
pub enum SliceClass<S> {
    Empty,
    Full { c: S },
    HyperplaneComplement { w: Vec<S>, c: S },
}

impl<S: Scalar> SliceClass<S> {
    /// `⟨w, r⟩ + c`, or `0` for `Empty`.
    pub fn affine_value(&self, r: &[S]) -> S {
        match self {
            SliceClass::Empty => S::zero(),
            SliceClass::Full { c } => c.clone(),
            SliceClass::HyperplaneComplement { w, c } => {
                w.iter().zip(r).fold(c.clone(), |acc, (wk, rk)| acc + wk.clone() * rk.clone())
            }
        }
    }

    pub fn contains(&self, r: &[S]) -> bool {
        !self.affine_value(r).is_zero()
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SliceClass::Empty)
    }

    /// Classifies an affine function from its value `c` at the origin and
    /// its increments `w`.
    fn from_affine(w: Vec<S>, c: S) -> Self {
        match (w.iter().all(Scalar::is_zero), c.is_zero()) {
            (true, true) => SliceClass::Empty,
            (true, false) => SliceClass::Full { c },
            _ => SliceClass::HyperplaneComplement { w, c },
        }
    }
}

/// Decomposes an affine `f: S^m → S` by probing at `0` and at unit vectors.
fn probe_affine<S: Scalar>(m: usize, mut f: impl FnMut(&[S]) -> S) -> SliceClass<S> {
    let mut r = vec![S::zero(); m];
    let c = f(&r);
    let w = (0..m)
        .map(|k| {
            r[k] = S::one();
            let v = f(&r) - c.clone();
            r[k] = S::zero();
            v
        })
        .collect();
    SliceClass::from_affine(w, c)
}

/// The slice of `R` through a restricted jet, as a function of the free row.
pub fn ampleness_slice<S: Scalar>(e: &RestrictedJet<S>) -> SliceClass<S> {
    probe_affine(e.jet.dim(), |row| e.value_at(row))
}

/// The slice of `R` as a function of column `col` of `p`, i.e. of the
/// derivative in direction `x_col`, other entries fixed.
pub fn column_slice<S: Scalar>(j: &Jet1<S>, col: usize) -> SliceClass<S> {
    let mut work = j.clone();
    probe_affine(j.dim(), move |column: &[S]| {
        for (row, v) in work.p.iter_mut().zip(column) {
            row[col] = v.clone();
        }
        relation_value(&work)
    })
}

/// The 1-jet of the `dz` coefficients of `α` at `pt`, with `p_ij = ∂a_i/∂z_j`.
pub fn holonomic_jet<C, S>(alpha: &Form<C>, pt: &Point<S>) -> Result<Jet1<S>>
where
    C: Coeff + Evaluate<S>,
    S: Scalar,
{
    if alpha.degree() != 1 {
        return Err(Error::Degree(format!("expected a 1-form, got degree {}", alpha.degree())));
    }
    let m = alpha.dim();
    if pt.dim() != m {
        return Err(Error::Dimension { expected: m, found: pt.dim() });
    }
    let coeffs: Vec<C> = (0..m).map(|i| alpha.dz_coefficient(i)).collect();
    let a = coeffs.iter().map(|c| c.eval_at(pt)).collect::<Result<Vec<_>>>()?;
    let p = coeffs
        .iter()
        .map(|c| (0..m).map(|j| c.diff_z(j).eval_at(pt)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let base = pt.values().iter().map(|v| v.to_c64().re).collect();
    Jet1::new(base, a, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::contact_defect;
    use crate::laurent::Laurent;
    use crate::scalar::GaussRational as Q;
    use crate::LaurentForm;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    fn zeros() -> Vec<Vec<Q>> {
        vec![vec![q(0); 3]; 3]
    }

    fn std3() -> LaurentForm {
        Form::dz(3, 2).add(&Form::dz(3, 1).mul_function(&Laurent::z(3, 0))).unwrap()
    }

    #[test]
    fn relation_value_examples() {
        let mut p = zeros();
        p[1][0] = q(1);
        let j = Jet1::new(vec![0.0; 3], vec![q(0), Q::from_ratio(7, 3), q(1)], p).unwrap();
        assert_eq!(relation_value(&j), q(1));
        let j = Jet1::new(vec![0.0; 3], vec![q(0); 3], vec![vec![q(5); 3]; 3]).unwrap();
        assert_eq!(relation_value(&j), q(0));
        let j = Jet1::new(vec![0.0; 3], vec![q(0), q(0), q(1)], zeros()).unwrap();
        assert_eq!(relation_value(&j), q(0));
    }

    #[test]
    fn ampleness_examples() {
        let j = Jet1::new(vec![0.0; 3], vec![q(0), q(0), q(1)], zeros()).unwrap();
        let s = ampleness_slice(&j.restrict(0).unwrap());
        assert_eq!(s, SliceClass::HyperplaneComplement { w: vec![q(0), q(-1), q(0)], c: q(0) });

        let mut p = zeros();
        p[2][1] = q(1);
        let j = Jet1::new(vec![0.0; 3], vec![q(1), q(0), q(0)], p).unwrap();
        assert_eq!(ampleness_slice(&j.restrict(0).unwrap()), SliceClass::Full { c: q(1) });

        let j = Jet1::new(vec![0.0; 3], vec![q(0); 3], vec![vec![q(2); 3]; 3]).unwrap();
        for i in 0..3 {
            assert!(ampleness_slice(&j.restrict(i).unwrap()).is_empty());
        }
    }

    #[test]
    fn column_slice_of_constant_dz3() {
        let j = Jet1::new(vec![0.0; 3], vec![q(0), q(0), q(1)], zeros()).unwrap();
        // h = β_01 = p_10 − p_01: column 1 enters through p_01.
        assert_eq!(column_slice(&j, 1), SliceClass::HyperplaneComplement { w: vec![q(-1), q(0), q(0)], c: q(0) });
        assert!(column_slice(&j, 2).is_empty());
    }

    #[test]
    fn holonomic_jet_examples() {
        let pt = Point::new(vec![Q::from_parts(1, 2, 3, 1), q(-2), q(4)]);
        let j = holonomic_jet(&std3(), &pt).unwrap();
        let mut p = zeros();
        p[1][0] = q(1);
        assert_eq!(j.p, p);
        assert_eq!(j.a, vec![q(0), Q::from_parts(1, 2, 3, 1), q(1)]);
        assert_eq!(relation_value(&j), q(1));
        let j = holonomic_jet(&LaurentForm::dz(3, 2), &pt).unwrap();
        assert_eq!(j.p, zeros());
    }

    #[test]
    fn consistent_with_contact_defect() {
        let z = |i| Laurent::<Q>::z(3, i);
        let a0 = &z(1) * &z(2) + Laurent::constant(3, q(2));
        let a1 = &(&z(0) * &z(0)) * &z(2);
        let a2 = Laurent::constant(3, q(1)) + Laurent::zbar(3, 0);
        let alpha = Form::one_form(3, vec![a0, a1, a2], vec![Laurent::zero(3); 3]).unwrap();
        let top = contact_defect(&alpha).unwrap().top_coefficient();
        for pt in [
            Point::new(vec![q(1), q(2), q(3)]),
            Point::new(vec![Q::from_parts(1, 3, -1, 2), q(0), Q::from_parts(0, 1, 5, 7)]),
        ] {
            let j = holonomic_jet(&alpha, &pt).unwrap();
            assert_eq!(relation_value(&j), top.eval_at(&pt).unwrap());
        }
    }
}
