//! Contact and formal-contact conditions.
//!
//! For a (1,0)-form `α = Σ a_i dz_i` and a (2,0)-form `β = Σ_{i<j} β_ij dz_i∧dz_j`
//! on `C^{2n+1}`,
//!
//! ```text
//! β^n = Σ_i b_i dz_1∧…∧(dz_i omitted)∧…∧dz_{2n+1},   b_i = n!·Pf(β with row/column i removed)
//! α∧β^n = (Σ_i (−1)^i a_i b_i) dz_1∧…∧dz_{2n+1}      (0-based i)
//! ```

use num_complex::Complex64;

use crate::coeff::{Coeff, Point};
use crate::error::{Error, Result};
use crate::form::Form;
use crate::report::VerificationReport;
use crate::scalar::{Ring, Scalar};

/// `n` such that `m = 2n + 1`, `n ≥ 1`.
pub fn half_dim(m: usize) -> Result<usize> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::EvenDimension(m));
    }
    Ok((m - 1) / 2)
}

/// Antisymmetric matrix stored by its strictly upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix<T> {
    dim: usize,
    upper: Vec<T>,
    zero: T,
}

impl<T: Ring> SkewMatrix<T> {
    pub fn zeros(dim: usize, zero: T) -> Self {
        Self { dim, upper: vec![zero.clone(); dim * dim.saturating_sub(1) / 2], zero }
    }

    /// Builds from `f(i, j)` for `i < j`.
    pub fn from_fn(dim: usize, zero: T, f: impl Fn(usize, usize) -> T) -> Self {
        let mut out = Self::zeros(dim, zero);
        for i in 0..dim {
            for j in i + 1..dim {
                out.set(i, j, f(i, j));
            }
        }
        out
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.dim);
        i * self.dim - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => self.zero.clone(),
            Less => self.upper[self.slot(i, j)].clone(),
            Greater => -self.upper[self.slot(j, i)].clone(),
        }
    }

    /// Sets `β_ij` (and implicitly `β_ji = −β_ij`).
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(i != j, "diagonal of a skew matrix is fixed at zero");
        if i < j {
            let s = self.slot(i, j);
            self.upper[s] = v;
        } else {
            let s = self.slot(j, i);
            self.upper[s] = -v;
        }
    }

    pub fn map<U: Ring>(&self, zero: U, f: impl Fn(&T) -> U) -> SkewMatrix<U> {
        SkewMatrix { dim: self.dim, upper: self.upper.iter().map(f).collect(), zero }
    }

    pub fn zero_elem(&self) -> &T {
        &self.zero
    }

    /// Skew part `β_ij = p_ji − p_ij` of a square matrix given row-wise.
    pub fn skew_part(p: &[Vec<T>], zero: T) -> Self {
        Self::from_fn(p.len(), zero, |i, j| p[j][i].clone() - p[i][j].clone())
    }
}

impl<C: Coeff> SkewMatrix<C> {
    /// Coefficient matrix of the `dz_i ∧ dz_j` terms of a 2-form.
    pub fn from_two_form(beta: &Form<C>) -> Result<Self> {
        if beta.degree() != 2 {
            return Err(Error::Degree(format!("expected a 2-form, got degree {}", beta.degree())));
        }
        let m = beta.dim();
        Ok(Self::from_fn(m, C::zero(m), |i, j| beta.coefficient(&[i as u8, j as u8])))
    }
}

impl SkewMatrix<Complex64> {
    /// Frobenius norm over the upper triangle.
    pub fn norm(&self) -> f64 {
        self.upper.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn pfaffian<T: Ring>(b: &SkewMatrix<T>, idx: &[usize]) -> T {
    if idx.is_empty() {
        return b.zero.int_like(1);
    }
    let first = idx[0];
    let mut acc = b.zero.clone();
    for k in 1..idx.len() {
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[k]).collect();
        let entry = b.get(first, idx[k]);
        if entry.is_zero_elem() {
            continue;
        }
        let term = entry * pfaffian(b, &rest);
        acc = if k % 2 == 1 { acc + term } else { acc - term };
    }
    acc
}

/// `(b_1, …, b_{2n+1})` with `β^n = Σ_i b_i dz_1∧…ŵ_i…∧dz_{2n+1}`.
///
/// Each `b_i` is `n!` times the Pfaffian of the matrix with row and column
/// `i` removed: a signed sum over the pairings of the remaining indices.
pub fn pfaffian_coeffs<T: Ring>(b: &SkewMatrix<T>) -> Result<Vec<T>> {
    let n = half_dim(b.dim())?;
    let fact: i64 = (1..=n as i64).product();
    let scale = b.zero.int_like(fact);
    Ok((0..b.dim())
        .map(|i| {
            let rest: Vec<usize> = (0..b.dim()).filter(|&k| k != i).collect();
            scale.clone() * pfaffian(b, &rest)
        })
        .collect())
}

/// `Σ_i (−1)^i a_i b_i` (0-based), the coefficient of `α∧β^n`.
pub fn contact_polynomial<T: Ring>(a: &[T], b: &[T]) -> T {
    let mut acc = b[0].zero_like();
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        let t = ai.clone() * bi.clone();
        acc = if i % 2 == 0 { acc + t } else { acc - t };
    }
    acc
}

/// Formal margin of a pointwise pair `(a, β)`.
pub fn formal_value<T: Ring>(a: &[T], beta: &SkewMatrix<T>) -> Result<T> {
    if a.len() != beta.dim() {
        return Err(Error::Dimension { expected: beta.dim(), found: a.len() });
    }
    Ok(contact_polynomial(a, &pfaffian_coeffs(beta)?))
}

/// `α ∧ (dα)^n`.
pub fn contact_defect<C: Coeff>(alpha: &Form<C>) -> Result<Form<C>> {
    if alpha.degree() != 1 {
        return Err(Error::Degree(format!("contact form must have degree 1, got {}", alpha.degree())));
    }
    let n = half_dim(alpha.dim())?;
    alpha.wedge(&alpha.ext_d().wedge_power(n)?)
}

/// A candidate formal contact pair `(α, β)` on `C^{2n+1}`.
#[derive(Clone, Debug)]
pub struct FormalPair<C: Coeff> {
    pub alpha: Form<C>,
    pub beta: Form<C>,
    pub n: usize,
}

impl<C: Coeff> FormalPair<C> {
    pub fn new(alpha: Form<C>, beta: Form<C>) -> Result<Self> {
        if alpha.dim() != beta.dim() {
            return Err(Error::Dimension { expected: alpha.dim(), found: beta.dim() });
        }
        if alpha.degree() != 1 || beta.degree() != 2 {
            return Err(Error::Degree(format!(
                "formal pair needs degrees (1, 2), got ({}, {})",
                alpha.degree(),
                beta.degree()
            )));
        }
        let n = half_dim(alpha.dim())?;
        Ok(Self { alpha, beta, n })
    }
}

/// `α ∧ β^n`.
pub fn formal_defect<C: Coeff>(pair: &FormalPair<C>) -> Result<Form<C>> {
    pair.alpha.wedge(&pair.beta.wedge_power(pair.n)?)
}

fn sample_label(k: usize, pt: &Point<Complex64>) -> String {
    let zs: Vec<String> = pt.values().iter().map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect();
    format!("sample {k} ({})", zs.join(", "))
}

/// Passes iff `|coefficient of α∧(dα)^n| ≥ tol` at every sample.
pub fn is_contact_on<C: Coeff>(
    alpha: &Form<C>,
    samples: &[Point<Complex64>],
    tol: f64,
) -> Result<VerificationReport> {
    let top = contact_defect(alpha)?.top_coefficient();
    top_coefficient_report("is_contact_on", &top, samples, tol)
}

pub(crate) fn top_coefficient_report<C: Coeff>(
    name: &str,
    top: &C,
    samples: &[Point<Complex64>],
    tol: f64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(name);
    for (k, pt) in samples.iter().enumerate() {
        let margin = top.eval_c64(pt)?.norm();
        report.record(sample_label(k, pt), margin, margin >= tol);
    }
    if samples.is_empty() {
        report.warn("no samples supplied");
    }
    Ok(report)
}

/// Checks `α∧β^n` against `tol` at every sample.
pub fn is_formal_contact_on<C: Coeff>(
    pair: &FormalPair<C>,
    samples: &[Point<Complex64>],
    tol: f64,
) -> Result<VerificationReport> {
    let top = formal_defect(pair)?.top_coefficient();
    top_coefficient_report("is_formal_contact_on", &top, samples, tol)
}

/// Runs [`is_contact_on`] on `α_t = (1−t)α + tβ` for `steps` equispaced
/// `t ∈ [0, 1]`.
pub fn pencil_check<C: Coeff>(
    alpha: &Form<C>,
    beta1: &Form<C>,
    samples: &[Point<Complex64>],
    steps: usize,
    tol: f64,
) -> Result<VerificationReport> {
    if alpha.degree() != 1 || beta1.degree() != 1 {
        return Err(Error::Degree("pencil endpoints must be 1-forms".into()));
    }
    if alpha.dim() != beta1.dim() {
        return Err(Error::Dimension { expected: alpha.dim(), found: beta1.dim() });
    }
    if steps == 0 {
        return Err(Error::Invalid("pencil needs at least one step".into()));
    }
    let denom = (steps.max(2) - 1) as i64;
    let mut report = VerificationReport::new("pencil_check");
    for k in 0..steps as i64 {
        let t = C::Const::from_ratio(k, denom);
        let s = C::Const::from_ratio(denom - k, denom);
        let alpha_t = alpha.scale(&s).add(&beta1.scale(&t))?;
        let sub = is_contact_on(&alpha_t, samples, tol)?;
        let label = format!("t={k}/{denom}");
        report.record(label.clone(), sub.min_margin.unwrap_or(f64::INFINITY), sub.pass);
        if !sub.pass {
            report.warn(format!("{label}: {}", sub.argmin.unwrap_or_default()));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Laurent;
    use crate::scalar::GaussRational as Q;
    use crate::LaurentForm;

    type L = Laurent<Q>;

    fn std3() -> LaurentForm {
        Form::dz(3, 2).add(&Form::dz(3, 1).mul_function(&L::z(3, 0))).unwrap()
    }

    fn volume() -> LaurentForm {
        Form::dz(3, 0).wedge(&Form::dz(3, 1)).unwrap().wedge(&Form::dz(3, 2)).unwrap()
    }

    #[test]
    fn skew_matrix_indexing() {
        let mut b = SkewMatrix::zeros(4, 0i64.to_c());
        b.set(2, 1, 5i64.to_c());
        assert_eq!(b.get(1, 2), Complex64::new(-5.0, 0.0));
        assert_eq!(b.get(3, 3), Complex64::new(0.0, 0.0));
    }

    trait ToC {
        fn to_c(self) -> Complex64;
    }
    impl ToC for i64 {
        fn to_c(self) -> Complex64 {
            Complex64::new(self as f64, 0.0)
        }
    }

    #[test]
    fn contact_defect_examples() {
        assert_eq!(contact_defect(&std3()).unwrap(), volume());
        let k = 3;
        let ak = Form::dz(3, 2)
            .add(&Form::dz(3, 1).mul_function(&L::z_pow(3, 0, k + 1).scale(&Q::from_ratio(1, (k + 1) as i64))))
            .unwrap();
        assert_eq!(contact_defect(&ak).unwrap(), volume().mul_function(&L::z_pow(3, 0, k)));
        assert!(contact_defect(&LaurentForm::dz(3, 2)).unwrap().is_zero());
        assert!(matches!(contact_defect(&LaurentForm::dz(4, 2)), Err(Error::EvenDimension(4))));
    }

    #[test]
    fn formal_defect_examples() {
        let p = FormalPair::new(std3(), std3().ext_d()).unwrap();
        assert_eq!(formal_defect(&p).unwrap(), volume());
        let dz12 = Form::dz(3, 0).wedge(&Form::dz(3, 1)).unwrap();
        let p = FormalPair::new(LaurentForm::dz(3, 2), dz12).unwrap();
        assert_eq!(formal_defect(&p).unwrap(), volume());
        let dz13 = Form::dz(3, 0).wedge(&Form::dz(3, 2)).unwrap();
        let p = FormalPair::new(LaurentForm::dz(3, 2), dz13).unwrap();
        assert!(formal_defect(&p).unwrap().is_zero());
        assert!(FormalPair::new(LaurentForm::dz(3, 2), LaurentForm::dz(3, 1)).is_err());
    }

    #[test]
    fn pfaffian_coeffs_n1() {
        let (u, v, w) = (Q::from_i64(2), Q::from_i64(3), Q::from_i64(5));
        let vals = [u.clone(), v.clone(), w.clone()];
        let b = SkewMatrix::from_fn(3, Q::zero(), |i, j| match (i, j) {
            (0, 1) => vals[0].clone(),
            (0, 2) => vals[1].clone(),
            _ => vals[2].clone(),
        });
        assert_eq!(pfaffian_coeffs(&b).unwrap(), vec![w, v, u]);
        assert!(pfaffian_coeffs(&SkewMatrix::zeros(3, Q::zero())).unwrap().iter().all(Scalar::is_zero));
    }

    #[test]
    fn pfaffian_coeffs_n2_last_entry() {
        let b = SkewMatrix::from_fn(5, Q::zero(), |i, j| Q::from_i64((3 * i + 7 * j) as i64 % 11 - 5));
        let bs = pfaffian_coeffs(&b).unwrap();
        let expect = Q::from_i64(2)
            * (b.get(0, 1) * b.get(2, 3) - b.get(0, 2) * b.get(1, 3) + b.get(0, 3) * b.get(1, 2));
        assert_eq!(bs[4], expect);
    }

    fn circle_samples() -> Vec<Point<Complex64>> {
        (0..12)
            .map(|k| {
                let th = k as f64 * std::f64::consts::TAU / 12.0;
                Point::new(vec![Complex64::from_polar(1.0, th), Complex64::new(0.3, -0.2), Complex64::new(k as f64, 1.0)])
            })
            .collect()
    }

    #[test]
    fn is_contact_on_examples() {
        let r = is_contact_on(&std3(), &circle_samples(), 0.5).unwrap();
        assert!(r.pass);
        assert_eq!(r.min_margin, Some(1.0));

        let c = std::f64::consts::FRAC_1_SQRT_2;
        let am1 = crate::ExprForm::one_form(
            3,
            vec![crate::Expr::zero(), crate::Expr::real(c) * crate::Expr::z(0), crate::Expr::real(c) * crate::Expr::z(0).powi(-1)],
            vec![],
        )
        .unwrap();
        let r = is_contact_on(&am1, &circle_samples(), 0.9).unwrap();
        assert!(r.pass);
        assert!((r.min_margin.unwrap() - 1.0).abs() < 1e-12);

        let r = is_contact_on(&LaurentForm::dz(3, 2), &circle_samples(), 1e-9).unwrap();
        assert!(!r.pass);
        assert_eq!(r.offending.len(), circle_samples().len());
    }

    #[test]
    fn pencil_examples() {
        let samples = circle_samples();
        let scaled = std3().scale(&Q::from_ratio(101, 100));
        assert!(pencil_check(&std3(), &scaled, &samples, 11, 0.5).unwrap().pass);

        let flipped = Form::dz(3, 2).sub(&Form::dz(3, 1).mul_function(&L::z(3, 0))).unwrap();
        let r = pencil_check(&std3(), &flipped, &samples, 5, 1e-9).unwrap();
        assert!(!r.pass);
        assert_eq!(r.offending, vec!["t=2/4".to_string()]);

        let r = pencil_check(&std3(), &std3(), &samples, 4, 0.5).unwrap();
        assert!(r.pass);
        assert!(r.samples.iter().all(|s| s.margin == 1.0));
    }
}
