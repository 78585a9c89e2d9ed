//! ∂̄-flat extension from the real slice `R^m ⊂ C^m`, ∂̄-defects, and the
//! asymptotic-holomorphy conditions `∂̄a_i = 0, b_i = 0, db_i = 0` for
//! `α = Σ a_i dz_i + b_i dz̄_i` along sample points.
//!
//! The extension of `f` of order `l` is
//! `F(x + iy) = Σ_{|I| ≤ l} ∂^I f(x) (iy)^I / I!`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::coeff::{Coeff, Point};
use crate::error::{Error, Result};
use crate::form::Form;
use crate::grid::CubeGrid;
use crate::laurent::{Laurent, Monomial};
use crate::polymap::PolyMap;
use crate::report::VerificationReport;
use crate::scalar::{GaussRational, Scalar};

type Q = GaussRational;

/// A function on the real slice: an exact polynomial in `x`, or samples on
/// a grid.
#[derive(Clone, Debug, PartialEq)]
pub enum RealSliceFunction {
    /// Polynomial in `x_1..x_m`, stored with `z` exponents standing for `x`.
    Symbolic(Laurent<Q>),
    Sampled(SampledField),
}

impl RealSliceFunction {
    pub fn symbolic(f: Laurent<Q>) -> Result<Self> {
        for (mono, _) in f.terms() {
            if !mono.is_holomorphic() || mono.has_negative() {
                return Err(Error::Invalid(format!("`{mono}` is not a monomial in x with nonnegative exponents")));
            }
        }
        Ok(Self::Symbolic(f))
    }

    /// `x^I` with coefficient 1.
    pub fn x_monomial(exps: &[i32]) -> Self {
        Self::Symbolic(Laurent::z_monomial(Q::one(), exps))
    }
}

/// Real samples of a function at every node of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    pub grid: CubeGrid,
    pub values: Vec<f64>,
}

impl SampledField {
    pub fn new(grid: CubeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension { expected: grid.len(), found: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: CubeGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.len()).map(|k| f(&grid.coords(k))).collect();
        Self { grid, values }
    }

    /// Central first difference along `axis`; `NaN` where a neighbour is
    /// missing.
    fn central(&self, data: &[f64], axis: usize) -> Vec<f64> {
        let g = &self.grid;
        let (s, h) = (g.stride(axis), g.mesh(axis));
        (0..g.len())
            .map(|node| {
                let k = g.multi(node)[axis];
                if k == 0 || k + 1 == g.nodes_per_axis() {
                    f64::NAN
                } else {
                    (data[node + s] - data[node - s]) / (2.0 * h)
                }
            })
            .collect()
    }
}

/// Multi-indices `I ∈ N^m` with `|I| ≤ max`, graded.
pub fn multi_indices(m: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; m]];
    let mut layer = vec![vec![0; m]];
    for _ in 0..max {
        let mut next = Vec::new();
        for idx in &layer {
            let last = idx.iter().rposition(|&e| e > 0).unwrap_or(0);
            for j in last..m {
                let mut n = idx.clone();
                n[j] += 1;
                next.push(n);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// `(iy)^I / I!`.
fn weight(idx: &[usize], y: &[f64]) -> Complex64 {
    idx.iter().zip(y).fold(Complex64::new(1.0, 0.0), |acc, (&e, &yj)| {
        acc * Complex64::new(0.0, yj).powi(e as i32) / factorial(e)
    })
}

/// A sampled extension: the difference quotients `D^I f` for `|I| ≤ l + 1`.
#[derive(Clone, Debug)]
pub struct SampledExtension {
    pub grid: CubeGrid,
    pub order: usize,
    derivs: BTreeMap<Vec<usize>, Vec<f64>>,
}

impl SampledExtension {
    fn new(field: &SampledField, l: usize) -> Result<Self> {
        let need = 2 * (l + 1) + 1;
        if field.grid.nodes_per_axis() < need {
            return Err(Error::Invalid(format!(
                "order {l} needs at least {need} nodes per axis, grid has {}",
                field.grid.nodes_per_axis()
            )));
        }
        let m = field.grid.dim();
        let mut derivs: BTreeMap<Vec<usize>, Vec<f64>> = BTreeMap::new();
        for idx in multi_indices(m, l + 1) {
            let data = match idx.iter().position(|&e| e > 0) {
                None => field.values.clone(),
                Some(j) => {
                    let mut lower = idx.clone();
                    lower[j] -= 1;
                    field.central(&derivs[&lower], j)
                }
            };
            derivs.insert(idx, data);
        }
        Ok(Self { grid: field.grid.clone(), order: l, derivs })
    }

    fn deriv(&self, idx: &[usize], node: usize) -> Result<f64> {
        let v = self.derivs[idx][node];
        if v.is_nan() {
            return Err(Error::Invalid(format!(
                "{} is too close to the boundary for order {}",
                self.grid.node_label(node),
                self.order
            )));
        }
        Ok(v)
    }

    /// `F(x_node + iy)`.
    pub fn eval(&self, node: usize, y: &[f64]) -> Result<Complex64> {
        let mut acc = Complex64::default();
        for idx in multi_indices(self.grid.dim(), self.order) {
            acc += self.deriv(&idx, node)? * weight(&idx, y);
        }
        Ok(acc)
    }

    /// `∂F/∂z̄_j = ½(∂_{x_j} + i ∂_{y_j})F` at `x_node + iy`, for every `j`,
    /// with `∂_x` taken by the same difference quotients as the extension.
    pub fn dbar_residual(&self, node: usize, y: &[f64]) -> Result<Vec<Complex64>> {
        let m = self.grid.dim();
        let idxs = multi_indices(m, self.order);
        (0..m)
            .map(|j| {
                let mut dx = Complex64::default();
                let mut dy = Complex64::default();
                for idx in &idxs {
                    let mut up = idx.clone();
                    up[j] += 1;
                    dx += self.deriv(&up, node)? * weight(idx, y);
                    if idx[j] > 0 {
                        let mut down = idx.clone();
                        down[j] -= 1;
                        // ∂_y (iy)^I / I! = i (iy)^{I - e_j} / (I - e_j)!
                        dy += self.deriv(idx, node)? * Complex64::i() * weight(&down, y);
                    }
                }
                Ok(0.5 * (dx + Complex64::i() * dy))
            })
            .collect()
    }
}

/// Result of [`extend_function`].
#[derive(Clone, Debug)]
pub enum Extension {
    Symbolic(Laurent<Q>),
    Sampled(SampledExtension),
}

impl Extension {
    pub fn into_symbolic(self) -> Result<Laurent<Q>> {
        match self {
            Extension::Symbolic(f) => Ok(f),
            Extension::Sampled(_) => Err(Error::Invalid("sampled extension has no closed form".into())),
        }
    }
}

/// Extends `f` off the real slice so that `∂̄F` vanishes there to order
/// `l − 1`. Symbolic input yields a polynomial in `z, z̄`.
pub fn extend_function(f: &RealSliceFunction, l: usize) -> Result<Extension> {
    if l < 1 {
        return Err(Error::Invalid("extension order must be at least 1".into()));
    }
    match f {
        RealSliceFunction::Symbolic(p) => extend_symbolic(p, l).map(Extension::Symbolic),
        RealSliceFunction::Sampled(s) => SampledExtension::new(s, l).map(Extension::Sampled),
    }
}

fn extend_symbolic(f: &Laurent<Q>, l: usize) -> Result<Laurent<Q>> {
    let m = f.dim();
    let half = Q::from_ratio(1, 2);
    // x_j = (z_j + z̄_j)/2 and i·y_j = (z_j − z̄_j)/2
    let xs: Vec<Laurent<Q>> = (0..m).map(|j| (Laurent::z(m, j) + Laurent::zbar(m, j)).scale(&half)).collect();
    let iys: Vec<Laurent<Q>> = (0..m).map(|j| (Laurent::z(m, j) - Laurent::zbar(m, j)).scale(&half)).collect();
    let zeros = vec![Laurent::zero(m); m];
    let mut out = Laurent::zero(m);
    for idx in multi_indices(m, l) {
        let mut d = f.clone();
        let mut fact = 1i64;
        for (j, &e) in idx.iter().enumerate() {
            for k in 1..=e {
                d = d.diff_z(j);
                fact *= k as i64;
            }
        }
        if d.is_zero() {
            continue;
        }
        let mut term = d.substitute(&xs, &zeros)?.scale(&Q::from_ratio(1, fact));
        for (j, &e) in idx.iter().enumerate() {
            term = &term * &iys[j].pow(e as u32);
        }
        out = &out + &term;
    }
    Ok(out)
}

/// `Σ F_i dz_i` from componentwise symbolic extensions.
pub fn extend_form(coeffs: &[RealSliceFunction], l: usize) -> Result<Form<Laurent<Q>>> {
    let m = coeffs.len();
    let a = coeffs
        .iter()
        .map(|f| match f {
            RealSliceFunction::Symbolic(p) if p.dim() == m => extend_function(f, l)?.into_symbolic(),
            RealSliceFunction::Symbolic(p) => Err(Error::Dimension { expected: m, found: p.dim() }),
            RealSliceFunction::Sampled(_) => {
                Err(Error::Invalid("extend_form takes symbolic coefficients; extend samples one at a time".into()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Form::one_form(m, a, vec![Laurent::zero(m); m])
}

/// All derivatives of `f` in `z` and `z̄` of total order `≤ k`.
fn derivatives<C: Coeff>(f: &C, m: usize, k: usize) -> Vec<C> {
    let mut out = vec![f.clone()];
    let mut layer = vec![(f.clone(), 0usize)];
    for _ in 0..k {
        let mut next = Vec::new();
        for (g, from) in &layer {
            for v in *from..2 * m {
                let d = if v < m { g.diff_z(v) } else { g.diff_zbar(v - m) };
                if !d.is_zero() {
                    next.push((d, v));
                }
            }
        }
        out.extend(next.iter().map(|(g, _)| g.clone()));
        layer = next;
    }
    out
}

/// Largest `|D ∂F/∂z̄_j|` over samples, `j`, and derivatives `D` of order
/// `≤ order − 1`.
pub fn dbar_defect<C: Coeff>(f: &C, m: usize, samples: &[Point<Complex64>], order: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for j in 0..m {
        let g = f.diff_zbar(j);
        if g.is_zero() {
            continue;
        }
        for d in derivatives(&g, m, order.saturating_sub(1)) {
            for pt in samples {
                worst = worst.max(d.eval_c64(pt)?.norm());
            }
        }
    }
    Ok(worst)
}

/// [`dbar_defect`] maximized over the coefficients of a form.
pub fn form_dbar_defect<C: Coeff>(alpha: &Form<C>, samples: &[Point<Complex64>], order: usize) -> Result<f64> {
    alpha.terms().try_fold(0.0f64, |acc, (_, c)| Ok(acc.max(dbar_defect(c, alpha.dim(), samples, order)?)))
}

/// [`dbar_defect`] maximized over the components of a map.
pub fn map_dbar_defect<C: Coeff>(f: &PolyMap<C>, samples: &[Point<Complex64>], order: usize) -> Result<f64> {
    f.components()
        .iter()
        .try_fold(0.0f64, |acc, c| Ok(acc.max(dbar_defect(c, f.source_dim(), samples, order)?)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AHSample {
    pub label: String,
    /// `max_{i,j} |∂a_i/∂z̄_j|`
    pub dbar_a: f64,
    /// `max_i |b_i|`
    pub b: f64,
    /// `max_{i,j} |∂b_i/∂z_j|, |∂b_i/∂z̄_j|`
    pub db: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AHReport {
    pub samples: Vec<AHSample>,
    pub max_dbar_a: f64,
    pub max_b: f64,
    pub max_db: f64,
    pub tol: f64,
    pub pass: bool,
}

impl AHReport {
    /// Names of the conditions that exceed the tolerance.
    pub fn broken(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.max_dbar_a > self.tol {
            out.push("dbar a_i = 0");
        }
        if self.max_b > self.tol {
            out.push("b_i = 0");
        }
        if self.max_db > self.tol {
            out.push("d b_i = 0");
        }
        out
    }

    pub fn to_report(&self, name: &str) -> VerificationReport {
        let mut r = VerificationReport::new(name);
        for (label, v) in [("dbar a_i", self.max_dbar_a), ("b_i", self.max_b), ("d b_i", self.max_db)] {
            r.check(label, v <= self.tol, format!("max {v:.3e} (tol {:.1e})", self.tol));
        }
        for s in &self.samples {
            let worst = s.dbar_a.max(s.b).max(s.db);
            r.record(s.label.clone(), self.tol - worst, worst <= self.tol);
        }
        r
    }
}

/// Evaluates the three AH conditions for a 1-form at each sample.
pub fn ah_verify<C: Coeff>(alpha: &Form<C>, samples: &[Point<Complex64>], tol: f64) -> Result<AHReport> {
    if alpha.degree() != 1 {
        return Err(Error::Degree(format!("expected a 1-form, got degree {}", alpha.degree())));
    }
    let m = alpha.dim();
    let a: Vec<C> = (0..m).map(|i| alpha.dz_coefficient(i)).collect();
    let b: Vec<C> = (0..m).map(|i| alpha.dzbar_coefficient(i)).collect();
    let dbar_a: Vec<C> = a.iter().flat_map(|ai| (0..m).map(move |j| ai.diff_zbar(j))).collect();
    let db: Vec<C> = b
        .iter()
        .flat_map(|bi| (0..m).flat_map(move |j| [bi.diff_z(j), bi.diff_zbar(j)]))
        .collect();
    let max_at = |fs: &[C], pt: &Point<Complex64>| -> Result<f64> {
        fs.iter().filter(|f| !f.is_zero()).try_fold(0.0f64, |acc, f| Ok(acc.max(f.eval_c64(pt)?.norm())))
    };
    let mut out = AHReport { samples: Vec::new(), max_dbar_a: 0.0, max_b: 0.0, max_db: 0.0, tol, pass: true };
    for (k, pt) in samples.iter().enumerate() {
        let s = AHSample {
            label: format!("sample {k}"),
            dbar_a: max_at(&dbar_a, pt)?,
            b: max_at(&b, pt)?,
            db: max_at(&db, pt)?,
        };
        out.max_dbar_a = out.max_dbar_a.max(s.dbar_a);
        out.max_b = out.max_b.max(s.b);
        out.max_db = out.max_db.max(s.db);
        out.samples.push(s);
    }
    out.pass = out.broken().is_empty();
    Ok(out)
}

/// Checks that `F^*α` satisfies the AH conditions at `samples`, given that
/// `F` is ∂̄-flat to order 2 there and `α` satisfies them at the images.
/// Unmet preconditions are returned as [`Error::Precondition`].
pub fn ah_pullback_verify<C: Coeff>(
    f: &PolyMap<C>,
    alpha: &Form<C>,
    samples: &[Point<Complex64>],
    tol: f64,
) -> Result<AHReport> {
    let flat = map_dbar_defect(f, samples, 2)?;
    if flat > tol {
        return Err(Error::Precondition(format!("map is not dbar-flat to order 2 at the samples (defect {flat:.3e})")));
    }
    let images = samples.iter().map(|p| f.apply(p)).collect::<Result<Vec<_>>>()?;
    let at_image = ah_verify(alpha, &images, tol)?;
    if !at_image.pass {
        return Err(Error::Precondition(format!(
            "form fails the AH conditions at the image points: {}",
            at_image.broken().join(", ")
        )));
    }
    ah_verify(&alpha.pullback(f)?, samples, tol)
}

/// `Laurent` monomial `x^I` helper for callers building real-slice data.
pub fn x_power(m: usize, exps: &[i32]) -> Result<Laurent<Q>> {
    Ok(Laurent::term(m, Monomial::new(exps.to_vec(), vec![0; m])?, Q::one()))
}
