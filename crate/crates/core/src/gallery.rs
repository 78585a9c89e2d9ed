//! Explicit contact forms on `C³`, `C*×C²` and `(C*)³` with their
//! closed-form contact defects. Coordinates `(x, y, z) = (z1, z2, z3)`.
//!
//! Entries are addressed by name: `std`, `std:n`, `circle:k`, `sigma:t`
//! (with `t` a decimal or `p/q`), `torus:k,l,m` and `covering`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{Coeff, Point};
use crate::contact::contact_defect;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::form::{ExprForm, LaurentForm};
use crate::laurent::Laurent;
use crate::polymap::PolyMap;
use crate::report::VerificationReport;
use crate::scalar::{parse_rational, GaussRational as Q, Scalar};

/// Relative tolerance for sampled identities.
pub const SAMPLED_TOL: f64 = 1e-12;
/// Default number of sample points.
pub const SAMPLES: usize = 100;

type L = Laurent<Q>;

fn z(i: usize) -> L {
    L::z(3, i)
}

fn q(num: i64, den: i64) -> Q {
    Q::from_ratio(num, den)
}

/// A form in either coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub enum GalleryForm {
    Exact(LaurentForm),
    Sampled(ExprForm),
}

impl GalleryForm {
    pub fn to_expr(&self) -> ExprForm {
        match self {
            GalleryForm::Exact(f) => f.to_expr(),
            GalleryForm::Sampled(f) => f.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, GalleryForm::Exact(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GalleryEntry {
    pub name: String,
    pub form: GalleryForm,
    /// Expected `α∧(dα)^n`.
    pub expected: GalleryForm,
}

/// `dz_{2n+1} + Σ_j z_j dz_{n+j}`. Its defect is `±n!` times the volume
/// form, with sign `(−1)^{n(n−1)/2}` in the ordered basis.
pub fn std_form(n: usize) -> Result<LaurentForm> {
    if n == 0 {
        return Err(Error::Invalid("std_form needs n >= 1".into()));
    }
    let m = 2 * n + 1;
    (0..n).try_fold(LaurentForm::dz(m, m - 1), |acc, j| acc.add(&LaurentForm::dz(m, n + j).mul_function(&L::z(m, j))))
}

fn volume(m: usize) -> LaurentForm {
    let w: Vec<u8> = (0..m as u8).collect();
    LaurentForm::monomial(m, &w, L::constant(m, Q::one())).expect("top word")
}

/// `α_k = dz + x^{k+1}/(k+1) dy`, and `(1/√2)(x⁻¹ dz + x dy)` for `k = −1`.
pub fn circle_form(k: i32) -> GalleryForm {
    if k == -1 {
        let s = Expr::real(0.5f64.sqrt());
        let x = Expr::z(0);
        let f = ExprForm::one_form(3, vec![Expr::zero(), s.clone() * x.clone(), s * x.powi(-1)], vec![Expr::zero(); 3]);
        return GalleryForm::Sampled(f.expect("three coefficients"));
    }
    let c = L::z_pow(3, 0, k + 1).scale(&q(1, (k + 1) as i64));
    GalleryForm::Exact(LaurentForm::dz(3, 2).add(&LaurentForm::dz(3, 1).mul_function(&c)).expect("same dimension"))
}

/// `½(x + 1/x) dz + (1/2i)(x − 1/x) dy`.
pub fn alpha_prime() -> LaurentForm {
    let xinv = L::z_pow(3, 0, -1);
    let a2 = (z(0) + xinv.clone()).scale(&q(1, 2));
    let a1 = (z(0) - xinv).scale(&Q::from_parts(0, 1, -1, 2));
    LaurentForm::one_form(3, vec![L::zero(3), a1, a2], vec![L::zero(3); 3]).expect("three coefficients")
}

/// `σ_t = (2(1+t²))^{−1/2} ((t x + 1/x) dz + (x − t/x) e^{−iπt/2} dy)`.
pub fn sigma_homotopy(t: f64) -> Result<ExprForm> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Invalid(format!("sigma_homotopy needs t in [0, 1], got {t}")));
    }
    let k = Expr::real((2.0 * (1.0 + t * t)).sqrt().recip());
    let phase = Expr::constant(Complex64::from_polar(1.0, -PI * t / 2.0));
    let x = Expr::z(0);
    let a2 = k.clone() * (Expr::real(t) * x.clone() + x.powi(-1));
    let a1 = k * phase * (x.clone() - Expr::real(t) * x.powi(-1));
    ExprForm::one_form(3, vec![Expr::zero(), a1, a2], vec![Expr::zero(); 3])
}

/// `z^m dz + x^{k+1} y^l/(k+1) dy`, and `z^m/(2x) dz + x y^l dy` for `k = −1`.
pub fn torus_form(k: i32, l: i32, m: i32) -> LaurentForm {
    let (a1, a2) = if k == -1 {
        (L::z_monomial(Q::one(), &[1, l, 0]), L::z_monomial(q(1, 2), &[-1, 0, m]))
    } else {
        (L::z_monomial(q(1, (k + 1) as i64), &[k + 1, l, 0]), L::z_monomial(Q::one(), &[0, 0, m]))
    };
    LaurentForm::one_form(3, vec![L::zero(3), a1, a2], vec![L::zero(3); 3]).expect("three coefficients")
}

/// `(x, y, z) ↦ (x^{k+1}/(k+1), y, z)`.
pub fn covering_power(k: i32) -> PolyMap<L> {
    PolyMap::new(3, vec![L::z_pow(3, 0, k + 1).scale(&q(1, (k + 1) as i64)), z(1), z(2)])
}

/// `F(x, y, z) = (e^{ix}, y, z)`.
pub fn exp_covering() -> PolyMap<Expr> {
    PolyMap::new(3, vec![(Expr::constant(Complex64::i()) * Expr::z(0)).exp(), Expr::z(1), Expr::z(2)])
}

/// `(x, y, z) ↦ (x, y cos x − z sin x, y sin x + z cos x)`.
pub fn rotation_automorphism() -> PolyMap<Expr> {
    let (x, y, zz) = (Expr::z(0), Expr::z(1), Expr::z(2));
    PolyMap::new(
        3,
        vec![
            x.clone(),
            y.clone() * x.cos() - zz.clone() * x.sin(),
            y * x.sin() + zz * x.cos(),
        ],
    )
}

/// `cos x dz + sin x dy`.
pub fn beta_form() -> ExprForm {
    let x = Expr::z(0);
    ExprForm::one_form(3, vec![Expr::zero(), x.sin(), x.cos()], vec![Expr::zero(); 3]).expect("three coefficients")
}

/// Seeded points of `C³` with `1/2 ≤ |z1| ≤ 2` and the other coordinates in
/// the unit box.
pub fn sample_points(count: usize, seed: u64) -> Vec<Point<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = rng.gen_range(0.5..=2.0);
            let th = rng.gen_range(0.0..2.0 * PI);
            let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            Point::new(vec![Complex64::from_polar(r, th), c(), c()])
        })
        .collect()
}

fn parse_t(s: &str) -> Result<f64> {
    match parse_rational(s) {
        Ok(r) => r.to_f64().ok_or_else(|| Error::Parse(format!("bad parameter `{s}`"))),
        Err(_) => s.trim().parse().map_err(|_| Error::Parse(format!("bad parameter `{s}`"))),
    }
}

fn ints(s: &str, count: usize) -> Result<Vec<i32>> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<i32>().map_err(|_| Error::Parse(format!("bad integer `{t}` in `{s}`"))))
        .collect::<Result<Vec<_>>>()?;
    if v.len() != count {
        return Err(Error::Parse(format!("expected {count} integers, got `{s}`")));
    }
    Ok(v)
}

/// Builds the entry with the given name (`covering` excluded: it is not a
/// defect identity).
pub fn entry(name: &str) -> Result<GalleryEntry> {
    let (kind, arg) = name.split_once(':').unwrap_or((name, ""));
    let make = |form: GalleryForm, expected: GalleryForm| GalleryEntry { name: name.to_string(), form, expected };
    match kind {
        "std" => {
            let n = if arg.is_empty() { 1 } else { ints(arg, 1)?[0].max(0) as usize };
            let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
            let fact: i64 = sign * (1..=n as i64).product::<i64>();
            let m = 2 * n + 1;
            Ok(make(GalleryForm::Exact(std_form(n)?), GalleryForm::Exact(volume(m).scale(&Q::from_i64(fact)))))
        }
        "circle" => {
            let k = ints(arg, 1)?[0];
            Ok(make(circle_form(k), GalleryForm::Exact(volume(3).mul_function(&L::z_pow(3, 0, k)))))
        }
        "sigma" => {
            let t = parse_t(arg)?;
            let phase = Complex64::from_polar(1.0, -PI * t / 2.0);
            let expected = volume(3).to_expr().mul_function(&(Expr::constant(phase) * Expr::z(0).powi(-1)));
            Ok(make(GalleryForm::Sampled(sigma_homotopy(t)?), GalleryForm::Sampled(expected)))
        }
        "torus" => {
            let v = ints(arg, 3)?;
            let expected = volume(3).mul_function(&L::z_monomial(Q::one(), &[v[0], v[1], v[2]]));
            Ok(make(GalleryForm::Exact(torus_form(v[0], v[1], v[2])), GalleryForm::Exact(expected)))
        }
        "alpha_prime" => {
            let expected = volume(3).mul_function(&L::z_monomial(Q::from_parts(0, 1, -1, 1), &[-1, 0, 0]));
            Ok(make(GalleryForm::Exact(alpha_prime()), GalleryForm::Exact(expected)))
        }
        _ => Err(Error::Invalid(format!("unknown gallery entry `{name}`"))),
    }
}

/// Names of the default catalogue.
pub fn default_names() -> Vec<String> {
    let mut out: Vec<String> = vec!["std".into(), "std:2".into()];
    out.extend([-3, -2, -1, 0, 1, 2, 3].iter().map(|k| format!("circle:{k}")));
    out.extend(["0", "1/4", "1/2", "3/4", "1"].iter().map(|t| format!("sigma:{t}")));
    out.push("alpha_prime".into());
    out.extend(default_torus_triples().iter().map(|(k, l, m)| format!("torus:{k},{l},{m}")));
    out.push("covering".into());
    out
}

pub fn default_torus_triples() -> Vec<(i32, i32, i32)> {
    vec![(0, 0, 0), (2, 1, 3), (-1, 0, 0), (-1, 2, -1), (1, -1, 2), (-2, 3, 0), (3, 0, -2), (0, -3, 1), (-3, -1, -1), (4, 2, 2)]
}

fn relative_error(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Checks one entry: exact equality for Laurent entries, relative error
/// `≤ SAMPLED_TOL` at `samples` otherwise.
pub fn verify_entry(e: &GalleryEntry, samples: &[Point<Complex64>]) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new(e.name.clone());
    match (&e.form, &e.expected) {
        (GalleryForm::Exact(f), GalleryForm::Exact(want)) => {
            let got = contact_defect(f)?;
            let ok = got == *want;
            rep.check("exact", ok, if ok { format!("{got}") } else { format!("got {got}, expected {want}") });
        }
        (form, want) => {
            let lhs = contact_defect(&form.to_expr())?.top_coefficient();
            let rhs = want.to_expr().top_coefficient();
            for (k, pt) in samples.iter().enumerate() {
                let err = relative_error(lhs.eval_c64(pt)?, rhs.eval_c64(pt)?);
                rep.record(format!("sample {k}"), SAMPLED_TOL - err, err <= SAMPLED_TOL);
            }
        }
    }
    Ok(rep)
}

/// `F^*α′ = β` and `G^*(dz − y dx) = β` at the samples, for the given `F`.
pub fn covering_check_with(f: &PolyMap<Expr>, samples: &[Point<Complex64>]) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("covering");
    let beta = beta_form();
    let contact = ExprForm::dz(3, 2).sub(&ExprForm::dz(3, 0).mul_function(&Expr::z(1)))?;
    let lhs = [("F*alpha'", alpha_prime().to_expr().pullback(f)?), ("G*(dz - y dx)", contact.pullback(&rotation_automorphism())?)];
    for (k, pt) in samples.iter().enumerate() {
        let want = beta.evaluate(pt)?;
        for (label, form) in &lhs {
            let got = form.evaluate(pt)?;
            let err = got.distance(&want) / want.max_norm().max(f64::MIN_POSITIVE);
            rep.record(format!("{label} at sample {k}"), SAMPLED_TOL - err, err <= SAMPLED_TOL);
        }
    }
    Ok(rep)
}

pub fn covering_check(samples: &[Point<Complex64>]) -> Result<VerificationReport> {
    covering_check_with(&exp_covering(), samples)
}

/// Runs the named entries (all of them for `None`). An empty filter passes
/// vacuously with a warning.
pub fn gallery_verify_all(filter: Option<&[String]>, seed: u64) -> Result<VerificationReport> {
    let names = match filter {
        None => default_names(),
        Some(f) => f.to_vec(),
    };
    let mut rep = VerificationReport::new("gallery");
    rep.seed = Some(seed);
    if names.is_empty() {
        rep.warn("empty gallery filter: nothing verified");
        return Ok(rep);
    }
    let samples = sample_points(SAMPLES, seed);
    for name in &names {
        let sub = if name == "covering" { covering_check(&samples)? } else { verify_entry(&entry(name)?, &samples)? };
        rep.absorb(&sub);
    }
    Ok(rep)
}
