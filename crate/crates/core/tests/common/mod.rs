#![allow(dead_code)]

use hcontact::contact::SkewMatrix;
use hcontact::laurent::Monomial;
use hcontact::{GaussRational as Q, Laurent, LaurentForm, PolyMap, Scalar};
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn rand_q(rng: &mut Rng8) -> Q {
    let d = rng.gen_range(1..=4);
    Q::from_parts(rng.gen_range(-5..=5), d, rng.gen_range(-3..=3), d)
}

pub fn nonzero_q(rng: &mut Rng8) -> Q {
    loop {
        let q = rand_q(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Up to `terms` monomials with exponents in `lo..=hi`; `bar` allows z̄.
pub fn rand_laurent(rng: &mut Rng8, m: usize, terms: usize, lo: i32, hi: i32, bar: bool) -> Laurent<Q> {
    let parts = (0..rng.gen_range(1..=terms))
        .map(|_| {
            let z = (0..m).map(|_| rng.gen_range(lo..=hi)).collect();
            let zb = (0..m).map(|_| if bar { rng.gen_range(lo..=hi) } else { 0 }).collect();
            (Monomial::new(z, zb).unwrap(), rand_q(rng))
        })
        .collect::<Vec<_>>();
    Laurent::from_terms(m, parts).unwrap()
}

/// Up to `terms` monomials of total degree at most `deg` in `z, z̄`.
pub fn rand_poly(rng: &mut Rng8, m: usize, terms: usize, deg: usize, bar: bool) -> Laurent<Q> {
    let vars = if bar { 2 * m } else { m };
    let parts = (0..rng.gen_range(1..=terms))
        .map(|_| {
            let mut e = vec![0i32; 2 * m];
            for _ in 0..rng.gen_range(0..=deg) {
                e[rng.gen_range(0..vars)] += 1;
            }
            (Monomial::new(e[..m].to_vec(), e[m..].to_vec()).unwrap(), rand_q(rng))
        })
        .collect::<Vec<_>>();
    Laurent::from_terms(m, parts).unwrap()
}

pub struct FormSpec {
    pub terms: usize,
    pub coeff_terms: usize,
    pub lo: i32,
    pub hi: i32,
    pub bar_coeffs: bool,
    pub bar_covectors: bool,
}

pub const LAURENT: FormSpec = FormSpec { terms: 3, coeff_terms: 2, lo: -2, hi: 2, bar_coeffs: true, bar_covectors: true };
/// With `lo >= 0` coefficients come from `rand_poly` with total degree `hi`.
pub const POLY: FormSpec = FormSpec { terms: 2, coeff_terms: 2, lo: 0, hi: 2, bar_coeffs: true, bar_covectors: true };

pub fn rand_form(rng: &mut Rng8, m: usize, degree: usize, spec: &FormSpec) -> LaurentForm {
    let basis = if spec.bar_covectors { 2 * m } else { m };
    let terms = (0..rng.gen_range(1..=spec.terms))
        .map(|_| {
            let mut w: Vec<u8> = sample(rng, basis, degree).into_iter().map(|b| b as u8).collect();
            w.sort_unstable();
            let c = if spec.lo >= 0 {
                rand_poly(rng, m, spec.coeff_terms, spec.hi as usize, spec.bar_coeffs)
            } else {
                rand_laurent(rng, m, spec.coeff_terms, spec.lo, spec.hi, spec.bar_coeffs)
            };
            (w, c)
        })
        .collect::<Vec<_>>();
    LaurentForm::from_terms(m, degree, terms).unwrap()
}

pub fn rand_one_form(rng: &mut Rng8, m: usize) -> LaurentForm {
    let a = (0..m).map(|_| rand_laurent(rng, m, 2, -1, 2, false)).collect();
    LaurentForm::one_form(m, a, vec![Laurent::zero(m); m]).unwrap()
}

/// Holomorphic polynomial map with components of degree at most 2.
pub fn rand_map(rng: &mut Rng8, m: usize) -> PolyMap<Laurent<Q>> {
    PolyMap::new(m, (0..m).map(|_| rand_poly(rng, m, 2, 2, false)).collect())
}

pub fn rand_skew(rng: &mut Rng8, dim: usize) -> SkewMatrix<Q> {
    let mut b = SkewMatrix::zeros(dim, Q::zero());
    for i in 0..dim {
        for j in i + 1..dim {
            b.set(i, j, rand_q(rng));
        }
    }
    b
}
