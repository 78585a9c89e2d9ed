//! Randomized audit of the relation's slices: affinity in each row,
//! classification against direct membership tests, and loops realizing a
//! target inside every non-empty slice.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ci::loop_for_target;
use crate::error::Result;
use crate::jet::{ampleness_slice, Jet1, SliceClass};
use crate::report::VerificationReport;
use crate::scalar::{GaussRational as Q, Scalar};

/// Quadrature points used for loop means.
pub const LOOP_QUADRATURE: usize = 64;

/// Tally of one audit.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AmpleCounts {
    pub rows: usize,
    pub empty: usize,
    pub full: usize,
    pub hyperplane: usize,
    pub probes: usize,
    pub affine_failures: usize,
    pub contradictions: usize,
    pub worst_mean_error: f64,
    pub worst_margin_error: f64,
}

fn small_q(rng: &mut ChaCha8Rng, sparsity: f64) -> Q {
    if rng.gen_bool(sparsity) {
        return Q::zero();
    }
    let d = rng.gen_range(1..=3);
    Q::from_parts(rng.gen_range(-4..=4), d, rng.gen_range(-2..=2), d)
}

fn q_vec(rng: &mut ChaCha8Rng, m: usize) -> Vec<Q> {
    sparse_vec(rng, m, 0.45)
}

fn sparse_vec(rng: &mut ChaCha8Rng, m: usize, sparsity: f64) -> Vec<Q> {
    (0..m).map(|_| small_q(rng, sparsity)).collect()
}

/// A sparse random jet with small Gaussian-rational entries, so that all
/// three slice classes occur.
pub fn random_jet(n: usize, rng: &mut ChaCha8Rng) -> Result<Jet1<Q>> {
    let m = 2 * n + 1;
    let sparsity = [0.3, 0.6, 0.85][rng.gen_range(0..3)];
    let a = if rng.gen_bool(0.1) { vec![Q::zero(); m] } else { sparse_vec(rng, m, sparsity) };
    let p = (0..m).map(|_| sparse_vec(rng, m, sparsity)).collect();
    Jet1::new(vec![0.0; m], a, p)
}

fn c64(v: &[Q]) -> Vec<Complex64> {
    v.iter().map(Scalar::to_c64).collect()
}

/// Points on the excluded hyperplane (or anywhere, for `Empty`/`Full`).
fn on_hyperplane(class: &SliceClass<Q>, r: &mut [Q]) {
    if let SliceClass::HyperplaneComplement { w, .. } = class {
        let k = w.iter().position(|x| !x.is_zero()).expect("nonzero normal");
        let val = class.affine_value(r);
        let fix = val * w[k].inv().expect("nonzero");
        r[k] = r[k].clone() - fix;
    }
}

/// Audits `jets` random jets for each free row. `probes` membership tests
/// per row are split between generic points and points of the excluded
/// hyperplane.
pub fn ampleness_audit(n: usize, jets: usize, probes: usize, delta: f64, seed: u64) -> Result<(VerificationReport, AmpleCounts)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = AmpleCounts::default();
    let mut report = VerificationReport::new(format!("ample n={n}"));
    report.seed = Some(seed);
    let m = 2 * n + 1;
    for k in 0..jets {
        let jet = random_jet(n, &mut rng)?;
        for row in 0..m {
            let e = jet.restrict(row)?;
            let class = ampleness_slice(&e);
            counts.rows += 1;
            match &class {
                SliceClass::Empty => counts.empty += 1,
                SliceClass::Full { .. } => counts.full += 1,
                SliceClass::HyperplaneComplement { .. } => counts.hyperplane += 1,
            }

            // h(r) − 2h(r+d) + h(r+2d) = 0 exactly
            let r = q_vec(&mut rng, m);
            let d = q_vec(&mut rng, m);
            let r1: Vec<Q> = r.iter().zip(&d).map(|(x, y)| x.clone() + y.clone()).collect();
            let r2: Vec<Q> = r1.iter().zip(&d).map(|(x, y)| x.clone() + y.clone()).collect();
            let second = e.value_at(&r) - e.value_at(&r1) * Q::from_i64(2) + e.value_at(&r2);
            if !second.is_zero() {
                counts.affine_failures += 1;
                report.offending.push(format!("jet {k} row {row}: not affine"));
            }

            for s in 0..probes {
                let mut x = q_vec(&mut rng, m);
                if s % 2 == 1 {
                    on_hyperplane(&class, &mut x);
                }
                counts.probes += 1;
                let member = !e.value_at(&x).is_zero();
                if member != class.contains(&x) {
                    counts.contradictions += 1;
                    report.offending.push(format!("jet {k} row {row}: membership contradiction"));
                }
            }

            if class.is_empty() {
                continue;
            }
            let cclass = match &class {
                SliceClass::Full { c } => SliceClass::Full { c: c.to_c64() },
                SliceClass::HyperplaneComplement { w, c } => SliceClass::HyperplaneComplement { w: c64(w), c: c.to_c64() },
                SliceClass::Empty => unreachable!(),
            };
            let target: Vec<Complex64> =
                (0..m).map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
            let lp = loop_for_target(&cclass, &target, delta)?;
            let mean_err = lp.mean(LOOP_QUADRATURE).iter().zip(&target).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let want = match &cclass {
                SliceClass::Full { c } => c.norm(),
                _ => delta,
            };
            let margin_err = (lp.margin(&cclass) - want).abs().max((lp.sampled_margin(&cclass, LOOP_QUADRATURE) - want).abs());
            counts.worst_mean_error = counts.worst_mean_error.max(mean_err);
            counts.worst_margin_error = counts.worst_margin_error.max(margin_err);
        }
    }
    report.check("affine", counts.affine_failures == 0, format!("{} failures over {} rows", counts.affine_failures, counts.rows));
    report.check(
        "classification",
        counts.contradictions == 0,
        format!(
            "{} contradictions over {} probes ({} empty, {} full, {} hyperplane)",
            counts.contradictions, counts.probes, counts.empty, counts.full, counts.hyperplane
        ),
    );
    report.check("loop_mean", counts.worst_mean_error <= 1e-10, format!("max error {:.3e}", counts.worst_mean_error));
    report.check("loop_margin", counts.worst_margin_error <= 1e-10, format!("max error {:.3e}", counts.worst_margin_error));
    Ok((report, counts))
}
