//! Least-squares fit of a polynomial `(1,0)`-form in `z` to samples of a
//! form's `dz` coefficients on the real slice.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::contact::is_contact_on;
use crate::dbar::multi_indices;
use crate::error::{Error, Result};
use crate::form::Form;
use crate::grid::GridSection;
use crate::laurent::Laurent;
use crate::report::VerificationReport;

/// Fitted form and `max |fit − data|` over samples and coefficients.
#[derive(Clone, Debug)]
pub struct HolomorphicFit {
    pub form: Form<Laurent<Complex64>>,
    pub residual: f64,
    pub monomials: usize,
}

/// Fits each `dz_i` coefficient by a polynomial of total degree `≤ degree`.
///
/// `samples` holds `(x, (a_1(x), …, a_m(x)))` with `x` real. The system is
/// solved by SVD in centred, rescaled variables and expanded back to
/// monomials in `z`.
pub fn fit_holomorphic(samples: &[(Vec<f64>, Vec<Complex64>)], degree: usize) -> Result<HolomorphicFit> {
    let m = samples.first().map(|(x, _)| x.len()).ok_or_else(|| Error::Invalid("no samples".into()))?;
    if let Some((x, a)) = samples.iter().find(|(x, a)| x.len() != m || a.len() != m) {
        return Err(Error::Dimension { expected: m, found: x.len().min(a.len()) });
    }
    let exps = multi_indices(m, degree);
    if samples.len() < exps.len() {
        return Err(Error::Invalid(format!("{} samples for {} monomials", samples.len(), exps.len())));
    }
    let centre: Vec<f64> = (0..m).map(|j| samples.iter().map(|(x, _)| x[j]).sum::<f64>() / samples.len() as f64).collect();
    let scale: Vec<f64> = (0..m)
        .map(|j| samples.iter().map(|(x, _)| (x[j] - centre[j]).abs()).fold(0.0, f64::max).max(1e-300))
        .collect();
    let design = DMatrix::<f64>::from_fn(samples.len(), exps.len(), |r, c| {
        let x = &samples[r].0;
        exps[c].iter().enumerate().map(|(j, &e)| ((x[j] - centre[j]) / scale[j]).powi(e as i32)).product()
    });
    // real and imaginary parts as separate right-hand sides
    let rhs = DMatrix::<f64>::from_fn(samples.len(), 2 * m, |r, k| {
        let v = samples[r].1[k / 2];
        if k % 2 == 0 { v.re } else { v.im }
    });
    let sv = design.singular_values();
    let cut = sv.max() * 1e-12 * samples.len().max(exps.len()) as f64;
    let rank = sv.iter().filter(|&&s| s > cut).count();
    if rank < exps.len() {
        return Err(Error::RankDeficient { rank, cols: exps.len() });
    }
    let qr = design.clone().qr();
    let sol = qr
        .r()
        .solve_upper_triangular(&(qr.q().transpose() * &rhs))
        .ok_or(Error::RankDeficient { rank, cols: exps.len() })?;
    let residual = (0..samples.len())
        .flat_map(|r| (0..m).map(move |i| (r, i)))
        .map(|(r, i)| {
            let row = design.row(r);
            let re = row.dot(&sol.column(2 * i).transpose()) - rhs[(r, 2 * i)];
            let im = row.dot(&sol.column(2 * i + 1).transpose()) - rhs[(r, 2 * i + 1)];
            re.hypot(im)
        })
        .fold(0.0, f64::max);
    let coeffs = |c: usize, i: usize| Complex64::new(sol[(c, 2 * i)], sol[(c, 2 * i + 1)]);

    // ((z_j − c_j)/s_j)^e expanded in z
    let shifted: Vec<Laurent<Complex64>> = (0..m)
        .map(|j| {
            (Laurent::z(m, j) - Laurent::constant(m, Complex64::new(centre[j], 0.0)))
                .scale(&Complex64::new(1.0 / scale[j], 0.0))
        })
        .collect();
    let basis: Vec<Laurent<Complex64>> = exps
        .iter()
        .map(|e| {
            e.iter().enumerate().fold(Laurent::constant(m, Complex64::new(1.0, 0.0)), |acc, (j, &k)| {
                &acc * &shifted[j].pow(k as u32)
            })
        })
        .collect();
    let a: Vec<Laurent<Complex64>> = (0..m)
        .map(|i| {
            basis.iter().enumerate().fold(Laurent::zero(m), |acc, (c, b)| &acc + &b.scale(&coeffs(c, i)))
        })
        .collect();
    let form = Form::one_form(m, a, vec![Laurent::zero(m); m])?;
    Ok(HolomorphicFit { form, residual, monomials: exps.len() })
}

/// `(x, a(x))` at every `step`-th node of a section's grid.
pub fn section_samples(s: &GridSection, step: usize) -> Vec<(Vec<f64>, Vec<Complex64>)> {
    s.grid.subsample(step).into_iter().map(|node| (s.grid.coords(node), s.a_at(node).to_vec())).collect()
}

/// Fits the `a` of a section and, when the residual is at most `δ/10`,
/// checks the fitted form for the contact condition with margin `δ/2` at
/// the grid nodes. A larger residual is reported, not treated as failure.
pub fn closure_step(s: &GridSection, degree: usize, delta: f64, step: usize) -> Result<(HolomorphicFit, VerificationReport)> {
    let fit = fit_holomorphic(&section_samples(s, step), degree)?;
    let mut rep = VerificationReport::new(format!("closure degree {degree}"));
    let close = fit.residual <= delta / 10.0;
    rep.check("residual", true, format!("{:.3e} with {} monomials (threshold {:.1e})", fit.residual, fit.monomials, delta / 10.0));
    if close {
        let nodes: Vec<_> = (0..s.grid.len()).map(|k| s.grid.point(k)).collect();
        let contact = is_contact_on(&fit.form, &nodes, delta / 2.0)?;
        rep.absorb(&contact);
    } else {
        rep.warn("residual above delta/10: fitted form not checked");
    }
    Ok((fit, rep))
}

/// Drops coefficients below `tol` in modulus, for display and comparison.
pub fn prune(form: &Form<Laurent<Complex64>>, tol: f64) -> Form<Laurent<Complex64>> {
    form.map_coefficients(|c| {
        let m = c.dim();
        Laurent::from_terms(m, c.terms().filter(|(_, v)| v.norm() > tol).map(|(k, v)| (k.clone(), *v)))
            .expect("terms come from a valid polynomial")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Coeff, Point};

    fn samples_of(f: impl Fn(&[f64]) -> Vec<Complex64>) -> Vec<(Vec<f64>, Vec<Complex64>)> {
        let mut out = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    let x = vec![i as f64 / 4.0, j as f64 / 4.0, k as f64 / 4.0];
                    let a = f(&x);
                    out.push((x, a));
                }
            }
        }
        out
    }

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn recovers_standard_form() {
        let fit = fit_holomorphic(&samples_of(|x| vec![c(0.0), c(x[0]), c(1.0)]), 1).unwrap();
        assert!(fit.residual < 1e-12);
        let want = Form::dz(3, 2).add(&Form::dz(3, 1).mul_function(&Laurent::z(3, 0))).unwrap();
        let diff = prune(&fit.form, 1e-12).sub(&want).unwrap();
        assert!(prune(&diff, 1e-12).is_zero(), "{}", fit.form);
    }

    #[test]
    fn recovers_cubic_exactly_and_reports_truncation() {
        let fit = fit_holomorphic(&samples_of(|x| vec![c(0.0), c(x[0].powi(3) / 3.0), c(1.0)]), 3).unwrap();
        assert!(fit.residual < 1e-12, "{}", fit.residual);
        let a1 = fit.form.dz_coefficient(1);
        let v = a1.eval_c64(&Point::new(vec![Complex64::new(0.3, 0.7), c(0.0), c(0.0)])).unwrap();
        assert!((v - Complex64::new(0.3, 0.7).powi(3) / 3.0).norm() < 1e-10);
        let fit = fit_holomorphic(&samples_of(|x| vec![c(x[0].powi(5)), c(0.0), c(1.0)]), 2).unwrap();
        assert!(fit.residual > 1e-3);
    }

    #[test]
    fn closure_on_holonomic_section() {
        let alpha: Form<Laurent<Complex64>> = Form::dz(3, 2).add(&Form::dz(3, 1).mul_function(&Laurent::z(3, 0))).unwrap();
        let s = GridSection::sample_holonomic(crate::grid::CubeGrid::unit(1, 9).unwrap(), &alpha).unwrap();
        let (fit, rep) = closure_step(&s, 1, 1e-3, 2).unwrap();
        assert!(fit.residual < 1e-12 && rep.pass && rep.warnings.is_empty(), "{}", rep.to_text(false));
        assert!((rep.min_margin.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let flat: Vec<_> = (0..30).map(|k| (vec![k as f64, 0.0, 0.0], vec![c(1.0); 3])).collect();
        assert!(matches!(fit_holomorphic(&flat, 1), Err(Error::RankDeficient { .. })));
    }
}
