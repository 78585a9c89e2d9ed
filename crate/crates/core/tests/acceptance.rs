//! Acceptance gate. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any fails. Tolerances are pinned below.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use hcontact::ample::ampleness_audit;
use hcontact::ci::{ci_solve, demo_input, gamma_demo_input, verify_ci, GammaSpec};
use hcontact::contact::{formal_defect, pfaffian_coeffs, FormalPair};
use hcontact::dbar::{ah_pullback_verify, extend_function, multi_indices, Extension, RealSliceFunction, SampledField};
use hcontact::fit::{closure_step, fit_holomorphic, prune, section_samples};
use hcontact::gallery::{default_torus_triples, gallery_verify_all};
use hcontact::grid::{CubeGrid, GridSection};
use hcontact::{Complex64, Form, GaussRational as Q, Laurent, LaurentForm, Point, PolyMap, Result, Scalar};
use rand::{Rng, SeedableRng};

const SEED: u64 = 20261016;
const GALLERY_BUDGET: Duration = Duration::from_secs(5);
const DBAR_BUDGET: Duration = Duration::from_secs(30);
const CI_BUDGET: Duration = Duration::from_secs(60);
const LOOP_TOL: f64 = 1e-10;
const RATIO_SLACK: f64 = 0.2;
const AH_TOL: f64 = 1e-8;
const EPS: f64 = 0.5;
const DELTA: f64 = 1e-3;
const STRUCTURAL_INSTANCES: usize = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn gallery_exactness() -> Result<Outcome> {
    let start = Instant::now();
    let mut names: Vec<String> = [-3, -2, 0, 1, 2, 3, -1].iter().map(|k| format!("circle:{k}")).collect();
    names.extend(default_torus_triples().iter().map(|(k, l, m)| format!("torus:{k},{l},{m}")));
    names.extend(["0", "1/4", "1/2", "3/4", "1"].iter().map(|t| format!("sigma:{t}")));
    names.push("covering".into());
    let r = gallery_verify_all(Some(&names), SEED)?;
    let took = start.elapsed();
    let failed: Vec<_> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    outcome(
        r.pass && r.checks.len() == names.len() && took < GALLERY_BUDGET,
        format!("{} identities, failed {failed:?}, {took:.2?}", r.checks.len()),
    )
}

fn pfaffian_oracle() -> Result<Outcome> {
    let mut rng = Rng8::seed_from_u64(SEED);
    let mut mismatches = 0;
    let mut checked = 0;
    for n in [1usize, 2] {
        let m = 2 * n + 1;
        for trial in 0..200 {
            let b = rand_skew(&mut rng, m);
            let beta = LaurentForm::two_form_holomorphic(m, |i, j| Laurent::constant(m, b.get(i, j)));
            let power = beta.wedge_power(n)?;
            // b_i is the coefficient of the word missing i
            let brute: Vec<Q> = (0..m)
                .map(|i| {
                    let w: Vec<u8> = (0..m as u8).filter(|&k| k as usize != i).collect();
                    power.coefficient(&w).as_constant().unwrap_or_else(Q::zero)
                })
                .collect();
            if trial < 100 {
                mismatches += usize::from(pfaffian_coeffs(&b)? != brute);
            } else {
                let a: Vec<Q> = (0..m).map(|_| rand_q(&mut rng)).collect();
                let alpha = LaurentForm::one_form(m, a.iter().map(|x| Laurent::constant(m, x.clone())).collect(), vec![Laurent::zero(m); m])?;
                let top = formal_defect(&FormalPair::new(alpha, beta)?)?.top_coefficient().as_constant().unwrap_or_else(Q::zero);
                let want = a.iter().zip(&brute).enumerate().fold(Q::zero(), |acc, (i, (x, y))| {
                    let t = x.clone() * y.clone();
                    if i % 2 == 0 { acc + t } else { acc - t }
                });
                mismatches += usize::from(top != want);
            }
            checked += 1;
        }
    }
    outcome(mismatches == 0, format!("{checked} exact instances, {mismatches} mismatches"))
}

fn ampleness() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [1, 2] {
        let (r, c) = ampleness_audit(n, 1000, 10, DELTA, SEED + n as u64)?;
        pass &= r.pass && c.affine_failures == 0 && c.contradictions == 0;
        pass &= c.worst_mean_error <= LOOP_TOL && c.worst_margin_error <= LOOP_TOL;
        parts.push(format!(
            "n={n}: {} rows ({} empty, {} full, {} hyperplane), {} probes, {} contradictions, loop errors {:.1e}/{:.1e}",
            c.rows, c.empty, c.full, c.hyperplane, c.probes, c.contradictions, c.worst_mean_error, c.worst_margin_error
        ));
    }
    outcome(pass, parts.join("; "))
}

fn dbar_ratio(f: impl Fn(&[f64]) -> f64, l: usize) -> Result<f64> {
    let grid = CubeGrid::unit(1, 17)?;
    let field = SampledField::from_fn(grid.clone(), f);
    let Extension::Sampled(ext) = extend_function(&RealSliceFunction::Sampled(field), l)? else { unreachable!() };
    let node = grid.flat(&[8, 8, 8]);
    let size = |t: f64| -> Result<f64> {
        Ok(ext.dbar_residual(node, &[t, t, t])?.iter().map(|v| v.norm()).fold(0.0, f64::max))
    };
    Ok(size(0.1)? / size(0.05)?)
}

fn dbar_extension() -> Result<Outcome> {
    let start = Instant::now();
    let mut wrong = Vec::new();
    for idx in multi_indices(3, 4) {
        let exps: Vec<i32> = idx.iter().map(|&e| e as i32).collect();
        let l = exps.iter().sum::<i32>().max(1) as usize;
        let ext = extend_function(&RealSliceFunction::x_monomial(&exps), l)?.into_symbolic()?;
        if ext != Laurent::z_monomial(Q::one(), &exps) {
            wrong.push(exps);
        }
    }

    let mut ratios = Vec::new();
    let mut ratios_ok = true;
    for (name, f) in [("sin x1", (|x: &[f64]| x[0].sin()) as fn(&[f64]) -> f64), ("exp x2", |x: &[f64]| x[1].exp())] {
        for l in 1..=3 {
            let r = dbar_ratio(f, l)?;
            let want = 2f64.powi(l as i32);
            ratios_ok &= r >= want * (1.0 - RATIO_SLACK);
            ratios.push(format!("{name} l={l}: {r:.3}"));
        }
    }

    let mut rng = Rng8::seed_from_u64(SEED);
    let mut ah_pass = 0;
    for _ in 0..50 {
        let alpha = LaurentForm::one_form(3, (0..3).map(|_| rand_laurent(&mut rng, 3, 2, 0, 2, false)).collect(), vec![Laurent::zero(3); 3])?;
        // identity plus a holomorphic term plus a cubic in y
        let map = PolyMap::new(
            3,
            (0..3)
                .map(|i| {
                    let j = rng.gen_range(0..3);
                    let y3 = (Laurent::z(3, j) - Laurent::zbar(3, j)).pow(3).scale(&(rand_q(&mut rng) * Q::from_ratio(1, 10)));
                    &(&Laurent::z(3, i) + &rand_laurent(&mut rng, 3, 1, 0, 2, false).scale(&Q::from_ratio(1, 10))) + &y3
                })
                .collect(),
        );
        let samples: Vec<Point<Complex64>> =
            (0..20).map(|_| Point::real(&(0..3).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>())).collect();
        // binary64 coefficients from here on
        let alpha = alpha.map_coefficients(|c| c.map_scalars(Scalar::to_c64));
        let map = PolyMap::new(3, map.components().iter().map(|c| c.map_scalars(Scalar::to_c64)).collect());
        let r = ah_pullback_verify(&map, &alpha, &samples, AH_TOL)?;
        if !r.pass && std::env::var("ACCEPTANCE_DEBUG").is_ok() {
            eprintln!("{:?} {} {} {}", r.broken(), r.max_dbar_a, r.max_b, r.max_db);
        }
        ah_pass += usize::from(r.pass);
    }
    let took = start.elapsed();
    outcome(
        wrong.is_empty() && ratios_ok && ah_pass == 50 && took < DBAR_BUDGET,
        format!("monomials wrong {wrong:?}; ratios [{}]; AH pullback {ah_pass}/50; {took:.2?}", ratios.join(", ")),
    )
}

fn alpha_std<S: Scalar>() -> Form<Laurent<S>> {
    Form::dz(3, 2).add(&Form::dz(3, 1).mul_function(&Laurent::z(3, 0))).expect("same dimension")
}

fn convex_integration() -> Result<Outcome> {
    let start = Instant::now();
    let input = demo_input(1, 33)?;
    let r = ci_solve(&input, &GammaSpec::empty(), EPS, DELTA, 8)?;
    let took = start.elapsed();
    let rep = verify_ci(&r, &input, EPS, DELTA)?;
    let check = |name: &str| rep.checks.iter().any(|c| c.name == name && c.pass);
    let demo = r.pass
        && rep.pass
        && rep.min_margin.is_some_and(|m| m >= DELTA)
        && ["holonomic", "c0_close", "frames_formal"].iter().all(|c| check(c))
        && took < CI_BUDGET;

    let held = GridSection::sample_holonomic(CubeGrid::unit(1, 33)?, &alpha_std::<Q>())?;
    let h = ci_solve(&held, &GammaSpec::empty(), EPS, DELTA, 8)?;
    let noop = h.pass && h.unchanged && h.output == held && h.achieved_deviation == 0.0;

    let (gin, gamma) = gamma_demo_input(33)?;
    let g = ci_solve(&gin, &gamma, EPS, DELTA, 8)?;
    let frozen = g.pass && g.report.checks.iter().any(|c| c.name == "frames_fixed_on_gamma" && c.pass);
    outcome(
        demo && noop && frozen,
        format!(
            "demo pass {} in {took:.2?} (margin {:.3e}, deviation {:.3e}); holonomic no-op {noop}; frozen faces {frozen}",
            demo, r.achieved_margin, r.achieved_deviation
        ),
    )
}

fn closure_step_check() -> Result<Outcome> {
    let r = ci_solve(&demo_input(1, 33)?, &GammaSpec::empty(), EPS, DELTA, 8)?;
    let mut pass = r.pass;
    let mut parts = Vec::new();
    for degree in [3, 10] {
        let (fit, rep) = closure_step(&r.output, degree, DELTA, 2)?;
        let applies = fit.residual <= DELTA / 10.0;
        pass &= rep.pass;
        parts.push(format!(
            "degree {degree}: residual {:.3e}, {}",
            fit.residual,
            if applies { format!("contact at nodes {} (margin {:.2e})", rep.pass, rep.min_margin.unwrap_or(f64::NAN)) } else { "above delta/10".into() }
        ));
    }
    let s = GridSection::sample_holonomic(CubeGrid::unit(1, 9)?, &alpha_std::<Complex64>())?;
    let fit = fit_holomorphic(&section_samples(&s, 1), 1)?;
    let diff = prune(&fit.form, 1e-9).sub(&alpha_std())?;
    let exact = fit.residual <= 1e-12 && prune(&diff, 1e-12).is_zero();
    pass &= exact;
    parts.push(format!("standard form recovered {exact} (residual {:.1e})", fit.residual));
    outcome(pass, parts.join("; "))
}

fn structural_suite() -> Result<Outcome> {
    let mut rng = Rng8::seed_from_u64(SEED);
    let mut failures = [0usize; 5];
    let debug = std::env::var("ACCEPTANCE_DEBUG").is_ok();
    for k in 0..STRUCTURAL_INSTANCES {
        let m = 3;
        let t0 = Instant::now();
        let p = k % 3;
        let u = rand_form(&mut rng, m, p, &LAURENT);
        failures[0] += usize::from(!u.ext_d().ext_d().is_zero());

        let q = rng.gen_range(0..=2);
        let v = rand_form(&mut rng, m, q, &LAURENT);
        let lhs = u.wedge(&v)?.ext_d();
        let sign = if p % 2 == 0 { Q::one() } else { -Q::one() };
        let rhs = u.ext_d().wedge(&v)?.add(&u.wedge(&v.ext_d())?.scale(&sign))?;
        failures[1] += usize::from(lhs != rhs);

        let s = if (p * q) % 2 == 0 { Q::one() } else { -Q::one() };
        failures[2] += usize::from(u.wedge(&v)? != v.wedge(&u)?.scale(&s));

        let w = rand_form(&mut rng, m, k % 3, &POLY);
        let f = rand_map(&mut rng, m);
        let g = rand_map(&mut rng, m);
        let functorial = w.pullback(&g.compose(&f)?)? == w.pullback(&g)?.pullback(&f)?
            && w.ext_d().pullback(&f)? == w.pullback(&f)?.ext_d();
        failures[3] += usize::from(!functorial);

        let alpha = rand_one_form(&mut rng, m);
        let fun = rand_laurent(&mut rng, m, 2, -1, 1, true);
        let scaled = hcontact::contact::contact_defect(&alpha.mul_function(&fun))?;
        let want = hcontact::contact::contact_defect(&alpha)?.mul_function(&fun.pow(2));
        failures[4] += usize::from(scaled != want);
        if debug && t0.elapsed() > Duration::from_millis(200) {
            eprintln!("instance {k}: {:.2?}", t0.elapsed());
        }
    }
    // one larger instance of the scaling law per hundred, on C^5
    for _ in 0..STRUCTURAL_INSTANCES / 100 {
        let alpha = rand_one_form(&mut rng, 5);
        let fun = rand_laurent(&mut rng, 5, 1, -1, 1, true);
        let scaled = hcontact::contact::contact_defect(&alpha.mul_function(&fun))?;
        let want = hcontact::contact::contact_defect(&alpha)?.mul_function(&fun.pow(3));
        failures[4] += usize::from(scaled != want);
    }
    let names = ["d∘d", "Leibniz", "anticommutativity", "functoriality", "scaling"];
    let detail = names.iter().zip(failures).map(|(n, f)| format!("{n} {f}")).collect::<Vec<_>>().join(", ");
    outcome(failures.iter().all(|&f| f == 0), format!("{STRUCTURAL_INSTANCES} instances each; failures: {detail}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 7] = [
        ("1 gallery exactness", gallery_exactness),
        ("2 pfaffian oracle", pfaffian_oracle),
        ("3 ampleness", ampleness),
        ("4 dbar-flat extension", dbar_extension),
        ("5 convex integration", convex_integration),
        ("6 closure step", closure_step_check),
        ("7 structural invariants", structural_suite),
    ];
    // ACCEPTANCE_ONLY=4,7 runs a subset
    let only: Option<Vec<String>> = std::env::var("ACCEPTANCE_ONLY").ok().map(|v| v.split(',').map(|s| s.trim().to_string()).collect());
    let mut all = true;
    for (name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.iter().any(|k| name.split(' ').next() == Some(k.as_str()))) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        println!("{} criterion {name} ({:.2?}): {detail}", if pass { "PASS" } else { "FAIL" }, start.elapsed());
    }
    if all { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
