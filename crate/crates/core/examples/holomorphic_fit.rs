use hcontact::ci::{ci_solve, demo_input, GammaSpec};
use hcontact::fit::{closure_step, fit_holomorphic, prune, section_samples};
use hcontact::grid::{CubeGrid, GridSection};
use hcontact::{Complex64, Form, Laurent, Result};

fn main() -> Result<()> {
    // samples of dz₃ + x₁ dz₂ on a 9³ grid give back the form itself
    let alpha: Form<Laurent<Complex64>> = Form::dz(3, 2).add(&Form::dz(3, 1).mul_function(&Laurent::z(3, 0)))?;
    let s = GridSection::sample_holonomic(CubeGrid::unit(1, 9)?, &alpha)?;
    let fit = fit_holomorphic(&section_samples(&s, 1), 1)?;
    println!("degree 1: residual {:.1e}, form {}", fit.residual, prune(&fit.form, 1e-12));

    // the convex-integration output is small-amplitude, high-frequency
    let r = ci_solve(&demo_input(1, 33)?, &GammaSpec::empty(), 0.5, 1e-3, 8)?;
    for degree in [2, 6, 10] {
        let (fit, rep) = closure_step(&r.output, degree, 1e-3, 2)?;
        println!("degree {degree}: residual {:.3e}, contact check pass = {}", fit.residual, rep.pass);
    }
    Ok(())
}
