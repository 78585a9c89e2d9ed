use std::time::Instant;

use hcontact::ci::{ci_solve, demo_input, gamma_demo_input, GammaSpec, FRAMES};
use hcontact::Result;

fn main() -> Result<()> {
    // α = dz₃ with β = dz₁∧dz₂: formally contact, far from holonomic
    let input = demo_input(1, 33)?;
    let start = Instant::now();
    let r = ci_solve(&input, &GammaSpec::empty(), 0.5, 1e-3, 8)?;
    println!("plain run: pass = {} in {:.2?}", r.pass, start.elapsed());
    println!("  loop margin κ = {:.1e}, ω per sweep = {:?}", r.kappa, r.frequencies);
    println!("  interior margin = {:.3e}, sup deviation = {:.3e}", r.achieved_margin, r.achieved_deviation);

    // the x₃ faces carry the standard form and stay frozen
    let (input, gamma) = gamma_demo_input(33)?;
    let start = Instant::now();
    let r = ci_solve(&input, &gamma, 0.5, 1e-3, 8)?;
    println!("frozen faces: pass = {} in {:.2?}", r.pass, start.elapsed());
    for check in &r.report.checks {
        println!("  {:<22} {:<5} {}", check.name, check.pass, check.detail);
    }
    println!("  {FRAMES} frames, e.g. frame 8 a(centre) = {:?}", r.frame(8).a_at(r.output.grid.flat(&[16, 16, 16])));
    Ok(())
}
