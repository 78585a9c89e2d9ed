use hcontact::cli::annulus_points;
use hcontact::dbar::{ah_pullback_verify, dbar_defect, extend_function, x_power, RealSliceFunction, SampledField};
use hcontact::grid::CubeGrid;
use hcontact::{Complex64, Expr, LaurentForm, Point, PolyMap, Result};

fn main() -> Result<()> {
    // x₁²x₂ extends to z₁²z₂ once the order reaches the degree
    let f = RealSliceFunction::symbolic(x_power(3, &[2, 1, 0])?)?;
    for l in 1..=3 {
        let ext = extend_function(&f, l)?.into_symbolic()?;
        println!("l = {l}: {ext}");
    }

    // a truncated extension is only flat to its order
    let ext = extend_function(&RealSliceFunction::x_monomial(&[3, 0, 0]), 2)?.into_symbolic()?;
    let pts: Vec<Point<Complex64>> = (0..5).map(|k| Point::real(&[0.2 * k as f64, 0.1, -0.3])).collect();
    for order in [2, 3] {
        println!("ext(x³, 2): order-{order} ∂̄ defect = {:.3e}", dbar_defect(&ext, 3, &pts, order)?);
    }

    // sampled sin x₁: ∂̄ residual drops as the slab thins
    let grid = CubeGrid::unit(1, 17)?;
    let field = SampledField::from_fn(grid.clone(), |x| x[0].sin());
    let hcontact::dbar::Extension::Sampled(s) = extend_function(&RealSliceFunction::Sampled(field), 2)? else { unreachable!() };
    let centre = grid.flat(&[8, 8, 8]);
    for y in [0.1, 0.05, 0.025] {
        let r = s.dbar_residual(centre, &[y, 0.0, 0.0])?;
        println!("|y| = {y}: |∂̄F| = {:.3e}", r.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }

    // pulling back a holomorphic form by a map flat to second order
    let alpha = LaurentForm::dz(3, 2).add(&LaurentForm::dz(3, 1).mul_function(&hcontact::Laurent::z(3, 0)))?.to_expr();
    let (z, zb) = (Expr::z(0), Expr::zbar(0));
    let wobble = Expr::real(0.01) * (z.clone() - zb).powi(3);
    let map = PolyMap::new(3, vec![z + wobble, Expr::z(1), Expr::z(2)]);
    let near_real: Vec<_> = annulus_points(3, 20, 1).iter().map(|p| Point::real(&p.values().iter().map(|v| v.re).collect::<Vec<_>>())).collect();
    let r = ah_pullback_verify(&map, &alpha, &near_real, 1e-8)?;
    println!("pullback AH check on the real slice: pass = {}, max ∂̄a = {:.1e}", r.pass, r.max_dbar_a);
    println!("pulled-back coefficient count: {}", alpha.pullback(&map)?.num_terms());
    Ok(())
}
