use hcontact::ci::{ci_solve, demo_input, verify_ci, GammaSpec};
use hcontact::cli::annulus_points;
use hcontact::contact::is_contact_on;
use hcontact::dbar::{ah_pullback_verify, extend_form, RealSliceFunction};
use hcontact::gallery::{alpha_prime, std_form};
use hcontact::grid::{holonomy_defect, CubeGrid, GridSection};
use hcontact::io::{form_from_text, form_to_text};
use hcontact::{Error, Expr, GaussRational, Laurent, Point, PolyMap, Scalar};

#[test]
fn extend_then_verify_contact() {
    // real-slice data of dz₃ + x₁ dz₂ extends back to the standard form
    let coeffs = vec![
        RealSliceFunction::symbolic(Laurent::zero(3)).unwrap(),
        RealSliceFunction::x_monomial(&[1, 0, 0]),
        RealSliceFunction::x_monomial(&[0, 0, 0]),
    ];
    let ext = extend_form(&coeffs, 2).unwrap();
    assert_eq!(ext, std_form(1).unwrap());
    let r = is_contact_on(&ext, &annulus_points(3, 40, 2), 0.1).unwrap();
    assert!(r.pass);
    let sq = extend_form(&[coeffs[0].clone(), RealSliceFunction::x_monomial(&[2, 0, 0]), coeffs[2].clone()], 3).unwrap();
    assert_eq!(sq.dz_coefficient(1), Laurent::z_monomial(GaussRational::one(), &[2, 0, 0]));
}

#[test]
fn conjugation_is_not_a_valid_pullback() {
    let conj = PolyMap::new(3, (0..3).map(Expr::zbar).collect());
    let pts: Vec<_> = (0..5).map(|k| Point::real(&[0.1 * k as f64, 0.2, 0.3])).collect();
    let dz1 = hcontact::ExprForm::dz(3, 0);
    assert!(matches!(ah_pullback_verify(&conj, &dz1, &pts, 1e-8), Err(Error::Precondition(_))));
}

#[test]
fn sampled_gallery_form_is_holonomic_and_survives_integration() {
    let alpha = alpha_prime().map_coefficients(|c| c.map_scalars(|s| s.to_c64()));
    let sample = |nodes| {
        let grid = CubeGrid::new(vec![0.5, 0.0, 0.0], vec![1.5, 1.0, 1.0], nodes).unwrap();
        GridSection::sample_holonomic(grid, &alpha).unwrap()
    };
    // the finite-difference curl converges to β as the mesh shrinks
    let (coarse, s) = (holonomy_defect(&sample(9)).unwrap(), sample(17));
    let fine = holonomy_defect(&s).unwrap();
    assert!(fine < 0.4 * coarse, "{coarse} -> {fine}");
    let r = ci_solve(&s, &GammaSpec::empty(), 0.5, 1e-3, 8).unwrap();
    assert!(r.pass && r.unchanged);
}

#[test]
fn corrupted_output_is_caught() {
    let input = demo_input(1, 17).unwrap();
    let mut r = ci_solve(&input, &GammaSpec::empty(), 0.5, 1e-3, 8).unwrap();
    assert!(r.pass);
    let centre = r.output.grid.flat(&[8, 8, 8]);
    r.output.a[centre * 3 + 1] += hcontact::Complex64::new(0.6, 0.0);
    let rep = verify_ci(&r, &input, 0.5, 1e-3).unwrap();
    assert!(!rep.pass);
    assert!(rep.checks.iter().any(|c| c.name == "c0_close" && !c.pass));
}

#[test]
fn text_format_carries_gallery_forms() {
    let f = alpha_prime();
    assert_eq!(form_from_text::<GaussRational>(&form_to_text(&f)).unwrap(), f);
}
