use hcontact::contact::contact_defect;
use hcontact::gallery::{circle_form, covering_check, covering_check_with, entry, gallery_verify_all, sample_points, std_form, torus_form, verify_entry, GalleryForm};
use hcontact::{Complex64, Expr, PolyMap, Result};

fn main() -> Result<()> {
    println!("std(2) defect: {}", contact_defect(&std_form(2)?)?);
    if let GalleryForm::Exact(a3) = circle_form(3) {
        println!("α₃ = {a3}\n  α₃∧dα₃ = {}", contact_defect(&a3)?);
    }
    println!("α(−1,2,1)∧dα = {}", contact_defect(&torus_form(-1, 2, 1))?);

    let pts = sample_points(100, 0);
    let r = verify_entry(&entry("sigma:1/2")?, &pts)?;
    println!("σ_1/2 at 100 samples: {} (worst slack {:.2e})", r.pass, r.min_margin.unwrap_or(0.0));

    println!("covering identities: {}", covering_check(&pts)?.pass);
    let bent = PolyMap::new(3, vec![(Expr::constant(Complex64::new(0.0, 1.01)) * Expr::z(0)).exp(), Expr::z(1), Expr::z(2)]);
    println!("with e^(1.01 i x) instead: {}", covering_check_with(&bent, &pts)?.pass);

    let all = gallery_verify_all(None, 0)?;
    println!("whole gallery: {} ({} identities)", all.pass, all.checks.len());
    Ok(())
}
