use hcontact::cli::annulus_points;
use hcontact::contact::{contact_defect, is_contact_on, pencil_check};
use hcontact::{GaussRational, Laurent, LaurentForm, Result, Scalar};

fn main() -> Result<()> {
    // dz₃ + z₁ dz₂
    let alpha = LaurentForm::dz(3, 2).add(&LaurentForm::dz(3, 1).mul_function(&Laurent::z(3, 0)))?;
    println!("α         = {alpha}");
    println!("dα        = {}", alpha.ext_d());
    println!("α∧dα      = {}", contact_defect(&alpha)?);

    let samples = annulus_points(3, 50, 0);
    let r = is_contact_on(&alpha, &samples, 0.5)?;
    println!("contact at 50 samples: {} (margin {:?})", r.pass, r.min_margin);

    // dz₃ alone is integrable: α∧dα = 0 everywhere
    let flat = is_contact_on(&LaurentForm::dz(3, 2), &samples, 1e-9)?;
    println!("dz₃ contact: {} at {}", flat.pass, flat.argmin.unwrap_or_default());

    // the straight path to a rescaled copy stays contact
    let scaled = alpha.scale(&GaussRational::from_ratio(101, 100));
    let r = pencil_check(&alpha, &scaled, &samples, 11, 0.5)?;
    println!("pencil α → 1.01α: {}", r.pass);
    Ok(())
}
