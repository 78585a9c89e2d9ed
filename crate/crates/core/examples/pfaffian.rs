use hcontact::contact::{contact_defect, formal_defect, pfaffian_coeffs, FormalPair, SkewMatrix};
use hcontact::{GaussRational as Q, LaurentForm, Result, Scalar};

fn main() -> Result<()> {
    // β on C⁵ with entries β_ij = i + 2j for i < j
    let b = SkewMatrix::from_fn(5, Q::zero(), |i, j| Q::from_i64((i + 2 * j) as i64));
    let coeffs = pfaffian_coeffs(&b)?;
    println!("b_i = 2!·Pf(β without row/column i):");
    for (i, c) in coeffs.iter().enumerate() {
        println!("  b_{} = {c}", i + 1);
    }

    // the same numbers from the exterior algebra
    let beta = LaurentForm::two_form_holomorphic(5, |i, j| hcontact::Laurent::constant(5, b.get(i, j)));
    let square = beta.wedge(&beta)?;
    println!("β∧β = {square}");

    // α∧β² for α = dz₅ picks out b_5
    let pair = FormalPair::new(LaurentForm::dz(5, 4), beta)?;
    println!("α∧β² = {}", formal_defect(&pair)?);
    println!("α∧(dα)² for α = dz₅ = {}", contact_defect(&LaurentForm::dz(5, 4))?);
    Ok(())
}
