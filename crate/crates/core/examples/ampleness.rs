use hcontact::ample::ampleness_audit;
use hcontact::ci::loop_for_target;
use hcontact::jet::{ampleness_slice, relation_value, Jet1, SliceClass};
use hcontact::{Complex64, GaussRational as Q, Result, Scalar};

fn main() -> Result<()> {
    // a = (0, 0, 1), p = 0: h = 0, the jet is outside the relation
    let mut p = vec![vec![Q::zero(); 3]; 3];
    let a = vec![Q::zero(), Q::zero(), Q::one()];
    let j = Jet1::new(vec![0.0; 3], a, p.clone())?;
    println!("h = {}", relation_value(&j));
    for row in 0..3 {
        println!("  slice through row {row}: {:?}", ampleness_slice(&j.restrict(row)?));
    }

    // a hyperplane complement, and a loop around a target outside it
    p[1][0] = Q::one();
    let j = Jet1::new(vec![0.0; 3], vec![Q::zero(), Q::zero(), Q::one()], p)?;
    let slice = ampleness_slice(&j.restrict(1)?);
    let SliceClass::HyperplaneComplement { w, c } = &slice else { unreachable!() };
    let slice = SliceClass::HyperplaneComplement { w: w.iter().map(Scalar::to_c64).collect(), c: c.to_c64() };
    let target = vec![Complex64::new(0.0, 0.0); 3];
    let lp = loop_for_target(&slice, &target, 1e-3)?;
    println!("loop r = {:.4}, mean = {:?}, margin = {:.3e}", lp.r, lp.mean(64), lp.margin(&slice));

    for n in [1, 2] {
        let (r, c) = ampleness_audit(n, 200, 4, 1e-3, 0)?;
        println!("n = {n}: pass = {}, {c:?}", r.pass);
    }
    Ok(())
}
