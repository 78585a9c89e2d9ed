use hcontact::gallery::{circle_form, covering_power, std_form, GalleryForm};
use hcontact::io::{form_from_text, form_to_text, map_to_text};
use hcontact::{GaussRational, Result};

fn main() -> Result<()> {
    // (x, y, z) ↦ (x^{k+1}/(k+1), y, z) pulls the standard form back to α_k
    let std = std_form(1)?;
    for k in [-3, -2, 0, 1, 2, 3] {
        let pulled = std.pullback(&covering_power(k))?;
        let GalleryForm::Exact(ak) = circle_form(k) else { unreachable!() };
        println!("k = {k:>2}: {pulled}  equal to α_k: {}", pulled == ak);
    }

    // forms and maps as text documents
    let text = form_to_text(&std.pullback(&covering_power(2))?);
    println!("{text}");
    let back = form_from_text::<GaussRational>(&text)?;
    println!("round trip lossless: {}", back == std.pullback(&covering_power(2))?);
    println!("{}", map_to_text(&covering_power(2)));
    Ok(())
}
