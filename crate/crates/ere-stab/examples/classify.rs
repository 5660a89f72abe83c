//! Stability verdict, normal form and ω-indices at a few parameter points.
//!
//! `cargo run --release --example classify`

use ere_stab::make_params;
use ere_stab::regions::{classify_e0, classify_params};

fn main() -> ere_stab::Result<()> {
    for (alpha, beta, e) in [(0.5, 0.5, 0.0), (2.0, 1.0, 0.0), (2.0, 0.6, 0.3), (4.0, 5.0 / 3.0, 0.5)] {
        let p = make_params(alpha, beta, e)?;
        let v = classify_params(&p)?;
        println!("(α, β, e) = ({alpha}, {beta:.4}, {e})");
        println!("  verdict      {}", v.verdict);
        println!("  normal form  {}", v.label());
        if let Some(why) = &v.unresolved_reason {
            println!("  reason       {why}");
        }
        println!("  i₁, ν₁       {}, {}", v.index_plus1.index, v.index_plus1.nullity);
        println!("  i₋₁, ν₋₁     {}, {}", v.index_minus1.index, v.index_minus1.nullity);
        if e == 0.0 {
            let r = classify_e0(alpha, beta);
            println!("  e = 0 region {:?} {:?}", r.major, r.minor);
        }
    }
    Ok(())
}
