//! Symplectic normal forms, Krein signs and splitting numbers of a monodromy matrix.
//!
//! `cargo run --release --example normal_form`

use ere_stab::essential::monodromy;
use ere_stab::make_params;
use ere_stab::sympl::{classify, splitting_numbers};
use nalgebra::Complex;

fn main() -> ere_stab::Result<()> {
    for (alpha, beta, e) in [(3.0, 0.9, 0.0), (2.5, 1.3, 0.0), (0.5, 0.5, 0.0), (2.0, 0.6, 0.4)] {
        let m = monodromy(&make_params(alpha, beta, e)?, 1e-12)?;
        let cls = classify(&m.m, 1e-8)?;
        println!("({alpha}, {beta}, {e}) -> {}", cls.label());
        for k in &cls.krein {
            let w = Complex::from_polar(1.0, k.psi);
            let s = splitting_numbers(&cls, w);
            println!("  ψ = {:.6}  Krein (p, q) = {:?}  S± = ({}, {})", k.psi, k.signs, s.s_plus, s.s_minus);
        }
        if !cls.hyperbolic_multipliers().is_empty() {
            println!("  real multipliers {:?}", cls.hyperbolic_multipliers());
        }
    }
    Ok(())
}
