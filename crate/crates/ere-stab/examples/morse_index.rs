//! ω-Morse indices from the Fourier Galerkin discretisation, with the e = 0 closed-form table.
//!
//! `cargo run --release --example morse_index`

use ere_stab::galerkin::{assemble, index_and_nullity, Omega};
use ere_stab::make_params;
use ere_stab::regions::index_table_e0;

fn main() -> ere_stab::Result<()> {
    for (alpha, beta) in [(0.5, 0.5), (2.0, 1.0), (4.0, 32f64.sqrt() / 3.0), (3.0, 0.9)] {
        for omega in [Omega::Plus1, Omega::Minus1] {
            let p = make_params(alpha, beta, 0.0)?;
            let g = index_and_nullity(&assemble(&p, omega, 64), 1e-8)?;
            let t = index_table_e0(alpha, beta, omega);
            println!(
                "({alpha}, {beta:.4}) {omega:?}: galerkin ({}, {}) table ({}, {})",
                g.index, g.nullity, t.index, t.nullity
            );
        }
    }
    let p = make_params(2.0, 0.6, 0.5)?;
    let g = index_and_nullity(&assemble(&p, Omega::Plus1, 64), 1e-8)?;
    println!("e = 0.5 at (2, 0.6): i₁ = {}, ν₁ = {}, converged {}", g.index, g.nullity, g.converged);
    Ok(())
}
