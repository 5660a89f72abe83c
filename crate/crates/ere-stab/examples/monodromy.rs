//! Monodromy matrix, its spectrum and the symplectic residual.
//!
//! `cargo run --release --example monodromy`

use ere_stab::essential::{closed_form_multipliers_e0, monodromy};
use ere_stab::make_params;

fn main() -> ere_stab::Result<()> {
    let p = make_params(3.0, 0.9, 0.0)?;
    let r = monodromy(&p, 1e-12)?;
    println!("M(2π) at (α, β, e) = (3, 0.9, 0):\n{:.6}", r.m);
    println!("residual {:.2e}, det {:.12}", r.symplectic_residual, r.det);
    println!("integrated  {:?}", r.spectrum.map(|z| (z.re, z.im)));
    let exact = closed_form_multipliers_e0(3.0, 0.9);
    println!("closed form {:?}", exact.map(|z| (z.re, z.im)));

    // Away from e = 0 only the integrated matrix is available.
    let q = monodromy(&make_params(3.0, 0.9, 0.6)?, 1e-12)?;
    println!("e = 0.6: {} accepted steps, spectrum {:?}", q.stats.accepted_steps, q.spectrum.map(|z| (z.re, z.im)));
    Ok(())
}
