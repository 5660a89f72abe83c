//! Degenerate curves in e, their e = 0 slopes and the ordering of a column.
//!
//! `cargo run --release --example trace`

use ere_stab::curves::{slope_at_e0, trace, Branch};
use ere_stab::galerkin::Omega;

fn main() -> ere_stab::Result<()> {
    for s in trace(2.0, Omega::Minus1, 0, 0.3, 0.1, 1e-9)? {
        println!("Σ₀ α = 2  e = {:.2}  {:?}  β = {:.9}  ν = {}", s.e, s.branch, s.beta, s.multiplicity);
    }
    for s in trace(4.0, Omega::Plus1, 1, 0.3, 0.1, 1e-9)? {
        println!("Γ₁ α = 4  e = {:.2}  β = {:.9}  ν = {}", s.e, s.beta, s.multiplicity);
    }
    let lo = slope_at_e0(2.0, Omega::Minus1, 0, Branch::Lower, 1e-3)?;
    let hi = slope_at_e0(2.0, Omega::Minus1, 0, Branch::Upper, 1e-3)?;
    let g = slope_at_e0(4.0, Omega::Plus1, 1, Branch::Lower, 1e-3)?;
    println!("slopes at e = 0: Σ₀ {lo:.6} / {hi:.6}, Γ₁ {g:.2e}");
    Ok(())
}
