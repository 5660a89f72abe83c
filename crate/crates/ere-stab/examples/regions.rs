//! Region labels, elliptic angles and real exponents of the e = 0 plane.
//!
//! `cargo run --release --example regions`

use ere_stab::regions::{alpha_theta, classify_e0};

fn main() {
    for (alpha, beta) in [(0.5, 0.5), (2.0, 1.0), (3.0, 0.9), (2.5, 1.3), (0.75, 3f64.sqrt() / 3.0), (-0.5, 0.2)] {
        let r = classify_e0(alpha, beta);
        println!("({alpha}, {beta:.4}) -> {:?} {:?}", r.major, r.minor);
        if let Some((t1, t2)) = r.thetas {
            println!("  θ₁ = {t1:.6}, θ₂ = {t2:.6}");
        }
        if let Some(t) = r.theta {
            println!("  θ = {t:.6}");
        }
        if !r.etas.is_empty() {
            println!("  η = {:?}", r.etas);
        }
        if r.is_boundary() {
            println!("  on the boundary of {:?}", r.adjacent);
        }
    }
    // Γ₁ and Σ₀ at α = 4.
    println!("α₁(√32/3) = {:.12}", alpha_theta(1.0, 32f64.sqrt() / 3.0));
}
