//! The −1-degenerate surfaces and the elliptic boundary in the non-hyperbolic strip.
//!
//! `cargo run --release --example nh_surfaces`

use ere_stab::curves::nh_surfaces;
use ere_stab::model::from_tilde;
use ere_stab::regions::alpha_theta;

fn main() {
    for (at, e) in [(0.05, 0.0), (0.1, 0.0), (0.2, 0.0), (0.05, 0.02), (0.1, 0.05), (0.2, 0.3), (0.3, 0.0)] {
        match nh_surfaces(at, e, 1e-9) {
            Ok(s) => {
                let (a, b) = from_tilde(at, s.beta_s);
                println!(
                    "α̃ = {at}, e = {e}: β̃_k = {:.6}, β̃_s = {:.6}, β̃_m = {:.6}  (α − α_½(β) = {:.1e})",
                    s.beta_k,
                    s.beta_s,
                    s.beta_m,
                    a - alpha_theta(0.5, b)
                );
            }
            Err(err) => println!("α̃ = {at}, e = {e}: {err}"),
        }
    }
}
