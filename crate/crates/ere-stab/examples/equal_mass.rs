//! Equal-mass family: indicator roots, verdict families and the first verdict change in e.
//!
//! `cargo run --release --example equal_mass`

use ere_stab::scan::{check_verdict_families, e_star_profile, equal_mass_point, equal_mass_roots};

fn main() -> ere_stab::Result<()> {
    let t = equal_mass_roots()?;
    for r in &t.roots {
        println!("{:>6}  {:<10} y = {:.6}  m = {:.6}", r.label, format!("{:?}", r.indicator), r.y, r.m);
    }
    println!("m0 = {:.10}", t.m0);

    let p = equal_mass_point(0.3)?;
    println!("y = 0.3: m = {:.6}, (α, β) = ({:.6}, {:.6}), residual {:.1e}", p.m, p.alpha, p.beta, p.residual);

    for c in check_verdict_families(&t, &[0.0, 0.3], 1) {
        println!(
            "{:<8} e = {} y = {:.4}: {:?} {}",
            c.family,
            c.e,
            c.y,
            c.verdict,
            if c.ok { "ok" } else { "mismatch" }
        );
    }
    for (e, y) in e_star_profile(&t, &[0.0, 0.1, 0.3]) {
        println!("e = {e}: first verdict change at y = {y:?}");
    }
    Ok(())
}
