//! A small stability atlas over (α, β) at several eccentricities, written as CSV.
//!
//! `cargo run --release --example sweep > atlas.csv`

use ere_stab::scan::{atlas_csv, sweep, Coordinates, GridSpec};

fn main() -> ere_stab::Result<()> {
    let grid =
        GridSpec { coordinates: Coordinates::Plain, x: (1.0, 4.0), y: (0.1, 1.0), nx: 8, ny: 6, es: vec![0.0, 0.4] };
    let atlas = sweep(&grid, 0)?;
    for (k, v) in &atlas.summary {
        eprintln!("{k}: {v}");
    }
    print!("{}", atlas_csv(&atlas));
    Ok(())
}
