//! Minimal free resolutions: an ideal, and the cokernel of a matrix read
//! from text.
//!
//!     cargo run --release --example resolution

use p4surf::parse::{parse_ideal, parse_matrix};
use p4surf::resolve::{minimal_free_resolution, resolve_ideal, DEFAULT_MAX_STEPS};
use p4surf::{GradedModule, Ring};

fn main() -> p4surf::Result<()> {
    let ring = Ring::p4(31991)?;
    // Rational normal quartic curve: 2x2 minors of a 2x4 Hankel matrix.
    let gens = parse_ideal(
        &ring,
        "x0*x2 - x1^2\nx0*x3 - x1*x2\nx0*x4 - x2^2\nx1*x3 - x2^2\nx1*x4 - x2*x3\nx2*x4 - x3^2",
    )?;
    let res = resolve_ideal(&ring, &gens, DEFAULT_MAX_STEPS)?;
    println!("S/I of the rational normal quartic:\n{}", res.betti_table()?.to_text());

    // Koszul presentation of the residue field.
    let m = parse_matrix(&ring, "rows 0 cols 1 1 1 1 1\nx0, x1, x2, x3, x4\n")?;
    let res = minimal_free_resolution(&ring, &GradedModule::coker(m), DEFAULT_MAX_STEPS)?;
    let table = res.betti_table()?;
    println!("k = S/m:\n{}", table.to_text());
    println!("{}", serde_json::to_string(&table.records())?);
    Ok(())
}
