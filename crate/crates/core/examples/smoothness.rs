//! Jacobian criterion for codimension-2 subschemes of P^4.
//!
//!     cargo run --release --example smoothness

use p4surf::ideal::{smoothness_certificate, Ideal};
use p4surf::parse::parse_ideal;
use p4surf::Ring;

fn main() -> p4surf::Result<()> {
    let ring = Ring::p4(31991)?;
    for (name, gens) in [
        ("cubic scroll", "x0*x3 - x1*x2\nx0*x4 - x1*x3\nx2*x4 - x3^2"),
        ("two planes", "x0*x2\nx0*x3\nx1*x2\nx1*x3"),
        ("quadric cone x cubic", "x0*x1 - x2^2\nx3^3 + x4^3 + x0^3"),
    ] {
        let cert = smoothness_certificate(&Ideal::new(&ring, parse_ideal(&ring, gens)?)?, 2)?;
        println!("{name}: {:?} {}", cert.verdict, cert.locus.join(", "));
    }
    Ok(())
}
