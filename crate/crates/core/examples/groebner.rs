//! Reduced Groebner basis of the twisted cubic and a membership test.
//!
//!     cargo run --release --example groebner

use p4surf::groebner::groebner_ideal;
use p4surf::parse::{parse_ideal, parse_polynomial};
use p4surf::Ring;

fn main() -> p4surf::Result<()> {
    let ring = Ring::new(31991, 4)?;
    let gens = parse_ideal(&ring, "x0*x2 - x1^2\nx1*x3 - x2^2\nx0*x3 - x1*x2")?;
    let gb = groebner_ideal(&ring, &gens)?;
    for g in gb.polynomials() {
        println!("{}", ring.format(&g));
    }
    let f = parse_polynomial(&ring, "x0^2*x3 - x1^3")?;
    println!("x0^2*x3 - x1^3 in I: {}", gb.contains_poly(&f)?);
    println!("normal form of x1^3: {}", ring.format(&gb.normal_form_poly(&parse_polynomial(&ring, "x1^3")?)?));
    println!("h_(S/I)(d), d = 0..6: {:?}", (0..7).map(|d| gb.hilbert_function(d)).collect::<Vec<_>>());
    Ok(())
}
