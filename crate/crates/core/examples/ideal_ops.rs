//! Sums, products, intersections, quotients and saturation.
//!
//!     cargo run --release --example ideal_ops

use p4surf::ideal::Ideal;
use p4surf::parse::parse_ideal;
use p4surf::Ring;

fn show(name: &str, i: &Ideal) {
    println!("{name:>10}: {}", i.mingens().to_strings().join(", "));
}

fn main() -> p4surf::Result<()> {
    let ring = Ring::new(31991, 3)?;
    let ideal = |s: &str| Ideal::new(&ring, parse_ideal(&ring, s).unwrap());
    let a = ideal("x0\nx1")?;
    let b = ideal("x1\nx2")?;
    show("a + b", &a.sum(&b));
    show("a * b", &a.product(&b));
    show("a ∩ b", &a.intersect(&b));
    show("ab : a", &a.product(&b).quotient(&a));
    // A point with an embedded component at the irrelevant ideal.
    let fat = ideal("x0^2\nx0*x1\nx0*x2\nx1^3")?;
    show("I", &fat);
    show("I^sat", &fat.saturate());
    println!("I^sat = (x0, x1^3)? {}", fat.saturate().contains_ideal(&ideal("x0\nx1^3")?));
    Ok(())
}
