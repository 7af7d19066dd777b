//! Hilbert data and numerical invariants of a surface.
//!
//!     cargo run --release --example hilbert

use p4surf::hilbert::{double_point_residual, k2_from_invariants, surface_numbers};
use p4surf::ideal::Ideal;
use p4surf::parse::parse_ideal;
use p4surf::Ring;

fn main() -> p4surf::Result<()> {
    let ring = Ring::p4(31991)?;
    // Smooth cubic scroll: 2x2 minors of a 2x3 matrix of linear forms.
    let scroll = Ideal::new(&ring, parse_ideal(&ring, "x0*x3 - x1*x2\nx0*x4 - x1*x3\nx2*x4 - x3^2")?)?;
    let h = scroll.hilbert();
    println!("numerator {:?}, dim {}, degree {}", h.numerator, h.projective_dim(), h.degree);
    println!("HP(m), m = 0..5: {:?}", (0..6).map(|m| h.polynomial(m)).collect::<Vec<_>>());
    let n = surface_numbers(&h)?;
    println!("{n:?}");
    let k2 = k2_from_invariants(n.d, n.pi, n.chi)?;
    println!("K^2 = {k2}, double point residual {}", double_point_residual(n.d, n.pi, n.chi, k2));
    Ok(())
}
