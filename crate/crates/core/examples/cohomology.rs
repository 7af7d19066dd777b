//! Sheaf cohomology tables by local duality.
//!
//!     cargo run --release --example cohomology

use p4surf::cohomology::{hartshorne_rao, IdealCohomology};
use p4surf::ideal::Ideal;
use p4surf::parse::parse_ideal;
use p4surf::Ring;

fn main() -> p4surf::Result<()> {
    let ring = Ring::new(31991, 4)?;
    // Two skew lines in P^3: the Hartshorne-Rao module is k in degree 0.
    let lines = Ideal::new(&ring, parse_ideal(&ring, "x0*x2\nx0*x3\nx1*x2\nx1*x3")?)?;
    let coh = IdealCohomology::new(&lines)?;
    println!("h^i(I(j)) for two skew lines:\n{}", coh.table(-2, 3).to_text());
    let rao = hartshorne_rao(&coh, 1);
    println!("H^1_*(I): {:?}, generators {:?}", rao.values(), rao.generators);
    Ok(())
}
