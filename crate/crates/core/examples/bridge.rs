//! Links the monad surface `X ∪ X0` to the general type surface `T`.
//!
//!     cargo run --release --example bridge -- [seed]

use p4surf::construct::bridge::bridge_link;
use p4surf::construct::monad::monad_pipeline;

fn main() -> p4surf::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut run = monad_pipeline(seed, 31991)?;
    let art = bridge_link(&run.artifacts.ix, seed, &mut run.report)?;
    println!("X0 = {}", art.x0.to_strings().join(", "));
    println!("L  = {}", art.l.to_strings().join(", "));
    println!("T has {} minimal generators", art.t.mingens().gens().len());
    println!("{}", run.report.to_text());
    Ok(())
}
