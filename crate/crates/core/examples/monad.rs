//! Runs the monad construction of the elliptic surface of degree 12 and
//! prints the verification report.
//!
//!     cargo run --release --example monad -- [seed]

use p4surf::construct::monad::monad_pipeline;

fn main() -> p4surf::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let run = monad_pipeline(seed, 31991)?;
    println!("{}", run.report.to_text());
    for (stage, t) in &run.report.timings {
        println!("{stage:>10} {t:?}");
    }
    Ok(())
}
