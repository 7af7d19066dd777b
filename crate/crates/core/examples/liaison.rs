//! Runs the liaison construction, either from general data or from the
//! worked example (`--example`).
//!
//!     cargo run --release --example liaison -- [--example] [seed]

use p4surf::construct::liaison::{liaison_example, liaison_pipeline};

fn main() -> p4surf::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let example = args.iter().any(|a| a == "--example");
    let seed = args.iter().find_map(|a| a.parse().ok()).unwrap_or(1);
    let run = if example { liaison_example(seed, 31991)? } else { liaison_pipeline(seed, 31991)? };
    println!("{}", run.report.to_text());
    Ok(())
}
