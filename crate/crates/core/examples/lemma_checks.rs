//! Every exhaustive lemma check at one (p, m), printed as a report.
//!
//!     cargo run --release --example lemma_checks -- 197 8

use linload::experiments::{run_lemma_checks, Settings};

fn main() -> linload::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>());
    let p = args.next().transpose().ok().flatten().unwrap_or(197);
    let m = args.next().transpose().ok().flatten().unwrap_or(8);
    let out = run_lemma_checks(p, m, 0, &Settings { workers: 4, ..Settings::default() })?;
    print!("{}", out.report.expect("lemma checks always report").render_table());
    Ok(())
}
