//! The three-element collision curve over every d on a small field, as CSV.
//!
//!     cargo run --release --example figure1_small > curve.csv

use linload::experiments::{run_figure1, Settings};

fn main() -> linload::Result<()> {
    let out = run_figure1(257, 16, None, true, &Settings::default())?;
    print!("{}", out.table.render());
    if let Some(r) = &out.report {
        eprint!("{}", r.render_table());
    }
    Ok(())
}
