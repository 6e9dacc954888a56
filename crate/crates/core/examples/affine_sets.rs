//! A key set {(alpha x + beta) mod p : x in [m]} behaves exactly like [m].
//!
//!     cargo run --release --example affine_sets

use linload::experiments::{run_transform_demo, Settings};

fn main() -> linload::Result<()> {
    let out = run_transform_demo(257, 16, 77, 5, 20_000, 2, true, &Settings::default())?;
    print!("{}", out.table.render());
    if let Some(r) = &out.report {
        print!("{}", r.render_table());
    }
    Ok(())
}
