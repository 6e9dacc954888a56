//! Mean max load as m grows, with p the first prime >= m^2.
//!
//!     cargo run --release --example scaling

use linload::estimate::{scaling_study, tail_loglog_slope};

fn main() -> linload::Result<()> {
    let rows = scaling_study(&[16, 64, 256, 1024], 20_000, 3, 4)?;
    println!("{:>6} {:>9} {:>14} {:>14} {:>10}", "m", "p", "linear", "random", "tail slope");
    for r in &rows {
        let slope = tail_loglog_slope(&r.linear, 3..=10, 10.0 / 20_000.0);
        println!(
            "{:>6} {:>9} {:>8.3}±{:.3} {:>8.3}±{:.3} {:>10}",
            r.m,
            r.p,
            r.linear.mean,
            r.linear.std_error,
            r.random.mean,
            r.random.std_error,
            slope.map_or("-".into(), |s| format!("{s:.2}"))
        );
    }
    Ok(())
}
