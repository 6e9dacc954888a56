//! Probability that a whole interval [d] lands in one bin, against the
//! 1/(6dm) lower bound (valid for d <= m when p > 3m^2).
//!
//!     cargo run --release --example interval_collisions

use linload::oracles::{interval_lower_bound, Exhaustive, Probability};
use linload::report::fmt_prob;
use linload::Modulus;

fn main() -> linload::Result<()> {
    let md = Modulus::new(797, 16)?;
    let profile = Exhaustive::new(md).interval_collision_profile(16)?;
    println!("{:>3} {:>10} {:>16} {:>16}", "d", "pairs", "probability", "1/(6dm)");
    for d in 2..=16u64 {
        let pr = Probability::new(profile[d as usize] as u128, md.family_size());
        let lb = interval_lower_bound(&md, d)?;
        println!("{d:>3} {:>10} {:>16} {:>16}", profile[d as usize], fmt_prob(&pr), fmt_prob(&lb));
    }
    Ok(())
}
