//! Exact distribution of the maximum load of [m] over every (a, b), and over
//! the b = 0 slice.
//!
//!     cargo run --release --example exact_maxload

use linload::report::fmt_prob;
use linload::{BMode, Exhaustive, KeySet, Modulus};

fn main() -> linload::Result<()> {
    let md = Modulus::new(1031, 32)?;
    let ex = Exhaustive::new(md).with_workers(4);
    let ks = KeySet::interval(32)?;
    let all = ex.maxload_histogram(&ks, BMode::AllB)?;
    let zero = ex.maxload_histogram(&ks, BMode::BZero)?;

    println!("E[max load] over all (a,b): {}", fmt_prob(&all.mean()));
    println!("E[max load] with b = 0:     {}", fmt_prob(&zero.mean()));
    println!("{:>3} {:>16} {:>16}", "l", "Pr[L>=l] all b", "Pr[L>=l] b=0");
    for l in 1..=12 {
        println!("{l:>3} {:>16} {:>16}", fmt_prob(&all.tail(l)), fmt_prob(&zero.tail(l)));
    }
    Ok(())
}
