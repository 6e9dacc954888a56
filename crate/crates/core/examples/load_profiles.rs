//! Bin loads of single functions: the effect of b and of flipping the sign of a.
//!
//!     cargo run --example load_profiles

use linload::load::{load_profile, max_load_b_zero_bounds};
use linload::{HashParams, KeySet, Modulus};

fn main() -> linload::Result<()> {
    let md = Modulus::new(257, 16)?;
    let keys = KeySet::interval(16)?.materialize(&md)?;

    for (a, b) in [(1, 0), (17, 0), (17, 100), (240, 0), (0, 5)] {
        let prof = load_profile(HashParams::new(a, b, &md)?, &md, &keys);
        println!("a={a:>3} b={b:>3} max={:>2} loads={:?}", prof.max_load, prof.loads);
    }

    let h = HashParams::new(33, 91, &md)?;
    let (lo, hi) = max_load_b_zero_bounds(h, &md, &keys);
    let l0 = load_profile(HashParams::new(33, 0, &md)?, &md, &keys).max_load;
    println!("b=0 max load {l0} lies in [{lo}, {hi}]");

    let zero_free: Vec<u64> = (1..=16).collect();
    for a in [5, 60, 129] {
        let l = |a| load_profile(HashParams::new(a, 0, &md).unwrap(), &md, &zero_free).max_load;
        println!("a={a:>3}: max load {} ; a={:>3}: max load {}", l(a), 257 - a, l(257 - a));
    }
    Ok(())
}
