//! The family h_{a,b}(x) = ((a*x + b) mod p) mod m on a small field.
//!
//!     cargo run --example hash_family

use linload::{is_prime, mod_inverse, next_prime_at_least, HashParams, Modulus};

fn main() -> linload::Result<()> {
    let p = next_prime_at_least(100)?;
    assert!(is_prime(p));
    let md = Modulus::new(p, 8)?;
    let h = HashParams::new(37, 11, &md)?;

    println!("p = {p}, m = {}, a = {}, b = {}", md.m(), h.a(), h.b());
    println!("{:>4} {:>6} {:>4} {:>6}", "x", "full", "bin", "leaps");
    for x in [0, 1, 2, 3, 10, 50, 100] {
        println!(
            "{x:>4} {:>6} {:>4} {:>6}",
            h.eval_full(&md, x),
            h.eval_binned(&md, x),
            h.leaps(&md, x).value()
        );
    }

    let inv = mod_inverse(37, p)?;
    println!("37^-1 mod {p} = {inv} (check: {})", 37 * inv % p);
    Ok(())
}
