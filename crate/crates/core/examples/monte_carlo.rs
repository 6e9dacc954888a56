//! Monte Carlo max load for a large field, next to fully random placement and
//! its exact distribution.
//!
//!     cargo run --release --example monte_carlo

use linload::estimate::{
    distribution_mean, fully_random_exact_distribution, mc_fully_random_maxload, mc_linear_maxload, McConfig,
};
use linload::{next_prime_at_least, KeySet, Modulus};

fn main() -> linload::Result<()> {
    let m = 64;
    let p = next_prime_at_least(m * m)?;
    let cfg = McConfig::new(Modulus::new(p, m)?, KeySet::interval(m)?, 50_000, 1).with_workers(4);
    let lin = mc_linear_maxload(&cfg)?;
    let rnd = mc_fully_random_maxload(m, m, 50_000, 1, 4)?;
    let exact = distribution_mean(&fully_random_exact_distribution(m, m)?);

    println!("m = {m}, p = {p}, generator: {}", lin.generator);
    println!("linear       mean {:.4} +- {:.4}", lin.mean, lin.std_error);
    println!("fully random mean {:.4} +- {:.4} (exact {exact:.4})", rnd.mean, rnd.std_error);
    for l in 2..=8 {
        println!("Pr[L >= {l}]: linear {:.5}  random {:.5}", lin.tail_at(l), rnd.tail_at(l));
    }
    Ok(())
}
