//! Exact collision probability of three keys, their reduction to (0, 1, d),
//! and the two closed-form upper bounds.
//!
//!     cargo run --release --example three_element_collisions

use linload::oracles::{canonicalize_triple, triple_bound_formula, Exhaustive};
use linload::report::fmt_prob;
use linload::Modulus;

fn main() -> linload::Result<()> {
    let md = Modulus::new(257, 16)?;
    let ex = Exhaustive::new(md).with_workers(4);

    let (x, y, z) = (40, 7, 199);
    let c = canonicalize_triple(md.p(), x, y, z)?;
    let direct = ex.triple_collisions(x, y, z)?;
    let canonical = ex.triple_collisions(0, 1, c.d)?;
    println!(
        "({x},{y},{z}) -> (0,1,{}) via t -> {} t + {}: {} vs {} colliding (a,b)",
        c.d, c.alpha, c.beta, direct.satisfying_pairs, canonical.satisfying_pairs
    );

    println!("{:>5} {:>16} {:>16} {:>16}", "d", "exact", "statement", "proof");
    for d in [2, 3, 4, 8, 16, 32, 64, 128, 200, 255, 256] {
        let exact = ex.triple_collisions(0, 1, d)?.probability();
        let b = triple_bound_formula(&md, d)?;
        println!(
            "{d:>5} {:>16} {:>16} {:>16}",
            fmt_prob(&exact),
            fmt_prob(&b.statement),
            fmt_prob(&b.proof)
        );
    }
    Ok(())
}
