//! Maximum bin load of the simple linear hash family
//! `h_{a,b}(x) = ((a*x + b) mod p) mod m` on interval-shaped key sets.
//!
//! * [`field`]: prime-field arithmetic, primality and the hash family itself.
//! * [`load`]: key sets and per-bin load profiles.
//! * [`oracles`]: exact collision counts and max-load histograms by
//!   enumerating all `p^2` functions.
//! * [`estimate`]: Monte Carlo estimates for large `p`, and the fully random
//!   baseline with its exact distribution.
//! * [`experiments`]: the named experiments and their acceptance reports.
//! * [`report`]: CSV output.

pub mod error;
pub mod estimate;
pub mod experiments;
pub mod field;
pub mod load;
pub mod oracles;
mod parallel;
pub mod report;

pub use error::{Error, Result};
pub use field::{is_prime, mod_inverse, next_prime_at_least, HashParams, LeapCount, Modulus};
pub use load::{KeySet, LoadProfile};
pub use oracles::{BMode, CanonicalTriple, CollisionStats, Exhaustive, MaxLoadHistogram, Probability};
