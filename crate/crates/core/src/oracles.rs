//! Exact probabilities by enumerating every `(a, b) ∈ [p]^2`.
//!
//! Each enumeration is a-major: the outer loop runs over `a`, every `a` yields
//! an integer partial count, and partial counts are summed. Splitting the
//! `a` range across workers therefore cannot change a result.
//!
//! Within one `a`, consecutive values of `b` shift every image `(a*x + b) mod p`
//! by one, so the inner loop walks [`Cursor`]s instead of dividing.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::{mod_inverse, mul_mod, HashParams, Modulus};
use crate::load::{max_load_with, KeySet};
use crate::parallel;

/// Exact probability; numerator and denominator are counts of functions.
pub type Probability = Ratio<u128>;

/// Default cap on hash evaluations for one exhaustive call.
pub const DEFAULT_BUDGET: u128 = 1 << 33;

/// Number of `(a, b)` pairs for which an event happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollisionStats {
    pub satisfying_pairs: u64,
    pub total_pairs: u64,
}

impl CollisionStats {
    pub fn probability(&self) -> Probability {
        Ratio::new(self.satisfying_pairs as u128, self.total_pairs as u128)
    }
}

/// The affine map `t -> alpha*t + beta` sends `(0, 1, d)` to `(x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalTriple {
    pub d: u64,
    pub alpha: u64,
    pub beta: u64,
}

/// Reduces three distinct elements to the canonical form `(0, 1, d)`.
pub fn canonicalize_triple(p: u64, x: u64, y: u64, z: u64) -> Result<CanonicalTriple> {
    for v in [x, y, z] {
        if v >= p {
            return Err(Error::OutOfField { value: v, p });
        }
    }
    if x == y || y == z || x == z {
        return Err(Error::NotDistinct(x, y, z));
    }
    let alpha = (y + p - x) % p;
    let beta = x;
    let d = mul_mod(mod_inverse(alpha, p)?, (z + p - beta) % p, p);
    debug_assert!(d > 1);
    Ok(CanonicalTriple { d, alpha, beta })
}

/// Candidate upper bounds on `Pr[|h({0, 1, d})| = 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleBounds {
    /// `(1 + max(1, p/(dm)) * (1 + d/m)) / p`
    pub statement: Probability,
    /// `(1 + (1 + p/d)/m) * (1 + d/m) / p`
    pub proof: Probability,
    /// `(1 + ceil(ceil(p/d)/m)) * (1 + ceil(d/m)) / p`
    pub ceiling: Probability,
}

pub fn triple_bound_formula(modulus: &Modulus, d: u64) -> Result<TripleBounds> {
    let (p, m) = (modulus.p() as u128, modulus.m() as u128);
    let d128 = d as u128;
    if d < 2 || d128 >= p {
        return Err(Error::Domain(format!("need 2 <= d < p, got d={d}")));
    }
    let one = Probability::from_integer(1);
    let r = |n: u128, q: u128| Probability::new(n, q);

    let spread = r(p, d128 * m).max(one);
    let statement = (one + spread * r(m + d128, m)) / p;
    let proof = (one + r(d128 + p, d128 * m)) * r(m + d128, m) / p;
    let ceiling = r((1 + p.div_ceil(d128).div_ceil(m)) * (1 + d128.div_ceil(m)), p);
    Ok(TripleBounds {
        statement,
        proof,
        ceiling,
    })
}

/// `1 / (6 d m)`, the lower bound on `Pr[|h([d])| = 1]` that holds when
/// `d <= m` and `p > 3 m^2`.
pub fn interval_lower_bound(modulus: &Modulus, d: u64) -> Result<Probability> {
    let (p, m) = (modulus.p() as u128, modulus.m() as u128);
    if d == 0 || d as u128 > m {
        return Err(Error::Domain(format!("need 1 <= d <= m, got d={d}, m={m}")));
    }
    if p <= 3 * m * m {
        return Err(Error::Domain(format!("need p > 3m^2, got p={p}, m={m}")));
    }
    Ok(Probability::new(1, 6 * d as u128 * m))
}

/// Which part of the family an exact max-load histogram covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BMode {
    /// Every `(a, b) ∈ [p]^2`.
    AllB,
    /// Only `b = 0`, every `a ∈ [p]`.
    BZero,
}

impl std::str::FromStr for BMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all_b" | "all-b" | "all" => Ok(BMode::AllB),
            "b_zero" | "b-zero" | "zero" => Ok(BMode::BZero),
            other => Err(Error::Domain(format!("unknown b mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for BMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BMode::AllB => "all_b",
            BMode::BZero => "b_zero",
        })
    }
}

/// Exact distribution of the maximum load over a set of parameter tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxLoadHistogram {
    pub mode: BMode,
    /// max load -> number of tuples attaining it
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
}

impl MaxLoadHistogram {
    fn from_dense(mode: BMode, dense: &[u64]) -> Self {
        let counts: BTreeMap<u64, u64> = dense
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(l, &c)| (l as u64, c))
            .collect();
        let total = counts.values().sum();
        MaxLoadHistogram { mode, counts, total }
    }

    /// Number of tuples with max load `>= l`.
    pub fn tail_count(&self, l: u64) -> u64 {
        self.counts.range(l..).map(|(_, c)| c).sum()
    }

    pub fn tail(&self, l: u64) -> Probability {
        Probability::new(self.tail_count(l) as u128, self.total as u128)
    }

    pub fn mean(&self) -> Probability {
        let s: u128 = self.counts.iter().map(|(&l, &c)| l as u128 * c as u128).sum();
        Probability::new(s, self.total as u128)
    }

    pub fn max_observed(&self) -> u64 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }
}

/// Position of `(a*x + b) mod p` and its bin while `b` increases by one.
#[derive(Clone, Copy)]
struct Cursor {
    val: u64,
    res: u64,
}

impl Cursor {
    #[inline]
    fn new(val: u64, m: u64) -> Self {
        Cursor { val, res: val % m }
    }

    #[inline(always)]
    fn step(&mut self, p: u64, m: u64) {
        self.val += 1;
        self.res += 1;
        if self.val == p {
            self.val = 0;
            self.res = 0;
        } else if self.res == m {
            self.res = 0;
        }
    }
}

/// Exhaustive enumerator over the whole family for one modulus.
#[derive(Debug, Clone, Copy)]
pub struct Exhaustive {
    modulus: Modulus,
    budget: u128,
    workers: usize,
}

impl Exhaustive {
    pub fn new(modulus: Modulus) -> Self {
        Exhaustive {
            modulus,
            budget: DEFAULT_BUDGET,
            workers: 1,
        }
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    fn charge(&self, needed: u128) -> Result<()> {
        if needed > self.budget {
            Err(Error::BudgetExceeded {
                needed,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn stats(&self, satisfying_pairs: u64) -> CollisionStats {
        CollisionStats {
            satisfying_pairs,
            total_pairs: self.modulus.p() * self.modulus.p(),
        }
    }

    fn check_triple(&self, x: u64, y: u64, z: u64) -> Result<()> {
        for v in [x, y, z] {
            self.modulus.check_element(v)?;
        }
        if x == y || y == z || x == z {
            return Err(Error::NotDistinct(x, y, z));
        }
        Ok(())
    }

    /// Counts `(a, b)` with `h(x) = h(y) = h(z)`.
    pub fn triple_collisions(&self, x: u64, y: u64, z: u64) -> Result<CollisionStats> {
        self.check_triple(x, y, z)?;
        self.charge(3 * self.modulus.family_size())?;
        let (p, m) = (self.modulus.p(), self.modulus.m());
        let n = parallel::sum_over(self.workers, p, |a| {
            let mut cx = Cursor::new(mul_mod(a, x, p), m);
            let mut cy = Cursor::new(mul_mod(a, y, p), m);
            let mut cz = Cursor::new(mul_mod(a, z, p), m);
            let mut hits = 0u64;
            for _ in 0..p {
                hits += (cx.res == cy.res && cx.res == cz.res) as u64;
                cx.step(p, m);
                cy.step(p, m);
                cz.step(p, m);
            }
            hits
        });
        Ok(self.stats(n))
    }

    /// Counts `(a, b)` with `h(x) = ix`, `h(y) = iy`, `h(z) = iz`.
    pub fn prescribed_triple(
        &self,
        (x, y, z): (u64, u64, u64),
        (ix, iy, iz): (u64, u64, u64),
    ) -> Result<CollisionStats> {
        self.check_triple(x, y, z)?;
        let m = self.modulus.m();
        for index in [ix, iy, iz] {
            if index >= m {
                return Err(Error::BinOutOfRange { index, m });
            }
        }
        self.charge(3 * self.modulus.family_size())?;
        let p = self.modulus.p();
        let n = parallel::sum_over(self.workers, p, |a| {
            let mut cx = Cursor::new(mul_mod(a, x, p), m);
            let mut cy = Cursor::new(mul_mod(a, y, p), m);
            let mut cz = Cursor::new(mul_mod(a, z, p), m);
            let mut hits = 0u64;
            for _ in 0..p {
                hits += (cx.res == ix && cy.res == iy && cz.res == iz) as u64;
                cx.step(p, m);
                cy.step(p, m);
                cz.step(p, m);
            }
            hits
        });
        Ok(self.stats(n))
    }

    /// Counts `(a, b)` mapping all of `{0, ..., d-1}` into one bin.
    pub fn interval_collision(&self, d: u64) -> Result<CollisionStats> {
        if d < 2 || d > self.modulus.p() {
            return Err(Error::Domain(format!("need 2 <= d <= p, got d={d}")));
        }
        let profile = self.interval_collision_profile(d)?;
        Ok(self.stats(profile[d as usize]))
    }

    /// `counts[d]` = number of `(a, b)` collapsing `[d]` into one bin, for
    /// every `d` in `1..=d_max`. Costs at most `d_max * p^2` evaluations.
    pub fn interval_collision_profile(&self, d_max: u64) -> Result<Vec<u64>> {
        let (p, m) = (self.modulus.p(), self.modulus.m());
        if d_max == 0 || d_max > p {
            return Err(Error::Domain(format!("need 1 <= d <= p, got d={d_max}")));
        }
        self.charge(d_max as u128 * self.modulus.family_size())?;
        let cap = d_max as usize;
        // per a: histogram of the longest colliding prefix, capped at d_max
        let per_a = parallel::map_ordered(self.workers, p, |a| {
            let mut run = vec![0u64; cap + 1];
            for b in 0..p {
                let bin = b % m;
                let mut v = b;
                let mut len = 1usize;
                while len < cap {
                    v += a;
                    if v >= p {
                        v -= p;
                    }
                    if v % m != bin {
                        break;
                    }
                    len += 1;
                }
                run[len] += 1;
            }
            run
        });
        let mut longest = vec![0u64; cap + 1];
        for run in per_a {
            for (acc, c) in longest.iter_mut().zip(run) {
                *acc += c;
            }
        }
        // suffix sums: prefix of length >= d
        let mut counts = vec![0u64; cap + 1];
        let mut acc = 0u64;
        for d in (1..=cap).rev() {
            acc += longest[d];
            counts[d] = acc;
        }
        Ok(counts)
    }

    /// Exact max-load histogram of `ks` over every tuple selected by `mode`.
    pub fn maxload_histogram(&self, ks: &KeySet, mode: BMode) -> Result<MaxLoadHistogram> {
        let keys = ks.materialize(&self.modulus)?;
        let (p, m) = (self.modulus.p(), self.modulus.m());
        let n_keys = keys.len();
        let work = match mode {
            BMode::AllB => self.modulus.family_size() * n_keys as u128,
            BMode::BZero => p as u128 * n_keys as u128,
        };
        self.charge(work)?;
        let modulus = self.modulus;
        let per_a = parallel::map_ordered(self.workers, p, |a| {
            let mut dense = vec![0u64; n_keys + 1];
            let mut bins = Vec::with_capacity(m as usize);
            match mode {
                BMode::BZero => {
                    let l = max_load_with(HashParams::new_unchecked(a, 0), &modulus, &keys, &mut bins);
                    dense[l as usize] += 1;
                }
                BMode::AllB => {
                    let mut cursors: Vec<Cursor> =
                        keys.iter().map(|&x| Cursor::new(mul_mod(a, x, p), m)).collect();
                    let mut loads = vec![0u32; m as usize];
                    for _ in 0..p {
                        loads.iter_mut().for_each(|l| *l = 0);
                        let mut best = 0u32;
                        for c in cursors.iter_mut() {
                            let slot = &mut loads[c.res as usize];
                            *slot += 1;
                            best = best.max(*slot);
                            c.step(p, m);
                        }
                        dense[best as usize] += 1;
                    }
                }
            }
            dense
        });
        let mut dense = vec![0u64; n_keys + 1];
        for part in per_a {
            for (acc, c) in dense.iter_mut().zip(part) {
                *acc += c;
            }
        }
        Ok(MaxLoadHistogram::from_dense(mode, &dense))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex(p: u64, m: u64) -> Exhaustive {
        Exhaustive::new(Modulus::new(p, m).unwrap())
    }

    /// Straight double loop over the family using the reference evaluator.
    fn naive_count(md: &Modulus, pred: impl Fn(&HashParams) -> bool) -> u64 {
        let mut n = 0;
        for a in 0..md.p() {
            for b in 0..md.p() {
                if pred(&HashParams::new(a, b, md).unwrap()) {
                    n += 1;
                }
            }
        }
        n
    }

    /// Second route: for fixed `a` the event depends on `b` only through which
    /// of the images wrap past `p`, so count region sizes instead of `b`s.
    fn leap_count_triple(md: &Modulus, d: u64) -> u64 {
        let (p, m) = (md.p(), md.m());
        let mut total = 0;
        for a in 0..p {
            let u = a;
            let v = mul_mod(a, d, p);
            let mut cuts = [0, p - u, p - v, p];
            cuts.sort_unstable();
            for w in cuts.windows(2) {
                if w[0] >= w[1] {
                    continue;
                }
                let b = w[0];
                let w1 = (b + u >= p) as u64;
                let w2 = (b + v >= p) as u64;
                // h(1) - h(0) ≡ u - w1*p, h(d) - h(0) ≡ v - w2*p (mod m)
                let ok1 = ((u as i128 - (w1 * p) as i128).rem_euclid(m as i128)) == 0;
                let ok2 = ((v as i128 - (w2 * p) as i128).rem_euclid(m as i128)) == 0;
                if ok1 && ok2 {
                    total += w[1] - w[0];
                }
            }
        }
        total
    }

    #[test]
    fn triple_matches_naive_and_leap_routes() {
        for (p, m) in [(13, 3), (13, 4), (31, 5), (61, 8)] {
            let e = ex(p, m);
            let md = *e.modulus();
            for d in 2..p {
                let fast = e.triple_collisions(0, 1, d).unwrap().satisfying_pairs;
                let slow = naive_count(&md, |h| {
                    let h0 = h.eval_binned(&md, 0);
                    h0 == h.eval_binned(&md, 1) && h0 == h.eval_binned(&md, d)
                });
                assert_eq!(fast, slow, "p={p} m={m} d={d}");
                assert_eq!(fast, leap_count_triple(&md, d), "p={p} m={m} d={d}");
            }
        }
    }

    #[test]
    fn triple_snapshots() {
        // frozen from an independent numpy enumeration
        assert_eq!(ex(13, 3).triple_collisions(0, 1, 2).unwrap().satisfying_pairs, 29);
        assert_eq!(ex(257, 16).triple_collisions(0, 1, 2).unwrap().satisfying_pairs, 2065);
        assert_eq!(ex(257, 16).triple_collisions(0, 1, 3).unwrap().satisfying_pairs, 1387);
        // m = p: only a = 0 sends distinct points to one value
        assert_eq!(ex(13, 13).triple_collisions(0, 1, 2).unwrap().satisfying_pairs, 13);
        assert_eq!(ex(13, 1).triple_collisions(3, 7, 9).unwrap().satisfying_pairs, 169);
    }

    #[test]
    fn triple_rejects_repeats() {
        assert_eq!(ex(13, 3).triple_collisions(1, 1, 2), Err(Error::NotDistinct(1, 1, 2)));
        assert!(ex(13, 3).triple_collisions(1, 2, 13).is_err());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(
            canonicalize_triple(13, 0, 1, 7).unwrap(),
            CanonicalTriple { d: 7, alpha: 1, beta: 0 }
        );
        assert_eq!(
            canonicalize_triple(13, 2, 5, 11).unwrap(),
            CanonicalTriple { d: 3, alpha: 3, beta: 2 }
        );
        let c = canonicalize_triple(13, 5, 2, 11).unwrap();
        assert_eq!((c.alpha, c.beta), (10, 5));
        assert_eq!(c.d, mul_mod(mod_inverse(10, 13).unwrap(), 6, 13));

        let e = ex(13, 3);
        let direct = e.triple_collisions(2, 5, 11).unwrap();
        assert_eq!(direct, e.triple_collisions(0, 1, 3).unwrap());
        assert_eq!(e.triple_collisions(5, 2, 11).unwrap(), e.triple_collisions(0, 1, c.d).unwrap());
        assert!(canonicalize_triple(13, 4, 4, 1).is_err());
    }

    #[test]
    fn prescribed_examples() {
        let e = ex(13, 3);
        let c = canonicalize_triple(13, 2, 5, 11).unwrap();
        assert_eq!(
            e.prescribed_triple((2, 5, 11), (0, 1, 2)).unwrap(),
            e.prescribed_triple((0, 1, c.d), (0, 1, 2)).unwrap()
        );
        assert_eq!(ex(13, 1).prescribed_triple((2, 5, 11), (0, 0, 0)).unwrap().satisfying_pairs, 169);
        assert_eq!(
            e.prescribed_triple((2, 5, 11), (0, 3, 0)),
            Err(Error::BinOutOfRange { index: 3, m: 3 })
        );
    }

    #[test]
    fn prescribed_decomposes_collision() {
        let e = ex(31, 5);
        for (x, y, z) in [(0, 1, 2), (4, 17, 30), (29, 3, 11)] {
            let sum: u64 = (0..5)
                .map(|i| e.prescribed_triple((x, y, z), (i, i, i)).unwrap().satisfying_pairs)
                .sum();
            assert_eq!(sum, e.triple_collisions(x, y, z).unwrap().satisfying_pairs);
        }
    }

    #[test]
    fn prescribed_partition_the_family() {
        let e = ex(13, 3);
        let mut total = 0;
        for ix in 0..3 {
            for iy in 0..3 {
                for iz in 0..3 {
                    total += e.prescribed_triple((1, 6, 9), (ix, iy, iz)).unwrap().satisfying_pairs;
                }
            }
        }
        assert_eq!(total, 169);
    }

    #[test]
    fn interval_matches_naive() {
        for (p, m) in [(13, 3), (31, 4), (61, 7)] {
            let e = ex(p, m);
            let md = *e.modulus();
            let profile = e.interval_collision_profile(p).unwrap();
            assert_eq!(profile[1], p * p);
            for d in 2..=p {
                let slow = naive_count(&md, |h| {
                    let h0 = h.eval_binned(&md, 0);
                    (1..d).all(|x| h.eval_binned(&md, x) == h0)
                });
                assert_eq!(profile[d as usize], slow, "p={p} m={m} d={d}");
                assert_eq!(e.interval_collision(d).unwrap().satisfying_pairs, slow);
            }
            assert!(profile.windows(2).skip(1).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn interval_examples() {
        assert_eq!(ex(13, 1).interval_collision(2).unwrap().satisfying_pairs, 169);
        let stats = ex(197, 8).interval_collision(4).unwrap();
        assert_eq!(stats.satisfying_pairs, 1621);
        assert!(stats.satisfying_pairs * 6 * 4 * 8 >= 197 * 197);
        // only a = 0 collapses the whole field
        assert_eq!(ex(13, 3).interval_collision(13).unwrap().satisfying_pairs, 13);
    }

    #[test]
    fn bound_formulas() {
        let md = Modulus::new(257, 16).unwrap();
        let b = triple_bound_formula(&md, 2).unwrap();
        let r = |n, d| Probability::new(n, d);
        // p >= 2m: (1 + p/(2m) * (1 + 2/m)) / p
        let expect = (r(1, 1) + r(257, 32) * (r(1, 1) + r(2, 16))) / 257u128;
        assert_eq!(b.statement, expect);
        let proof = (r(1, 1) + (r(1, 1) + r(257, 2)) / 16u128) * (r(1, 1) + r(2, 16)) / 257u128;
        assert_eq!(b.proof, proof);
        assert_eq!(b.ceiling, r((1 + 129u128.div_ceil(16)) * 2, 257));
        assert!(triple_bound_formula(&md, 1).is_err());
        assert!(triple_bound_formula(&md, 257).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let p97 = Modulus::new(197, 8).unwrap();
        assert_eq!(interval_lower_bound(&p97, 2).unwrap(), Probability::new(1, 96));
        assert_eq!(interval_lower_bound(&p97, 8).unwrap(), Probability::new(1, 384));
        let e = Exhaustive::new(p97);
        assert!(e.interval_collision(8).unwrap().probability() >= Probability::new(1, 384));
        let p797 = Modulus::new(797, 16).unwrap();
        assert_eq!(interval_lower_bound(&p797, 16).unwrap(), Probability::new(1, 1536));
        assert!(Exhaustive::new(p797).interval_collision(16).unwrap().probability() >= Probability::new(1, 1536));
        assert!(interval_lower_bound(&p97, 9).is_err());
        assert!(interval_lower_bound(&Modulus::new(191, 8).unwrap(), 2).is_err());
    }

    #[test]
    fn histogram_examples() {
        let md = Modulus::new(257, 16).unwrap();
        let e = Exhaustive::new(md);
        let s = KeySet::interval(16).unwrap();
        let zero = e.maxload_histogram(&s, BMode::BZero).unwrap();
        assert_eq!(zero.total, 257);
        let all = e.maxload_histogram(&s, BMode::AllB).unwrap();
        assert_eq!(all.total, 257 * 257);
        for l in 1..=16 {
            assert!(all.tail(l + 1) <= all.tail(l));
            // a tuple with L_ab >= l has L_a0 >= floor(l/2), and vice versa with ceil
            assert!(all.tail_count(l) <= 257 * zero.tail_count(l / 2));
            assert!(257 * zero.tail_count(l) <= all.tail_count(l.div_ceil(2)));
        }
        let single = ex(13, 1).maxload_histogram(&KeySet::interval(5).unwrap(), BMode::AllB).unwrap();
        assert_eq!(single.counts, BTreeMap::from([(5, 169)]));
    }

    #[test]
    fn histogram_matches_naive() {
        let md = Modulus::new(31, 6).unwrap();
        let ks = KeySet::explicit(vec![0, 3, 4, 9, 17, 22, 30]).unwrap();
        let keys = ks.materialize(&md).unwrap();
        let hist = Exhaustive::new(md).maxload_histogram(&ks, BMode::AllB).unwrap();
        let mut naive = BTreeMap::new();
        for a in 0..31 {
            for b in 0..31 {
                let l = crate::load::load_profile(HashParams::new(a, b, &md).unwrap(), &md, &keys).max_load;
                *naive.entry(l).or_insert(0u64) += 1;
            }
        }
        assert_eq!(hist.counts, naive);
    }

    #[test]
    fn budget_refusal() {
        let e = ex(257, 16).with_budget(1000);
        assert!(matches!(e.triple_collisions(0, 1, 2), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(
            e.maxload_histogram(&KeySet::interval(16).unwrap(), BMode::AllB),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let md = Modulus::new(61, 8).unwrap();
        let one = Exhaustive::new(md);
        let four = Exhaustive::new(md).with_workers(4);
        assert_eq!(one.triple_collisions(3, 9, 40).unwrap(), four.triple_collisions(3, 9, 40).unwrap());
        assert_eq!(one.interval_collision_profile(20).unwrap(), four.interval_collision_profile(20).unwrap());
        let ks = KeySet::interval(8).unwrap();
        assert_eq!(
            one.maxload_histogram(&ks, BMode::AllB).unwrap(),
            four.maxload_histogram(&ks, BMode::AllB).unwrap()
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn canonicalization_preserves_prescribed_counts(
            x in 0u64..31, y in 0u64..31, z in 0u64..31,
            ix in 0u64..5, iy in 0u64..5, iz in 0u64..5,
        ) {
            prop_assume!(x != y && y != z && x != z);
            let e = ex(31, 5);
            let c = canonicalize_triple(31, x, y, z).unwrap();
            prop_assert!(c.d > 1);
            prop_assert_eq!(
                e.prescribed_triple((x, y, z), (ix, iy, iz)).unwrap(),
                e.prescribed_triple((0, 1, c.d), (ix, iy, iz)).unwrap()
            );
        }
    }
}
