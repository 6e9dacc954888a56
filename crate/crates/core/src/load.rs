//! Ball sets and per-bin load accounting for a single hash function.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{mul_mod, HashParams, Modulus};

/// The set of balls `S ⊆ [p]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeySet {
    /// `{0, 1, ..., len-1}`.
    Interval { len: u64 },
    /// `{(alpha*x + beta) mod p : x in [len]}` with `alpha != 0`.
    AffineImage { len: u64, alpha: u64, beta: u64 },
    /// Sorted, duplicate-free elements.
    Explicit(Vec<u64>),
}

impl KeySet {
    pub fn interval(len: u64) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyKeySet);
        }
        Ok(KeySet::Interval { len })
    }

    pub fn affine(len: u64, alpha: u64, beta: u64) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyKeySet);
        }
        if alpha == 0 {
            return Err(Error::ZeroMultiplier);
        }
        Ok(KeySet::AffineImage { len, alpha, beta })
    }

    /// Sorts the elements; a repeated element is an error rather than being merged.
    pub fn explicit(mut elems: Vec<u64>) -> Result<Self> {
        if elems.is_empty() {
            return Err(Error::EmptyKeySet);
        }
        elems.sort_unstable();
        if let Some(w) = elems.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateKey(w[0]));
        }
        Ok(KeySet::Explicit(elems))
    }

    /// `|S|`.
    pub fn len(&self) -> u64 {
        match self {
            KeySet::Interval { len } | KeySet::AffineImage { len, .. } => *len,
            KeySet::Explicit(v) => v.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lists the elements of the set, checking them against `Z_p`.
    pub fn materialize(&self, modulus: &Modulus) -> Result<Vec<u64>> {
        let p = modulus.p();
        match self {
            KeySet::Interval { len } => {
                if *len == 0 {
                    return Err(Error::EmptyKeySet);
                }
                if *len > p {
                    return Err(Error::KeySetTooLarge { len: *len, p });
                }
                Ok((0..*len).collect())
            }
            KeySet::AffineImage { len, alpha, beta } => {
                if *len == 0 {
                    return Err(Error::EmptyKeySet);
                }
                if *len > p {
                    return Err(Error::KeySetTooLarge { len: *len, p });
                }
                let alpha = modulus.check_element(*alpha)?;
                let beta = modulus.check_element(*beta)?;
                if alpha == 0 {
                    return Err(Error::ZeroMultiplier);
                }
                Ok((0..*len)
                    .map(|x| (mul_mod(alpha, x, p) + beta) % p)
                    .collect())
            }
            KeySet::Explicit(v) => {
                if v.is_empty() {
                    return Err(Error::EmptyKeySet);
                }
                for &x in v {
                    modulus.check_element(x)?;
                }
                if let Some(w) = v.windows(2).find(|w| w[0] >= w[1]) {
                    return Err(Error::DuplicateKey(w[1]));
                }
                Ok(v.clone())
            }
        }
    }
}

impl fmt::Display for KeySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeySet::Interval { len } => write!(f, "interval({len})"),
            KeySet::AffineImage { len, alpha, beta } => {
                write!(f, "affine({len};alpha={alpha};beta={beta})")
            }
            KeySet::Explicit(v) => write!(f, "explicit({} keys)", v.len()),
        }
    }
}

/// Bin sizes of one function on one key set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadProfile {
    pub loads: Vec<u64>,
    pub max_load: u64,
    pub params: HashParams,
    pub modulus: Modulus,
}

impl LoadProfile {
    /// Total number of balls, `Σ loads`.
    pub fn total(&self) -> u64 {
        self.loads.iter().sum()
    }
}

/// Load profile of `h_{a,b}` on already materialized keys.
pub fn load_profile(params: HashParams, modulus: &Modulus, keys: &[u64]) -> LoadProfile {
    let mut loads = vec![0u64; modulus.m() as usize];
    for &x in keys {
        loads[params.eval_binned(modulus, x) as usize] += 1;
    }
    let max_load = loads.iter().copied().max().unwrap_or(0);
    LoadProfile {
        loads,
        max_load,
        params,
        modulus: *modulus,
    }
}

/// Load profile of `h_{a,b}` on a key set.
pub fn key_set_profile(params: HashParams, modulus: &Modulus, ks: &KeySet) -> Result<LoadProfile> {
    Ok(load_profile(params, modulus, &ks.materialize(modulus)?))
}

/// Maximum load only, reusing `bins` (resized to `m` and zeroed) as scratch.
pub fn max_load_with(params: HashParams, modulus: &Modulus, keys: &[u64], bins: &mut Vec<u32>) -> u64 {
    bins.clear();
    bins.resize(modulus.m() as usize, 0);
    let mut best = 0u32;
    for &x in keys {
        let slot = &mut bins[params.eval_binned(modulus, x) as usize];
        *slot += 1;
        best = best.max(*slot);
    }
    best as u64
}

/// Interval `[floor(L/2), 2L]` that must contain the maximum load of `h_{a,0}`,
/// where `L` is the maximum load of `h_{a,b}`.
pub fn max_load_b_zero_bounds(params: HashParams, modulus: &Modulus, keys: &[u64]) -> (u64, u64) {
    let l = load_profile(params, modulus, keys).max_load;
    b_zero_window(l)
}

#[inline]
pub(crate) fn b_zero_window(max_load: u64) -> (u64, u64) {
    (max_load / 2, 2 * max_load)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn md(p: u64, m: u64) -> Modulus {
        Modulus::new(p, m).unwrap()
    }

    #[test]
    fn materialize_examples() {
        let m13 = md(13, 4);
        assert_eq!(KeySet::interval(4).unwrap().materialize(&m13).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(KeySet::affine(3, 1, 0).unwrap().materialize(&m13).unwrap(), vec![0, 1, 2]);
        assert_eq!(KeySet::affine(3, 5, 2).unwrap().materialize(&m13).unwrap(), vec![2, 7, 12]);
    }

    #[test]
    fn key_set_validation() {
        assert_eq!(KeySet::explicit(vec![3, 1, 3]), Err(Error::DuplicateKey(3)));
        assert_eq!(KeySet::explicit(vec![]), Err(Error::EmptyKeySet));
        assert_eq!(KeySet::interval(0), Err(Error::EmptyKeySet));
        assert_eq!(KeySet::affine(4, 0, 1), Err(Error::ZeroMultiplier));
        assert_eq!(KeySet::explicit(vec![5, 2]).unwrap(), KeySet::Explicit(vec![2, 5]));
        let m13 = md(13, 4);
        assert!(KeySet::explicit(vec![1, 13]).unwrap().materialize(&m13).is_err());
        assert!(KeySet::interval(14).unwrap().materialize(&m13).is_err());
        assert!(KeySet::affine(3, 13, 0).unwrap().materialize(&m13).is_err());
    }

    #[test]
    fn profile_examples() {
        let m = 8u64;
        let md = md(13, m);
        let keys: Vec<u64> = (0..m).collect();
        let id = load_profile(HashParams::new(1, 0, &md).unwrap(), &md, &keys);
        assert!(id.loads.iter().all(|&l| l == 1));
        assert_eq!(id.max_load, 1);

        let zero = load_profile(HashParams::new(0, 0, &md).unwrap(), &md, &keys);
        assert_eq!(zero.loads[0], m);
        assert_eq!(zero.max_load, m);
    }

    #[test]
    fn profile_matches_independent_recount() {
        let md = md(257, 16);
        let keys: Vec<u64> = (0..16).collect();
        let h = HashParams::new(17, 0, &md).unwrap();
        let prof = load_profile(h, &md, &keys);
        // recount: for each bin, count keys whose image lands there
        let recount: Vec<u64> = (0..16u64)
            .map(|bin| keys.iter().filter(|&&x| (17 * x % 257) % 16 == bin).count() as u64)
            .collect();
        assert_eq!(prof.loads, recount);
        assert_eq!(prof.max_load, *recount.iter().max().unwrap());
        let mut scratch = Vec::new();
        assert_eq!(max_load_with(h, &md, &keys, &mut scratch), prof.max_load);
    }

    #[test]
    fn b_zero_bound_arithmetic() {
        assert_eq!(b_zero_window(3), (1, 6));
        assert_eq!(b_zero_window(1), (0, 2));
    }

    #[test]
    fn b_zero_containment_exhaustive() {
        let md = md(257, 16);
        let keys: Vec<u64> = (0..16).collect();
        for a in 0..257 {
            let l0 = load_profile(HashParams::new(a, 0, &md).unwrap(), &md, &keys).max_load;
            for b in 0..257 {
                let (lo, hi) = max_load_b_zero_bounds(HashParams::new(a, b, &md).unwrap(), &md, &keys);
                assert!(lo <= l0 && l0 <= hi, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn sign_symmetry_on_zero_free_set() {
        let md = md(61, 7);
        let with_zero: Vec<u64> = (0..7).collect();
        let zero_free: Vec<u64> = (1..8).collect();
        for a in 1..61 {
            let l = |a, keys: &[u64]| load_profile(HashParams::new(a, 0, &md).unwrap(), &md, keys).max_load;
            assert_eq!(l(a, &zero_free), l(61 - a, &zero_free));
            assert!(l(a, &with_zero).abs_diff(l(61 - a, &with_zero)) <= 1);
        }
    }

    proptest! {
        #[test]
        fn loads_sum_to_set_size(a in 0u64..1031, b in 0u64..1031,
                                 keys in proptest::collection::btree_set(0u64..1031, 1..200)) {
            let md = md(1031, 32);
            let keys: Vec<u64> = keys.into_iter().collect();
            let prof = load_profile(HashParams::new(a, b, &md).unwrap(), &md, &keys);
            prop_assert_eq!(prof.loads.len(), 32);
            prop_assert_eq!(prof.total(), keys.len() as u64);
            prop_assert_eq!(prof.max_load, *prof.loads.iter().max().unwrap());
        }

        #[test]
        fn affine_image_has_distinct_elements(len in 1u64..100, alpha in 1u64..101, beta in 0u64..101) {
            let md = md(101, 10);
            let mut v = KeySet::affine(len, alpha, beta).unwrap().materialize(&md).unwrap();
            v.sort_unstable();
            v.dedup();
            prop_assert_eq!(v.len() as u64, len);
        }
    }
}
