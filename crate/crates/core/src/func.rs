//! Finite functions `A^n -> A` stored as value tables.
//!
//! Tables are indexed by the big-endian tuple codec: position 0 of the
//! argument tuple is the most significant digit in base `k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard upper bound on carrier size; values are stored as `u8`.
pub const MAX_CARRIER: usize = 64;

/// `k^n`, or `None` on overflow.
pub fn table_len(k: usize, n: usize) -> Option<usize> {
    let mut len: usize = 1;
    for _ in 0..n {
        len = len.checked_mul(k)?;
    }
    Some(len)
}

pub fn check_carrier(k: usize) -> Result<()> {
    if !(2..=MAX_CARRIER).contains(&k) {
        return Err(Error::input(format!("carrier size must be in 2..={MAX_CARRIER}, got {k}")));
    }
    Ok(())
}

/// Index of `tuple` in the table of an `n`-ary function on `k` elements.
pub fn encode_tuple(tuple: &[u8], k: usize) -> Result<usize> {
    let mut index = 0usize;
    for &a in tuple {
        if a as usize >= k {
            return Err(Error::input(format!("tuple entry {a} is not below k={k}")));
        }
        index = index
            .checked_mul(k)
            .and_then(|i| i.checked_add(a as usize))
            .ok_or_else(|| Error::input("tuple index overflows"))?;
    }
    Ok(index)
}

pub fn decode_tuple(index: usize, n: usize, k: usize) -> Result<Vec<u8>> {
    let len = table_len(k, n).ok_or_else(|| Error::input("k^n overflows"))?;
    if index >= len {
        return Err(Error::input(format!("index {index} out of range for k={k}, n={n}")));
    }
    let mut out = vec![0u8; n];
    decode_into(index, k, &mut out);
    Ok(out)
}

/// Unchecked codec used on hot paths.
#[inline]
pub(crate) fn encode_unchecked(tuple: &[u8], k: usize) -> usize {
    tuple.iter().fold(0, |acc, &a| acc * k + a as usize)
}

#[inline]
pub(crate) fn decode_into(mut index: usize, k: usize, out: &mut [u8]) {
    for slot in out.iter_mut().rev() {
        *slot = (index % k) as u8;
        index /= k;
    }
}

/// All `n`-tuples over `0..k` in codec order.
pub fn all_tuples(n: usize, k: usize) -> Vec<Vec<u8>> {
    let len = table_len(k, n).expect("tuple space too large");
    (0..len)
        .map(|i| {
            let mut t = vec![0u8; n];
            decode_into(i, k, &mut t);
            t
        })
        .collect()
}

/// `|ran a|`.
pub fn tuple_rank(tuple: &[u8]) -> usize {
    let mut seen: u64 = 0;
    for &a in tuple {
        seen |= 1u64 << a;
    }
    seen.count_ones() as usize
}

/// Indices of all `n`-tuples whose rank satisfies `keep`, in codec order.
pub fn cells_by_rank(n: usize, k: usize, keep: impl Fn(usize) -> bool) -> Vec<usize> {
    let len = table_len(k, n).expect("tuple space too large");
    let mut t = vec![0u8; n];
    (0..len)
        .filter(|&i| {
            decode_into(i, k, &mut t);
            keep(tuple_rank(&t))
        })
        .collect()
}

/// A bijection of `0..k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Permutation {
    image: Vec<u8>,
}

impl TryFrom<Vec<u8>> for Permutation {
    type Error = Error;
    fn try_from(image: Vec<u8>) -> Result<Self> {
        Permutation::new(image)
    }
}

impl From<Permutation> for Vec<u8> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

impl Permutation {
    pub fn new(image: Vec<u8>) -> Result<Self> {
        let k = image.len();
        let mut seen = vec![false; k];
        for &x in &image {
            let x = x as usize;
            if x >= k || seen[x] {
                return Err(Error::input(format!("{image:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(k: usize) -> Self {
        Permutation { image: (0..k as u8).collect() }
    }

    /// Transposition of `a` and `b` on `0..k`.
    pub fn swap(k: usize, a: u8, b: u8) -> Self {
        let mut image: Vec<u8> = (0..k as u8).collect();
        image.swap(a as usize, b as usize);
        Permutation { image }
    }

    pub fn k(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, x: u8) -> u8 {
        self.image[x as usize]
    }

    pub fn image(&self) -> &[u8] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.k()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn after(&self, other: &Permutation) -> Self {
        Permutation { image: other.image.iter().map(|&x| self.apply(x)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// The symmetric group on `0..k`, in lexicographic order of images.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<u8> = (0..k as u8).collect();
        loop {
            out.push(Permutation { image: current.clone() });
            // next lexicographic permutation
            let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..k).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }
}

/// A total function `A^n -> A` with `A = {0, .., k-1}`.
///
/// Ordering is by `(arity, table)`, which is the canonical order used by
/// every set type in the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteFunction {
    arity: usize,
    table: Vec<u8>,
    k: usize,
}

impl fmt::Debug for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f[k={},n={}]{:?}", self.k, self.arity, self.table)
    }
}

/// Flags produced by [`FiniteFunction::classify`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub projection: Option<usize>,
    pub is_conservative: bool,
    pub is_idempotent: bool,
    pub is_d_function: bool,
    pub is_l_function: bool,
}

impl FiniteFunction {
    pub fn new(k: usize, arity: usize, table: Vec<u8>) -> Result<Self> {
        check_carrier(k)?;
        if arity == 0 {
            return Err(Error::input("arity must be at least 1"));
        }
        let len = table_len(k, arity).ok_or_else(|| Error::input("k^n overflows"))?;
        if table.len() != len {
            return Err(Error::input(format!("table has {} entries, expected k^n = {len}", table.len())));
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= k) {
            return Err(Error::input(format!("table value {bad} is not below k={k}")));
        }
        Ok(FiniteFunction { arity, table, k })
    }

    /// Builds a function by evaluating `rule` on every tuple.
    pub fn from_fn(k: usize, arity: usize, mut rule: impl FnMut(&[u8]) -> u8) -> Result<Self> {
        check_carrier(k)?;
        let len = table_len(k, arity).ok_or_else(|| Error::input("k^n overflows"))?;
        let mut t = vec![0u8; arity];
        let table = (0..len)
            .map(|i| {
                decode_into(i, k, &mut t);
                rule(&t)
            })
            .collect();
        FiniteFunction::new(k, arity, table)
    }

    pub(crate) fn from_parts_unchecked(k: usize, arity: usize, table: Vec<u8>) -> Self {
        debug_assert_eq!(Some(table.len()), table_len(k, arity));
        FiniteFunction { arity, table, k }
    }

    pub fn projection(k: usize, n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::input(format!("projection index {i} must be below arity {n}")));
        }
        FiniteFunction::from_fn(k, n, |t| t[i])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn into_table(self) -> Vec<u8> {
        self.table
    }

    pub fn apply(&self, tuple: &[u8]) -> Result<u8> {
        if tuple.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: tuple.len() });
        }
        Ok(self.table[encode_tuple(tuple, self.k)?])
    }

    #[inline]
    pub(crate) fn at(&self, index: usize) -> u8 {
        self.table[index]
    }

    /// `f(g_0, .., g_{n-1})`, computed cellwise.
    pub fn compose(&self, gs: &[FiniteFunction]) -> Result<FiniteFunction> {
        if gs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: gs.len() });
        }
        let m = gs[0].arity;
        for g in gs {
            if g.k != self.k {
                return Err(Error::CarrierMismatch { expected: self.k, found: g.k });
            }
            if g.arity != m {
                return Err(Error::ArityMismatch { expected: m, found: g.arity });
            }
        }
        let len = gs[0].table.len();
        let table = (0..len)
            .map(|cell| {
                let idx = gs.iter().fold(0, |acc, g| acc * self.k + g.table[cell] as usize);
                self.table[idx]
            })
            .collect();
        Ok(FiniteFunction::from_parts_unchecked(self.k, m, table))
    }

    /// `f_σ(a) = σ⁻¹(f(σ(a)))`.
    pub fn conjugate(&self, sigma: &Permutation) -> Result<FiniteFunction> {
        if sigma.k() != self.k {
            return Err(Error::CarrierMismatch { expected: self.k, found: sigma.k() });
        }
        let inv = sigma.inverse();
        let mut t = vec![0u8; self.arity];
        let table = (0..self.table.len())
            .map(|cell| {
                decode_into(cell, self.k, &mut t);
                let moved = t.iter().fold(0, |acc, &a| acc * self.k + sigma.apply(a) as usize);
                inv.apply(self.table[moved])
            })
            .collect();
        Ok(FiniteFunction::from_parts_unchecked(self.k, self.arity, table))
    }

    /// `f(x_{ξ(0)}, .., x_{ξ(n-1)})` as an `m`-ary function.
    pub fn identify_vars(&self, xi: &[usize], m: usize) -> Result<FiniteFunction> {
        if xi.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: xi.len() });
        }
        if m == 0 {
            return Err(Error::input("target arity must be at least 1"));
        }
        if let Some(&bad) = xi.iter().find(|&&j| j >= m) {
            return Err(Error::input(format!("variable map value {bad} is not below {m}")));
        }
        FiniteFunction::from_fn(self.k, m, |c| {
            let idx = xi.iter().fold(0, |acc, &j| acc * self.k + c[j] as usize);
            self.table[idx]
        })
    }

    pub fn is_projection(&self) -> Option<usize> {
        (0..self.arity).find(|&i| {
            let mut t = vec![0u8; self.arity];
            self.table.iter().enumerate().all(|(cell, &v)| {
                decode_into(cell, self.k, &mut t);
                t[i] == v
            })
        })
    }

    pub fn is_conservative(&self) -> bool {
        let mut t = vec![0u8; self.arity];
        self.table.iter().enumerate().all(|(cell, &v)| {
            decode_into(cell, self.k, &mut t);
            t.contains(&v)
        })
    }

    /// One scan of the table for all shape predicates.
    pub fn classify(&self) -> ShapeReport {
        let mut report = ShapeReport {
            projection: None,
            is_conservative: true,
            is_idempotent: true,
            is_d_function: self.arity == 3,
            is_l_function: self.arity == 3,
        };
        let mut proj = vec![true; self.arity];
        let mut t = vec![0u8; self.arity];
        for (cell, &v) in self.table.iter().enumerate() {
            decode_into(cell, self.k, &mut t);
            for (i, ok) in proj.iter_mut().enumerate() {
                *ok &= t[i] == v;
            }
            report.is_conservative &= t.contains(&v);
            if t.iter().all(|&x| x == t[0]) {
                report.is_idempotent &= v == t[0];
            }
            if self.arity == 3 {
                if let Some((maj, min)) = majority_minority(&t) {
                    report.is_d_function &= v == maj;
                    report.is_l_function &= v == min;
                }
            }
        }
        report.projection = proj.iter().position(|&ok| ok);
        report
    }
}

/// For a ternary cell of rank ≤ 2, the majority and minority values
/// (`xxy -> (x, y)`, `xxx -> (x, x)`); `None` on rank-3 cells.
#[inline]
pub(crate) fn majority_minority(t: &[u8]) -> Option<(u8, u8)> {
    let (a, b, c) = (t[0], t[1], t[2]);
    if a == b {
        Some((a, c))
    } else if a == c {
        Some((a, b))
    } else if b == c {
        Some((b, a))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn maj2() -> FiniteFunction {
        FiniteFunction::from_fn(2, 3, |t| majority_minority(t).unwrap().0).unwrap()
    }

    fn xor3() -> FiniteFunction {
        FiniteFunction::from_fn(2, 3, |t| t[0] ^ t[1] ^ t[2]).unwrap()
    }

    #[test]
    fn codec_examples() {
        assert_eq!(encode_tuple(&[2, 0, 1], 3).unwrap(), 19);
        assert_eq!(encode_tuple(&[0, 0, 0], 2).unwrap(), 0);
        assert_eq!(encode_tuple(&[3], 4).unwrap(), 3);
        assert_eq!(decode_tuple(19, 3, 3).unwrap(), vec![2, 0, 1]);
        assert_eq!(decode_tuple(0, 2, 2).unwrap(), vec![0, 0]);
        assert_eq!(decode_tuple(5, 2, 3).unwrap(), vec![1, 2]);
        assert!(encode_tuple(&[3], 3).is_err());
        assert!(decode_tuple(9, 2, 3).is_err());
    }

    #[test]
    fn codec_round_trip_small_spaces() {
        for k in 2..=4 {
            for n in 1..=5 {
                for (i, t) in all_tuples(n, k).iter().enumerate() {
                    assert_eq!(encode_tuple(t, k).unwrap(), i);
                    assert_eq!(&decode_tuple(i, n, k).unwrap(), t);
                }
            }
        }
    }

    #[test]
    fn projection_tables() {
        assert_eq!(FiniteFunction::projection(2, 2, 1).unwrap().table(), &[0, 1, 0, 1]);
        assert_eq!(FiniteFunction::projection(3, 1, 0).unwrap().table(), &[0, 1, 2]);
        assert_eq!(FiniteFunction::projection(3, 2, 0).unwrap().table(), &[0, 0, 0, 1, 1, 1, 2, 2, 2]);
        assert!(FiniteFunction::projection(3, 2, 2).is_err());
    }

    #[test]
    fn constructor_rejects_bad_tables() {
        assert!(FiniteFunction::new(2, 2, vec![0, 1, 1]).is_err());
        assert!(FiniteFunction::new(2, 1, vec![0, 2]).is_err());
        assert!(FiniteFunction::new(2, 0, vec![0]).is_err());
        assert!(FiniteFunction::new(1, 1, vec![0]).is_err());
    }

    #[test]
    fn apply_checks_length() {
        let e = FiniteFunction::projection(3, 3, 1).unwrap();
        assert_eq!(e.apply(&[2, 0, 1]).unwrap(), 0);
        assert!(e.apply(&[0, 1]).is_err());
    }

    #[test]
    fn compose_with_projections() {
        let g = FiniteFunction::new(3, 2, vec![0, 1, 0, 1, 1, 2, 0, 2, 2]).unwrap();
        let h = FiniteFunction::new(3, 2, vec![0, 0, 2, 0, 1, 1, 2, 1, 2]).unwrap();
        let e0 = FiniteFunction::projection(3, 2, 0).unwrap();
        let e1 = FiniteFunction::projection(3, 2, 1).unwrap();
        assert_eq!(e0.compose(&[g.clone(), h.clone()]).unwrap(), g);
        assert_eq!(g.compose(&[e0, e1]).unwrap(), g);
        assert!(g.compose(&[h]).is_err());
    }

    #[test]
    fn conjugation_fixes_projections() {
        for sigma in Permutation::all(3) {
            for i in 0..3 {
                let e = FiniteFunction::projection(3, 3, i).unwrap();
                assert_eq!(e.conjugate(&sigma).unwrap(), e);
            }
        }
    }

    #[test]
    fn conjugate_is_cellwise_relabeling() {
        // Independent recomputation: f_σ(a) = σ⁻¹ f(σ a) cell by cell via apply().
        let f = FiniteFunction::new(3, 2, vec![0, 1, 0, 1, 1, 2, 0, 2, 2]).unwrap();
        let sigma = Permutation::swap(3, 0, 1);
        let g = f.conjugate(&sigma).unwrap();
        for t in all_tuples(2, 3) {
            let moved: Vec<u8> = t.iter().map(|&a| sigma.apply(a)).collect();
            let expected = sigma.inverse().apply(f.apply(&moved).unwrap());
            assert_eq!(g.apply(&t).unwrap(), expected);
        }
        assert_eq!(f.conjugate(&Permutation::identity(3)).unwrap(), f);
    }

    #[test]
    fn identify_vars_examples() {
        let f = FiniteFunction::new(3, 2, vec![0, 1, 0, 1, 1, 2, 0, 2, 2]).unwrap();
        let diag = f.identify_vars(&[0, 0], 1).unwrap();
        assert_eq!(diag.table(), &[0, 1, 2]);
        let g = maj2().identify_vars(&[0, 0, 1], 2).unwrap();
        assert_eq!(g, FiniteFunction::projection(2, 2, 0).unwrap());
        assert_eq!(maj2().identify_vars(&[0, 1, 2], 3).unwrap(), maj2());
        assert!(f.identify_vars(&[0, 2], 2).is_err());
    }

    #[test]
    fn classify_boolean_majority_and_parity() {
        let r = maj2().classify();
        assert!(r.is_conservative && r.is_idempotent && r.is_d_function && !r.is_l_function);
        assert_eq!(r.projection, None);
        let r = xor3().classify();
        assert!(r.is_conservative && r.is_idempotent && r.is_l_function && !r.is_d_function);
        let r = FiniteFunction::projection(2, 3, 1).unwrap().classify();
        assert_eq!(r.projection, Some(1));
        assert!(r.is_conservative && r.is_idempotent && !r.is_d_function && !r.is_l_function);
    }

    #[test]
    fn symmetric_group_sizes() {
        assert_eq!(Permutation::all(3).len(), 6);
        assert_eq!(Permutation::all(4).len(), 24);
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert!(p.after(&p.inverse()).is_identity());
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
    }

    fn arb_function(k: usize, n: usize) -> impl Strategy<Value = FiniteFunction> {
        let len = table_len(k, n).unwrap();
        proptest::collection::vec(0..k as u8, len).prop_map(move |t| FiniteFunction::new(k, n, t).unwrap())
    }

    proptest! {
        #[test]
        fn conjugation_is_a_clone_automorphism(
            f in arb_function(3, 2),
            g0 in arb_function(3, 3),
            g1 in arb_function(3, 3),
            p in 0usize..6,
        ) {
            let sigma = &Permutation::all(3)[p];
            let lhs = f.compose(&[g0.clone(), g1.clone()]).unwrap().conjugate(sigma).unwrap();
            let rhs = f.conjugate(sigma).unwrap()
                .compose(&[g0.conjugate(sigma).unwrap(), g1.conjugate(sigma).unwrap()]).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conjugation_inverts(f in arb_function(3, 2), p in 0usize..6) {
            let sigma = &Permutation::all(3)[p];
            let back = f.conjugate(sigma).unwrap().conjugate(&sigma.inverse()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn compose_matches_term_evaluation(
            f in arb_function(3, 2),
            g0 in arb_function(3, 2),
            g1 in arb_function(3, 2),
        ) {
            let c = f.compose(&[g0.clone(), g1.clone()]).unwrap();
            for t in all_tuples(2, 3) {
                let inner = [g0.apply(&t).unwrap(), g1.apply(&t).unwrap()];
                prop_assert_eq!(c.apply(&t).unwrap(), f.apply(&inner).unwrap());
            }
        }
    }
}
