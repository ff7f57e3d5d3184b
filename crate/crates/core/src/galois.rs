//! Invariant sets `H ⊆ A^Q` and the `(Inv_Q, Pol_Q)` connection.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::clone::{close_vectors, encode_row, odometer, Closer, GeneratorSet};
use crate::error::{Error, Result};
use crate::func::{check_carrier, decode_into, table_len, FiniteFunction};

/// A set of rows over `Q = 0..m`, each row a function `Q -> A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QSet {
    k: usize,
    m: usize,
    rows: Vec<Vec<u8>>,
}

impl QSet {
    pub fn new(k: usize, m: usize, rows: impl IntoIterator<Item = Vec<u8>>) -> Result<Self> {
        check_carrier(k)?;
        let mut rows: Vec<Vec<u8>> = rows.into_iter().collect();
        for r in &rows {
            if r.len() != m {
                return Err(Error::input(format!("row {r:?} does not have length m={m}")));
            }
            if let Some(&bad) = r.iter().find(|&&x| x as usize >= k) {
                return Err(Error::input(format!("row entry {bad} is not below k={k}")));
            }
        }
        rows.sort();
        rows.dedup();
        Ok(QSet { k, m, rows })
    }

    pub(crate) fn from_sorted_unchecked(k: usize, m: usize, rows: Vec<Vec<u8>>) -> Self {
        QSet { k, m, rows }
    }

    /// All of `A^Q`.
    pub fn full(k: usize, m: usize) -> Result<Self> {
        let n = table_len(k, m).ok_or_else(|| Error::input("k^m overflows"))?;
        QSet::from_codes(k, m, 0..n)
    }

    /// Rows given by their codes below `k^m` (big-endian, like tuples).
    pub fn from_codes(k: usize, m: usize, codes: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = table_len(k, m).ok_or_else(|| Error::input("k^m overflows"))?;
        let mut t = vec![0u8; m];
        let rows = codes
            .into_iter()
            .map(|c| {
                if c >= n {
                    return Err(Error::input(format!("row code {c} out of range")));
                }
                decode_into(c, k, &mut t);
                Ok(t.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        QSet::new(k, m, rows)
    }

    pub(crate) fn from_mask(k: usize, m: usize, mask: u64) -> Self {
        QSet::from_codes(k, m, crate::clone::bits(mask)).expect("mask within k^m")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, row: &[u8]) -> bool {
        self.rows.binary_search_by(|r| r.as_slice().cmp(row)).is_ok()
    }

    pub fn codes(&self) -> Vec<usize> {
        self.rows.iter().map(|r| encode_row(r, self.k)).collect()
    }

    /// Bitmask of row codes when `k^m ≤ 64`.
    pub fn mask(&self) -> Option<u64> {
        table_len(self.k, self.m).filter(|&n| n <= 64)?;
        Some(self.codes().into_iter().fold(0u64, |m, c| m | 1 << c))
    }

    /// `H(q)`, sorted.
    pub fn column(&self, q: usize) -> Vec<u8> {
        let set: BTreeSet<u8> = self.rows.iter().map(|r| r[q]).collect();
        set.into_iter().collect()
    }

    pub fn columns(&self) -> Vec<Vec<u8>> {
        (0..self.m).map(|q| self.column(q)).collect()
    }

    pub fn is_subset(&self, other: &QSet) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn intersect(&self, other: &QSet) -> Result<QSet> {
        self.same_shape(other)?;
        let rows = self.rows.iter().filter(|r| other.contains(r)).cloned().collect();
        Ok(QSet::from_sorted_unchecked(self.k, self.m, rows))
    }

    fn same_shape(&self, other: &QSet) -> Result<()> {
        if self.k != other.k {
            return Err(Error::CarrierMismatch { expected: self.k, found: other.k });
        }
        if self.m != other.m {
            return Err(Error::input(format!("index sets differ: {} vs {}", self.m, other.m)));
        }
        Ok(())
    }
}

/// Whether `f` maps every `n`-tuple of rows of `H` into `H`.
pub fn preserves(f: &FiniteFunction, h: &QSet) -> Result<bool> {
    if f.k() != h.k() {
        return Err(Error::CarrierMismatch { expected: h.k(), found: f.k() });
    }
    if h.is_empty() {
        return Ok(true);
    }
    let n = f.arity();
    let mut choice = vec![0usize; n];
    let mut image = vec![0u8; h.m()];
    loop {
        for (q, v) in image.iter_mut().enumerate() {
            let idx = choice.iter().fold(0, |acc, &c| acc * h.k() + h.rows[c][q] as usize);
            *v = f.table()[idx];
        }
        if !h.contains(&image) {
            return Ok(false);
        }
        if !odometer(&mut choice, h.len()) {
            return Ok(true);
        }
    }
}

/// `H ∈ Inv_Q ⟨gens⟩`: closure under the generators decides invariance
/// under the whole generated clone.
pub fn in_inv(gens: &GeneratorSet, h: &QSet) -> Result<bool> {
    in_inv_with(&Closer::new(gens), h)
}

/// [`in_inv`] reusing the lookup tables of a [`Closer`].
pub fn in_inv_with(closer: &Closer, h: &QSet) -> Result<bool> {
    if closer.k() != h.k() {
        return Err(Error::CarrierMismatch { expected: closer.k(), found: h.k() });
    }
    if h.is_empty() {
        return Ok(true);
    }
    if let Some(mask) = h.mask() {
        if let Some(closed) = closer.is_closed_mask(h.m(), mask) {
            return Ok(closed);
        }
    }
    for g in closer.generators().functions() {
        if !preserves(g, h)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least superset of `h0` closed under the generators.
pub fn invariant_closure(gens: &GeneratorSet, h0: &QSet) -> Result<QSet> {
    invariant_closure_with(&Closer::new(gens), h0)
}

pub fn invariant_closure_with(closer: &Closer, h0: &QSet) -> Result<QSet> {
    if closer.k() != h0.k() {
        return Err(Error::CarrierMismatch { expected: closer.k(), found: h0.k() });
    }
    if h0.is_empty() {
        return Ok(h0.clone());
    }
    if let Some(mask) = h0.mask() {
        if let Some(closed) = closer.close_mask(h0.m(), mask) {
            return Ok(QSet::from_mask(h0.k(), h0.m(), closed));
        }
    }
    let rows = close_vectors(closer.generators().functions(), h0.k(), h0.rows.clone(), usize::MAX, h0.m())?;
    QSet::new(h0.k(), h0.m(), rows)
}

/// Default bound on `k^m` for [`enumerate_inv`].
pub const DEFAULT_CELL_CAP: usize = 16;

/// Every nonempty invariant `H ⊆ A^m`, canonically ordered.
pub fn enumerate_inv(gens: &GeneratorSet, m: usize, cell_cap: usize) -> Result<Vec<QSet>> {
    use rayon::prelude::*;
    let k = gens.k();
    let n = table_len(k, m).unwrap_or(usize::MAX);
    if n > cell_cap || n > 20 {
        return Err(Error::Capacity { arity: m, reached: n, cap: cell_cap.min(20) });
    }
    let closer = Closer::new(gens);
    let subsets: Vec<u64> = (1u64..(1u64 << n)).collect();
    let mut out: Vec<QSet> = subsets
        .par_iter()
        .filter(|&&s| closer.is_closed_mask(m, s).expect("k^m ≤ 20"))
        .map(|&s| QSet::from_mask(k, m, s))
        .collect();
    out.sort();
    Ok(out)
}

/// All functions of arity `1..=max_arity` preserving every set in `hs`.
pub fn pol_bounded(k: usize, hs: &[QSet], max_arity: usize, cap: usize) -> Result<crate::clone::FunctionSet> {
    check_carrier(k)?;
    if let Some(h) = hs.iter().find(|h| h.k() != k) {
        return Err(Error::CarrierMismatch { expected: k, found: h.k() });
    }
    let mut out = Vec::new();
    for n in 1..=max_arity {
        let len = table_len(k, n).ok_or_else(|| Error::input("k^n overflows"))?;
        let count = u32::try_from(len)
            .ok()
            .and_then(|l| k.checked_pow(l))
            .filter(|c| c.saturating_mul(len) <= cap)
            .ok_or(Error::Capacity { arity: n, reached: usize::MAX, cap })?;
        let mut table = vec![0usize; len];
        for _ in 0..count {
            let f = FiniteFunction::new(k, n, table.iter().map(|&x| x as u8).collect())?;
            if hs.iter().try_fold(true, |ok, h| Ok::<_, Error>(ok && preserves(&f, h)?))? {
                out.push(f);
            }
            odometer(&mut table, k);
        }
    }
    crate::clone::FunctionSet::new(k, None, out)
}

/// `{h∘f : h ∈ H}` for `f: P -> Q`, given as the list of images.
pub fn reindex(h: &QSet, f: &[usize]) -> Result<QSet> {
    if let Some(&bad) = f.iter().find(|&&q| q >= h.m()) {
        return Err(Error::input(format!("index {bad} is outside Q of size {}", h.m())));
    }
    QSet::new(h.k(), f.len(), h.rows.iter().map(|r| f.iter().map(|&q| r[q]).collect()))
}

fn check_subset(p: &[usize], m: usize) -> Result<Vec<usize>> {
    let mut sorted = p.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != p.len() || sorted.iter().any(|&q| q >= m) {
        return Err(Error::input(format!("{p:?} is not a subset of 0..{m}")));
    }
    Ok(sorted)
}

/// `H|_P`, with the coordinates of `P` in increasing order.
pub fn restrict_qset(h: &QSet, p: &[usize]) -> Result<QSet> {
    let p = check_subset(p, h.m())?;
    reindex(h, &p)
}

/// The cylinder `{g ∈ A^Q : g|_P ∈ Hp}` where `Hp` has coordinates `p`
/// (increasing) and `Q = 0..m`.
pub fn extend_qset(hp: &QSet, p: &[usize], m: usize) -> Result<QSet> {
    let p = check_subset(p, m)?;
    if p.len() != hp.m() {
        return Err(Error::input(format!("P has {} positions but Hp has width {}", p.len(), hp.m())));
    }
    let k = hp.k();
    let free: Vec<usize> = (0..m).filter(|q| !p.contains(q)).collect();
    let free_count = table_len(k, free.len()).ok_or_else(|| Error::input("k^m overflows"))?;
    let mut rows = Vec::with_capacity(hp.len() * free_count);
    let mut fill = vec![0u8; free.len()];
    for r in hp.rows() {
        for c in 0..free_count {
            decode_into(c, k, &mut fill);
            let mut row = vec![0u8; m];
            for (i, &q) in p.iter().enumerate() {
                row[q] = r[i];
            }
            for (i, &q) in free.iter().enumerate() {
                row[q] = fill[i];
            }
            rows.push(row);
        }
    }
    QSet::new(k, m, rows)
}

/// Rows shared by every set.
pub fn intersect_all(sets: &[QSet]) -> Result<Option<QSet>> {
    let Some(first) = sets.first() else { return Ok(None) };
    let mut acc: HashSet<&Vec<u8>> = first.rows.iter().collect();
    for s in &sets[1..] {
        first.same_shape(s)?;
        acc.retain(|r| s.contains(r));
    }
    Ok(Some(QSet::new(first.k, first.m, acc.into_iter().cloned())?))
}
