//! Per-arity clone slices generated from finite generator sets.
//!
//! Every subterm of an `m`-ary term over the generators is itself `m`-ary,
//! so `F_[m]` is the least set of `m`-ary functions containing the
//! projections and closed under cellwise application of each generator.
//! Because application is cellwise, the same fixpoint can be run on the
//! values at any subset of cells and stays exact.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{check_carrier, decode_into, table_len, FiniteFunction, Permutation};

/// Default budget for a single closure, in stored table entries.
pub const DEFAULT_CAP: usize = 2_000_000;

/// A deduplicated, canonically ordered list of generators on one carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    k: usize,
    gens: Vec<FiniteFunction>,
}

impl GeneratorSet {
    pub fn new(k: usize, gens: impl IntoIterator<Item = FiniteFunction>) -> Result<Self> {
        check_carrier(k)?;
        let mut gens: Vec<FiniteFunction> = gens.into_iter().collect();
        if let Some(g) = gens.iter().find(|g| g.k() != k) {
            return Err(Error::CarrierMismatch { expected: k, found: g.k() });
        }
        gens.sort();
        gens.dedup();
        Ok(GeneratorSet { k, gens })
    }

    pub fn empty(k: usize) -> Result<Self> {
        GeneratorSet::new(k, [])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn functions(&self) -> &[FiniteFunction] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.gens.iter().map(FiniteFunction::arity).max().unwrap_or(0)
    }

    pub fn all_conservative(&self) -> bool {
        self.gens.iter().all(FiniteFunction::is_conservative)
    }

    /// Drops projections; they never change a closure.
    pub fn without_projections(&self) -> GeneratorSet {
        GeneratorSet { k: self.k, gens: self.gens.iter().filter(|g| g.is_projection().is_none()).cloned().collect() }
    }

    pub fn union(&self, other: &GeneratorSet) -> Result<GeneratorSet> {
        GeneratorSet::new(self.k, self.gens.iter().chain(other.gens.iter()).cloned())
    }

    /// Restriction of every generator to `subset`, re-indexed along the
    /// order-preserving bijection `subset -> 0..|subset|`.
    pub fn restrict(&self, subset: &[u8]) -> Result<GeneratorSet> {
        let map = SubsetMap::new(self.k, subset)?;
        let gens = self.gens.iter().map(|g| map.restrict(g)).collect::<Result<Vec<_>>>()?;
        GeneratorSet::new(subset.len(), gens)
    }
}

/// Order-preserving bijection between a subset of the carrier and `0..|B|`.
pub(crate) struct SubsetMap {
    k: usize,
    elems: Vec<u8>,
    back: Vec<Option<u8>>,
}

impl SubsetMap {
    pub(crate) fn new(k: usize, subset: &[u8]) -> Result<Self> {
        let mut elems = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.len() != subset.len() || elems.len() < 2 {
            return Err(Error::input(format!("{subset:?} is not a subset of at least 2 distinct elements")));
        }
        if elems.iter().any(|&x| x as usize >= k) {
            return Err(Error::input(format!("{subset:?} is not contained in 0..{k}")));
        }
        let mut back = vec![None; k];
        for (i, &x) in elems.iter().enumerate() {
            back[x as usize] = Some(i as u8);
        }
        Ok(SubsetMap { k, elems, back })
    }

    pub(crate) fn restrict(&self, f: &FiniteFunction) -> Result<FiniteFunction> {
        if f.k() != self.k {
            return Err(Error::CarrierMismatch { expected: self.k, found: f.k() });
        }
        let kb = self.elems.len();
        let mut failed = None;
        let g = FiniteFunction::from_fn(kb, f.arity(), |t| {
            let idx = t.iter().fold(0, |acc, &a| acc * self.k + self.elems[a as usize] as usize);
            let v = f.at(idx);
            match self.back[v as usize] {
                Some(w) => w,
                None => {
                    failed.get_or_insert_with(|| t.to_vec());
                    0
                }
            }
        })?;
        match failed {
            Some(t) => Err(Error::input(format!(
                "{f:?} maps a tuple over {:?} (reindexed {t:?}) outside the subset",
                self.elems
            ))),
            None => Ok(g),
        }
    }
}

/// Least superset of `seeds` closed under cellwise application of every
/// generator. All vectors have the same width; the result is in discovery
/// order (seeds first).
pub(crate) fn close_vectors(
    gens: &[FiniteFunction],
    k: usize,
    seeds: Vec<Vec<u8>>,
    cap: usize,
    arity_tag: usize,
) -> Result<Vec<Vec<u8>>> {
    let width = seeds.first().map_or(0, Vec::len);
    let mut seen: HashSet<Vec<u8>> = HashSet::with_capacity(seeds.len() * 2);
    let mut members: Vec<Vec<u8>> = Vec::with_capacity(seeds.len());
    for s in seeds {
        if seen.insert(s.clone()) {
            members.push(s);
        }
    }
    let check_cap = |n: usize| -> Result<()> {
        let reached = n.saturating_mul(width.max(1));
        if reached > cap {
            Err(Error::Capacity { arity: arity_tag, reached, cap })
        } else {
            Ok(())
        }
    };
    check_cap(members.len())?;

    let mut fresh: Vec<Vec<u8>> = Vec::new();
    let mut i = 0;
    while i < members.len() {
        for g in gens {
            let n = g.arity();
            let mut acc = vec![vec![0usize; width]; n + 1];
            let mut choice = vec![0usize; n];
            // Depth-first over tuples in [0..=i]^n that use i at least once.
            enumerate_tuples_with_max(i, n, &mut choice, 0, false, &mut |depth, idx| {
                let (lo, hi) = acc.split_at_mut(depth + 1);
                let prev = &lo[depth];
                let next = &mut hi[0];
                let row = &members[idx];
                for c in 0..width {
                    next[c] = prev[c] * k + row[c] as usize;
                }
                if depth + 1 == n {
                    let image: Vec<u8> = next.iter().map(|&x| g.at(x)).collect();
                    if !seen.contains(&image) {
                        seen.insert(image.clone());
                        fresh.push(image);
                    }
                }
            });
        }
        if !fresh.is_empty() {
            members.append(&mut fresh);
            check_cap(members.len())?;
        }
        i += 1;
    }
    Ok(members)
}

/// Visits every tuple over `0..=max` of length `n` containing `max`,
/// calling `visit(depth, value)` when position `depth` is fixed.
fn enumerate_tuples_with_max(
    max: usize,
    n: usize,
    choice: &mut [usize],
    depth: usize,
    used: bool,
    visit: &mut impl FnMut(usize, usize),
) {
    if depth == n {
        return;
    }
    let last = depth + 1 == n;
    let range = if last && !used { max..=max } else { 0..=max };
    for v in range {
        choice[depth] = v;
        visit(depth, v);
        if !last {
            enumerate_tuples_with_max(max, n, choice, depth + 1, used || v == max, visit);
        }
    }
}

/// The `m`-ary slice of a generated clone, possibly projected to a subset of
/// cells. Members are value vectors aligned with `cells`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub k: usize,
    pub arity: usize,
    pub cells: Vec<usize>,
    pub members: Vec<Vec<u8>>,
}

impl Slice {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Value vector of the projection `e_i` on this slice's cells.
    pub fn projection_trace(&self, i: usize) -> Vec<u8> {
        let mut t = vec![0u8; self.arity];
        self.cells
            .iter()
            .map(|&c| {
                decode_into(c, self.k, &mut t);
                t[i]
            })
            .collect()
    }

    pub fn is_full(&self) -> bool {
        table_len(self.k, self.arity) == Some(self.cells.len())
    }

    /// Materializes members as functions; only valid for unprojected slices.
    pub fn functions(&self) -> Result<Vec<FiniteFunction>> {
        if !self.is_full() {
            return Err(Error::input("slice is projected to a subset of cells"));
        }
        Ok(self.members.iter().map(|t| FiniteFunction::from_parts_unchecked(self.k, self.arity, t.clone())).collect())
    }
}

/// `F_[m]` for the clone generated by `gens`, optionally projected to `cells`.
pub fn slice(gens: &GeneratorSet, m: usize, cells: Option<&[usize]>, cap: usize) -> Result<Slice> {
    if m == 0 {
        return Err(Error::input("slice arity must be at least 1"));
    }
    let k = gens.k();
    let len = table_len(k, m).ok_or_else(|| Error::input("k^m overflows"))?;
    let cells: Vec<usize> = match cells {
        Some(cs) => {
            if let Some(&bad) = cs.iter().find(|&&c| c >= len) {
                return Err(Error::input(format!("cell {bad} out of range for arity {m}")));
            }
            cs.to_vec()
        }
        None => (0..len).collect(),
    };
    let mut t = vec![0u8; m];
    let seeds: Vec<Vec<u8>> = (0..m)
        .map(|i| {
            cells
                .iter()
                .map(|&c| {
                    decode_into(c, k, &mut t);
                    t[i]
                })
                .collect()
        })
        .collect();
    let gens = gens.without_projections();
    let mut members = close_vectors(gens.functions(), k, seeds, cap, m)?;
    members.sort();
    Ok(Slice { k, arity: m, cells, members })
}

/// Arity-graded, canonically ordered set of functions on one carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSet {
    k: usize,
    closed_up_to: Option<usize>,
    slices: BTreeMap<usize, Vec<FiniteFunction>>,
}

impl FunctionSet {
    pub fn new(
        k: usize,
        closed_up_to: Option<usize>,
        functions: impl IntoIterator<Item = FiniteFunction>,
    ) -> Result<Self> {
        check_carrier(k)?;
        let mut slices: BTreeMap<usize, Vec<FiniteFunction>> = BTreeMap::new();
        for f in functions {
            if f.k() != k {
                return Err(Error::CarrierMismatch { expected: k, found: f.k() });
            }
            slices.entry(f.arity()).or_default().push(f);
        }
        for v in slices.values_mut() {
            v.sort();
            v.dedup();
        }
        Ok(FunctionSet { k, closed_up_to, slices })
    }

    /// All slices `F_[1..=bound]` of the clone generated by `gens`.
    pub fn generate(gens: &GeneratorSet, bound: usize, cap: usize) -> Result<Self> {
        let mut fs = Vec::new();
        for m in 1..=bound {
            fs.extend(slice(gens, m, None, cap)?.functions()?);
        }
        FunctionSet::new(gens.k(), Some(bound), fs)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn closed_up_to(&self) -> Option<usize> {
        self.closed_up_to
    }

    pub fn arity_slice(&self, n: usize) -> &[FiniteFunction] {
        self.slices.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = &FiniteFunction> {
        self.slices.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.slices.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn require_closed(&self, n: usize) -> Result<()> {
        match self.closed_up_to {
            Some(b) if n <= b => Ok(()),
            _ => Err(Error::NotClosed(n)),
        }
    }

    pub fn contains(&self, f: &FiniteFunction) -> Result<bool> {
        if f.k() != self.k {
            return Err(Error::CarrierMismatch { expected: self.k, found: f.k() });
        }
        self.require_closed(f.arity())?;
        Ok(self.arity_slice(f.arity()).binary_search(f).is_ok())
    }

    /// `F|_{B^{<ω}}` re-indexed onto `0..|B|`.
    pub fn restrict_carrier(&self, subset: &[u8]) -> Result<FunctionSet> {
        let map = SubsetMap::new(self.k, subset)?;
        let fs = self.iter().map(|f| map.restrict(f)).collect::<Result<Vec<_>>>()?;
        FunctionSet::new(subset.len(), self.closed_up_to, fs)
    }

    pub fn to_generators(&self) -> GeneratorSet {
        GeneratorSet { k: self.k, gens: self.iter().cloned().collect() }
    }
}

/// `r(F)` as far as a finite arity bound can tell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArityVerdict {
    /// Least arity of a non-projection.
    Finite(usize),
    /// Only projections up to `value - 1`.
    AtLeast(usize),
}

impl ArityVerdict {
    pub fn finite(self) -> Option<usize> {
        match self {
            ArityVerdict::Finite(r) => Some(r),
            ArityVerdict::AtLeast(_) => None,
        }
    }

    /// Whether `r ≥ n` is certain.
    pub fn at_least(self, n: usize) -> bool {
        match self {
            ArityVerdict::Finite(r) => r >= n,
            ArityVerdict::AtLeast(b) => b >= n,
        }
    }
}

/// Whether `F_[m]` consists of projections only: the projections are closed
/// under every generator.
pub fn only_projections(gens: &GeneratorSet, m: usize) -> Result<bool> {
    let k = gens.k();
    let len = table_len(k, m).ok_or_else(|| Error::input("k^m overflows"))?;
    let projections: Vec<Vec<u8>> =
        (0..m).map(|i| FiniteFunction::projection(k, m, i).map(FiniteFunction::into_table)).collect::<Result<_>>()?;
    for g in gens.functions() {
        let n = g.arity();
        let mut choice = vec![0usize; n];
        loop {
            let image: Vec<u8> =
                (0..len).map(|c| g.at(choice.iter().fold(0, |acc, &p| acc * k + projections[p][c] as usize))).collect();
            if !projections.contains(&image) {
                return Ok(false);
            }
            // odometer over [0..m)^n
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < m {
                    break;
                }
                choice[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    Ok(true)
}

pub fn min_nonprojection_arity(gens: &GeneratorSet, bound: usize) -> Result<ArityVerdict> {
    if bound < 2 {
        return Err(Error::input("arity bound must be at least 2"));
    }
    for m in 1..=bound {
        if !only_projections(gens, m)? {
            return Ok(ArityVerdict::Finite(m));
        }
    }
    Ok(ArityVerdict::AtLeast(bound + 1))
}

/// `gens ∪ {g_σ : g ∈ gens, σ ∈ S_A}`.
pub fn symmetric_closure(gens: &GeneratorSet) -> GeneratorSet {
    let perms = Permutation::all(gens.k());
    let all = gens.functions().iter().flat_map(|g| perms.iter().map(move |s| g.conjugate(s).expect("same carrier")));
    GeneratorSet::new(gens.k(), all).expect("same carrier")
}

/// Whether the generated clone is closed under conjugation: every
/// conjugate of every generator lies in the corresponding slice.
pub fn is_symmetric(gens: &GeneratorSet, cap: usize) -> Result<bool> {
    let perms = Permutation::all(gens.k());
    let mut by_arity: BTreeMap<usize, HashSet<Vec<u8>>> = BTreeMap::new();
    for g in gens.functions() {
        if let std::collections::btree_map::Entry::Vacant(e) = by_arity.entry(g.arity()) {
            let s = slice(gens, g.arity(), None, cap)?;
            e.insert(s.members.into_iter().collect());
        }
        let members = &by_arity[&g.arity()];
        for s in &perms {
            if !members.contains(g.conjugate(s)?.table()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `𝒞(A)_[m]`: every function with `f(a) ∈ ran a`.
pub fn conservative_slice(k: usize, m: usize, cap: usize) -> Result<FunctionSet> {
    check_carrier(k)?;
    let len = table_len(k, m).ok_or_else(|| Error::input("k^m overflows"))?;
    let mut t = vec![0u8; m];
    let options: Vec<Vec<u8>> = (0..len)
        .map(|c| {
            decode_into(c, k, &mut t);
            let mut r = t.clone();
            r.sort_unstable();
            r.dedup();
            r
        })
        .collect();
    let count = options.iter().try_fold(1usize, |acc, o| acc.checked_mul(o.len()));
    let reached = count.and_then(|c| c.checked_mul(len)).unwrap_or(usize::MAX);
    if reached > cap {
        return Err(Error::Capacity { arity: m, reached, cap });
    }
    let mut digits = vec![0usize; len];
    let mut out = Vec::with_capacity(count.unwrap_or(0));
    loop {
        let table: Vec<u8> = digits.iter().zip(&options).map(|(&d, o)| o[d]).collect();
        out.push(FiniteFunction::from_parts_unchecked(k, m, table));
        let mut pos = len;
        loop {
            if pos == 0 {
                return FunctionSet::new(k, (m == 1).then_some(m), out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < options[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Whether `f ↦ σ∘f∘σ⁻¹` maps `F_[n]` onto `G_[n]` for every `n ≤ bound`.
pub fn is_natural_isomorphism(sigma: &[u8], from: &FunctionSet, to: &FunctionSet, bound: usize) -> Result<bool> {
    from.require_closed(bound)?;
    to.require_closed(bound)?;
    if sigma.len() != from.k() || from.k() != to.k() {
        return Ok(false);
    }
    let sigma = Permutation::new(sigma.to_vec())?;
    // σ(f(a)) = τ(f)(σ(a))  ⇔  τ(f) = f conjugated by σ⁻¹
    let inv = sigma.inverse();
    for n in 1..=bound {
        let mut image = from.arity_slice(n).iter().map(|f| f.conjugate(&inv)).collect::<Result<Vec<_>>>()?;
        image.sort();
        if image.as_slice() != to.arity_slice(n) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest cell-tuple table built per generator arity.
const MASK_TABLE_LIMIT: usize = 1 << 22;

/// Reusable row-closure engine for one generator set.
///
/// For a width `w` with `k^w ≤ 64`, rows are codes below `k^w` and a set of
/// rows is a `u64` bitmask. For every generator arity `n` a table maps each
/// `w`-tuple of `n`-ary cells to the union of the images of all generators
/// of that arity, so closing a set costs one lookup per tuple of rows no
/// matter how many generators there are. Tables are built lazily per width.
pub struct Closer {
    gens: GeneratorSet,
    tables: Vec<std::sync::OnceLock<Option<MaskTable>>>,
}

struct ArityTable {
    n: usize,
    masks: Vec<u64>,
    /// `spread[p][row]` is the contribution of `row` in argument position
    /// `p` to the cell-tuple index.
    spread: Vec<Vec<usize>>,
}

struct MaskTable {
    by_arity: Vec<ArityTable>,
}

impl Closer {
    pub fn new(gens: &GeneratorSet) -> Self {
        Closer {
            gens: gens.without_projections(),
            tables: (0..=MAX_MASK_WIDTH).map(|_| std::sync::OnceLock::new()).collect(),
        }
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn k(&self) -> usize {
        self.gens.k()
    }

    fn table(&self, w: usize) -> Option<&MaskTable> {
        self.tables.get(w)?.get_or_init(|| MaskTable::build(&self.gens, w)).as_ref()
    }

    /// Whether rows of width `w` fit the mask representation.
    pub fn supports(&self, w: usize) -> bool {
        self.table(w).is_some()
    }

    /// Least superset of `rows` (codes of width `w`) closed under the
    /// generators; `None` when the width is unsupported.
    pub fn close_mask(&self, w: usize, rows: u64) -> Option<u64> {
        let table = self.table(w)?;
        let mut mask = rows;
        let mut members: Vec<usize> = bits(rows).collect();
        let mut i = 0;
        while i < members.len() {
            for at in &table.by_arity {
                let mut found = 0u64;
                for_tuples_with_max(i, at.n, |choice| {
                    let idx: usize = choice.iter().enumerate().map(|(p, &c)| at.spread[p][members[c]]).sum();
                    found |= at.masks[idx];
                });
                let fresh = found & !mask;
                if fresh != 0 {
                    mask |= fresh;
                    members.extend(bits(fresh));
                }
            }
            i += 1;
        }
        Some(mask)
    }

    /// Whether the row set is closed; `None` when the width is unsupported.
    pub fn is_closed_mask(&self, w: usize, rows: u64) -> Option<bool> {
        let table = self.table(w)?;
        let members: Vec<usize> = bits(rows).collect();
        if members.is_empty() {
            return Some(true);
        }
        for at in &table.by_arity {
            let mut choice = vec![0usize; at.n];
            loop {
                let idx: usize = choice.iter().enumerate().map(|(p, &c)| at.spread[p][members[c]]).sum();
                if at.masks[idx] & !rows != 0 {
                    return Some(false);
                }
                if !odometer(&mut choice, members.len()) {
                    break;
                }
            }
        }
        Some(true)
    }

    /// Closure of a set of equal-width value vectors, using the mask tables
    /// when possible and the generic engine otherwise.
    pub fn close_vectors(&self, seeds: Vec<Vec<u8>>, cap: usize, arity_tag: usize) -> Result<Vec<Vec<u8>>> {
        let k = self.k();
        let w = seeds.first().map_or(0, Vec::len);
        if w > 0 && self.supports(w) {
            let mask = seeds.iter().fold(0u64, |m, s| m | 1 << encode_row(s, k));
            let closed = self.close_mask(w, mask).expect("supported width");
            let mut out: Vec<Vec<u8>> = bits(closed)
                .map(|c| {
                    let mut t = vec![0u8; w];
                    decode_into(c, k, &mut t);
                    t
                })
                .collect();
            out.sort();
            return Ok(out);
        }
        close_vectors(self.gens.functions(), k, seeds, cap, arity_tag)
    }
}

/// Widest row for the mask representation (`2^6 = 64`).
const MAX_MASK_WIDTH: usize = 6;

impl MaskTable {
    fn build(gens: &GeneratorSet, w: usize) -> Option<MaskTable> {
        use rayon::prelude::*;
        let k = gens.k();
        let rows = table_len(k, w).filter(|&r| r <= 64)?;
        if w == 0 {
            return None;
        }
        let mut arities: Vec<usize> = gens.functions().iter().map(FiniteFunction::arity).collect();
        arities.dedup();
        let mut by_arity = Vec::new();
        for n in arities {
            let cells = table_len(k, n)?;
            let size = cells.checked_pow(w as u32).filter(|&s| s <= MASK_TABLE_LIMIT)?;
            let of_arity: Vec<&FiniteFunction> = gens.functions().iter().filter(|g| g.arity() == n).collect();
            let masks: Vec<u64> = (0..size)
                .into_par_iter()
                .map(|t| {
                    // t = Σ_q cell_q · cells^(w-1-q)
                    let mut cellv = [0usize; MAX_MASK_WIDTH];
                    let mut x = t;
                    for q in (0..w).rev() {
                        cellv[q] = x % cells;
                        x /= cells;
                    }
                    of_arity.iter().fold(0u64, |m, g| {
                        let code = cellv[..w].iter().fold(0, |acc, &c| acc * k + g.at(c) as usize);
                        m | 1 << code
                    })
                })
                .collect();
            let mut digits = vec![0u8; w];
            let spread = (0..n)
                .map(|p| {
                    let weight = k.pow((n - 1 - p) as u32);
                    (0..rows)
                        .map(|r| {
                            decode_into(r, k, &mut digits);
                            digits.iter().fold(0, |acc, &d| acc * cells + d as usize * weight)
                        })
                        .collect()
                })
                .collect();
            by_arity.push(ArityTable { n, masks, spread });
        }
        Some(MaskTable { by_arity })
    }
}

pub(crate) fn encode_row(row: &[u8], k: usize) -> usize {
    row.iter().fold(0, |acc, &x| acc * k + x as usize)
}

/// Set bits of a mask, lowest first.
pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// Advances a base-`radix` counter; false after the last value.
pub(crate) fn odometer(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Calls `visit` on every tuple in `[0..=max]^n` that contains `max`.
pub(crate) fn for_tuples_with_max(max: usize, n: usize, mut visit: impl FnMut(&[usize])) {
    let mut choice = vec![0usize; n];
    // `j` is the first position holding `max`.
    for j in 0..n {
        // positions < j range over [0, max), j is max, > j range over [0, max]
        if j > 0 && max == 0 {
            break;
        }
        for c in choice.iter_mut() {
            *c = 0;
        }
        choice[j] = max;
        loop {
            visit(&choice);
            let mut pos = n;
            let mut advanced = false;
            while pos > 0 {
                pos -= 1;
                if pos == j {
                    continue;
                }
                let bound = if pos < j { max } else { max + 1 };
                choice[pos] += 1;
                if choice[pos] < bound {
                    advanced = true;
                    break;
                }
                choice[pos] = 0;
            }
            if !advanced {
                break;
            }
        }
    }
}
