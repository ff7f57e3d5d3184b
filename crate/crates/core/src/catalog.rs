//! Named conservative clones used as worked examples and test inputs.

use serde::Serialize;

use crate::clone::{symmetric_closure, GeneratorSet};
use crate::conditions::{klein_binary, uv_pair};
use crate::error::{Error, Result};
use crate::func::{all_tuples, majority_minority, tuple_rank, FiniteFunction};
use crate::post::{class_generators, PostClassId};

/// A Δ-condition a catalog clone is expected to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaKind {
    S(usize),
    Partial,
    Two,
    /// `Δ²` for the restriction to every 3-subset.
    TwoOnTriples,
}

#[derive(Clone, Debug)]
pub struct CloneCatalogEntry {
    pub name: String,
    pub gens: GeneratorSet,
    pub expected_case: usize,
    pub delta: Vec<DeltaKind>,
}

/// Serializable summary of an entry.
#[derive(Clone, Debug, Serialize)]
pub struct EntrySummary {
    pub name: String,
    pub k: usize,
    pub generators: usize,
    pub expected_case: usize,
    pub delta: Vec<DeltaKind>,
}

impl CloneCatalogEntry {
    fn new(name: &str, gens: GeneratorSet, expected_case: usize, delta: Vec<DeltaKind>) -> Self {
        CloneCatalogEntry { name: name.into(), gens, expected_case, delta }
    }

    pub fn summary(&self) -> EntrySummary {
        EntrySummary {
            name: self.name.clone(),
            k: self.gens.k(),
            generators: self.gens.len(),
            expected_case: self.expected_case,
            delta: self.delta.clone(),
        }
    }
}

/// Ternary conservative `ℓ`-functions: `ℓ(x,y,y) = ℓ(y,x,y) = ℓ(y,y,x) = x`.
/// On three elements there are `3^6` of them (free on the rank-3 cells).
pub fn l_functions(k: usize) -> Result<GeneratorSet> {
    if !(2..=3).contains(&k) {
        return Err(Error::input("ℓ-functions are listed for k ∈ {2, 3}"));
    }
    let cells: Vec<Vec<u8>> = all_tuples(3, k);
    let free: Vec<usize> = (0..cells.len()).filter(|&c| tuple_rank(&cells[c]) == 3).collect();
    let base: Vec<u8> = cells.iter().map(|t| majority_minority(t).map_or(t[0], |(_, min)| min)).collect();
    let mut out = Vec::new();
    let mut digits = vec![0usize; free.len()];
    loop {
        let mut table = base.clone();
        for (d, &c) in digits.iter().zip(&free) {
            table[c] = cells[c][*d];
        }
        out.push(FiniteFunction::new(k, 3, table)?);
        if !crate::clone::odometer(&mut digits, 3) {
            break;
        }
    }
    GeneratorSet::new(k, out)
}

/// All binary conservative functions.
pub fn binary_conservative(k: usize) -> Result<GeneratorSet> {
    if !(2..=4).contains(&k) {
        return Err(Error::input("binary conservative functions are listed for k ∈ {2, 3, 4}"));
    }
    let off = k * k - k;
    let mut out = Vec::with_capacity(1 << off);
    for bits in 0..1u32 << off {
        let mut i = 0;
        out.push(FiniteFunction::from_fn(k, 2, |t| {
            if t[0] == t[1] {
                return t[0];
            }
            let v = t[(bits >> i & 1) as usize];
            i += 1;
            v
        })?);
    }
    GeneratorSet::new(k, out)
}

/// The six non-projection binary Klein `O_1`-functions on four elements.
pub fn klein_generators() -> GeneratorSet {
    let gens = (0..8u8).map(|c| klein_binary([c & 1, c >> 1 & 1, c >> 2 & 1])).filter(|f| f.is_projection().is_none());
    GeneratorSet::new(4, gens).expect("carrier 4")
}

/// `{u, v}` closed under conjugation.
pub fn uv_symmetric() -> GeneratorSet {
    let (u, v) = uv_pair(3).expect("k = 3");
    symmetric_closure(&GeneratorSet::new(3, [u, v]).expect("carrier 3"))
}

/// Majority on rank-≤2 cells and the first argument on rank-3 cells.
pub fn partial_generator(k: usize) -> Result<FiniteFunction> {
    FiniteFunction::from_fn(k, 3, |t| majority_minority(t).map_or(t[0], |(maj, _)| maj))
}

/// A 4-ary function that is `e_0` below rank 4 and `e_1` on rank-4 cells.
pub fn rank4_generator() -> FiniteFunction {
    FiniteFunction::from_fn(4, 4, |t| if tuple_rank(t) == 4 { t[1] } else { t[0] }).expect("valid table")
}

/// Catalog clones with their expected case and Δ-profile.
pub fn builtin_catalog(k: usize) -> Result<Vec<CloneCatalogEntry>> {
    use DeltaKind::*;
    let entry = CloneCatalogEntry::new;
    match k {
        2 => PostClassId::NAMED
            .iter()
            .map(|id| {
                let (case, delta) = match id {
                    PostClassId::O1 => (1, vec![]),
                    PostClassId::L4 => (3, vec![S(3)]),
                    PostClassId::D1 | PostClassId::D2 => (2, vec![Partial]),
                    _ => (4, vec![Two]),
                };
                Ok(entry(id.name(), class_generators(id)?, case, delta))
            })
            .collect(),
        3 => Ok(vec![
            entry("E", GeneratorSet::empty(3)?, 1, vec![]),
            entry("L", l_functions(3)?, 3, vec![S(3)]),
            entry("uv", uv_symmetric(), 6, vec![Partial]),
            entry("binary", binary_conservative(3)?, 4, vec![Two]),
            entry("partial", symmetric_closure(&GeneratorSet::new(3, [partial_generator(3)?])?), 2, vec![Partial]),
        ]),
        4 => Ok(vec![
            entry("E", GeneratorSet::empty(4)?, 1, vec![]),
            entry("klein", klein_generators(), 5, vec![S(3), TwoOnTriples]),
            entry("rank4", symmetric_closure(&GeneratorSet::new(4, [rank4_generator()])?), 1, vec![S(4)]),
        ]),
        _ => Err(Error::input(format!("no catalog for k = {k}"))),
    }
}

/// Looks an entry up as `<k>/<name>` or `<name>` (searching k = 2, 3, 4).
pub fn lookup(spec: &str) -> Result<CloneCatalogEntry> {
    let (ks, name) = match spec.split_once('/') {
        Some((k, name)) => (vec![k.parse().map_err(|_| Error::input(format!("bad carrier in {spec:?}")))?], name),
        None => (vec![2, 3, 4], spec),
    };
    for k in ks {
        if let Some(e) = builtin_catalog(k)?.into_iter().find(|e| e.name == name) {
            return Ok(e);
        }
    }
    Err(Error::input(format!("no catalog entry {spec:?}")))
}
