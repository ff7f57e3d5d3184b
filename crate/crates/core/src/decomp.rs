//! Decompositions `H_(𝓡)`, the derived index families, and separation.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::{decode_into, table_len};
use crate::galois::{restrict_qset, QSet};

/// Largest cube `A^Q` enumerated when intersecting cylinders.
const CUBE_LIMIT: usize = 1 << 22;

/// A family of subsets of `Q = 0..m`, canonically ordered.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetFamily {
    m: usize,
    sets: Vec<Vec<usize>>,
}

impl SubsetFamily {
    /// Rejects the empty set, whose cylinder is the whole cube.
    pub fn new(m: usize, sets: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        SubsetFamily::build(m, sets, false)
    }

    pub fn with_empty(m: usize, sets: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        SubsetFamily::build(m, sets, true)
    }

    fn build(m: usize, sets: impl IntoIterator<Item = Vec<usize>>, allow_empty: bool) -> Result<Self> {
        let mut out = Vec::new();
        for mut s in sets {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() && !allow_empty {
                return Err(Error::input("empty subset in family"));
            }
            if let Some(&bad) = s.iter().find(|&&q| q >= m) {
                return Err(Error::input(format!("position {bad} outside Q of size {m}")));
            }
            out.push(s);
        }
        out.sort();
        out.dedup();
        Ok(SubsetFamily { m, sets: out })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `[Q]^1`.
    pub fn singletons(m: usize) -> Self {
        SubsetFamily { m, sets: (0..m).map(|q| vec![q]).collect() }
    }

    /// Union of families over the same `Q`, dropping empty members.
    pub fn union(m: usize, parts: &[&[Vec<usize>]]) -> Result<Self> {
        SubsetFamily::new(m, parts.iter().flat_map(|p| p.iter()).filter(|s| !s.is_empty()).cloned())
    }
}

fn check_family(h: &QSet, fam: &SubsetFamily) -> Result<()> {
    if fam.m() != h.m() {
        return Err(Error::input(format!("family is over Q of size {}, set over {}", fam.m(), h.m())));
    }
    if fam.is_empty() {
        return Err(Error::input("empty family"));
    }
    Ok(())
}

/// `⋂ H_(𝓡)`: rows `g` of `A^Q` with `g|_R ∈ H|_R` for every `R`.
pub fn decomposition_intersection(h: &QSet, fam: &SubsetFamily) -> Result<QSet> {
    check_family(h, fam)?;
    let k = h.k();
    let m = h.m();
    let cube = table_len(k, m).filter(|&c| c <= CUBE_LIMIT).ok_or(Error::Capacity {
        arity: m,
        reached: usize::MAX,
        cap: CUBE_LIMIT,
    })?;
    let parts: Vec<(&Vec<usize>, HashSet<Vec<u8>>)> = fam
        .sets()
        .iter()
        .map(|r| (r, h.rows().iter().map(|row| r.iter().map(|&q| row[q]).collect()).collect()))
        .collect();
    let mut t = vec![0u8; m];
    let mut proj = Vec::with_capacity(m);
    let mut rows = Vec::new();
    'cube: for c in 0..cube {
        decode_into(c, k, &mut t);
        for (r, allowed) in &parts {
            proj.clear();
            proj.extend(r.iter().map(|&q| t[q]));
            if !allowed.contains(&proj) {
                continue 'cube;
            }
        }
        rows.push(t.clone());
    }
    QSet::new(k, m, rows)
}

/// The cylinders `(H|_R)|^Q` and their intersection.
pub fn decomposition_apply(h: &QSet, fam: &SubsetFamily) -> Result<(Vec<QSet>, QSet)> {
    check_family(h, fam)?;
    let cylinders = fam
        .sets()
        .iter()
        .map(|r| crate::galois::extend_qset(&restrict_qset(h, r)?, r, h.m()))
        .collect::<Result<Vec<_>>>()?;
    Ok((cylinders, decomposition_intersection(h, fam)?))
}

pub fn is_decomposable(h: &QSet, fam: &SubsetFamily) -> Result<bool> {
    Ok(decomposition_intersection(h, fam)?.len() == h.len())
}

/// The five index families derived from `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    /// `[Q]^{2,0}`: `h(q) = σ(h(p))` for a permutation `σ`.
    pub two_zero: Vec<Vec<usize>>,
    /// `[Q]^{2,id}`: `h(q) = h(p)`.
    pub two_id: Vec<Vec<usize>>,
    /// `[Q]^{2,1}`: `h(p) = a ∨ h(q) = b` for some `a, b`.
    pub two_one: Vec<Vec<usize>>,
    /// `Q^{(n)}`: `|H(q)| < n`.
    pub q_n: Vec<usize>,
    /// `Q^{[B]}`: `H(q) ⊆ B`, when `B` was given.
    pub q_b: Option<Vec<usize>>,
}

/// Whether `h(p) ↦ h(q)` is a well-defined injective map on `H(p)`, which
/// then extends to a permutation of `A`.
pub fn linked_by_permutation(h: &QSet, p: usize, q: usize) -> bool {
    let k = h.k();
    let mut fwd = vec![None; k];
    let mut back = vec![None; k];
    for r in h.rows() {
        let (x, y) = (r[p] as usize, r[q] as usize);
        if *fwd[x].get_or_insert(y) != y || *back[y].get_or_insert(x) != x {
            return false;
        }
    }
    true
}

/// Some `(a, b)` with `h(p) = a ∨ h(q) = b` on every row, least first.
pub fn disjunction_anchor(h: &QSet, p: usize, q: usize) -> Option<(u8, u8)> {
    let k = h.k() as u8;
    (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).find(|&(a, b)| h.rows().iter().all(|r| r[p] == a || r[q] == b))
}

pub fn two_zero(h: &QSet) -> Vec<Vec<usize>> {
    pairs(h.m()).filter(|v| linked_by_permutation(h, v[0], v[1])).collect()
}

pub fn two_id(h: &QSet) -> Vec<Vec<usize>> {
    pairs(h.m()).filter(|v| h.rows().iter().all(|r| r[v[0]] == r[v[1]])).collect()
}

pub fn two_one(h: &QSet) -> Vec<Vec<usize>> {
    pairs(h.m()).filter(|v| disjunction_anchor(h, v[0], v[1]).is_some()).collect()
}

pub fn q_below(h: &QSet, n: usize) -> Vec<usize> {
    (0..h.m()).filter(|&q| h.column(q).len() < n).collect()
}

pub fn q_within(h: &QSet, b: &[u8]) -> Vec<usize> {
    (0..h.m()).filter(|&q| h.column(q).iter().all(|x| b.contains(x))).collect()
}

fn pairs(m: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..m).flat_map(move |p| (p + 1..m).map(move |q| vec![p, q]))
}

pub fn index_families(h: &QSet, n: usize, b: Option<&[u8]>) -> Result<FamilyReport> {
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    if let Some(b) = b {
        if let Some(&bad) = b.iter().find(|&&x| x as usize >= h.k()) {
            return Err(Error::input(format!("{bad} is not in the carrier")));
        }
    }
    Ok(FamilyReport {
        two_zero: two_zero(h),
        two_id: two_id(h),
        two_one: two_one(h),
        q_n: q_below(h, n),
        q_b: b.map(|b| q_within(h, b)),
    })
}

/// Rows witnessing weak separation of `p` from `q` at `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationWitness {
    pub p: usize,
    pub q: usize,
    pub a: u8,
    pub rows: [usize; 2],
}

fn check_point(h: &QSet, p: usize, q: usize, a: u8) -> Result<()> {
    if p >= h.m() || q >= h.m() {
        return Err(Error::input(format!("positions {p}, {q} outside Q of size {}", h.m())));
    }
    if !h.column(p).contains(&a) {
        return Err(Error::input(format!("{a} is not in H({p})")));
    }
    Ok(())
}

pub fn weakly_separates(h: &QSet, p: usize, q: usize, a: u8) -> Result<Option<SeparationWitness>> {
    check_point(h, p, q, a)?;
    let at_a: Vec<usize> = (0..h.len()).filter(|&i| h.rows()[i][p] == a).collect();
    let first = at_a[0];
    let other = at_a.iter().copied().find(|&j| h.rows()[j][q] != h.rows()[first][q]);
    Ok(other.map(|j| SeparationWitness { p, q, a, rows: [first, j] }))
}

pub fn strongly_separates(h: &QSet, p: usize, q: usize, a: u8) -> Result<bool> {
    check_point(h, p, q, a)?;
    let seen: HashSet<u8> = h.rows().iter().filter(|r| r[p] == a).map(|r| r[q]).collect();
    Ok(h.column(q).iter().all(|b| seen.contains(b)))
}

/// The three shapes a pair restriction can take under a discriminator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairShape {
    Box,
    Permutation,
    Truncated { a: u8, b: u8 },
}

/// Matches `H|_{p,q}` against the box `H(p) × H(q)`, its graph-of-a-bijection
/// part, and its `(h(p) = a ∨ h(q) = b)` part, in that order.
pub fn pair_shape(h: &QSet, p: usize, q: usize) -> Option<PairShape> {
    let hp = h.column(p);
    let hq = h.column(q);
    let realized: HashSet<(u8, u8)> = h.rows().iter().map(|r| (r[p], r[q])).collect();
    if realized.len() == hp.len() * hq.len() {
        return Some(PairShape::Box);
    }
    if linked_by_permutation(h, p, q) {
        return Some(PairShape::Permutation);
    }
    for &a in &(0..h.k() as u8).collect::<Vec<_>>() {
        for b in 0..h.k() as u8 {
            let expected =
                hp.iter().flat_map(|&x| hq.iter().map(move |&y| (x, y))).filter(|&(x, y)| x == a || y == b).count();
            if expected == realized.len() && realized.iter().all(|&(x, y)| x == a || y == b) {
                return Some(PairShape::Truncated { a, b });
            }
        }
    }
    None
}
