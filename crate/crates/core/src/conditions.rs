//! Δ-conditions, rank-2 pair relations, and the special functions of the
//! conservative classification (`u`, `v`, Klein functions).

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::clone::{slice, Closer, GeneratorSet};
use crate::error::{Error, Result};
use crate::func::{
    cells_by_rank, decode_into, encode_unchecked, majority_minority, table_len, tuple_rank, FiniteFunction, Permutation,
};
use crate::post::PostClassId;

/// One demand of a Δ-condition: values required on given cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Demand {
    pub tuples: Vec<Vec<u8>>,
    pub values: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub condition: String,
    pub n: usize,
    pub holds: bool,
    /// No demand exists (too few elements for a full-rank tuple).
    pub vacuous: bool,
    /// For `Δ^s_n`: the least index `i` that works.
    pub index: Option<usize>,
    /// For `Δ^s_n`: every index that works.
    pub working_indices: Vec<usize>,
    pub demands_checked: usize,
    pub counterexample: Option<Demand>,
}

impl DeltaReport {
    fn vacuous(condition: &str, n: usize) -> Self {
        DeltaReport {
            condition: condition.into(),
            n,
            holds: true,
            vacuous: true,
            index: None,
            working_indices: Vec::new(),
            demands_checked: 0,
            counterexample: None,
        }
    }
}

/// For each full-rank `n`-tuple `a`, the projected slice on the cells
/// `A^n_{<n} ∪ {a}`, with `a` last.
fn full_rank_demand_slices(
    gens: &GeneratorSet,
    n: usize,
    cap: usize,
) -> Result<Vec<(Vec<u8>, Vec<usize>, HashSet<Vec<u8>>)>> {
    let k = gens.k();
    let low = cells_by_rank(n, k, |r| r < n);
    let full = cells_by_rank(n, k, |r| r == n);
    full.par_iter()
        .map(|&a| {
            let mut cells = low.clone();
            cells.push(a);
            let s = slice(gens, n, Some(&cells), cap)?;
            let mut t = vec![0u8; n];
            decode_into(a, k, &mut t);
            Ok((t, cells, s.members.into_iter().collect()))
        })
        .collect()
}

fn decode(c: usize, n: usize, k: usize) -> Vec<u8> {
    let mut t = vec![0u8; n];
    decode_into(c, k, &mut t);
    t
}

/// `Δ^s_n`: some `i` such that every value on every full-rank tuple is hit
/// by a member agreeing with `e^n_i` below full rank.
pub fn delta_s(gens: &GeneratorSet, n: usize, cap: usize) -> Result<DeltaReport> {
    if n < 2 {
        return Err(Error::input("Δ^s_n needs n ≥ 2"));
    }
    let k = gens.k();
    if k < n {
        return Ok(DeltaReport::vacuous("delta_s", n));
    }
    let slices = full_rank_demand_slices(gens, n, cap)?;
    let mut working = Vec::new();
    let mut first_failure = None;
    let mut checked = 0;
    for i in 0..n {
        let mut failure = None;
        for (a, cells, members) in &slices {
            let mut trace: Vec<u8> = cells[..cells.len() - 1].iter().map(|&c| decode(c, n, k)[i]).collect();
            trace.push(0);
            for &v in a {
                checked += 1;
                *trace.last_mut().unwrap() = v;
                if !members.contains(&trace) {
                    failure.get_or_insert(Demand { tuples: vec![a.clone()], values: vec![v] });
                }
            }
        }
        match failure {
            None => working.push(i),
            Some(d) => {
                first_failure.get_or_insert(d);
            }
        }
    }
    Ok(DeltaReport {
        condition: "delta_s".into(),
        n,
        holds: !working.is_empty(),
        vacuous: false,
        index: working.first().copied(),
        counterexample: if working.is_empty() { first_failure } else { None },
        working_indices: working,
        demands_checked: checked,
    })
}

/// `Δ^∂`: every value on every rank-3 ternary tuple is hit by a ∂-function.
pub fn delta_partial(gens: &GeneratorSet, cap: usize) -> Result<DeltaReport> {
    let k = gens.k();
    if k < 3 {
        return Ok(DeltaReport::vacuous("delta_partial", 3));
    }
    let slices = full_rank_demand_slices(gens, 3, cap)?;
    let mut checked = 0;
    let mut failure = None;
    'outer: for (a, cells, members) in &slices {
        let mut trace: Vec<u8> =
            cells[..cells.len() - 1].iter().map(|&c| majority_minority(&decode(c, 3, k)).unwrap().0).collect();
        trace.push(0);
        for &v in a {
            checked += 1;
            *trace.last_mut().unwrap() = v;
            if !members.contains(&trace) {
                failure = Some(Demand { tuples: vec![a.clone()], values: vec![v] });
                break 'outer;
            }
        }
    }
    Ok(DeltaReport {
        condition: "delta_partial".into(),
        n: 3,
        holds: failure.is_none(),
        vacuous: false,
        index: None,
        working_indices: Vec::new(),
        demands_checked: checked,
        counterexample: failure,
    })
}

/// Rank-2 pairs `xy` with `x ≠ y`, in codec order.
pub fn rank2_pairs(k: usize) -> Vec<[u8; 2]> {
    let k = k as u8;
    (0..k).flat_map(|x| (0..k).filter(move |&y| y != x).map(move |y| [x, y])).collect()
}

fn range_of(p: [u8; 2]) -> [u8; 2] {
    [p[0].min(p[1]), p[0].max(p[1])]
}

/// `Δ²`: any two values on two rank-2 pairs with different ranges are hit
/// together by an idempotent binary member.
pub fn delta_2(gens: &GeneratorSet, cap: usize) -> Result<DeltaReport> {
    let k = gens.k();
    if k < 3 {
        // every rank-2 pair has range A
        return Ok(DeltaReport::vacuous("delta_2", 2));
    }
    let diag: Vec<usize> = (0..k).map(|x| x * k + x).collect();
    let pairs = rank2_pairs(k);
    let mut demands = Vec::new();
    for (i, &a) in pairs.iter().enumerate() {
        for &b in &pairs[i + 1..] {
            if range_of(a) != range_of(b) {
                demands.push((a, b));
            }
        }
    }
    let results: Vec<(usize, Option<Demand>)> = demands
        .par_iter()
        .map(|&(a, b)| {
            let mut cells = diag.clone();
            cells.push(a[0] as usize * k + a[1] as usize);
            cells.push(b[0] as usize * k + b[1] as usize);
            let s = slice(gens, 2, Some(&cells), cap)?;
            let members: HashSet<Vec<u8>> = s.members.into_iter().collect();
            let mut trace: Vec<u8> = (0..k as u8).collect();
            trace.extend([0, 0]);
            let mut checked = 0;
            for &x in &a {
                for &y in &b {
                    checked += 1;
                    trace[k] = x;
                    trace[k + 1] = y;
                    if !members.contains(&trace) {
                        return Ok((
                            checked,
                            Some(Demand { tuples: vec![a.to_vec(), b.to_vec()], values: vec![x, y] }),
                        ));
                    }
                }
            }
            Ok((checked, None))
        })
        .collect::<Result<_>>()?;
    let checked = results.iter().map(|r| r.0).sum();
    let failure = results.into_iter().find_map(|r| r.1);
    Ok(DeltaReport {
        condition: "delta_2".into(),
        n: 2,
        holds: failure.is_none(),
        vacuous: false,
        index: None,
        working_indices: Vec::new(),
        demands_checked: checked,
        counterexample: failure,
    })
}

/// A relation on rank-2 pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinaryPairRelation {
    pub k: usize,
    pub pairs: BTreeSet<([u8; 2], [u8; 2])>,
}

impl BinaryPairRelation {
    pub fn from_predicate(k: usize, pred: impl Fn([u8; 2], [u8; 2]) -> bool) -> Self {
        let all = rank2_pairs(k);
        let pairs = all.iter().flat_map(|&x| all.iter().map(move |&y| (x, y))).filter(|&(x, y)| pred(x, y)).collect();
        BinaryPairRelation { k, pairs }
    }

    pub fn contains(&self, x: [u8; 2], y: [u8; 2]) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SpecialRelation {
    /// `R_↑` on three elements.
    UpArrow,
    /// `R_±` on four elements.
    PlusMinus,
}

pub fn special_relation(kind: SpecialRelation, k: usize) -> Result<BinaryPairRelation> {
    match kind {
        SpecialRelation::UpArrow => {
            if k != 3 {
                return Err(Error::input("R_↑ is defined for k = 3"));
            }
            Ok(BinaryPairRelation::from_predicate(3, |[a, b], [c, d]| {
                (a == c && b == d) || (b == c && a != d) || (a == d && b != c)
            }))
        }
        SpecialRelation::PlusMinus => {
            if k != 4 {
                return Err(Error::input("R_± is defined for k = 4"));
            }
            Ok(BinaryPairRelation::from_predicate(4, |x, y| {
                let (rx, ry) = (range_of(x), range_of(y));
                rx == ry || (!ry.contains(&rx[0]) && !ry.contains(&rx[1]))
            }))
        }
    }
}

/// The type `t(a, b)` of two rank-2 pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PairType {
    Same,
    Reversed,
    /// `a_i = b_j` and `a_{1-i} ≠ b_{1-j}`.
    Shared {
        i: u8,
        j: u8,
    },
    Disjoint,
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairType::Same => f.write_str("0"),
            PairType::Reversed => f.write_str("1"),
            PairType::Shared { i, j } => write!(f, "{i}{j}"),
            PairType::Disjoint => f.write_str("2"),
        }
    }
}

pub fn pair_type(x: &[u8], y: &[u8]) -> Result<PairType> {
    if x.len() != 2 || y.len() != 2 || x[0] == x[1] || y[0] == y[1] {
        return Err(Error::input(format!("{x:?} and {y:?} must both be rank-2 pairs")));
    }
    if x == y {
        return Ok(PairType::Same);
    }
    if x[0] == y[1] && x[1] == y[0] {
        return Ok(PairType::Reversed);
    }
    for i in 0..2 {
        for j in 0..2 {
            if x[i] == y[j] && x[1 - i] != y[1 - j] {
                return Ok(PairType::Shared { i: i as u8, j: j as u8 });
            }
        }
    }
    Ok(PairType::Disjoint)
}

/// Realized value pairs `{(f(x), f(y)) : f ∈ F_[n]}` on two `n`-ary cells,
/// from the two-cell projected slice.
pub fn value_pairs(closer: &Closer, n: usize, x: &[u8], y: &[u8]) -> Result<Vec<(u8, u8)>> {
    let seeds: Vec<Vec<u8>> = (0..n).map(|i| vec![x[i], y[i]]).collect();
    Ok(closer.close_vectors(seeds, usize::MAX, n)?.into_iter().map(|v| (v[0], v[1])).collect())
}

/// `⊳_i`: every binary member sending `x` to `x_i` sends `y` to `y_i`.
pub fn triangle_rel(gens: &GeneratorSet, i: usize) -> Result<BinaryPairRelation> {
    if i > 1 {
        return Err(Error::input("⊳ index must be 0 or 1"));
    }
    let closer = Closer::new(gens);
    let k = gens.k();
    let all = rank2_pairs(k);
    let pairs: Vec<([u8; 2], [u8; 2])> = all.iter().flat_map(|&x| all.iter().map(move |&y| (x, y))).collect();
    let keep: Vec<bool> = pairs
        .par_iter()
        .map(|&(x, y)| Ok(value_pairs(&closer, 2, &x, &y)?.iter().all(|&(fx, fy)| fx != x[i] || fy == y[i])))
        .collect::<Result<_>>()?;
    Ok(BinaryPairRelation { k, pairs: pairs.into_iter().zip(keep).filter(|p| p.1).map(|p| p.0).collect() })
}

/// Which of the five admissible shapes a `⊳` relation has (1-based), if any.
pub fn triangle_case(rel: &BinaryPairRelation) -> Option<usize> {
    let k = rel.k;
    let by_types = |allowed: &dyn Fn(PairType) -> bool| {
        BinaryPairRelation::from_predicate(k, |x, y| allowed(pair_type(&x, &y).expect("rank 2")))
    };
    let shared_01_10 =
        |t: PairType| matches!(t, PairType::Same | PairType::Shared { i: 0, j: 1 } | PairType::Shared { i: 1, j: 0 });
    let cases: [(bool, Box<dyn Fn(PairType) -> bool>); 5] = [
        (true, Box::new(|_| true)),
        (true, Box::new(|t| t == PairType::Same)),
        (true, Box::new(|t| matches!(t, PairType::Same | PairType::Reversed))),
        (k == 4, Box::new(|t| matches!(t, PairType::Same | PairType::Reversed | PairType::Disjoint))),
        (k == 3, Box::new(shared_01_10)),
    ];
    cases.iter().position(|(ok, pred)| *ok && by_types(pred.as_ref()) == *rel).map(|c| c + 1)
}

/// The types realized by a relation.
pub fn realized_types(rel: &BinaryPairRelation) -> BTreeSet<PairType> {
    rel.pairs.iter().map(|(x, y)| pair_type(x, y).expect("rank 2")).collect()
}

/// The pair of binary functions on three elements with
/// `R_2 = R_↑`, from their value tables.
pub fn uv_pair(k: usize) -> Result<(FiniteFunction, FiniteFunction)> {
    if k != 3 {
        return Err(Error::input("u and v are defined for k = 3"));
    }
    let u = FiniteFunction::new(3, 2, vec![0, 1, 0, 1, 1, 2, 0, 2, 2])?;
    let v = FiniteFunction::new(3, 2, vec![0, 0, 2, 0, 1, 1, 2, 1, 2])?;
    Ok((u, v))
}

/// `{id, (01)(23), (02)(13), (03)(12)}`; as maps these are `x ↦ x ⊕ s`.
pub fn klein_group(k: usize) -> Result<Vec<Permutation>> {
    if k != 4 {
        return Err(Error::input("the Klein four-group acts on k = 4"));
    }
    (0..4u8).map(|s| Permutation::new((0..4u8).map(|x| x ^ s).collect())).collect()
}

fn klein_carrier(f_k: usize) -> Result<()> {
    if f_k != 4 {
        return Err(Error::CarrierMismatch { expected: 4, found: f_k });
    }
    Ok(())
}

fn require_named(p: &PostClassId) -> Result<()> {
    if matches!(p, PostClassId::Other(_)) {
        return Err(Error::input("Klein functions need one of the six duality-closed classes"));
    }
    Ok(())
}

/// Whether `f` is a Klein `P`-function: each restriction to a 2-subset is
/// in `P` (either labeling, `P` being duality-closed) and `f` commutes with
/// the Klein group on rank-2 tuples.
pub fn is_klein_p_function(f: &FiniteFunction, p: &PostClassId) -> Result<bool> {
    klein_carrier(f.k())?;
    require_named(p)?;
    let n = f.arity();
    for x in 0..4u8 {
        for y in x + 1..4 {
            let pair = [x, y];
            let mut inside = true;
            let g = FiniteFunction::from_fn(2, n, |t| {
                let idx = t.iter().fold(0, |acc, &b| acc * 4 + pair[b as usize] as usize);
                let v = f.table()[idx];
                match pair.iter().position(|&e| e == v) {
                    Some(w) => w as u8,
                    None => {
                        inside = false;
                        0
                    }
                }
            })?;
            if !inside || !p.contains(&g)? {
                return Ok(false);
            }
        }
    }
    let len = table_len(4, n).expect("small");
    let mut t = vec![0u8; n];
    for c in 0..len {
        decode_into(c, 4, &mut t);
        if tuple_rank(&t) != 2 {
            continue;
        }
        for s in 1..4u8 {
            let moved: Vec<u8> = t.iter().map(|&x| x ^ s).collect();
            if f.table()[encode_unchecked(&moved, 4)] != f.table()[c] ^ s {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Value of the Klein function with per-orbit Boolean choices on a rank-2
/// cell `t` over `{x, y}`: the orbit is `x ⊕ y`, its base pair contains 0,
/// and the partner pair is reached by `z ↦ z ⊕ x`.
pub(crate) fn klein_value(t: &[u8], choose: impl Fn(usize, &[u8]) -> u8) -> u8 {
    let x = t[0];
    let y = *t.iter().find(|&&e| e != x).expect("rank 2");
    let orbit = (x ^ y) as usize;
    let s = x.min(y);
    let base: Vec<u8> = t.iter().map(|&e| if (e ^ s) == 0 { 0 } else { 1 }).collect();
    let b = choose(orbit, &base);
    let v = if b == 0 { 0 } else { orbit as u8 };
    v ^ s
}

/// Traces on the rank-≤2 cells of `A^n` (`k = 4`) of all conservative Klein
/// `P`-functions: one self-dual `n`-ary member of `P` per orbit.
pub fn klein_rank2_slice(p: &PostClassId, n: usize, cap: usize) -> Result<(Vec<usize>, Vec<Vec<u8>>)> {
    require_named(p)?;
    if n == 0 || n > 4 {
        return Err(Error::input("Klein slices are available for arities 1..=4"));
    }
    let core = p.self_dual_core()?;
    let choices = crate::post::semantic_slice(&core, n)?.arity_slice(n).to_vec();
    let cells = cells_by_rank(n, 4, |r| r <= 2);
    let count = choices.len().pow(3);
    if count.saturating_mul(cells.len()) > cap {
        return Err(Error::Capacity { arity: n, reached: count.saturating_mul(cells.len()), cap });
    }
    let tuples: Vec<Vec<u8>> = cells.iter().map(|&c| decode(c, n, 4)).collect();
    let mut traces = Vec::with_capacity(count);
    for g1 in &choices {
        for g2 in &choices {
            for g3 in &choices {
                let gs = [g1, g2, g3];
                traces.push(
                    tuples
                        .iter()
                        .map(|t| {
                            if tuple_rank(t) == 1 {
                                t[0]
                            } else {
                                klein_value(t, |o, base| gs[o - 1].table()[encode_unchecked(base, 2)])
                            }
                        })
                        .collect(),
                );
            }
        }
    }
    traces.sort();
    traces.dedup();
    Ok((cells, traces))
}

/// The binary Klein functions that pick `x_{i_o}` on orbit `o`.
pub fn klein_binary(choice: [u8; 3]) -> FiniteFunction {
    FiniteFunction::from_fn(
        4,
        2,
        |t| {
            if t[0] == t[1] {
                t[0]
            } else {
                t[choice[((t[0] ^ t[1]) - 1) as usize] as usize]
            }
        },
    )
    .expect("valid table")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clone::{symmetric_closure, DEFAULT_CAP};

    fn uv() -> GeneratorSet {
        let (u, v) = uv_pair(3).unwrap();
        GeneratorSet::new(3, [u, v]).unwrap()
    }

    fn l_generators() -> GeneratorSet {
        crate::catalog::l_functions(3).unwrap()
    }

    fn klein() -> GeneratorSet {
        crate::catalog::klein_generators()
    }

    #[test]
    fn uv_tables() {
        let (u, v) = uv_pair(3).unwrap();
        assert_eq!(u.apply(&[1, 2]).unwrap(), 2);
        assert_eq!(u.apply(&[0, 2]).unwrap(), 0);
        assert_eq!(v.apply(&[0, 2]).unwrap(), 2);
        assert_eq!(v.apply(&[1, 2]).unwrap(), 1);
        for x in 0..3u8 {
            assert_eq!(u.apply(&[x, x]).unwrap(), x);
            for y in 0..3u8 {
                assert_eq!(u.apply(&[x, y]).unwrap(), u.apply(&[y, x]).unwrap());
                assert_eq!(v.apply(&[x, y]).unwrap(), v.apply(&[y, x]).unwrap());
                if x != y {
                    assert_eq!(u.apply(&[x, y]).unwrap() == x, v.apply(&[x, y]).unwrap() == y);
                }
            }
        }
        assert!(uv_pair(4).is_err());
    }

    #[test]
    fn uv_composite_is_discriminator() {
        let (u, v) = uv_pair(3).unwrap();
        let p = |i| FiniteFunction::projection(3, 3, i).unwrap();
        let u01 = u.compose(&[p(0), p(1)]).unwrap();
        let u02 = u.compose(&[p(0), p(2)]).unwrap();
        let u12 = u.compose(&[p(1), p(2)]).unwrap();
        let f = v.compose(&[v.compose(&[u01, u02]).unwrap(), u12]).unwrap();
        assert_eq!(f.apply(&[0, 1, 2]).unwrap(), 2);
        assert!(f.classify().is_d_function);
    }

    #[test]
    fn special_relation_examples() {
        let up = special_relation(SpecialRelation::UpArrow, 3).unwrap();
        assert!(up.contains([0, 1], [1, 2]));
        assert!(!up.contains([0, 1], [1, 0]));
        let pm = special_relation(SpecialRelation::PlusMinus, 4).unwrap();
        assert!(pm.contains([0, 1], [2, 3]));
        assert!(!pm.contains([0, 1], [0, 2]));
        assert!(special_relation(SpecialRelation::UpArrow, 4).is_err());
    }

    #[test]
    fn pair_type_examples() {
        assert_eq!(pair_type(&[0, 1], &[0, 1]).unwrap(), PairType::Same);
        assert_eq!(pair_type(&[0, 1], &[1, 0]).unwrap(), PairType::Reversed);
        assert_eq!(pair_type(&[0, 1], &[1, 2]).unwrap(), PairType::Shared { i: 1, j: 0 });
        assert_eq!(pair_type(&[0, 1], &[2, 3]).unwrap(), PairType::Disjoint);
        assert_eq!(pair_type(&[0, 1], &[1, 2]).unwrap().to_string(), "10");
        assert!(pair_type(&[0, 0], &[1, 2]).is_err());
    }

    #[test]
    fn delta_examples() {
        assert!(delta_s(&l_generators(), 3, DEFAULT_CAP).unwrap().holds);
        let none = delta_s(&GeneratorSet::empty(3).unwrap(), 3, DEFAULT_CAP).unwrap();
        assert!(!none.holds && !none.vacuous && none.counterexample.is_some());
        assert!(delta_s(&GeneratorSet::empty(2).unwrap(), 3, DEFAULT_CAP).unwrap().vacuous);
        assert!(delta_s(&klein(), 3, DEFAULT_CAP).unwrap().holds);
        assert!(delta_partial(&symmetric_closure(&uv()), DEFAULT_CAP).unwrap().holds);
        assert!(!delta_partial(&l_generators(), DEFAULT_CAP).unwrap().holds);
        let cons = crate::catalog::binary_conservative(3).unwrap();
        assert!(delta_2(&cons, DEFAULT_CAP).unwrap().holds);
        assert!(!delta_2(&uv(), DEFAULT_CAP).unwrap().holds);
        let two = delta_2(&GeneratorSet::empty(2).unwrap(), DEFAULT_CAP).unwrap();
        assert!(two.holds && two.vacuous);
        assert!(!delta_2(&GeneratorSet::empty(3).unwrap(), DEFAULT_CAP).unwrap().holds);
    }

    #[test]
    fn lemma_witness_for_every_index() {
        for (gens, n) in [(l_generators(), 3), (klein(), 3)] {
            let r = delta_s(&gens, n, DEFAULT_CAP).unwrap();
            assert!(r.holds);
            assert_eq!(r.working_indices, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn discriminator_symmetric_set_satisfies_delta_partial() {
        let (u, v) = uv_pair(3).unwrap();
        let p = |i| FiniteFunction::projection(3, 3, i).unwrap();
        let f = v
            .compose(&[
                v.compose(&[u.compose(&[p(0), p(1)]).unwrap(), u.compose(&[p(0), p(2)]).unwrap()]).unwrap(),
                u.compose(&[p(1), p(2)]).unwrap(),
            ])
            .unwrap();
        let gens = symmetric_closure(&GeneratorSet::new(3, [f]).unwrap());
        assert!(delta_partial(&gens, DEFAULT_CAP).unwrap().holds);
    }

    #[test]
    fn triangle_examples() {
        let up = special_relation(SpecialRelation::UpArrow, 3).unwrap();
        assert_eq!(triangle_rel(&uv(), 0).unwrap(), up);
        assert_eq!(triangle_rel(&uv(), 1).unwrap(), up);
        let full = BinaryPairRelation::from_predicate(3, |_, _| true);
        assert_eq!(triangle_rel(&GeneratorSet::empty(3).unwrap(), 0).unwrap(), full);
        let cons = crate::catalog::binary_conservative(3).unwrap();
        let t = triangle_rel(&cons, 0).unwrap();
        assert_eq!(realized_types(&t), [PairType::Same].into_iter().collect());
        assert_eq!(triangle_case(&t), Some(2));
        assert_eq!(triangle_case(&up), Some(5));
        assert_eq!(triangle_case(&full), Some(1));
        let pm = special_relation(SpecialRelation::PlusMinus, 4).unwrap();
        assert_eq!(triangle_rel(&klein(), 0).unwrap(), pm);
        assert_eq!(triangle_case(&pm), Some(4));
    }

    #[test]
    fn klein_group_shape() {
        let g = klein_group(4).unwrap();
        assert!(g.contains(&Permutation::identity(4)));
        for s in &g {
            if !s.is_identity() {
                assert!((0..4u8).all(|x| s.apply(x) != x && s.apply(s.apply(x)) == x));
            }
            for t in &g {
                assert!(g.contains(&s.after(t)));
            }
        }
    }

    #[test]
    fn klein_function_examples() {
        for p in PostClassId::NAMED.iter() {
            assert!(is_klein_p_function(&FiniteFunction::projection(4, 2, 1).unwrap(), p).unwrap());
        }
        let f = klein_binary([0, 1, 1]);
        assert!(f.is_projection().is_none());
        assert!(is_klein_p_function(&f, &PostClassId::O1).unwrap());
        let mut table = f.table().to_vec();
        // break equivariance on the cell (0,1) only
        table[1] = 1 - table[1];
        let broken = FiniteFunction::new(4, 2, table).unwrap();
        assert!(!is_klein_p_function(&broken, &PostClassId::O1).unwrap());
        assert!(is_klein_p_function(&f, &PostClassId::Other(vec![])).is_err());
    }

    #[test]
    fn klein_slice_traces() {
        let (cells, traces) = klein_rank2_slice(&PostClassId::O1, 2, DEFAULT_CAP).unwrap();
        assert_eq!(cells.len(), 16);
        assert_eq!(traces.len(), 8);
        // every trace is the restriction of a binary Klein O1-function
        for choice in 0..8u8 {
            let f = klein_binary([choice & 1, (choice >> 1) & 1, (choice >> 2) & 1]);
            let t: Vec<u8> = cells.iter().map(|&c| f.table()[c]).collect();
            assert!(traces.contains(&t));
        }
        for p in [PostClassId::A4, PostClassId::C4, PostClassId::D1] {
            let (cells, traces) = klein_rank2_slice(&p, 3, DEFAULT_CAP).unwrap();
            for t in traces.iter().take(50) {
                // rebuild a full table (projection on rank 3) and test the definition
                let mut table: Vec<u8> = (0..64).map(|c| decode(c, 3, 4)[0]).collect();
                for (i, &c) in cells.iter().enumerate() {
                    table[c] = t[i];
                }
                let f = FiniteFunction::new(4, 3, table).unwrap();
                assert!(is_klein_p_function(&f, &p).unwrap());
            }
        }
    }
}
