//! The relations `R_n`, `D_n` and the characteristic `χ(F)` of a
//! symmetric conservative clone.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::clone::{min_nonprojection_arity, ArityVerdict, Closer, GeneratorSet};
use crate::conditions::{special_relation, value_pairs, BinaryPairRelation, SpecialRelation};
use crate::error::{Error, Result};
use crate::func::{all_tuples, tuple_rank};
use crate::post::{pi_family, pi_zero, PiFamily, PostClassId};

/// A binary relation on `n`-tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NTupleRelation {
    pub n: usize,
    pub pairs: BTreeSet<(Vec<u8>, Vec<u8>)>,
}

impl NTupleRelation {
    pub fn contains(&self, a: &[u8], b: &[u8]) -> bool {
        self.pairs.contains(&(a.to_vec(), b.to_vec()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_swap_closed(&self) -> bool {
        self.pairs.iter().all(|(a, b)| self.pairs.contains(&(b.clone(), a.clone())))
    }

    /// The part on rank-2 pairs (binary relations only).
    pub fn rank2_part(&self, k: usize) -> Result<BinaryPairRelation> {
        if self.n != 2 {
            return Err(Error::ArityMismatch { expected: 2, found: self.n });
        }
        Ok(BinaryPairRelation::from_predicate(k, |a, b| self.contains(&a, &b)))
    }
}

/// Whether the value pairs form the graph of an injective partial map.
fn is_injective_graph(v: &[(u8, u8)]) -> bool {
    v.iter().all(|&(x, y)| v.iter().all(|&(x2, y2)| (x == x2) == (y == y2)))
}

/// Some `(a, b)` with `x = a` or `y = b` for every realized pair.
fn has_anchor(v: &[(u8, u8)], k: usize) -> bool {
    (0..k as u8).any(|a| (0..k as u8).any(|b| v.iter().all(|&(x, y)| x == a || y == b)))
}

fn relation_with(closer: &Closer, n: usize, keep: impl Fn(&[(u8, u8)]) -> bool + Sync) -> Result<NTupleRelation> {
    if n == 0 {
        return Err(Error::input("relations need n ≥ 1"));
    }
    let tuples = all_tuples(n, closer.k());
    let pairs: Vec<(Vec<u8>, Vec<u8>)> = tuples
        .par_iter()
        .map(|a| -> Result<Vec<(Vec<u8>, Vec<u8>)>> {
            let mut out = Vec::new();
            for b in &tuples {
                if keep(&value_pairs(closer, n, a, b)?) {
                    out.push((a.clone(), b.clone()));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(NTupleRelation { n, pairs: pairs.into_iter().collect() })
}

pub fn relation_r_with(closer: &Closer, n: usize) -> Result<NTupleRelation> {
    relation_with(closer, n, is_injective_graph)
}

pub fn relation_d_with(closer: &Closer, n: usize) -> Result<NTupleRelation> {
    let k = closer.k();
    relation_with(closer, n, move |v| has_anchor(v, k))
}

/// `R_n(F)`: pairs `(a, b)` with a permutation `σ` such that
/// `f(b) = σ(f(a))` for every `n`-ary member.
pub fn relation_r(gens: &GeneratorSet, n: usize, cap: usize) -> Result<NTupleRelation> {
    check_width(gens, cap)?;
    relation_r_with(&Closer::new(gens), n)
}

/// `D_n(F)`: pairs `(a, b)` with `a, b ∈ A` such that `f(a) = a` or
/// `f(b) = b` for every `n`-ary member.
pub fn relation_d(gens: &GeneratorSet, n: usize, cap: usize) -> Result<NTupleRelation> {
    check_width(gens, cap)?;
    relation_d_with(&Closer::new(gens), n)
}

// Two cells hold at most k² value pairs.
fn check_width(gens: &GeneratorSet, cap: usize) -> Result<()> {
    let need = gens.k() * gens.k();
    if need > cap {
        return Err(Error::Capacity { arity: 2, reached: need, cap });
    }
    Ok(())
}

/// `χ(F) = (r, R, D, Π)`, with `R` and `D` for `2 ≤ n ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Characteristic {
    pub k: usize,
    pub bound: usize,
    pub r: ArityVerdict,
    #[serde(rename = "R")]
    pub rel_r: BTreeMap<usize, NTupleRelation>,
    #[serde(rename = "D")]
    pub rel_d: BTreeMap<usize, NTupleRelation>,
    #[serde(rename = "Pi")]
    pub pi: PiFamily,
}

pub fn characteristic(gens: &GeneratorSet, bound: usize) -> Result<Characteristic> {
    if bound < 2 {
        return Err(Error::input("the characteristic needs bound ≥ 2"));
    }
    if !gens.all_conservative() {
        return Err(Error::Premise("generators must be conservative".into()));
    }
    let closer = Closer::new(gens);
    let mut rel_r = BTreeMap::new();
    let mut rel_d = BTreeMap::new();
    for n in 2..=bound {
        rel_r.insert(n, relation_r_with(&closer, n)?);
        rel_d.insert(n, relation_d_with(&closer, n)?);
    }
    Ok(Characteristic {
        k: gens.k(),
        bound,
        r: min_nonprojection_arity(gens, bound)?,
        rel_r,
        rel_d,
        pi: pi_family(gens, bound.min(3))?,
    })
}

/// Componentwise equality at a common bound.
pub fn chi_equal(a: &Characteristic, b: &Characteristic) -> Result<bool> {
    if a.k != b.k {
        return Err(Error::CarrierMismatch { expected: a.k, found: b.k });
    }
    if a.bound != b.bound {
        return Err(Error::input(format!("bound mismatch: {} vs {}", a.bound, b.bound)));
    }
    let classes = |c: &Characteristic| c.pi.entries.iter().map(|e| (e.b, e.class.clone())).collect::<Vec<_>>();
    Ok(a.r == b.r && a.rel_r == b.rel_r && a.rel_d == b.rel_d && classes(a) == classes(b))
}

/// The case (1..=6) of the classification whose premises `χ` meets.
pub fn classify_case(chi: &Characteristic) -> Result<usize> {
    match chi.r {
        ArityVerdict::AtLeast(n) if n >= 4 => Ok(1),
        ArityVerdict::Finite(r) if r >= 4 => Ok(1),
        ArityVerdict::Finite(3) => Ok(if pi_zero(&chi.pi)? == PostClassId::L4 { 3 } else { 2 }),
        ArityVerdict::Finite(2) => {
            let r2 = chi.rel_r.get(&2).ok_or_else(|| Error::input("R_2 missing"))?.rank2_part(chi.k)?;
            let special = match chi.k {
                4 => Some((SpecialRelation::PlusMinus, 5)),
                3 => Some((SpecialRelation::UpArrow, 6)),
                _ => None,
            };
            if let Some((kind, case)) = special {
                if r2 == special_relation(kind, chi.k)? {
                    return Ok(case);
                }
            }
            Ok(4)
        }
        other => Err(Error::input(format!("cannot classify with r = {other:?}; raise the bound"))),
    }
}

/// `χ` at the default bound 3 together with its case.
pub fn characteristic_and_case(gens: &GeneratorSet) -> Result<(Characteristic, usize)> {
    let chi = characteristic(gens, 3)?;
    let case = classify_case(&chi)?;
    Ok((chi, case))
}

/// Tuples of rank below `r` (used by the rigidity checks).
pub fn low_rank_tuples(n: usize, k: usize, r: usize) -> Vec<Vec<u8>> {
    all_tuples(n, k).into_iter().filter(|t| tuple_rank(t) < r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::clone::{slice, symmetric_closure, DEFAULT_CAP};
    use crate::decomp::{two_one, two_zero};
    use crate::galois::QSet;

    fn uv() -> GeneratorSet {
        let (u, v) = crate::conditions::uv_pair(3).unwrap();
        GeneratorSet::new(3, [u, v]).unwrap()
    }

    #[test]
    fn relation_examples() {
        let up = special_relation(SpecialRelation::UpArrow, 3).unwrap();
        assert_eq!(relation_r(&uv(), 2, DEFAULT_CAP).unwrap().rank2_part(3).unwrap(), up);
        let pm = special_relation(SpecialRelation::PlusMinus, 4).unwrap();
        assert_eq!(relation_r(&catalog::klein_generators(), 2, DEFAULT_CAP).unwrap().rank2_part(4).unwrap(), pm);
        let empty = GeneratorSet::empty(3).unwrap();
        // projections relate exactly the pairs with equal equality pattern: 3² + 6²
        assert_eq!(relation_r(&empty, 2, DEFAULT_CAP).unwrap().len(), 45);
        assert_eq!(relation_d(&empty, 2, DEFAULT_CAP).unwrap().len(), 81);
        let cons = catalog::binary_conservative(3).unwrap();
        let d = relation_d(&cons, 2, DEFAULT_CAP).unwrap();
        assert!(!d.contains(&[0, 1], &[0, 2]));
        assert!(d.contains(&[0, 1], &[0, 1]));
    }

    #[test]
    fn relations_reflexive_and_symmetric() {
        for gens in [uv(), catalog::l_functions(3).unwrap(), catalog::binary_conservative(3).unwrap()] {
            for n in 2..=3 {
                let r = relation_r(&gens, n, DEFAULT_CAP).unwrap();
                let d = relation_d(&gens, n, DEFAULT_CAP).unwrap();
                assert!(r.is_swap_closed());
                for t in all_tuples(n, 3) {
                    assert!(r.contains(&t, &t));
                    if tuple_rank(&t) <= 2 {
                        assert!(d.contains(&t, &t));
                    }
                }
            }
        }
    }

    #[test]
    fn families_of_the_slice_match_relations() {
        // F_[2] read as an invariant set over Q = A^2
        for gens in [uv(), catalog::binary_conservative(3).unwrap(), symmetric_closure(&uv())] {
            let s = slice(&gens, 2, None, DEFAULT_CAP).unwrap();
            let h = QSet::new(3, 9, s.members.clone()).unwrap();
            let tuples = all_tuples(2, 3);
            let distinct = |rel: &NTupleRelation| -> Vec<Vec<usize>> {
                let mut out = Vec::new();
                for p in 0..9 {
                    for q in p + 1..9 {
                        if rel.contains(&tuples[p], &tuples[q]) {
                            out.push(vec![p, q]);
                        }
                    }
                }
                out
            };
            assert_eq!(two_zero(&h), distinct(&relation_r(&gens, 2, DEFAULT_CAP).unwrap()));
            assert_eq!(two_one(&h), distinct(&relation_d(&gens, 2, DEFAULT_CAP).unwrap()));
        }
    }

    #[test]
    fn characteristic_examples() {
        let empty = GeneratorSet::empty(3).unwrap();
        let chi = characteristic(&empty, 3).unwrap();
        assert_eq!(chi.r, ArityVerdict::AtLeast(4));
        assert!(chi.pi.entries.iter().all(|e| e.class == PostClassId::O1));
        assert_eq!(classify_case(&chi).unwrap(), 1);
        assert!(chi_equal(&chi, &chi).unwrap());

        let (chi_uv, case) = characteristic_and_case(&symmetric_closure(&uv())).unwrap();
        assert_eq!(chi_uv.r, ArityVerdict::Finite(2));
        assert_eq!(case, 6);
        let (chi_l, case) = characteristic_and_case(&catalog::l_functions(3).unwrap()).unwrap();
        assert_eq!(chi_l.r, ArityVerdict::Finite(3));
        assert_eq!(case, 3);
        let (chi_c, case) = characteristic_and_case(&catalog::binary_conservative(3).unwrap()).unwrap();
        assert_eq!(case, 4);
        assert!(!chi_equal(&chi_uv, &chi_c).unwrap());
        assert!(!chi_equal(&chi_l, &chi_uv).unwrap());
        assert!(chi_equal(&chi, &characteristic(&empty, 2).unwrap()).is_err());
    }
}
