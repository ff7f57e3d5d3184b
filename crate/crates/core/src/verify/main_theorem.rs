//! The six-case description of `Inv_Q F` for symmetric conservative clones.

use rayon::prelude::*;

use super::{
    restrictions_and_decomposition, scope_sets, singletons, within_pairs, Instance, Scope, VerificationReport,
};
use crate::catalog::CloneCatalogEntry;
use crate::chi::characteristic_and_case;
use crate::clone::{min_nonprojection_arity, ArityVerdict, Closer};
use crate::decomp::{q_below, two_id, two_one, two_zero};
use crate::error::{Error, Result};
use crate::func::majority_minority;
use crate::galois::{in_inv_with, restrict_qset, QSet};
use crate::post::{class_generators, pi_zero, PostClassId};

fn narrow_columns(s: &QSet) -> Result<Vec<Vec<u8>>> {
    let cols = s.columns();
    if let Some(q) = cols.iter().position(|c| c.len() > 2) {
        return Err(Error::input(format!("column {q} takes more than two values")));
    }
    Ok(cols)
}

/// Whether `S` is preserved by an `ℓ`-function. Columns of `S` take at most
/// two values, so every pointwise triple has rank ≤ 2 and `ℓ` is forced to
/// the minority pattern there.
pub fn minority_closed(s: &QSet) -> Result<bool> {
    narrow_columns(s)?;
    let rows = s.rows();
    let mut image = vec![0u8; s.m()];
    for a in rows {
        for b in rows {
            for c in rows {
                for (q, v) in image.iter_mut().enumerate() {
                    *v = majority_minority(&[a[q], b[q], c[q]]).expect("at most two values").1;
                }
                if !s.contains(&image) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether `S ⊆ A^m` (`k = 4`, columns with at most two values) is preserved
/// by every conservative Klein `P`-function.
///
/// An `|S|`-ary Klein function applied to the rows of `S` acts on a column
/// over `{s, s ⊕ o}` through the Boolean function chosen for the orbit `o`,
/// after relabelling `s ↦ 0`. So per orbit the reachable images are the
/// traces, on that orbit's relabelled columns, of the self-dual part of `P`
/// at arity `|S|`, which the Boolean closure of the projections yields.
pub fn klein_closed(p: &PostClassId, s: &QSet, cap: usize) -> Result<bool> {
    if s.k() != 4 {
        return Err(Error::CarrierMismatch { expected: 4, found: s.k() });
    }
    if s.is_empty() {
        return Ok(true);
    }
    let cols = narrow_columns(s)?;
    let closer = Closer::new(&class_generators(&p.self_dual_core()?)?);
    let rows = s.rows();
    let n = rows.len();
    let mut orbits: Vec<(u8, Vec<(usize, u8)>, Vec<Vec<u8>>)> = Vec::new();
    for o in 1..4u8 {
        let members: Vec<(usize, u8)> = (0..s.m())
            .filter(|&q| cols[q].len() == 2 && cols[q][0] ^ cols[q][1] == o)
            .map(|q| (q, cols[q][0]))
            .collect();
        if members.is_empty() {
            continue;
        }
        let seeds: Vec<Vec<u8>> =
            rows.iter().map(|r| members.iter().map(|&(q, sh)| u8::from(r[q] != sh)).collect()).collect();
        let traces = closer.close_vectors(seeds, cap, n)?;
        orbits.push((o, members, traces));
    }
    let mut pick = vec![0usize; orbits.len()];
    let mut row = rows[0].clone();
    loop {
        for ((o, members, traces), &i) in orbits.iter().zip(&pick) {
            for (&(q, sh), &bit) in members.iter().zip(&traces[i]) {
                row[q] = if bit == 1 { o ^ sh } else { sh };
            }
        }
        if !s.contains(&row) {
            return Ok(false);
        }
        // odometer with per-orbit radix
        let mut j = orbits.len();
        loop {
            if j == 0 {
                return Ok(true);
            }
            j -= 1;
            pick[j] += 1;
            if pick[j] < orbits[j].2.len() {
                break;
            }
            pick[j] = 0;
        }
    }
}

/// What the right-hand side of the applicable case needs besides `H`.
#[derive(Clone, Debug)]
struct CaseData {
    case: usize,
    /// `r(F)`, `None` for the projection clone.
    r: Option<usize>,
    pi0: Option<PostClassId>,
}

/// Both sides of the case-specific equivalence on one set.
pub fn check_main_instance(
    case: usize,
    closer: &Closer,
    r: Option<usize>,
    pi0: Option<&PostClassId>,
    h: &QSet,
    cap: usize,
) -> Result<(bool, Option<String>)> {
    let data = CaseData { case, r, pi0: pi0.cloned() };
    let i = instance(&data, closer, h, cap)?;
    Ok((i.left, i.right_failure))
}

fn instance(data: &CaseData, closer: &Closer, h: &QSet, cap: usize) -> Result<Instance> {
    let left = in_inv_with(closer, h)?;
    let ones = singletons(h.m());
    let z = two_zero(h);
    let right_failure = match data.case {
        1 => {
            let qr = match data.r {
                Some(r) => q_below(h, r),
                None => (0..h.m()).collect(),
            };
            restrictions_and_decomposition(closer, h, &z, &[&ones, &z, &[qr]])?
        }
        2 | 6 => {
            let zo = [z, two_one(h)].concat();
            restrictions_and_decomposition(closer, h, &zo, &[&ones, &zo])?
        }
        3 | 5 => {
            let q3 = q_below(h, 3);
            let narrow = !q3.is_empty();
            let s = restrict_qset(h, &q3)?;
            let closed = if !narrow {
                true
            } else if data.case == 3 {
                minority_closed(&s)?
            } else {
                let p = data.pi0.as_ref().ok_or_else(|| Error::input("case 5 needs Π_0"))?;
                klein_closed(p, &s, cap)?
            };
            match restrictions_and_decomposition(closer, h, &z, &[&ones, &z, std::slice::from_ref(&q3)])? {
                Some(why) => Some(why),
                None if !closed => Some(format!("H|{q3:?} is not preserved by the required functions")),
                None => None,
            }
        }
        4 => {
            // H|_P ⊆ B^P, and for conservative F invariance under F and under
            // F restricted to B coincide.
            let blocks = within_pairs(h);
            restrictions_and_decomposition(closer, h, &blocks, &[&ones, &two_id(h), &blocks])?
        }
        other => return Err(Error::input(format!("no case {other}"))),
    };
    Ok(Instance { left, right_failure })
}

/// Checks that the entry falls in its expected case, then runs that case's
/// equivalence on every set in scope.
pub fn verify_main(entry: &CloneCatalogEntry, m: usize, scope: Scope, cap: usize) -> Result<VerificationReport> {
    let gens = &entry.gens;
    let (chi, case) = characteristic_and_case(gens)?;
    if case != entry.expected_case {
        return Err(Error::Premise(format!("{} falls in case {case}, expected {}", entry.name, entry.expected_case)));
    }
    let r = match min_nonprojection_arity(gens, gens.max_arity().max(3))? {
        ArityVerdict::Finite(r) => Some(r),
        // no non-projection generator
        ArityVerdict::AtLeast(_) => None,
    };
    let pi0 = if case == 5 { Some(pi_zero(&chi.pi)?) } else { None };
    let data = CaseData { case, r, pi0 };
    let closer = Closer::new(gens);
    let hs = scope_sets(gens.k(), m, scope, Some(&closer))?;
    let outcomes: Vec<Instance> = hs.par_iter().map(|h| instance(&data, &closer, h, cap)).collect::<Result<_>>()?;
    let check = format!("main/case{case}");
    let mut report = VerificationReport::new(&check, &entry.name, scope);
    report.positive = outcomes.iter().filter(|o| o.left).count();
    let failures = outcomes.iter().zip(&hs).filter_map(|(o, h)| o.failure(&entry.name, &check, h)).collect();
    report.part(&format!("m = {m}"), hs.len(), failures);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;
    use crate::clone::DEFAULT_CAP;
    use crate::conditions::klein_rank2_slice;
    use crate::func::encode_unchecked;
    use rand::{Rng, SeedableRng};

    fn run(name: &str, m: usize, scope: Scope) -> VerificationReport {
        let r = verify_main(&lookup(name).unwrap(), m, scope, DEFAULT_CAP).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.failures.first());
        assert!(r.positive > 0);
        r
    }

    #[test]
    fn k3_cases_exhaustive() {
        for name in ["3/uv", "3/L", "3/binary", "3/partial", "3/E"] {
            assert_eq!(run(name, 2, Scope::Exhaustive).instances, 511);
        }
    }

    #[test]
    fn k2_cases_exhaustive() {
        for name in ["O1", "D1", "D2", "L4", "A4", "C4"] {
            run(&format!("2/{name}"), 3, Scope::Exhaustive);
        }
    }

    #[test]
    fn k4_cases_sampled() {
        for name in ["4/klein", "4/rank4", "4/E"] {
            run(name, 2, Scope::Sampled { seed: 11, samples: 400 });
        }
        run("4/klein", 3, Scope::Sampled { seed: 12, samples: 200 });
    }

    #[test]
    fn wrong_case_is_refused() {
        let mut e = lookup("3/uv").unwrap();
        e.expected_case = 4;
        assert!(matches!(verify_main(&e, 2, Scope::Exhaustive, DEFAULT_CAP), Err(Error::Premise(_))));
    }

    #[test]
    fn minority_examples() {
        let xor = QSet::new(2, 3, [vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        assert!(minority_closed(&xor).unwrap());
        let or = QSet::new(2, 2, [vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        assert!(!minority_closed(&or).unwrap());
        assert!(minority_closed(&QSet::new(3, 2, [vec![0, 1]]).unwrap()).unwrap());
        assert!(minority_closed(&QSet::full(3, 1).unwrap()).is_err());
    }

    /// The same question answered through the explicit trace table.
    fn klein_closed_by_traces(p: &PostClassId, s: &QSet) -> bool {
        let n = s.len();
        let (cells, traces) = klein_rank2_slice(p, n, DEFAULT_CAP).unwrap();
        let col_cells: Vec<usize> = (0..s.m())
            .map(|q| {
                let col: Vec<u8> = s.rows().iter().map(|r| r[q]).collect();
                let code = encode_unchecked(&col, 4);
                cells.binary_search(&code).unwrap()
            })
            .collect();
        traces.iter().all(|t| s.contains(&col_cells.iter().map(|&c| t[c]).collect::<Vec<u8>>()))
    }

    #[test]
    fn klein_closure_matches_traces() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let classes = [PostClassId::O1, PostClassId::D2, PostClassId::L4, PostClassId::D1];
        let mut disagreements = 0;
        let mut closed = 0;
        for i in 0..400 {
            let m = 2 + i % 2;
            let pairs: Vec<[u8; 2]> = (0..m)
                .map(|_| {
                    let x = rng.gen_range(0..4u8);
                    let y = (x + rng.gen_range(1..4u8)) % 4;
                    [x, y]
                })
                .collect();
            let p = &classes[i % classes.len()];
            // the quaternary D1 trace table is too large to list
            let size = rng.gen_range(1..=if *p == PostClassId::D1 { 3 } else { 4 });
            let rows: Vec<Vec<u8>> =
                (0..size).map(|_| pairs.iter().map(|p| p[rng.gen_range(0..2)]).collect()).collect();
            let s = QSet::new(4, m, rows).unwrap();
            let fast = klein_closed(p, &s, DEFAULT_CAP).unwrap();
            closed += usize::from(fast);
            disagreements += usize::from(fast != klein_closed_by_traces(p, &s));
        }
        assert_eq!(disagreements, 0);
        assert!(closed > 0 && closed < 400);
    }
}
