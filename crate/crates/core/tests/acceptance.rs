//! Acceptance run: one PASS/FAIL line per criterion, exact comparisons,
//! wall-clock budgets pinned below.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use finclone::catalog::{
    binary_conservative, builtin_catalog, klein_generators, l_functions, rank4_generator, uv_symmetric,
};
use finclone::chi::relation_r;
use finclone::clone::{slice, symmetric_closure, DEFAULT_CAP};
use finclone::conditions::{delta_partial, delta_s, triangle_rel, uv_pair};
use finclone::func::FiniteFunction;
use finclone::post::{dualize, identify_generated, semantic_slice, PostClassId};
use finclone::verify::{
    chi_injectivity_check, corrupted_uv_entry, verify_decomposition_theorem, verify_lemma_suite,
    verify_oracle_agreement, Scope, VerificationReport, Which,
};
use finclone::GeneratorSet;

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn clean(r: &VerificationReport, instances: usize) -> Outcome {
    ensure(r.instances == instances, || format!("{}: {} instances, expected {instances}", r.statement, r.instances))?;
    ensure(r.passed(), || format!("{}: {} failures, first {:?}", r.statement, r.failures.len(), r.failures.first()))
}

fn table(k: usize, n: usize, rule: impl Fn(&[u8]) -> u8) -> FiniteFunction {
    FiniteFunction::from_fn(k, n, |t| rule(t)).unwrap()
}

/// `u` and `v` with rows indexed by the first argument, `a, b, c = 0, 1, 2`.
const U: [[u8; 3]; 3] = [[0, 1, 0], [1, 1, 2], [0, 2, 2]];
const V: [[u8; 3]; 3] = [[0, 0, 2], [0, 1, 1], [2, 1, 2]];

fn c1_uv_composite() -> Outcome {
    let u = |x: u8, y: u8| U[x as usize][y as usize];
    let v = |x: u8, y: u8| V[x as usize][y as usize];
    let (lu, lv) = uv_pair(3).map_err(|e| e.to_string())?;
    for x in 0..3u8 {
        for y in 0..3u8 {
            ensure(lu.apply(&[x, y]).unwrap() == u(x, y) && lv.apply(&[x, y]).unwrap() == v(x, y), || {
                format!("library u/v differ from the reference tables at ({x},{y})")
            })?;
        }
    }
    let f = |x: u8, y: u8, z: u8| v(v(u(x, y), u(x, z)), u(y, z));
    let mut cells = 0;
    for x in 0..3u8 {
        for y in 0..3u8 {
            for z in 0..3u8 {
                cells += 1;
                let expect = if x == y || x == z {
                    Some(x)
                } else if y == z {
                    Some(y)
                } else {
                    None
                };
                if let Some(e) = expect {
                    ensure(f(x, y, z) == e, || format!("f({x}{y}{z}) = {}, expected {e}", f(x, y, z)))?;
                }
            }
        }
    }
    // the composite built through the library agrees
    let proj = |i| FiniteFunction::projection(3, 3, i).unwrap();
    let ux = |a, b| lu.compose(&[proj(a), proj(b)]).unwrap();
    let comp = lv.compose(&[lv.compose(&[ux(0, 1), ux(0, 2)]).unwrap(), ux(1, 2)]).unwrap();
    ensure(comp == table(3, 3, |t| f(t[0], t[1], t[2])), || "library composition differs".into())?;
    ensure(cells == 27, || "cell count".into())
}

fn boolean(n: usize, rule: impl Fn(&[bool]) -> bool) -> FiniteFunction {
    table(2, n, |t| {
        let b: Vec<bool> = t.iter().map(|&x| x == 1).collect();
        u8::from(rule(&b))
    })
}

fn c2_post_identification() -> Outcome {
    let slices: Vec<(PostClassId, Vec<FiniteFunction>)> = PostClassId::NAMED
        .iter()
        .map(|id| (id.clone(), semantic_slice(id, 3).unwrap().iter().cloned().collect()))
        .collect();
    for (i, (a, sa)) in slices.iter().enumerate() {
        for (b, sb) in &slices[i + 1..] {
            ensure(sa != sb, || format!("{a} and {b} have equal slices"))?;
        }
        // dual computed directly: f*(x) = ¬f(¬x)
        for f in sa {
            let dual = table(2, f.arity(), |t| {
                let neg: Vec<u8> = t.iter().map(|x| 1 - x).collect();
                1 - f.apply(&neg).unwrap()
            });
            ensure(dualize(f).unwrap() == dual, || "dualize disagrees with ¬f(¬x)".into())?;
            ensure(sa.contains(&dual), || format!("{a} is not closed under duality"))?;
        }
    }
    let get = |id: PostClassId| slices.iter().find(|(c, _)| *c == id).unwrap().1.clone();
    let d1 = get(PostClassId::D1);
    for f in get(PostClassId::L4).iter().chain(&get(PostClassId::D2)) {
        ensure(d1.contains(f), || "L4 ∪ D2 is not inside D1".into())?;
    }
    let maj = boolean(3, |x| (x[0] && x[1]) || (x[1] && x[2]) || (x[0] && x[2]));
    let xor3 = boolean(3, |x| x[0] ^ x[1] ^ x[2]);
    let d1_gen = boolean(3, |x| (!x[0] && x[1]) || (!x[0] && x[2]) || (x[1] && x[2]));
    let cases = [
        (vec![maj], PostClassId::D2),
        (vec![xor3], PostClassId::L4),
        (vec![d1_gen], PostClassId::D1),
        (vec![], PostClassId::O1),
    ];
    for (gens, want) in cases {
        let got = identify_generated(&GeneratorSet::new(2, gens).unwrap(), 3).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("identified {got}, expected {want}"))?;
    }
    Ok(())
}

fn all_binary_conservative() -> GeneratorSet {
    let mut out = Vec::new();
    for bits in 0..64u32 {
        let off: Vec<(u8, u8)> =
            (0..3u8).flat_map(|x| (0..3u8).filter(move |&y| y != x).map(move |y| (x, y))).collect();
        out.push(table(3, 2, |t| {
            if t[0] == t[1] {
                return t[0];
            }
            let i = off.iter().position(|&p| p == (t[0], t[1])).unwrap();
            t[(bits >> i & 1) as usize]
        }));
    }
    GeneratorSet::new(3, out).unwrap()
}

fn c3_theorem_d2() -> Outcome {
    let gens = all_binary_conservative();
    ensure(gens.len() == 64 && gens == binary_conservative(3).unwrap(), || {
        "the 64 binary conservative functions".into()
    })?;
    let r = verify_decomposition_theorem(Which::D2, &gens, "binary", 2, Scope::Exhaustive, DEFAULT_CAP)
        .map_err(|e| e.to_string())?;
    clean(&r, 511)?;
    let r = verify_decomposition_theorem(
        Which::D2,
        &gens,
        "binary",
        3,
        Scope::Sampled { seed: 2024, samples: 10_000 },
        DEFAULT_CAP,
    )
    .map_err(|e| e.to_string())?;
    clean(&r, 10_000)
}

fn c4_theorem_partial() -> Outcome {
    let gens = uv_symmetric();
    let premise = delta_partial(&gens, DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(premise.holds && !premise.vacuous, || "Δ^∂ premise fails".into())?;
    let r = verify_decomposition_theorem(Which::Partial, &gens, "uv", 2, Scope::Exhaustive, DEFAULT_CAP)
        .map_err(|e| e.to_string())?;
    clean(&r, 511)?;
    let r = verify_decomposition_theorem(
        Which::Partial,
        &gens,
        "uv",
        3,
        Scope::Sampled { seed: 2025, samples: 2_000 },
        DEFAULT_CAP,
    )
    .map_err(|e| e.to_string())?;
    clean(&r, 2_000)
}

/// All ternary conservative functions with the minority pattern below rank 3.
fn all_l_functions() -> GeneratorSet {
    let rank3: Vec<[u8; 3]> =
        (0..27u8).map(|c| [c / 9, c / 3 % 3, c % 3]).filter(|t| t[0] != t[1] && t[1] != t[2] && t[0] != t[2]).collect();
    let mut out = Vec::new();
    for choice in 0..729usize {
        out.push(table(3, 3, |t| {
            if t[1] == t[2] {
                t[0]
            } else if t[0] == t[2] {
                t[1]
            } else if t[0] == t[1] {
                t[2]
            } else {
                let i = rank3.iter().position(|r| r == t).unwrap();
                t[choice / 3usize.pow(i as u32) % 3]
            }
        }));
    }
    GeneratorSet::new(3, out).unwrap()
}

fn c5_theorem_s3() -> Outcome {
    let gens = all_l_functions();
    ensure(gens.len() == 729 && gens == l_functions(3).unwrap(), || "the 729 ℓ-functions".into())?;
    let premise = delta_s(&gens, 3, DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(premise.holds && !premise.vacuous, || "Δ^s_3 premise fails".into())?;
    let r = verify_decomposition_theorem(Which::S, &gens, "L", 2, Scope::Exhaustive, DEFAULT_CAP)
        .map_err(|e| e.to_string())?;
    ensure(r.premise.last().map(|p| p.n) == Some(3), || "verified at n ≠ 3".into())?;
    clean(&r, 511)?;
    let r = verify_decomposition_theorem(
        Which::S,
        &gens,
        "L",
        3,
        Scope::Sampled { seed: 2026, samples: 2_000 },
        DEFAULT_CAP,
    )
    .map_err(|e| e.to_string())?;
    clean(&r, 2_000)
}

fn rank2_pairs(k: u8) -> Vec<[u8; 2]> {
    (0..k).flat_map(|x| (0..k).filter(move |&y| y != x).map(move |y| [x, y])).collect()
}

fn relation(k: u8, pred: impl Fn([u8; 2], [u8; 2]) -> bool) -> BTreeSet<([u8; 2], [u8; 2])> {
    let ps = rank2_pairs(k);
    ps.iter().flat_map(|&x| ps.iter().map(move |&y| (x, y))).filter(|&(x, y)| pred(x, y)).collect()
}

/// Binary conservative functions on four elements that commute with every
/// `x ↦ x ⊕ s`, act as a projection on each 2-subset, and are not
/// projections themselves.
fn klein_by_search() -> GeneratorSet {
    let off: Vec<(u8, u8)> = (0..4u8).flat_map(|x| (0..4u8).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let mut out = Vec::new();
    for bits in 0..1u32 << off.len() {
        let f = |x: u8, y: u8| -> u8 {
            if x == y {
                return x;
            }
            let i = off.iter().position(|&p| p == (x, y)).unwrap();
            if bits >> i & 1 == 0 {
                x
            } else {
                y
            }
        };
        let commutes = (0..4u8).all(|s| off.iter().all(|&(x, y)| f(x ^ s, y ^ s) == f(x, y) ^ s));
        let projection_on_pairs = off.iter().all(|&(x, y)| (f(x, y) == x) == (f(y, x) == y));
        let first = off.iter().all(|&(x, y)| f(x, y) == x);
        let second = off.iter().all(|&(x, y)| f(x, y) == y);
        if commutes && projection_on_pairs && !first && !second {
            out.push(table(4, 2, |t| f(t[0], t[1])));
        }
    }
    GeneratorSet::new(4, out).unwrap()
}

fn c6_special_relations() -> Outcome {
    let up = relation(3, |[a, b], [c, d]| (a == c && b == d) || (b == c && a != d) || (a == d && b != c));
    let pm = relation(4, |x, y| {
        let (rx, ry): (BTreeSet<u8>, BTreeSet<u8>) = (x.into(), y.into());
        rx == ry || rx.is_disjoint(&ry)
    });
    let uv = relation_r(&uv_symmetric(), 2, DEFAULT_CAP).and_then(|r| r.rank2_part(3)).map_err(|e| e.to_string())?;
    ensure(uv.pairs == up, || format!("R_2(uv) has {} pairs, R_↑ has {}", uv.len(), up.len()))?;
    let klein = klein_by_search();
    ensure(klein.len() == 6 && klein == klein_generators(), || format!("{} Klein generators found", klein.len()))?;
    let kl = relation_r(&klein, 2, DEFAULT_CAP).and_then(|r| r.rank2_part(4)).map_err(|e| e.to_string())?;
    ensure(kl.pairs == pm, || format!("R_2(klein) has {} pairs, R_± has {}", kl.len(), pm.len()))
}

/// The type of a pair of rank-2 pairs, with mixed types written `ij` for
/// `a_i = b_j`.
fn pair_type(a: [u8; 2], b: [u8; 2]) -> String {
    if a == b {
        return "0".into();
    }
    if a[0] == b[1] && a[1] == b[0] {
        return "1".into();
    }
    for i in 0..2 {
        for j in 0..2 {
            if a[i] == b[j] && a[1 - i] != b[1 - j] {
                return format!("{i}{j}");
            }
        }
    }
    "2".into()
}

fn c7_triangle_claims() -> Outcome {
    let mut checked = 0;
    for k in 2..=4 {
        for e in builtin_catalog(k).unwrap() {
            let r = finclone::clone::min_nonprojection_arity(&e.gens, e.gens.max_arity().max(3)).unwrap();
            if r.finite() != Some(2) {
                continue;
            }
            checked += 1;
            let r2 = relation_r(&e.gens, 2, DEFAULT_CAP).and_then(|r| r.rank2_part(k)).map_err(|x| x.to_string())?;
            let t0 = triangle_rel(&e.gens, 0).map_err(|x| x.to_string())?;
            let t1 = triangle_rel(&e.gens, 1).map_err(|x| x.to_string())?;
            ensure(t0 == r2 && t1 == r2, || format!("{}: ⊳_0, ⊳_1 and R_2 differ", e.name))?;
            let kk = k as u8;
            let everything: BTreeSet<String> = rank2_pairs(kk)
                .iter()
                .flat_map(|&a| rank2_pairs(kk).into_iter().map(move |b| pair_type(a, b)))
                .collect();
            let set = |s: &[&str]| -> BTreeSet<String> { s.iter().map(|x| x.to_string()).collect() };
            // at k=2 the first and third sets coincide; count them once
            let mut cases = BTreeSet::from([everything, set(&["0"]), set(&["0", "1"])]);
            if k == 4 {
                cases.insert(set(&["0", "1", "2"]));
            }
            if k == 3 {
                cases.insert(set(&["0", "01", "10"]));
            }
            let matching = cases
                .iter()
                .filter(|types| {
                    let by_type = relation(kk, |a, b| types.contains(&pair_type(a, b)));
                    by_type == t0.pairs && by_type == t1.pairs
                })
                .count();
            ensure(matching == 1, || format!("{}: ⊳ matches {matching} of the case sets", e.name))?;
        }
    }
    ensure(checked >= 5, || format!("only {checked} entries with r = 2"))
}

fn c8_rigidity() -> Outcome {
    let l = all_l_functions();
    let decode = |c: usize, n: usize, k: usize| -> Vec<u8> {
        (0..n).map(|i| (c / k.pow((n - 1 - i) as u32) % k) as u8).collect()
    };
    let encode = |t: &[u8], k: usize| t.iter().fold(0, |acc, &x| acc * k + x as usize);
    for n in 1..=3 {
        let cells: Vec<usize> =
            (0..3usize.pow(n as u32)).filter(|&c| decode(c, n, 3).iter().collect::<BTreeSet<_>>().len() < 3).collect();
        let s = slice(&l, n, Some(&cells), DEFAULT_CAP).map_err(|e| e.to_string())?;
        for t in &s.members {
            for sc in 0..27 {
                let sigma = decode(sc, 3, 3);
                for (i, &c) in cells.iter().enumerate() {
                    let moved: Vec<u8> = decode(c, n, 3).iter().map(|&x| sigma[x as usize]).collect();
                    let j = cells.binary_search(&encode(&moved, 3)).unwrap();
                    ensure(t[j] == sigma[t[i] as usize], || format!("ℒ: f(σ·a) ≠ σ(f(a)) at n={n}, σ={sigma:?}"))?;
                }
            }
        }
    }
    let r4 = symmetric_closure(&GeneratorSet::new(4, [rank4_generator()]).unwrap());
    for n in 1..=4 {
        let cells: Vec<usize> =
            (0..4usize.pow(n as u32)).filter(|&c| decode(c, n, 4).iter().collect::<BTreeSet<_>>().len() < 4).collect();
        let s = slice(&r4, n, Some(&cells), DEFAULT_CAP).map_err(|e| e.to_string())?;
        let projections: Vec<Vec<u8>> = (0..n).map(|i| cells.iter().map(|&c| decode(c, n, 4)[i]).collect()).collect();
        for t in &s.members {
            ensure(projections.contains(t), || {
                format!("rank-4 clone: a {n}-ary member is no projection below rank 4")
            })?;
        }
    }
    Ok(())
}

fn c9_property_suites() -> Outcome {
    let catalog: Vec<_> = (2..=4).flat_map(|k| builtin_catalog(k).unwrap()).collect();
    let r = verify_lemma_suite(&catalog, 99, 100);
    ensure(r.passed(), || format!("{} failures, first {:?}", r.failures.len(), r.failures.first()))?;
    for name in [
        "invariant operations",
        "galois connection",
        "decomposition",
        "separation",
        "every index works",
        "slices are invariant",
    ] {
        let part = r.parts.iter().find(|p| p.name == name).ok_or_else(|| format!("suite {name} missing"))?;
        ensure(part.instances >= 100, || format!("suite {name} ran {} instances", part.instances))?;
    }
    let control = verify_lemma_suite(&[corrupted_uv_entry()], 99, 20);
    ensure(!control.passed(), || "the corrupted generator table went unnoticed".into())
}

fn c10_chi_injectivity() -> Outcome {
    for (k, pairs) in [(2, 15), (3, 10)] {
        let cat = builtin_catalog(k).unwrap();
        let r = chi_injectivity_check(&cat, 3).map_err(|e| e.to_string())?;
        ensure(r.skipped == 0, || format!("k={k}: {} pairs with equal slices", r.skipped))?;
        clean(&r, pairs)?;
    }
    Ok(())
}

fn c11_oracle_agreement() -> Outcome {
    let maj = GeneratorSet::new(2, [boolean(3, |x| (x[0] && x[1]) || (x[1] && x[2]) || (x[0] && x[2]))]).unwrap();
    let xor3 = GeneratorSet::new(2, [boolean(3, |x| x[0] ^ x[1] ^ x[2])]).unwrap();
    for (gens, name) in [(&maj, "maj"), (&xor3, "xor3")] {
        for (m, count) in [(1, 3), (2, 15), (3, 255)] {
            let r =
                verify_oracle_agreement(gens, name, m, Scope::Exhaustive, DEFAULT_CAP).map_err(|e| e.to_string())?;
            clean(&r, count)?;
        }
    }
    let uv = uv_symmetric();
    let bin = all_binary_conservative();
    let runs =
        [(&uv, "uv", 2, 1, 125), (&uv, "uv", 3, 2, 125), (&bin, "binary", 2, 3, 125), (&bin, "binary", 3, 4, 125)];
    let mut total = 0;
    for (gens, name, m, seed, samples) in runs {
        let r = verify_oracle_agreement(gens, name, m, Scope::Sampled { seed, samples }, DEFAULT_CAP)
            .map_err(|e| e.to_string())?;
        clean(&r, samples)?;
        total += samples;
    }
    ensure(total == 500, || "instance count".into())
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 11] = [
        ("u/v composite is a ∂-function", c1_uv_composite, Duration::from_secs(1)),
        ("Post class identification", c2_post_identification, Duration::from_secs(5)),
        ("Δ² decomposition on k=3", c3_theorem_d2, Duration::from_secs(300)),
        ("Δ^∂ decomposition on ⟨u,v⟩", c4_theorem_partial, Duration::from_secs(300)),
        ("Δ^s_3 decomposition on ℒ(3)", c5_theorem_s3, Duration::from_secs(300)),
        ("special relations R_↑ and R_±", c6_special_relations, Duration::from_secs(30)),
        ("⊳ claims on r=2 entries", c7_triangle_claims, Duration::MAX),
        ("rigidity lemmas", c8_rigidity, Duration::MAX),
        ("property suites", c9_property_suites, Duration::MAX),
        ("χ injectivity", c10_chi_injectivity, Duration::from_secs(60)),
        ("dual-path oracle agreement", c11_oracle_agreement, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome =
            outcome.and_then(|()| ensure(elapsed <= *budget, || format!("took {elapsed:?}, budget {budget:?}")));
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({:.2?})", i + 1, elapsed),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({:.2?}): {why}", i + 1, elapsed);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
