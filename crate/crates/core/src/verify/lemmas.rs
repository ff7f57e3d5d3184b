//! Property suites for the Galois connection, decompositions, separation,
//! and the structural lemmas behind the classification.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Failure, Scope, Side, VerificationReport};
use crate::catalog::{CloneCatalogEntry, DeltaKind};
use crate::chi::{characteristic_and_case, relation_r};
use crate::clone::{min_nonprojection_arity, slice, symmetric_closure, Closer, GeneratorSet, DEFAULT_CAP};
use crate::conditions::{delta_2, delta_partial, delta_s, triangle_case, triangle_rel, uv_pair, DeltaReport};
use crate::decomp::{
    decomposition_intersection, pair_shape, strongly_separates, weakly_separates, PairShape, SubsetFamily,
};
use crate::error::Result;
use crate::func::{cells_by_rank, decode_into, encode_unchecked, table_len, FiniteFunction};
use crate::galois::{
    enumerate_inv, extend_qset, in_inv_with, invariant_closure_with, pol_bounded, preserves, reindex, restrict_qset,
    QSet,
};

/// Collects failures of one sub-suite; errors become failures.
struct Part<'a> {
    name: &'static str,
    instances: usize,
    failures: Vec<Failure>,
    clone: &'a str,
}

impl<'a> Part<'a> {
    fn new(name: &'static str) -> Self {
        Part { name, instances: 0, failures: Vec::new(), clone: "" }
    }

    fn on(&mut self, clone: &'a str) -> &mut Self {
        self.clone = clone;
        self
    }

    fn check(&mut self, ok: bool, h: Option<&QSet>, detail: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.fail(h, detail());
        }
    }

    fn fail(&mut self, h: Option<&QSet>, detail: String) {
        self.failures.push(Failure {
            clone: self.clone.into(),
            check: self.name.into(),
            h: h.cloned(),
            side: Side::Property,
            detail,
        });
    }

    /// Runs `body`, turning an error into a failure.
    fn guard(&mut self, body: impl FnOnce(&mut Self) -> Result<()>) {
        if let Err(e) = body(self) {
            self.instances += 1;
            self.fail(None, format!("error: {e}"));
        }
    }

    fn finish(self, report: &mut VerificationReport) {
        report.part(self.name, self.instances, self.failures);
    }
}

fn random_set(rng: &mut ChaCha8Rng, k: usize, m: usize, max_rows: usize) -> Result<QSet> {
    let n = table_len(k, m).expect("small");
    let size = rng.gen_range(1..=max_rows.min(n));
    QSet::from_codes(k, m, rand::seq::index::sample(rng, n, size))
}

fn random_invariant(rng: &mut ChaCha8Rng, closer: &Closer, m: usize) -> Result<QSet> {
    let seed = random_set(rng, closer.k(), m, 3)?;
    invariant_closure_with(closer, &seed)
}

/// Widest `m` with `k^m ≤ 64`, so closures stay on the bitmask path.
fn mask_width(k: usize) -> usize {
    (1..=6).take_while(|&m| table_len(k, m).is_some_and(|n| n <= 64)).last().unwrap_or(1)
}

fn random_subset(rng: &mut ChaCha8Rng, m: usize, min: usize) -> Vec<usize> {
    let size = rng.gen_range(min.max(1)..=m);
    let mut s = rand::seq::index::sample(rng, m, size).into_vec();
    s.sort_unstable();
    s
}

fn r_of(gens: &GeneratorSet) -> Result<Option<usize>> {
    Ok(min_nonprojection_arity(gens, gens.max_arity().max(3))?.finite())
}

/// Union-style properties of `Inv_Q`: reindexing, restriction, extension and
/// intersection of invariant sets stay invariant.
fn prop_galois_closure(
    entries: &[(&CloneCatalogEntry, Closer)],
    rng: &mut ChaCha8Rng,
    samples: usize,
    report: &mut VerificationReport,
) {
    let mut part = Part::new("invariant operations");
    for i in 0..samples {
        let (e, closer) = &entries[i % entries.len()];
        let k = e.gens.k();
        let top = if e.gens.max_arity() > 3 { 2 } else { mask_width(k) };
        let m = rng.gen_range(1..top.max(2));
        part.on(&e.name).guard(|part| {
            let h = random_invariant(rng, closer, m)?;
            let h2 = random_invariant(rng, closer, m)?;
            let width = rng.gen_range(1..=top);
            let f: Vec<usize> = (0..width).map(|_| rng.gen_range(0..m)).collect();
            let moved = reindex(&h, &f)?;
            part.check(in_inv_with(closer, &moved)?, Some(&h), || format!("reindexing along {f:?} is not invariant"));
            let p = random_subset(rng, m, 1);
            part.check(in_inv_with(closer, &restrict_qset(&h, &p)?)?, Some(&h), || format!("H|{p:?} is not invariant"));
            if m < top {
                let mut at = random_subset(rng, m + 1, m);
                at.truncate(m);
                let ext = extend_qset(&h, &at, m + 1)?;
                part.check(in_inv_with(closer, &ext)?, Some(&h), || format!("extension along {at:?} is not invariant"));
            }
            part.check(in_inv_with(closer, &h.intersect(&h2)?)?, Some(&h), || "intersection is not invariant".into());
            Ok(())
        });
    }
    part.finish(report);
}

/// The `(Inv_Q, Pol_Q)` connection on `A^2` for two-element carriers, with
/// polymorphisms of arity at most 3: both maps are antitone and both
/// composites are extensive.
fn prop_galois_connection(
    entries: &[(&CloneCatalogEntry, Closer)],
    rng: &mut ChaCha8Rng,
    samples: usize,
    report: &mut VerificationReport,
) {
    const BOUND: usize = 3;
    let mut part = Part::new("galois connection");
    let boolean: Vec<&(&CloneCatalogEntry, Closer)> = entries.iter().filter(|(e, _)| e.gens.k() == 2).collect();
    if boolean.is_empty() {
        return part.finish(report);
    }
    for i in 0..samples {
        let (e, _) = boolean[i % boolean.len()];
        part.on(&e.name).guard(|part| {
            let family = |rng: &mut ChaCha8Rng, n: usize| -> Result<Vec<QSet>> {
                (0..n).map(|_| random_set(rng, 2, 2, 4)).collect()
            };
            let big_n = rng.gen_range(1..=4);
            let big = family(rng, big_n)?;
            let small: Vec<QSet> = big.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
            let pol_big = pol_bounded(2, &big, BOUND, DEFAULT_CAP)?;
            let pol_small = pol_bounded(2, &small, BOUND, DEFAULT_CAP)?;
            let inside = |set: &crate::clone::FunctionSet, f: &FiniteFunction| {
                set.arity_slice(f.arity()).binary_search(f).is_ok()
            };
            part.check(pol_big.iter().all(|f| inside(&pol_small, f)), None, || "Pol is not antitone".into());
            let mut extensive = true;
            for h in &big {
                for f in pol_big.iter() {
                    extensive &= preserves(f, h)?;
                }
            }
            part.check(extensive, None, || "a set escapes Inv Pol of its family".into());
            let gens = e.gens.functions();
            let sub = GeneratorSet::new(2, gens.iter().filter(|_| rng.gen_bool(0.5)).cloned())?;
            let inv_all = enumerate_inv(&e.gens, 2, 16)?;
            let inv_sub = enumerate_inv(&sub, 2, 16)?;
            part.check(inv_all.iter().all(|h| inv_sub.binary_search(h).is_ok()), None, || "Inv is not antitone".into());
            let pol_inv = pol_bounded(2, &inv_all, BOUND, DEFAULT_CAP)?;
            part.check(gens.iter().all(|g| g.arity() > BOUND || inside(&pol_inv, g)), None, || {
                "a generator escapes Pol Inv".into()
            });
            Ok(())
        });
    }
    part.finish(report);
}

/// `H ⊆ ⋂ H_(𝓡)` and `(⋂ H_(𝓡))|_R = H|_R` for `R ∈ 𝓡`.
fn prop_decomposition(
    entries: &[(&CloneCatalogEntry, Closer)],
    rng: &mut ChaCha8Rng,
    samples: usize,
    report: &mut VerificationReport,
) {
    let mut part = Part::new("decomposition");
    for i in 0..samples {
        let (e, _) = &entries[i % entries.len()];
        let k = e.gens.k();
        let m = mask_width(k).min(4);
        part.on(&e.name).guard(|part| {
            let cells = table_len(k, m).expect("small");
            let h = random_set(rng, k, m, cells)?;
            let fam_n = rng.gen_range(1..=4);
            let fam = SubsetFamily::new(m, (0..fam_n).map(|_| random_subset(rng, m, 1)))?;
            let meet = decomposition_intersection(&h, &fam)?;
            part.check(h.is_subset(&meet), Some(&h), || {
                format!("H is not inside its decomposition over {:?}", fam.sets())
            });
            for r in fam.sets() {
                part.check(restrict_qset(&meet, r)? == restrict_qset(&h, r)?, Some(&h), || {
                    format!("restriction to {r:?} changed")
                });
            }
            Ok(())
        });
    }
    part.finish(report);
}

fn separation_check(part: &mut Part, h: &QSet, min_width: usize, shapes: &[fn(PairShape) -> bool]) -> Result<()> {
    for p in 0..h.m() {
        for q in 0..h.m() {
            if p == q {
                continue;
            }
            if h.column(q).len() >= min_width {
                for a in h.column(p) {
                    if weakly_separates(h, p, q, a)?.is_some() {
                        let strong = strongly_separates(h, p, q, a)?;
                        part.check(strong, Some(h), || {
                            format!("{p} weakly but not strongly separated from {q} at {a}")
                        });
                    }
                }
            }
            if p < q && (h.column(p).len() >= min_width || h.column(q).len() >= min_width) {
                let shape = pair_shape(h, p, q);
                part.check(shape.is_some_and(|s| shapes.iter().any(|ok| ok(s))), Some(h), || {
                    format!("pair {p},{q} has shape {shape:?}")
                });
            }
        }
    }
    Ok(())
}

/// Weak separation implies strong separation on invariant sets: under
/// `Δ^∂` everywhere, and under `Δ^s_n` when `|H(q)| ≥ n`. The pair shapes
/// follow.
fn lemma_separation(
    entries: &[(&CloneCatalogEntry, Closer)],
    rng: &mut ChaCha8Rng,
    samples: usize,
    report: &mut VerificationReport,
) {
    let mut part = Part::new("separation");
    let mut targets: Vec<(&CloneCatalogEntry, &Closer, usize)> = Vec::new();
    for (e, c) in entries {
        for d in &e.delta {
            match d {
                DeltaKind::Partial => targets.push((e, c, 1)),
                DeltaKind::S(n) => targets.push((e, c, *n)),
                _ => {}
            }
        }
    }
    if targets.is_empty() {
        return part.finish(report);
    }
    let any: fn(PairShape) -> bool = |_| true;
    let no_truncation: fn(PairShape) -> bool = |s| !matches!(s, PairShape::Truncated { .. });
    for i in 0..samples {
        let (e, closer, n) = targets[i % targets.len()];
        let k = e.gens.k();
        // arity-4 generators make wide closures slow
        let m = if e.gens.max_arity() > 3 { 2 } else { mask_width(k).min(4) };
        part.on(&e.name).guard(|part| {
            let h = random_invariant(rng, closer, m)?;
            if n == 1 {
                separation_check(part, &h, 0, &[any])
            } else {
                separation_check(part, &h, n, &[no_truncation])
            }
        });
    }
    part.finish(report);
}

/// A `Δ^s_n` witness index can be moved to every other index.
fn lemma_all_indices(entries: &[(&CloneCatalogEntry, Closer)], report: &mut VerificationReport) {
    let mut part = Part::new("every index works");
    for (e, _) in entries {
        for d in &e.delta {
            if let DeltaKind::S(n) = *d {
                part.on(&e.name).guard(|part| {
                    let r = delta_s(&e.gens, n, DEFAULT_CAP)?;
                    if r.holds && !r.vacuous {
                        part.instances += r.demands_checked.saturating_sub(1);
                        part.check(r.working_indices == (0..n).collect::<Vec<_>>(), None, || {
                            format!("Δ^s_{n} works only for indices {:?}", r.working_indices)
                        });
                    }
                    Ok(())
                });
            }
        }
    }
    part.finish(report);
}

/// `F_[n]`, as a set of rows over `Q = A^n`, is invariant. Runs on random
/// subsets of each entry's generators.
fn claim_slices_invariant(
    entries: &[(&CloneCatalogEntry, Closer)],
    rng: &mut ChaCha8Rng,
    samples: usize,
    report: &mut VerificationReport,
) {
    let mut part = Part::new("slices are invariant");
    for i in 0..samples {
        let (e, _) = &entries[i % entries.len()];
        let k = e.gens.k();
        part.on(&e.name).guard(|part| {
            let mut gens: Vec<FiniteFunction> =
                e.gens.functions().iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
            if let Some(g) = e.gens.functions().choose(rng) {
                gens.push(g.clone());
            }
            gens.truncate(64);
            let sub = GeneratorSet::new(k, gens)?;
            let top = if k == 2 { 3 } else { 2 };
            let n = rng.gen_range(1..=top);
            let s = slice(&sub, n, None, DEFAULT_CAP)?;
            let h = QSet::new(k, s.cells.len(), s.members)?;
            part.check(in_inv_with(&Closer::new(&sub), &h)?, Some(&h), || {
                format!("the {n}-ary slice is not invariant")
            });
            Ok(())
        });
    }
    part.finish(report);
}

fn decode(c: usize, n: usize, k: usize) -> Vec<u8> {
    let mut t = vec![0u8; n];
    decode_into(c, k, &mut t);
    t
}

/// For `r(F) ≥ 3`: members commute with every map `σ: A → A` on tuples of
/// rank below `r`.
fn claim_rigidity(entries: &[(&CloneCatalogEntry, Closer)], report: &mut VerificationReport) {
    let mut part = Part::new("rigidity below r");
    for (e, _) in entries {
        part.on(&e.name).guard(|part| {
            let Some(r) = r_of(&e.gens)? else { return Ok(()) };
            if r < 3 {
                return Ok(());
            }
            let k = e.gens.k();
            let maps: Vec<Vec<u8>> = (0..k.pow(k as u32)).map(|c| decode(c, k, k)).collect();
            for n in 1..=3 {
                let cells = cells_by_rank(n, k, |x| x < r);
                let s = slice(&e.gens, n, Some(&cells), DEFAULT_CAP)?;
                for t in &s.members {
                    for sigma in &maps {
                        let ok = cells.iter().enumerate().all(|(i, &c)| {
                            let moved: Vec<u8> = decode(c, n, k).iter().map(|&x| sigma[x as usize]).collect();
                            let j = cells.binary_search(&encode_unchecked(&moved, k)).expect("rank does not grow");
                            t[j] == sigma[t[i] as usize]
                        });
                        part.check(ok, None, || format!("an {n}-ary member does not commute with {sigma:?}"));
                    }
                }
            }
            Ok(())
        });
    }
    part.finish(report);
}

/// For `r(F) ≥ 4`: every member of arity `n ≤ 4` is a projection on
/// `A^n_{<r}`.
fn lemma_projection_below_r(entries: &[(&CloneCatalogEntry, Closer)], report: &mut VerificationReport) {
    let mut part = Part::new("projections below r");
    for (e, _) in entries {
        part.on(&e.name).guard(|part| {
            let Some(r) = r_of(&e.gens)? else { return Ok(()) };
            if r < 4 {
                return Ok(());
            }
            for n in 1..=4 {
                let cells = cells_by_rank(n, e.gens.k(), |x| x < r);
                let s = slice(&e.gens, n, Some(&cells), DEFAULT_CAP)?;
                let projections: Vec<Vec<u8>> = (0..n).map(|i| s.projection_trace(i)).collect();
                for t in &s.members {
                    part.check(projections.contains(t), None, || {
                        format!("an {n}-ary member is no projection below rank {r}")
                    });
                }
            }
            Ok(())
        });
    }
    part.finish(report);
}

/// For `r(F) = 2`: `⊳_0 = ⊳_1 = R_2(F)` on rank-2 pairs, and the realized
/// pair types form one of the five admissible sets.
fn claim_triangle(entries: &[(&CloneCatalogEntry, Closer)], report: &mut VerificationReport) {
    let mut part = Part::new("triangle relations");
    for (e, _) in entries {
        part.on(&e.name).guard(|part| {
            if r_of(&e.gens)? != Some(2) {
                return Ok(());
            }
            let k = e.gens.k();
            let r2 = relation_r(&e.gens, 2, DEFAULT_CAP)?.rank2_part(k)?;
            let t0 = triangle_rel(&e.gens, 0)?;
            let t1 = triangle_rel(&e.gens, 1)?;
            part.check(t0 == r2, None, || "⊳_0 differs from R_2".into());
            part.check(t1 == r2, None, || "⊳_1 differs from R_2".into());
            part.check(triangle_case(&t0).is_some(), None, || "realized pair types match no case".into());
            Ok(())
        });
    }
    part.finish(report);
}

fn premise_holds(r: &DeltaReport) -> bool {
    r.holds && !r.vacuous
}

/// Generators are conservative and symmetric-closed, the Δ-profile holds,
/// and the characteristic lands in the expected case.
fn catalog_profile(entries: &[(&CloneCatalogEntry, Closer)], report: &mut VerificationReport) {
    let mut part = Part::new("catalog profile");
    for (e, _) in entries {
        part.on(&e.name).guard(|part| {
            part.check(e.gens.all_conservative(), None, || "a generator is not conservative".into());
            part.check(symmetric_closure(&e.gens) == e.gens, None, || {
                "generators are not closed under conjugation".into()
            });
            for d in &e.delta {
                let ok = match *d {
                    // Δ^s_3, Δ^∂ and Δ² are vacuous on two elements
                    DeltaKind::S(n) => delta_s(&e.gens, n, DEFAULT_CAP)?.holds,
                    DeltaKind::Partial => delta_partial(&e.gens, DEFAULT_CAP)?.holds,
                    DeltaKind::Two => delta_2(&e.gens, DEFAULT_CAP)?.holds,
                    DeltaKind::TwoOnTriples => {
                        let k = e.gens.k() as u8;
                        let mut all = true;
                        for x in 0..k {
                            for y in x + 1..k {
                                for z in y + 1..k {
                                    all &= premise_holds(&delta_2(&e.gens.restrict(&[x, y, z])?, DEFAULT_CAP)?);
                                }
                            }
                        }
                        all
                    }
                };
                part.check(ok, None, || format!("{d:?} fails"));
            }
            let (_, case) = characteristic_and_case(&e.gens)?;
            part.check(case == e.expected_case, None, || format!("case {case}, expected {}", e.expected_case));
            Ok(())
        });
    }
    part.finish(report);
}

/// Runs every sub-suite on the applicable entries. Sampled suites draw
/// `samples` instances each from a generator seeded with `seed`.
pub fn verify_lemma_suite(catalog: &[CloneCatalogEntry], seed: u64, samples: usize) -> VerificationReport {
    let name = catalog.iter().map(|e| format!("{}/{}", e.gens.k(), e.name)).collect::<Vec<_>>().join(",");
    let mut report = VerificationReport::new("lemmas", &name, Scope::Sampled { seed, samples });
    if catalog.is_empty() {
        return report;
    }
    let entries: Vec<(&CloneCatalogEntry, Closer)> = catalog.iter().map(|e| (e, Closer::new(&e.gens))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    prop_galois_closure(&entries, &mut rng, samples, &mut report);
    prop_galois_connection(&entries, &mut rng, samples, &mut report);
    prop_decomposition(&entries, &mut rng, samples, &mut report);
    lemma_separation(&entries, &mut rng, samples, &mut report);
    lemma_all_indices(&entries, &mut report);
    claim_slices_invariant(&entries, &mut rng, samples, &mut report);
    claim_rigidity(&entries, &mut report);
    lemma_projection_below_r(&entries, &mut report);
    claim_triangle(&entries, &mut report);
    catalog_profile(&entries, &mut report);
    report
}

/// The `u`/`v` entry with `u(0, 1)` overwritten by `2`: a negative control
/// whose generators are no longer conservative.
pub fn corrupted_uv_entry() -> CloneCatalogEntry {
    let (u, v) = uv_pair(3).expect("k = 3");
    let mut table = u.into_table();
    table[1] = 2;
    let u = FiniteFunction::new(3, 2, table).expect("valid table");
    CloneCatalogEntry {
        name: "uv-corrupted".into(),
        gens: symmetric_closure(&GeneratorSet::new(3, [u, v]).expect("carrier 3")),
        expected_case: 6,
        delta: vec![DeltaKind::Partial],
    }
}
