//! A definitional invariance check that shares no code with the closure
//! engines: slices are built as whole tables by naive composition, and
//! preservation is tested member by member.

use std::collections::HashSet;

use rayon::prelude::*;

use super::{scope_sets, Failure, Scope, Side, VerificationReport};
use crate::clone::{Closer, GeneratorSet};
use crate::error::{Error, Result};
use crate::galois::{in_inv_with, QSet};

/// Every `n`-ary member of the generated clone as a full table, in
/// discovery order. `cap` bounds the number of members.
pub fn naive_slice(gens: &GeneratorSet, n: usize, cap: usize) -> Result<Vec<Vec<u8>>> {
    let k = gens.k();
    let len = crate::func::table_len(k, n).filter(|&l| l <= 1 << 20).ok_or_else(|| Error::input("table too large"))?;
    let mut members: Vec<Vec<u8>> =
        (0..n).map(|i| (0..len).map(|c| (c / k.pow((n - 1 - i) as u32) % k) as u8).collect()).collect();
    members.dedup();
    let mut seen: HashSet<Vec<u8>> = members.iter().cloned().collect();
    let mut done = 0;
    while done < members.len() {
        let end = members.len();
        for g in gens.functions() {
            let a = g.arity();
            let mut pick = vec![0usize; a];
            loop {
                if pick.iter().any(|&p| p >= done) {
                    let table: Vec<u8> = (0..len)
                        .map(|c| {
                            let idx = pick.iter().fold(0usize, |acc, &p| acc * k + members[p][c] as usize);
                            g.table()[idx]
                        })
                        .collect();
                    if seen.insert(table.clone()) {
                        members.push(table);
                        if members.len() > cap {
                            return Err(Error::Capacity { arity: n, reached: members.len(), cap });
                        }
                    }
                }
                if !crate::clone::odometer(&mut pick, end) {
                    break;
                }
            }
        }
        done = end;
    }
    Ok(members)
}

/// `H ∈ Inv_Q ⟨gens⟩` by definition: every member of arity at most
/// `min(|H|, max generator arity)` maps rows of `H` into `H`. Larger arities
/// add nothing: a member applied to rows with repeats is a minor of one of
/// arity `≤ |H|`, and every generator already sits in the checked slices.
pub fn oracle_in_inv(gens: &GeneratorSet, h: &QSet, cap: usize) -> Result<bool> {
    if gens.k() != h.k() {
        return Err(Error::CarrierMismatch { expected: gens.k(), found: h.k() });
    }
    if h.is_empty() {
        return Ok(true);
    }
    let rows: HashSet<&[u8]> = h.rows().iter().map(Vec::as_slice).collect();
    let k = h.k();
    let top = h.len().min(gens.max_arity());
    for n in 1..=top {
        for f in naive_slice(gens, n, cap)? {
            let mut pick = vec![0usize; n];
            let mut image = vec![0u8; h.m()];
            loop {
                for (q, v) in image.iter_mut().enumerate() {
                    let idx = pick.iter().fold(0usize, |acc, &p| acc * k + h.rows()[p][q] as usize);
                    *v = f[idx];
                }
                if !rows.contains(image.as_slice()) {
                    return Ok(false);
                }
                if !crate::clone::odometer(&mut pick, h.len()) {
                    break;
                }
            }
        }
    }
    Ok(true)
}

/// Compares [`in_inv_with`] against [`oracle_in_inv`] on every set in scope.
pub fn verify_oracle_agreement(
    gens: &GeneratorSet,
    name: &str,
    m: usize,
    scope: Scope,
    cap: usize,
) -> Result<VerificationReport> {
    let closer = Closer::new(gens);
    let hs = scope_sets(gens.k(), m, scope, Some(&closer))?;
    let outcomes: Vec<(bool, Option<Failure>)> = hs
        .par_iter()
        .map(|h| {
            let fast = in_inv_with(&closer, h)?;
            let slow = oracle_in_inv(gens, h, cap)?;
            let failure = (fast != slow).then(|| Failure {
                clone: name.into(),
                check: "oracle agreement".into(),
                h: Some(h.clone()),
                side: Side::Property,
                detail: format!("in_inv = {fast}, oracle = {slow}"),
            });
            Ok((slow, failure))
        })
        .collect::<Result<_>>()?;
    let mut report = VerificationReport::new("oracle agreement", name, scope);
    report.positive = outcomes.iter().filter(|o| o.0).count();
    report.part(&format!("m = {m}"), hs.len(), outcomes.into_iter().filter_map(|o| o.1).collect());
    Ok(report)
}
