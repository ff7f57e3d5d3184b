//! The three decomposition theorems as executable equivalences.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    restrictions_and_decomposition, scope_sets, singletons, within_pairs, Instance, Scope, VerificationReport,
};
use crate::clone::{slice, Closer, GeneratorSet};
use crate::conditions::{delta_2, delta_partial, delta_s, DeltaReport};
use crate::decomp::{q_below, two_id, two_one, two_zero};
use crate::error::{Error, Result};
use crate::func::{cells_by_rank, decode_into, majority_minority};
use crate::galois::{in_inv_with, QSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    /// Under `Δ^∂`.
    Partial,
    /// Under "contains a ∂-function", for sets with `|H(q)| ≤ 2`.
    PartialWeak,
    /// Under `Δ^s_n` for the least `n ≥ 3` that holds.
    S,
    D2,
}

impl Which {
    pub fn name(self) -> &'static str {
        match self {
            Which::Partial => "partial",
            Which::PartialWeak => "partial_weak",
            Which::S => "s",
            Which::D2 => "d2",
        }
    }
}

fn require(report: DeltaReport) -> Result<DeltaReport> {
    if report.holds && !report.vacuous {
        Ok(report)
    } else if report.vacuous {
        Err(Error::Premise(format!("{} holds only vacuously", report.condition)))
    } else {
        Err(Error::Premise(format!("{} fails: {:?}", report.condition, report.counterexample)))
    }
}

/// Whether the ternary slice contains a ∂-function, decided on the
/// projected slice over the rank-≤2 cells.
fn contains_partial(gens: &GeneratorSet, cap: usize) -> Result<DeltaReport> {
    let k = gens.k();
    let cells = cells_by_rank(3, k, |r| r <= 2);
    let s = slice(gens, 3, Some(&cells), cap)?;
    let mut t = [0u8; 3];
    let target: Vec<u8> = cells
        .iter()
        .map(|&c| {
            decode_into(c, k, &mut t);
            majority_minority(&t).expect("rank ≤ 2").0
        })
        .collect();
    Ok(DeltaReport {
        condition: "contains_partial".into(),
        n: 3,
        holds: s.members.binary_search(&target).is_ok(),
        vacuous: false,
        index: None,
        working_indices: Vec::new(),
        demands_checked: 1,
        counterexample: None,
    })
}

/// Checks the hypothesis of a statement. Returns the reports and, for
/// [`Which::S`], the `n` used.
pub fn theorem_premise(which: Which, gens: &GeneratorSet, cap: usize) -> Result<(Vec<DeltaReport>, usize)> {
    match which {
        Which::Partial => Ok((vec![require(delta_partial(gens, cap)?)?], 3)),
        Which::PartialWeak => Ok((vec![require(contains_partial(gens, cap)?)?], 3)),
        Which::D2 => Ok((vec![require(delta_2(gens, cap)?)?], 2)),
        Which::S => {
            let mut tried = Vec::new();
            for n in 3..=gens.k() {
                let r = delta_s(gens, n, cap)?;
                if r.holds {
                    tried.push(r);
                    return Ok((tried, n));
                }
                tried.push(r);
            }
            Err(Error::Premise(format!("Δ^s_n fails for every 3 ≤ n ≤ {}", gens.k())))
        }
    }
}

/// Both sides of the statement on one set. `n` is the Δ^s index for
/// [`Which::S`] and ignored otherwise.
pub fn check_theorem_instance(which: Which, closer: &Closer, n: usize, h: &QSet) -> Result<(bool, Option<String>)> {
    let i = instance(which, closer, n, h)?;
    Ok((i.left, i.right_failure))
}

fn instance(which: Which, closer: &Closer, n: usize, h: &QSet) -> Result<Instance> {
    let left = in_inv_with(closer, h)?;
    let ones = singletons(h.m());
    let right_failure = match which {
        Which::Partial | Which::PartialWeak => {
            let fam = [ones, two_zero(h), two_one(h)].concat();
            restrictions_and_decomposition(closer, h, &fam, &[&fam])?
        }
        Which::S => {
            let fam = [ones, two_zero(h), vec![q_below(h, n)]].concat();
            restrictions_and_decomposition(closer, h, &fam, &[&fam])?
        }
        Which::D2 => {
            let blocks = within_pairs(h);
            let restr = [ones.clone(), blocks.clone()].concat();
            restrictions_and_decomposition(closer, h, &restr, &[&ones, &two_id(h), &blocks])?
        }
    };
    Ok(Instance { left, right_failure })
}

/// Runs the equivalence on every nonempty set in scope after checking the
/// hypothesis. A failing hypothesis is an error, never a vacuous pass.
pub fn verify_decomposition_theorem(
    which: Which,
    gens: &GeneratorSet,
    name: &str,
    m: usize,
    scope: Scope,
    cap: usize,
) -> Result<VerificationReport> {
    let (premise, n) = theorem_premise(which, gens, cap)?;
    let closer = Closer::new(gens);
    let hs = scope_sets(gens.k(), m, scope, Some(&closer))?;
    let (hs, skipped): (Vec<QSet>, Vec<QSet>) =
        hs.into_iter().partition(|h| which != Which::PartialWeak || (0..h.m()).all(|q| h.column(q).len() <= 2));
    let outcomes: Vec<Instance> = hs.par_iter().map(|h| instance(which, &closer, n, h)).collect::<Result<_>>()?;
    let check = format!("decomposition/{}", which.name());
    let mut report = VerificationReport::new(&check, name, scope);
    report.premise = premise;
    report.skipped = skipped.len();
    report.positive = outcomes.iter().filter(|o| o.left).count();
    let failures = outcomes.iter().zip(&hs).filter_map(|(o, h)| o.failure(name, &check, h)).collect();
    report.part(&format!("m = {m}"), hs.len(), failures);
    Ok(report)
}
