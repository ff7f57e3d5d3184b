//! Executable cross-checks of the decomposition theorems, the
//! classification, and the supporting lemmas.
//!
//! Every verifier compares two independently computed sides on each
//! instance and records mismatches as replayable [`Failure`] bundles.

use serde::Serialize;

use crate::conditions::DeltaReport;
use crate::error::{Error, Result};
use crate::func::table_len;
use crate::galois::QSet;

mod injectivity;
mod lemmas;
mod main_theorem;
mod oracle;
mod sampling;
mod theorems;

pub use injectivity::chi_injectivity_check;
pub use lemmas::{corrupted_uv_entry, verify_lemma_suite};
pub use main_theorem::{check_main_instance, klein_closed, minority_closed, verify_main};
pub use oracle::{naive_slice, oracle_in_inv, verify_oracle_agreement};
pub use sampling::{sample_sets, BATCH};
pub use theorems::{check_theorem_instance, theorem_premise, verify_decomposition_theorem, Which};

/// Largest `k^m` for which every nonempty `H ⊆ A^m` is enumerated.
pub const EXHAUSTIVE_CELL_LIMIT: usize = 16;

/// Which sets `H` a verifier runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scope {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

/// The side of an equivalence that broke, or a one-sided property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `H` is invariant but the right-hand conditions fail.
    OnlyIf,
    /// The right-hand conditions hold but `H` is not invariant. The if
    /// direction follows from intersections of invariant cylinders, so this
    /// points at a bug in the checker itself.
    If,
    Property,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub clone: String,
    pub check: String,
    pub h: Option<QSet>,
    pub side: Side,
    pub detail: String,
}

/// Counts for one named sub-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartSummary {
    pub name: String,
    pub instances: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub statement: String,
    pub clone: String,
    pub scope: Scope,
    pub instances: usize,
    /// Instances on which the left side held (e.g. invariant sets).
    pub positive: usize,
    /// Instances outside the statement's hypotheses.
    pub skipped: usize,
    pub premise: Vec<DeltaReport>,
    pub parts: Vec<PartSummary>,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub(crate) fn new(statement: &str, clone: &str, scope: Scope) -> Self {
        VerificationReport {
            statement: statement.into(),
            clone: clone.into(),
            scope,
            instances: 0,
            positive: 0,
            skipped: 0,
            premise: Vec::new(),
            parts: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Adds a sub-check's outcome.
    pub(crate) fn part(&mut self, name: &str, instances: usize, failures: Vec<Failure>) {
        self.instances += instances;
        self.parts.push(PartSummary { name: name.into(), instances, failures: failures.len() });
        self.failures.extend(failures);
    }
}

/// The sets `H` named by a scope, in canonical order for exhaustive runs
/// and in draw order for sampled ones.
pub fn scope_sets(k: usize, m: usize, scope: Scope, closer: Option<&crate::clone::Closer>) -> Result<Vec<QSet>> {
    match scope {
        Scope::Exhaustive => {
            let n = table_len(k, m).unwrap_or(usize::MAX);
            if n > EXHAUSTIVE_CELL_LIMIT {
                return Err(Error::Capacity { arity: m, reached: n, cap: EXHAUSTIVE_CELL_LIMIT });
            }
            Ok((1u64..1 << n).map(|mask| QSet::from_mask(k, m, mask)).collect())
        }
        Scope::Sampled { seed, samples } => sample_sets(k, m, seed, samples, closer),
    }
}

/// Outcome of one instance of an equivalence.
#[derive(Clone, Debug)]
pub(crate) struct Instance {
    pub left: bool,
    /// `None` when every right-hand condition holds, else the first that fails.
    pub right_failure: Option<String>,
}

impl Instance {
    pub(crate) fn failure(&self, clone: &str, check: &str, h: &QSet) -> Option<Failure> {
        let side = match (self.left, &self.right_failure) {
            (true, Some(_)) => Side::OnlyIf,
            (false, None) => Side::If,
            _ => return None,
        };
        Some(Failure {
            clone: clone.into(),
            check: check.into(),
            h: Some(h.clone()),
            side,
            detail: match &self.right_failure {
                Some(why) => format!("H is invariant but {why}"),
                None => "right side holds but H is not invariant".into(),
            },
        })
    }
}

/// The right-hand side shared by all decomposition statements: every listed
/// restriction is invariant and `H` is decomposable over `decomp`.
pub(crate) fn restrictions_and_decomposition(
    closer: &crate::clone::Closer,
    h: &QSet,
    restrictions: &[Vec<usize>],
    decomp: &[&[Vec<usize>]],
) -> Result<Option<String>> {
    for p in restrictions.iter().filter(|p| !p.is_empty()) {
        let hp = crate::galois::restrict_qset(h, p)?;
        if !crate::galois::in_inv_with(closer, &hp)? {
            return Ok(Some(format!("H|{p:?} is not invariant")));
        }
    }
    let fam = crate::decomp::SubsetFamily::union(h.m(), decomp)?;
    if !crate::decomp::is_decomposable(h, &fam)? {
        return Ok(Some(format!("H is not decomposable over {:?}", fam.sets())));
    }
    Ok(None)
}

/// `[Q]^1`.
pub(crate) fn singletons(m: usize) -> Vec<Vec<usize>> {
    (0..m).map(|q| vec![q]).collect()
}

/// `Q^{[B]}` for every 2-subset `B`.
pub(crate) fn within_pairs(h: &QSet) -> Vec<Vec<usize>> {
    let k = h.k() as u8;
    (0..k).flat_map(|x| (x + 1..k).map(move |y| [x, y])).map(|b| crate::decomp::q_within(h, &b)).collect()
}
