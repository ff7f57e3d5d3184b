//! Distinct clones have distinct characteristics, checked pairwise on a
//! catalog.

use rayon::prelude::*;

use super::{Failure, Scope, Side, VerificationReport};
use crate::catalog::CloneCatalogEntry;
use crate::chi::{characteristic, chi_equal, Characteristic};
use crate::clone::{slice, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::func::cells_by_rank;

/// Whether the clones differ, judged by their slices at arities
/// `1..=bound`. `None` when they agree as far as the slices could be built.
///
/// From arity 3 on, the slices projected to the cells of rank at most 2 are
/// compared first: projections of equal slices are equal, and the projected
/// closure is cheap where the full one is not.
fn slices_differ(a: &CloneCatalogEntry, b: &CloneCatalogEntry, bound: usize) -> Result<Option<bool>> {
    let k = a.gens.k();
    for n in 1..=bound {
        let mut views = vec![None];
        if n >= 3 {
            views.insert(0, Some(cells_by_rank(n, k, |r| r <= 2)));
        }
        for cells in &views {
            let sa = slice(&a.gens, n, cells.as_deref(), DEFAULT_CAP);
            let sb = slice(&b.gens, n, cells.as_deref(), DEFAULT_CAP);
            match (sa, sb) {
                (Ok(sa), Ok(sb)) => {
                    if sa.members != sb.members {
                        return Ok(Some(true));
                    }
                }
                (Err(Error::Capacity { .. }), _) | (_, Err(Error::Capacity { .. })) => return Ok(None),
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
    }
    Ok(Some(false))
}

/// For every pair of entries on the same carrier whose slices differ up to
/// `bound`, the characteristics at `bound` must differ too. Pairs with equal
/// slices are skipped, not failed.
pub fn chi_injectivity_check(catalog: &[CloneCatalogEntry], bound: usize) -> Result<VerificationReport> {
    let name = catalog.iter().map(|e| format!("{}/{}", e.gens.k(), e.name)).collect::<Vec<_>>().join(",");
    let mut report = VerificationReport::new("chi injectivity", &name, Scope::Exhaustive);
    let chis: Vec<Characteristic> =
        catalog.par_iter().map(|e| characteristic(&e.gens, bound)).collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for i in 0..catalog.len() {
        for j in i + 1..catalog.len() {
            if catalog[i].gens.k() == catalog[j].gens.k() {
                pairs.push((i, j));
            }
        }
    }
    let verdicts: Vec<Option<bool>> =
        pairs.par_iter().map(|&(i, j)| slices_differ(&catalog[i], &catalog[j], bound)).collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let mut compared = 0;
    for (&(i, j), verdict) in pairs.iter().zip(verdicts) {
        if verdict != Some(true) {
            report.skipped += 1;
            continue;
        }
        compared += 1;
        if chi_equal(&chis[i], &chis[j])? {
            failures.push(Failure {
                clone: format!("{}, {}", catalog[i].name, catalog[j].name),
                check: "chi injectivity".into(),
                h: None,
                side: Side::Property,
                detail: "different clones share a characteristic".into(),
            });
        }
    }
    report.positive = compared - failures.len();
    report.part("pairs", compared, failures);
    Ok(report)
}
