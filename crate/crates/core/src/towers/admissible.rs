use crate::error::{Error, Result};
use crate::lattice::{normal_subgroups, p_radicals};
use crate::subgroup::Subgroup;

use super::tower::Tower;
use super::verify::{verify, Criteria, VerifyOptions};

/// Upper bound on the number of assignments tried.
pub const ADMISSIBLE_SEARCH_CAP: u128 = 100_000;

/// Every choice of designated subgroups, one nontrivial normal subgroup per
/// level, under which the tower passes `criteria`. Each returned assignment
/// re-verifies by construction.
pub fn find_admissible_a(t: &Tower, criteria: Criteria, opts: &VerifyOptions) -> Result<Vec<Vec<Subgroup>>> {
    if criteria == Criteria::Wilson {
        return Err(Error::InvalidParameters(
            "the wilson criteria do not use designated subgroups".into(),
        ));
    }
    let mut candidates: Vec<Vec<Subgroup>> = Vec::new();
    for g in t.levels() {
        let pool = match criteria {
            Criteria::ProP(p) => {
                let f = p_radicals(g, p)?.frattini_of_op;
                normal_subgroups(f.group())?
                    .members()
                    .iter()
                    .map(|a| a.reambient(g))
                    .collect::<Vec<_>>()
            }
            _ => normal_subgroups(g)?.members().to_vec(),
        };
        candidates.push(pool.into_iter().filter(|a| !a.is_trivial()).collect());
    }
    let total = candidates
        .iter()
        .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
        .unwrap_or(u128::MAX);
    if total > ADMISSIBLE_SEARCH_CAP {
        return Err(Error::CapExceeded {
            what: "admissible assignment search",
            order: total,
            cap: ADMISSIBLE_SEARCH_CAP,
        });
    }
    let mut found = Vec::new();
    let mut choice = vec![0usize; t.len()];
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(found);
    }
    loop {
        let assignment: Vec<Subgroup> = choice
            .iter()
            .zip(&candidates)
            .map(|(&i, c)| c[i].clone())
            .collect();
        let trial = t.with_designated(assignment.iter().cloned().map(Some).collect())?;
        if verify(&trial, criteria, opts).passed() {
            found.push(assignment);
        }
        // odometer, top level varying fastest
        let mut k = t.len();
        loop {
            if k == 0 {
                return Ok(found);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}
