//! Exhaustive optimization over certificates.
//!
//! Certificates are visited level by level (by total or by maximum rank) so
//! the search stops at the first level containing a consistent one; the
//! returned set holds every optimal certificate in lexicographic order.

use super::{Consistency, SmartInstance};
use crate::ballots::Profile;
use crate::classic::Certificate;
use crate::error::{Error, Result};

/// Default cap on the number of certificates an exhaustive search accepts.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Sum,
    Max,
    /// Descending-sorted rank vector, compared lexicographically.
    Lexi,
}

impl Objective {
    /// Comparison key of a rank vector under this objective.
    pub fn key(self, ranks: &[usize]) -> Vec<usize> {
        match self {
            Objective::Sum => vec![ranks.iter().sum()],
            Objective::Max => vec![ranks.iter().copied().max().unwrap_or(0)],
            Objective::Lexi => {
                let mut r = ranks.to_vec();
                r.sort_unstable_by(|a, b| b.cmp(a));
                r
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub certificate: Certificate,
    pub votes: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalSet {
    pub objective: Objective,
    /// Objective key shared by all members.
    pub value: Vec<usize>,
    pub solutions: Vec<Solution>,
}

impl OptimalSet {
    /// Distinct vote vectors of the optimal certificates, sorted.
    pub fn vote_vectors(&self) -> Vec<Vec<bool>> {
        let mut v: Vec<Vec<bool>> = self.solutions.iter().map(|s| s.votes.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

pub fn brute_minsum(profile: &Profile, budget: u128) -> Result<OptimalSet> {
    brute_optimal(&SmartInstance::new(profile)?, Objective::Sum, budget)
}

pub fn brute_minmax(profile: &Profile, budget: u128) -> Result<OptimalSet> {
    brute_optimal(&SmartInstance::new(profile)?, Objective::Max, budget)
}

pub fn brute_leximin(profile: &Profile, budget: u128) -> Result<OptimalSet> {
    brute_optimal(&SmartInstance::new(profile)?, Objective::Lexi, budget)
}

/// All optimal consistent certificates of `inst`.
pub fn brute_optimal(inst: &SmartInstance, objective: Objective, budget: u128) -> Result<OptimalSet> {
    let size = inst.num_certificates();
    if size > budget {
        return Err(Error::BudgetExceeded {
            size,
            budget,
            hint: "use the polynomial MinMax solver for Or/And profiles or the exact search",
        });
    }
    let caps: Vec<usize> = (0..inst.n()).map(|a| inst.num_options(a) - 1).collect();
    let mut found: Vec<Solution> = Vec::new();
    let mut error = None;
    let mut visit = |ranks: &[usize], found: &mut Vec<Solution>| {
        let c = Certificate::new(ranks.to_vec());
        match inst.check(&c) {
            Ok(Consistency::Consistent { votes, .. }) => found.push(Solution { certificate: c, votes }),
            Ok(Consistency::Inconsistent { .. }) => {}
            Err(e) => error = Some(e),
        }
    };
    let mut ranks = vec![0usize; caps.len()];
    match objective {
        Objective::Sum => {
            let mut suffix = vec![0usize; caps.len() + 1];
            for a in (0..caps.len()).rev() {
                suffix[a] = suffix[a + 1] + caps[a];
            }
            for s in 0..=suffix[0] {
                with_sum(&caps, &suffix, 0, s, &mut ranks, &mut |r| visit(r, &mut found));
                if !found.is_empty() {
                    break;
                }
            }
        }
        Objective::Max => {
            let top = caps.iter().copied().max().unwrap_or(0);
            for w in 0..=top {
                with_max(&caps, 0, w, false, &mut ranks, &mut |r| visit(r, &mut found));
                if !found.is_empty() {
                    break;
                }
            }
        }
        Objective::Lexi => {
            let mut best: Option<Vec<usize>> = None;
            all(&caps, 0, &mut ranks, &mut |r| {
                let key = Objective::Lexi.key(r);
                if best.as_ref().is_some_and(|b| key > *b) {
                    return;
                }
                let before = found.len();
                visit(r, &mut found);
                if found.len() > before && best.as_ref() != Some(&key) {
                    let last = found.pop().expect("just pushed");
                    found.clear();
                    found.push(last);
                    best = Some(key);
                }
            });
        }
    }
    if let Some(e) = error {
        return Err(e);
    }
    let value = found
        .first()
        .map(|s| objective.key(&s.certificate.ranks))
        .expect("the all-backup certificate is consistent");
    Ok(OptimalSet {
        objective,
        value,
        solutions: found,
    })
}

fn with_sum(caps: &[usize], suffix: &[usize], a: usize, left: usize, ranks: &mut [usize], f: &mut impl FnMut(&[usize])) {
    if a == caps.len() {
        if left == 0 {
            f(ranks);
        }
        return;
    }
    if left > suffix[a] {
        return;
    }
    for r in 0..=caps[a].min(left) {
        ranks[a] = r;
        with_sum(caps, suffix, a + 1, left - r, ranks, f);
    }
    ranks[a] = 0;
}

fn with_max(caps: &[usize], a: usize, w: usize, hit: bool, ranks: &mut [usize], f: &mut impl FnMut(&[usize])) {
    if a == caps.len() {
        if hit || w == 0 {
            f(ranks);
        }
        return;
    }
    for r in 0..=caps[a].min(w) {
        ranks[a] = r;
        with_max(caps, a + 1, w, hit || r == w, ranks, f);
    }
    ranks[a] = 0;
}

fn all(caps: &[usize], a: usize, ranks: &mut [usize], f: &mut impl FnMut(&[usize])) {
    if a == caps.len() {
        f(ranks);
        return;
    }
    for r in 0..=caps[a] {
        ranks[a] = r;
        all(caps, a + 1, ranks, f);
    }
    ranks[a] = 0;
}
