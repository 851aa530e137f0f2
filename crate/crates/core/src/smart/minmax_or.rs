//! Polynomial MinMax for profiles of disjunctions (and, by duality, of
//! conjunctions).
//!
//! For a bound `w`, each agent may use entries of rank at most `w` and its
//! backup if `k_a <= w`. Under a certificate, an agent whose selected
//! disjunction reaches a 1-voter votes 1; all others must form an acyclic
//! dependency graph. So first make the set of agents able to reach a
//! 1-option as large as possible, pointing each at a neighbour on the way,
//! then order the rest topologically. The smallest feasible `w` is found by
//! binary search.

use super::{Consistency, SmartInstance};
use crate::ballots::{Ballot, Profile};
use crate::classic::Certificate;
use crate::error::{Error, Result};
use crate::functions::FunctionClass;
use crate::AgentId;

use super::search::SearchOutcome;

/// MinMax certificate of a profile whose entries are disjunctions.
pub fn minmax_or(profile: &Profile) -> Result<SearchOutcome> {
    let class = profile.classify();
    if !FunctionClass::Or.contains(class) {
        return Err(Error::ClassMismatch {
            expected: "Or",
            found: class.name(),
        });
    }
    let inst = SmartInstance::new(profile)?;
    let top = (0..inst.n()).map(|a| inst.num_options(a) - 1).max().unwrap_or(0);
    // every agent may fall back on its backup once w reaches max k_a
    let (mut lo, mut hi) = (0, top);
    let mut best = feasible(&inst, top).expect("all-backup certificate is feasible");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match feasible(&inst, mid) {
            Some(c) => {
                best = c;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let votes = match inst.check(&best)? {
        Consistency::Consistent { votes, .. } => votes,
        Consistency::Inconsistent { .. } => unreachable!("constructed certificate is consistent"),
    };
    let value = best.max_rank();
    debug_assert!(value <= lo);
    Ok(SearchOutcome {
        certificate: best,
        votes,
        value,
    })
}

/// MinMax certificate of a profile whose entries are conjunctions, solved
/// on the dual profile (0 and 1 swapped, `∧` and `∨` swapped).
pub fn minmax_and(profile: &Profile) -> Result<SearchOutcome> {
    let class = profile.classify();
    if !FunctionClass::And.contains(class) {
        return Err(Error::ClassMismatch {
            expected: "And",
            found: class.name(),
        });
    }
    let [zero, one] = profile.binary_alternatives()?;
    let ballots = profile
        .ballots()
        .iter()
        .map(|b| {
            let entries = b.entries.iter().map(|f| f.dual()).collect::<Result<Vec<_>>>()?;
            let backup = if b.backup == zero { one } else { zero };
            Ok(Ballot::new(entries, backup))
        })
        .collect::<Result<Vec<_>>>()?;
    let dual = Profile::new(profile.alternatives().to_vec(), profile.agents().to_vec(), ballots)?;
    let out = minmax_or(&dual)?;
    Ok(SearchOutcome {
        votes: out.votes.iter().map(|v| !v).collect(),
        ..out
    })
}

/// Dispatches to [`minmax_or`] or [`minmax_and`] by function class.
pub fn minmax_polynomial(profile: &Profile) -> Result<SearchOutcome> {
    let class = profile.classify();
    if FunctionClass::Or.contains(class) {
        minmax_or(profile)
    } else if FunctionClass::And.contains(class) {
        minmax_and(profile)
    } else {
        Err(Error::ClassMismatch {
            expected: "Or or And",
            found: class.name(),
        })
    }
}

/// Ranks available to `a` under bound `w`.
fn allowed(inst: &SmartInstance, a: AgentId, w: usize) -> impl Iterator<Item = usize> {
    let k = inst.num_options(a) - 1;
    (0..=k).filter(move |&r| if r == k { k <= w } else { r <= w })
}

fn feasible(inst: &SmartInstance, w: usize) -> Option<Certificate> {
    let n = inst.n();
    let mut rank: Vec<Option<usize>> = vec![None; n];
    let mut one = vec![false; n];

    for a in 0..n {
        if let Some(r) = allowed(inst, a, w).find(|&r| inst.option(a, r).as_constant() == Some(true)) {
            rank[a] = Some(r);
            one[a] = true;
        }
    }

    // transposed edges a -> b for every allowed disjunction of a mentioning b
    let mut incoming: Vec<Vec<(AgentId, usize)>> = vec![Vec::new(); n];
    for a in (0..n).filter(|&a| !one[a]) {
        for r in allowed(inst, a, w) {
            for &b in inst.support(a, r) {
                incoming[b].push((a, r));
            }
        }
    }
    let mut stack: Vec<AgentId> = (0..n).filter(|&a| one[a]).collect();
    let mut reaches = one.clone();
    while let Some(b) = stack.pop() {
        for &(a, r) in &incoming[b] {
            if !reaches[a] {
                reaches[a] = true;
                rank[a] = Some(r);
                stack.push(a);
            }
        }
    }

    // the rest must vote 0: constants first, then a topological order
    let mut missing: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut waiting: Vec<Vec<(AgentId, usize)>> = vec![Vec::new(); n];
    let mut ready = Vec::new();
    for a in (0..n).filter(|&a| !reaches[a]) {
        let opts: Vec<usize> = allowed(inst, a, w).collect();
        missing[a] = vec![0; inst.num_options(a)];
        for r in opts {
            match inst.option(a, r).as_constant() {
                Some(false) => missing[a][r] = 0,
                Some(true) => unreachable!("1-options were assigned first"),
                None => {
                    let support = inst.support(a, r);
                    missing[a][r] = support.len();
                    for &b in support {
                        waiting[b].push((a, r));
                    }
                }
            }
            if missing[a][r] == 0 && rank[a].is_none() {
                rank[a] = Some(r);
                ready.push(a);
            }
        }
    }
    while let Some(b) = ready.pop() {
        for &(a, r) in &waiting[b] {
            missing[a][r] -= 1;
            if missing[a][r] == 0 && rank[a].is_none() {
                rank[a] = Some(r);
                ready.push(a);
            }
        }
    }
    rank.into_iter()
        .collect::<Option<Vec<usize>>>()
        .map(Certificate::new)
}
