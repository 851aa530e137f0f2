//! Exact branch-and-bound for MinSum and MinMax on smart profiles.
//!
//! Fixing an agent's rank may force its vote, which may force the votes of
//! other fixed agents. Once the agents still unresolved fall apart into
//! groups that mention no one outside their group (other than resolved
//! agents), each group is optimized on its own. Reduction instances have
//! exactly this shape: after the variable voters are fixed, every clause
//! gadget is an independent group of a few voters.

use super::{Consistency, SmartInstance};
use crate::ballots::Profile;
use crate::classic::Certificate;
use crate::error::{Error, Result};
use crate::AgentId;

/// Default cap on explored search nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub certificate: Certificate,
    pub votes: Vec<bool>,
    /// Sum or maximum of the selected ranks.
    pub value: usize,
}

/// A consistent certificate of minimum total rank.
pub fn search_minsum(profile: &Profile, node_budget: u64) -> Result<SearchOutcome> {
    run(&SmartInstance::new(profile)?, Combine::Sum, node_budget)
}

/// A consistent certificate of minimum maximal rank.
pub fn search_minmax(profile: &Profile, node_budget: u64) -> Result<SearchOutcome> {
    run(&SmartInstance::new(profile)?, Combine::Max, node_budget)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Combine {
    Sum,
    Max,
}

impl Combine {
    fn apply(self, a: usize, b: usize) -> usize {
        match self {
            Combine::Sum => a + b,
            Combine::Max => a.max(b),
        }
    }
}

type Assignment = Vec<(AgentId, usize)>;

struct Search<'a> {
    inst: &'a SmartInstance,
    combine: Combine,
    rank: Vec<Option<usize>>,
    value: Vec<Option<bool>>,
    watchers: Vec<Vec<AgentId>>,
    neighbours: Vec<Vec<AgentId>>,
    trail: Vec<AgentId>,
    stamp: Vec<u64>,
    epoch: u64,
    nodes: u64,
    budget: u64,
}

fn run(inst: &SmartInstance, combine: Combine, budget: u64) -> Result<SearchOutcome> {
    let n = inst.n();
    let mut watchers = vec![Vec::new(); n];
    let mut neighbours = vec![Vec::new(); n];
    for a in 0..n {
        let mut mentioned: Vec<AgentId> = (0..inst.num_options(a))
            .flat_map(|r| inst.support(a, r).iter().copied())
            .collect();
        mentioned.sort_unstable();
        mentioned.dedup();
        for &v in &mentioned {
            watchers[v].push(a);
            neighbours[v].push(a);
        }
        neighbours[a].extend(mentioned);
    }
    for list in &mut neighbours {
        list.sort_unstable();
        list.dedup();
    }
    let mut s = Search {
        inst,
        combine,
        rank: vec![None; n],
        value: vec![None; n],
        watchers,
        neighbours,
        trail: Vec::new(),
        stamp: vec![0; n],
        epoch: 0,
        nodes: 0,
        budget,
    };
    for a in 0..n {
        if inst.num_options(a) == 1 {
            s.fix(a, 0)?;
        }
    }
    let everyone: Vec<AgentId> = (0..n).collect();
    let (_, assignment) = s
        .solve(&everyone, usize::MAX)?
        .expect("the all-backup certificate is consistent");
    let mut ranks: Vec<usize> = s.rank.iter().map(|r| r.unwrap_or(0)).collect();
    for (a, r) in assignment {
        ranks[a] = r;
    }
    let certificate = Certificate::new(ranks);
    let votes = match inst.check(&certificate)? {
        Consistency::Consistent { votes, .. } => votes,
        Consistency::Inconsistent { .. } => unreachable!("search returned an inconsistent certificate"),
    };
    let value = match combine {
        Combine::Sum => certificate.sum(),
        Combine::Max => certificate.max_rank(),
    };
    Ok(SearchOutcome {
        certificate,
        votes,
        value,
    })
}

impl Search<'_> {
    /// Fixes `a` to `rank` and propagates forced votes.
    fn fix(&mut self, a: AgentId, rank: usize) -> Result<()> {
        self.rank[a] = Some(rank);
        let mut queue = vec![a];
        while let Some(x) = queue.pop() {
            let Some(r) = self.rank[x] else { continue };
            if self.value[x].is_some() {
                continue;
            }
            let value = &self.value;
            if let Some(v) = self.inst.option(x, r).forced_value(|y| value[y])? {
                self.value[x] = Some(v);
                self.trail.push(x);
                queue.extend(
                    self.watchers[x]
                        .iter()
                        .copied()
                        .filter(|&w| self.rank[w].is_some() && self.value[w].is_none()),
                );
            }
        }
        Ok(())
    }

    fn unfix(&mut self, a: AgentId, mark: usize) {
        for x in self.trail.drain(mark..) {
            self.value[x] = None;
        }
        self.rank[a] = None;
    }

    /// Cheapest completion of the agents in `set` with cost below `bound`,
    /// as the cost and the ranks chosen for agents that were unfixed.
    fn solve(&mut self, set: &[AgentId], bound: usize) -> Result<Option<(usize, Assignment)>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                size: self.nodes as u128,
                budget: self.budget as u128,
                hint: "the exact search explored too many nodes",
            });
        }
        let mut settled = 0usize;
        let mut floor = 0usize;
        let mut unresolved = Vec::new();
        let mut free = false;
        for &a in set {
            match (self.value[a], self.rank[a]) {
                (Some(_), Some(r)) => settled = self.combine.apply(settled, r),
                (None, Some(r)) => {
                    floor = self.combine.apply(floor, r);
                    unresolved.push(a);
                }
                (None, None) => {
                    free = true;
                    unresolved.push(a);
                }
                (Some(_), None) => unreachable!("only fixed agents resolve"),
            }
        }
        let lower = self.combine.apply(settled, floor);
        if lower >= bound {
            return Ok(None);
        }
        if unresolved.is_empty() {
            return Ok(Some((settled, Vec::new())));
        }
        if !free || self.hopeless(&unresolved, lower, bound)? {
            return Ok(None);
        }

        let groups = self.split(&unresolved);
        if groups.len() > 1 {
            let mut total = settled;
            let mut assignment = Vec::new();
            for group in groups {
                let sub_bound = match self.combine {
                    Combine::Sum => bound - total,
                    Combine::Max => bound,
                };
                match self.solve(&group, sub_bound)? {
                    None => return Ok(None),
                    Some((c, part)) => {
                        total = self.combine.apply(total, c);
                        assignment.extend(part);
                    }
                }
                if total >= bound {
                    return Ok(None);
                }
            }
            return Ok(Some((total, assignment)));
        }

        let pick = unresolved
            .iter()
            .copied()
            .filter(|&a| self.rank[a].is_none())
            .max_by_key(|&a| (self.watchers[a].len(), std::cmp::Reverse(a)))
            .expect("a free agent exists");
        let mut best: Option<(usize, Assignment)> = None;
        let mut bound = bound;
        for r in 0..self.inst.num_options(pick) {
            if self.combine.apply(lower, r) >= bound {
                break;
            }
            let mark = self.trail.len();
            self.fix(pick, r)?;
            let result = self.solve(set, bound);
            self.unfix(pick, mark);
            if let Some((c, mut part)) = result? {
                part.push((pick, r));
                bound = c;
                best = Some((c, part));
                if c == lower {
                    break;
                }
            }
        }
        Ok(best)
    }

    /// Whether some agent of `unresolved` can never resolve when free
    /// agents only take ranks within `bound`. An agent can resolve only if
    /// one of its usable options is constant already or mentions another
    /// agent that can resolve, so agents outside the least set closed under
    /// this rule are stuck.
    fn hopeless(&mut self, unresolved: &[AgentId], lower: usize, bound: usize) -> Result<bool> {
        self.epoch += 1;
        let member = self.epoch;
        for &a in unresolved {
            self.stamp[a] = member;
        }
        self.epoch += 1;
        let live = self.epoch;
        let mut queue = Vec::new();
        for &a in unresolved {
            if self.rank[a].is_some() {
                continue;
            }
            let mut seed = false;
            for r in self.usable(a, lower, bound) {
                let value = &self.value;
                if self.inst.option(a, r).forced_value(|y| value[y])?.is_some() {
                    seed = true;
                    break;
                }
            }
            if seed {
                self.stamp[a] = live;
                queue.push(a);
            }
        }
        let mut reached = queue.len();
        while let Some(z) = queue.pop() {
            for i in 0..self.watchers[z].len() {
                let w = self.watchers[z][i];
                if self.stamp[w] != member {
                    continue;
                }
                let unlocked = self.usable(w, lower, bound).any(|r| self.inst.support(w, r).contains(&z));
                if unlocked {
                    self.stamp[w] = live;
                    reached += 1;
                    queue.push(w);
                }
            }
        }
        Ok(reached < unresolved.len())
    }

    /// Ranks `a` may still end up with.
    fn usable(&self, a: AgentId, lower: usize, bound: usize) -> impl Iterator<Item = usize> + '_ {
        let fixed = self.rank[a];
        let combine = self.combine;
        (0..self.inst.num_options(a))
            .filter(move |&r| fixed.map_or(combine.apply(lower, r) < bound, |f| f == r))
    }

    /// Connected groups of `agents`, linked by mentions in any option.
    fn split(&mut self, agents: &[AgentId]) -> Vec<Vec<AgentId>> {
        self.epoch += 1;
        let member = self.epoch;
        for &a in agents {
            self.stamp[a] = member;
        }
        self.epoch += 1;
        let seen = self.epoch;
        let mut groups = Vec::new();
        for &start in agents {
            if self.stamp[start] != member {
                continue;
            }
            self.stamp[start] = seen;
            let mut group = vec![start];
            let mut i = 0;
            while i < group.len() {
                let v = group[i];
                i += 1;
                for &u in &self.neighbours[v] {
                    if self.stamp[u] == member {
                        self.stamp[u] = seen;
                        group.push(u);
                    }
                }
            }
            group.sort_unstable();
            groups.push(group);
        }
        groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smart::tests::example1;
    use crate::smart::{brute_minmax, brute_minsum, DEFAULT_BUDGET};

    #[test]
    fn example1_values() {
        let p = example1();
        assert_eq!(search_minsum(&p, DEFAULT_NODE_BUDGET).unwrap().value, 2);
        assert_eq!(search_minmax(&p, DEFAULT_NODE_BUDGET).unwrap().value, 1);
    }

    #[test]
    fn budget_is_enforced() {
        let p = example1();
        assert!(matches!(search_minsum(&p, 1), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn agrees_with_brute_force_on_small_profiles() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=7);
            let p = crate::random::random_smart_profile(&mut rng, n, 3, true);
            let ms = brute_minsum(&p, DEFAULT_BUDGET).unwrap();
            let mm = brute_minmax(&p, DEFAULT_BUDGET).unwrap();
            let s = search_minsum(&p, DEFAULT_NODE_BUDGET).unwrap();
            let m = search_minmax(&p, DEFAULT_NODE_BUDGET).unwrap();
            assert_eq!(vec![s.value], ms.value);
            assert_eq!(vec![m.value], mm.value);
        }
    }
}
