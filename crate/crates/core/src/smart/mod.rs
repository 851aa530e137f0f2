//! Smart ballots over the binary domain.
//!
//! A certificate picks one option per agent; it is consistent when the
//! forced-assignment procedure resolves every agent: repeatedly find an
//! unresolved agent whose selected function is constant under the votes
//! known so far and record that constant.

mod brute;
mod minmax_or;
mod search;

pub use brute::{brute_leximin, brute_minmax, brute_minsum, brute_optimal, Objective, OptimalSet, Solution, DEFAULT_BUDGET};
pub use minmax_or::{minmax_and, minmax_or, minmax_polynomial};
pub use search::{search_minmax, search_minsum, SearchOutcome, DEFAULT_NODE_BUDGET};

use crate::ballots::Profile;
use crate::classic::Certificate;
use crate::error::{Error, Result};
use crate::functions::DnfFunction;
use crate::AgentId;

/// Largest number of agents for fixed-point counting.
pub const DEFAULT_FIXED_POINT_CAP: usize = 20;

/// A smart profile prepared for repeated evaluation: every agent's options
/// are its entries followed by its backup as a constant function.
#[derive(Clone, Debug)]
pub struct SmartInstance {
    options: Vec<Vec<DnfFunction>>,
    supports: Vec<Vec<Vec<AgentId>>>,
}

/// Outcome of the forced-assignment procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Consistency {
    Consistent {
        votes: Vec<bool>,
        /// Agents in the order they were resolved.
        order: Vec<AgentId>,
    },
    Inconsistent {
        /// Agents left unresolved.
        stuck: Vec<AgentId>,
        partial: Vec<Option<bool>>,
    },
}

impl Consistency {
    pub fn votes(&self) -> Option<&[bool]> {
        match self {
            Consistency::Consistent { votes, .. } => Some(votes),
            Consistency::Inconsistent { .. } => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent { .. })
    }
}

impl SmartInstance {
    pub fn new(profile: &Profile) -> Result<Self> {
        let backups = profile.backup_values()?;
        let options: Vec<Vec<DnfFunction>> = profile
            .ballots()
            .iter()
            .zip(backups)
            .map(|(b, value)| {
                let mut o = b.entries.clone();
                o.push(DnfFunction::constant(value));
                o
            })
            .collect();
        let n = options.len();
        for (a, opts) in options.iter().enumerate() {
            for f in opts {
                if let Some(&bad) = f.support().iter().find(|&&v| v >= n) {
                    return Err(Error::InvalidProfile {
                        model: "smart",
                        reason: format!("agent {} mentions unknown agent id {bad}", profile.agent_name(a)),
                    });
                }
            }
        }
        let supports = options
            .iter()
            .map(|opts| opts.iter().map(DnfFunction::support).collect())
            .collect();
        Ok(SmartInstance { options, supports })
    }

    pub fn n(&self) -> usize {
        self.options.len()
    }

    /// Number of options `k_a + 1` of an agent.
    pub fn num_options(&self, agent: AgentId) -> usize {
        self.options[agent].len()
    }

    pub fn option(&self, agent: AgentId, rank: usize) -> &DnfFunction {
        &self.options[agent][rank]
    }

    pub fn support(&self, agent: AgentId, rank: usize) -> &[AgentId] {
        &self.supports[agent][rank]
    }

    /// Product of the option counts, saturating.
    pub fn num_certificates(&self) -> u128 {
        self.options
            .iter()
            .try_fold(1u128, |acc, o| acc.checked_mul(o.len() as u128))
            .unwrap_or(u128::MAX)
    }

    pub fn check_range(&self, c: &Certificate) -> Result<()> {
        if c.ranks.len() != self.n() {
            return Err(Error::CertificateLength {
                expected: self.n(),
                found: c.ranks.len(),
            });
        }
        for (agent, &rank) in c.ranks.iter().enumerate() {
            if rank >= self.num_options(agent) {
                return Err(Error::RankOutOfRange {
                    agent,
                    rank,
                    max: self.num_options(agent) - 1,
                });
            }
        }
        Ok(())
    }

    /// Runs the forced-assignment procedure with a work list.
    pub fn check(&self, c: &Certificate) -> Result<Consistency> {
        self.check_range(c)?;
        let n = self.n();
        let mut watchers: Vec<Vec<AgentId>> = vec![Vec::new(); n];
        for a in 0..n {
            for &v in self.support(a, c.ranks[a]) {
                watchers[v].push(a);
            }
        }
        let mut votes: Vec<Option<bool>> = vec![None; n];
        let mut order = Vec::with_capacity(n);
        let mut queue: Vec<AgentId> = (0..n).rev().collect();
        while let Some(a) = queue.pop() {
            if votes[a].is_some() {
                continue;
            }
            let f = self.option(a, c.ranks[a]);
            if let Some(value) = f.forced_value(|v| votes[v])? {
                votes[a] = Some(value);
                order.push(a);
                queue.extend(watchers[a].iter().copied().filter(|&w| votes[w].is_none()));
            }
        }
        Ok(finish(votes, order))
    }

    /// Runs the procedure resolving one agent at a time, letting `pick`
    /// choose among all currently resolvable agents.
    pub fn check_with(&self, c: &Certificate, mut pick: impl FnMut(&[AgentId]) -> usize) -> Result<Consistency> {
        self.check_range(c)?;
        let n = self.n();
        let mut votes: Vec<Option<bool>> = vec![None; n];
        let mut order = Vec::with_capacity(n);
        loop {
            let mut ready = Vec::new();
            let mut values = Vec::new();
            for a in (0..n).filter(|&a| votes[a].is_none()) {
                if let Some(v) = self.option(a, c.ranks[a]).forced_value(|x| votes[x])? {
                    ready.push(a);
                    values.push(v);
                }
            }
            if ready.is_empty() {
                break;
            }
            let i = pick(&ready).min(ready.len() - 1);
            votes[ready[i]] = Some(values[i]);
            order.push(ready[i]);
        }
        Ok(finish(votes, order))
    }

    /// Number of solutions of `X_a = B_a(c_a)(X)` over all `2^n` vote
    /// vectors.
    pub fn count_fixed_points(&self, c: &Certificate, cap: usize) -> Result<usize> {
        self.check_range(c)?;
        let n = self.n();
        if n > cap {
            return Err(Error::BudgetExceeded {
                size: 1u128 << n.min(127),
                budget: 1u128 << cap,
                hint: "fixed points are counted by brute force",
            });
        }
        let chosen: Vec<&DnfFunction> = (0..n).map(|a| self.option(a, c.ranks[a])).collect();
        let count = (0u64..1 << n)
            .filter(|&mask| {
                let value = |v: AgentId| mask >> v & 1 == 1;
                (0..n).all(|a| chosen[a].evaluate(value) == value(a))
            })
            .count();
        Ok(count)
    }
}

fn finish(votes: Vec<Option<bool>>, order: Vec<AgentId>) -> Consistency {
    if order.len() == votes.len() {
        Consistency::Consistent {
            votes: votes.into_iter().map(|v| v.expect("resolved")).collect(),
            order,
        }
    } else {
        Consistency::Inconsistent {
            stuck: (0..votes.len()).filter(|&a| votes[a].is_none()).collect(),
            partial: votes,
        }
    }
}

/// Checks a certificate against a smart profile.
pub fn check_consistency(profile: &Profile, c: &Certificate) -> Result<Consistency> {
    SmartInstance::new(profile)?.check(c)
}

/// Counts the solutions of the fixed-point system of a certificate.
pub fn count_fixed_points(profile: &Profile, c: &Certificate) -> Result<usize> {
    SmartInstance::new(profile)?.count_fixed_points(c, DEFAULT_FIXED_POINT_CAP)
}
