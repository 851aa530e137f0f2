//! Agents, alternatives, ballots and profiles.
//!
//! One representation serves both models. A classic ballot is a smart
//! ballot whose entries are all projections; the classic model is a
//! validation constraint rather than a separate type.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::functions::{DnfFunction, FunctionClass};
use crate::{AgentId, AltId};

/// Which ballot model a profile is interpreted under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Classic,
    Smart,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Classic => "classic",
            Model::Smart => "smart",
        }
    }
}

/// `B_a(0) ≻ … ≻ B_a(k_a - 1) ≻ backup`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ballot {
    pub entries: Vec<DnfFunction>,
    pub backup: AltId,
}

impl Ballot {
    pub fn new(entries: Vec<DnfFunction>, backup: AltId) -> Self {
        Ballot { entries, backup }
    }

    /// A ballot with no delegations.
    pub fn direct(backup: AltId) -> Self {
        Ballot {
            entries: Vec::new(),
            backup,
        }
    }

    /// Number of delegation entries `k_a`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    alternatives: Vec<String>,
    agents: Vec<String>,
    ballots: Vec<Ballot>,
}

impl Profile {
    /// Assembles a profile. Only the shape is checked here; semantic
    /// problems are reported by [`Profile::validate`].
    pub fn new(alternatives: Vec<String>, agents: Vec<String>, ballots: Vec<Ballot>) -> Result<Self> {
        if agents.len() != ballots.len() {
            return Err(Error::Malformed(format!(
                "{} agents but {} ballots",
                agents.len(),
                ballots.len()
            )));
        }
        Ok(Profile {
            alternatives,
            agents,
            ballots,
        })
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn ballot(&self, agent: AgentId) -> &Ballot {
        &self.ballots[agent]
    }

    pub fn agent_name(&self, agent: AgentId) -> &str {
        &self.agents[agent]
    }

    pub fn agent_index(&self, name: &str) -> Option<AgentId> {
        self.agents.iter().position(|a| a == name)
    }

    pub fn alternative_index(&self, label: &str) -> Option<AltId> {
        self.alternatives.iter().position(|a| a == label)
    }

    /// Number of agents `n`.
    pub fn n(&self) -> usize {
        self.agents.len()
    }

    /// Number of delegation-graph edges `m = n + Σ k_a`.
    pub fn m(&self) -> usize {
        self.agents.len() + self.ballots.iter().map(Ballot::len).sum::<usize>()
    }

    /// Largest ballot size `ℓ`.
    pub fn max_ballot_len(&self) -> usize {
        self.ballots.iter().map(Ballot::len).max().unwrap_or(0)
    }

    /// Ids of the alternatives labelled `"0"` and `"1"`, when these are the
    /// only two alternatives.
    pub fn binary_alternatives(&self) -> Result<[AltId; 2]> {
        match (
            self.alternatives.len(),
            self.alternative_index("0"),
            self.alternative_index("1"),
        ) {
            (2, Some(zero), Some(one)) => Ok([zero, one]),
            _ => Err(Error::NonBinaryDomain {
                found: self.alternatives.clone(),
            }),
        }
    }

    /// Truth value of each agent's backup vote under the binary domain.
    pub fn backup_values(&self) -> Result<Vec<bool>> {
        let [_, one] = self.binary_alternatives()?;
        Ok(self.ballots.iter().map(|b| b.backup == one).collect())
    }

    /// Replaces the ballot of `agent`, keeping everything else.
    pub fn with_ballot(&self, agent: AgentId, ballot: Ballot) -> Profile {
        let mut p = self.clone();
        p.ballots[agent] = ballot;
        p
    }

    /// Delegates of a classic ballot, or an error naming the first
    /// non-projection entry.
    pub fn classic_delegates(&self, agent: AgentId) -> Result<Vec<AgentId>> {
        self.ballots[agent]
            .entries
            .iter()
            .enumerate()
            .map(|(i, f)| {
                f.as_projection().ok_or_else(|| Error::InvalidProfile {
                    model: "classic",
                    reason: format!("entry {i} of agent {} is not a single delegate", self.agents[agent]),
                })
            })
            .collect()
    }

    /// Checks every rule of `model` and collects all violations.
    pub fn validate(&self, model: Model) -> ValidationReport {
        let mut violations = Vec::new();
        let mut seen = HashSet::new();
        for (i, name) in self.agents.iter().enumerate() {
            if !seen.insert(name.as_str()) {
                violations.push(Violation::DuplicateAgent { agent: i });
            }
        }
        let mut seen = HashSet::new();
        for (i, label) in self.alternatives.iter().enumerate() {
            if !seen.insert(label.as_str()) {
                violations.push(Violation::DuplicateAlternative { alternative: i });
            }
        }
        let binary = self.binary_alternatives().ok();
        if model == Model::Smart && binary.is_none() {
            violations.push(Violation::NonBinaryDomain {
                found: self.alternatives.clone(),
            });
        }

        for (agent, ballot) in self.ballots.iter().enumerate() {
            if ballot.backup >= self.alternatives.len() {
                violations.push(Violation::UnknownBackup { agent });
            }
            for (entry, f) in ballot.entries.iter().enumerate() {
                if f.mentions(agent) {
                    violations.push(Violation::SelfReference { agent, entry });
                }
                for referenced in f.support() {
                    if referenced >= self.n() {
                        violations.push(Violation::UnknownReference {
                            agent,
                            entry,
                            referenced,
                        });
                    }
                }
                if model == Model::Classic && f.as_projection().is_none() {
                    violations.push(Violation::NotProjection { agent, entry });
                }
            }
            self.check_distinct_entries(agent, model, binary, &mut violations);
        }
        ValidationReport { violations }
    }

    fn check_distinct_entries(
        &self,
        agent: AgentId,
        model: Model,
        binary: Option<[AltId; 2]>,
        out: &mut Vec<Violation>,
    ) {
        let ballot = &self.ballots[agent];
        let mut options: Vec<DnfFunction> = ballot.entries.clone();
        // In the smart model the backup is itself a constant function and
        // must differ from every entry.
        let with_backup = model == Model::Smart && binary.is_some();
        if let (true, Some([_, one])) = (with_backup, binary) {
            options.push(DnfFunction::constant(ballot.backup == one));
        }
        for i in 0..options.len() {
            for j in i + 1..options.len() {
                match options[i].extensionally_equal(&options[j]) {
                    Ok(true) => out.push(Violation::EqualEntries {
                        agent,
                        first: i,
                        second: j,
                    }),
                    Ok(false) => {}
                    Err(_) => out.push(Violation::Unverifiable {
                        agent,
                        first: i,
                        second: j,
                    }),
                }
            }
        }
    }

    /// The smallest function class containing every entry.
    pub fn classify(&self) -> FunctionClass {
        self.ballots
            .iter()
            .flat_map(|b| b.entries.iter())
            .fold(FunctionClass::Liquid, |acc, f| acc.join(FunctionClass::of(f)))
    }
}

/// One broken validation rule. Entry index `k_a` denotes the backup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateAgent { agent: AgentId },
    DuplicateAlternative { alternative: AltId },
    NonBinaryDomain { found: Vec<String> },
    UnknownBackup { agent: AgentId },
    SelfReference { agent: AgentId, entry: usize },
    UnknownReference { agent: AgentId, entry: usize, referenced: AgentId },
    NotProjection { agent: AgentId, entry: usize },
    EqualEntries { agent: AgentId, first: usize, second: usize },
    Unverifiable { agent: AgentId, first: usize, second: usize },
}

impl Violation {
    pub fn describe(&self, profile: &Profile) -> String {
        let name = |a: AgentId| profile.agents.get(a).map(String::as_str).unwrap_or("?");
        match self {
            Violation::DuplicateAgent { agent } => format!("agent name {:?} is declared twice", name(*agent)),
            Violation::DuplicateAlternative { alternative } => format!(
                "alternative {:?} is declared twice",
                profile.alternatives[*alternative]
            ),
            Violation::NonBinaryDomain { found } => {
                format!("smart ballots need alternatives \"0\" and \"1\", found {found:?}")
            }
            Violation::UnknownBackup { agent } => format!("agent {} has an unknown backup vote", name(*agent)),
            Violation::SelfReference { agent, entry } => {
                format!("entry {entry} of agent {} mentions the agent itself", name(*agent))
            }
            Violation::UnknownReference {
                agent,
                entry,
                referenced,
            } => format!(
                "entry {entry} of agent {} mentions unknown agent id {referenced}",
                name(*agent)
            ),
            Violation::NotProjection { agent, entry } => format!(
                "entry {entry} of agent {} is not a single delegate",
                name(*agent)
            ),
            Violation::EqualEntries { agent, first, second } => format!(
                "entries {first} and {second} of agent {} are equal",
                name(*agent)
            ),
            Violation::Unverifiable { agent, first, second } => format!(
                "cannot decide whether entries {first} and {second} of agent {} are equal",
                name(*agent)
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Converts a failed report into an error for `model`.
    pub fn into_result(self, profile: &Profile, model: Model) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidProfile {
                model: model.name(),
                reason: v.describe(profile),
            }),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Builds profiles from agent names and textual formulas, resolving names
/// once all agents are declared.
#[derive(Clone, Debug)]
pub struct ProfileBuilder {
    alternatives: Vec<String>,
    agents: Vec<(String, Vec<String>, String)>,
}

impl ProfileBuilder {
    pub fn new<S: Into<String>>(alternatives: impl IntoIterator<Item = S>) -> Self {
        ProfileBuilder {
            alternatives: alternatives.into_iter().map(Into::into).collect(),
            agents: Vec::new(),
        }
    }

    /// A builder over the binary domain `{"0", "1"}`.
    pub fn binary() -> Self {
        Self::new(["0", "1"])
    }

    /// Declares an agent with entries in the syntax of
    /// [`DnfFunction::parse`] and a backup alternative label.
    pub fn agent(mut self, name: &str, entries: &[&str], backup: &str) -> Self {
        self.agents.push((
            name.to_string(),
            entries.iter().map(|s| s.to_string()).collect(),
            backup.to_string(),
        ));
        self
    }

    pub fn push_agent(&mut self, name: String, entries: Vec<String>, backup: &str) {
        self.agents.push((name, entries, backup.to_string()));
    }

    pub fn build(self) -> Result<Profile> {
        let index: HashMap<&str, AgentId> = self
            .agents
            .iter()
            .enumerate()
            .map(|(i, (n, _, _))| (n.as_str(), i))
            .collect();
        let mut ballots = Vec::with_capacity(self.agents.len());
        for (_, entries, backup) in &self.agents {
            let entries = entries
                .iter()
                .map(|e| DnfFunction::parse(e, |s| index.get(s).copied()))
                .collect::<Result<Vec<_>>>()?;
            let backup = self
                .alternatives
                .iter()
                .position(|a| a == backup)
                .ok_or_else(|| Error::UnknownAlternative(backup.clone()))?;
            ballots.push(Ballot { entries, backup });
        }
        let agents = self.agents.into_iter().map(|(n, _, _)| n).collect();
        Profile::new(self.alternatives, agents, ballots)
    }
}
