//! The JSON ballot file.
//!
//! ```json
//! {
//!   "alternatives": ["0", "1"],
//!   "agents": [
//!     {"name": "a", "entries": [{"dnf": [["b"], ["c"]]}, {"delegate": "b"}], "backup": "0"},
//!     {"name": "b", "entries": [], "backup": "1"}
//!   ]
//! }
//! ```
//!
//! A `dnf` entry lists clauses of literals `"name"` or `"!name"`; `[]` is
//! the constant 0 and `[[]]` the constant 1.

use std::collections::HashMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use unravel_core::{Ballot, DnfFunction, Literal, Profile};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallotFile {
    pub alternatives: Vec<String>,
    pub agents: Vec<AgentSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub name: String,
    #[serde(default)]
    pub entries: Vec<EntrySpec>,
    pub backup: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntrySpec {
    Delegate(String),
    Dnf(Vec<Vec<String>>),
}

impl BallotFile {
    pub fn to_profile(&self) -> Result<Profile> {
        let mut index = HashMap::new();
        for (i, a) in self.agents.iter().enumerate() {
            index.entry(a.name.as_str()).or_insert(i);
        }
        let resolve = |name: &str, at: &dyn Fn() -> String| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| anyhow!("{}: unknown agent {name:?}", at()))
        };
        let mut ballots = Vec::with_capacity(self.agents.len());
        for (i, agent) in self.agents.iter().enumerate() {
            let mut entries = Vec::with_capacity(agent.entries.len());
            for (j, entry) in agent.entries.iter().enumerate() {
                let at = || format!("agents[{i}] ({}).entries[{j}]", agent.name);
                let f = match entry {
                    EntrySpec::Delegate(name) => DnfFunction::projection(resolve(name, &at)?),
                    EntrySpec::Dnf(clauses) => {
                        let mut raw = Vec::with_capacity(clauses.len());
                        for clause in clauses {
                            let mut lits = Vec::with_capacity(clause.len());
                            for lit in clause {
                                lits.push(match lit.strip_prefix('!') {
                                    Some(name) => Literal::neg(resolve(name.trim(), &at)?),
                                    None => Literal::pos(resolve(lit.trim(), &at)?),
                                });
                            }
                            raw.push(lits);
                        }
                        DnfFunction::canonicalize(raw)
                    }
                };
                entries.push(f);
            }
            let backup = self
                .alternatives
                .iter()
                .position(|x| *x == agent.backup)
                .ok_or_else(|| anyhow!("agents[{i}] ({}).backup: unknown alternative {:?}", agent.name, agent.backup))?;
            ballots.push(Ballot::new(entries, backup));
        }
        let names = self.agents.iter().map(|a| a.name.clone()).collect();
        Ok(Profile::new(self.alternatives.clone(), names, ballots)?)
    }

    /// Writes projections as `delegate` entries and everything else as
    /// `dnf` entries.
    pub fn from_profile(profile: &Profile) -> Self {
        let names = profile.agents();
        let agents = (0..profile.n())
            .map(|a| {
                let ballot = profile.ballot(a);
                let entries = ballot
                    .entries
                    .iter()
                    .map(|f| match f.as_projection() {
                        Some(v) => EntrySpec::Delegate(names[v].clone()),
                        None => EntrySpec::Dnf(
                            f.clauses()
                                .iter()
                                .map(|c| {
                                    c.iter()
                                        .map(|l| {
                                            let name = &names[l.agent];
                                            if l.negated {
                                                format!("!{name}")
                                            } else {
                                                name.clone()
                                            }
                                        })
                                        .collect()
                                })
                                .collect(),
                        ),
                    })
                    .collect();
                AgentSpec {
                    name: names[a].clone(),
                    entries,
                    backup: profile.alternatives()[ballot.backup].clone(),
                }
            })
            .collect();
        BallotFile {
            alternatives: profile.alternatives().to_vec(),
            agents,
        }
    }
}

pub fn parse_str(text: &str) -> Result<Profile> {
    let file: BallotFile = serde_json::from_str(text).context("malformed ballot file")?;
    file.to_profile()
}

pub fn read_path(path: &Path) -> Result<Profile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_str(&text).with_context(|| format!("in {}", path.display()))
}

pub fn to_string(profile: &Profile) -> String {
    let mut s = serde_json::to_string_pretty(&BallotFile::from_profile(profile)).expect("plain data serializes");
    s.push('\n');
    s
}

/// Parses comma-separated ranks.
pub fn parse_certificate(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .enumerate()
        .map(|(i, r)| {
            r.trim()
                .parse()
                .with_context(|| format!("certificate position {i}: {:?} is not a rank", r.trim()))
        })
        .collect()
}

/// Parses an edge list `1-2,2-3` over 1-based variables.
pub fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|e| {
            let (i, j) = e
                .split_once('-')
                .ok_or_else(|| anyhow!("edge {e:?} is not of the form i-j"))?;
            Ok((one_based(i)?, one_based(j)?))
        })
        .collect()
}

/// Parses clauses `1 2 3; -1 -2 -3` of signed 1-based variables.
pub fn parse_clauses(text: &str) -> Result<Vec<[Literal; 3]>> {
    text.split(';')
        .filter(|c| !c.trim().is_empty())
        .map(|c| {
            let lits = c
                .split_whitespace()
                .map(|t| {
                    let (neg, v) = match t.strip_prefix('-') {
                        Some(v) => (true, v),
                        None => (false, t),
                    };
                    let v = one_based(v)?;
                    Ok(if neg { Literal::neg(v) } else { Literal::pos(v) })
                })
                .collect::<Result<Vec<_>>>()?;
            match <[Literal; 3]>::try_from(lits) {
                Ok(l) => Ok(l),
                Err(l) => bail!("clause {c:?} has {} literals instead of 3", l.len()),
            }
        })
        .collect()
}

fn one_based(t: &str) -> Result<usize> {
    let v: usize = t.trim().parse().with_context(|| format!("{t:?} is not a variable number"))?;
    v.checked_sub(1).ok_or_else(|| anyhow!("variables are numbered from 1"))
}
