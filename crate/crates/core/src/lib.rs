//! Unravelling of liquid-democracy ballots.
//!
//! Agents submit ranked ballots of delegation options ending in a direct
//! vote. Classic ballots delegate to single agents; smart ballots delegate
//! to Boolean functions of other agents' votes. An unravelling picks one
//! option per agent (a certificate) such that all votes resolve, optimizing
//! the sum, maximum, or sorted vector of the selected ranks.

pub mod axioms;
pub mod ballots;
pub mod classic;
pub mod control;
pub mod error;
pub mod fulkerson;
pub mod functions;
pub mod gadgets;
pub mod random;
mod scc;
pub mod smart;

pub use ballots::{Ballot, Model, Profile, ProfileBuilder, ValidationReport, Violation};
pub use error::{Error, Result};
pub use functions::{DnfFunction, FunctionClass, Literal, PartialAssignment};

/// Index of an agent within its profile.
pub type AgentId = usize;
/// Index of an alternative within its profile.
pub type AltId = usize;
