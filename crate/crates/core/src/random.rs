//! Random profiles for property tests, benchmarks and the `gen` command.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ballots::{Ballot, Profile};
use crate::classic::{DelegationGraph, Edge, EdgeTag};
use crate::functions::{DnfFunction, Literal};
use crate::AgentId;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn binary() -> Vec<String> {
    vec!["0".to_string(), "1".to_string()]
}

/// Up to `k` distinct agents other than `owner`.
fn distinct_others(rng: &mut impl Rng, n: usize, owner: AgentId, k: usize) -> Vec<AgentId> {
    let k = k.min(n.saturating_sub(1));
    if n <= 16 {
        let mut pool: Vec<AgentId> = (0..n).filter(|&v| v != owner).collect();
        pool.shuffle(rng);
        pool.truncate(k);
        return pool;
    }
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let v = rng.gen_range(0..n);
        if v != owner && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Classic profile with `n` agents, ballots of `0..=max_len` delegates and
/// backups drawn from `num_alternatives` alternatives (labelled `0, 1, …`).
pub fn random_classic_profile(rng: &mut impl Rng, n: usize, max_len: usize, num_alternatives: usize) -> Profile {
    let ballots = (0..n)
        .map(|a| {
            let k = rng.gen_range(0..=max_len);
            let entries = distinct_others(rng, n, a, k)
                .into_iter()
                .map(DnfFunction::projection)
                .collect();
            Ballot::new(entries, rng.gen_range(0..num_alternatives))
        })
        .collect();
    let alternatives = (0..num_alternatives).map(|i| i.to_string()).collect();
    Profile::new(alternatives, names(n), ballots).expect("shapes agree")
}

/// Delegation graph of a random classic profile over two alternatives,
/// built without materializing the profile. Every agent ranks between 0
/// and `max_len` delegates.
pub fn random_classic_graph(rng: &mut impl Rng, n: usize, max_len: usize) -> DelegationGraph {
    let mut edges = Vec::with_capacity(n * (max_len / 2 + 1) + n);
    for a in 0..n {
        let k = rng.gen_range(0..=max_len);
        let delegates = distinct_others(rng, n, a, k);
        let len = delegates.len();
        for (rank, d) in delegates.into_iter().enumerate() {
            edges.push(Edge {
                from: a,
                to: d,
                weight: rank as u64,
                tag: EdgeTag::Delegate,
            });
        }
        edges.push(Edge {
            from: a,
            to: n,
            weight: len as u64,
            tag: EdgeTag::Direct(rng.gen_range(0..2)),
        });
    }
    DelegationGraph::from_edges(n, 2, edges).expect("edges in range")
}

fn random_dnf(rng: &mut impl Rng, n: usize, owner: AgentId, monotone: bool) -> DnfFunction {
    let clauses = rng.gen_range(1..=2);
    let raw: Vec<Vec<Literal>> = (0..clauses)
        .map(|_| {
            let width = rng.gen_range(1..=2);
            distinct_others(rng, n, owner, width)
                .into_iter()
                .map(|agent| Literal {
                    agent,
                    negated: !monotone && rng.gen_bool(0.3),
                })
                .collect()
        })
        .collect();
    DnfFunction::canonicalize(raw)
}

/// Adds `candidate` unless it equals an existing option.
fn push_distinct(options: &mut Vec<DnfFunction>, backup: &DnfFunction, candidate: DnfFunction) {
    let equal = |f: &DnfFunction| f.extensionally_equal(&candidate).unwrap_or(true);
    if !equal(backup) && !options.iter().any(equal) {
        options.push(candidate);
    }
}

fn smart_profile(
    rng: &mut impl Rng,
    n: usize,
    max_len: usize,
    mut entry: impl FnMut(&mut dyn rand::RngCore, AgentId) -> DnfFunction,
) -> Profile {
    let ballots = (0..n)
        .map(|a| {
            let backup = rng.gen_range(0..2usize);
            let backup_fn = DnfFunction::constant(backup == 1);
            let k = if n > 1 { rng.gen_range(0..=max_len) } else { 0 };
            let mut entries = Vec::new();
            for _ in 0..k {
                let f = entry(rng, a);
                push_distinct(&mut entries, &backup_fn, f);
            }
            Ballot::new(entries, backup)
        })
        .collect();
    Profile::new(binary(), names(n), ballots).expect("shapes agree")
}

/// Smart profile whose entries are small DNFs of up to two clauses of up
/// to two literals; `monotone` forbids negation.
pub fn random_smart_profile(rng: &mut impl Rng, n: usize, max_len: usize, monotone: bool) -> Profile {
    smart_profile(rng, n, max_len, |r, a| {
        let mut r = r;
        random_dnf(&mut r, n, a, monotone)
    })
}

/// Smart profile whose entries are disjunctions of one to three agents.
pub fn random_or_profile(rng: &mut impl Rng, n: usize, max_len: usize) -> Profile {
    smart_profile(rng, n, max_len, |r, a| {
        let mut r = r;
        let width = r.gen_range(1..=3);
        DnfFunction::or(distinct_others(&mut r, n, a, width))
    })
}

/// Smart profile whose entries are conjunctions of one to three agents.
pub fn random_and_profile(rng: &mut impl Rng, n: usize, max_len: usize) -> Profile {
    smart_profile(rng, n, max_len, |r, a| {
        let mut r = r;
        let width = r.gen_range(1..=3);
        DnfFunction::and(distinct_others(&mut r, n, a, width))
    })
}
