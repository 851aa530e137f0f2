//! Brute-force oracles written against raw profile data, sharing no code
//! with the solvers under test beyond `Profile` accessors and
//! `DnfFunction::evaluate`.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use unravel_core::classic::{DelegationGraph, Edge, EdgeTag};
use unravel_core::{Literal, Profile};

/// Calls `f` on every rank vector with `ranks[a] <= caps[a]`.
pub fn odometer(caps: &[usize], mut f: impl FnMut(&[usize])) {
    let mut r = vec![0usize; caps.len()];
    loop {
        f(&r);
        let mut i = 0;
        loop {
            if i == caps.len() {
                return;
            }
            if r[i] < caps[i] {
                r[i] += 1;
                break;
            }
            r[i] = 0;
            i += 1;
        }
    }
}

pub fn caps(p: &Profile) -> Vec<usize> {
    p.ballots().iter().map(|b| b.entries.len()).collect()
}

/// Votes of a classic certificate by following delegation chains, or
/// `None` if some chain cycles.
pub fn classic_votes(p: &Profile, ranks: &[usize]) -> Option<Vec<usize>> {
    let n = p.n();
    (0..n)
        .map(|start| {
            let mut a = start;
            for _ in 0..=n {
                let b = p.ballot(a);
                if ranks[a] == b.entries.len() {
                    return Some(b.backup);
                }
                let clauses = b.entries[ranks[a]].clauses();
                a = clauses[0][0].agent;
            }
            None
        })
        .collect()
}

/// Consistent classic certificates with their votes.
pub fn classic_certificates(p: &Profile) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    odometer(&caps(p), |r| {
        if let Some(v) = classic_votes(p, r) {
            out.push((r.to_vec(), v));
        }
    });
    out
}

/// Votes of a smart certificate by the forced-assignment procedure,
/// deciding constancy by enumerating the unresolved variables.
pub fn smart_votes(p: &Profile, ranks: &[usize]) -> Option<Vec<bool>> {
    let n = p.n();
    let one = p.alternative_index("1").unwrap();
    let mut votes: Vec<Option<bool>> = vec![None; n];
    loop {
        let mut progress = false;
        for a in 0..n {
            if votes[a].is_some() {
                continue;
            }
            let b = p.ballot(a);
            if ranks[a] == b.entries.len() {
                votes[a] = Some(b.backup == one);
                progress = true;
                continue;
            }
            let f = &b.entries[ranks[a]];
            let free: Vec<usize> = {
                let mut s: Vec<usize> = f
                    .clauses()
                    .iter()
                    .flatten()
                    .map(|l: &Literal| l.agent)
                    .filter(|&v| votes[v].is_none())
                    .collect();
                s.sort_unstable();
                s.dedup();
                s
            };
            let mut seen = BTreeSet::new();
            for mask in 0u32..1 << free.len() {
                let value = |v: usize| match votes[v] {
                    Some(x) => x,
                    None => mask >> free.iter().position(|&u| u == v).unwrap() & 1 == 1,
                };
                seen.insert(f.evaluate(value));
            }
            if seen.len() == 1 {
                votes[a] = seen.into_iter().next();
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    votes.into_iter().collect()
}

pub fn smart_certificates(p: &Profile) -> Vec<(Vec<usize>, Vec<bool>)> {
    let mut out = Vec::new();
    odometer(&caps(p), |r| {
        if let Some(v) = smart_votes(p, r) {
            out.push((r.to_vec(), v));
        }
    });
    out
}

pub fn sum(r: &[usize]) -> usize {
    r.iter().sum()
}

pub fn max(r: &[usize]) -> usize {
    r.iter().copied().max().unwrap_or(0)
}

pub fn sorted_desc(r: &[usize]) -> Vec<usize> {
    let mut v = r.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Entries of `items` minimizing `key`.
pub fn argmin<T: Clone, K: Ord>(items: &[T], key: impl Fn(&T) -> K) -> Vec<T> {
    let best = items.iter().map(&key).min();
    items.iter().filter(|x| Some(key(x)) == best).cloned().collect()
}

/// Every arborescence of a graph as parent-edge vectors, by trying all
/// out-edge choices.
pub fn graph_arborescences(g: &DelegationGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, e) in g.edges().iter().enumerate() {
        by_vertex[e.from].push(id);
    }
    let caps: Vec<usize> = by_vertex.iter().map(|v| v.len().saturating_sub(1)).collect();
    if by_vertex.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::new();
    odometer(&caps, |r| {
        let parent: Vec<usize> = (0..n).map(|v| by_vertex[v][r[v]]).collect();
        let ok = (0..n).all(|start| {
            let mut v = start;
            for _ in 0..=n {
                if v == n {
                    return true;
                }
                v = g.edges()[parent[v]].to;
            }
            false
        });
        if ok {
            out.push(parent);
        }
    });
    out
}

pub fn graph_cost(g: &DelegationGraph, parent: &[usize]) -> u64 {
    parent.iter().map(|&e| g.edges()[e].weight).sum()
}

/// Random digraph on `n` agents plus the root, every agent reaching the
/// root, with at most `max_edges` edges of weight `0..=4`.
pub fn random_digraph(rng: &mut impl Rng, n: usize, max_edges: usize) -> DelegationGraph {
    loop {
        let m = rng.gen_range(n..=max_edges.max(n));
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let from = rng.gen_range(0..n);
            let to = rng.gen_range(0..=n);
            if to == from {
                continue;
            }
            edges.push(Edge {
                from,
                to,
                weight: rng.gen_range(0..=4),
                tag: if to == n { EdgeTag::Direct(rng.gen_range(0..2)) } else { EdgeTag::Delegate },
            });
        }
        edges.sort_by_key(|e| (e.from, e.to));
        edges.dedup_by_key(|e| (e.from, e.to));
        let g = DelegationGraph::from_edges(n, 2, edges).unwrap();
        if g.stranded().is_empty() {
            return g;
        }
    }
}

/// Size of a smallest vertex cover.
pub fn min_vertex_cover(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << n)
        .filter(|&s| edges.iter().all(|&(i, j)| s >> i & 1 == 1 || s >> j & 1 == 1))
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap()
}

pub fn satisfiable(num_vars: usize, clauses: &[[Literal; 3]]) -> bool {
    (0u32..1 << num_vars).any(|y| {
        clauses
            .iter()
            .all(|c| c.iter().any(|l| (y >> l.agent & 1 == 1) != l.negated))
    })
}
