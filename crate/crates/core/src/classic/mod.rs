//! Delegation graphs of classic profiles.
//!
//! Every agent is a vertex with one out-edge per ballot position; direct
//! votes point at a single root `r` (vertex id `n`) and carry their
//! alternative in the edge tag. Consistent certificates correspond exactly
//! to arborescences with sink `r`.

mod bottleneck;
mod min_cost;

use std::fmt::Debug;
use std::ops::{AddAssign, SubAssign};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::ballots::Profile;
use crate::error::{Error, Result};
use crate::{AgentId, AltId};

pub use bottleneck::min_bottleneck_arborescence;
pub use min_cost::min_cost_arborescence;

/// Edge weights accepted by the optimizers: non-negative and totally
/// ordered, with in-place subtraction for reduced costs.
pub trait Weight: Clone + Ord + Zero + Debug + for<'a> SubAssign<&'a Self> + for<'a> AddAssign<&'a Self> {}

impl Weight for u64 {}
impl Weight for BigUint {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeTag {
    Delegate,
    Direct(AltId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge<W = u64> {
    pub from: usize,
    pub to: usize,
    pub weight: W,
    pub tag: EdgeTag,
}

/// Weighted digraph on agents `0..n` plus the root `n`. Edges are grouped
/// by source; the position of an edge within its group is its rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelegationGraph<W = u64> {
    n: usize,
    num_alternatives: usize,
    edges: Vec<Edge<W>>,
    out_start: Vec<usize>,
}

impl DelegationGraph<u64> {
    /// Builds the delegation graph of a classic profile.
    pub fn from_profile(profile: &Profile) -> Result<Self> {
        let n = profile.n();
        let mut edges = Vec::with_capacity(profile.m());
        for a in 0..n {
            let delegates = profile.classic_delegates(a)?;
            for (rank, &d) in delegates.iter().enumerate() {
                if d >= n || d == a {
                    return Err(Error::InvalidProfile {
                        model: "classic",
                        reason: format!("agent {} delegates to invalid agent id {d}", profile.agent_name(a)),
                    });
                }
                edges.push(Edge {
                    from: a,
                    to: d,
                    weight: rank as u64,
                    tag: EdgeTag::Delegate,
                });
            }
            let backup = profile.ballot(a).backup;
            if backup >= profile.alternatives().len() {
                return Err(Error::InvalidProfile {
                    model: "classic",
                    reason: format!("agent {} has an unknown backup vote", profile.agent_name(a)),
                });
            }
            edges.push(Edge {
                from: a,
                to: n,
                weight: delegates.len() as u64,
                tag: EdgeTag::Direct(backup),
            });
        }
        Self::from_edges(n, profile.alternatives().len(), edges)
    }
}

impl<W: Weight> DelegationGraph<W> {
    /// Builds a graph from arbitrary edges. Edges are stably grouped by
    /// source, so ranks follow the input order within each source.
    pub fn from_edges(n: usize, num_alternatives: usize, mut edges: Vec<Edge<W>>) -> Result<Self> {
        for e in &edges {
            if e.from >= n || e.to > n {
                return Err(Error::Malformed(format!("edge {} -> {} out of range", e.from, e.to)));
            }
            if let EdgeTag::Direct(d) = e.tag {
                if e.to != n || d >= num_alternatives {
                    return Err(Error::Malformed(format!(
                        "direct edge from {} must point at the root with a known alternative",
                        e.from
                    )));
                }
            }
        }
        edges.sort_by_key(|e| e.from);
        let mut out_start = vec![0; n + 1];
        for e in &edges {
            out_start[e.from + 1] += 1;
        }
        for v in 0..n {
            out_start[v + 1] += out_start[v];
        }
        Ok(DelegationGraph {
            n,
            num_alternatives,
            edges,
            out_start,
        })
    }

    /// Number of agents; the root has id `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        self.n
    }

    pub fn num_alternatives(&self) -> usize {
        self.num_alternatives
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge<W> {
        &self.edges[id]
    }

    /// Ids of the out-edges of `agent`, in rank order.
    pub fn out_edges(&self, agent: AgentId) -> std::ops::Range<usize> {
        self.out_start[agent]..self.out_start[agent + 1]
    }

    /// Rank of an edge within its source's ballot.
    pub fn rank_of(&self, edge: usize) -> usize {
        edge - self.out_start[self.edges[edge].from]
    }

    /// Same structure with every weight replaced by `f(edge)`.
    pub fn map_weights<V: Weight>(&self, mut f: impl FnMut(&Edge<W>) -> V) -> DelegationGraph<V> {
        DelegationGraph {
            n: self.n,
            num_alternatives: self.num_alternatives,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    from: e.from,
                    to: e.to,
                    weight: f(e),
                    tag: e.tag,
                })
                .collect(),
            out_start: self.out_start.clone(),
        }
    }

    /// A copy where the out-edges of `agent` are replaced, together with
    /// the position of every surviving old edge in the new graph.
    pub fn with_replaced_out_edges(&self, agent: AgentId, new_edges: Vec<Edge<W>>) -> Result<(Self, Vec<Option<usize>>)> {
        let mut edges = Vec::with_capacity(self.edges.len() + new_edges.len());
        let mut origin = Vec::with_capacity(edges.capacity());
        for (i, e) in self.edges.iter().enumerate() {
            if e.from != agent {
                edges.push(e.clone());
                origin.push(Some(i));
            }
        }
        for e in new_edges {
            if e.from != agent {
                return Err(Error::Precondition(format!("replacement edge does not leave agent {agent}")));
            }
            edges.push(e);
            origin.push(None);
        }
        // grouping is stable, so recover positions from the same ordering
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&i| edges[i].from);
        let mut old_to_new = vec![None; self.edges.len()];
        for (new_pos, &i) in order.iter().enumerate() {
            if let Some(old) = origin[i] {
                old_to_new[old] = Some(new_pos);
            }
        }
        let g = Self::from_edges(self.n, self.num_alternatives, edges)?;
        Ok((g, old_to_new))
    }

    /// Edges leaving the vertex set `inside` (indexed by vertex, root
    /// included).
    pub fn rho(&self, inside: &[bool]) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| {
                let e = &self.edges[i];
                inside[e.from] && !inside[e.to]
            })
            .collect()
    }

    /// Vertices that cannot reach the root, in increasing order.
    pub fn stranded(&self) -> Vec<usize> {
        let mut in_start = vec![0usize; self.n + 2];
        for e in &self.edges {
            in_start[e.to + 1] += 1;
        }
        for v in 0..=self.n {
            in_start[v + 1] += in_start[v];
        }
        let mut fill = in_start.clone();
        let mut sources = vec![0usize; self.edges.len()];
        for e in &self.edges {
            sources[fill[e.to]] = e.from;
            fill[e.to] += 1;
        }
        let mut reached = vec![false; self.n + 1];
        reached[self.n] = true;
        let mut stack = vec![self.n];
        while let Some(v) = stack.pop() {
            for &u in &sources[in_start[v]..in_start[v + 1]] {
                if !reached[u] {
                    reached[u] = true;
                    stack.push(u);
                }
            }
        }
        (0..self.n).filter(|&v| !reached[v]).collect()
    }

    pub(crate) fn check_reachable(&self) -> Result<()> {
        let stranded = self.stranded();
        if stranded.is_empty() {
            Ok(())
        } else {
            Err(Error::RootUnreachable { stranded })
        }
    }

    /// Total weight of an arborescence.
    pub fn cost(&self, t: &Arborescence) -> W {
        let mut total = W::zero();
        for &e in &t.parent_edge {
            total += &self.edges[e].weight;
        }
        total
    }

    /// Largest weight used by an arborescence.
    pub fn bottleneck(&self, t: &Arborescence) -> W {
        t.parent_edge
            .iter()
            .map(|&e| self.edges[e].weight.clone())
            .max()
            .unwrap_or_else(W::zero)
    }

    /// Checks that `t` picks one out-edge per agent and contains no cycle.
    pub fn check_arborescence(&self, t: &Arborescence) -> Result<()> {
        if t.parent_edge.len() != self.n {
            return Err(Error::CertificateLength {
                expected: self.n,
                found: t.parent_edge.len(),
            });
        }
        for (a, &e) in t.parent_edge.iter().enumerate() {
            if e >= self.edges.len() || self.edges[e].from != a {
                return Err(Error::Precondition(format!("edge {e} does not leave agent {a}")));
            }
        }
        match find_cycle(self.n, |a| self.edges[t.parent_edge[a]].to) {
            Some(cycle) => Err(Error::InconsistentCertificate { cycle }),
            None => Ok(()),
        }
    }

    /// Concrete votes: each agent takes the tag of the direct edge its path
    /// to the root ends in.
    pub fn votes(&self, t: &Arborescence) -> Result<Vec<AltId>> {
        self.check_arborescence(t)?;
        let mut vote: Vec<Option<AltId>> = vec![None; self.n];
        let mut path = Vec::new();
        for start in 0..self.n {
            let mut v = start;
            let found = loop {
                if let Some(d) = vote[v] {
                    break d;
                }
                path.push(v);
                let e = &self.edges[t.parent_edge[v]];
                if e.to == self.n {
                    match e.tag {
                        EdgeTag::Direct(d) => break d,
                        EdgeTag::Delegate => {
                            return Err(Error::Precondition(format!(
                                "edge from {v} reaches the root without an alternative"
                            )))
                        }
                    }
                }
                v = e.to;
            };
            for u in path.drain(..) {
                vote[u] = Some(found);
            }
        }
        Ok(vote.into_iter().map(|v| v.expect("every agent resolved")).collect())
    }

    pub fn certificate_of(&self, t: &Arborescence) -> Certificate {
        Certificate {
            ranks: t.parent_edge.iter().map(|&e| self.rank_of(e)).collect(),
        }
    }

    /// The edge set selected by a certificate; fails with the cycle when
    /// the certificate is inconsistent.
    pub fn arborescence_of(&self, c: &Certificate) -> Result<Arborescence> {
        if c.ranks.len() != self.n {
            return Err(Error::CertificateLength {
                expected: self.n,
                found: c.ranks.len(),
            });
        }
        let mut parent_edge = Vec::with_capacity(self.n);
        for (agent, &rank) in c.ranks.iter().enumerate() {
            let range = self.out_edges(agent);
            if rank >= range.len() {
                return Err(Error::RankOutOfRange {
                    agent,
                    rank,
                    max: range.len().saturating_sub(1),
                });
            }
            parent_edge.push(range.start + rank);
        }
        let t = Arborescence { parent_edge };
        self.check_arborescence(&t)?;
        Ok(t)
    }

    /// Calls `visit` on every arborescence, stopping early with an error
    /// once more than `budget` candidates would be explored.
    pub fn for_each_arborescence(&self, budget: u128, mut visit: impl FnMut(&Arborescence)) -> Result<()> {
        let size = self
            .out_start
            .windows(2)
            .map(|w| (w[1] - w[0]) as u128)
            .try_fold(1u128, |acc, k| acc.checked_mul(k))
            .unwrap_or(u128::MAX);
        if size > budget {
            return Err(Error::BudgetExceeded {
                size,
                budget,
                hint: "use the polynomial optimizers for classic rules",
            });
        }
        let mut parent = vec![usize::MAX; self.n];
        let mut t = Arborescence {
            parent_edge: Vec::with_capacity(self.n),
        };
        self.enumerate_rec(0, &mut parent, &mut t, &mut visit);
        Ok(())
    }

    fn enumerate_rec(
        &self,
        agent: usize,
        parent: &mut [usize],
        t: &mut Arborescence,
        visit: &mut impl FnMut(&Arborescence),
    ) {
        if agent == self.n {
            visit(t);
            return;
        }
        for e in self.out_edges(agent) {
            // agents are fixed in id order, so a cycle through `agent` only
            // runs through smaller ids
            let mut v = self.edges[e].to;
            while v < agent {
                v = parent[v];
            }
            if v == agent {
                continue;
            }
            parent[agent] = self.edges[e].to;
            t.parent_edge.push(e);
            self.enumerate_rec(agent + 1, parent, t, visit);
            t.parent_edge.pop();
        }
        parent[agent] = usize::MAX;
    }
}

/// Follows `next` from every vertex of `0..n` (values `>= n` leave the
/// graph) and returns the first cycle found.
pub(crate) fn find_cycle(n: usize, next: impl Fn(usize) -> usize) -> Option<Vec<usize>> {
    // 0 = unvisited, 1 = on the current path, 2 = done
    let mut state = vec![0u8; n];
    let mut path = Vec::new();
    for start in 0..n {
        let mut v = start;
        while v < n && state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = next(v);
        }
        if v < n && state[v] == 1 {
            let pos = path.iter().position(|&u| u == v).expect("on path");
            return Some(path[pos..].to_vec());
        }
        for u in path.drain(..) {
            state[u] = 2;
        }
    }
    None
}

/// One chosen out-edge per agent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arborescence {
    pub parent_edge: Vec<usize>,
}

/// One selected rank per agent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate {
    pub ranks: Vec<usize>,
}

impl Certificate {
    pub fn new(ranks: Vec<usize>) -> Self {
        Certificate { ranks }
    }

    pub fn sum(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// Ranks sorted in decreasing order.
    pub fn sorted_desc(&self) -> Vec<usize> {
        let mut r = self.ranks.clone();
        r.sort_unstable_by(|a, b| b.cmp(a));
        r
    }
}
