//! Biased resolute unravellings of classic profiles over two alternatives.
//!
//! Among all optimal arborescences, the biased rules pick one in which every
//! agent that votes `d` in some optimum votes `d`. For MinMax these are the
//! agents that reach a direct `d` edge using edges of weight at most `w*`;
//! for MinSum, those that reach one along tight edges of Fulkerson's
//! algorithm. LexiMin reduces to MinSum on exponentially lifted weights.

use num_bigint::BigUint;

use crate::classic::{min_bottleneck_arborescence, min_cost_arborescence, Arborescence, DelegationGraph, EdgeTag, Weight};
use crate::error::{Error, Result};
use crate::fulkerson::run_fulkerson;
use crate::{AgentId, AltId};

/// An arborescence with the votes it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unravelling {
    pub arborescence: Arborescence,
    pub votes: Vec<AltId>,
}

/// Agents voting `d` in at least one optimum, under each rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub minsum: Vec<AgentId>,
    pub minmax: Vec<AgentId>,
}

fn require_two<W: Weight>(g: &DelegationGraph<W>, d: AltId) -> Result<()> {
    if g.num_alternatives() != 2 {
        return Err(Error::NotTwoAlternatives {
            found: g.num_alternatives(),
        });
    }
    if d >= 2 {
        return Err(Error::UnknownAlternative(d.to_string()));
    }
    Ok(())
}

/// Grows a forest from the root over the transposed `allowed` edges,
/// first from the direct edges for `d` and then from the others. `group`
/// maps vertices to contracted groups (identity when nothing is
/// contracted); each group records the edge it was entered by.
struct BiasedSearch<'a, W> {
    g: &'a DelegationGraph<W>,
    allowed: &'a [bool],
    group: &'a [usize],
    members: &'a [Vec<usize>],
    in_edges: Vec<Vec<usize>>,
    entry: Vec<Option<usize>>,
}

impl<'a, W: Weight> BiasedSearch<'a, W> {
    fn new(g: &'a DelegationGraph<W>, allowed: &'a [bool], group: &'a [usize], members: &'a [Vec<usize>]) -> Self {
        let mut in_edges = vec![Vec::new(); g.n() + 1];
        for (e, edge) in g.edges().iter().enumerate() {
            if allowed[e] {
                in_edges[edge.to].push(e);
            }
        }
        BiasedSearch {
            g,
            allowed,
            group,
            members,
            in_edges,
            entry: vec![None; members.len()],
        }
    }

    /// Runs both phases and returns the groups reached in the first.
    fn run(&mut self, d: AltId) -> Vec<bool> {
        let root = self.g.root();
        let root_in = std::mem::take(&mut self.in_edges[root]);
        for &e in &root_in {
            if self.g.edge(e).tag == EdgeTag::Direct(d) {
                self.enter(e);
            }
        }
        let favoured: Vec<bool> = self.entry.iter().map(Option::is_some).collect();
        for &e in &root_in {
            if self.g.edge(e).tag != EdgeTag::Direct(d) {
                self.enter(e);
            }
        }
        self.in_edges[root] = root_in;
        favoured
    }

    fn enter(&mut self, e: usize) {
        debug_assert!(self.allowed[e]);
        let start = self.group[self.g.edge(e).from];
        if self.entry[start].is_some() {
            return;
        }
        self.entry[start] = Some(e);
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for &y in &self.members[c] {
                for &f in &self.in_edges[y] {
                    let cx = self.group[self.g.edge(f).from];
                    if self.entry[cx].is_none() {
                        self.entry[cx] = Some(f);
                        stack.push(cx);
                    }
                }
            }
        }
    }
}

fn identity_groups(n: usize) -> (Vec<usize>, Vec<Vec<usize>>) {
    ((0..=n).collect(), (0..n).map(|v| vec![v]).collect())
}

/// MinMax outcome in which every agent that can vote `d` in some MinMax
/// optimum does.
pub fn minmax_biased(g: &DelegationGraph<u64>, d: AltId) -> Result<Unravelling> {
    require_two(g, d)?;
    let (_, w) = min_bottleneck_arborescence(g)?;
    let allowed: Vec<bool> = g.edges().iter().map(|e| e.weight <= w).collect();
    let (group, members) = identity_groups(g.n());
    let mut search = BiasedSearch::new(g, &allowed, &group, &members);
    search.run(d);
    let parent_edge = search
        .entry
        .into_iter()
        .map(|e| e.expect("bottleneck restriction spans every agent"))
        .collect();
    let arborescence = Arborescence { parent_edge };
    let votes = g.votes(&arborescence)?;
    Ok(Unravelling { arborescence, votes })
}

/// Minimum-cost outcome in which every agent that can vote `d` in some
/// minimum-cost arborescence does.
pub fn minsum_biased<W: Weight>(g: &DelegationGraph<W>, d: AltId) -> Result<Unravelling> {
    require_two(g, d)?;
    let s = run_fulkerson(g)?;
    let roots = s.roots();
    let members: Vec<Vec<usize>> = roots.iter().map(|&i| s.laminar[i].clone()).collect();
    let mut group = vec![usize::MAX; g.n() + 1];
    for (c, set) in members.iter().enumerate() {
        for &v in set {
            group[v] = c;
        }
    }
    group[g.root()] = members.len();

    let mut search = BiasedSearch::new(g, &s.tight, &group, &members);
    search.run(d);
    let mut parent_edge = vec![usize::MAX; g.n()];
    for (c, entry) in search.entry.iter().enumerate() {
        let e = entry.ok_or_else(|| Error::Precondition("tight edges do not span the graph".into()))?;
        let x = g.edge(e).from;
        parent_edge[x] = e;
        for inner in s.recursive_arborescence(g, &members[c], x)? {
            parent_edge[g.edge(inner).from] = inner;
        }
    }
    let arborescence = Arborescence { parent_edge };
    let votes = g.votes(&arborescence)?;
    Ok(Unravelling { arborescence, votes })
}

/// Agents that vote `d` in some MinSum optimum and in some MinMax optimum.
pub fn n_d_membership(g: &DelegationGraph<u64>, d: AltId) -> Result<Membership> {
    require_two(g, d)?;
    let s = run_fulkerson(g)?;
    let (_, w) = min_bottleneck_arborescence(g)?;
    let within: Vec<bool> = g.edges().iter().map(|e| e.weight <= w).collect();
    Ok(Membership {
        minsum: reaching_direct(g, &s.tight, d),
        minmax: reaching_direct(g, &within, d),
    })
}

/// Agents with a path of `allowed` edges ending in a direct edge for `d`.
fn reaching_direct<W: Weight>(g: &DelegationGraph<W>, allowed: &[bool], d: AltId) -> Vec<AgentId> {
    let (group, members) = identity_groups(g.n());
    let mut search = BiasedSearch::new(g, allowed, &group, &members);
    let favoured = search.run(d);
    (0..g.n()).filter(|&v| favoured[v]).collect()
}

/// Lifts rank `i` to `(n + 2)^i`, which turns sums into a comparison of
/// descending-sorted rank vectors.
pub fn lexicographic_weights(g: &DelegationGraph<u64>) -> DelegationGraph<BigUint> {
    let base = BigUint::from(g.n() as u64 + 2);
    g.map_weights(|e| base.pow(u32::try_from(e.weight).expect("rank fits in u32")))
}

/// LexiMin outcome, optionally biased towards `bias`.
pub fn leximin(g: &DelegationGraph<u64>, bias: Option<AltId>) -> Result<Unravelling> {
    let lifted = lexicographic_weights(g);
    match bias {
        Some(d) => minsum_biased(&lifted, d),
        None => {
            let arborescence = min_cost_arborescence(&lifted)?;
            let votes = g.votes(&arborescence)?;
            Ok(Unravelling { arborescence, votes })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ProfileBuilder;

    fn graph(p: &crate::Profile) -> DelegationGraph {
        DelegationGraph::from_profile(p).unwrap()
    }

    fn p2() -> DelegationGraph {
        graph(
            &ProfileBuilder::binary()
                .agent("a", &["b"], "1")
                .agent("b", &["a"], "0")
                .build()
                .unwrap(),
        )
    }

    fn cast_max5() -> DelegationGraph {
        graph(
            &ProfileBuilder::binary()
                .agent("a", &["a2"], "1")
                .agent("a2", &["a"], "1")
                .agent("zero", &[], "0")
                .agent("u1", &["zero"], "1")
                .agent("u2", &["zero"], "1")
                .build()
                .unwrap(),
        )
    }

    #[test]
    fn minmax_examples() {
        let g = cast_max5();
        assert_eq!(minmax_biased(&g, 1).unwrap().votes, vec![1, 1, 0, 1, 1]);
        assert_eq!(minmax_biased(&g, 0).unwrap().votes, vec![1, 1, 0, 0, 0]);
        let g = p2();
        assert_eq!(minmax_biased(&g, 1).unwrap().votes, vec![1, 1]);
        assert_eq!(minmax_biased(&g, 0).unwrap().votes, vec![0, 0]);
    }

    #[test]
    fn minsum_examples() {
        let g = p2();
        let one = minsum_biased(&g, 1).unwrap();
        assert_eq!(one.votes, vec![1, 1]);
        assert_eq!(one.arborescence.parent_edge, vec![1, 2]);
        assert_eq!(minsum_biased(&g, 0).unwrap().votes, vec![0, 0]);
    }

    #[test]
    fn membership_examples() {
        let m = n_d_membership(&p2(), 1).unwrap();
        assert_eq!((m.minsum, m.minmax), (vec![0, 1], vec![0, 1]));
        assert_eq!(n_d_membership(&cast_max5(), 1).unwrap().minmax, vec![0, 1, 3, 4]);
        let all_zero = graph(
            &ProfileBuilder::binary()
                .agent("a", &[], "0")
                .agent("b", &["a"], "0")
                .build()
                .unwrap(),
        );
        let m = n_d_membership(&all_zero, 1).unwrap();
        assert!(m.minsum.is_empty() && m.minmax.is_empty());
    }

    #[test]
    fn leximin_prefers_spread_ranks() {
        // the options sort to (2,0,0), (1,0,1) and (1,1,0) patterns; the
        // best one is (1,0,0)
        let p = ProfileBuilder::binary()
            .agent("x", &["y", "z"], "1")
            .agent("y", &["x"], "0")
            .agent("z", &["x"], "0")
            .build()
            .unwrap();
        let g = graph(&p);
        let out = leximin(&g, None).unwrap();
        let c = g.certificate_of(&out.arborescence);
        assert_eq!(c.sorted_desc(), vec![1, 0, 0]);
        assert_eq!(leximin(&p2(), Some(1)).unwrap().votes, vec![1, 1]);
        let g = p2();
        let sorted = g.certificate_of(&leximin(&g, None).unwrap().arborescence).sorted_desc();
        assert_eq!(sorted, vec![1, 0]);
    }

    #[test]
    fn rejects_wide_domains() {
        let p = ProfileBuilder::new(["x", "y", "z"]).agent("a", &[], "x").build().unwrap();
        assert_eq!(
            minmax_biased(&graph(&p), 0),
            Err(Error::NotTwoAlternatives { found: 3 })
        );
    }
}
