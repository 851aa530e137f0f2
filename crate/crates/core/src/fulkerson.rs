//! Fulkerson's primal-dual method for minimum-cost arborescences.
//!
//! Starting from the zero-weight edges, the algorithm repeatedly picks a
//! strongly connected component `L` of the tight subgraph that excludes the
//! root and has no tight edge leaving it, records `L`, and lowers the
//! residual weight of every edge leaving `L` by their minimum. The output is
//! the set of tight edges `E'` and the recorded laminar family. An
//! arborescence has minimum cost iff it uses only tight edges and leaves
//! every recorded set exactly once.
//!
//! The stored family always contains every singleton `{v}` for agents `v`,
//! whether or not the run recorded it; an arborescence leaves every
//! singleton exactly once, so this changes no characterization.

use crate::classic::{Arborescence, DelegationGraph, Edge, Weight};
use crate::error::{Error, Result};
use crate::scc::{strongly_connected_components, Csr};
use crate::AgentId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightStructure {
    /// Tightness of each edge, by edge id.
    pub tight: Vec<bool>,
    /// Sorted vertex sets, ordered by size and then contents.
    pub laminar: Vec<Vec<usize>>,
}

/// Runs the algorithm, picking the candidate with the smallest vertex
/// whenever several are available.
pub fn run_fulkerson<W: Weight>(g: &DelegationGraph<W>) -> Result<TightStructure> {
    run_fulkerson_with(g, |_| 0)
}

/// Runs the algorithm with `choose` selecting among the candidate sets
/// (each sorted, listed by smallest vertex).
pub fn run_fulkerson_with<W: Weight>(
    g: &DelegationGraph<W>,
    choose: impl FnMut(&[Vec<usize>]) -> usize,
) -> Result<TightStructure> {
    g.check_reachable()?;
    run_core(g, None, choose)
}

fn run_core<W: Weight>(
    g: &DelegationGraph<W>,
    exclude: Option<AgentId>,
    mut choose: impl FnMut(&[Vec<usize>]) -> usize,
) -> Result<TightStructure> {
    let n = g.n();
    let root = g.root();
    let mut residual: Vec<W> = g.edges().iter().map(|e| e.weight.clone()).collect();
    let mut tight: Vec<bool> = residual.iter().map(|w| w.is_zero()).collect();
    let mut recorded: Vec<Vec<usize>> = Vec::new();

    loop {
        let tight_graph = Csr::from_pairs(
            n + 1,
            g.edges()
                .iter()
                .zip(&tight)
                .filter(|(_, &t)| t)
                .map(|(e, _)| (e.from, e.to)),
        );
        let (comp, count) = strongly_connected_components(&tight_graph);
        let mut has_exit = vec![false; count];
        for (e, &t) in g.edges().iter().zip(&tight) {
            if t && comp[e.from] != comp[e.to] {
                has_exit[comp[e.from]] = true;
            }
        }
        let blocked = |c: usize| c == comp[root] || exclude.is_some_and(|a| comp[a] == c);
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for v in 0..n {
            let c = comp[v];
            if !has_exit[c] && !blocked(c) {
                members[c].push(v);
            }
        }
        let mut candidates: Vec<Vec<usize>> = members.into_iter().filter(|m| !m.is_empty()).collect();
        if candidates.is_empty() {
            break;
        }
        candidates.sort_unstable();
        let pick = choose(&candidates);
        let chosen = candidates.swap_remove(pick.min(candidates.len() - 1));

        let mut inside = vec![false; n + 1];
        for &v in &chosen {
            inside[v] = true;
        }
        let leaving = g.rho(&inside);
        let min = leaving
            .iter()
            .map(|&e| residual[e].clone())
            .min()
            .ok_or_else(|| Error::RootUnreachable {
                stranded: chosen.clone(),
            })?;
        for &e in &leaving {
            residual[e] -= &min;
            if residual[e].is_zero() {
                tight[e] = true;
            }
        }
        recorded.push(chosen);
    }

    let mut laminar = recorded;
    for v in 0..n {
        if !laminar.iter().any(|l| l.len() == 1 && l[0] == v) {
            laminar.push(vec![v]);
        }
    }
    laminar.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(TightStructure { tight, laminar })
}

impl TightStructure {
    pub fn tight_edges(&self) -> Vec<usize> {
        (0..self.tight.len()).filter(|&e| self.tight[e]).collect()
    }

    /// Recorded sets of size at least two.
    pub fn nontrivial_sets(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.laminar.iter().filter(|l| l.len() > 1)
    }

    /// Indices of the maximal sets of the family.
    pub fn roots(&self) -> Vec<usize> {
        let parent = self.parents();
        (0..self.laminar.len()).filter(|&i| parent[i].is_none()).collect()
    }

    /// Indices of the maximal sets strictly inside set `i`.
    pub fn children(&self, i: usize) -> Vec<usize> {
        let parent = self.parents();
        (0..self.laminar.len()).filter(|&j| parent[j] == Some(i)).collect()
    }

    /// Smallest strictly larger set containing each set. Sets are stored by
    /// increasing size, and in a laminar family any larger set meeting a
    /// set contains it.
    pub fn parents(&self) -> Vec<Option<usize>> {
        (0..self.laminar.len())
            .map(|i| {
                let probe = self.laminar[i][0];
                (i + 1..self.laminar.len())
                    .find(|&j| self.laminar[j].len() > self.laminar[i].len() && self.laminar[j].binary_search(&probe).is_ok())
            })
            .collect()
    }

    /// Whether every two sets are nested or disjoint.
    pub fn is_laminar(&self) -> bool {
        for (i, a) in self.laminar.iter().enumerate() {
            for b in &self.laminar[i + 1..] {
                let common = a.iter().filter(|v| b.binary_search(v).is_ok()).count();
                if common != 0 && common != a.len().min(b.len()) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether `t` has minimum cost: it uses only tight edges and leaves
    /// every set of the family exactly once.
    pub fn is_min_cost<W: Weight>(&self, g: &DelegationGraph<W>, t: &Arborescence) -> bool {
        if t.parent_edge.iter().any(|&e| !self.tight[e]) {
            return false;
        }
        let mut inside = vec![false; g.n() + 1];
        self.laminar.iter().all(|set| {
            for &v in set {
                inside[v] = true;
            }
            let exits = set
                .iter()
                .filter(|&&v| !inside[g.edge(t.parent_edge[v]).to])
                .count();
            for &v in set {
                inside[v] = false;
            }
            exits == 1
        })
    }

    /// A `v`-rooted arborescence of `g[set]` over tight edges that leaves
    /// every family member strictly inside `set` exactly once. `set` must be
    /// a member of the family.
    pub fn recursive_arborescence<W: Weight>(&self, g: &DelegationGraph<W>, set: &[usize], v: usize) -> Result<Vec<usize>> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        let idx = self
            .laminar
            .iter()
            .position(|l| *l == sorted)
            .ok_or_else(|| Error::Precondition(format!("{sorted:?} is not in the laminar family")))?;
        if sorted.binary_search(&v).is_err() {
            return Err(Error::Precondition(format!("vertex {v} is not in {sorted:?}")));
        }
        let ctx = RecursionContext::new(self, g);
        let mut out = Vec::with_capacity(sorted.len() - 1);
        ctx.build(idx, v, &mut out)?;
        Ok(out)
    }
}

struct RecursionContext<'a, W> {
    s: &'a TightStructure,
    g: &'a DelegationGraph<W>,
    children: Vec<Vec<usize>>,
    tight_in: Vec<Vec<usize>>,
}

impl<'a, W: Weight> RecursionContext<'a, W> {
    fn new(s: &'a TightStructure, g: &'a DelegationGraph<W>) -> Self {
        let mut children = vec![Vec::new(); s.laminar.len()];
        for (i, p) in s.parents().into_iter().enumerate() {
            if let Some(p) = p {
                children[p].push(i);
            }
        }
        let mut tight_in = vec![Vec::new(); g.n() + 1];
        for (e, edge) in g.edges().iter().enumerate() {
            if s.tight[e] {
                tight_in[edge.to].push(e);
            }
        }
        RecursionContext {
            s,
            g,
            children,
            tight_in,
        }
    }

    fn build(&self, idx: usize, v: usize, out: &mut Vec<usize>) -> Result<()> {
        let set = &self.s.laminar[idx];
        if set.len() == 1 {
            return Ok(());
        }
        let kids = &self.children[idx];
        let child_of = |x: usize| -> Option<usize> {
            kids.iter().position(|&k| self.s.laminar[k].binary_search(&x).is_ok())
        };
        let covered: usize = kids.iter().map(|&k| self.s.laminar[k].len()).sum();
        if covered != set.len() {
            return Err(Error::Precondition("children do not partition the set".into()));
        }
        let start = child_of(v).expect("v lies in some child");
        let mut entry: Vec<Option<usize>> = vec![None; kids.len()];
        entry[start] = Some(v);
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for &y in &self.s.laminar[kids[c]] {
                for &e in &self.tight_in[y] {
                    let x = self.g.edge(e).from;
                    if let Some(cx) = child_of(x) {
                        if entry[cx].is_none() {
                            entry[cx] = Some(x);
                            out.push(e);
                            stack.push(cx);
                        }
                    }
                }
            }
        }
        for (c, &k) in kids.iter().enumerate() {
            let root = entry[c].ok_or_else(|| {
                Error::Precondition(format!("{:?} is not strongly connected by tight edges", set))
            })?;
            self.build(k, root, out)?;
        }
        Ok(())
    }
}

/// Outcome of comparing the run that never picks sets containing `agent`
/// with full runs after replacing the agent's out-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    /// Tight edges of the restricted run that do not leave `agent`.
    pub restricted_tight: Vec<usize>,
    pub variants: Vec<VariantCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariantCheck {
    /// Restricted tight edges are tight in the full run.
    pub contained: bool,
    /// Every extra tight edge starts at a vertex that reaches `agent` but
    /// not the root along restricted tight edges.
    pub extras_reach_agent: bool,
    /// For a single direct out-edge: the full tight set is exactly the
    /// restricted one plus that edge. `None` for other variants.
    pub single_direct_exact: Option<bool>,
}

impl StabilityReport {
    pub fn holds(&self) -> bool {
        self.variants
            .iter()
            .all(|v| v.contained && v.extras_reach_agent && v.single_direct_exact != Some(false))
    }
}

/// Test harness for the stability of tight edges under changes to the
/// out-edges of a single agent.
pub fn tight_structure_stability_check<W: Weight>(
    g: &DelegationGraph<W>,
    agent: AgentId,
    variants: &[Vec<Edge<W>>],
) -> Result<StabilityReport> {
    let (stripped, stripped_to_old) = {
        let (h, map) = g.with_replaced_out_edges(agent, Vec::new())?;
        let mut back = vec![0usize; h.edges().len()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = new {
                back[*new] = old;
            }
        }
        (h, back)
    };
    let restricted = run_core(&stripped, Some(agent), |_| 0)?;
    let restricted_old: Vec<usize> = restricted
        .tight_edges()
        .into_iter()
        .map(|e| stripped_to_old[e])
        .collect();

    // restricted tight adjacency on the original vertex ids
    let n = g.n();
    let csr = Csr::from_pairs(
        n + 1,
        restricted_old.iter().map(|&e| (g.edge(e).from, g.edge(e).to)),
    );
    let reaches = |target: usize| -> Vec<bool> {
        let rev = Csr::from_pairs(
            n + 1,
            (0..=n).flat_map(|u| csr.successors(u).iter().map(move |&v| (v, u))).collect::<Vec<_>>().into_iter(),
        );
        let mut seen = vec![false; n + 1];
        seen[target] = true;
        let mut stack = vec![target];
        while let Some(v) = stack.pop() {
            for &u in rev.successors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    };
    let reach_agent = reaches(agent);
    let reach_root = reaches(g.root());

    let mut checks = Vec::with_capacity(variants.len());
    for variant in variants {
        let (h, old_to_new) = g.with_replaced_out_edges(agent, variant.clone())?;
        let full = run_fulkerson(&h)?;
        let mut in_restricted = vec![false; h.edges().len()];
        let mut contained = true;
        for &e in &restricted_old {
            match old_to_new[e] {
                Some(ne) => {
                    in_restricted[ne] = true;
                    contained &= full.tight[ne];
                }
                None => contained = false,
            }
        }
        let extras: Vec<usize> = (0..h.edges().len())
            .filter(|&e| full.tight[e] && !in_restricted[e])
            .collect();
        let extras_reach_agent = extras.iter().all(|&e| {
            let x = h.edge(e).from;
            reach_agent[x] && !reach_root[x]
        });
        let single_direct_exact = match variant.as_slice() {
            [only] if only.to == g.root() => {
                let exact = extras.len() == 1 && h.edge(extras[0]).from == agent && contained;
                Some(exact)
            }
            _ => None,
        };
        checks.push(VariantCheck {
            contained,
            extras_reach_agent,
            single_direct_exact,
        });
    }
    Ok(StabilityReport {
        restricted_tight: restricted_old,
        variants: checks,
    })
}
