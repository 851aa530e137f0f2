//! Minimum-bottleneck arborescence in `O(n + m + W)`.
//!
//! Edges are added in order of weight. The set `S` of vertices known to
//! reach the root only grows: when an edge into `S` arrives, its source
//! joins `S` and a depth-first search over the already added edges pulls in
//! everything that now reaches it. Edges whose target is still outside `S`
//! are parked on the target and revisited only when it joins.

use super::{Arborescence, DelegationGraph};
use crate::error::Result;

const NIL: u32 = u32::MAX;

/// An arborescence whose largest weight `w*` is as small as possible,
/// together with `w*`.
pub fn min_bottleneck_arborescence(g: &DelegationGraph<u64>) -> Result<(Arborescence, u64)> {
    g.check_reachable()?;
    let n = g.n();
    let m = g.edges().len();
    let order = edges_by_weight(g);

    let mut in_s = vec![false; n + 1];
    in_s[g.root()] = true;
    let mut parked_head = vec![NIL; n + 1];
    let mut parked_next = vec![NIL; m];
    let mut parent_edge = vec![usize::MAX; n];
    let mut joined = 0usize;
    let mut bottleneck = 0u64;
    let mut stack: Vec<usize> = Vec::new();

    for &e in &order {
        if joined == n {
            break;
        }
        let edge = g.edge(e);
        if in_s[edge.from] {
            continue;
        }
        if !in_s[edge.to] {
            parked_next[e] = parked_head[edge.to];
            parked_head[edge.to] = e as u32;
            continue;
        }
        bottleneck = edge.weight;
        in_s[edge.from] = true;
        parent_edge[edge.from] = e;
        joined += 1;
        stack.push(edge.from);
        while let Some(v) = stack.pop() {
            let mut p = parked_head[v];
            parked_head[v] = NIL;
            while p != NIL {
                let pe = p as usize;
                let u = g.edge(pe).from;
                if !in_s[u] {
                    in_s[u] = true;
                    parent_edge[u] = pe;
                    joined += 1;
                    stack.push(u);
                }
                p = parked_next[pe];
            }
        }
    }
    debug_assert_eq!(joined, n);
    Ok((Arborescence { parent_edge }, bottleneck))
}

/// Edge ids in non-decreasing weight order, by counting sort when weights
/// are small.
fn edges_by_weight(g: &DelegationGraph<u64>) -> Vec<usize> {
    let m = g.edges().len();
    let max = g.edges().iter().map(|e| e.weight).max().unwrap_or(0);
    if max as u128 > m as u128 + g.n() as u128 {
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&e| g.edge(e).weight);
        return order;
    }
    let mut count = vec![0usize; max as usize + 2];
    for e in g.edges() {
        count[e.weight as usize + 1] += 1;
    }
    for w in 0..=max as usize {
        count[w + 1] += count[w];
    }
    let mut order = vec![0usize; m];
    for (i, e) in g.edges().iter().enumerate() {
        let slot = &mut count[e.weight as usize];
        order[*slot] = i;
        *slot += 1;
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::tests::{cast_max, p2};

    #[test]
    fn examples() {
        let g = DelegationGraph::from_profile(&p2()).unwrap();
        let (t, w) = min_bottleneck_arborescence(&g).unwrap();
        assert_eq!(w, 1);
        g.check_arborescence(&t).unwrap();

        let g = DelegationGraph::from_profile(&cast_max(5)).unwrap();
        let (t, w) = min_bottleneck_arborescence(&g).unwrap();
        assert_eq!((w, g.bottleneck(&t)), (1, 1));
    }

    #[test]
    fn zero_when_first_choices_suffice() {
        let p = crate::ballots::ProfileBuilder::binary()
            .agent("a", &["b"], "1")
            .agent("b", &[], "0")
            .build()
            .unwrap();
        let g = DelegationGraph::from_profile(&p).unwrap();
        assert_eq!(min_bottleneck_arborescence(&g).unwrap().1, 0);
    }
}
