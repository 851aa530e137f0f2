//! Minimum-cost arborescence by cycle contraction.
//!
//! Each vertex keeps a mergeable heap of its out-edges keyed by reduced
//! cost. Following cheapest edges from an unvisited vertex either reaches
//! the solved part of the graph or closes a cycle, which is contracted by
//! merging the heaps of its members after subtracting each member's chosen
//! cost. A rollback union-find lets the contractions be undone afterwards
//! to expand the chosen edges. `O(m log m)` overall.

use super::{Arborescence, DelegationGraph, Weight};
use crate::error::Result;

const NIL: u32 = u32::MAX;

/// Leftist heap with a lazy subtraction tag on every node.
struct Heap<W> {
    key: Vec<W>,
    pending: Vec<W>,
    edge: Vec<u32>,
    left: Vec<u32>,
    right: Vec<u32>,
    rank: Vec<u32>,
}

impl<W: Weight> Heap<W> {
    fn with_capacity(m: usize) -> Self {
        Heap {
            key: Vec::with_capacity(m),
            pending: Vec::with_capacity(m),
            edge: Vec::with_capacity(m),
            left: Vec::with_capacity(m),
            right: Vec::with_capacity(m),
            rank: Vec::with_capacity(m),
        }
    }

    fn push_node(&mut self, key: W, edge: usize) -> u32 {
        self.key.push(key);
        self.pending.push(W::zero());
        self.edge.push(edge as u32);
        self.left.push(NIL);
        self.right.push(NIL);
        self.rank.push(1);
        (self.key.len() - 1) as u32
    }

    fn rank_of(&self, h: u32) -> u32 {
        if h == NIL {
            0
        } else {
            self.rank[h as usize]
        }
    }

    fn push_down(&mut self, h: u32) {
        let h = h as usize;
        if self.pending[h].is_zero() {
            return;
        }
        let p = std::mem::replace(&mut self.pending[h], W::zero());
        self.key[h] -= &p;
        for child in [self.left[h], self.right[h]] {
            if child != NIL {
                self.pending[child as usize] += &p;
            }
        }
    }

    /// Subtracts `amount` from every key in the heap rooted at `h`.
    fn subtract(&mut self, h: u32, amount: &W) {
        if h != NIL {
            self.pending[h as usize] += amount;
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        self.push_down(a);
        self.push_down(b);
        let (a, b) = if self.key[a as usize] > self.key[b as usize] {
            (b, a)
        } else {
            (a, b)
        };
        let merged = self.merge(self.right[a as usize], b);
        let ai = a as usize;
        self.right[ai] = merged;
        if self.rank_of(self.left[ai]) < self.rank_of(merged) {
            self.right[ai] = self.left[ai];
            self.left[ai] = merged;
        }
        self.rank[ai] = self.rank_of(self.right[ai]) + 1;
        a
    }

    /// Key and edge of the minimum.
    fn top(&mut self, h: u32) -> (W, usize) {
        self.push_down(h);
        (self.key[h as usize].clone(), self.edge[h as usize] as usize)
    }

    fn pop(&mut self, h: u32) -> u32 {
        self.push_down(h);
        let (l, r) = (self.left[h as usize], self.right[h as usize]);
        self.merge(l, r)
    }
}

/// Union-find without path compression so unions can be undone.
struct RollbackUnionFind {
    parent: Vec<i64>,
    history: Vec<(usize, i64)>,
}

impl RollbackUnionFind {
    fn new(n: usize) -> Self {
        RollbackUnionFind {
            parent: vec![-1; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] >= 0 {
            v = self.parent[v] as usize;
        }
        v
    }

    fn time(&self) -> usize {
        self.history.len()
    }

    fn rollback(&mut self, t: usize) {
        while self.history.len() > t {
            let (i, old) = self.history.pop().expect("non-empty history");
            self.parent[i] = old;
        }
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.parent[a] > self.parent[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.history.push((a, self.parent[a]));
        self.history.push((b, self.parent[b]));
        self.parent[a] += self.parent[b];
        self.parent[b] = a as i64;
        true
    }
}

struct Contraction {
    vertex: usize,
    time: usize,
    edges: Vec<usize>,
}

/// An arborescence of minimum total weight. Ties are broken arbitrarily.
pub fn min_cost_arborescence<W: Weight>(g: &DelegationGraph<W>) -> Result<Arborescence> {
    g.check_reachable()?;
    let n = g.n();
    let root = g.root();
    let mut heap = Heap::with_capacity(g.edges().len());
    let mut head = vec![NIL; n + 1];
    for (i, e) in g.edges().iter().enumerate() {
        let node = heap.push_node(e.weight.clone(), i);
        head[e.from] = heap.merge(head[e.from], node);
    }

    let mut uf = RollbackUnionFind::new(n + 1);
    const UNSEEN: usize = usize::MAX;
    let mut seen = vec![UNSEEN; n + 1];
    seen[root] = root;
    let mut path_edges: Vec<usize> = Vec::new();
    let mut path_vertices: Vec<usize> = Vec::new();
    let mut chosen = vec![usize::MAX; n + 1];
    let mut contractions: Vec<Contraction> = Vec::new();

    for start in 0..n {
        let mut u = start;
        path_edges.clear();
        path_vertices.clear();
        while seen[u] == UNSEEN {
            debug_assert!(head[u] != NIL, "reachability checked upfront");
            let (w, e) = heap.top(head[u]);
            heap.subtract(head[u], &w);
            head[u] = heap.pop(head[u]);
            path_edges.push(e);
            path_vertices.push(u);
            seen[u] = start;
            u = uf.find(g.edge(e).to);
            if seen[u] == start {
                // the walk closed a cycle: contract it into one vertex
                let mut merged = NIL;
                let end = path_edges.len();
                let time = uf.time();
                let mut cut = end;
                loop {
                    cut -= 1;
                    let w = path_vertices[cut];
                    merged = heap.merge(merged, head[w]);
                    if !uf.union(u, w) {
                        break;
                    }
                }
                u = uf.find(u);
                head[u] = merged;
                seen[u] = UNSEEN;
                contractions.push(Contraction {
                    vertex: u,
                    time,
                    edges: path_edges[cut..end].to_vec(),
                });
                path_edges.truncate(cut);
                path_vertices.truncate(cut);
            }
        }
        for &e in &path_edges {
            chosen[uf.find(g.edge(e).from)] = e;
        }
    }

    for c in contractions.iter().rev() {
        uf.rollback(c.time);
        let entering = chosen[c.vertex];
        for &e in &c.edges {
            chosen[uf.find(g.edge(e).from)] = e;
        }
        chosen[uf.find(g.edge(entering).from)] = entering;
    }
    chosen.truncate(n);
    Ok(Arborescence { parent_edge: chosen })
}
