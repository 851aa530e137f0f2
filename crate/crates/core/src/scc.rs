//! Strongly connected components (iterative Tarjan).

/// Graph in compressed adjacency form: successors of `v` are
/// `targets[start[v]..start[v + 1]]`.
pub(crate) struct Csr {
    pub start: Vec<usize>,
    pub targets: Vec<usize>,
}

impl Csr {
    pub fn from_pairs(num_vertices: usize, pairs: impl Iterator<Item = (usize, usize)> + Clone) -> Csr {
        let mut start = vec![0usize; num_vertices + 1];
        for (u, _) in pairs.clone() {
            start[u + 1] += 1;
        }
        for v in 0..num_vertices {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut targets = vec![0usize; start[num_vertices]];
        for (u, v) in pairs {
            targets[fill[u]] = v;
            fill[u] += 1;
        }
        Csr { start, targets }
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.targets[self.start[v]..self.start[v + 1]]
    }

    pub fn num_vertices(&self) -> usize {
        self.start.len() - 1
    }
}

/// Component id of every vertex. Ids are assigned in reverse topological
/// order of the condensation: a component only reaches components with
/// smaller or equal ids.
pub(crate) fn strongly_connected_components(g: &Csr) -> (Vec<usize>, usize) {
    const UNVISITED: usize = usize::MAX;
    let n = g.num_vertices();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut comp = vec![UNVISITED; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next_index = 0;
    let mut count = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = g.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("component on stack");
                    on_stack[w] = false;
                    comp[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    (comp, count)
}
