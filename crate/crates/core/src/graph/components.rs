use super::WeightedGraph;

/// Connected-component labeling. Components are numbered in order of their
/// smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    labels: Vec<usize>,
    count: usize,
}

impl Components {
    #[inline]
    pub fn label(&self, x: usize) -> usize {
        self.labels[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Vertices of each component, each list in increasing order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (x, &c) in self.labels.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.count];
        for &c in &self.labels {
            out[c] += 1;
        }
        out
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Labels connected components with a union-find pass over the edges.
pub fn connected_components(g: &WeightedGraph) -> Components {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    for e in g.edges() {
        let a = find(&mut parent, e.u);
        let b = find(&mut parent, e.v);
        if a != b {
            // Smaller root wins so that roots are component minima.
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }
    let mut labels = vec![usize::MAX; n];
    let mut count = 0;
    for x in 0..n {
        let r = find(&mut parent, x);
        if labels[r] == usize::MAX {
            labels[r] = count;
            count += 1;
        }
        labels[x] = labels[r];
    }
    Components { labels, count }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_disjoint_edges() {
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let c = connected_components(&g);
        assert_eq!(c.count(), 2);
        assert_eq!(c.labels(), &[0, 0, 1, 1]);
    }

    #[test]
    fn triangle_is_connected() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(connected_components(&g).count(), 1);
    }

    #[test]
    fn isolated_vertices_are_components() {
        let g = WeightedGraph::new(5, [(1, 3, 1.0)]).unwrap();
        let c = connected_components(&g);
        assert_eq!(c.count(), 4);
        assert_eq!(c.labels(), &[0, 1, 2, 1, 3]);
        assert_eq!(c.sizes(), vec![1, 2, 1, 1]);
        assert_eq!(c.members()[1], vec![1, 3]);
    }
}

/// Marks every edge whose removal disconnects its component.
///
/// Iterative Tarjan low-link search; the graph is simple, so skipping the
/// parent edge by index is enough.
pub fn bridges(g: &WeightedGraph) -> Vec<bool> {
    let n = g.n();
    let mut is_bridge = vec![false; g.m()];
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    // (vertex, edge used to enter it, next neighbor cursor)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(top) = stack.last_mut() {
            let (x, parent_edge, cursor) = *top;
            let nbrs = g.neighbors(x);
            if cursor < nbrs.len() {
                top.2 += 1;
                let (y, e) = nbrs[cursor];
                if e == parent_edge {
                    continue;
                }
                if disc[y] == usize::MAX {
                    disc[y] = timer;
                    low[y] = timer;
                    timer += 1;
                    stack.push((y, e, 0));
                } else {
                    low[x] = low[x].min(disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[x]);
                    if low[x] > disc[p] {
                        is_bridge[parent_edge] = true;
                    }
                }
            }
        }
    }
    is_bridge
}
