//! Compressed adjacency and Dijkstra, shared by every distance solver.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Undirected weighted graph in CSR form. Each undirected edge appears in
/// both adjacency lists; `edge_ids` maps a slot back to the edge it came from.
#[derive(Debug, Clone, Default)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    edge_ids: Vec<u32>,
}

impl Csr {
    /// Builds from undirected edges `(a, b, weight)`.
    pub fn from_edges(node_count: usize, edges: &[(u32, u32, f64)]) -> Self {
        let mut degree = vec![0usize; node_count + 1];
        for &(a, b, _) in edges {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = vec![0usize; node_count + 1];
        for i in 0..node_count {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let total = offsets[node_count];
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; total];
        let mut weights = vec![0.0; total];
        let mut edge_ids = vec![0u32; total];
        for (id, &(a, b, w)) in edges.iter().enumerate() {
            for (from, to) in [(a, b), (b, a)] {
                let slot = fill[from as usize];
                fill[from as usize] += 1;
                targets[slot] = to;
                weights[slot] = w;
                edge_ids[slot] = id as u32;
            }
        }
        Csr { offsets, targets, weights, edge_ids }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    /// Neighbours of `node` as `(target, weight, edge id)`.
    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, f64, usize)> + '_ {
        let range = self.offsets[node]..self.offsets[node + 1];
        range.map(move |s| (self.targets[s] as usize, self.weights[s], self.edge_ids[s] as usize))
    }

    /// Multiplies every weight by `factor`.
    pub fn scale(&mut self, factor: f64) {
        for w in &mut self.weights {
            *w *= factor;
        }
    }

    /// Single- or multi-source Dijkstra. `sources` carries initial offsets.
    pub fn dijkstra(&self, sources: &[(usize, f64)]) -> ShortestPaths {
        let n = self.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![None; n];
        let mut heap = BinaryHeap::new();
        for &(s, d0) in sources {
            if d0 < dist[s] {
                dist[s] = d0;
                heap.push(Entry { dist: d0, node: s });
            }
        }
        while let Some(Entry { dist: d, node }) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            for (next, w, edge) in self.neighbors(node) {
                let nd = d + w;
                if nd < dist[next] {
                    dist[next] = nd;
                    pred[next] = Some((node, edge));
                    heap.push(Entry { dist: nd, node: next });
                }
            }
        }
        ShortestPaths { dist, pred }
    }
}

/// Result of a Dijkstra sweep.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub dist: Vec<f64>,
    /// Predecessor node and the edge id used to reach each node.
    pub pred: Vec<Option<(usize, usize)>>,
}

impl ShortestPaths {
    /// Node sequence from a source to `target` (inclusive) with edge ids
    /// between consecutive nodes.
    pub fn path_to(&self, target: usize) -> (Vec<usize>, Vec<usize>) {
        let mut nodes = vec![target];
        let mut edges = Vec::new();
        let mut cur = target;
        while let Some((p, e)) = self.pred[cur] {
            nodes.push(p);
            edges.push(e);
            cur = p;
        }
        nodes.reverse();
        edges.reverse();
        (nodes, edges)
    }
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    dist: f64,
    node: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // Reversed for a min-heap.
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dijkstra_on_small_graph() {
        let g = Csr::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0), (2, 3, 0.5)]);
        let sp = g.dijkstra(&[(0, 0.0)]);
        assert_eq!(sp.dist, vec![0.0, 1.0, 2.0, 2.5]);
        let (nodes, edges) = sp.path_to(3);
        assert_eq!(nodes, vec![0, 1, 2, 3]);
        assert_eq!(edges, vec![0, 1, 3]);
    }

    #[test]
    fn multi_source_offsets() {
        let g = Csr::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let sp = g.dijkstra(&[(0, 5.0), (2, 0.25)]);
        assert_eq!(sp.dist, vec![2.25, 1.25, 0.25]);
    }
}
