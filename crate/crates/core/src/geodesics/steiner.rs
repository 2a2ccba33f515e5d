//! Steiner-point graphs on cone surfaces.

use crate::graph::Csr;
use crate::mesh::{ConeSurface, Corner};

use super::funnel::{dist, P2};

/// Steiner points per edge at a refinement level. Counts `2^(level+1) - 1`
/// nest, so every level's node set contains the previous one.
pub fn points_per_edge(level: u32) -> usize {
    (1usize << (level + 1)) - 1
}

/// Graph edge annotation: face it crosses and the two node slots inside it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GraphEdge {
    pub face: u32,
    pub slot_a: u16,
    pub slot_b: u16,
}

#[derive(Debug)]
pub(crate) struct SteinerGraph {
    pub per_edge: usize,
    pub vertex_count: usize,
    pub csr: Csr,
    pub edges: Vec<GraphEdge>,
    canonical: Vec<usize>,
}

impl SteinerGraph {
    pub fn build(surface: &ConeSurface, level: u32) -> Self {
        let topo = surface.topology();
        let k = points_per_edge(level);
        let mut canonical = vec![usize::MAX; topo.edge_count()];
        for h in 0..3 * topo.face_count() {
            let e = topo.edge_of(h);
            canonical[e] = canonical[e].min(h);
        }
        let mut g = SteinerGraph {
            per_edge: k,
            vertex_count: topo.vertex_count(),
            csr: Csr::default(),
            edges: Vec::new(),
            canonical,
        };
        let mut raw = Vec::new();
        for f in 0..topo.face_count() {
            let slots = g.face_slots(surface, f);
            let count = slots.len();
            for a in 0..count {
                for b in a + 1..count {
                    let (sa, sb) = (g.slot_sides(a), g.slot_sides(b));
                    let shared = sa.iter().flatten().find(|&&s| sb.contains(&Some(s))).copied();
                    let keep = match shared {
                        None => true,
                        // Segments along a side are added once, from the
                        // canonical face, between neighbouring nodes only.
                        Some(side) => {
                            let h = 3 * f + side;
                            h == g.canonical[topo.edge_of(h)]
                                && g.side_index(a, side).abs_diff(g.side_index(b, side)) == 1
                        }
                    };
                    if !keep || slots[a].0 == slots[b].0 {
                        continue;
                    }
                    raw.push((slots[a].0 as u32, slots[b].0 as u32, dist(slots[a].1, slots[b].1)));
                    g.edges.push(GraphEdge { face: f as u32, slot_a: a as u16, slot_b: b as u16 });
                }
            }
        }
        g.csr = Csr::from_edges(g.node_count(), &raw);
        g
    }

    pub fn node_count(&self) -> usize {
        self.vertex_count + self.canonical.len() * self.per_edge
    }

    pub fn slots_per_face(&self) -> usize {
        3 + 3 * self.per_edge
    }

    /// Sides a slot lies on: corners lie on two, Steiner points on one.
    fn slot_sides(&self, slot: usize) -> [Option<usize>; 2] {
        if slot < 3 {
            [Some((slot + 1) % 3), Some((slot + 2) % 3)]
        } else {
            [Some((slot - 3) / self.per_edge), None]
        }
    }

    /// Position of a slot along `side`, counted from the side's origin:
    /// `0` at the origin corner, `k + 1` at the target corner.
    fn side_index(&self, slot: usize, side: usize) -> usize {
        if slot < 3 {
            if slot == (side + 1) % 3 {
                0
            } else {
                self.per_edge + 1
            }
        } else {
            (slot - 3) % self.per_edge + 1
        }
    }

    /// Side of a Steiner slot.
    pub fn steiner_side(&self, slot: usize) -> Option<usize> {
        (slot >= 3).then(|| (slot - 3) / self.per_edge)
    }

    /// `(node, local position)` of every slot of a face.
    pub fn face_slots(&self, surface: &ConeSurface, face: usize) -> Vec<(usize, P2)> {
        let topo = surface.topology();
        let layout = surface.face_layout(face);
        let k = self.per_edge;
        let mut out = Vec::with_capacity(self.slots_per_face());
        for (i, &p) in layout.iter().enumerate() {
            out.push((topo.vertex_of(Corner::new(face, i)), p));
        }
        for side in 0..3 {
            let h = 3 * face + side;
            let e = topo.edge_of(h);
            let (a, b) = (layout[(side + 1) % 3], layout[(side + 2) % 3]);
            let forward = self.canonical[e] == h;
            for j in 1..=k {
                let t = j as f64 / (k + 1) as f64;
                let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                let idx = if forward { j - 1 } else { k - j };
                out.push((self.vertex_count + e * k + idx, p));
            }
        }
        out
    }

    pub fn is_vertex_node(&self, node: usize) -> bool {
        node < self.vertex_count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::presets;

    #[test]
    fn counts_nest() {
        assert_eq!(points_per_edge(0), 1);
        assert_eq!(points_per_edge(3), 15);
        let s = presets::square_torus(1.0).unwrap();
        let g = SteinerGraph::build(&s, 1);
        assert_eq!(g.node_count(), 1 + 3 * 3);
    }

    #[test]
    fn shared_nodes_agree_across_faces() {
        let cube = presets::unit_cube();
        let g = SteinerGraph::build(&cube, 2);
        let topo = cube.topology();
        // The same node seen from both incident faces sits at the same
        // distance from the edge's origin vertex.
        for h in 0..36 {
            let t = topo.twin(h).unwrap();
            let (f, i, gf, j) = (h / 3, h % 3, t / 3, t % 3);
            let sf = g.face_slots(&cube, f);
            let sg = g.face_slots(&cube, gf);
            let origin_f = cube.face_layout(f)[(i + 1) % 3];
            let target_g = cube.face_layout(gf)[(j + 2) % 3];
            for (slot, &(node, p)) in sf.iter().enumerate().skip(3) {
                if g.steiner_side(slot) != Some(i) {
                    continue;
                }
                let (_, q) = sg.iter().copied().find(|&(n, _)| n == node).expect("node present in twin face");
                assert!((dist(p, origin_f) - dist(q, target_g)).abs() < 1e-14);
            }
        }
    }
}
