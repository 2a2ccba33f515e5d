//! Combinatorial triangulations and Euclidean cone surfaces glued from
//! triangles.
//!
//! Oriented edge `3 * f + i` of face `f` is the edge opposite local vertex
//! `i`; it runs from local vertex `i + 1` to local vertex `i + 2` (mod 3), so
//! every face is counter-clockwise. Vertices are never given explicitly: they
//! are the orbits of corners under the edge gluing.

mod io;
pub mod presets;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::quadrature::NeumaierSum;

pub use io::{ObjExport, SurfaceFile};

/// Relative margin for the strict triangle inequality.
pub const TRIANGLE_MARGIN: f64 = 1e-12;
/// Relative tolerance for lengths of identified edges.
pub const LENGTH_MATCH_TOL: f64 = 1e-12;

const NO_TWIN: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("NonManifold: oriented edge {edge} is glued to more than one partner (or to itself)")]
    NonManifold { edge: usize },
    #[error("OrientationClash: gluing of edges {a} and {b} does not reverse orientation")]
    OrientationClash { a: usize, b: usize },
    #[error("Disconnected: gluing produces {components} components")]
    Disconnected { components: usize },
    #[error("EdgeOutOfRange: oriented edge {edge} does not exist ({face_count} faces)")]
    EdgeOutOfRange { edge: usize, face_count: usize },
    #[error("EmptyTriangulation: at least one face is required")]
    Empty,
    #[error("NonPositiveLength: face {face} edge {local} has length {length}")]
    NonPositiveLength { face: usize, local: usize, length: f64 },
    #[error("TriangleInequalityViolated: face {face} with lengths {lengths:?}")]
    TriangleInequalityViolated { face: usize, lengths: [f64; 3] },
    #[error("LengthMismatch: glued edges {a} and {b} have lengths {la} and {lb}")]
    LengthMismatch { a: usize, b: usize, la: f64, lb: f64 },
    #[error("BadInput: {0}")]
    BadInput(String),
}

/// A corner slot: local vertex `local` of face `face`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub face: usize,
    pub local: usize,
}

impl Corner {
    pub fn new(face: usize, local: usize) -> Self {
        debug_assert!(local < 3);
        Corner { face, local }
    }

    /// Oriented edge leaving this corner inside its face.
    pub fn outgoing(self) -> usize {
        3 * self.face + (self.local + 2) % 3
    }

    /// Oriented edge arriving at this corner inside its face.
    pub fn incoming(self) -> usize {
        3 * self.face + (self.local + 1) % 3
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.face, self.local)
    }
}

/// One identification of two oriented edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeGluing {
    pub a: usize,
    pub b: usize,
    /// Orientation-reversing identification. Anything else would make the
    /// quotient non-orientable.
    pub reversing: bool,
}

impl EdgeGluing {
    pub fn new(a: usize, b: usize) -> Self {
        EdgeGluing { a, b, reversing: true }
    }
}

impl From<(usize, usize)> for EdgeGluing {
    fn from((a, b): (usize, usize)) -> Self {
        EdgeGluing::new(a, b)
    }
}

/// Validated triangulated surface, purely combinatorial.
#[derive(Debug, Clone)]
pub struct Triangulation {
    face_count: usize,
    twin: Vec<u32>,
    corner_vertex: Vec<u32>,
    vertex_offsets: Vec<usize>,
    vertex_corners: Vec<Corner>,
    vertex_boundary: Vec<bool>,
    edge_of: Vec<u32>,
    edge_count: usize,
    boundary_loops: Vec<Vec<usize>>,
}

impl Triangulation {
    /// Validates a gluing of `face_count` triangles and derives vertices,
    /// edges and boundary loops.
    pub fn build(face_count: usize, gluing: &[EdgeGluing]) -> Result<Self, MeshError> {
        if face_count == 0 {
            return Err(MeshError::Empty);
        }
        let he_count = 3 * face_count;
        let mut twin = vec![NO_TWIN; he_count];
        for g in gluing {
            for e in [g.a, g.b] {
                if e >= he_count {
                    return Err(MeshError::EdgeOutOfRange { edge: e, face_count });
                }
            }
            if g.a == g.b {
                return Err(MeshError::NonManifold { edge: g.a });
            }
            if !g.reversing {
                return Err(MeshError::OrientationClash { a: g.a, b: g.b });
            }
            for e in [g.a, g.b] {
                if twin[e] != NO_TWIN {
                    return Err(MeshError::NonManifold { edge: e });
                }
            }
            twin[g.a] = g.b as u32;
            twin[g.b] = g.a as u32;
        }

        let components = count_components(face_count, &twin);
        if components != 1 {
            return Err(MeshError::Disconnected { components });
        }

        let mut tri = Triangulation {
            face_count,
            twin,
            corner_vertex: vec![u32::MAX; he_count],
            vertex_offsets: vec![0],
            vertex_corners: Vec::with_capacity(he_count),
            vertex_boundary: Vec::new(),
            edge_of: vec![u32::MAX; he_count],
            edge_count: 0,
            boundary_loops: Vec::new(),
        };
        tri.derive_vertices();
        tri.derive_edges();
        tri.derive_boundary_loops();
        Ok(tri)
    }

    /// Builds the gluing from vertex-indexed triangles by pairing each
    /// directed edge `(u, v)` with `(v, u)`. Derived vertex ids follow the
    /// input indices when the input is a manifold labelling.
    pub fn from_indexed(triangles: &[[usize; 3]]) -> Result<Self, MeshError> {
        let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * triangles.len());
        for (f, t) in triangles.iter().enumerate() {
            for i in 0..3 {
                let key = (t[(i + 1) % 3], t[(i + 2) % 3]);
                if directed.insert(key, 3 * f + i).is_some() {
                    return Err(MeshError::NonManifold { edge: 3 * f + i });
                }
            }
        }
        let mut gluing = Vec::new();
        for (&(u, v), &h) in &directed {
            if let Some(&g) = directed.get(&(v, u)) {
                if h < g {
                    gluing.push(EdgeGluing::new(h, g));
                }
            }
        }
        gluing.sort_by_key(|g| g.a);
        let mut tri = Triangulation::build(triangles.len(), &gluing)?;
        tri.relabel_from_input(triangles);
        Ok(tri)
    }

    fn relabel_from_input(&mut self, triangles: &[[usize; 3]]) {
        let n = self.vertex_count();
        let max_label = triangles.iter().flatten().copied().max().unwrap_or(0);
        if max_label + 1 != n {
            return;
        }
        let mut label_of = vec![usize::MAX; n];
        for (f, t) in triangles.iter().enumerate() {
            for (i, &label) in t.iter().enumerate() {
                let v = self.corner_vertex[3 * f + i] as usize;
                if label_of[v] == usize::MAX {
                    label_of[v] = label;
                } else if label_of[v] != label {
                    return;
                }
            }
        }
        let mut seen = vec![false; n];
        for &l in &label_of {
            if l >= n || seen[l] {
                return;
            }
            seen[l] = true;
        }
        let mut offsets = vec![0usize; n + 1];
        let mut corners = Vec::with_capacity(self.vertex_corners.len());
        let mut boundary = vec![false; n];
        let mut inverse = vec![0usize; n];
        for (v, &l) in label_of.iter().enumerate() {
            inverse[l] = v;
        }
        for l in 0..n {
            let old = inverse[l];
            corners.extend_from_slice(self.corners_of_vertex(old));
            offsets[l + 1] = corners.len();
            boundary[l] = self.vertex_boundary[old];
        }
        for cv in &mut self.corner_vertex {
            *cv = label_of[*cv as usize] as u32;
        }
        self.vertex_offsets = offsets;
        self.vertex_corners = corners;
        self.vertex_boundary = boundary;
    }

    fn derive_vertices(&mut self) {
        let he_count = 3 * self.face_count;
        for start in 0..he_count {
            if self.corner_vertex[start] != u32::MAX {
                continue;
            }
            let c0 = Corner::new(start / 3, start % 3);
            // Walk backward to a boundary fan start, or around the full cycle.
            let mut first = c0;
            let mut on_boundary = false;
            loop {
                match self.rotate_backward(first) {
                    None => {
                        on_boundary = true;
                        break;
                    }
                    Some(prev) if prev == c0 => break,
                    Some(prev) => first = prev,
                }
            }
            let v = self.vertex_boundary.len() as u32;
            let mut c = first;
            loop {
                self.corner_vertex[3 * c.face + c.local] = v;
                self.vertex_corners.push(c);
                match self.rotate_forward(c) {
                    None => break,
                    Some(next) if next == first => break,
                    Some(next) => c = next,
                }
            }
            self.vertex_offsets.push(self.vertex_corners.len());
            self.vertex_boundary.push(on_boundary);
        }
    }

    fn derive_edges(&mut self) {
        let mut count = 0u32;
        for h in 0..self.twin.len() {
            let t = self.twin[h];
            if t == NO_TWIN || (h as u32) < t {
                self.edge_of[h] = count;
                if t != NO_TWIN {
                    self.edge_of[t as usize] = count;
                }
                count += 1;
            }
        }
        self.edge_count = count as usize;
    }

    fn derive_boundary_loops(&mut self) {
        let mut visited = vec![false; self.twin.len()];
        for h in 0..self.twin.len() {
            if self.twin[h] != NO_TWIN || visited[h] {
                continue;
            }
            let mut lp = Vec::new();
            let mut cur = h;
            while !visited[cur] {
                visited[cur] = true;
                lp.push(cur);
                cur = self.next_boundary_edge(cur);
            }
            self.boundary_loops.push(lp);
        }
    }

    fn next_boundary_edge(&self, h: usize) -> usize {
        let (f, k) = (h / 3, h % 3);
        let mut c = Corner::new(f, (k + 2) % 3);
        loop {
            match self.rotate_forward(c) {
                None => return c.outgoing(),
                Some(next) => c = next,
            }
        }
    }

    /// Next corner around the same vertex, crossing the outgoing edge.
    pub fn rotate_forward(&self, c: Corner) -> Option<Corner> {
        let t = self.twin[c.outgoing()];
        if t == NO_TWIN {
            return None;
        }
        let t = t as usize;
        Some(Corner::new(t / 3, (t % 3 + 2) % 3))
    }

    /// Previous corner around the same vertex, crossing the incoming edge.
    pub fn rotate_backward(&self, c: Corner) -> Option<Corner> {
        let t = self.twin[c.incoming()];
        if t == NO_TWIN {
            return None;
        }
        let t = t as usize;
        Some(Corner::new(t / 3, (t % 3 + 1) % 3))
    }

    pub fn face_count(&self) -> usize {
        self.face_count
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_boundary.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Partner of an oriented edge, `None` on the boundary.
    pub fn twin(&self, half_edge: usize) -> Option<usize> {
        match self.twin[half_edge] {
            NO_TWIN => None,
            t => Some(t as usize),
        }
    }

    /// Unoriented edge class of an oriented edge.
    pub fn edge_of(&self, half_edge: usize) -> usize {
        self.edge_of[half_edge] as usize
    }

    pub fn vertex_of(&self, c: Corner) -> usize {
        self.corner_vertex[3 * c.face + c.local] as usize
    }

    /// Vertex at the origin of an oriented edge.
    pub fn origin(&self, half_edge: usize) -> usize {
        let (f, i) = (half_edge / 3, half_edge % 3);
        self.vertex_of(Corner::new(f, (i + 1) % 3))
    }

    /// Vertex at the target of an oriented edge.
    pub fn target(&self, half_edge: usize) -> usize {
        let (f, i) = (half_edge / 3, half_edge % 3);
        self.vertex_of(Corner::new(f, (i + 2) % 3))
    }

    /// Corners of a vertex in rotation order (fan order for boundary vertices).
    pub fn corners_of_vertex(&self, v: usize) -> &[Corner] {
        &self.vertex_corners[self.vertex_offsets[v]..self.vertex_offsets[v + 1]]
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.vertex_boundary[v]
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_loops.is_empty()
    }

    /// Boundary loops as ordered oriented edges.
    pub fn boundary_loops(&self) -> &[Vec<usize>] {
        &self.boundary_loops
    }

    /// `V - E + F` after identifications.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count as i64 + self.face_count as i64
    }

    /// The gluing this triangulation was built from, one entry per pair.
    pub fn gluing(&self) -> Vec<EdgeGluing> {
        (0..self.twin.len()).filter_map(|h| self.twin(h).filter(|&t| h < t).map(|t| EdgeGluing::new(h, t))).collect()
    }
}

fn count_components(face_count: usize, twin: &[u32]) -> usize {
    let mut seen = vec![false; face_count];
    let mut components = 0;
    let mut stack = Vec::new();
    for start in 0..face_count {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(f) = stack.pop() {
            for i in 0..3 {
                let t = twin[3 * f + i];
                if t != NO_TWIN {
                    let g = t as usize / 3;
                    if !seen[g] {
                        seen[g] = true;
                        stack.push(g);
                    }
                }
            }
        }
    }
    components
}

/// A triangulation with Euclidean edge lengths: a polyhedral (cone) surface.
#[derive(Debug, Clone)]
pub struct ConeSurface {
    topology: Triangulation,
    lengths: Vec<f64>,
    embedding: Option<Vec<[f64; 3]>>,
}

impl ConeSurface {
    /// Glues Euclidean triangles; `lengths[f][i]` is the edge opposite local
    /// vertex `i` of face `f`.
    pub fn glue(topology: Triangulation, lengths: &[[f64; 3]]) -> Result<Self, MeshError> {
        if lengths.len() != topology.face_count() {
            return Err(MeshError::BadInput(format!(
                "{} length triples for {} faces",
                lengths.len(),
                topology.face_count()
            )));
        }
        for (f, l) in lengths.iter().enumerate() {
            for (i, &x) in l.iter().enumerate() {
                if !(x > 0.0 && x.is_finite()) {
                    return Err(MeshError::NonPositiveLength { face: f, local: i, length: x });
                }
            }
            let perimeter = l[0] + l[1] + l[2];
            for i in 0..3 {
                let slack = l[(i + 1) % 3] + l[(i + 2) % 3] - l[i];
                if slack <= TRIANGLE_MARGIN * perimeter {
                    return Err(MeshError::TriangleInequalityViolated { face: f, lengths: *l });
                }
            }
        }
        let flat: Vec<f64> = lengths.iter().flatten().copied().collect();
        for g in topology.gluing() {
            let (la, lb) = (flat[g.a], flat[g.b]);
            if (la - lb).abs() > LENGTH_MATCH_TOL * la.max(lb) {
                return Err(MeshError::LengthMismatch { a: g.a, b: g.b, la, lb });
            }
        }
        Ok(ConeSurface { topology, lengths: flat, embedding: None })
    }

    /// Surface of a triangle mesh in space, with lengths and embedding taken
    /// from the vertex positions.
    pub fn from_embedded(positions: &[[f64; 3]], triangles: &[[usize; 3]]) -> Result<Self, MeshError> {
        if let Some(bad) = triangles.iter().flatten().find(|&&i| i >= positions.len()) {
            return Err(MeshError::BadInput(format!("vertex index {bad} out of range")));
        }
        let topology = Triangulation::from_indexed(triangles)?;
        let lengths: Vec<[f64; 3]> = triangles
            .iter()
            .map(|t| {
                let mut l = [0.0; 3];
                for (i, li) in l.iter_mut().enumerate() {
                    *li = dist3(positions[t[(i + 1) % 3]], positions[t[(i + 2) % 3]]);
                }
                l
            })
            .collect();
        let mut surface = ConeSurface::glue(topology, &lengths)?;
        let mut embedding = vec![[f64::NAN; 3]; surface.topology.vertex_count()];
        for (f, t) in triangles.iter().enumerate() {
            for (i, &p) in t.iter().enumerate() {
                embedding[surface.topology.vertex_of(Corner::new(f, i))] = positions[p];
            }
        }
        surface.embedding = Some(embedding);
        Ok(surface)
    }

    /// Attaches 3D positions (one per derived vertex) for export.
    pub fn with_embedding(mut self, positions: Vec<[f64; 3]>) -> Result<Self, MeshError> {
        if positions.len() != self.topology.vertex_count() {
            return Err(MeshError::BadInput(format!(
                "{} positions for {} vertices",
                positions.len(),
                self.topology.vertex_count()
            )));
        }
        self.embedding = Some(positions);
        Ok(self)
    }

    pub fn topology(&self) -> &Triangulation {
        &self.topology
    }

    pub fn embedding(&self) -> Option<&[[f64; 3]]> {
        self.embedding.as_deref()
    }

    pub fn face_count(&self) -> usize {
        self.topology.face_count()
    }

    /// Length of an oriented edge.
    pub fn length(&self, half_edge: usize) -> f64 {
        self.lengths[half_edge]
    }

    /// Edge lengths of a face, indexed by opposite local vertex.
    pub fn face_lengths(&self, face: usize) -> [f64; 3] {
        [self.lengths[3 * face], self.lengths[3 * face + 1], self.lengths[3 * face + 2]]
    }

    /// Interior angle at a corner.
    pub fn vertex_angle(&self, c: Corner) -> f64 {
        let l = self.face_lengths(c.face);
        corner_angle(l[c.local], l[(c.local + 1) % 3], l[(c.local + 2) % 3])
    }

    /// Sum of incident corner angles at a vertex.
    pub fn angle_sum(&self, v: usize) -> f64 {
        let mut s = NeumaierSum::default();
        for &c in self.topology.corners_of_vertex(v) {
            s.add(self.vertex_angle(c));
        }
        s.value()
    }

    /// Planar coordinates of the face's corners: corner 0 at the origin,
    /// corner 1 on the positive x axis, corner 2 in the upper half plane.
    pub fn face_layout(&self, face: usize) -> [[f64; 2]; 3] {
        let [l0, l1, l2] = self.face_lengths(face);
        let x = (l2 * l2 + l1 * l1 - l0 * l0) / (2.0 * l2);
        let y = (l1 * l1 - x * x).max(0.0).sqrt();
        [[0.0, 0.0], [l2, 0.0], [x, y]]
    }

    pub fn face_area(&self, face: usize) -> f64 {
        let [a, b, c] = self.face_lengths(face);
        heron(a, b, c)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.topology.euler_characteristic()
    }

    /// Same combinatorics with all lengths multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> ConeSurface {
        ConeSurface {
            topology: self.topology.clone(),
            lengths: self.lengths.iter().map(|l| l * factor).collect(),
            embedding: self
                .embedding
                .as_ref()
                .map(|e| e.iter().map(|p| [p[0] * factor, p[1] * factor, p[2] * factor]).collect()),
        }
    }

    /// Lengths as per-face triples, the inverse of [`ConeSurface::glue`].
    pub fn length_triples(&self) -> Vec<[f64; 3]> {
        (0..self.face_count()).map(|f| self.face_lengths(f)).collect()
    }
}

/// Angle opposite side `a` in a triangle with sides `a, b, c`.
///
/// Half-angle form of the law of cosines; stays accurate for needle-like
/// triangles where `acos` loses digits.
pub fn corner_angle(a: f64, b: f64, c: f64) -> f64 {
    let s = 0.5 * (a + b + c);
    let num = (s - b) * (s - c);
    let den = s * (s - a);
    2.0 * (num / den).sqrt().atan()
}

/// Triangle area from side lengths (Kahan's stable Heron formula).
pub fn heron(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}

pub(crate) fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn double_triangle_is_a_sphere() {
        let s = presets::double_triangle(1.0, 1.0, 1.0).unwrap();
        assert_eq!(s.euler_characteristic(), 2);
        assert_eq!(s.topology().vertex_count(), 3);
        assert!(s.topology().is_closed());
    }

    #[test]
    fn square_torus_has_zero_euler_characteristic() {
        let s = presets::square_torus(1.0).unwrap();
        assert_eq!(s.euler_characteristic(), 0);
        assert_eq!(s.topology().vertex_count(), 1);
        for v in 0..1 {
            assert!((s.angle_sum(v) - 2.0 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn single_triangle_is_a_disk() {
        let t = Triangulation::build(1, &[]).unwrap();
        assert_eq!(t.euler_characteristic(), 1);
        assert_eq!(t.boundary_loops().len(), 1);
        assert_eq!(t.boundary_loops()[0].len(), 3);
        // Loop is ordered: each edge ends where the next begins.
        let lp = &t.boundary_loops()[0];
        for w in 0..lp.len() {
            assert_eq!(t.target(lp[w]), t.origin(lp[(w + 1) % lp.len()]));
        }
    }

    #[test]
    fn gluing_errors() {
        assert_eq!(
            Triangulation::build(2, &[EdgeGluing::new(0, 3), EdgeGluing::new(0, 4)]).unwrap_err(),
            MeshError::NonManifold { edge: 0 }
        );
        assert_eq!(Triangulation::build(1, &[EdgeGluing::new(1, 1)]).unwrap_err(), MeshError::NonManifold { edge: 1 });
        let flipped = EdgeGluing { a: 0, b: 3, reversing: false };
        assert_eq!(Triangulation::build(2, &[flipped]).unwrap_err(), MeshError::OrientationClash { a: 0, b: 3 });
        assert_eq!(Triangulation::build(2, &[]).unwrap_err(), MeshError::Disconnected { components: 2 });
        assert!(matches!(
            Triangulation::build(1, &[EdgeGluing::new(0, 7)]),
            Err(MeshError::EdgeOutOfRange { edge: 7, .. })
        ));
    }

    #[test]
    fn length_validation() {
        let t = Triangulation::build(1, &[]).unwrap();
        assert!(matches!(
            ConeSurface::glue(t.clone(), &[[1.0, 1.0, 3.0]]),
            Err(MeshError::TriangleInequalityViolated { face: 0, .. })
        ));
        assert!(matches!(
            ConeSurface::glue(t.clone(), &[[1.0, 1.0, 2.0]]),
            Err(MeshError::TriangleInequalityViolated { .. })
        ));
        assert!(matches!(ConeSurface::glue(t, &[[1.0, -1.0, 1.0]]), Err(MeshError::NonPositiveLength { .. })));
        let sphere = Triangulation::build(2, &[(0, 3).into(), (1, 5).into(), (2, 4).into()]).unwrap();
        assert!(matches!(
            ConeSurface::glue(sphere, &[[1.0, 1.0, 1.0], [1.0, 1.0, 1.2]]),
            Err(MeshError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn corner_angles() {
        let eq = presets::double_triangle(1.0, 1.0, 1.0).unwrap();
        assert!((eq.vertex_angle(Corner::new(0, 1)) - FRAC_PI_3).abs() < 1e-15);
        let t = Triangulation::build(1, &[]).unwrap();
        let right = ConeSurface::glue(t.clone(), &[[2f64.sqrt(), 1.0, 1.0]]).unwrap();
        assert!((right.vertex_angle(Corner::new(0, 0)) - FRAC_PI_2).abs() < 1e-15);
        let pyth = ConeSurface::glue(t, &[[5.0, 4.0, 3.0]]).unwrap();
        let oracle = ((9.0f64 + 16.0 - 25.0) / 24.0).acos();
        assert!((pyth.vertex_angle(Corner::new(0, 0)) - oracle).abs() < 1e-12);
    }

    #[test]
    fn cube_has_eight_cone_vertices() {
        let cube = presets::unit_cube();
        assert_eq!(cube.face_count(), 12);
        assert_eq!(cube.topology().vertex_count(), 8);
        assert_eq!(cube.euler_characteristic(), 2);
        for v in 0..8 {
            assert!((cube.angle_sum(v) - 1.5 * PI).abs() < 1e-12);
        }
        // Input labels are kept: vertex 7 sits at (1, 1, 1).
        assert_eq!(cube.embedding().unwrap()[7], [1.0, 1.0, 1.0]);
    }

    #[test]
    fn rotation_visits_every_corner_once() {
        let cube = presets::unit_cube();
        let t = cube.topology();
        let mut count = 0;
        for v in 0..t.vertex_count() {
            for &c in t.corners_of_vertex(v) {
                assert_eq!(t.vertex_of(c), v);
                count += 1;
            }
        }
        assert_eq!(count, 36);
    }

    #[test]
    fn layout_reproduces_lengths() {
        let t = Triangulation::build(1, &[]).unwrap();
        let s = ConeSurface::glue(t, &[[0.7, 1.1, 0.9]]).unwrap();
        let p = s.face_layout(0);
        let d = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        assert!((d(p[1], p[2]) - 0.7).abs() < 1e-14);
        assert!((d(p[0], p[2]) - 1.1).abs() < 1e-14);
        assert!((d(p[0], p[1]) - 0.9).abs() < 1e-14);
        assert!(p[2][1] > 0.0);
    }

    #[test]
    fn heron_matches_right_triangle() {
        assert!((heron(3.0, 4.0, 5.0) - 6.0).abs() < 1e-14);
    }
}
