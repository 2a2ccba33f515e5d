//! Small reference surfaces.

use super::{ConeSurface, EdgeGluing, MeshError, Triangulation};

/// Corner positions of the unit cube; bit `k` of the index is coordinate `k`.
pub const CUBE_VERTICES: [[f64; 3]; 8] = [
    [0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [1.0, 1.0, 0.0],
    [0.0, 0.0, 1.0],
    [1.0, 0.0, 1.0],
    [0.0, 1.0, 1.0],
    [1.0, 1.0, 1.0],
];

/// Outward counter-clockwise quads of the unit cube.
const CUBE_QUADS: [[usize; 4]; 6] =
    [[0, 2, 3, 1], [4, 5, 7, 6], [0, 1, 5, 4], [2, 6, 7, 3], [0, 4, 6, 2], [1, 3, 7, 5]];

/// Triangles of the unit cube, two per square face.
pub fn cube_triangles() -> Vec<[usize; 3]> {
    CUBE_QUADS.iter().flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]).collect()
}

/// Surface of the unit cube from 12 right isosceles triangles. Vertex `v`
/// sits at `CUBE_VERTICES[v]`.
pub fn unit_cube() -> ConeSurface {
    ConeSurface::from_embedded(&CUBE_VERTICES, &cube_triangles()).expect("cube is a valid surface")
}

/// Flat square torus of the given side from two triangles.
///
/// Face 0 is `(0,0), (s,0), (s,s)` and face 1 is `(0,0), (s,s), (0,s)` in
/// the fundamental square.
pub fn square_torus(side: f64) -> Result<ConeSurface, MeshError> {
    let topo = Triangulation::build(2, &[EdgeGluing::new(1, 5), EdgeGluing::new(0, 4), EdgeGluing::new(2, 3)])?;
    let d = side * std::f64::consts::SQRT_2;
    ConeSurface::glue(topo, &[[side, d, side], [side, side, d]])
}

/// Two copies of the triangle with sides `a, b, c` glued along their
/// boundaries: a sphere with three cone points.
pub fn double_triangle(a: f64, b: f64, c: f64) -> Result<ConeSurface, MeshError> {
    let topo = Triangulation::build(2, &[EdgeGluing::new(0, 3), EdgeGluing::new(1, 5), EdgeGluing::new(2, 4)])?;
    ConeSurface::glue(topo, &[[a, b, c], [a, c, b]])
}

/// A single triangle: a disk with three boundary edges.
pub fn single_triangle(a: f64, b: f64, c: f64) -> Result<ConeSurface, MeshError> {
    ConeSurface::glue(Triangulation::build(1, &[])?, &[[a, b, c]])
}
