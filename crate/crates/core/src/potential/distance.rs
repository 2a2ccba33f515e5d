//! Distance graphs for metrics `e^{2u} h` on the sphere and the torus.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Background, PotentialError, SingularMetric};
use crate::conformal::grid_stencil;
use crate::curvature::{cross, normalize, Point};
use crate::geodesics::CircleProbe;
use crate::graph::Csr;
use crate::quadrature::{integrate_with_breaks, Break};

/// Smallest torus grid (nodes per side) accepted.
pub const MIN_TORUS_GRID: usize = 8;
/// Smallest icosphere subdivision level accepted.
pub const MIN_SPHERE_LEVEL: u32 = 2;
/// Torus nodes within this many steps (max norm) are joined.
const TORUS_STENCIL: i64 = 3;
/// Icosphere nodes within this many edge hops are joined.
const SPHERE_RING: usize = 3;
const SEGMENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphResolution {
    /// `n × n` node lattice on the torus.
    TorusGrid(usize),
    /// Icosphere subdivided `level` times (`10·4^level + 2` nodes).
    Icosphere(u32),
}

impl GraphResolution {
    pub fn default_for(background: Background) -> Self {
        match background {
            Background::Torus => GraphResolution::TorusGrid(64),
            Background::Sphere => GraphResolution::Icosphere(4),
        }
    }
}

/// `∫ e^u` along the shortest background geodesic from `a` to `b`.
pub fn segment_weight(metric: &SingularMetric, a: Point, b: Point) -> f64 {
    let bg = metric.background();
    let len = bg.distance(a, b);
    if len == 0.0 {
        return 0.0;
    }
    let mut breaks = Vec::new();
    for (q, beta) in metric.potential.atom_exponents() {
        let (t, gap) = closest_approach(bg, a, b, q);
        if gap < 1e-12 {
            breaks.push(Break::Singular { t, exponent: beta });
        } else if gap < len {
            breaks.push(Break::Peak { t });
        }
    }
    let f = |t: f64| len * metric.factor(bg.interpolate(a, b, t));
    integrate_with_breaks(f, &breaks, SEGMENT_TOL)
}

/// Parameter of the point of the segment closest to `q`, and its distance.
fn closest_approach(bg: Background, a: Point, b: Point, q: Point) -> (f64, f64) {
    match bg {
        Background::Torus => {
            let d = super::torus_offset(b, a);
            let w = super::torus_offset(q, a);
            let dd = d[0] * d[0] + d[1] * d[1];
            let t = ((w[0] * d[0] + w[1] * d[1]) / dd).clamp(0.0, 1.0);
            (t, (w[0] - t * d[0]).hypot(w[1] - t * d[1]))
        }
        Background::Sphere => {
            let len = bg.distance(a, b);
            let n = cross(a, b);
            let nn = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            let t = if nn < 1e-300 {
                0.0
            } else {
                let n = [n[0] / nn, n[1] / nn, n[2] / nn];
                let qn = q[0] * n[0] + q[1] * n[1] + q[2] * n[2];
                let proj = [q[0] - qn * n[0], q[1] - qn * n[1], q[2] - qn * n[2]];
                let c = cross(a, proj);
                let sin = c[0] * n[0] + c[1] * n[1] + c[2] * n[2];
                let cos = a[0] * proj[0] + a[1] * proj[1] + a[2] * proj[2];
                (sin.atan2(cos) / len).clamp(0.0, 1.0)
            };
            let p = bg.interpolate(a, b, t);
            (t, bg.distance(p, q).min(bg.distance(a, q)).min(bg.distance(b, q)))
        }
    }
}

/// Graph on background nodes whose edges are background geodesic segments
/// weighted by the metric.
pub struct MetricGraph<'m> {
    metric: &'m SingularMetric,
    resolution: GraphResolution,
    nodes: Vec<Point>,
    rings: Vec<Vec<u32>>,
    csr: Csr,
}

impl<'m> MetricGraph<'m> {
    pub fn build(metric: &'m SingularMetric, resolution: GraphResolution) -> Result<Self, PotentialError> {
        let bg = metric.background();
        let (nodes, rings, pairs) = match (bg, resolution) {
            (Background::Torus, GraphResolution::TorusGrid(n)) => {
                if n < MIN_TORUS_GRID {
                    return Err(PotentialError::ResolutionTooLow { resolution: n, minimum: MIN_TORUS_GRID });
                }
                let nodes: Vec<Point> =
                    (0..n * n).map(|k| [(k % n) as f64 / n as f64, (k / n) as f64 / n as f64, 0.0]).collect();
                let dirs = grid_stencil(TORUS_STENCIL);
                let mut pairs = Vec::with_capacity(n * n * dirs.len());
                for k in 0..n * n {
                    let (i, j) = ((k % n) as i64, (k / n) as i64);
                    for &(dx, dy) in &dirs {
                        let (ii, jj) = ((i + dx).rem_euclid(n as i64), (j + dy).rem_euclid(n as i64));
                        pairs.push((k as u32, (jj * n as i64 + ii) as u32));
                    }
                }
                (nodes, Vec::new(), pairs)
            }
            (Background::Sphere, GraphResolution::Icosphere(level)) => {
                if level < MIN_SPHERE_LEVEL {
                    return Err(PotentialError::ResolutionTooLow {
                        resolution: level as usize,
                        minimum: MIN_SPHERE_LEVEL as usize,
                    });
                }
                let (nodes, adjacency) = icosphere(level);
                let rings: Vec<Vec<u32>> = (0..nodes.len()).map(|v| k_ring(&adjacency, v, SPHERE_RING)).collect();
                let mut pairs = Vec::new();
                for (v, ring) in rings.iter().enumerate() {
                    for &w in ring {
                        if (w as usize) > v {
                            pairs.push((v as u32, w));
                        }
                    }
                }
                (nodes, rings, pairs)
            }
            _ => {
                return Err(PotentialError::BadInput(format!(
                    "resolution {resolution:?} does not fit the {bg:?} background"
                )))
            }
        };
        let edges: Vec<(u32, u32, f64)> = pairs
            .par_iter()
            .map(|&(a, b)| (a, b, segment_weight(metric, nodes[a as usize], nodes[b as usize])))
            .collect();
        let csr = Csr::from_edges(nodes.len(), &edges);
        Ok(MetricGraph { metric, resolution, nodes, rings, csr })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    /// Nodes a point is joined to; weight `0` marks an exact coincidence.
    fn candidates(&self, p: Point) -> Vec<(usize, Option<f64>)> {
        match self.resolution {
            GraphResolution::TorusGrid(n) => {
                let (fx, fy) = (p[0] * n as f64, p[1] * n as f64);
                let (ci, cj) = (fx.floor() as i64, fy.floor() as i64);
                if fx == fx.floor() && fy == fy.floor() {
                    let k = (cj.rem_euclid(n as i64) * n as i64 + ci.rem_euclid(n as i64)) as usize;
                    return vec![(k, Some(0.0))];
                }
                let r = TORUS_STENCIL;
                let mut out = Vec::new();
                for j in cj - r + 1..=cj + r {
                    for i in ci - r + 1..=ci + r {
                        out.push(((j.rem_euclid(n as i64) * n as i64 + i.rem_euclid(n as i64)) as usize, None));
                    }
                }
                out
            }
            GraphResolution::Icosphere(_) => {
                let nearest = self.nearest_node(p);
                if self.nodes[nearest] == p {
                    return vec![(nearest, Some(0.0))];
                }
                let mut out: Vec<(usize, Option<f64>)> =
                    self.rings[nearest].iter().map(|&w| (w as usize, None)).collect();
                out.push((nearest, None));
                out
            }
        }
    }

    /// Nodes a point is joined to, with segment weights.
    fn connections(&self, p: Point) -> Vec<(usize, f64)> {
        self.candidates(p)
            .into_iter()
            .map(|(k, w)| (k, w.unwrap_or_else(|| segment_weight(self.metric, p, self.nodes[k]))))
            .filter(|(_, w)| w.is_finite())
            .collect()
    }

    fn nearest_node(&self, p: Point) -> usize {
        let mut best = (f64::NEG_INFINITY, 0);
        for (k, q) in self.nodes.iter().enumerate() {
            let d = p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
            if d > best.0 {
                best = (d, k);
            }
        }
        best.1
    }

    /// Metric distances from `x` to every node.
    pub fn field(&self, x: Point) -> Vec<f64> {
        self.csr.dijkstra(&self.connections(x)).dist
    }

    fn distance_with_field(&self, field: &[f64], x: Point, y: Point) -> f64 {
        let mut best = segment_weight(self.metric, x, y);
        let mut candidates = self.candidates(y);
        candidates.sort_by(|a, b| field[a.0].total_cmp(&field[b.0]));
        for (k, w) in candidates {
            // Segment weights are non-negative, so nodes already farther
            // than the best route cannot improve it.
            if field[k] >= best {
                break;
            }
            let w = w.unwrap_or_else(|| segment_weight(self.metric, y, self.nodes[k]));
            best = best.min(field[k] + w);
        }
        best
    }

    /// Upper bound on the metric distance: shortest graph path with
    /// connection segments, or the direct background geodesic.
    pub fn distance(&self, x: Point, y: Point) -> Result<f64, PotentialError> {
        let bg = self.metric.background();
        let (x, y) = (bg.point(x)?, bg.point(y)?);
        Ok(self.distance_with_field(&self.field(x), x, y))
    }

    /// Distances between all pairs of `points`, one Dijkstra per point.
    pub fn pairwise(&self, points: &[Point]) -> Result<Vec<Vec<f64>>, PotentialError> {
        let bg = self.metric.background();
        let points: Vec<Point> = points.iter().map(|&p| bg.point(p)).collect::<Result<_, _>>()?;
        Ok(points
            .par_iter()
            .map(|&x| {
                let field = self.field(x);
                points.iter().map(|&y| self.distance_with_field(&field, x, y)).collect()
            })
            .collect())
    }
}

/// One-shot metric distance between two points.
pub fn metric_distance(
    metric: &SingularMetric,
    x: Point,
    y: Point,
    resolution: GraphResolution,
) -> Result<f64, PotentialError> {
    MetricGraph::build(metric, resolution)?.distance(x, y)
}

/// Circle probe around a point; rays are background geodesics.
pub struct MetricCircle<'g, 'm> {
    graph: &'g MetricGraph<'m>,
    center: Point,
    field: Vec<f64>,
    max_parameter: f64,
    limit: f64,
}

impl<'g, 'm> MetricCircle<'g, 'm> {
    pub fn new(graph: &'g MetricGraph<'m>, center: Point) -> Result<Self, PotentialError> {
        let bg = graph.metric.background();
        let center = bg.point(center)?;
        let injectivity = match bg {
            Background::Torus => 0.5,
            Background::Sphere => PI,
        };
        let nearest_atom = graph
            .metric
            .potential
            .atoms()
            .iter()
            .map(|a| bg.distance(a.point, center))
            .filter(|&d| d > 1e-12)
            .fold(injectivity, f64::min);
        let max_parameter = 0.25 * nearest_atom;
        let field = graph.field(center);
        let mut probe = MetricCircle { graph, center, field, max_parameter, limit: f64::INFINITY };
        probe.limit = (0..8)
            .map(|k| probe.distance_from_center(&probe.ray_point(k, 8, max_parameter)))
            .fold(f64::INFINITY, f64::min);
        Ok(probe)
    }
}

impl CircleProbe for MetricCircle<'_, '_> {
    type Point = Point;

    fn ray_point(&self, k: usize, n: usize, s: f64) -> Point {
        let phi = 2.0 * PI * k as f64 / n as f64;
        self.graph.metric.background().exp(self.center, phi, s)
    }

    fn max_parameter(&self) -> f64 {
        self.max_parameter
    }

    fn distance_from_center(&self, p: &Point) -> f64 {
        self.graph.distance_with_field(&self.field, self.center, *p)
    }

    fn chord(&self, a: &Point, b: &Point) -> f64 {
        segment_weight(self.graph.metric, *a, *b)
    }

    fn radius_limit(&self) -> f64 {
        self.limit
    }
}

/// Icosphere with a vertex at each pole, and its vertex adjacency.
pub(crate) fn icosphere(level: u32) -> (Vec<Point>, Vec<Vec<u32>>) {
    let mut verts: Vec<Point> = vec![[0.0, 0.0, 1.0]];
    let z = 1.0 / 5f64.sqrt();
    let r = 2.0 / 5f64.sqrt();
    for k in 0..5 {
        let a = 2.0 * PI * k as f64 / 5.0;
        verts.push([r * a.cos(), r * a.sin(), z]);
    }
    for k in 0..5 {
        let a = 2.0 * PI * k as f64 / 5.0 + PI / 5.0;
        verts.push([r * a.cos(), r * a.sin(), -z]);
    }
    verts.push([0.0, 0.0, -1.0]);
    let mut faces: Vec<[u32; 3]> = Vec::new();
    for k in 0..5u32 {
        let (u0, u1) = (1 + k, 1 + (k + 1) % 5);
        let (l0, l1) = (6 + k, 6 + (k + 1) % 5);
        faces.push([0, u0, u1]);
        faces.push([u0, l0, u1]);
        faces.push([u1, l0, l1]);
        faces.push([11, l1, l0]);
    }
    for _ in 0..level {
        let mut midpoint = std::collections::HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut mid = |a: u32, b: u32, verts: &mut Vec<Point>| -> u32 {
            let key = (a.min(b), a.max(b));
            *midpoint.entry(key).or_insert_with(|| {
                let (p, q) = (verts[a as usize], verts[b as usize]);
                verts.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                (verts.len() - 1) as u32
            })
        };
        for &[a, b, c] in &faces {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        faces = next;
    }
    let mut adjacency = vec![Vec::new(); verts.len()];
    for &[a, b, c] in &faces {
        for (x, y) in [(a, b), (b, c), (c, a)] {
            adjacency[x as usize].push(y);
            adjacency[y as usize].push(x);
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }
    (verts, adjacency)
}

/// Vertices within `k` hops of `v`, excluding `v`.
fn k_ring(adjacency: &[Vec<u32>], v: usize, k: usize) -> Vec<u32> {
    let mut seen = vec![v as u32];
    let mut frontier = vec![v as u32];
    for _ in 0..k {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in &adjacency[u as usize] {
                if !seen.contains(&w) {
                    seen.push(w);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    seen.remove(0);
    seen
}

#[cfg(test)]
mod tests {
    use super::super::{build_alexandrov_metric, football, one_cone_torus, PrescribedMeasure, SmoothPart};
    use super::*;
    use crate::geodesics::geodesic_circle_length;

    #[test]
    fn icosphere_counts() {
        for level in 0..3 {
            let (v, adj) = icosphere(level);
            assert_eq!(v.len(), 10 * 4usize.pow(level) + 2);
            let degree_sum: usize = adj.iter().map(Vec::len).sum();
            assert_eq!(degree_sum, 2 * 30 * 4usize.pow(level));
        }
        let (v, _) = icosphere(1);
        assert_eq!(v[0], [0.0, 0.0, 1.0]);
        assert_eq!(v[11], [0.0, 0.0, -1.0]);
    }

    #[test]
    fn round_sphere_distances() {
        let omega = PrescribedMeasure::new(Background::Sphere).with_smooth(SmoothPart::Uniform(4.0 * PI));
        let m = build_alexandrov_metric(&omega).unwrap();
        let g = MetricGraph::build(&m, GraphResolution::Icosphere(3)).unwrap();
        let x = normalize([0.3, 0.1, 0.9]);
        let y = normalize([-0.5, 0.7, -0.2]);
        let d = g.distance(x, y).unwrap();
        assert!((d - Background::Sphere.distance(x, y)).abs() < 1e-9);
    }

    #[test]
    fn football_pole_to_pole() {
        let m = build_alexandrov_metric(&football(PI)).unwrap();
        let g = MetricGraph::build(&m, GraphResolution::Icosphere(3)).unwrap();
        let d = g.distance([0.0, 0.0, 1.0], [0.0, 0.0, -1.0]).unwrap();
        // e^{-1/2} √2 B(1/4, 1/2)
        assert!((d - 4.497_975_8).abs() < 1e-3 * 4.5, "{d}");
    }

    #[test]
    fn torus_cone_circle() {
        let m = build_alexandrov_metric(&one_cone_torus([0.5, 0.5, 0.0], PI)).unwrap();
        let g = MetricGraph::build(&m, GraphResolution::TorusGrid(16)).unwrap();
        let probe = MetricCircle::new(&g, [0.5, 0.5, 0.0]).unwrap();
        let r = 0.05 * probe.radius_limit();
        let len = geodesic_circle_length(&probe, r, 64).unwrap();
        assert!((len / r - PI).abs() < 0.02 * PI, "{}", len / r);
    }

    #[test]
    fn coarse_resolution_rejected() {
        let m = build_alexandrov_metric(&one_cone_torus([0.5, 0.5, 0.0], 1.0)).unwrap();
        assert!(matches!(
            MetricGraph::build(&m, GraphResolution::TorusGrid(4)),
            Err(PotentialError::ResolutionTooLow { .. })
        ));
        assert!(matches!(MetricGraph::build(&m, GraphResolution::Icosphere(3)), Err(PotentialError::BadInput(_))));
    }
}
