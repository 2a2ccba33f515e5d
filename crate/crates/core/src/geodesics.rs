//! Intrinsic distances on cone surfaces, uniform distance between metrics
//! and circle-length probes.
//!
//! Distances are shortest paths in a Steiner-point graph, then pulled taut
//! by unfolding the traversed face strip and running a funnel pass. Every
//! returned value is the length of an actual surface path, so it bounds the
//! true distance from above; taking the minimum over levels makes the bound
//! monotone under refinement.

pub mod funnel;
mod steiner;

use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::ShortestPaths;
use crate::mesh::{ConeSurface, Corner};
use funnel::{dist, Portal, P2};
use steiner::SteinerGraph;

pub use steiner::points_per_edge;

/// Refinement level used when callers do not ask for one.
pub const DEFAULT_LEVEL: u32 = 4;
/// Highest supported refinement level.
pub const MAX_LEVEL: u32 = 9;

const ZERO_BARY: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeodesicError {
    #[error("InvalidPoint: {0}")]
    InvalidPoint(String),
    #[error("DisconnectedPoint: no path between the query points")]
    DisconnectedPoint,
    #[error("EmptySample: uniform distance needs at least one pair")]
    EmptySample,
    #[error("RadiusTooLarge: radius {radius} exceeds the admissible {limit}")]
    RadiusTooLarge { radius: f64, limit: f64 },
    #[error("LevelTooHigh: level {0} exceeds the maximum {MAX_LEVEL}")]
    LevelTooHigh(u32),
}

/// A point of a cone surface in barycentric coordinates of one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub face: usize,
    pub bary: [f64; 3],
}

/// Where a point sits relative to the triangulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    Vertex(usize),
    /// On the edge of oriented edge `half_edge` (the smaller of the pair),
    /// at fraction `t` from its origin.
    Edge {
        half_edge: usize,
        t: f64,
    },
    Interior,
}

impl SurfacePoint {
    /// Normalizes the coordinates; they must be nonnegative with positive sum.
    pub fn new(surface: &ConeSurface, face: usize, bary: [f64; 3]) -> Result<Self, GeodesicError> {
        if face >= surface.face_count() {
            return Err(GeodesicError::InvalidPoint(format!("face {face} out of range")));
        }
        let s: f64 = bary.iter().sum();
        if bary.iter().any(|&b| !(b >= 0.0) || !b.is_finite()) || !(s > 0.0) {
            return Err(GeodesicError::InvalidPoint(format!("bad barycentric {bary:?}")));
        }
        Ok(SurfacePoint { face, bary: [bary[0] / s, bary[1] / s, bary[2] / s] })
    }

    pub fn at_corner(c: Corner) -> Self {
        let mut bary = [0.0; 3];
        bary[c.local] = 1.0;
        SurfacePoint { face: c.face, bary }
    }

    pub fn at_vertex(surface: &ConeSurface, v: usize) -> Self {
        SurfacePoint::at_corner(surface.topology().corners_of_vertex(v)[0])
    }

    /// Point of a face given in the face's layout coordinates.
    pub fn from_layout(surface: &ConeSurface, face: usize, p: P2) -> Result<Self, GeodesicError> {
        let [a, b, c] = surface.face_layout(face);
        let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
        let l1 = ((p[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (p[1] - a[1])) / det;
        let l2 = ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])) / det;
        let clamp = |x: f64| if x.abs() < 1e-13 { 0.0 } else { x };
        SurfacePoint::new(surface, face, [clamp(1.0 - l1 - l2), clamp(l1), clamp(l2)])
    }

    /// Position in the face's layout coordinates.
    pub fn position(&self, surface: &ConeSurface) -> P2 {
        let l = surface.face_layout(self.face);
        let b = self.bary;
        [b[0] * l[0][0] + b[1] * l[1][0] + b[2] * l[2][0], b[0] * l[0][1] + b[1] * l[1][1] + b[2] * l[2][1]]
    }

    pub fn location(&self, surface: &ConeSurface) -> Location {
        let zero: Vec<usize> = (0..3).filter(|&i| self.bary[i] <= ZERO_BARY).collect();
        let topo = surface.topology();
        match zero.len() {
            2 => {
                let i = (0..3).find(|i| !zero.contains(i)).unwrap();
                Location::Vertex(topo.vertex_of(Corner::new(self.face, i)))
            }
            1 => {
                let i = zero[0];
                let h = 3 * self.face + i;
                // Fraction from the origin (corner i+1) toward the target.
                let t = self.bary[(i + 2) % 3] / (self.bary[(i + 1) % 3] + self.bary[(i + 2) % 3]);
                match topo.twin(h) {
                    Some(tw) if tw < h => Location::Edge { half_edge: tw, t: 1.0 - t },
                    _ => Location::Edge { half_edge: h, t },
                }
            }
            _ => Location::Interior,
        }
    }

    /// Every `(face, layout position)` at which this point appears.
    pub fn representations(&self, surface: &ConeSurface) -> Vec<(usize, P2)> {
        match self.location(surface) {
            Location::Vertex(v) => surface
                .topology()
                .corners_of_vertex(v)
                .iter()
                .map(|c| (c.face, surface.face_layout(c.face)[c.local]))
                .collect(),
            Location::Edge { half_edge, t } => {
                let mut out = vec![(half_edge / 3, edge_point(surface, half_edge, t))];
                if let Some(tw) = surface.topology().twin(half_edge) {
                    out.push((tw / 3, edge_point(surface, tw, 1.0 - t)));
                }
                out
            }
            Location::Interior => vec![(self.face, self.position(surface))],
        }
    }

    /// Same point of the surface, whichever face it is expressed in.
    pub fn same_point(&self, other: &SurfacePoint, surface: &ConeSurface) -> bool {
        match (self.location(surface), other.location(surface)) {
            (Location::Vertex(a), Location::Vertex(b)) => a == b,
            (Location::Edge { half_edge: a, t: s }, Location::Edge { half_edge: b, t }) => {
                a == b && (s - t).abs() < 1e-12
            }
            (Location::Interior, Location::Interior) => {
                self.face == other.face && (0..3).all(|i| (self.bary[i] - other.bary[i]).abs() < 1e-12)
            }
            _ => false,
        }
    }
}

fn edge_point(surface: &ConeSurface, h: usize, t: f64) -> P2 {
    let l = surface.face_layout(h / 3);
    let i = h % 3;
    let (a, b) = (l[(i + 1) % 3], l[(i + 2) % 3]);
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Distances from a source to every graph node at one level.
#[derive(Debug, Clone)]
pub struct DistanceField {
    pub source: SurfacePoint,
    pub level: u32,
    pub distances: Vec<f64>,
}

/// Distance queries on one surface, caching the Steiner graph per level.
pub struct GeodesicSolver<'a> {
    surface: &'a ConeSurface,
    graphs: Vec<OnceLock<SteinerGraph>>,
}

struct Hop {
    face: usize,
    from: P2,
    to: P2,
    from_slot: Option<usize>,
    to_slot: Option<usize>,
    to_node: Option<usize>,
}

impl<'a> GeodesicSolver<'a> {
    pub fn new(surface: &'a ConeSurface) -> Self {
        GeodesicSolver { surface, graphs: (0..=MAX_LEVEL).map(|_| OnceLock::new()).collect() }
    }

    pub fn surface(&self) -> &ConeSurface {
        self.surface
    }

    fn graph(&self, level: u32) -> &SteinerGraph {
        self.graphs[level as usize].get_or_init(|| SteinerGraph::build(self.surface, level))
    }

    fn sources(&self, g: &SteinerGraph, p: &SurfacePoint) -> Vec<(usize, f64, usize, P2)> {
        if let Location::Vertex(v) = p.location(self.surface) {
            return vec![(v, 0.0, usize::MAX, [0.0; 2])];
        }
        let mut out = Vec::new();
        for (face, pos) in p.representations(self.surface) {
            for (node, q) in g.face_slots(self.surface, face) {
                out.push((node, dist(pos, q), face, pos));
            }
        }
        out
    }

    pub fn distance_field(&self, source: &SurfacePoint, level: u32) -> Result<DistanceField, GeodesicError> {
        if level > MAX_LEVEL {
            return Err(GeodesicError::LevelTooHigh(level));
        }
        let g = self.graph(level);
        let seeds: Vec<(usize, f64)> = self.sources(g, source).iter().map(|s| (s.0, s.1)).collect();
        Ok(DistanceField { source: *source, level, distances: g.csr.dijkstra(&seeds).dist })
    }

    /// Upper bound on `d(x, y)`, nonincreasing in `level`.
    pub fn distance(&self, x: &SurfacePoint, y: &SurfacePoint, level: u32) -> Result<f64, GeodesicError> {
        if level > MAX_LEVEL {
            return Err(GeodesicError::LevelTooHigh(level));
        }
        if x.same_point(y, self.surface) {
            return Ok(0.0);
        }
        let mut best = f64::INFINITY;
        for l in 0..=level {
            best = best.min(self.distance_at_level(x, y, l)?);
        }
        Ok(best)
    }

    fn distance_at_level(&self, x: &SurfacePoint, y: &SurfacePoint, level: u32) -> Result<f64, GeodesicError> {
        let g = self.graph(level);
        let src = self.sources(g, x);
        let seeds: Vec<(usize, f64)> = src.iter().map(|s| (s.0, s.1)).collect();
        let sp = g.csr.dijkstra(&seeds);

        let x_reps = x.representations(self.surface);
        let y_reps = y.representations(self.surface);
        let mut direct = f64::INFINITY;
        for &(fx, px) in &x_reps {
            for &(fy, py) in &y_reps {
                if fx == fy {
                    direct = direct.min(dist(px, py));
                }
            }
        }

        let dst = self.sources(g, y);
        let mut best: Option<(f64, usize)> = None;
        for (k, &(node, w, _, _)) in dst.iter().enumerate() {
            let d = sp.dist[node] + w;
            if d.is_finite() && best.is_none_or(|(b, _)| d < b) {
                best = Some((d, k));
            }
        }
        let Some((graph_len, k)) = best else {
            return if direct.is_finite() { Ok(direct) } else { Err(GeodesicError::DisconnectedPoint) };
        };
        let straight = self.straighten(g, &sp, &src, &dst[k]);
        Ok(direct.min(graph_len).min(straight))
    }

    /// Length of the graph path after unfolding and funnel passes.
    fn straighten(
        &self,
        g: &SteinerGraph,
        sp: &ShortestPaths,
        src: &[(usize, f64, usize, P2)],
        end: &(usize, f64, usize, P2),
    ) -> f64 {
        let (nodes, edges) = sp.path_to(end.0);
        let mut hops = Vec::with_capacity(edges.len() + 2);

        // Virtual first hop from the query point, unless it is a vertex node.
        let first = nodes[0];
        if let Some(s) = src.iter().filter(|s| s.0 == first && s.2 != usize::MAX).min_by(|a, b| a.1.total_cmp(&b.1)) {
            let slots = g.face_slots(self.surface, s.2);
            let slot = slots.iter().position(|&(n, q)| n == first && (dist(s.3, q) - s.1).abs() <= 1e-12 * (1.0 + s.1));
            hops.push(Hop {
                face: s.2,
                from: s.3,
                to: slot.map_or([0.0; 2], |i| slots[i].1),
                from_slot: None,
                to_slot: slot,
                to_node: Some(first),
            });
        }
        for (w, &e) in edges.iter().enumerate() {
            let ge = g.edges[e];
            let face = ge.face as usize;
            let slots = g.face_slots(self.surface, face);
            let (a, b) = (ge.slot_a as usize, ge.slot_b as usize);
            let (sa, sb) = if slots[a].0 == nodes[w] { (a, b) } else { (b, a) };
            hops.push(Hop {
                face,
                from: slots[sa].1,
                to: slots[sb].1,
                from_slot: Some(sa),
                to_slot: Some(sb),
                to_node: Some(nodes[w + 1]),
            });
        }
        if end.2 != usize::MAX {
            let slots = g.face_slots(self.surface, end.2);
            let slot =
                slots.iter().position(|&(n, q)| n == end.0 && (dist(end.3, q) - end.1).abs() <= 1e-12 * (1.0 + end.1));
            hops.push(Hop {
                face: end.2,
                from: slot.map_or([0.0; 2], |i| slots[i].1),
                to: end.3,
                from_slot: slot,
                to_slot: None,
                to_node: None,
            });
        }
        if hops
            .iter()
            .any(|h| (h.from_slot.is_none() && h.to_slot.is_none()) || (h.to_node.is_some() && h.to_slot.is_none()))
        {
            return f64::INFINITY;
        }
        self.taut_length(g, &hops)
    }

    fn taut_length(&self, g: &SteinerGraph, hops: &[Hop]) -> f64 {
        let topo = self.surface.topology();
        let mut total = 0.0;
        let mut run_start = 0;
        let mut crossings: Vec<usize> = Vec::new();
        let mut i = 0;
        while i < hops.len() {
            let fixed_end = i + 1 == hops.len() || {
                let (a, b) = (&hops[i], &hops[i + 1]);
                let node = a.to_node.unwrap();
                let same_face = a.face == b.face && a.to_slot == b.from_slot;
                let crossing = !g.is_vertex_node(node)
                    && !same_face
                    && a.to_slot
                        .and_then(|s| g.steiner_side(s))
                        .zip(b.from_slot.and_then(|s| g.steiner_side(s)))
                        .is_some_and(|(sa, sb)| topo.twin(3 * a.face + sa) == Some(3 * b.face + sb));
                if crossing {
                    crossings.push(3 * a.face + g.steiner_side(a.to_slot.unwrap()).unwrap());
                    false
                } else {
                    !same_face
                }
            };
            if fixed_end {
                total += self.run_length(&hops[run_start], &hops[i], &crossings);
                crossings.clear();
                run_start = i + 1;
            }
            i += 1;
        }
        total
    }

    /// Taut length from the start of `first` to the end of `last` through the
    /// given crossed oriented edges (each taken in the face it leaves).
    fn run_length(&self, first: &Hop, last: &Hop, crossings: &[usize]) -> f64 {
        let topo = self.surface.topology();
        let mut placed = self.surface.face_layout(first.face);
        let start = first.from;
        let mut portals = Vec::with_capacity(crossings.len());
        for &h in crossings {
            let i = h % 3;
            let (origin, target) = (placed[(i + 1) % 3], placed[(i + 2) % 3]);
            portals.push(Portal { left: target, right: origin });
            let tw = topo.twin(h).expect("crossed edges are interior");
            placed = place_across(self.surface.face_layout(tw / 3), tw % 3, target, origin);
        }
        let local = self.surface.face_layout(last.face);
        let end = map_point(&local, &placed, last.to);
        funnel::polyline_length(&funnel::funnel(start, end, &portals))
    }

    /// Distance from every point of a batch to every other, in parallel.
    pub fn pairwise(&self, points: &[SurfacePoint], level: u32) -> Result<Vec<Vec<f64>>, GeodesicError> {
        let n = points.len();
        let rows: Result<Vec<Vec<f64>>, GeodesicError> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n).map(|j| if i == j { Ok(0.0) } else { self.distance(&points[i], &points[j], level) }).collect()
            })
            .collect();
        rows
    }
}

/// Rigid placement of a face's layout with corners `j+1 → q1`, `j+2 → q2`;
/// here `q1` is the origin of the twin edge (target of the crossed edge).
fn place_across(layout: [P2; 3], j: usize, q1: P2, q2: P2) -> [P2; 3] {
    let (a1, a2) = (layout[(j + 1) % 3], layout[(j + 2) % 3]);
    let u = [a2[0] - a1[0], a2[1] - a1[1]];
    let v = [q2[0] - q1[0], q2[1] - q1[1]];
    let nu = u[0] * u[0] + u[1] * u[1];
    let c = (u[0] * v[0] + u[1] * v[1]) / nu;
    let s = (u[0] * v[1] - u[1] * v[0]) / nu;
    let map = |p: P2| {
        let d = [p[0] - a1[0], p[1] - a1[1]];
        [q1[0] + c * d[0] - s * d[1], q1[1] + s * d[0] + c * d[1]]
    };
    [map(layout[0]), map(layout[1]), map(layout[2])]
}

/// Affine map taking triangle `from` to triangle `to`, applied to `p`.
fn map_point(from: &[P2; 3], to: &[P2; 3], p: P2) -> P2 {
    let [a, b, c] = *from;
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    let l1 = ((p[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (p[1] - a[1])) / det;
    let l2 = ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])) / det;
    let l0 = 1.0 - l1 - l2;
    [l0 * to[0][0] + l1 * to[1][0] + l2 * to[2][0], l0 * to[0][1] + l1 * to[1][1] + l2 * to[2][1]]
}

/// `d(x, y)` bound at a refinement level.
pub fn intrinsic_distance(
    surface: &ConeSurface,
    x: &SurfacePoint,
    y: &SurfacePoint,
    level: u32,
) -> Result<f64, GeodesicError> {
    GeodesicSolver::new(surface).distance(x, y, level)
}

/// `max |d1 − d2|` over the sample: a lower bound for the uniform distance
/// between the two metrics, nondecreasing as the sample grows.
pub fn uniform_distance<P: Sync>(
    d1: impl Fn(&P, &P) -> f64 + Sync,
    d2: impl Fn(&P, &P) -> f64 + Sync,
    pairs: &[(P, P)],
) -> Result<f64, GeodesicError> {
    if pairs.is_empty() {
        return Err(GeodesicError::EmptySample);
    }
    Ok(pairs.par_iter().map(|(x, y)| (d1(x, y) - d2(x, y)).abs()).reduce(|| 0.0, f64::max))
}

/// Geometry needed to measure a small metric circle around a center: rays
/// leaving the center and distances along them.
pub trait CircleProbe: Sync {
    type Point: Send + Sync;

    /// Point at parameter `s` along ray `k` of `n`; `s = 0` is the center.
    fn ray_point(&self, k: usize, n: usize, s: f64) -> Self::Point;

    /// Largest admissible ray parameter.
    fn max_parameter(&self) -> f64;

    fn distance_from_center(&self, p: &Self::Point) -> f64;

    fn chord(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// Largest radius the probe accepts.
    fn radius_limit(&self) -> f64 {
        f64::INFINITY
    }
}

/// Length of the polygon through the points at distance `radius` on
/// `n_rays` rays, with sides measured in the metric itself.
pub fn geodesic_circle_length<C: CircleProbe>(probe: &C, radius: f64, n_rays: usize) -> Result<f64, GeodesicError> {
    let limit = probe.radius_limit();
    if !(radius > 0.0) || radius > limit {
        return Err(GeodesicError::RadiusTooLarge { radius, limit });
    }
    let points: Vec<C::Point> = (0..n_rays)
        .into_par_iter()
        .map(|k| {
            let (mut lo, mut hi) = (0.0, probe.max_parameter());
            if probe.distance_from_center(&probe.ray_point(k, n_rays, hi)) < radius {
                return Err(GeodesicError::RadiusTooLarge { radius, limit });
            }
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if probe.distance_from_center(&probe.ray_point(k, n_rays, mid)) < radius {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(probe.ray_point(k, n_rays, 0.5 * (lo + hi)))
        })
        .collect::<Result<_, _>>()?;
    Ok((0..n_rays).into_par_iter().map(|k| probe.chord(&points[k], &points[(k + 1) % n_rays])).sum())
}

/// Circle probe around a point of a cone surface. Rays leave the point in
/// straight lines inside its incident faces, evenly spread over its total
/// angle.
pub struct SurfaceCircle<'a> {
    solver: GeodesicSolver<'a>,
    center: SurfacePoint,
    level: u32,
    fans: Vec<(usize, P2, P2, P2, f64)>,
    total_angle: f64,
    max_parameter: f64,
    limit: f64,
}

impl<'a> SurfaceCircle<'a> {
    /// Probe centred at vertex `v`.
    pub fn at_vertex(surface: &'a ConeSurface, v: usize, level: u32) -> Result<Self, GeodesicError> {
        let topo = surface.topology();
        let mut fans = Vec::new();
        let mut total = 0.0;
        let mut max_parameter = f64::INFINITY;
        for &c in topo.corners_of_vertex(v) {
            let l = surface.face_layout(c.face);
            let p = l[c.local];
            let a = l[(c.local + 1) % 3];
            let b = l[(c.local + 2) % 3];
            let angle = surface.vertex_angle(c);
            fans.push((c.face, p, a, b, angle));
            total += angle;
            // Stay inside the face: below the height from the corner.
            let opposite = surface.length(3 * c.face + c.local);
            max_parameter = max_parameter.min(2.0 * surface.face_area(c.face) / opposite);
        }
        let solver = GeodesicSolver::new(surface);
        let center = SurfacePoint::at_vertex(surface, v);
        // A quarter of the distance to the nearest other cone point.
        let mut nearest = f64::INFINITY;
        for w in 0..topo.vertex_count() {
            if w != v && (2.0 * std::f64::consts::PI - surface.angle_sum(w)).abs() > crate::curvature::ATOM_THRESHOLD {
                nearest = nearest.min(solver.distance(&center, &SurfacePoint::at_vertex(surface, w), level)?);
            }
        }
        Ok(SurfaceCircle {
            solver,
            center,
            level,
            fans,
            total_angle: total,
            max_parameter: 0.999 * max_parameter,
            limit: 0.25 * nearest,
        })
    }

    pub fn total_angle(&self) -> f64 {
        self.total_angle
    }
}

impl CircleProbe for SurfaceCircle<'_> {
    type Point = SurfacePoint;

    fn ray_point(&self, k: usize, n: usize, s: f64) -> SurfacePoint {
        let mut alpha = self.total_angle * (k as f64 + 0.5) / n as f64;
        for &(face, p, a, b, angle) in &self.fans {
            if alpha <= angle {
                // Sweep from the `b` side toward `a`, which the next face shares.
                let u = [b[0] - p[0], b[1] - p[1]];
                let w = [a[0] - p[0], a[1] - p[1]];
                let base = u[1].atan2(u[0]);
                let turn = if u[0] * w[1] - u[1] * w[0] >= 0.0 { 1.0 } else { -1.0 };
                let dir = base + turn * alpha;
                let q = [p[0] + s * dir.cos(), p[1] + s * dir.sin()];
                return SurfacePoint::from_layout(self.solver.surface, face, q).unwrap_or(self.center);
            }
            alpha -= angle;
        }
        self.center
    }

    fn max_parameter(&self) -> f64 {
        self.max_parameter
    }

    fn distance_from_center(&self, p: &SurfacePoint) -> f64 {
        self.solver.distance(&self.center, p, self.level).unwrap_or(f64::INFINITY)
    }

    fn chord(&self, a: &SurfacePoint, b: &SurfacePoint) -> f64 {
        self.solver.distance(a, b, self.level).unwrap_or(f64::INFINITY)
    }

    fn radius_limit(&self) -> f64 {
        self.limit
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::presets;
    use std::f64::consts::PI;

    #[test]
    fn torus_corner_to_center() {
        let t = presets::square_torus(1.0).unwrap();
        let x = SurfacePoint::at_vertex(&t, 0);
        let y = SurfacePoint::new(&t, 0, [0.5, 0.0, 0.5]).unwrap();
        let d = intrinsic_distance(&t, &x, &y, DEFAULT_LEVEL).unwrap();
        assert!((d - 0.5f64.sqrt()).abs() < 1e-12, "{d}");
        assert_eq!(intrinsic_distance(&t, &x, &x, 2).unwrap(), 0.0);
    }

    #[test]
    fn torus_interior_points_use_wraparound() {
        let t = presets::square_torus(1.0).unwrap();
        // (0.9, 0.1) and (0.1, 0.1) are 0.2 apart across the seam.
        let a = SurfacePoint::from_layout(&t, 0, [0.9, 0.1]).unwrap();
        let b = SurfacePoint::from_layout(&t, 0, [0.15, 0.1]).unwrap();
        let d = intrinsic_distance(&t, &a, &b, 3).unwrap();
        assert!((d - 0.25).abs() < 1e-12, "{d}");
    }

    #[test]
    fn cube_opposite_corners() {
        let cube = presets::unit_cube();
        let x = SurfacePoint::at_vertex(&cube, 0);
        let y = SurfacePoint::at_vertex(&cube, 7);
        let d = intrinsic_distance(&cube, &x, &y, 3).unwrap();
        assert!((d - 5f64.sqrt()).abs() < 1e-9, "{d}");
    }

    #[test]
    fn edge_points_compare_equal_across_faces() {
        let t = presets::square_torus(1.0).unwrap();
        // Midpoint of the diagonal seen from both faces.
        let a = SurfacePoint::new(&t, 0, [0.5, 0.0, 0.5]).unwrap();
        let b = SurfacePoint::new(&t, 1, [0.5, 0.5, 0.0]).unwrap();
        assert!(a.same_point(&b, &t));
    }

    #[test]
    fn cube_vertex_circle() {
        let cube = presets::unit_cube();
        let probe = SurfaceCircle::at_vertex(&cube, 0, 3).unwrap();
        let r = 0.2;
        let len = geodesic_circle_length(&probe, r, 64).unwrap();
        assert!((len / r - 1.5 * PI).abs() < 0.02 * 1.5 * PI, "{}", len / r);
        assert!(matches!(geodesic_circle_length(&probe, 0.3, 8), Err(GeodesicError::RadiusTooLarge { .. })));
    }

    #[test]
    fn uniform_distance_basics() {
        let pairs = vec![(0.0, 1.0), (0.0, 3.0)];
        let d = |a: &f64, b: &f64| (a - b).abs();
        assert_eq!(uniform_distance(d, d, &pairs).unwrap(), 0.0);
        assert_eq!(uniform_distance(d, |a: &f64, b: &f64| 2.0 * (a - b).abs(), &pairs).unwrap(), 3.0);
        assert_eq!(uniform_distance(d, d, &[] as &[(f64, f64)]), Err(GeodesicError::EmptySample));
    }
}
