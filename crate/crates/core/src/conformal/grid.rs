//! Grid graphs for chart metrics.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{Chart, ChartMetric, ChartPoint, ConformalError, GridSpec, Singularity};
use crate::geodesics::CircleProbe;
use crate::graph::Csr;
use crate::quadrature::{integrate_with_breaks, Break};

/// Neighbours within this many grid steps (in the max norm) are joined.
pub const STENCIL_RADIUS: i64 = 3;

const NO_NODE: u32 = u32::MAX;
const SEGMENT_TOL: f64 = 1e-10;

/// Primitive stencil directions, one per opposite pair.
pub(crate) fn stencil(radius: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for dx in 0..=radius {
        for dy in -radius..=radius {
            if (dx == 0 && dy <= 0) || gcd(dx, dy.abs()) != 1 {
                continue;
            }
            out.push((dx, dy));
        }
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `∫ √ρ |dz|` along the chart segment from `a` to `b`.
pub fn segment_weight(metric: &ChartMetric, chart: Chart, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return 0.0;
    }
    let mut breaks = Vec::new();
    for s in metric.singularities_of(chart) {
        match *s {
            Singularity::Seam { center, radius } => {
                // |a + t d − c|² = R²
                let f = a - center;
                let qa = d.norm_sqr();
                let qb = 2.0 * (f.re * d.re + f.im * d.im);
                let qc = f.norm_sqr() - radius * radius;
                let disc = qb * qb - 4.0 * qa * qc;
                if disc >= 0.0 {
                    let sq = disc.sqrt();
                    for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
                        if t > 0.0 && t < 1.0 {
                            breaks.push(Break::Kink { t });
                        }
                    }
                }
            }
            _ => {
                let (at, exponent) = match *s {
                    Singularity::Cone { at, beta } => (at, Some(beta)),
                    Singularity::Cusp { at } | Singularity::InfiniteEnd { at } => (at, None),
                    Singularity::Seam { .. } => unreachable!(),
                };
                let t = (((at - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
                let gap = (a + d * t - at).norm();
                if gap <= 1e-12 * len {
                    match exponent {
                        Some(beta) => breaks.push(Break::Singular { t, exponent: beta }),
                        None => return f64::INFINITY,
                    }
                } else if t > 0.0 && t < 1.0 && gap < len {
                    breaks.push(Break::Peak { t });
                }
            }
        }
    }
    let f = |t: f64| metric.density(chart, a + d * t).sqrt();
    len * integrate_with_breaks(f, &breaks, SEGMENT_TOL)
}

/// Grid graph over one chart, or two stitched charts for the extended plane.
pub struct ConformalGraph<'m> {
    metric: &'m ChartMetric,
    spec: GridSpec,
    charts: Vec<Chart>,
    node_of: Vec<Vec<u32>>,
    nodes: Vec<(Chart, Complex64)>,
    csr: Csr,
}

impl<'m> ConformalGraph<'m> {
    pub fn build(metric: &'m ChartMetric, spec: GridSpec) -> Self {
        let charts = if metric.has_far_chart() { vec![Chart::Near, Chart::Far] } else { vec![Chart::Near] };
        let band = 1.0 + STENCIL_RADIUS as f64 * spec.h;
        let mut node_of = Vec::new();
        let mut nodes = Vec::new();
        for &chart in &charts {
            let mut map = vec![NO_NODE; spec.len()];
            for j in 0..spec.ny {
                for i in 0..spec.nx {
                    let z = spec.node(i, j);
                    let in_band = !metric.has_far_chart() || z.norm() <= band;
                    if in_band && admissible_node(metric, chart, z) {
                        map[spec.index(i, j)] = nodes.len() as u32;
                        nodes.push((chart, z));
                    }
                }
            }
            node_of.push(map);
        }

        let dirs = stencil(STENCIL_RADIUS);
        let mut edges: Vec<(u32, u32, f64)> = (0..nodes.len())
            .into_par_iter()
            .flat_map_iter(|n| {
                let (chart, z) = nodes[n];
                let c = charts.iter().position(|&x| x == chart).unwrap();
                let (fi, fj) = spec.locate(z);
                let (i, j) = (fi.round() as i64, fj.round() as i64);
                let mut out = Vec::new();
                for &(dx, dy) in &dirs {
                    let (ni, nj) = (i + dx, j + dy);
                    if ni < 0 || nj < 0 || ni >= spec.nx as i64 || nj >= spec.ny as i64 {
                        continue;
                    }
                    let m = node_of[c][spec.index(ni as usize, nj as usize)];
                    if m == NO_NODE {
                        continue;
                    }
                    let w = segment_weight(metric, chart, z, nodes[m as usize].1);
                    if w.is_finite() {
                        out.push((n as u32, m, w));
                    }
                }
                out
            })
            .collect();

        if metric.has_far_chart() {
            let far_nodes: Vec<usize> = (0..nodes.len()).filter(|&n| nodes[n].0 == Chart::Far).collect();
            let stitched: Vec<(u32, u32, f64)> = far_nodes
                .par_iter()
                .flat_map_iter(|&q| {
                    let w = nodes[q].1;
                    let mut out = Vec::new();
                    if w.norm() < 1.0 - STENCIL_RADIUS as f64 * spec.h || w.norm() == 0.0 {
                        return out;
                    }
                    let image = w.inv();
                    for p in nodes_near(&spec, &node_of[0], image, STENCIL_RADIUS) {
                        let weight = segment_weight(metric, Chart::Near, nodes[p as usize].1, image);
                        if weight.is_finite() {
                            out.push((p, q as u32, weight));
                        }
                    }
                    out
                })
                .collect();
            edges.extend(stitched);
        }

        let csr = Csr::from_edges(nodes.len(), &edges);
        ConformalGraph { metric, spec, charts, node_of, nodes, csr }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn chart_index(&self, chart: Chart) -> Option<usize> {
        self.charts.iter().position(|&c| c == chart)
    }

    /// Graph nodes joined to an arbitrary point, with segment weights.
    fn connections(&self, p: &ChartPoint, radius: i64) -> Vec<(usize, f64)> {
        let Some(c) = self.chart_index(p.chart) else {
            return Vec::new();
        };
        let (fi, fj) = self.spec.locate(p.z);
        let (ri, rj) = (fi.round(), fj.round());
        if (fi - ri).abs() < 1e-9 && (fj - rj).abs() < 1e-9 && ri >= 0.0 && rj >= 0.0 {
            let (i, j) = (ri as usize, rj as usize);
            if i < self.spec.nx && j < self.spec.ny {
                let n = self.node_of[c][self.spec.index(i, j)];
                if n != NO_NODE {
                    return vec![(n as usize, 0.0)];
                }
            }
        }
        nodes_near(&self.spec, &self.node_of[c], p.z, radius)
            .into_iter()
            .map(|n| (n as usize, segment_weight(self.metric, p.chart, p.z, self.nodes[n as usize].1)))
            .filter(|(_, w)| w.is_finite())
            .collect()
    }

    /// Direct chart segment between two points, converting charts if needed.
    fn direct(&self, x: &ChartPoint, y: &ChartPoint) -> f64 {
        if x.chart == y.chart {
            return segment_weight(self.metric, x.chart, x.z, y.z);
        }
        if y.z.norm() > 0.0 && self.metric.has_far_chart() {
            return segment_weight(self.metric, x.chart, x.z, y.z.inv());
        }
        f64::INFINITY
    }

    /// Distances from `x` to every node.
    pub fn field(&self, x: &ChartPoint) -> Vec<f64> {
        let seeds = self.connections(x, STENCIL_RADIUS);
        self.csr.dijkstra(&seeds).dist
    }

    /// Shortest grid path (or direct segment) between two chart points.
    pub fn distance(&self, x: &ChartPoint, y: &ChartPoint) -> Result<f64, ConformalError> {
        self.metric.check_endpoint(x)?;
        self.metric.check_endpoint(y)?;
        let field = self.field(x);
        let via_graph =
            self.connections(y, STENCIL_RADIUS).into_iter().map(|(n, w)| field[n] + w).fold(f64::INFINITY, f64::min);
        let best = via_graph.min(self.direct(x, y));
        if best.is_finite() {
            Ok(best)
        } else {
            Err(ConformalError::Unreachable)
        }
    }
}

fn admissible_node(metric: &ChartMetric, chart: Chart, z: Complex64) -> bool {
    if !metric.contains(chart, z) {
        return false;
    }
    for s in metric.singularities_of(chart) {
        match *s {
            Singularity::Cone { at, beta } if (z - at).norm() < 1e-12 => return beta > -1.0,
            Singularity::Cusp { at } | Singularity::InfiniteEnd { at } if (z - at).norm() < 1e-12 => return false,
            _ => {}
        }
    }
    let rho = metric.density(chart, z);
    rho.is_finite() && rho >= 0.0
}

fn nodes_near(spec: &GridSpec, map: &[u32], z: Complex64, radius: i64) -> Vec<u32> {
    let (fi, fj) = spec.locate(z);
    let (ci, cj) = (fi.floor() as i64, fj.floor() as i64);
    let mut out = Vec::new();
    for j in cj - radius + 1..=cj + radius {
        for i in ci - radius + 1..=ci + radius {
            if i < 0 || j < 0 || i >= spec.nx as i64 || j >= spec.ny as i64 {
                continue;
            }
            let n = map[spec.index(i as usize, j as usize)];
            if n != NO_NODE {
                out.push(n);
            }
        }
    }
    out
}

/// Upper bound on the metric distance between two chart points.
pub fn conformal_distance(
    metric: &ChartMetric,
    z1: &ChartPoint,
    z2: &ChartPoint,
    grid: GridSpec,
) -> Result<f64, ConformalError> {
    metric.check_endpoint(z1)?;
    metric.check_endpoint(z2)?;
    ConformalGraph::build(metric, grid).distance(z1, z2)
}

/// Circle probe around a chart point: rays are straight chart rays.
pub struct ConformalCircle<'g, 'm> {
    graph: &'g ConformalGraph<'m>,
    center: ChartPoint,
    field: Vec<f64>,
    max_parameter: f64,
    limit: f64,
}

impl<'g, 'm> ConformalCircle<'g, 'm> {
    pub fn new(graph: &'g ConformalGraph<'m>, center: ChartPoint) -> Result<Self, ConformalError> {
        graph.metric.check_endpoint(&center)?;
        let spec = graph.spec;
        let z = center.z;
        let to_edge = [
            z.re - spec.origin[0],
            spec.origin[0] + (spec.nx - 1) as f64 * spec.h - z.re,
            z.im - spec.origin[1],
            spec.origin[1] + (spec.ny - 1) as f64 * spec.h - z.im,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        let mut limit = f64::INFINITY;
        let mut max_parameter = 0.9 * to_edge;
        for s in graph.metric.singularities_of(center.chart) {
            let gap = s.chart_distance(z);
            if gap > 1e-12 {
                max_parameter = max_parameter.min(0.5 * gap);
                if let Some(p) = match *s {
                    Singularity::Cone { at, .. } | Singularity::Cusp { at } | Singularity::InfiniteEnd { at } => {
                        Some(at)
                    }
                    Singularity::Seam { .. } => None,
                } {
                    limit = limit.min(0.25 * segment_weight(graph.metric, center.chart, z, p));
                }
            }
        }
        let mut probe = ConformalCircle { graph, center, field: graph.field(&center), max_parameter, limit };
        let reach = (0..8)
            .map(|k| probe.distance_from_center(&probe.ray_point(k, 8, max_parameter)))
            .fold(f64::INFINITY, f64::min);
        probe.limit = probe.limit.min(reach);
        Ok(probe)
    }
}

impl CircleProbe for ConformalCircle<'_, '_> {
    type Point = ChartPoint;

    fn ray_point(&self, k: usize, n: usize, s: f64) -> ChartPoint {
        let phi = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
        ChartPoint { chart: self.center.chart, z: self.center.z + Complex64::from_polar(s, phi) }
    }

    fn max_parameter(&self) -> f64 {
        self.max_parameter
    }

    fn distance_from_center(&self, p: &ChartPoint) -> f64 {
        let via_graph =
            self.graph.connections(p, 1).into_iter().map(|(n, w)| self.field[n] + w).fold(f64::INFINITY, f64::min);
        via_graph.min(self.graph.direct(&self.center, p))
    }

    fn chord(&self, a: &ChartPoint, b: &ChartPoint) -> f64 {
        self.graph.direct(a, b)
    }

    fn radius_limit(&self) -> f64 {
        self.limit
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::{make_example_metric, ExampleKind};
    use std::f64::consts::PI;

    #[test]
    fn stencil_has_sixteen_directions() {
        assert_eq!(stencil(3).len(), 16);
        assert_eq!(stencil(1).len(), 4);
    }

    #[test]
    fn flat_metric_is_euclidean() {
        let m = make_example_metric(ExampleKind::Cone { theta: 2.0 * PI }).unwrap();
        let d = conformal_distance(
            &m,
            &ChartPoint::near(-0.3, 0.1),
            &ChartPoint::near(0.45, -0.2),
            GridSpec::centered(1.0, 8),
        )
        .unwrap();
        assert!((d - (0.75f64.powi(2) + 0.09).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn apex_segment_uses_power_law() {
        let m = make_example_metric(ExampleKind::Cone { theta: PI }).unwrap();
        let w = segment_weight(&m, Chart::Near, Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0));
        // ∫₀^½ s^{-1/2} ds
        assert!((w - 2.0 * 0.5f64.sqrt()).abs() < 1e-12, "{w}");
    }

    #[test]
    fn cusp_endpoints_are_rejected() {
        let m = make_example_metric(ExampleKind::Pseudosphere).unwrap();
        let r = conformal_distance(
            &m,
            &ChartPoint::near(0.0, 0.0),
            &ChartPoint::near(0.5, 0.0),
            GridSpec::centered(1.0, 8),
        );
        assert!(matches!(r, Err(ConformalError::SingularEndpoint(_))));
    }
}
