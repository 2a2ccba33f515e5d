//! Singular conformal metrics `ρ(z)|dz|²` on planar charts.
//!
//! A metric lives on a chart `z`; metrics on the extended plane also carry
//! the far chart `w = 1/z` with `ρ_w(w) = ρ_z(1/w) / |w|⁴`. Distances come
//! from grid graphs whose edge weights integrate `√ρ` along chart segments.

pub mod gallery;
mod grid;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::curvature::CurvatureMeasure;

pub use gallery::{make_example_metric, ExampleKind};
pub(crate) use grid::stencil as grid_stencil;
pub use grid::{conformal_distance, ConformalCircle, ConformalGraph, STENCIL_RADIUS};

/// Share of masked nodes above which curvature recovery gives up.
pub const MAX_MASKED_FRACTION: f64 = 0.2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConformalError {
    #[error("BadParameter: {0}")]
    BadParameter(String),
    #[error("PointOutsideDomain: {0}")]
    PointOutsideDomain(String),
    #[error("SingularEndpoint: {0} is a cusp or lies at infinite distance")]
    SingularEndpoint(String),
    #[error("MaskTooLarge: {masked} of {total} nodes masked")]
    MaskTooLarge { masked: usize, total: usize },
    #[error("Unreachable: no grid path between the points")]
    Unreachable,
}

pub type Density = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Plane,
    Disk {
        radius: f64,
    },
    /// Disk minus its center.
    PuncturedDisk {
        radius: f64,
    },
    /// Near chart `|z| ≤ 1` glued to far chart `|w| ≤ 1`.
    ExtendedPlane,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Singularity {
    /// `ρ ~ |z − at|^{2β}` with `β > −1`.
    Cone { at: Complex64, beta: f64 },
    /// Point at infinite distance with a `2π` atom.
    Cusp { at: Complex64 },
    /// Circle where `ρ` jumps or kinks.
    Seam { center: Complex64, radius: f64 },
    /// Non-integrable end, infinitely far away.
    InfiniteEnd { at: Complex64 },
}

impl Singularity {
    fn point(&self) -> Option<Complex64> {
        match *self {
            Singularity::Cone { at, .. } | Singularity::Cusp { at } | Singularity::InfiniteEnd { at } => Some(at),
            Singularity::Seam { .. } => None,
        }
    }

    /// Euclidean distance from `z` to the singular set.
    pub fn chart_distance(&self, z: Complex64) -> f64 {
        match *self {
            Singularity::Seam { center, radius } => ((z - center).norm() - radius).abs(),
            _ => (z - self.point().unwrap()).norm(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    Near,
    Far,
}

/// A point of a metric's chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub chart: Chart,
    pub z: Complex64,
}

impl ChartPoint {
    pub fn near(x: f64, y: f64) -> Self {
        ChartPoint { chart: Chart::Near, z: Complex64::new(x, y) }
    }

    pub fn far(x: f64, y: f64) -> Self {
        ChartPoint { chart: Chart::Far, z: Complex64::new(x, y) }
    }
}

/// Curvature measure a gallery entry declares, with its documented total.
#[derive(Debug, Clone, PartialEq)]
pub struct DeclaredMeasure {
    pub measure: CurvatureMeasure,
    pub total: f64,
    pub note: String,
}

#[derive(Clone)]
pub struct ChartMetric {
    pub name: String,
    pub domain: Domain,
    density: Density,
    far_density: Option<Density>,
    pub singularities: Vec<Singularity>,
    pub far_singularities: Vec<Singularity>,
    pub declared: Option<DeclaredMeasure>,
}

impl fmt::Debug for ChartMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartMetric")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("singularities", &self.singularities)
            .field("far_singularities", &self.far_singularities)
            .finish_non_exhaustive()
    }
}

impl ChartMetric {
    /// Metric on a single chart.
    pub fn new(name: impl Into<String>, domain: Domain, density: Density, singularities: Vec<Singularity>) -> Self {
        ChartMetric {
            name: name.into(),
            domain,
            density,
            far_density: None,
            singularities,
            far_singularities: Vec::new(),
            declared: None,
        }
    }

    /// Adds the far chart `w = 1/z`; its density is derived from the near one.
    pub fn with_far_chart(mut self, far_singularities: Vec<Singularity>) -> Self {
        let near = self.density.clone();
        self.far_density = Some(Arc::new(move |w: Complex64| near(w.inv()) / w.norm_sqr().powi(2)));
        self.far_singularities = far_singularities;
        self.domain = Domain::ExtendedPlane;
        self
    }

    pub fn with_declared(mut self, declared: DeclaredMeasure) -> Self {
        self.declared = Some(declared);
        self
    }

    pub fn has_far_chart(&self) -> bool {
        self.far_density.is_some()
    }

    /// `ρ` in the given chart.
    pub fn density(&self, chart: Chart, z: Complex64) -> f64 {
        match chart {
            Chart::Near => (self.density)(z),
            Chart::Far => self.far_density.as_ref().map_or(f64::NAN, |d| d(z)),
        }
    }

    pub fn singularities_of(&self, chart: Chart) -> &[Singularity] {
        match chart {
            Chart::Near => &self.singularities,
            Chart::Far => &self.far_singularities,
        }
    }

    /// Whether `z` belongs to the chart's part of the domain.
    pub fn contains(&self, chart: Chart, z: Complex64) -> bool {
        match (self.domain, chart) {
            (Domain::Plane, Chart::Near) => true,
            (Domain::Disk { radius }, Chart::Near) => z.norm() <= radius,
            (Domain::PuncturedDisk { radius }, Chart::Near) => z.norm() < radius && z.norm() > 0.0,
            (Domain::ExtendedPlane, _) => true,
            _ => false,
        }
    }

    /// Point the query is not allowed to start or end at.
    pub fn check_endpoint(&self, p: &ChartPoint) -> Result<(), ConformalError> {
        for s in self.singularities_of(p.chart) {
            if let Singularity::Cusp { at } | Singularity::InfiniteEnd { at } = *s {
                if (p.z - at).norm() < 1e-12 {
                    return Err(ConformalError::SingularEndpoint(format!("{:?} {}", p.chart, p.z)));
                }
            }
        }
        if !self.contains(p.chart, p.z) || (p.chart == Chart::Far && !self.has_far_chart()) {
            return Err(ConformalError::PointOutsideDomain(format!("{:?} {}", p.chart, p.z)));
        }
        Ok(())
    }
}

/// Rectangular node grid: node `(i, j)` sits at `origin + (i h, j h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub origin: [f64; 2],
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// Grid on `[−half_width, half_width]²` with `per_side` cells from the
    /// center to each side, so the origin is a node.
    pub fn centered(half_width: f64, per_side: usize) -> Self {
        GridSpec {
            origin: [-half_width, -half_width],
            h: half_width / per_side as f64,
            nx: 2 * per_side + 1,
            ny: 2 * per_side + 1,
        }
    }

    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.origin[0] + i as f64 * self.h, self.origin[1] + j as f64 * self.h)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Fractional grid coordinates of `z`.
    pub fn locate(&self, z: Complex64) -> (f64, f64) {
        ((z.re - self.origin[0]) / self.h, (z.im - self.origin[1]) / self.h)
    }
}

/// Values on the nodes of a grid; `NaN` marks masked nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn from_fn(spec: GridSpec, f: impl Fn(Complex64) -> f64) -> Self {
        let mut values = Vec::with_capacity(spec.len());
        for j in 0..spec.ny {
            for i in 0..spec.nx {
                values.push(f(spec.node(i, j)));
            }
        }
        GridFunction { spec, values }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.spec.index(i, j)]
    }

    pub fn masked_count(&self) -> usize {
        self.values.iter().filter(|v| !v.is_finite()).count()
    }

    /// `x,y,value` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,value\n");
        for j in 0..self.spec.ny {
            for i in 0..self.spec.nx {
                let z = self.spec.node(i, j);
                let f = crate::convergence::format_significant;
                out.push_str(&format!("{},{},{}\n", f(z.re), f(z.im), f(self.at(i, j))));
            }
        }
        out
    }
}

/// Background curvature on the chart.
#[derive(Debug, Clone, PartialEq)]
pub enum BackgroundCurvature {
    Constant(f64),
    Grid(GridFunction),
}

/// `K̃ = e^{−2u} (K₀ + Δu)` with the positive Laplacian `Δ = −(∂²ₓ + ∂²ᵧ)`
/// by the 5-point stencil. Nodes whose stencil touches a non-finite value or
/// lies within `mask_radius` of a singular set are masked.
pub fn smooth_curvature_from_factor(
    u: &GridFunction,
    k0: &BackgroundCurvature,
    singular: &[Singularity],
    mask_radius: f64,
) -> Result<GridFunction, ConformalError> {
    let spec = u.spec;
    let h2 = spec.h * spec.h;
    let mut out = vec![f64::NAN; spec.len()];
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            if i == 0 || j == 0 || i + 1 == spec.nx || j + 1 == spec.ny {
                continue;
            }
            let z = spec.node(i, j);
            if singular.iter().any(|s| s.chart_distance(z) <= mask_radius) {
                continue;
            }
            let c = u.at(i, j);
            let lap = (u.at(i + 1, j) + u.at(i - 1, j) + u.at(i, j + 1) + u.at(i, j - 1) - 4.0 * c) / h2;
            let k = match k0 {
                BackgroundCurvature::Constant(k) => *k,
                BackgroundCurvature::Grid(g) => g.at(i, j),
            };
            let v = (-2.0 * c).exp() * (k - lap);
            if v.is_finite() {
                out[spec.index(i, j)] = v;
            }
        }
    }
    let result = GridFunction { spec, values: out };
    // The outer ring has no stencil and is not counted.
    let interior = spec.nx.saturating_sub(2) * spec.ny.saturating_sub(2);
    let masked = result.masked_count() - (spec.len() - interior);
    if masked as f64 > MAX_MASKED_FRACTION * interior as f64 {
        return Err(ConformalError::MaskTooLarge { masked, total: interior });
    }
    Ok(result)
}

/// `u = ½ log ρ` on the near chart.
pub fn log_factor(metric: &ChartMetric, spec: GridSpec) -> GridFunction {
    GridFunction::from_fn(spec, |z| {
        if metric.contains(Chart::Near, z) {
            0.5 * metric.density(Chart::Near, z).ln()
        } else {
            f64::NAN
        }
    })
}
