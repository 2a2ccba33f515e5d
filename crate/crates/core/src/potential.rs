//! Metrics with prescribed curvature on the round sphere and the flat square
//! torus.
//!
//! A signed measure `μ` of total mass zero determines the potential
//! `u(x) = ∫ G(x, y) dμ(y)`; the metric `e^{2u} h` then has curvature measure
//! `K_h dA_h + μ`. Atoms of mass `m < 2π` become cone points of angle `2π − m`.

mod bump;
mod centered;
mod distance;
mod green;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

pub use bump::{sphere_bump_potential, torus_bump_potential, MAX_SPHERE_BUMP_RADIUS, MAX_TORUS_BUMP_RADIUS};
pub use centered::centered_integral;
pub use distance::{metric_distance, GraphResolution, MetricCircle, MetricGraph, MIN_SPHERE_LEVEL, MIN_TORUS_GRID};
pub use green::{
    expint_e1, green_sphere, green_sphere_chord, green_torus, green_torus_ewald, green_torus_offset, torus_offset,
    torus_regular_part,
};

use crate::curvature::{gauss_bonnet_residual, normalize, Atom, Cell, CurvatureMeasure, FacePart, Point};

/// Absolute tolerance on the total mass of a potential-defining measure.
pub const MASS_TOLERANCE: f64 = 1e-10;
/// Tolerance on the Gauss–Bonnet balance of a target curvature measure.
pub const GAUSS_BONNET_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("CoincidentPoints: the Green function is singular on the diagonal")]
    CoincidentPoints,
    #[error("TruncationNotConverged: the lattice series did not reach its tolerance")]
    TruncationNotConverged,
    #[error("NonZeroTotalMass: total mass {total:e} exceeds the tolerance {tolerance:e}")]
    NonZeroTotalMass { total: f64, tolerance: f64 },
    #[error("CuspAtom: atom of mass {mass} at {point:?} is at least 2π")]
    CuspAtom { mass: f64, point: Point },
    #[error("GaussBonnetViolation: total curvature {total} differs from 2πχ = {expected}")]
    GaussBonnetViolation { total: f64, expected: f64 },
    #[error("ResolutionTooLow: resolution {resolution} is below the minimum {minimum}")]
    ResolutionTooLow { resolution: usize, minimum: usize },
    #[error("PointOffBackground: {0:?} is not a point of the background")]
    PointOffBackground(Point),
    #[error("BadInput: {0}")]
    BadInput(String),
}

/// Smooth constant-curvature backgrounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Background {
    /// Unit round sphere, points are unit vectors.
    Sphere,
    /// Unit-area square torus `R²/Z²`, points `[x, y, 0]`.
    Torus,
}

impl Background {
    pub fn area(self) -> f64 {
        match self {
            Background::Sphere => 4.0 * PI,
            Background::Torus => 1.0,
        }
    }

    pub fn gaussian_curvature(self) -> f64 {
        match self {
            Background::Sphere => 1.0,
            Background::Torus => 0.0,
        }
    }

    pub fn euler_characteristic(self) -> i64 {
        match self {
            Background::Sphere => 2,
            Background::Torus => 0,
        }
    }

    pub fn green(self, x: Point, y: Point) -> Result<f64, PotentialError> {
        match self {
            Background::Sphere => green_sphere(x, y),
            Background::Torus => green_torus(x, y),
        }
    }

    /// Canonical representative of a point, or an error when it is too far
    /// from the background to be a typo-level rounding of one.
    pub fn point(self, p: Point) -> Result<Point, PotentialError> {
        if !p.iter().all(|c| c.is_finite()) {
            return Err(PotentialError::PointOffBackground(p));
        }
        match self {
            Background::Sphere => {
                let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                if (n - 1.0).abs() > 1e-6 {
                    return Err(PotentialError::PointOffBackground(p));
                }
                Ok(normalize(p))
            }
            Background::Torus => {
                if p[2] != 0.0 {
                    return Err(PotentialError::PointOffBackground(p));
                }
                let wrap = |t: f64| {
                    let r = t.rem_euclid(1.0);
                    if r >= 1.0 {
                        0.0
                    } else {
                        r
                    }
                };
                Ok([wrap(p[0]), wrap(p[1]), 0.0])
            }
        }
    }

    /// Background geodesic distance.
    pub fn distance(self, x: Point, y: Point) -> f64 {
        match self {
            Background::Sphere => {
                let c = green::chord(x, y).min(2.0);
                2.0 * (0.5 * c).asin()
            }
            Background::Torus => {
                let r = torus_offset(x, y);
                r[0].hypot(r[1])
            }
        }
    }

    /// Point at fraction `t` of the shortest background geodesic from `x` to
    /// `y` (the great circle through them, or the nearest torus image).
    pub fn interpolate(self, x: Point, y: Point, t: f64) -> Point {
        match self {
            Background::Sphere => {
                let theta = self.distance(x, y);
                if theta < 1e-300 {
                    return x;
                }
                let s = theta.sin();
                let (a, b) = (((1.0 - t) * theta).sin() / s, (t * theta).sin() / s);
                normalize([a * x[0] + b * y[0], a * x[1] + b * y[1], a * x[2] + b * y[2]])
            }
            Background::Torus => {
                let r = torus_offset(y, x);
                [(x[0] + t * r[0]).rem_euclid(1.0), (x[1] + t * r[1]).rem_euclid(1.0), 0.0]
            }
        }
    }

    /// Point at background distance `s` from `x` in direction angle `phi`
    /// (measured in a fixed frame at `x`).
    pub fn exp(self, x: Point, phi: f64, s: f64) -> Point {
        match self {
            Background::Sphere => {
                let (u, v) = crate::curvature::orthonormal_frame(x);
                let (cp, sp) = (phi.cos(), phi.sin());
                let d = [cp * u[0] + sp * v[0], cp * u[1] + sp * v[1], cp * u[2] + sp * v[2]];
                let (c, sn) = (s.cos(), s.sin());
                normalize([c * x[0] + sn * d[0], c * x[1] + sn * d[1], c * x[2] + sn * d[2]])
            }
            Background::Torus => [(x[0] + s * phi.cos()).rem_euclid(1.0), (x[1] + s * phi.sin()).rem_euclid(1.0), 0.0],
        }
    }

    fn whole_cell(self) -> Cell {
        match self {
            Background::Sphere => Cell::RoundSphere,
            Background::Torus => Cell::FlatTorus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMass {
    pub point: Point,
    pub mass: f64,
}

/// Cell-averaged density samples. On the torus row `i`, column `j` is the
/// cell `[j/n_cols, (j+1)/n_cols] × [i/n_rows, (i+1)/n_rows]`; on the sphere
/// rows are colatitude bands and columns longitude sectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDensity {
    pub n_rows: usize,
    pub n_cols: usize,
    pub values: Vec<f64>,
}

impl GridDensity {
    fn validate(&self) -> Result<(), PotentialError> {
        if self.n_rows == 0 || self.n_cols == 0 || self.values.len() != self.n_rows * self.n_cols {
            return Err(PotentialError::BadInput(format!(
                "grid density needs {} x {} values, got {}",
                self.n_rows,
                self.n_cols,
                self.values.len()
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(PotentialError::BadInput("grid density has non-finite values".into()));
        }
        Ok(())
    }

    /// Area of the cells in row `i`.
    fn cell_area(&self, background: Background, i: usize) -> f64 {
        match background {
            Background::Torus => 1.0 / (self.n_rows * self.n_cols) as f64,
            Background::Sphere => {
                let t0 = PI * i as f64 / self.n_rows as f64;
                let t1 = PI * (i + 1) as f64 / self.n_rows as f64;
                2.0 * PI * (t0.cos() - t1.cos()) / self.n_cols as f64
            }
        }
    }

    fn mass(&self, background: Background) -> f64 {
        crate::quadrature::sum(
            (0..self.n_rows)
                .flat_map(|i| (0..self.n_cols).map(move |j| (i, j)))
                .map(|(i, j)| self.values[i * self.n_cols + j] * self.cell_area(background, i)),
        )
    }

    /// Centre of cell `(i, j)`.
    fn cell_center(&self, background: Background, i: usize, j: usize) -> Point {
        let (a, b) = ((i as f64 + 0.5) / self.n_rows as f64, (j as f64 + 0.5) / self.n_cols as f64);
        match background {
            Background::Torus => [b, a, 0.0],
            Background::Sphere => {
                let (t, p) = (PI * a, 2.0 * PI * b);
                [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
            }
        }
    }
}

/// Absolutely continuous part of a prescribed measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum SmoothPart {
    /// Total mass spread with constant density over the background.
    Uniform(f64),
    /// Normalized bump `(1 − (d/ε)²)³` of geodesic radius `radius`.
    Bump {
        center: Point,
        radius: f64,
        mass: f64,
    },
    Grid(GridDensity),
}

impl SmoothPart {
    pub fn mass(&self, background: Background) -> f64 {
        match self {
            SmoothPart::Uniform(m) => *m,
            SmoothPart::Bump { mass, .. } => *mass,
            SmoothPart::Grid(g) => g.mass(background),
        }
    }
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<SmoothPart>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(SmoothPart),
        Many(Vec<SmoothPart>),
    }
    Ok(match Option::<OneOrMany>::deserialize(d)? {
        None => Vec::new(),
        Some(OneOrMany::One(p)) => vec![p],
        Some(OneOrMany::Many(v)) => v,
    })
}

/// Signed measure on a background: point masses plus smooth parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrescribedMeasure {
    pub background: Background,
    #[serde(default)]
    pub atoms: Vec<PointMass>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub smooth: Vec<SmoothPart>,
}

impl PrescribedMeasure {
    pub fn new(background: Background) -> Self {
        PrescribedMeasure { background, atoms: Vec::new(), smooth: Vec::new() }
    }

    pub fn with_atom(mut self, point: Point, mass: f64) -> Self {
        self.atoms.push(PointMass { point, mass });
        self
    }

    pub fn with_smooth(mut self, part: SmoothPart) -> Self {
        self.smooth.push(part);
        self
    }

    pub fn from_json(text: &str) -> Result<Self, PotentialError> {
        let m: PrescribedMeasure = serde_json::from_str(text).map_err(|e| PotentialError::BadInput(e.to_string()))?;
        m.validated()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("measure serializes")
    }

    /// Canonicalizes points and checks the parts are well formed.
    pub fn validated(mut self) -> Result<Self, PotentialError> {
        let bg = self.background;
        for a in &mut self.atoms {
            a.point = bg.point(a.point)?;
            if !a.mass.is_finite() {
                return Err(PotentialError::BadInput(format!("atom mass {}", a.mass)));
            }
        }
        for part in &mut self.smooth {
            match part {
                SmoothPart::Uniform(m) if !m.is_finite() => {
                    return Err(PotentialError::BadInput(format!("uniform mass {m}")));
                }
                SmoothPart::Uniform(_) => {}
                SmoothPart::Bump { center, radius, mass } => {
                    *center = bg.point(*center)?;
                    let max = match bg {
                        Background::Torus => MAX_TORUS_BUMP_RADIUS,
                        Background::Sphere => MAX_SPHERE_BUMP_RADIUS,
                    };
                    if !(*radius > 0.0 && *radius <= max) || !mass.is_finite() {
                        return Err(PotentialError::BadInput(format!(
                            "bump radius {radius} must lie in (0, {max}] with finite mass"
                        )));
                    }
                }
                SmoothPart::Grid(g) => g.validate()?,
            }
        }
        Ok(self)
    }

    pub fn total_mass(&self) -> f64 {
        crate::quadrature::sum(
            self.atoms.iter().map(|a| a.mass).chain(self.smooth.iter().map(|p| p.mass(self.background))),
        )
    }

    pub fn total_variation(&self) -> f64 {
        let grid_tv = |g: &GridDensity| {
            (0..g.n_rows)
                .flat_map(|i| (0..g.n_cols).map(move |j| (i, j)))
                .map(|(i, j)| g.values[i * g.n_cols + j].abs() * g.cell_area(self.background, i))
                .sum::<f64>()
        };
        self.atoms.iter().map(|a| a.mass.abs()).sum::<f64>()
            + self
                .smooth
                .iter()
                .map(|p| match p {
                    SmoothPart::Grid(g) => grid_tv(g),
                    other => other.mass(self.background).abs(),
                })
                .sum::<f64>()
    }

    fn check_atoms(&self) -> Result<(), PotentialError> {
        match self.atoms.iter().find(|a| a.mass >= 2.0 * PI) {
            Some(a) => Err(PotentialError::CuspAtom { mass: a.mass, point: a.point }),
            None => Ok(()),
        }
    }

    /// The same measure in the symbolic form used for weak comparisons.
    pub fn to_curvature_measure(&self) -> CurvatureMeasure {
        let bg = self.background;
        let mut out = CurvatureMeasure::default();
        for (i, a) in self.atoms.iter().enumerate() {
            out.atoms.push(Atom { site: format!("atom{i}"), point: Some(a.point), mass: a.mass });
        }
        for (i, p) in self.smooth.iter().enumerate() {
            match p {
                SmoothPart::Uniform(m) => {
                    out.face_parts.push(FacePart { id: format!("uniform{i}"), mass: *m, cell: bg.whole_cell() })
                }
                SmoothPart::Bump { center, radius, mass } => out.face_parts.push(FacePart {
                    id: format!("bump{i}"),
                    mass: *mass,
                    cell: match bg {
                        Background::Torus => Cell::TorusBump { center: *center, radius: *radius },
                        Background::Sphere => Cell::SphereBump { center: *center, radius: *radius },
                    },
                }),
                SmoothPart::Grid(g) => {
                    for r in 0..g.n_rows {
                        for c in 0..g.n_cols {
                            let mass = g.values[r * g.n_cols + c] * g.cell_area(bg, r);
                            if mass != 0.0 {
                                out.atoms.push(Atom {
                                    site: format!("grid{i}[{r},{c}]"),
                                    point: Some(g.cell_center(bg, r, c)),
                                    mass,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Potential of the grid parts, tabulated on a node lattice and
/// interpolated bilinearly.
#[derive(Debug, Clone)]
struct TabulatedPotential {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl TabulatedPotential {
    /// Torus: spectral solve of the trigonometric interpolant of the cell
    /// values, sampled at the cell centres.
    fn torus(grids: &[(f64, &GridDensity)]) -> Self {
        let n = grids.iter().map(|(_, g)| g.n_rows.max(g.n_cols)).max().unwrap_or(1).max(16);
        let mut density = vec![0.0; n * n];
        for (scale, g) in grids {
            for i in 0..n {
                for j in 0..n {
                    let y = (i as f64 + 0.5) / n as f64;
                    let x = (j as f64 + 0.5) / n as f64;
                    let (r, c) = (
                        ((y * g.n_rows as f64) as usize).min(g.n_rows - 1),
                        ((x * g.n_cols as f64) as usize).min(g.n_cols - 1),
                    );
                    density[i * n + j] += scale * g.values[r * g.n_cols + c];
                }
            }
        }
        let spectrum = dft2(&density, n, false);
        let mut solved = vec![num_complex::Complex64::new(0.0, 0.0); n * n];
        for ki in 0..n {
            for kj in 0..n {
                if ki == 0 && kj == 0 {
                    continue;
                }
                let fi = if ki <= n / 2 { ki as f64 } else { ki as f64 - n as f64 };
                let fj = if kj <= n / 2 { kj as f64 } else { kj as f64 - n as f64 };
                solved[ki * n + kj] = spectrum[ki * n + kj] / (4.0 * PI * PI * (fi * fi + fj * fj));
            }
        }
        let back = dft2_complex(&solved, n, true);
        TabulatedPotential { rows: n, cols: n, values: back.iter().map(|z| z.re / (n * n) as f64).collect() }
    }

    /// Sphere: direct summation of cell masses against the Green function at
    /// latitude-longitude nodes (cell corners, never cell centres).
    fn sphere(grids: &[(f64, &GridDensity)]) -> Self {
        use rayon::prelude::*;
        let rows = grids.iter().map(|(_, g)| g.n_rows).max().unwrap_or(1).max(16);
        let cols = grids.iter().map(|(_, g)| g.n_cols).max().unwrap_or(1).max(32);
        let mut sources = Vec::new();
        for (scale, g) in grids {
            for r in 0..g.n_rows {
                for c in 0..g.n_cols {
                    let m = scale * g.values[r * g.n_cols + c] * g.cell_area(Background::Sphere, r);
                    if m != 0.0 {
                        sources.push((g.cell_center(Background::Sphere, r, c), m));
                    }
                }
            }
        }
        let values = (0..(rows + 1) * cols)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / cols, k % cols);
                let p = lat_long_node(rows, cols, i, j);
                crate::quadrature::sum(sources.iter().map(|&(q, m)| m * green_sphere(p, q).unwrap_or(0.0)))
            })
            .collect();
        TabulatedPotential { rows, cols, values }
    }

    fn torus_value(&self, x: Point) -> f64 {
        let n = self.rows;
        let fx = x[0] * n as f64 - 0.5;
        let fy = x[1] * n as f64 - 0.5;
        let (j0, i0) = (fx.floor(), fy.floor());
        let (tx, ty) = (fx - j0, fy - i0);
        let idx = |i: f64, j: f64| {
            let i = (i as i64).rem_euclid(n as i64) as usize;
            let j = (j as i64).rem_euclid(n as i64) as usize;
            self.values[i * n + j]
        };
        (1.0 - ty) * ((1.0 - tx) * idx(i0, j0) + tx * idx(i0, j0 + 1.0))
            + ty * ((1.0 - tx) * idx(i0 + 1.0, j0) + tx * idx(i0 + 1.0, j0 + 1.0))
    }

    fn sphere_value(&self, x: Point) -> f64 {
        let theta = x[2].clamp(-1.0, 1.0).acos();
        let phi = x[1].atan2(x[0]).rem_euclid(2.0 * PI);
        let fi = (theta / PI * self.rows as f64).min(self.rows as f64 - 1e-12);
        let fj = phi / (2.0 * PI) * self.cols as f64;
        let (i0, j0) = (fi.floor() as usize, fj.floor() as usize);
        let (ti, tj) = (fi - i0 as f64, fj - j0 as f64);
        let at = |i: usize, j: usize| self.values[i * self.cols + j % self.cols];
        (1.0 - ti) * ((1.0 - tj) * at(i0, j0) + tj * at(i0, j0 + 1))
            + ti * ((1.0 - tj) * at(i0 + 1, j0) + tj * at(i0 + 1, j0 + 1))
    }
}

fn lat_long_node(rows: usize, cols: usize, i: usize, j: usize) -> Point {
    let t = PI * i as f64 / rows as f64;
    let p = 2.0 * PI * j as f64 / cols as f64;
    [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
}

fn dft2(real: &[f64], n: usize, inverse: bool) -> Vec<num_complex::Complex64> {
    let data: Vec<num_complex::Complex64> = real.iter().map(|&r| num_complex::Complex64::new(r, 0.0)).collect();
    dft2_complex(&data, n, inverse)
}

/// Separable 2D DFT (unnormalized), `O(n³)`.
fn dft2_complex(data: &[num_complex::Complex64], n: usize, inverse: bool) -> Vec<num_complex::Complex64> {
    use num_complex::Complex64;
    let sign = if inverse { 1.0 } else { -1.0 };
    let twiddle: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / n as f64)).collect();
    let mut rows = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += data[i * n + j] * twiddle[(j * k) % n];
            }
            rows[i * n + k] = acc;
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        for l in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                acc += rows[i * n + l] * twiddle[(i * k) % n];
            }
            out[k * n + l] = acc;
        }
    }
    out
}

/// `u(x) = ∫ G(x, y) dμ(y) + offset` for a measure of total mass zero.
#[derive(Debug, Clone)]
pub struct PotentialFunction {
    background: Background,
    atoms: Vec<PointMass>,
    bumps: Vec<(Point, f64, f64)>,
    grid: Option<Arc<TabulatedPotential>>,
    offset: f64,
}

impl PotentialFunction {
    pub fn background(&self) -> Background {
        self.background
    }

    pub fn atoms(&self) -> &[PointMass] {
        &self.atoms
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// The same potential shifted by a constant.
    pub fn shifted(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.offset += c;
        out
    }

    /// Value at `x`; `±∞` exactly at an atom.
    pub fn value(&self, x: Point) -> f64 {
        let bg = self.background;
        let mut s = crate::quadrature::NeumaierSum::default();
        for a in &self.atoms {
            match bg.green(x, a.point) {
                Ok(g) => s.add(a.mass * g),
                Err(_) => return if a.mass > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY },
            }
        }
        for &(c, r, m) in &self.bumps {
            s.add(
                m * match bg {
                    Background::Torus => torus_bump_potential(x, c, r),
                    Background::Sphere => sphere_bump_potential(x, c, r),
                },
            );
        }
        if let Some(t) = &self.grid {
            s.add(match bg {
                Background::Torus => t.torus_value(x),
                Background::Sphere => t.sphere_value(x),
            });
        }
        s.add(self.offset);
        s.value()
    }

    /// Conformal factor `e^{u(x)}` of the length element.
    pub fn factor(&self, x: Point) -> f64 {
        self.value(x).exp()
    }

    /// Exponent `β` with `e^u ~ d^β` at each atom.
    pub fn atom_exponents(&self) -> impl Iterator<Item = (Point, f64)> + '_ {
        self.atoms.iter().map(|a| (a.point, -a.mass / (2.0 * PI)))
    }
}

/// Potential of a measure of total mass zero.
pub fn potential_of_measure(mu: &PrescribedMeasure) -> Result<PotentialFunction, PotentialError> {
    let mu = mu.clone().validated()?;
    let total = mu.total_mass();
    let tolerance = MASS_TOLERANCE * mu.total_variation().max(1.0);
    if total.abs() > tolerance {
        return Err(PotentialError::NonZeroTotalMass { total, tolerance });
    }
    mu.check_atoms()?;
    let mut bumps = Vec::new();
    let mut grids = Vec::new();
    for p in &mu.smooth {
        match p {
            SmoothPart::Uniform(_) => {}
            SmoothPart::Bump { center, radius, mass } => bumps.push((*center, *radius, *mass)),
            SmoothPart::Grid(g) => grids.push((1.0, g)),
        }
    }
    let grid = if grids.is_empty() {
        None
    } else {
        Some(Arc::new(match mu.background {
            Background::Torus => TabulatedPotential::torus(&grids),
            Background::Sphere => {
                let mut t = TabulatedPotential::sphere(&grids);
                let mean: f64 = grid_mean(&t);
                for v in &mut t.values {
                    *v -= mean;
                }
                t
            }
        }))
    };
    Ok(PotentialFunction { background: mu.background, atoms: mu.atoms.clone(), bumps, grid, offset: 0.0 })
}

/// Area-weighted mean of a latitude-longitude table (trapezoid in `cos θ`).
fn grid_mean(t: &TabulatedPotential) -> f64 {
    let mut s = 0.0;
    let mut w = 0.0;
    for i in 0..=t.rows {
        let theta = PI * i as f64 / t.rows as f64;
        let weight = theta.sin().max(1e-3 / t.rows as f64);
        for j in 0..t.cols {
            s += weight * t.values[i * t.cols + j];
            w += weight;
        }
    }
    s / w
}

/// `e^{2u} h` for the potential of `ω − K_h dA_h`.
#[derive(Debug, Clone)]
pub struct SingularMetric {
    pub target: PrescribedMeasure,
    pub potential: PotentialFunction,
}

impl SingularMetric {
    pub fn background(&self) -> Background {
        self.potential.background
    }

    /// Length-element factor `e^{u}`.
    pub fn factor(&self, x: Point) -> f64 {
        self.potential.factor(x)
    }

    /// The homothetic metric `e^{2c} e^{2u} h`, with lengths scaled by `e^c`.
    pub fn scaled_by_exp(&self, c: f64) -> Self {
        SingularMetric { target: self.target.clone(), potential: self.potential.shifted(c) }
    }

    /// Curvature measure of the metric (the target).
    pub fn curvature(&self) -> CurvatureMeasure {
        self.target.to_curvature_measure()
    }
}

/// Metric on the background with curvature measure `omega`, unique up to
/// homothety; this representative has zero-mean log factor.
pub fn build_alexandrov_metric(omega: &PrescribedMeasure) -> Result<SingularMetric, PotentialError> {
    let omega = omega.clone().validated()?;
    let bg = omega.background;
    let chi = bg.euler_characteristic();
    let residual = gauss_bonnet_residual(&omega.to_curvature_measure(), chi, None);
    if residual.abs() > GAUSS_BONNET_TOLERANCE * omega.total_variation().max(1.0) {
        return Err(PotentialError::GaussBonnetViolation {
            total: omega.total_mass(),
            expected: 2.0 * PI * chi as f64,
        });
    }
    omega.check_atoms()?;
    let mut mu = omega.clone();
    let k = bg.gaussian_curvature();
    if k != 0.0 {
        mu.smooth.push(SmoothPart::Uniform(-k * bg.area()));
    }
    // Absorb the rounding residual so the mass check sees exactly zero.
    let residual = mu.total_mass();
    if residual != 0.0 {
        mu.smooth.push(SmoothPart::Uniform(-residual));
    }
    let potential = potential_of_measure(&mu)?;
    Ok(SingularMetric { target: omega, potential })
}

/// Target measure of the football: two antipodal cone points of angle
/// `theta` at the poles and curvature spread uniformly over the sphere.
pub fn football(theta: f64) -> PrescribedMeasure {
    let atom = 2.0 * PI - theta;
    PrescribedMeasure::new(Background::Sphere)
        .with_atom([0.0, 0.0, 1.0], atom)
        .with_atom([0.0, 0.0, -1.0], atom)
        .with_smooth(SmoothPart::Uniform(4.0 * PI - 2.0 * atom))
}

/// Flat torus target with one cone point of mass `mass` at `p`, balanced by
/// uniform curvature `−mass`.
pub fn one_cone_torus(p: Point, mass: f64) -> PrescribedMeasure {
    PrescribedMeasure::new(Background::Torus).with_atom(p, mass).with_smooth(SmoothPart::Uniform(-mass))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn football_factor_closed_form() {
        let m = build_alexandrov_metric(&football(PI)).unwrap();
        for t in [0.3f64, 1.0, 2.0] {
            let x = [t.sin(), 0.0, t.cos()];
            let expected = -0.5 * (0.5 * t.sin()).ln() - 0.5;
            assert!((m.potential.value(x) - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_targets() {
        let cusp = football(0.0);
        assert!(matches!(build_alexandrov_metric(&cusp), Err(PotentialError::CuspAtom { .. })));
        let unbalanced = PrescribedMeasure::new(Background::Torus).with_atom([0.5, 0.5, 0.0], 1.0);
        assert!(matches!(build_alexandrov_metric(&unbalanced), Err(PotentialError::GaussBonnetViolation { .. })));
        assert!(matches!(potential_of_measure(&unbalanced), Err(PotentialError::NonZeroTotalMass { .. })));
        let off = PrescribedMeasure::new(Background::Sphere).with_atom([0.0, 0.0, 2.0], 1.0);
        assert!(matches!(off.validated(), Err(PotentialError::PointOffBackground(_))));
    }

    #[test]
    fn json_round_trip_and_single_smooth_part() {
        let text = r#"{"background":"torus","atoms":[{"point":[0.5,0.5,0],"mass":2.75}],
            "smooth":{"kind":"uniform","data":-2.75}}"#;
        let m = PrescribedMeasure::from_json(text).unwrap();
        assert_eq!(m.smooth, vec![SmoothPart::Uniform(-2.75)]);
        assert_eq!(PrescribedMeasure::from_json(&m.to_json()).unwrap(), m);
        assert!(m.total_mass().abs() < 1e-15);
    }

    #[test]
    fn torus_grid_potential_solves_poisson() {
        // Samples of cos(2πx); the potential is cos(2πx)/(4π²) up to the
        // bilinear interpolation error.
        let n = 64;
        let h = 1.0 / n as f64;
        let values = (0..n * n).map(|k| (2.0 * PI * ((k % n) as f64 + 0.5) * h).cos()).collect();
        let mu = PrescribedMeasure::new(Background::Torus).with_smooth(SmoothPart::Grid(GridDensity {
            n_rows: n,
            n_cols: n,
            values,
        }));
        let u = potential_of_measure(&mu).unwrap();
        for x in [[0.0, 0.3, 0.0], [0.37, 0.8, 0.0]] {
            let exact = (2.0 * PI * x[0]).cos() / (4.0 * PI * PI);
            assert!((u.value(x) - exact).abs() < 2e-3 / (4.0 * PI * PI), "{}", u.value(x) - exact);
        }
    }

    #[test]
    fn homothety_shifts_log_factor() {
        let m = build_alexandrov_metric(&one_cone_torus([0.5, 0.5, 0.0], 1.0)).unwrap();
        let s = m.scaled_by_exp(0.7);
        let x = [0.1, 0.2, 0.0];
        assert!((s.factor(x) / m.factor(x) - 0.7f64.exp()).abs() < 1e-14);
    }
}
