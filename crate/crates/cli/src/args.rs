use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Singular surfaces with bounded integral curvature, as batch verbs.
///
/// Set ALEXANDROV_THREADS to cap the worker thread count.
#[derive(Debug, Parser)]
#[command(name = "alexandrov", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub group: Group,
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Polyhedral cone surfaces glued from triangles.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Closed-form conformal example metrics.
    #[command(subcommand)]
    Gallery(GalleryCmd),
    /// Metrics with prescribed curvature on the sphere or the torus.
    #[command(subcommand)]
    Prescribe(PrescribeCmd),
    /// Convergence experiments.
    #[command(subcommand)]
    Lab(LabCmd),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SurfaceSource {
    /// Surface JSON (faces, gluing, lengths).
    #[arg(long = "in", value_name = "FILE", conflicts_with = "preset", required_unless_present = "preset")]
    pub input: Option<PathBuf>,
    /// Built-in surface: cube, square-torus, double-triangle:a,b,c.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum SurfaceCmd {
    /// Validate a surface (JSON, OBJ or preset) and write it as surface JSON.
    Build(SurfaceBuild),
    /// Vertex curvature atoms as a measure JSON.
    Curvature(SurfaceCurvature),
    /// Total curvature against 2πχ.
    GaussBonnet(SurfaceGaussBonnet),
    /// Intrinsic distance between two surface points.
    Distance(SurfaceDistance),
    /// Write the surface as OBJ.
    ExportObj(SurfaceExportObj),
}

#[derive(Debug, Args, Serialize)]
pub struct SurfaceBuild {
    /// Surface JSON input.
    #[arg(long = "in", value_name = "FILE", group = "source")]
    pub input: Option<PathBuf>,
    /// OBJ input with 3D vertices; lengths come from the embedding.
    #[arg(long, value_name = "FILE", group = "source")]
    pub obj: Option<PathBuf>,
    #[arg(long, group = "source")]
    pub preset: Option<String>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SurfaceCurvature {
    #[command(flatten)]
    pub source: SurfaceSource,
    /// Atoms with |mass| below this are dropped.
    #[arg(long, default_value_t = 1e-10)]
    pub threshold: f64,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SurfaceGaussBonnet {
    #[command(flatten)]
    pub source: SurfaceSource,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SurfaceDistance {
    #[command(flatten)]
    pub source: SurfaceSource,
    /// `v:<vertex>` or `f:<face>:<b0>,<b1>,<b2>`.
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    /// Steiner refinement level.
    #[arg(long, default_value_t = alexandrov::geodesics::DEFAULT_LEVEL)]
    pub level: u32,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SurfaceExportObj {
    #[command(flatten)]
    pub source: SurfaceSource,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum GalleryCmd {
    /// Print the declared curvature measure of an example.
    Show(GalleryShow),
    /// Metric distance between two chart points.
    Distance(GalleryDistance),
    /// Curvature recovered from the sampled log factor, as CSV.
    CurvatureGrid(GalleryCurvatureGrid),
}

#[derive(Debug, Args, Serialize)]
pub struct GalleryShow {
    /// cone:<angle> (e.g. cone:pi/2), hemisphere-cylinder, glued-disks, pseudosphere.
    #[arg(long)]
    pub example: String,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GalleryDistance {
    #[arg(long)]
    pub example: String,
    /// `x,y` in the near chart or `far:x,y` in the far chart.
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    /// Grid nodes per unit length.
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    /// Half width of the chart box.
    #[arg(long, default_value_t = 1.25)]
    pub half_width: f64,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GalleryCurvatureGrid {
    #[arg(long)]
    pub example: String,
    /// Grid nodes per side.
    #[arg(long, default_value_t = 65)]
    pub grid: usize,
    #[arg(long, default_value_t = 1.0)]
    pub half_width: f64,
    /// Nodes this close to a singular set are masked (default: 2 grid steps).
    #[arg(long)]
    pub mask_radius: Option<f64>,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Resolution {
    /// Torus grid nodes per side.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Icosphere subdivision level on the sphere.
    #[arg(long, default_value_t = 4)]
    pub level: u32,
}

#[derive(Debug, Subcommand)]
pub enum PrescribeCmd {
    /// Build the metric and write its log conformal factor on a grid (CSV).
    Build(PrescribeBuild),
    /// Metric distance between two background points.
    Distance(PrescribeDistance),
    /// Re-check Gauss–Bonnet and the cone angles of the built metric.
    Verify(PrescribeVerify),
}

#[derive(Debug, Args, Serialize)]
pub struct PrescribeBuild {
    /// Target curvature measure JSON.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Samples per side (torus) or latitude rows (sphere).
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PrescribeDistance {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// `x,y` on the torus or `x,y,z` on the sphere.
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    #[command(flatten)]
    pub resolution: Resolution,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PrescribeVerify {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub resolution: Resolution,
    /// Rays per circle probe.
    #[arg(long, default_value_t = 64)]
    pub rays: usize,
    /// Allowed relative error of the probed cone angles.
    #[arg(long, default_value_t = 0.02)]
    pub tolerance: f64,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum LabCmd {
    /// Lantern areas along a ladder of ring sizes (CSV).
    Lantern(LabLantern),
    /// Uniform and weak distances of mollified metrics (CSV).
    Reshetnyak(LabReshetnyak),
    /// Dictionary weak distance between two measures.
    WeakDistance(LabWeakDistance),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowsArg {
    Equal,
    Cubic,
}

#[derive(Debug, Args, Serialize)]
pub struct LabLantern {
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    /// `n=8..64` (doubling) or `n=8,12,16`.
    #[arg(long, default_value = "n=8..64")]
    pub ladder: String,
    #[arg(long, value_enum, default_value_t = RowsArg::Equal)]
    pub rows: RowsArg,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct LabReshetnyak {
    /// Target measure JSON (default: torus with one atom π at the centre).
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// `eps=1/4..1/16` (halving) or `eps=0.25,0.1`.
    #[arg(long, default_value = "eps=1/4..1/16")]
    pub ladder: String,
    /// Torus grid nodes per side.
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    /// Icosphere level on the sphere.
    #[arg(long, default_value_t = 4)]
    pub level: u32,
    #[arg(long, default_value_t = 24)]
    pub samples: usize,
    #[arg(long, default_value_t = alexandrov::sampling::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct LabWeakDistance {
    /// First measure JSON.
    #[arg(long, value_name = "FILE")]
    pub a: PathBuf,
    /// Second measure JSON, on the same background.
    #[arg(long, value_name = "FILE")]
    pub b: PathBuf,
    #[arg(long, default_value_t = alexandrov::sampling::DEFAULT_SEED)]
    pub seed: u64,
    /// Quadrature resolution for smooth parts.
    #[arg(long, default_value_t = alexandrov::convergence::DEFAULT_WEAK_RESOLUTION)]
    pub resolution: usize,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}
