use std::f64::consts::PI;

use alexandrov::curvature::{gauss_bonnet_residual, vertex_curvature_atoms_with_threshold, BoundaryTurning};
use alexandrov::geodesics::{GeodesicSolver, SurfacePoint};
use alexandrov::mesh::{presets, ConeSurface, ObjExport, SurfaceFile};
use serde_json::json;

use crate::args::{SurfaceCmd, SurfaceSource};
use crate::error::CliError;
use crate::output::{json_text, parse_floats, read, sig, usage, write_with_manifest};

pub fn run(cmd: SurfaceCmd, argv: &[String]) -> Result<(), CliError> {
    match cmd {
        SurfaceCmd::Build(a) => {
            let surface = match (&a.input, &a.obj, &a.preset) {
                (Some(p), None, None) => SurfaceFile::from_json(&read(p)?)?.into_surface()?,
                (None, Some(p), None) => parse_obj(&read(p)?)?,
                (None, None, Some(name)) => preset(name)?,
                _ => return Err(usage("give exactly one of --in, --obj or --preset")),
            };
            print_summary(&surface);
            if let Some(out) = &a.out {
                let text = SurfaceFile::from_surface(&surface).to_json() + "\n";
                write_with_manifest(out, &text, "surface build", &a, argv, json!({}))?;
            }
            Ok(())
        }
        SurfaceCmd::Curvature(a) => {
            let surface = load(&a.source)?;
            let measure = vertex_curvature_atoms_with_threshold(&surface, a.threshold);
            println!("atoms: {}", measure.atoms.len());
            for atom in &measure.atoms {
                println!("  {} {}", atom.site, sig(atom.mass));
            }
            println!("total: {}", sig(measure.total_mass()));
            if let Some(out) = &a.out {
                write_with_manifest(out, &json_text(&measure), "surface curvature", &a, argv, json!({}))?;
            }
            Ok(())
        }
        SurfaceCmd::GaussBonnet(a) => {
            let surface = load(&a.source)?;
            let measure = vertex_curvature_atoms_with_threshold(&surface, 0.0);
            let turning = BoundaryTurning::of_surface(&surface);
            let chi = surface.euler_characteristic();
            let has_boundary = !turning.turning.is_empty();
            let residual = gauss_bonnet_residual(&measure, chi, has_boundary.then_some(&turning));
            let total = measure.total_mass();
            println!("euler characteristic: {chi}");
            println!("total curvature: {}", sig(total));
            if has_boundary {
                println!("boundary turning: {}", sig(turning.total()));
            }
            println!("2*pi*chi: {}", sig(2.0 * PI * chi as f64));
            println!("residual: {}", sig(residual));
            if let Some(out) = &a.out {
                let report = json!({
                    "euler_characteristic": chi,
                    "total_curvature": total,
                    "boundary_turning": turning.total(),
                    "residual": residual,
                });
                write_with_manifest(out, &json_text(&report), "surface gauss-bonnet", &a, argv, json!({}))?;
            }
            Ok(())
        }
        SurfaceCmd::Distance(a) => {
            let surface = load(&a.source)?;
            let x = surface_point(&surface, &a.from)?;
            let y = surface_point(&surface, &a.to)?;
            let d = GeodesicSolver::new(&surface).distance(&x, &y, a.level)?;
            println!("distance: {}", sig(d));
            if let Some(out) = &a.out {
                let report = json!({ "from": a.from, "to": a.to, "level": a.level, "distance": d });
                write_with_manifest(out, &json_text(&report), "surface distance", &a, argv, json!({}))?;
            }
            Ok(())
        }
        SurfaceCmd::ExportObj(a) => {
            let surface = load(&a.source)?;
            write_with_manifest(&a.out, &surface.to_obj(), "surface export-obj", &a, argv, json!({}))?;
            println!("wrote {} faces to {}", surface.face_count(), a.out.display());
            Ok(())
        }
    }
}

fn print_summary(s: &ConeSurface) {
    let topo = s.topology();
    println!("faces: {}", topo.face_count());
    println!("edges: {}", topo.edge_count());
    println!("vertices: {}", topo.vertex_count());
    println!("euler characteristic: {}", s.euler_characteristic());
    println!("boundary loops: {}", topo.boundary_loops().len());
    let area: f64 = (0..s.face_count()).map(|f| s.face_area(f)).sum();
    println!("area: {}", sig(area));
}

pub fn load(source: &SurfaceSource) -> Result<ConeSurface, CliError> {
    match (&source.input, &source.preset) {
        (Some(p), _) => Ok(SurfaceFile::from_json(&read(p)?)?.into_surface()?),
        (None, Some(name)) => preset(name),
        (None, None) => Err(usage("give --in or --preset")),
    }
}

fn preset(name: &str) -> Result<ConeSurface, CliError> {
    let name = name.trim().to_ascii_lowercase();
    if let Some(rest) = name.strip_prefix("double-triangle:") {
        let l = parse_floats(rest)?;
        if l.len() != 3 {
            return Err(usage("double-triangle needs three lengths"));
        }
        return Ok(presets::double_triangle(l[0], l[1], l[2])?);
    }
    match name.as_str() {
        "cube" => Ok(presets::unit_cube()),
        "square-torus" => Ok(presets::square_torus(1.0)?),
        _ => Err(usage(format!("unknown preset '{name}'"))),
    }
}

/// `v:<vertex>` or `f:<face>:<b0>,<b1>,<b2>`.
fn surface_point(surface: &ConeSurface, text: &str) -> Result<SurfacePoint, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        ["v", v] => {
            let v: usize = v.parse().map_err(|_| usage(format!("bad vertex '{v}'")))?;
            if v >= surface.topology().vertex_count() {
                return Err(CliError::Domain(format!("InvalidPoint: vertex {v} does not exist")));
            }
            Ok(SurfacePoint::at_vertex(surface, v))
        }
        ["f", f, bary] => {
            let f: usize = f.parse().map_err(|_| usage(format!("bad face '{f}'")))?;
            let b = parse_floats(bary)?;
            if b.len() != 3 {
                return Err(usage("barycentric coordinates need three values"));
            }
            Ok(SurfacePoint::new(surface, f, [b[0], b[1], b[2]])?)
        }
        _ => Err(usage(format!("point '{text}' must be v:<i> or f:<face>:<b0>,<b1>,<b2>"))),
    }
}

fn parse_obj(text: &str) -> Result<ConeSurface, CliError> {
    let mut positions = Vec::new();
    let mut triangles = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        let bad = || CliError::Domain(format!("BadInput: OBJ line {}: '{line}'", line_no + 1));
        match it.next() {
            Some("v") => {
                let p: Vec<f64> = it.take(3).map(|t| t.parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
                if p.len() != 3 {
                    return Err(bad());
                }
                positions.push([p[0], p[1], p[2]]);
            }
            Some("f") => {
                let idx: Vec<usize> = it
                    .map(|t| t.split('/').next().unwrap_or("").parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad())?;
                if idx.len() != 3 || idx.contains(&0) {
                    return Err(bad());
                }
                triangles.push([idx[0] - 1, idx[1] - 1, idx[2] - 1]);
            }
            _ => {}
        }
    }
    Ok(ConeSurface::from_embedded(&positions, &triangles)?)
}
