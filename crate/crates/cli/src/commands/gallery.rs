use alexandrov::conformal::{
    conformal_distance, log_factor, make_example_metric, smooth_curvature_from_factor, BackgroundCurvature, ChartPoint,
    Domain, ExampleKind, GridSpec,
};
use serde_json::json;

use crate::args::GalleryCmd;
use crate::error::CliError;
use crate::output::{json_text, parse_floats, sig, usage, write_with_manifest};

pub fn run(cmd: GalleryCmd, argv: &[String]) -> Result<(), CliError> {
    match cmd {
        GalleryCmd::Show(a) => {
            let kind: ExampleKind = a.example.parse()?;
            let metric = make_example_metric(kind)?;
            println!("example: {}", metric.name);
            println!("domain: {:?}", metric.domain);
            println!("far chart: {}", metric.has_far_chart());
            let report = match &metric.declared {
                Some(d) => {
                    println!("declared total curvature: {}", sig(d.total));
                    println!("note: {}", d.note);
                    for atom in &d.measure.atoms {
                        println!("  atom {} {}", atom.site, sig(atom.mass));
                    }
                    for e in &d.measure.edge_parts {
                        println!("  edge {} density {} length {}", e.id, sig(e.density), sig(e.length));
                    }
                    for f in &d.measure.face_parts {
                        println!("  face {} mass {}", f.id, sig(f.mass));
                    }
                    json!({ "example": metric.name, "total": d.total, "note": d.note, "measure": d.measure })
                }
                None => json!({ "example": metric.name }),
            };
            if let Some(out) = &a.out {
                write_with_manifest(out, &json_text(&report), "gallery show", &a, argv, json!({}))?;
            }
            Ok(())
        }
        GalleryCmd::Distance(a) => {
            let kind: ExampleKind = a.example.parse()?;
            let metric = make_example_metric(kind)?;
            if a.grid < 2 || !(a.half_width > 0.0) {
                return Err(usage("--grid must be at least 2 and --half-width positive"));
            }
            let x = chart_point(&a.from)?;
            let y = chart_point(&a.to)?;
            let per_side = (2.0 * a.half_width * a.grid as f64).round() as usize + 1;
            let spec = GridSpec::centered(a.half_width, per_side);
            let d = conformal_distance(&metric, &x, &y, spec)?;
            println!("distance: {}", sig(d));
            if let Some(out) = &a.out {
                let report = json!({ "example": metric.name, "from": a.from, "to": a.to, "distance": d });
                let details = json!({ "grid_step": spec.h, "nodes_per_side": per_side });
                write_with_manifest(out, &json_text(&report), "gallery distance", &a, argv, details)?;
            }
            Ok(())
        }
        GalleryCmd::CurvatureGrid(a) => {
            let kind: ExampleKind = a.example.parse()?;
            let metric = make_example_metric(kind)?;
            if a.grid < 3 || !(a.half_width > 0.0) {
                return Err(usage("--grid must be at least 3 and --half-width positive"));
            }
            let spec = GridSpec::centered(a.half_width, a.grid);
            let mask = a.mask_radius.unwrap_or(2.0 * spec.h);
            let u = log_factor(&metric, spec);
            let singular: Vec<_> = metric.singularities_of(alexandrov::conformal::Chart::Near).to_vec();
            let k = smooth_curvature_from_factor(&u, &BackgroundCurvature::Constant(0.0), &singular, mask)?;
            let finite: Vec<f64> = k.values.iter().copied().filter(|v| v.is_finite()).collect();
            println!("nodes: {} ({} recovered)", k.values.len(), finite.len());
            if !finite.is_empty() {
                let (lo, hi) =
                    finite.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
                println!("curvature range: [{}, {}]", sig(lo), sig(hi));
            }
            if matches!(metric.domain, Domain::ExtendedPlane) {
                println!("note: near chart only");
            }
            write_with_manifest(
                &a.out,
                &k.to_csv(),
                "gallery curvature-grid",
                &a,
                argv,
                json!({ "grid_step": spec.h, "mask_radius": mask }),
            )?;
            Ok(())
        }
    }
}

/// `x,y` in the near chart or `far:x,y`.
fn chart_point(text: &str) -> Result<ChartPoint, CliError> {
    let (far, body) = match text.strip_prefix("far:") {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix("near:").unwrap_or(text)),
    };
    let v = parse_floats(body)?;
    if v.len() != 2 {
        return Err(usage(format!("chart point '{text}' needs two coordinates")));
    }
    Ok(if far { ChartPoint::far(v[0], v[1]) } else { ChartPoint::near(v[0], v[1]) })
}
