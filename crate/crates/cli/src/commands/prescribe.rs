use std::f64::consts::PI;
use std::fmt::Write as _;

use alexandrov::curvature::gauss_bonnet_residual;
use alexandrov::geodesics::{geodesic_circle_length, CircleProbe};
use alexandrov::potential::{
    build_alexandrov_metric, Background, GraphResolution, MetricCircle, MetricGraph, PrescribedMeasure,
};
use serde_json::json;

use crate::args::{PrescribeCmd, Resolution};
use crate::error::CliError;
use crate::output::{json_text, parse_floats, read, sig, usage, write_with_manifest};

pub fn run(cmd: PrescribeCmd, argv: &[String]) -> Result<(), CliError> {
    match cmd {
        PrescribeCmd::Build(a) => {
            let omega = PrescribedMeasure::from_json(&read(&a.input)?)?;
            let metric = build_alexandrov_metric(&omega)?;
            let bg = omega.background;
            println!("background: {bg:?}");
            println!("total curvature: {}", sig(omega.total_mass()));
            for atom in &omega.atoms {
                println!("  cone angle {} at {:?}", sig(2.0 * PI - atom.mass), atom.point);
            }
            if a.samples < 2 {
                return Err(usage("--samples must be at least 2"));
            }
            let csv = factor_csv(&metric, a.samples);
            if let Some(out) = &a.out {
                write_with_manifest(out, &csv, "prescribe build", &a, argv, json!({ "background": bg }))?;
            }
            Ok(())
        }
        PrescribeCmd::Distance(a) => {
            let omega = PrescribedMeasure::from_json(&read(&a.input)?)?;
            let metric = build_alexandrov_metric(&omega)?;
            let bg = omega.background;
            let x = background_point(bg, &a.from)?;
            let y = background_point(bg, &a.to)?;
            let graph = MetricGraph::build(&metric, resolution(bg, &a.resolution))?;
            let d = graph.distance(x, y)?;
            println!("distance: {}", sig(d));
            if let Some(out) = &a.out {
                let report = json!({ "from": x, "to": y, "distance": d });
                write_with_manifest(out, &json_text(&report), "prescribe distance", &a, argv, json!({}))?;
            }
            Ok(())
        }
        PrescribeCmd::Verify(a) => {
            let omega = PrescribedMeasure::from_json(&read(&a.input)?)?;
            let bg = omega.background;
            let residual = gauss_bonnet_residual(&omega.to_curvature_measure(), bg.euler_characteristic(), None);
            println!("gauss-bonnet residual: {}", sig(residual));
            let metric = build_alexandrov_metric(&omega)?;
            let graph = MetricGraph::build(&metric, resolution(bg, &a.resolution))?;
            let mut probes = Vec::new();
            let mut ok = true;
            for atom in &omega.atoms {
                let probe = MetricCircle::new(&graph, atom.point)?;
                let radius = 0.1 * probe.radius_limit();
                let ratio = geodesic_circle_length(&probe, radius, a.rays)? / radius;
                let expected = 2.0 * PI - atom.mass;
                let rel = (ratio - expected).abs() / expected;
                let pass = rel <= a.tolerance;
                ok &= pass;
                println!(
                    "  atom at {:?}: circle ratio {} expected {} ({})",
                    atom.point,
                    sig(ratio),
                    sig(expected),
                    if pass { "ok" } else { "FAIL" }
                );
                probes.push(json!({ "point": atom.point, "ratio": ratio, "expected": expected, "pass": pass }));
            }
            if let Some(out) = &a.out {
                let report = json!({ "gauss_bonnet_residual": residual, "probes": probes, "pass": ok });
                write_with_manifest(out, &json_text(&report), "prescribe verify", &a, argv, json!({}))?;
            }
            if ok {
                Ok(())
            } else {
                Err(CliError::Domain("VerificationFailed: a probed cone angle is out of tolerance".into()))
            }
        }
    }
}

fn resolution(bg: Background, r: &Resolution) -> GraphResolution {
    match bg {
        Background::Torus => GraphResolution::TorusGrid(r.grid),
        Background::Sphere => GraphResolution::Icosphere(r.level),
    }
}

fn background_point(bg: Background, text: &str) -> Result<[f64; 3], CliError> {
    let v = parse_floats(text)?;
    match (bg, v.len()) {
        (Background::Torus, 2) => Ok([v[0], v[1], 0.0]),
        (Background::Sphere, 3) => Ok([v[0], v[1], v[2]]),
        _ => Err(usage(format!("point '{text}' needs 2 coordinates on the torus, 3 on the sphere"))),
    }
}

/// `log e^u` sampled on a torus grid or a latitude-longitude grid.
fn factor_csv(metric: &alexandrov::potential::SingularMetric, n: usize) -> String {
    let mut out = String::new();
    match metric.background() {
        Background::Torus => {
            out.push_str("x,y,u\n");
            for j in 0..n {
                for i in 0..n {
                    let p = [i as f64 / n as f64, j as f64 / n as f64, 0.0];
                    let _ = writeln!(out, "{},{},{}", sig(p[0]), sig(p[1]), sig(metric.potential.value(p)));
                }
            }
        }
        Background::Sphere => {
            out.push_str("theta,phi,u\n");
            for i in 0..=n {
                let theta = PI * i as f64 / n as f64;
                let cols = if i == 0 || i == n { 1 } else { 2 * n };
                for j in 0..cols {
                    let phi = 2.0 * PI * j as f64 / (2 * n) as f64;
                    let p = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
                    let _ = writeln!(out, "{},{},{}", sig(theta), sig(phi), sig(metric.potential.value(p)));
                }
            }
        }
    }
    out
}
