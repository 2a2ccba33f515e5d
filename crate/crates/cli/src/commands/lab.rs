use std::f64::consts::PI;

use alexandrov::convergence::{
    dictionary, lantern_report, lantern_table, reshetnyak_experiment, weak_distance, LanternRows, LanternSpec,
    ReshetnyakConfig, DICTIONARY_VERSION,
};
use alexandrov::potential::{one_cone_torus, Background, GraphResolution, PrescribedMeasure};
use serde_json::json;

use crate::args::{LabCmd, RowsArg};
use crate::error::CliError;
use crate::output::{json_text, parse_ladder, read, sig, usage, write_with_manifest};

/// Lanterns beyond this many faces get their area only; the intrinsic
/// curvature check needs the full surface.
const LANTERN_SURFACE_LIMIT: usize = 4_000_000;

pub fn run(cmd: LabCmd, argv: &[String]) -> Result<(), CliError> {
    match cmd {
        LabCmd::Lantern(a) => {
            let ns: Vec<usize> = parse_ladder(&a.ladder, "n")?
                .into_iter()
                .map(|x| {
                    if x.fract() == 0.0 && x >= 3.0 {
                        Ok(x as usize)
                    } else {
                        Err(usage(format!("ladder entry {x} is not an integer >= 3")))
                    }
                })
                .collect::<Result<_, _>>()?;
            let rows = match a.rows {
                RowsArg::Equal => LanternRows::Equal,
                RowsArg::Cubic => LanternRows::Cubic,
            };
            let table = lantern_table(a.r, a.h, &ns, rows)?;
            println!("{:>8} {:>16} {:>16}  gauss-bonnet residual", "n", "area", "cylinder");
            let mut residuals = Vec::new();
            for (row, &n) in table.rows.iter().zip(&ns) {
                let spec = LanternSpec { n, m: rows.rows_for(n), r: a.r, h: a.h };
                let residual = if 2 * spec.n * spec.m <= LANTERN_SURFACE_LIMIT {
                    Some(lantern_report(spec)?.gauss_bonnet_residual)
                } else {
                    None
                };
                residuals.push(residual);
                println!(
                    "{:>8} {:>16} {:>16}  {}",
                    n,
                    sig(row.measured),
                    sig(row.target),
                    residual.map(sig).unwrap_or_else(|| "skipped".into())
                );
            }
            if let Some(out) = &a.out {
                let details = json!({ "rows": rows, "gauss_bonnet_residuals": residuals });
                write_with_manifest(out, &table.to_csv(), "lab lantern", &a, argv, details)?;
            }
            Ok(())
        }
        LabCmd::Reshetnyak(a) => {
            let omega = match &a.input {
                Some(p) => PrescribedMeasure::from_json(&read(p)?)?,
                None => one_cone_torus([0.5, 0.5, 0.0], PI),
            };
            let config = ReshetnyakConfig {
                epsilons: parse_ladder(&a.ladder, "eps")?,
                resolution: match omega.background {
                    Background::Torus => GraphResolution::TorusGrid(a.grid),
                    Background::Sphere => GraphResolution::Icosphere(a.level),
                },
                samples: a.samples,
                seed: a.seed,
                weak_resolution: alexandrov::convergence::DEFAULT_WEAK_RESOLUTION,
            };
            let report = reshetnyak_experiment(&omega, &config)?;
            println!("{:>12} {:>16} {:>16}", "epsilon", "uniform", "weak");
            for (u, w) in report.uniform.rows.iter().zip(&report.weak.rows) {
                println!("{:>12} {:>16} {:>16}", sig(u.parameter), sig(u.measured), sig(w.measured));
            }
            println!(
                "uniform column strictly decreasing: {}; weak column strictly decreasing: {}",
                report.uniform.strictly_decreasing(),
                report.weak.strictly_decreasing()
            );
            if let Some(out) = &a.out {
                let details = json!({
                    "config": config,
                    "dictionary_version": DICTIONARY_VERSION,
                    "target": omega,
                    "sample_points": report.sample_points,
                });
                write_with_manifest(out, &report.to_csv(), "lab reshetnyak", &a, argv, details)?;
            }
            Ok(())
        }
        LabCmd::WeakDistance(a) => {
            let m1 = PrescribedMeasure::from_json(&read(&a.a)?)?;
            let m2 = PrescribedMeasure::from_json(&read(&a.b)?)?;
            if m1.background != m2.background {
                return Err(CliError::Domain("BadInput: the measures live on different backgrounds".into()));
            }
            let dict = dictionary(m1.background, a.seed);
            let d = weak_distance(&m1.to_curvature_measure(), &m2.to_curvature_measure(), &dict, a.resolution)?;
            println!("weak distance: {}", sig(d));
            if let Some(out) = &a.out {
                let report = json!({ "weak_distance": d, "dictionary_version": DICTIONARY_VERSION });
                let details = json!({ "dictionary_version": DICTIONARY_VERSION });
                write_with_manifest(out, &json_text(&report), "lab weak-distance", &a, argv, details)?;
            }
            Ok(())
        }
    }
}
