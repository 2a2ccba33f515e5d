//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod support;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use alexandrov::conformal::{make_example_metric, ChartPoint, ConformalCircle, ConformalGraph, ExampleKind, GridSpec};
use alexandrov::convergence::{lantern_report, reshetnyak_experiment, LanternSpec, ReshetnyakConfig};
use alexandrov::curvature::{
    bump_profile, flat_bump_normalization, gauss_bonnet_residual, sphere_bump_normalization, tin_can,
    vertex_curvature_atoms,
};
use alexandrov::geodesics::{geodesic_circle_length, CircleProbe, GeodesicSolver, SurfacePoint, DEFAULT_LEVEL};
use alexandrov::mesh::presets;
use alexandrov::potential::{
    build_alexandrov_metric, centered_integral, football, one_cone_torus, potential_of_measure, Background,
    GraphResolution, MetricCircle, MetricGraph, PrescribedMeasure, SmoothPart,
};
use support::*;

type Check = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("cube gauss-bonnet", 1, cube_gauss_bonnet),
        ("tin-can measure", 1, tin_can_measure),
        ("glued-disks gallery", 30, glued_disks),
        ("cone identity chain", 60, cone_chain),
        ("schwarz lantern", 60, schwarz_lantern),
        ("green function properties", 60, green_properties),
        ("weak laplace identity", 120, weak_laplace),
        ("football construction", 120, football_construction),
        ("reshetnyak experiment", 600, reshetnyak),
        ("geodesic oracle agreement", 60, geodesic_oracles),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > Duration::from_secs(limit) => {
                Err(format!("{detail}; runtime {elapsed:.1?} exceeds {limit} s"))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn cube_gauss_bonnet() -> Check {
    let cube = presets::unit_cube();
    let atoms = vertex_curvature_atoms(&cube);
    ensure(atoms.atoms.len() == 8, format!("{} atoms", atoms.atoms.len()))?;
    let worst = atoms.atoms.iter().map(|a| (a.mass - PI / 2.0).abs()).fold(0.0, f64::max);
    ensure(worst < 1e-14, format!("atom off π/2 by {worst:e}"))?;
    let total = atoms.total_mass();
    ensure((total - 4.0 * PI).abs() < 1e-12, format!("total {total}"))?;
    let residual = gauss_bonnet_residual(&atoms, cube.euler_characteristic(), None);
    ensure(residual.abs() < 1e-12, format!("residual {residual:e}"))?;
    Ok(format!("8 atoms π/2, total {total:.12}, residual {residual:.1e}"))
}

fn tin_can_measure() -> Check {
    let mut worst: f64 = 0.0;
    for (r, h) in [(1.0, 1.0), (0.3, 2.0), (5.0, 0.1)] {
        let m = tin_can(r, h).map_err(|e| e.to_string())?;
        ensure(m.edge_parts.len() == 2, "two rims")?;
        ensure(m.edge_parts.iter().all(|p| p.density == 1.0 / r), "density 1/r")?;
        worst = worst.max((m.total_mass() - 4.0 * PI).abs());
    }
    ensure(worst < 1e-13, format!("total off 4π by {worst:e}"))?;
    Ok(format!("total 4π within {worst:.1e} for three cans"))
}

fn glued_disks() -> Check {
    let m = make_example_metric(ExampleKind::GluedDisks).map_err(|e| e.to_string())?;
    let declared = m.declared.clone().ok_or("no declared measure")?;
    let seam = declared.measure.edge_parts.first().ok_or("no edge part")?;
    ensure(seam.density == 2.0, format!("density {}", seam.density))?;
    ensure((declared.measure.total_mass() - 4.0 * PI).abs() < 1e-12, "total 4π")?;
    let mut last = 0.0;
    for per_unit in [8, 16, 32] {
        let spec = GridSpec::centered(1.25, (2.5 * per_unit as f64).round() as usize + 1);
        let graph = ConformalGraph::build(&m, spec);
        last = graph.distance(&ChartPoint::near(0.0, 0.0), &ChartPoint::far(0.0, 0.0)).map_err(|e| e.to_string())?;
        ensure((last - 2.0).abs() < 0.02, format!("distance {last} at {per_unit} nodes per unit"))?;
    }
    Ok(format!("density 2, total 4π, center-to-center {last:.6}"))
}

fn cone_chain() -> Check {
    let mut notes = Vec::new();
    for theta in [PI / 2.0, PI, 1.5 * PI] {
        let m = make_example_metric(ExampleKind::Cone { theta }).map_err(|e| e.to_string())?;
        let beta = theta / (2.0 * PI) - 1.0;
        let declared = m.declared.clone().ok_or("no declared measure")?;
        ensure((declared.measure.total_mass() - (2.0 * PI - theta)).abs() < 1e-12, "apex atom")?;
        let spec = GridSpec::centered(1.25, 81);
        let graph = ConformalGraph::build(&m, spec);
        let target = ChartPoint::near(0.6, 0.3);
        let d = graph.distance(&ChartPoint::near(0.0, 0.0), &target).map_err(|e| e.to_string())?;
        let exact = cone_apex_distance(beta, 0.45f64.sqrt());
        ensure((d - exact).abs() < 0.01 * exact, format!("θ={theta:.4}: apex distance {d} vs {exact}"))?;
        let probe = ConformalCircle::new(&graph, ChartPoint::near(0.0, 0.0)).map_err(|e| e.to_string())?;
        let radius = 0.1 * probe.radius_limit();
        let ratio = geodesic_circle_length(&probe, radius, 256).map_err(|e| e.to_string())? / radius;
        ensure((ratio - theta).abs() < 0.02 * theta, format!("θ={theta:.4}: circle ratio {ratio}"))?;
        notes.push(format!("β={beta:.2} d/d*={:.5} L/r/θ={:.5}", d / exact, ratio / theta));
    }
    Ok(notes.join("; "))
}

fn schwarz_lantern() -> Check {
    let (r, h) = (1.0, 1.0);
    let cylinder = 2.0 * PI * r * h;
    let mut worst_residual: f64 = 0.0;
    let mut equal = Vec::new();
    for n in [8, 16, 32, 64] {
        let rep = lantern_report(LanternSpec { n, m: n, r, h }).map_err(|e| e.to_string())?;
        let oracle = lantern_area_oracle(n, n, r, h);
        ensure((rep.area - oracle).abs() < 1e-9 * oracle, format!("n={n}: area {} vs {oracle}", rep.area))?;
        worst_residual = worst_residual.max(rep.gauss_bonnet_residual.abs());
        equal.push(rep.area);
    }
    let err64 = (equal[3] - cylinder).abs() / cylinder;
    ensure(err64 < 0.005, format!("m=n=64 area off by {:.3}%", 100.0 * err64))?;
    let mut cubic = Vec::new();
    for n in [4, 8, 16, 32] {
        let rep = lantern_report(LanternSpec { n, m: n * n * n, r, h }).map_err(|e| e.to_string())?;
        let oracle = lantern_area_oracle(n, n * n * n, r, h);
        ensure((rep.area - oracle).abs() < 1e-9 * oracle, format!("n={n}: cubic area {} vs {oracle}", rep.area))?;
        worst_residual = worst_residual.max(rep.gauss_bonnet_residual.abs());
        cubic.push(rep.area);
    }
    ensure(cubic.windows(2).all(|w| w[1] > w[0]), format!("cubic areas not increasing: {cubic:?}"))?;
    ensure(cubic[3] > 10.0 * cylinder, format!("n=32 cubic area {}", cubic[3]))?;
    ensure(worst_residual < 1e-9, format!("gauss-bonnet residual {worst_residual:e}"))?;
    Ok(format!(
        "m=n=64 off {:.3}%, m=n³ n=32 area {:.2} = {:.1}× cylinder, worst residual {worst_residual:.1e}",
        100.0 * err64,
        cubic[3],
        cubic[3] / cylinder
    ))
}

fn background_points(bg: Background, n: usize, seed: u64) -> Vec<P3> {
    match bg {
        Background::Torus => torus_points(n, seed),
        Background::Sphere => sphere_points(n, seed),
    }
}

fn green_oracle(bg: Background, x: P3, y: P3) -> f64 {
    match bg {
        Background::Torus => torus_green_oracle(x, y),
        Background::Sphere => sphere_green_oracle(x, y),
    }
}

fn green_properties() -> Check {
    let mut sym: f64 = 0.0;
    let mut oracle: f64 = 0.0;
    let mut mean: f64 = 0.0;
    let mut spread: f64 = 0.0;
    let mut trip: f64 = 0.0;
    for bg in [Background::Torus, Background::Sphere] {
        let xs = background_points(bg, 1000, 11);
        let ys = background_points(bg, 1000, 12);
        for (&x, &y) in xs.iter().zip(&ys) {
            let gxy = bg.green(x, y).map_err(|e| e.to_string())?;
            let gyx = bg.green(y, x).map_err(|e| e.to_string())?;
            sym = sym.max((gxy - gyx).abs());
            oracle = oracle.max((gxy - green_oracle(bg, x, y)).abs());
        }
        for &x in &xs[..4] {
            let g = |y: P3| bg.green(x, y).unwrap_or(0.0);
            mean = mean.max(centered_integral(bg, x, &g, 16).abs());
        }
        for &x in &xs[..8] {
            let phi = 2.0 * PI * x[0];
            let values: Vec<f64> = (0..=50)
                .map(|k| {
                    let d = 1e-6 * 1e5f64.powf(k as f64 / 50.0);
                    bg.green(x, bg.exp(x, phi, d)).map(|g| g + d.ln() / (2.0 * PI))
                })
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            ensure(values.iter().all(|v| v.is_finite()), "non-finite log-corrected value")?;
            let (lo, hi) = values.iter().fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
            spread = spread.max(hi - lo);
        }
        for (u0, lap) in smooth_functions(bg) {
            for &x in &xs[..3] {
                let f = |y: P3| bg.green(x, y).unwrap_or(0.0) * lap(y);
                trip = trip.max((centered_integral(bg, x, &f, 16) - u0(x)).abs());
            }
        }
    }
    ensure(sym < 1e-10, format!("symmetry {sym:e}"))?;
    ensure(oracle < 1e-10, format!("oracle discrepancy {oracle:e}"))?;
    ensure(mean < 1e-6, format!("mean {mean:e}"))?;
    ensure(spread < 0.05, format!("log-corrected spread {spread}"))?;
    ensure(trip < 1e-5, format!("round trip {trip:e}"))?;
    Ok(format!(
        "symmetry {sym:.1e}, oracle {oracle:.1e}, mean {mean:.1e}, log spread {spread:.1e}, round trip {trip:.1e}"
    ))
}

type Fun = Box<dyn Fn(P3) -> f64 + Sync>;

/// Zero-mean smooth functions with their Laplacians `−∇²u`.
fn smooth_functions(bg: Background) -> Vec<(Fun, Fun)> {
    let tau = 2.0 * PI;
    match bg {
        Background::Torus => vec![
            (Box::new(move |p: P3| (tau * p[0]).cos()), Box::new(move |p: P3| tau * tau * (tau * p[0]).cos())),
            (
                Box::new(move |p: P3| (tau * (p[0] + 2.0 * p[1])).sin()),
                Box::new(move |p: P3| 5.0 * tau * tau * (tau * (p[0] + 2.0 * p[1])).sin()),
            ),
            (
                Box::new(move |p: P3| (tau * p[0]).cos() * (2.0 * tau * p[1]).cos() + 0.5 * (tau * p[1]).sin()),
                Box::new(move |p: P3| {
                    5.0 * tau * tau * (tau * p[0]).cos() * (2.0 * tau * p[1]).cos()
                        + 0.5 * tau * tau * (tau * p[1]).sin()
                }),
            ),
        ],
        Background::Sphere => vec![
            (Box::new(|p: P3| p[2]), Box::new(|p: P3| 2.0 * p[2])),
            (Box::new(|p: P3| p[0] * p[1]), Box::new(|p: P3| 6.0 * p[0] * p[1])),
            (
                Box::new(|p: P3| p[2] * (5.0 * p[2] * p[2] - 3.0)),
                Box::new(|p: P3| 12.0 * p[2] * (5.0 * p[2] * p[2] - 3.0)),
            ),
        ],
    }
}

/// Eigenfunctions of `−∇²` with their eigenvalues.
fn eigenfunctions(bg: Background) -> Vec<(Fun, f64)> {
    let tau = 2.0 * PI;
    match bg {
        Background::Torus => {
            let mut out: Vec<(Fun, f64)> = Vec::new();
            for (a, b) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -2.0)] {
                let lambda = tau * tau * (a * a + b * b);
                out.push((Box::new(move |p: P3| (tau * (a * p[0] + b * p[1])).cos()), lambda));
                out.push((Box::new(move |p: P3| (tau * (a * p[0] + b * p[1])).sin()), lambda));
            }
            out
        }
        Background::Sphere => vec![
            (Box::new(|p: P3| p[0]), 2.0),
            (Box::new(|p: P3| p[1]), 2.0),
            (Box::new(|p: P3| p[2]), 2.0),
            (Box::new(|p: P3| p[0] * p[1]), 6.0),
            (Box::new(|p: P3| p[1] * p[2]), 6.0),
            (Box::new(|p: P3| p[0] * p[0] - p[1] * p[1]), 6.0),
            (Box::new(|p: P3| 3.0 * p[2] * p[2] - 1.0), 6.0),
            (Box::new(|p: P3| p[2] * (5.0 * p[2] * p[2] - 3.0)), 12.0),
        ],
    }
}

fn weak_measures() -> Vec<PrescribedMeasure> {
    vec![
        one_cone_torus([0.5, 0.5, 0.0], PI),
        PrescribedMeasure::new(Background::Torus)
            .with_atom([0.8, 0.1, 0.0], -1.0)
            .with_smooth(SmoothPart::Bump { center: [0.3, 0.6, 0.0], radius: 0.2, mass: 1.5 })
            .with_smooth(SmoothPart::Uniform(-0.5)),
        PrescribedMeasure::new(Background::Sphere)
            .with_atom([0.0, 0.0, 1.0], 1.0)
            .with_atom([1.0, 0.0, 0.0], -0.5)
            .with_smooth(SmoothPart::Bump { center: [0.0, -0.6, -0.8], radius: 0.5, mass: -0.5 }),
    ]
}

/// `∫ φ ρ dA` for the normalized bump `ρ`, in geodesic polar coordinates
/// about its centre.
fn bump_integral(bg: Background, center: P3, radius: f64, phi: &Fun) -> f64 {
    let norm = match bg {
        Background::Torus => flat_bump_normalization(radius),
        Background::Sphere => sphere_bump_normalization(radius),
    };
    let (nodes, weights) = gauss_legendre_nodes(48);
    let angles = 96;
    let mut sum = 0.0;
    for (&x, &w) in nodes.iter().zip(&weights) {
        let t = 0.5 * radius * (x + 1.0);
        let jacobian = match bg {
            Background::Torus => t,
            Background::Sphere => t.sin(),
        };
        let ring: f64 =
            (0..angles).map(|k| phi(bg.exp(center, 2.0 * PI * k as f64 / angles as f64, t))).sum::<f64>() * 2.0 * PI
                / angles as f64;
        sum += 0.5 * radius * w * jacobian * bump_profile(t / radius) * ring;
    }
    norm * sum
}

fn weak_laplace() -> Check {
    let mut worst: f64 = 0.0;
    for mu in weak_measures() {
        let bg = mu.background;
        let resolution = match bg {
            Background::Torus => 8,
            Background::Sphere => 16,
        };
        let u = potential_of_measure(&mu).map_err(|e| e.to_string())?;
        let sites: Vec<P3> = mu.atoms.iter().map(|a| a.point).collect();
        let mut sep = f64::INFINITY;
        for (i, &p) in sites.iter().enumerate() {
            for &q in &sites[i + 1..] {
                sep = sep.min(bg.distance(p, q));
            }
        }
        let cut = (0.4 * sep).min(0.2);
        let weight = |y: P3, p: P3| {
            let s = bg.distance(p, y) / cut;
            if s >= 1.0 {
                0.0
            } else {
                (1.0 - s * s).powi(8)
            }
        };
        for (phi, lambda) in eigenfunctions(bg) {
            // ∫ u Δφ split by a partition of unity around the atoms so every
            // piece has its singularity at the quadrature centre.
            let mut lhs = 0.0;
            for &p in &sites {
                let f = |y: P3| weight(y, p) * u.value(y) * lambda * phi(y);
                lhs += centered_integral(bg, p, &f, resolution);
            }
            let rest = |y: P3| {
                let w: f64 = sites.iter().map(|&p| weight(y, p)).sum();
                (1.0 - w) * u.value(y) * lambda * phi(y)
            };
            lhs += centered_integral(bg, sites.first().copied().unwrap_or([0.0; 3]), &rest, resolution);
            let mut rhs: f64 = mu.atoms.iter().map(|a| a.mass * phi(a.point)).sum();
            for part in &mu.smooth {
                if let SmoothPart::Bump { center, radius, mass } = *part {
                    rhs += mass * bump_integral(bg, center, radius, &phi);
                }
            }
            worst = worst.max((lhs - rhs).abs());
        }
    }
    ensure(worst < 1e-5, format!("worst discrepancy {worst:e}"))?;
    Ok(format!("8 test functions × 3 measures, worst discrepancy {worst:.1e}"))
}

fn football_construction() -> Check {
    let theta = PI;
    let omega = football(theta);
    let total = omega.total_mass();
    ensure((total - 4.0 * PI).abs() < 1e-12, format!("total {total}"))?;
    let residual = gauss_bonnet_residual(&omega.to_curvature_measure(), 2, None);
    ensure(residual.abs() < 1e-10, format!("residual {residual:e}"))?;
    let metric = build_alexandrov_metric(&omega).map_err(|e| e.to_string())?;
    let graph = MetricGraph::build(&metric, GraphResolution::Icosphere(4)).map_err(|e| e.to_string())?;
    let mut ratios = Vec::new();
    for pole in [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]] {
        let probe = MetricCircle::new(&graph, pole).map_err(|e| e.to_string())?;
        let radius = 0.1 * probe.radius_limit();
        let ratio = geodesic_circle_length(&probe, radius, 64).map_err(|e| e.to_string())? / radius;
        ensure((ratio - theta).abs() < 0.02 * theta, format!("pole {pole:?}: ratio {ratio}"))?;
        ratios.push(ratio);
    }
    let c = 0.7;
    let scaled = metric.scaled_by_exp(c);
    let scaled_graph = MetricGraph::build(&scaled, GraphResolution::Icosphere(4)).map_err(|e| e.to_string())?;
    let points = sphere_points(6, 21);
    let a = graph.pairwise(&points).map_err(|e| e.to_string())?;
    let b = scaled_graph.pairwise(&points).map_err(|e| e.to_string())?;
    let mut homothety: f64 = 0.0;
    for (ra, rb) in a.iter().zip(&b) {
        for (&da, &db) in ra.iter().zip(rb) {
            if da > 0.0 {
                homothety = homothety.max((db / (c.exp() * da) - 1.0).abs());
            }
        }
    }
    ensure(homothety < 1e-9, format!("homothety error {homothety:e}"))?;
    Ok(format!("total 4π, circle ratios {:.5} {:.5}, homothety error {homothety:.1e}", ratios[0], ratios[1]))
}

fn reshetnyak() -> Check {
    let omega = one_cone_torus([0.5, 0.5, 0.0], PI);
    let config = ReshetnyakConfig::default_for(Background::Torus);
    ensure(config.epsilons == [0.25, 0.125, 0.0625], "ladder 1/4, 1/8, 1/16")?;
    let report = reshetnyak_experiment(&omega, &config).map_err(|e| e.to_string())?;
    let (u, w) = (report.uniform.measured(), report.weak.measured());
    ensure(report.uniform.strictly_decreasing(), format!("uniform column {u:?}"))?;
    ensure(report.weak.strictly_decreasing(), format!("weak column {w:?}"))?;
    Ok(format!("uniform {u:.4?}, weak {w:.4?}"))
}

/// Point of the unit square torus preset at fundamental-square coordinates.
fn torus_surface_point(surface: &alexandrov::mesh::ConeSurface, p: P3) -> SurfacePoint {
    let (x, y) = (p[0], p[1]);
    let result = if x >= y {
        SurfacePoint::new(surface, 0, [1.0 - x, x - y, y])
    } else {
        SurfacePoint::new(surface, 1, [1.0 - y, x, y - x])
    };
    result.expect("point inside its face")
}

fn geodesic_oracles() -> Check {
    let cube = presets::unit_cube();
    let solver = GeodesicSolver::new(&cube);
    let (a, b) = (SurfacePoint::at_vertex(&cube, 0), SurfacePoint::at_vertex(&cube, 7));
    let oracle = unfolding_distance(&cube, &a.representations(&cube), &b.representations(&cube), 4);
    ensure((oracle - 5f64.sqrt()).abs() < 1e-12, format!("oracle {oracle}"))?;
    let d = solver.distance(&a, &b, DEFAULT_LEVEL).map_err(|e| e.to_string())?;
    ensure((d - oracle).abs() < 1e-4, format!("cube diagonal {d}"))?;
    let torus = presets::square_torus(1.0).map_err(|e| e.to_string())?;
    let solver = GeodesicSolver::new(&torus);
    let xs = torus_points(20, 31);
    let ys = torus_points(20, 32);
    let mut worst: f64 = 0.0;
    for (&x, &y) in xs.iter().zip(&ys) {
        let d = solver
            .distance(&torus_surface_point(&torus, x), &torus_surface_point(&torus, y), DEFAULT_LEVEL)
            .map_err(|e| e.to_string())?;
        let exact = flat_torus_distance([x[0], x[1]], [y[0], y[1]], 1.0);
        worst = worst.max((d - exact).abs() / exact);
    }
    ensure(worst < 0.01, format!("torus relative error {worst}"))?;
    Ok(format!("cube diagonal {d:.9} (oracle √5), torus worst relative error {worst:.1e}"))
}
