//! Area quadrature on the backgrounds with nodes graded toward one point,
//! for integrands with a logarithmic singularity there.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::Background;
use crate::curvature::{orthonormal_frame, Point};
use crate::quadrature::{gauss_legendre, NeumaierSum};

/// Radial dyadic levels toward the centre point.
const RADIAL_LEVELS: i32 = 34;

/// `∫ f dA` over the whole background with quadrature nodes clustered at
/// `x`. `resolution` sets the number of angular and outer radial panels.
pub fn centered_integral(
    background: Background,
    x: Point,
    f: &(dyn Fn(Point) -> f64 + Sync),
    resolution: usize,
) -> f64 {
    let resolution = resolution.max(1);
    match background {
        Background::Torus => torus(x, f, resolution),
        Background::Sphere => sphere(x, f, resolution),
    }
}

/// Radial panels on `[0, 1]`: dyadic toward 0, the outer ones split further.
fn radial_panels(resolution: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut outer = 1.0f64;
    for level in 0..RADIAL_LEVELS {
        let inner = 0.5 * outer;
        let split = (resolution >> level).max(1);
        for k in 0..split {
            let a = inner + (outer - inner) * k as f64 / split as f64;
            let b = inner + (outer - inner) * (k + 1) as f64 / split as f64;
            out.push((a, b));
        }
        outer = inner;
    }
    out
}

/// Duffy split of the unit square centred at `x` into four triangles with a
/// common apex at `x`; the radial Jacobian absorbs the log singularity.
fn torus(x: Point, f: &(dyn Fn(Point) -> f64 + Sync), resolution: usize) -> f64 {
    let corners: [[f64; 2]; 4] = [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]];
    let rule = gauss_legendre(12);
    let radial = radial_panels(resolution);
    let angular = 2 * resolution;
    let parts: Vec<f64> = (0..4 * angular)
        .into_par_iter()
        .map(|job| {
            let (tri, panel) = (job / angular, job % angular);
            let c0 = corners[tri];
            let c1 = corners[(tri + 1) % 4];
            let e = [c1[0] - c0[0], c1[1] - c0[1]];
            let jac = (c0[0] * e[1] - c0[1] * e[0]).abs();
            let (ta, tb) = (panel as f64 / angular as f64, (panel + 1) as f64 / angular as f64);
            let mut sum = NeumaierSum::default();
            for &(sa, sb) in &radial {
                sum.add(rule.integrate(sa, sb, |s| {
                    rule.integrate(ta, tb, |t| {
                        let r = [s * (c0[0] + t * e[0]), s * (c0[1] + t * e[1])];
                        let y = [(x[0] + r[0]).rem_euclid(1.0), (x[1] + r[1]).rem_euclid(1.0), 0.0];
                        f(y) * s * jac
                    })
                }));
            }
            sum.value()
        })
        .collect();
    crate::quadrature::sum(parts)
}

/// Geodesic polar coordinates around `x`; the azimuth uses the periodic
/// trapezoid rule.
fn sphere(x: Point, f: &(dyn Fn(Point) -> f64 + Sync), resolution: usize) -> f64 {
    let (u, v) = orthonormal_frame(x);
    let rule = gauss_legendre(12);
    let mut panels: Vec<(f64, f64)> =
        radial_panels(resolution).into_iter().map(|(a, b)| (0.5 * PI * a, 0.5 * PI * b)).collect();
    for k in 0..resolution {
        let a = 0.5 * PI + 0.5 * PI * k as f64 / resolution as f64;
        panels.push((a, a + 0.5 * PI / resolution as f64));
    }
    let azimuth = 16 * resolution;
    let parts: Vec<f64> = panels
        .par_iter()
        .map(|&(ta, tb)| {
            rule.integrate(ta, tb, |t| {
                let (ct, st) = (t.cos(), t.sin());
                let mut ring = NeumaierSum::default();
                for j in 0..azimuth {
                    let phi = 2.0 * PI * j as f64 / azimuth as f64;
                    let (cp, sp) = (phi.cos(), phi.sin());
                    let y = [
                        ct * x[0] + st * (cp * u[0] + sp * v[0]),
                        ct * x[1] + st * (cp * u[1] + sp * v[1]),
                        ct * x[2] + st * (cp * u[2] + sp * v[2]),
                    ];
                    ring.add(f(y));
                }
                ring.value() * 2.0 * PI / azimuth as f64 * st
            })
        })
        .collect();
    crate::quadrature::sum(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn areas() {
        let one = |_: Point| 1.0;
        assert!((centered_integral(Background::Torus, [0.3, 0.9, 0.0], &one, 4) - 1.0).abs() < 1e-13);
        assert!((centered_integral(Background::Sphere, [0.0, 0.6, 0.8], &one, 4) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn smooth_integrands() {
        let f = |y: Point| (2.0 * PI * y[0]).cos().powi(2) * (2.0 * PI * y[1]).sin().powi(2);
        assert!((centered_integral(Background::Torus, [0.1, 0.2, 0.0], &f, 8) - 0.25).abs() < 1e-12);
        let g = |y: Point| y[2] * y[2];
        let got = centered_integral(Background::Sphere, [0.6, 0.0, 0.8], &g, 8);
        assert!((got - 4.0 * PI / 3.0).abs() < 1e-12);
    }
}
