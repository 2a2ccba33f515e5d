//! Potentials of the normalized bump densities, `∫ G(x, y) ψ_ε(y − p) dA(y)`.

use std::f64::consts::PI;

use super::green::{chord, torus_offset, torus_regular_part};
use crate::curvature::{bump_profile, sphere_bump_normalization, Point};
use crate::quadrature::{gauss_legendre, NeumaierSum};

/// Largest bump radius accepted on the unit square torus.
pub const MAX_TORUS_BUMP_RADIUS: f64 = 0.25;
/// Largest bump radius accepted on the unit sphere.
pub const MAX_SPHERE_BUMP_RADIUS: f64 = PI / 2.0;

/// Potential at `x` of the unit-mass flat bump of radius `eps` centred at `p`
/// on the square torus.
///
/// Outside the support it equals `G(x, p) + ε²/20`; inside, the logarithm is
/// replaced by its radial average, which is polynomial in `a = (s/ε)²`.
pub fn torus_bump_potential(x: Point, p: Point, eps: f64) -> f64 {
    let r = torus_offset(x, p);
    let s = r[0].hypot(r[1]);
    let second_moment = eps * eps / 5.0;
    let regular = torus_regular_part(r) + second_moment / 4.0;
    if s >= eps {
        return regular - s.ln() / (2.0 * PI);
    }
    let a = (s / eps) * (s / eps);
    let poly = -4.0 * (1.0 - a) + 3.0 * (1.0 - a * a) - 4.0 / 3.0 * (1.0 - a * a * a) + 0.25 * (1.0 - a * a * a * a);
    regular - eps.ln() / (2.0 * PI) - poly / (4.0 * PI)
}

/// Potential at `x` of the unit-mass bump of geodesic radius `eps` centred at
/// `p` on the unit sphere.
///
/// Uses the circle mean of `ln|x − y|` over the circle of radius `t` around
/// `p`, which is `ln(2 sin(max(d, t)/2)) + ln cos(min(d, t)/2)` for `x` at
/// distance `d` from `p`.
pub fn sphere_bump_potential(x: Point, p: Point, eps: f64) -> f64 {
    let c = chord(x, p).min(2.0);
    let d = 2.0 * (0.5 * c).asin();
    let norm = sphere_bump_normalization(eps);
    let mean_log = |t: f64| {
        let (big, small) = if t > d { (t, d) } else { (d, t) };
        (2.0 * (0.5 * big).sin()).ln() + (0.5 * small).cos().ln()
    };
    let integrand = |t: f64| {
        let g = -(mean_log(t) - 2f64.ln() + 0.5) / (2.0 * PI);
        norm * bump_profile(t / eps) * 2.0 * PI * t.sin() * g
    };
    let rule = gauss_legendre(24);
    let mut sum = NeumaierSum::default();
    let panels = 8;
    let mut knots: Vec<f64> = (0..=panels).map(|k| eps * k as f64 / panels as f64).collect();
    if d > 0.0 && d < eps {
        knots.push(d);
        knots.sort_by(f64::total_cmp);
    }
    for w in knots.windows(2) {
        if w[1] > w[0] {
            sum.add(rule.integrate(w[0], w[1], integrand));
        }
    }
    sum.value()
}

#[cfg(test)]
mod tests {
    use super::super::centered::centered_integral;
    use super::super::green::{green_sphere, green_torus};
    use super::super::Background;
    use super::*;
    use crate::curvature::flat_bump_normalization;

    fn torus_bump(p: Point, eps: f64) -> impl Fn(Point) -> f64 + Sync {
        move |y: Point| {
            let r = torus_offset(y, p);
            flat_bump_normalization(eps) * bump_profile(r[0].hypot(r[1]) / eps)
        }
    }

    #[test]
    fn torus_bump_matches_direct_quadrature() {
        let p = [0.3, 0.6, 0.0];
        let eps = 0.2;
        let psi = torus_bump(p, eps);
        for x in [[0.35, 0.62, 0.0], [0.8, 0.1, 0.0], [0.3, 0.6, 0.0], [0.3, 0.75, 0.0]] {
            let direct = centered_integral(
                Background::Torus,
                x,
                &|y: Point| if torus_offset(x, y) == [0.0, 0.0] { 0.0 } else { green_torus(x, y).unwrap() * psi(y) },
                16,
            );
            let closed = torus_bump_potential(x, p, eps);
            assert!((direct - closed).abs() < 1e-7, "{x:?}: {direct} vs {closed}");
        }
    }

    #[test]
    fn sphere_bump_matches_direct_quadrature() {
        let p = crate::curvature::normalize([0.2, -0.3, 0.9]);
        let eps = 0.4;
        let norm = sphere_bump_normalization(eps);
        for x in [p, crate::curvature::normalize([0.25, -0.2, 0.9]), [0.0, 1.0, 0.0]] {
            let direct = centered_integral(
                Background::Sphere,
                x,
                &|y: Point| {
                    let t = 2.0 * (0.5 * chord(y, p).min(2.0)).asin();
                    match green_sphere(x, y) {
                        Ok(g) => g * norm * bump_profile(t / eps),
                        Err(_) => 0.0,
                    }
                },
                16,
            );
            let closed = sphere_bump_potential(x, p, eps);
            assert!((direct - closed).abs() < 1e-7, "{x:?}: {direct} vs {closed}");
        }
    }
}
