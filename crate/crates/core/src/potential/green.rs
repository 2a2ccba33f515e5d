//! Zero-mean Green functions of the unit round sphere and the unit square
//! torus, normalized so that `Δ_y G(x, y) = δ_x − 1/area` with the positive
//! Laplacian and `∫ G(x, y) dA(y) = 0`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::{Point, PotentialError};

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `G(x, y) = −(1/2π)(ln sin(d/2) + ½)` with `d` the great-circle distance.
pub fn green_sphere(x: Point, y: Point) -> Result<f64, PotentialError> {
    let chord = chord(x, y);
    if chord == 0.0 {
        return Err(PotentialError::CoincidentPoints);
    }
    Ok(green_sphere_chord(chord))
}

/// Sphere Green function as a function of the chord length `|x − y|`.
pub fn green_sphere_chord(chord: f64) -> f64 {
    -((0.5 * chord).ln() + 0.5) / (2.0 * PI)
}

pub(crate) fn chord(x: Point, y: Point) -> f64 {
    let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// Representative of `x − y` in `[−½, ½)²`.
pub fn torus_offset(x: Point, y: Point) -> [f64; 2] {
    let wrap = |t: f64| {
        let r = t - t.round();
        if r >= 0.5 {
            r - 1.0
        } else {
            r
        }
    };
    [wrap(x[0] - y[0]), wrap(x[1] - y[1])]
}

fn eta_unit_square() -> f64 {
    static ETA: OnceLock<f64> = OnceLock::new();
    *ETA.get_or_init(|| {
        let q2 = (-2.0 * PI).exp();
        let mut prod = 1.0;
        let mut qn = q2;
        for _ in 0..12 {
            prod *= 1.0 - qn;
            qn *= q2;
        }
        (-PI / 12.0).exp() * prod
    })
}

/// `θ₁(v, q)` with nome `q = e^{−π}`.
fn theta1(v: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..10 {
        let k = n as f64 + 0.5;
        let w = (-PI * k * k).exp();
        let term = (v * (2.0 * k)).sin() * w;
        if n % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc * 2.0
}

/// Green function of the unit square torus from the Jacobi theta closed
/// form `−(1/2π) ln|θ₁(πz)/η| + (Im z)²/2`, `z` the reduced offset.
pub fn green_torus(x: Point, y: Point) -> Result<f64, PotentialError> {
    let r = torus_offset(x, y);
    if r[0] == 0.0 && r[1] == 0.0 {
        return Err(PotentialError::CoincidentPoints);
    }
    Ok(green_torus_offset(r))
}

/// [`green_torus`] of a reduced offset in `[−½, ½)²`.
pub fn green_torus_offset(r: [f64; 2]) -> f64 {
    let z = Complex64::new(r[0], r[1]);
    let th = theta1(z * PI);
    -(th.norm() / eta_unit_square()).ln() / (2.0 * PI) + 0.5 * r[1] * r[1]
}

/// Smooth part `G + (1/2π) ln |r|` near the diagonal.
pub fn torus_regular_part(r: [f64; 2]) -> f64 {
    let d = r[0].hypot(r[1]);
    if d == 0.0 {
        // Limit of the theta form: θ₁(v) ≈ θ₁'(0) v with θ₁'(0) = 2πη³... use
        // a tiny offset instead of a separate formula.
        let e = 1e-7;
        return green_torus_offset([e, 0.0]) + e.ln() / (2.0 * PI);
    }
    green_torus_offset(r) + d.ln() / (2.0 * PI)
}

/// The same Green function by Ewald splitting of the dual-lattice series
/// `Σ_{k≠0} cos(2πk·r) / (4π²|k|²)` at splitting parameter `α = 1/(4π)`.
pub fn green_torus_ewald(x: Point, y: Point) -> Result<f64, PotentialError> {
    let r = torus_offset(x, y);
    if r[0] == 0.0 && r[1] == 0.0 {
        return Err(PotentialError::CoincidentPoints);
    }
    let alpha = 1.0 / (4.0 * PI);
    const K: i32 = 7;
    let mut reciprocal = 0.0;
    let mut last_shell = 0.0f64;
    for kx in -K..=K {
        for ky in -K..=K {
            if kx == 0 && ky == 0 {
                continue;
            }
            let k2 = (kx * kx + ky * ky) as f64;
            let term = (-4.0 * PI * PI * k2 * alpha).exp() * (2.0 * PI * (kx as f64 * r[0] + ky as f64 * r[1])).cos()
                / (4.0 * PI * PI * k2);
            if kx.abs() == K || ky.abs() == K {
                last_shell = last_shell.max(term.abs());
            }
            reciprocal += term;
        }
    }
    if last_shell > 1e-14 {
        return Err(PotentialError::TruncationNotConverged);
    }
    let mut real = 0.0;
    for nx in -3..=3 {
        for ny in -3..=3 {
            let d2 = (r[0] + nx as f64).powi(2) + (r[1] + ny as f64).powi(2);
            real += expint_e1(d2 / (4.0 * alpha));
        }
    }
    Ok(reciprocal + real / (4.0 * PI) - alpha)
}

/// Exponential integral `E₁(x)` for `x > 0`.
pub fn expint_e1(x: f64) -> f64 {
    assert!(x > 0.0);
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -x / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        -EULER_GAMMA - x.ln() + sum
    } else {
        // Modified Lentz continued fraction.
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..200 {
            let a = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_antipodal_value() {
        let g = green_sphere([0.0, 0.0, 1.0], [0.0, 0.0, -1.0]).unwrap();
        assert!((g + 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert_eq!(green_sphere([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]), Err(PotentialError::CoincidentPoints));
    }

    #[test]
    fn theta_and_ewald_forms_agree() {
        for r in [[0.3f64, 0.1], [0.5, 0.5], [-0.01, 0.002], [0.25, -0.4], [1e-5, 0.0]] {
            let x = [r[0].rem_euclid(1.0), r[1].rem_euclid(1.0), 0.0];
            let a = green_torus(x, [0.0; 3]).unwrap();
            let b = green_torus_ewald(x, [0.0; 3]).unwrap();
            assert!((a - b).abs() < 1e-12, "{r:?}: {a} vs {b}");
        }
    }

    #[test]
    fn expint_reference_values() {
        // E₁(1) and E₁(2) to 15 digits.
        assert!((expint_e1(1.0) - 0.219_383_934_395_520_3).abs() < 1e-15);
        assert!((expint_e1(2.0) - 0.048_900_510_708_061_12).abs() < 1e-16);
        assert!((expint_e1(0.1) - 1.822_923_958_419_390_7).abs() < 1e-14);
    }

    #[test]
    fn torus_offset_wraps() {
        let r = torus_offset([0.95, 0.1, 0.0], [0.05, 0.8, 0.0]);
        assert!((r[0] + 0.1).abs() < 1e-15 && (r[1] - 0.3).abs() < 1e-15);
    }
}
