//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use alexandrov::mesh::ConeSurface;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type P2 = [f64; 2];
pub type P3 = [f64; 3];

/// Shortest straight line between two face-local points found by unfolding
/// every face sequence of at most `depth` crossings. Each point is given by
/// all of its `(face, layout position)` representations.
pub fn unfolding_distance(surface: &ConeSurface, from: &[(usize, P2)], to: &[(usize, P2)], depth: usize) -> f64 {
    let mut best = f64::INFINITY;
    for &(face, s) in from {
        let placed = surface.face_layout(face);
        let mut portals = Vec::new();
        unfold(surface, face, placed, None, s, to, depth, &mut portals, &mut best);
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn unfold(
    surface: &ConeSurface,
    face: usize,
    placed: [P2; 3],
    entered_by: Option<usize>,
    s: P2,
    to: &[(usize, P2)],
    depth: usize,
    portals: &mut Vec<(P2, P2)>,
    best: &mut f64,
) {
    let native = surface.face_layout(face);
    for &(tf, t) in to {
        if tf != face {
            continue;
        }
        let q = carry(native, placed, t);
        if portals.iter().all(|&(a, b)| crosses(s, q, a, b)) {
            *best = best.min(norm(sub(q, s)));
        }
    }
    if depth == 0 {
        return;
    }
    let topo = surface.topology();
    for i in 0..3 {
        let h = 3 * face + i;
        if Some(h) == entered_by {
            continue;
        }
        let Some(tw) = topo.twin(h) else { continue };
        let (g, j) = (tw / 3, tw % 3);
        let (a, b) = (placed[(i + 1) % 3], placed[(i + 2) % 3]);
        let layout = surface.face_layout(g);
        // Twin edges run in opposite directions.
        let (ga, gb) = (layout[(j + 2) % 3], layout[(j + 1) % 3]);
        let mut next = [[0.0; 2]; 3];
        for (k, p) in layout.iter().enumerate() {
            next[k] = rigid(ga, gb, a, b, *p);
        }
        // Prune sequences the segment from `s` cannot enter.
        if cross(sub(b, a), sub(s, a)) < -1e-12 * norm(sub(b, a)) {
            continue;
        }
        portals.push((a, b));
        unfold(surface, g, next, Some(tw), s, to, depth - 1, portals, best);
        portals.pop();
    }
}

/// Image of `p` under the rigid motion taking `a0 → a1` and `b0 → b1`.
fn rigid(a0: P2, b0: P2, a1: P2, b1: P2, p: P2) -> P2 {
    let (u0, u1) = (sub(b0, a0), sub(b1, a1));
    let ang = u1[1].atan2(u1[0]) - u0[1].atan2(u0[0]);
    let (c, s) = (ang.cos(), ang.sin());
    let d = sub(p, a0);
    [a1[0] + c * d[0] - s * d[1], a1[1] + s * d[0] + c * d[1]]
}

fn carry(native: [P2; 3], placed: [P2; 3], p: P2) -> P2 {
    rigid(native[0], native[1], placed[0], placed[1], p)
}

/// Segment `s q` meets segment `a b`, endpoints included.
fn crosses(s: P2, q: P2, a: P2, b: P2) -> bool {
    let tol = 1e-12 * (1.0 + norm(sub(q, s)));
    let d1 = cross(sub(q, s), sub(a, s));
    let d2 = cross(sub(q, s), sub(b, s));
    let d3 = cross(sub(b, a), sub(s, a));
    let d4 = cross(sub(b, a), sub(q, a));
    d1 * d2 <= tol && d3 * d4 <= tol
}

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn norm(a: P2) -> f64 {
    a[0].hypot(a[1])
}

/// Distance on the flat torus `R² / (side·Z)²`.
pub fn flat_torus_distance(x: P2, y: P2, side: f64) -> f64 {
    let wrap = |d: f64| {
        let r = d.rem_euclid(side);
        r.min(side - r)
    };
    wrap(x[0] - y[0]).hypot(wrap(x[1] - y[1]))
}

/// Zero-mean Green function of `−∇²` on the unit square torus, summed as a
/// Fourier series in one coordinate with the other solved in closed form.
pub fn torus_green_oracle(x: P3, y: P3) -> f64 {
    let centred = |d: f64| d - d.round();
    let (mut a, mut b) = (centred(x[0] - y[0]), centred(x[1] - y[1]));
    if b.abs() < a.abs() {
        std::mem::swap(&mut a, &mut b);
    }
    let b = b.abs();
    let mut sum = (b * b - b) / 2.0 + 1.0 / 12.0;
    for m in 1..200_000 {
        let k = 2.0 * PI * m as f64;
        // cosh(k(b − ½)) / (k sinh(k/2)) without overflow.
        let term = ((-k * b).exp() + (-k * (1.0 - b)).exp()) / (k * (1.0 - (-k).exp()));
        sum += (2.0 * PI * m as f64 * a).cos() * term;
        if term < 1e-18 {
            break;
        }
    }
    sum
}

/// Zero-mean Green function of `−∇²` on the unit sphere.
pub fn sphere_green_oracle(x: P3, y: P3) -> f64 {
    let t = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    -((1.0 - t).ln() - 2f64.ln() + 1.0) / (4.0 * PI)
}

/// Pole-to-pole length of the football of cone angle `π` with conformal
/// factor `e^u = e^{-1/2} (½ sin t)^{-1/2}` along a meridian.
pub fn football_pole_distance() -> f64 {
    // Two symmetric halves; `t = s²` removes the inverse square root.
    let n = 200_000;
    let mut half = 0.0;
    let top = (PI / 2.0).sqrt();
    for k in 0..n {
        let s = (k as f64 + 0.5) * top / n as f64;
        let t = s * s;
        half += 2.0 * s * (0.5 * t.sin()).powf(-0.5) * top / n as f64;
    }
    2.0 * (-0.5f64).exp() * half
}

/// Distance from the apex of the cone `|z|^{2β}|dz|²` to a point at chart
/// radius `r`.
pub fn cone_apex_distance(beta: f64, r: f64) -> f64 {
    r.powf(beta + 1.0) / (beta + 1.0)
}

/// Area of the antiprism lantern with `n` vertices per ring and `m` rows of
/// height `h/m` inscribed in the cylinder of radius `r`, from one triangle.
pub fn lantern_area_oracle(n: usize, m: usize, r: f64, h: f64) -> f64 {
    let half = PI / n as f64;
    let base = 2.0 * r * half.sin();
    let sag = r * (1.0 - half.cos());
    let height = (h / m as f64).hypot(sag);
    2.0 * n as f64 * m as f64 * 0.5 * base * height
}

/// Seeded points uniform on the unit torus square.
pub fn torus_points(n: usize, seed: u64) -> Vec<P3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| [rng.gen(), rng.gen(), 0.0]).collect()
}

/// Seeded points uniform on the unit sphere.
pub fn sphere_points(n: usize, seed: u64) -> Vec<P3> {
    torus_points(n, seed)
        .into_iter()
        .map(|[a, b, _]| {
            let z = 2.0 * a - 1.0;
            let phi = 2.0 * PI * b;
            let rho = (1.0 - z * z).sqrt();
            [rho * phi.cos(), rho * phi.sin(), z]
        })
        .collect()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}
