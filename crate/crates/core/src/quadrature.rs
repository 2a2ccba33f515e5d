//! One-dimensional quadrature shared by the metric and measure code.
//!
//! Everything here works on a parameter interval; callers map geometry
//! (chart segments, great-circle arcs, radial profiles) onto it.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    fn compute(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Chebyshev-like initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussRule { nodes, weights }
    }

    /// Integrates `f` over `[a, b]` with this rule.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n_f = n as f64;
    let d = n_f * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const MAX_CACHED_RULE: usize = 128;

/// Cached Gauss–Legendre rule with `n` points (`1 <= n <= 128`).
pub fn gauss_legendre(n: usize) -> &'static GaussRule {
    static RULES: OnceLock<Vec<OnceLock<GaussRule>>> = OnceLock::new();
    assert!((1..=MAX_CACHED_RULE).contains(&n), "unsupported rule size {n}");
    let table = RULES.get_or_init(|| (0..=MAX_CACHED_RULE).map(|_| OnceLock::new()).collect());
    table[n].get_or_init(|| GaussRule::compute(n))
}

/// Composite Gauss–Legendre over `panels` equal sub-intervals.
pub fn composite(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, points: usize) -> f64 {
    let rule = gauss_legendre(points);
    let step = (b - a) / panels as f64;
    let mut sum = NeumaierSum::default();
    for k in 0..panels {
        let lo = a + step * k as f64;
        sum.add(rule.integrate(lo, lo + step, &f));
    }
    sum.value()
}

/// Adaptive bisection with a 5-point rule; accepts a panel when the split
/// estimate agrees with the whole-panel one to `rel_tol`.
pub fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let rule = gauss_legendre(5);
    let whole = rule.integrate(a, b, f);
    adaptive_rec(f, a, b, whole, rel_tol, 0)
}

fn adaptive_rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let rule = gauss_legendre(5);
    let m = 0.5 * (a + b);
    let left = rule.integrate(a, m, f);
    let right = rule.integrate(m, b, f);
    let split = left + right;
    if depth >= 14 || (split - whole).abs() <= tol * split.abs().max(1e-300) {
        return split;
    }
    adaptive_rec(f, a, m, left, tol, depth + 1) + adaptive_rec(f, m, b, right, tol, depth + 1)
}

/// Number of dyadic panels used toward a singular end.
const GRADED_LEVELS: i32 = 48;

/// Integrates `f` over the interval from `singular` to `regular` where `f`
/// behaves like `|t - singular|^exponent` near `singular` (`exponent > -1`).
///
/// Dyadic panels shrink toward the singular end; the unresolved innermost
/// piece is added analytically assuming the pure power law.
pub fn graded(f: impl Fn(f64) -> f64, singular: f64, regular: f64, exponent: f64) -> f64 {
    debug_assert!(exponent > -1.0);
    let len = regular - singular;
    if len == 0.0 {
        return 0.0;
    }
    let rule = gauss_legendre(12);
    let mut sum = NeumaierSum::default();
    let mut outer = 1.0f64;
    // Panels finer than this only resample rounding noise in `singular + s`.
    let floor = 1e-10 * singular.abs();
    for _ in 0..GRADED_LEVELS {
        if len.abs() * outer <= floor {
            break;
        }
        let inner = 0.5 * outer;
        sum.add(rule.integrate(singular + len * inner, singular + len * outer, &f));
        outer = inner;
    }
    let tail_len = len * outer;
    let edge = f(singular + tail_len);
    if edge.is_finite() {
        sum.add(edge * tail_len / (exponent + 1.0));
    }
    sum.value()
}

/// Marks a parameter value where the integrand is not smooth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Break {
    /// The integrand blows up (or vanishes) like `|t - t0|^exponent`.
    Singular { t: f64, exponent: f64 },
    /// Closest approach to an off-path singularity: sharp but finite peak.
    Peak { t: f64 },
    /// Jump or kink (e.g. crossing a seam).
    Kink { t: f64 },
}

impl Break {
    pub fn t(&self) -> f64 {
        match *self {
            Break::Singular { t, .. } | Break::Peak { t } | Break::Kink { t } => t,
        }
    }
}

/// Integrates over `[0, 1]`, splitting at the given breaks and grading toward
/// singular or peaked ends.
pub fn integrate_with_breaks(f: impl Fn(f64) -> f64, breaks: &[Break], rel_tol: f64) -> f64 {
    if breaks.is_empty() {
        return adaptive(&f, 0.0, 1.0, rel_tol);
    }
    let mut pts: Vec<Break> = breaks.iter().copied().filter(|b| (0.0..=1.0).contains(&b.t())).collect();
    pts.sort_by(|a, b| a.t().total_cmp(&b.t()));
    let mut knots: Vec<(f64, Option<f64>)> = vec![(0.0, None)];
    for b in pts {
        let exp = match b {
            Break::Singular { exponent, .. } => Some(exponent),
            Break::Peak { .. } => Some(0.0),
            Break::Kink { .. } => None,
        };
        let last = knots.last_mut().unwrap();
        if (b.t() - last.0).abs() < 1e-15 {
            if exp.is_some() {
                last.1 = exp;
            }
            continue;
        }
        knots.push((b.t(), exp));
    }
    if (knots.last().unwrap().0 - 1.0).abs() >= 1e-15 {
        knots.push((1.0, None));
    }
    let mut sum = NeumaierSum::default();
    for w in knots.windows(2) {
        let (a, ea) = w[0];
        let (b, eb) = w[1];
        let piece = match (ea, eb) {
            (None, None) => adaptive(&f, a, b, rel_tol),
            (Some(e), None) => graded(&f, a, b, e),
            (None, Some(e)) => -graded(&f, b, a, e),
            (Some(e1), Some(e2)) => {
                let m = 0.5 * (a + b);
                graded(&f, a, m, e1) - graded(&f, b, m, e2)
            }
        };
        sum.add(piece);
    }
    sum.value()
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of an iterator.
pub fn sum(iter: impl IntoIterator<Item = f64>) -> f64 {
    iter.into_iter().collect::<NeumaierSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rules_integrate_polynomials_exactly() {
        for n in [1usize, 3, 5, 8, 16, 40] {
            let rule = gauss_legendre(n);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n = {n}");
            let deg = 2 * n - 1;
            let got = rule.integrate(0.0, 1.0, |x| x.powi(deg as i32));
            assert!((got - 1.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn graded_handles_power_singularity() {
        for beta in [-0.75, -0.5, -0.25, 0.5] {
            let got = graded(|t: f64| t.powf(beta), 0.0, 2.0, beta);
            let exact = 2f64.powf(beta + 1.0) / (beta + 1.0);
            assert!((got - exact).abs() < 1e-12 * exact, "beta {beta}: {got} vs {exact}");
            let rev = graded(|t: f64| (2.0 - t).powf(beta), 2.0, 0.0, beta);
            assert!((-rev - exact).abs() < 1e-8 * exact, "beta {beta}: {rev}");
        }
    }

    #[test]
    fn breaks_split_kinks_and_singularities() {
        let f = |t: f64| if t < 0.3 { 1.0 } else { 2.0 } + (t - 0.7).abs().powf(-0.5);
        let breaks = [Break::Kink { t: 0.3 }, Break::Singular { t: 0.7, exponent: -0.5 }];
        let got = integrate_with_breaks(f, &breaks, 1e-13);
        let exact = 0.3 + 2.0 * 0.7 + 2.0 * 0.7f64.sqrt() + 2.0 * 0.3f64.sqrt();
        assert!((got - exact).abs() < 1e-8, "{got} vs {exact}");
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let s = sum([1e16, 1.0, -1e16, 1.0]);
        assert_eq!(s, 2.0);
    }
}
