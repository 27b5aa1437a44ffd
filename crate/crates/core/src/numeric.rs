//! Small numerical kernels shared by the geometric modules: fixed-order
//! summation, the monotone bracketed bisection used by every level-equation
//! solve, Gauss–Legendre nodes, golden-section maximization and sphere
//! constants.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Cap on geometric bracket expansions.
pub const MAX_DOUBLINGS: usize = 200;
/// Residual stopping rule, relative to the target level.
pub const RESIDUAL_TOL: f64 = 1e-12;
/// Relative bracket width below which bisection stops if the residual is already small.
pub const WIDTH_TOL: f64 = 1e-13;

/// Sums values in a fixed binary-tree order.
///
/// The result depends only on the slice contents and order, never on how the
/// values were produced, so parallel evaluation followed by this reduction is
/// reproducible across worker counts.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Surface area of the unit sphere S^{n-1} in R^n.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => 2.0 * PI / (n as f64 - 2.0) * sphere_area(n - 2),
    }
}

/// Volume of the unit ball B^n.
pub fn ball_volume(n: usize) -> f64 {
    sphere_area(n) / n as f64
}

/// Monotonicity of a scalar function of one variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotone {
    Increasing,
    Decreasing,
}

/// Solves `g(x) = target` for a continuous strictly monotone `g` on (0, ∞).
///
/// The bracket is grown geometrically (factor 2) from `seed` until it shows
/// a sign change, then bisected. Returns as soon as the residual is within
/// `RESIDUAL_TOL * target`; otherwise bisects down to adjacent floats and
/// returns the endpoint with the smaller residual.
pub fn solve_monotone<F>(mut g: F, monotone: Monotone, target: f64, seed: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(seed.is_finite() && seed > 0.0) {
        return Err(Error::Domain(format!("bisection seed must be positive, got {seed}")));
    }
    let sign = match monotone {
        Monotone::Increasing => 1.0,
        Monotone::Decreasing => -1.0,
    };
    let tol = RESIDUAL_TOL * target.abs();
    // h is increasing in x with root at the solution.
    let mut h = |x: f64| -> Result<f64> {
        let v = g(x);
        if v.is_nan() {
            return Err(Error::Domain(format!("level function is NaN at {x}")));
        }
        Ok(sign * (v - target))
    };

    let h_seed = h(seed)?;
    if h_seed == 0.0 {
        return Ok(seed);
    }
    let (mut lo, mut hi, mut h_lo, mut h_hi);
    if h_seed > 0.0 {
        hi = seed;
        h_hi = h_seed;
        lo = seed;
        h_lo = h_seed;
        let mut steps = 0;
        while h_lo > 0.0 {
            if steps == MAX_DOUBLINGS {
                return Err(Error::Divergence { doublings: steps, context: format!("lower bracket from seed {seed}") });
            }
            hi = lo;
            h_hi = h_lo;
            lo *= 0.5;
            h_lo = h(lo)?;
            steps += 1;
        }
    } else {
        lo = seed;
        h_lo = h_seed;
        hi = seed;
        h_hi = h_seed;
        let mut steps = 0;
        while h_hi < 0.0 {
            if steps == MAX_DOUBLINGS {
                return Err(Error::Divergence { doublings: steps, context: format!("upper bracket from seed {seed}") });
            }
            lo = hi;
            h_lo = h_hi;
            hi *= 2.0;
            h_hi = h(hi)?;
            steps += 1;
        }
    }
    if h_lo.abs() <= tol {
        return Ok(lo);
    }
    if h_hi.abs() <= tol {
        return Ok(hi);
    }

    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let h_mid = h(mid)?;
        if h_mid.abs() <= tol {
            return Ok(mid);
        }
        if h_mid > 0.0 {
            hi = mid;
            h_hi = h_mid;
        } else {
            lo = mid;
            h_lo = h_mid;
        }
        if hi - lo <= WIDTH_TOL * hi && h_lo.abs().min(h_hi.abs()) <= tol {
            break;
        }
    }
    Ok(if h_lo.abs() <= h_hi.abs() { lo } else { hi })
}

/// Gauss–Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let n = count as f64;
    for i in 0..count.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root.
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(count, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(count, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[count - 1 - i] = x;
        weights[i] = w;
        weights[count - 1 - i] = w;
    }
    if count % 2 == 1 {
        nodes[count / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(degree: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if degree == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=degree {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = degree as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Golden-section search for the maximum of a unimodal function on [a, b].
/// Returns `(argmax, max)`.
pub fn golden_section_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    // Endpoints can win for monotone pieces.
    let mid = 0.5 * (a + b);
    [(mid, f(mid)), (c, fc), (d, fd)].into_iter().fold((mid, f64::NEG_INFINITY), |best, cand| {
        if cand.1 > best.1 {
            cand
        } else {
            best
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-15);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((sphere_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
        assert!((ball_volume(4) - PI * PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for count in [1, 2, 5, 32, 64] {
            let (x, w) = gauss_legendre(count);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "count {count}");
            let deg = 2 * count - 2;
            let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let exact = 2.0 / (deg as f64 + 1.0);
            assert!((approx - exact).abs() < 1e-12, "count {count}: {approx} vs {exact}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn monotone_solver_both_directions() {
        let root = solve_monotone(|x| x * x, Monotone::Increasing, 2.0, 1e-6).unwrap();
        assert!((root - 2f64.sqrt()).abs() < 1e-12);
        let root = solve_monotone(|x| 1.0 / x, Monotone::Decreasing, 4.0, 1e5).unwrap();
        assert!((root - 0.25).abs() < 1e-13);
    }

    #[test]
    fn monotone_solver_divergence() {
        let err = solve_monotone(|_| 0.5, Monotone::Increasing, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Divergence { doublings: 200, .. }));
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_inputs() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 499500.0);
    }

    #[test]
    fn golden_section_finds_interior_max() {
        let (x, fx) = golden_section_max(|t| -(t - 0.3) * (t - 0.3), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(fx.abs() < 1e-15);
    }
}
