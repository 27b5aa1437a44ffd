//! Star bodies as radial oracles on the unit sphere, their constructors,
//! linear images and the classical radial combinations.
//!
//! A [`StarBody`] never stores a boundary; everything downstream consumes
//! radial evaluations only. Each body carries recorded radial bounds
//! `lower ≤ ρ(u) ≤ upper` that constructors compose, so solvers can seed
//! brackets without probing.

mod grid;
mod linear;
mod support;

use std::fmt;
use std::sync::Arc;

pub use grid::{GridBody, GridFile};
pub use linear::LinearMap;
pub use support::ConvexBodySupport;

use crate::error::{Error, Result};
use crate::integrate::SphericalRule;

/// A unit vector u ∈ S^{n-1}, n ≥ 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    coords: Vec<f64>,
}

impl Direction {
    /// Normalizes `coords` onto the sphere.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Dimension(format!("direction needs n >= 2 coordinates, got {}", coords.len())));
        }
        let norm = euclidean_norm(&coords);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Domain(format!("cannot normalize vector with norm {norm}")));
        }
        Ok(Self { coords: coords.into_iter().map(|c| c / norm).collect() })
    }

    /// Wraps coordinates already known to be unit length.
    pub(crate) fn from_unit(coords: Vec<f64>) -> Self {
        debug_assert!((euclidean_norm(&coords) - 1.0).abs() < 1e-12);
        Self { coords }
    }

    /// The direction at angle `theta` on S¹.
    pub fn from_angle(theta: f64) -> Self {
        Self { coords: vec![theta.cos(), theta.sin()] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        self.coords.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

pub(crate) fn euclidean_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Radial oracle evaluated at unit-vector coordinates.
pub type RadialFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// A star set represented by its radial function on S^{n-1}.
///
/// Invariants: `ρ(u) ≥ 0`, `lower_bound ≤ ρ(u) ≤ upper_bound`, and
/// evaluation is pure. The body is *positive* (a member of S^n_+) exactly
/// when its recorded lower bound is strictly positive.
#[derive(Clone)]
pub struct StarBody {
    dimension: usize,
    radial: Arc<RadialFn>,
    continuous: bool,
    lower_bound: f64,
    upper_bound: f64,
    label: String,
}

impl fmt::Debug for StarBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StarBody")
            .field("label", &self.label)
            .field("dimension", &self.dimension)
            .field("continuous", &self.continuous)
            .field("lower_bound", &self.lower_bound)
            .field("upper_bound", &self.upper_bound)
            .finish()
    }
}

/// Single cosine term `a · cos(k θ + phase)` of a planar Fourier star.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierTerm {
    pub k: u32,
    pub amplitude: f64,
    pub phase: f64,
}

/// Ridge term `a · (w·u)^k` of a polynomial star in any dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeTerm {
    pub axis: Vec<f64>,
    pub power: u32,
    pub amplitude: f64,
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Dimension(format!("star bodies need n >= 2, got {n}")));
    }
    Ok(())
}

impl StarBody {
    /// Builds a body from an arbitrary radial oracle and its recorded bounds.
    pub fn from_fn<F>(
        dimension: usize,
        label: impl Into<String>,
        lower_bound: f64,
        upper_bound: f64,
        continuous: bool,
        radial: F,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        check_dimension(dimension)?;
        if !(lower_bound >= 0.0 && upper_bound.is_finite() && lower_bound <= upper_bound) {
            return Err(Error::Constructor(format!(
                "radial bounds must satisfy 0 <= lower <= upper < inf, got [{lower_bound}, {upper_bound}]"
            )));
        }
        Ok(Self { dimension, radial: Arc::new(radial), continuous, lower_bound, upper_bound, label: label.into() })
    }

    /// The ball `r·B^n`; `r = 0` gives the degenerate star set `{o}`.
    pub fn ball(n: usize, r: f64) -> Result<Self> {
        check_dimension(n)?;
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::Constructor(format!("ball radius must be finite and >= 0, got {r}")));
        }
        Self::from_fn(n, format!("ball:{n}:{r}"), r, r, true, move |_| r)
    }

    /// Planar star with `ρ(θ) = base + Σ a cos(kθ)`.
    pub fn fourier_star(base: f64, amps: &[(u32, f64)]) -> Result<Self> {
        let terms: Vec<FourierTerm> =
            amps.iter().map(|&(k, amplitude)| FourierTerm { k, amplitude, phase: 0.0 }).collect();
        Self::fourier_star_phased(base, &terms)
    }

    /// Planar star with `ρ(θ) = base + Σ a cos(kθ + phase)`.
    pub fn fourier_star_phased(base: f64, terms: &[FourierTerm]) -> Result<Self> {
        let spread: f64 = terms.iter().map(|t| t.amplitude.abs()).sum();
        if !(base - spread > 0.0) || !base.is_finite() {
            return Err(Error::Constructor(format!(
                "fourier star needs base - sum|a| > 0, got base {base}, sum|a| {spread}"
            )));
        }
        let label = std::iter::once(format!("fourier:{base}"))
            .chain(terms.iter().map(|t| format!("{}:{}", t.k, t.amplitude)))
            .collect::<Vec<_>>()
            .join(":");
        let terms = terms.to_vec();
        Self::from_fn(2, label, base - spread, base + spread, true, move |u| {
            let theta = u[1].atan2(u[0]);
            base + terms.iter().map(|t| t.amplitude * (t.k as f64 * theta + t.phase).cos()).sum::<f64>()
        })
    }

    /// Star in R^n with `ρ(u) = base + Σ a (w·u)^k`, `w` normalized.
    pub fn ridge_star(n: usize, base: f64, terms: &[RidgeTerm]) -> Result<Self> {
        check_dimension(n)?;
        let spread: f64 = terms.iter().map(|t| t.amplitude.abs()).sum();
        if !(base - spread > 0.0) || !base.is_finite() {
            return Err(Error::Constructor(format!(
                "ridge star needs base - sum|a| > 0, got base {base}, sum|a| {spread}"
            )));
        }
        let mut normalized = Vec::with_capacity(terms.len());
        for t in terms {
            if t.axis.len() != n {
                return Err(Error::Dimension(format!(
                    "ridge axis has {} coordinates, body dimension is {n}",
                    t.axis.len()
                )));
            }
            let axis = Direction::new(t.axis.clone())?;
            normalized.push((axis.coords, t.power as i32, t.amplitude));
        }
        Self::from_fn(n, format!("ridge:{n}:{base}"), base - spread, base + spread, true, move |u| {
            base + normalized
                .iter()
                .map(|(w, k, a)| {
                    let d: f64 = w.iter().zip(u).map(|(x, y)| x * y).sum();
                    a * d.powi(*k)
                })
                .sum::<f64>()
        })
    }

    pub fn radial(&self, u: &Direction) -> f64 {
        debug_assert_eq!(u.dimension(), self.dimension);
        (self.radial)(u.coords())
    }

    /// Evaluates at raw unit-vector coordinates.
    pub fn radial_unit(&self, u: &[f64]) -> f64 {
        (self.radial)(u)
    }

    /// Evaluates and rejects non-finite or negative values.
    pub fn checked_radial(&self, u: &Direction) -> Result<f64> {
        let r = self.radial(u);
        if r.is_finite() && r >= 0.0 {
            Ok(r)
        } else {
            Err(Error::Domain(format!("radial of {} is {r} at {:?}", self.label, u.coords())))
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_positive(&self) -> bool {
        self.lower_bound > 0.0
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper_bound
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The dilatate `r·K`.
    pub fn scaled(&self, r: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("scale factor must be >= 0, got {r}")));
        }
        let inner = self.radial.clone();
        Self::from_fn(
            self.dimension,
            format!("{r}*{}", self.label),
            r * self.lower_bound,
            r * self.upper_bound,
            self.continuous,
            move |u| r * inner(u),
        )
    }
}

/// `AK` via `ρ_{AK}(u) = ‖A⁻¹u‖⁻¹ ρ_K(A⁻¹u / ‖A⁻¹u‖)`.
pub fn linear_image(body: &StarBody, map: &LinearMap) -> Result<StarBody> {
    if map.dimension() != body.dimension() {
        return Err(Error::Dimension(format!(
            "linear map is {}x{}, body dimension is {}",
            map.dimension(),
            map.dimension(),
            body.dimension()
        )));
    }
    let inner = body.radial.clone();
    let map_for_oracle = map.clone();
    let (sigma_min, sigma_max) = map.singular_value_range();
    StarBody::from_fn(
        body.dimension(),
        format!("A*{}", body.label()),
        body.lower_bound() * sigma_min,
        body.upper_bound() * sigma_max,
        body.is_continuous(),
        move |u| {
            let mut w = map_for_oracle.apply_inverse(u);
            let norm = euclidean_norm(&w);
            w.iter_mut().for_each(|x| *x /= norm);
            inner(&w) / norm
        },
    )
}

fn pth_mean(alpha: f64, a: f64, p: f64, beta: f64, b: f64) -> f64 {
    if p == 1.0 {
        return alpha * a + beta * b;
    }
    if p < 0.0 && a * b == 0.0 {
        return 0.0;
    }
    let s = alpha * a.powf(p) + beta * b.powf(p);
    if s == 0.0 {
        0.0
    } else {
        s.powf(1.0 / p)
    }
}

/// `αK +̃_p βL` with `ρ^p = α ρ_K^p + β ρ_L^p`.
///
/// For `p < 0` the radial is 0 wherever `ρ_K ρ_L = 0`. `p = 0` is rejected;
/// use [`crate::orlicz::log_combination`].
pub fn pth_radial_combination(alpha: f64, k: &StarBody, p: f64, beta: f64, l: &StarBody) -> Result<StarBody> {
    if k.dimension() != l.dimension() {
        return Err(Error::Dimension(format!(
            "cannot combine bodies of dimension {} and {}",
            k.dimension(),
            l.dimension()
        )));
    }
    if p == 0.0 {
        return Err(Error::Domain("p = 0 is the log combination; use log_combination".to_string()));
    }
    if !p.is_finite() {
        return Err(Error::Domain(format!("p must be finite, got {p}")));
    }
    if !(alpha >= 0.0 && beta >= 0.0) {
        return Err(Error::Domain(format!("coefficients must be >= 0, got {alpha}, {beta}")));
    }
    let (rk, rl) = (k.radial.clone(), l.radial.clone());
    StarBody::from_fn(
        k.dimension(),
        format!("{alpha}{} +_{p} {beta}{}", k.label(), l.label()),
        pth_mean(alpha, k.lower_bound(), p, beta, l.lower_bound()),
        pth_mean(alpha, k.upper_bound(), p, beta, l.upper_bound()),
        k.is_continuous() && l.is_continuous(),
        move |u| pth_mean(alpha, rk(u), p, beta, rl(u)),
    )
}

/// Largest `|ρ_K − ρ_L|` over the probe nodes.
///
/// A lower bound on the radial metric; it converges to the true supremum as
/// the probe is refined, for continuous bodies. NaN if any node is NaN.
pub fn radial_metric(k: &StarBody, l: &StarBody, probe: &SphericalRule) -> f64 {
    probe.nodes().iter().map(|u| (k.radial(u) - l.radial(u)).abs()).fold(0.0, |acc: f64, d| {
        if acc.is_nan() || d.is_nan() {
            f64::NAN
        } else {
            acc.max(d)
        }
    })
}

/// Section `K ∩ span{e_i : i ∈ axes}` as a body of dimension `axes.len()`.
pub fn restrict_to_coordinate_subspace(body: &StarBody, axes: &[usize]) -> Result<StarBody> {
    if axes.len() < 2 {
        return Err(Error::Dimension(format!("a section needs at least 2 axes, got {}", axes.len())));
    }
    let n = body.dimension();
    for (i, &a) in axes.iter().enumerate() {
        if a >= n {
            return Err(Error::Dimension(format!("axis {a} out of range for dimension {n}")));
        }
        if axes[..i].contains(&a) {
            return Err(Error::Dimension(format!("axis {a} repeated")));
        }
    }
    let inner = body.radial.clone();
    let axes_owned = axes.to_vec();
    StarBody::from_fn(
        axes.len(),
        format!("{}|{axes:?}", body.label()),
        body.lower_bound(),
        body.upper_bound(),
        body.is_continuous(),
        move |v| {
            let mut full = vec![0.0; n];
            for (&axis, &c) in axes_owned.iter().zip(v) {
                full[axis] = c;
            }
            inner(&full)
        },
    )
}

/// Polar body `K°` through `ρ_{K°}(u) = 1 / h_K(u)`.
///
/// A nonpositive support value yields an infinite radial, which
/// [`StarBody::checked_radial`] and all quadrature routines report as an
/// evaluation error.
pub fn polar_star_body(support: &ConvexBodySupport) -> Result<StarBody> {
    let h = support.oracle();
    StarBody::from_fn(
        support.dimension(),
        format!("polar({})", support.label()),
        1.0 / support.upper_bound(),
        1.0 / support.lower_bound(),
        true,
        move |u| {
            let value = h(u);
            if value > 0.0 {
                1.0 / value
            } else {
                f64::INFINITY
            }
        },
    )
}
