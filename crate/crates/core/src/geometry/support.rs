use std::fmt;
use std::sync::Arc;

use super::{euclidean_norm, Direction, LinearMap};
use crate::error::{Error, Result};

/// Support oracle evaluated at unit-vector coordinates.
pub type SupportFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// A convex body with the origin in its interior, given by `h_K` on S^{n-1}.
///
/// Invariant: `0 < lower_bound ≤ h(u) ≤ upper_bound` whenever the body was
/// built by one of the checked constructors.
#[derive(Clone)]
pub struct ConvexBodySupport {
    dimension: usize,
    support: Arc<SupportFn>,
    lower_bound: f64,
    upper_bound: f64,
    label: String,
}

impl fmt::Debug for ConvexBodySupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexBodySupport")
            .field("label", &self.label)
            .field("dimension", &self.dimension)
            .field("lower_bound", &self.lower_bound)
            .field("upper_bound", &self.upper_bound)
            .finish()
    }
}

impl ConvexBodySupport {
    /// Wraps a caller-supplied support function. Bounds are trusted.
    pub fn from_fn<F>(
        dimension: usize,
        label: impl Into<String>,
        lower_bound: f64,
        upper_bound: f64,
        support: F,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if dimension < 2 {
            return Err(Error::Dimension(format!("convex bodies need n >= 2, got {dimension}")));
        }
        if !(lower_bound > 0.0 && upper_bound.is_finite() && lower_bound <= upper_bound) {
            return Err(Error::Constructor(format!(
                "support bounds must satisfy 0 < lower <= upper < inf (origin interior), got [{lower_bound}, {upper_bound}]"
            )));
        }
        Ok(Self { dimension, support: Arc::new(support), lower_bound, upper_bound, label: label.into() })
    }

    pub fn ball(n: usize, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Constructor(format!("ball radius must be positive, got {r}")));
        }
        Self::from_fn(n, format!("ball:{n}:{r}"), r, r, move |_| r)
    }

    /// Ellipsoid with `h(u) = ‖Bu‖`.
    pub fn ellipsoid_norm(b: &LinearMap) -> Result<Self> {
        let (lo, hi) = b.singular_value_range();
        let map = b.clone();
        Self::from_fn(b.dimension(), "ellipsoid", lo, hi, move |u| euclidean_norm(&map.apply(u)))
    }

    /// Axis-parallel ellipsoid with the given semi-axes.
    pub fn axis_ellipsoid(semi_axes: &[f64]) -> Result<Self> {
        if semi_axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::Constructor(format!("semi-axes must be positive, got {semi_axes:?}")));
        }
        let b = LinearMap::diagonal(semi_axes)?;
        let label = format!("ellipsoid:{}", semi_axes.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","));
        Ok(Self::ellipsoid_norm(&b)?.with_label(label))
    }

    /// Convex hull of `points`, `h(u) = max v·u`.
    ///
    /// The lower bound is certified from a direction probe and the Lipschitz
    /// constant `max ‖v‖`; a nonpositive certificate is an error (the origin
    /// is not interior, or too close to the boundary to certify). Supported
    /// for n = 2 and n = 3.
    pub fn from_vertices(n: usize, points: &[Vec<f64>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Constructor("vertex list is empty".to_string()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::Dimension(format!("vertex has {} coordinates, dimension is {n}", p.len())));
        }
        let pts = points.to_vec();
        let h = move |u: &[f64]| {
            pts.iter().map(|v| v.iter().zip(u).map(|(a, b)| a * b).sum::<f64>()).fold(f64::NEG_INFINITY, f64::max)
        };
        let radius = points.iter().map(|v| euclidean_norm(v)).fold(0.0, f64::max);
        let (probe_min, covering) = match n {
            2 => {
                let count = 4096;
                let min = (0..count)
                    .map(|i| {
                        let t = std::f64::consts::TAU * i as f64 / count as f64;
                        h(&[t.cos(), t.sin()])
                    })
                    .fold(f64::INFINITY, f64::min);
                (min, 2.0 * (std::f64::consts::PI / (2.0 * count as f64)).sin())
            }
            3 => {
                let (rows, cols) = (128, 256);
                let mut min = f64::INFINITY;
                for i in 0..rows {
                    let theta = std::f64::consts::PI * (i as f64 + 0.5) / rows as f64;
                    let (st, ct) = theta.sin_cos();
                    for j in 0..cols {
                        let phi = std::f64::consts::TAU * j as f64 / cols as f64;
                        min = min.min(h(&[st * phi.cos(), st * phi.sin(), ct]));
                    }
                }
                let pi = std::f64::consts::PI;
                (min, pi / (2.0 * rows as f64) + pi / cols as f64)
            }
            _ => return Err(Error::Dimension(format!("vertex hulls are supported for n = 2, 3, got {n}"))),
        };
        let lower = probe_min - radius * covering;
        if !(lower > 0.0) {
            return Err(Error::Constructor(format!(
                "cannot certify the origin as interior point (certified lower bound {lower:e})"
            )));
        }
        Self::from_fn(n, format!("hull[{}]", points.len()), lower, radius, h)
    }

    pub fn support(&self, u: &Direction) -> f64 {
        (self.support)(u.coords())
    }

    pub fn oracle(&self) -> Arc<SupportFn> {
        self.support.clone()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
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
}
