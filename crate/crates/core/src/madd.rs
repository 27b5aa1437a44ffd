//! Radial M-addition: `ρ(u) = h_{conv M}(ρ₁(u), …, ρ_m(u))`.
//!
//! Radial vectors are nonnegative, so only the positive orthant of
//! `conv M` matters and the support function is a plain maximum of dot
//! products over the point cloud.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{radial_metric, StarBody};
use crate::integrate::SphericalRule;
use crate::numeric::golden_section_max;
use crate::orlicz::{orlicz_sum, solve_level, FunctionClass, OrliczFunction};

/// Finite coefficient set in `[0, ∞)^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MSet {
    arity: usize,
    points: Vec<Vec<f64>>,
}

impl MSet {
    pub fn new(arity: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Dimension("M-sets need arity >= 1".to_string()));
        }
        if points.is_empty() {
            return Err(Error::Constructor("M-set must be nonempty".to_string()));
        }
        for p in &points {
            if p.len() != arity {
                return Err(Error::Dimension(format!("M-set point {p:?} does not have arity {arity}")));
            }
            if p.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                return Err(Error::Constructor(format!("M-set point {p:?} leaves [0, inf)^{arity}")));
            }
        }
        Ok(Self { arity, points })
    }

    /// `((1−t)^{1/p′}, t^{1/p′})` at `t = k/res`, `k = 0..=res`, with
    /// `1/p + 1/p′ = 1`; its convex hull realizes pth radial addition.
    pub fn lp_curve(p: f64, resolution: usize) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::Domain(format!("lp curve needs finite p >= 1, got {p}")));
        }
        if resolution == 0 {
            return Err(Error::Domain("lp curve resolution must be positive".to_string()));
        }
        if p == 1.0 {
            return Self::new(2, vec![vec![1.0, 1.0]]);
        }
        let e = (p - 1.0) / p;
        let points = (0..=resolution)
            .map(|k| {
                let t = k as f64 / resolution as f64;
                vec![(1.0 - t).powf(e), t.powf(e)]
            })
            .collect();
        Self::new(2, points)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let raw: MSet = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::new(raw.arity, raw.points).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

/// `max_{x ∈ M} x·z`.
pub fn support_conv(m: &MSet, z: &[f64]) -> Result<f64> {
    if z.len() != m.arity {
        return Err(Error::Dimension(format!("M-set has arity {}, vector has length {}", m.arity, z.len())));
    }
    Ok(max_dot(&m.points, z))
}

fn max_dot(points: &[Vec<f64>], z: &[f64]) -> f64 {
    points.iter().map(|p| p.iter().zip(z).map(|(a, b)| a * b).sum::<f64>()).fold(f64::NEG_INFINITY, f64::max)
}

pub fn radial_m_sum(m: &MSet, bodies: &[StarBody]) -> Result<StarBody> {
    if bodies.len() != m.arity {
        return Err(Error::Dimension(format!("M-set has arity {}, got {} bodies", m.arity, bodies.len())));
    }
    let n = bodies[0].dimension();
    if bodies.iter().any(|b| b.dimension() != n) {
        return Err(Error::Dimension("bodies must share one dimension".to_string()));
    }
    // Nonnegative points make the support monotone, so bounds pass through.
    let lower = max_dot(&m.points, &bodies.iter().map(StarBody::lower_bound).collect::<Vec<_>>()).max(0.0);
    let upper = max_dot(&m.points, &bodies.iter().map(StarBody::upper_bound).collect::<Vec<_>>()).max(lower);
    let continuous = bodies.iter().all(StarBody::is_continuous);
    let label = format!("msum({})", bodies.iter().map(StarBody::label).collect::<Vec<_>>().join(","));
    let points = m.points.clone();
    let bodies = bodies.to_vec();
    StarBody::from_fn(n, label, lower, upper, continuous, move |u| {
        let r: Vec<f64> = bodies.iter().map(|b| b.radial_unit(u)).collect();
        max_dot(&points, &r)
    })
}

/// Point cloud on the positive-quadrant boundary of `J_φ°`, where `J_φ` is
/// the sub-level set `{φ ≤ 1}`.
///
/// For `α_k = (π/2)·k/res`, `k = 0..=res`, emits `d/h_{J_φ}(d)` with
/// `d = (cos α_k, sin α_k)`. `h_{J_φ}(d)` is maximized over level-curve
/// points `v(β)/g(v(β))`, `g` the level solve along the ray. The grids are
/// nested under doubling, so the cloud only grows with resolution.
pub fn m_set_from_phi(phi: &OrliczFunction, resolution: usize) -> Result<MSet> {
    if phi.arity() != 2 || phi.class() != FunctionClass::Phi {
        return Err(Error::Hypothesis("m_set_from_phi needs a binary Φ-class function".to_string()));
    }
    if phi.convex() != Some(true) {
        return Err(Error::Hypothesis(format!(
            "{} is not flagged convex; for non-convex functions use the sublinearity counterexample check",
            phi.label()
        )));
    }
    if resolution == 0 {
        return Err(Error::Domain("resolution must be positive".to_string()));
    }
    let points: Vec<Vec<f64>> = (0..=resolution)
        .into_par_iter()
        .map(|k| {
            let alpha = FRAC_PI_2 * k as f64 / resolution as f64;
            let (sa, ca) = alpha.sin_cos();
            let objective = |beta: f64| {
                let (sb, cb) = beta.sin_cos();
                match solve_level(phi, &[cb, sb], None, 1.0) {
                    Ok(g) if g > 0.0 => (cb * ca + sb * sa) / g,
                    _ => f64::NEG_INFINITY,
                }
            };
            let (_, h) = golden_section_max(objective, 0.0, FRAC_PI_2, 1e-10);
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::Evaluation { node: k, message: format!("support of the sub-level set is {h}") });
            }
            Ok(vec![(ca / h).max(0.0), (sa / h).max(0.0)])
        })
        .collect::<Result<_>>()?;
    MSet::new(2, points)
}

/// Largest probe-node gap between `radial_m_sum(m_set_from_phi(φ, res), K, L)`
/// and the radial Orlicz sum of `K, L`.
pub fn m_set_equivalence_gap(
    phi: &OrliczFunction,
    k: &StarBody,
    l: &StarBody,
    resolution: usize,
    probe: &SphericalRule,
) -> Result<f64> {
    let m = m_set_from_phi(phi, resolution)?;
    let pair = [k.clone(), l.clone()];
    let gap = radial_metric(&radial_m_sum(&m, &pair)?, &orlicz_sum(phi, &pair)?, probe);
    if gap.is_nan() {
        return Err(Error::Evaluation { node: 0, message: "M-sum or Orlicz sum is NaN on the probe".to_string() });
    }
    Ok(gap)
}

/// `g(z₁+z₂) − g(z₁) − g(z₂)` with `g(z) = λ` solving `φ(z/λ) = 1`.
pub fn sublinearity_gap(phi: &OrliczFunction, z1: &[f64], z2: &[f64]) -> Result<f64> {
    if phi.arity() != 2 || z1.len() != 2 || z2.len() != 2 {
        return Err(Error::Dimension("sublinearity checks are binary".to_string()));
    }
    let g = |z: &[f64]| solve_level(phi, z, None, 1.0);
    let sum = [z1[0] + z2[0], z1[1] + z2[1]];
    Ok(g(&sum)? - g(z1)? - g(z2)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SublinearityWitness {
    pub z1: [f64; 2],
    pub z2: [f64; 2],
    pub gap: f64,
}

/// Largest superadditivity gap of `g` on the grid `{0, ½, 1, 2}²`, if any
/// exceeds `1e-9`.
pub fn check_sublinearity_counterexample(phi: &OrliczFunction) -> Result<Option<SublinearityWitness>> {
    let axis = [0.0, 0.5, 1.0, 2.0];
    let grid: Vec<[f64; 2]> = axis.iter().flat_map(|&a| axis.iter().map(move |&b| [a, b])).collect();
    let mut best: Option<SublinearityWitness> = None;
    for z1 in &grid {
        for z2 in &grid {
            let gap = sublinearity_gap(phi, z1, z2)?;
            if gap > 1e-9 && best.as_ref().is_none_or(|b| gap > b.gap) {
                best = Some(SublinearityWitness { z1: *z1, z2: *z2, gap });
            }
        }
    }
    Ok(best)
}
