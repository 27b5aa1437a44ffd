//! Orlicz intersection bodies: `ρ(u)` is the least `λ` with
//! `∫_K φ(1/(λ|u·x|)) dx ≤ 1`.
//!
//! In polar coordinates the integrand over the sphere is singular along the
//! great sphere `u^⊥`. For the power `φ(t) = t^p`, `0 < p < 1`, the radial
//! integral is closed-form and the remaining angular integrand is
//! `g(v)|u·v|^{-p}` with `g = ρ_K^{n−p}/(n−p)`. On deterministic rules the
//! singular part is integrated exactly after subtracting a model `g̃` that
//! matches `g` on `u^⊥`; only the bounded remainder goes through the rule.

use std::f64::consts::TAU;

use serde::Serialize;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Estimate, RuleKind, SphericalRule};
use crate::error::{Error, Result};
use crate::geometry::{euclidean_norm, Direction, StarBody};
use crate::numeric::{gauss_legendre, pairwise_sum, solve_monotone, Monotone};
use crate::orlicz::{FunctionClass, OrliczFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IntersectionMode {
    /// Closed-form radial integral for `φ(t) = t^p`.
    Power,
    /// Gauss–Legendre radial integral and bisection on `λ`.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionOptions {
    /// Nodes with `|u·v| < eta` are dropped.
    pub eta: f64,
    /// Integrate the singular part exactly (power mode, n = 2 or 3,
    /// deterministic rules only).
    pub subtract_singularity: bool,
}

impl Default for IntersectionOptions {
    fn default() -> Self {
        Self { eta: 1e-3, subtract_singularity: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionReport {
    pub value: f64,
    pub mode: IntersectionMode,
    /// True for the general mode, whose integrability is not verified.
    pub guarded: bool,
    pub singularity_subtracted: bool,
    pub eta: f64,
    /// Surface measure of the dropped band `|u·v| < eta`.
    pub excluded_measure: f64,
    /// Quadrature mass of the dropped nodes' integrand.
    pub excluded_mass: f64,
    pub rule: String,
}

/// Radial of the Orlicz intersection body of `K` in direction `u`, with
/// the default band `eta` and singularity subtraction.
pub fn intersection_body_radial(
    phi: &OrliczFunction,
    k: &StarBody,
    u: &Direction,
    rule: &SphericalRule,
    eta: f64,
) -> Result<IntersectionReport> {
    intersection_body_radial_with(phi, k, u, rule, IntersectionOptions { eta, ..Default::default() })
}

pub fn intersection_body_radial_with(
    phi: &OrliczFunction,
    k: &StarBody,
    u: &Direction,
    rule: &SphericalRule,
    options: IntersectionOptions,
) -> Result<IntersectionReport> {
    let n = k.dimension();
    if u.dimension() != n || rule.dimension() != n {
        return Err(Error::Dimension(format!(
            "body, direction and rule dimensions differ: {n}, {}, {}",
            u.dimension(),
            rule.dimension()
        )));
    }
    if phi.arity() != 1 || phi.class() != FunctionClass::Phi {
        return Err(Error::InvalidFunction(format!("{} must be a unary Φ-class function", phi.label())));
    }
    if !(options.eta > 0.0 && options.eta < 1.0) {
        return Err(Error::Domain(format!("eta must lie in (0,1), got {}", options.eta)));
    }
    let rho: Vec<f64> = super::node_values(rule, |v| k.radial(v))?;
    let cos: Vec<f64> = rule.nodes().iter().map(|v| u.dot(v.coords()).abs()).collect();
    let excluded_measure = pairwise_sum(
        &rule.weights().iter().zip(&cos).map(|(w, c)| if *c < options.eta { *w } else { 0.0 }).collect::<Vec<_>>(),
    );
    let base = |mode, subtracted, value, excluded_mass| IntersectionReport {
        value,
        mode,
        guarded: mode == IntersectionMode::General,
        singularity_subtracted: subtracted,
        eta: options.eta,
        excluded_measure,
        excluded_mass,
        rule: rule.descriptor(),
    };
    match phi.power() {
        Some(p) => {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Domain(format!("power mode needs 0 < p < 1, got {p}")));
            }
            if rho.iter().all(|r| *r == 0.0) {
                return Ok(base(IntersectionMode::Power, false, 0.0, 0.0));
            }
            let subtract =
                options.subtract_singularity && matches!(rule.kind(), RuleKind::Trapezoid2d | RuleKind::Product3d);
            let (integral, excluded) = power_integral(k, u, rule, &rho, &cos, p, options.eta, subtract)?;
            Ok(base(IntersectionMode::Power, subtract, integral.powf(1.0 / p), excluded))
        }
        None => {
            if rho.iter().all(|r| *r == 0.0) {
                return Ok(base(IntersectionMode::General, false, 0.0, 0.0));
            }
            let (value, excluded) = general(phi, k, rule, &rho, &cos, options.eta)?;
            Ok(base(IntersectionMode::General, false, value, excluded))
        }
    }
}

/// Plain Monte Carlo value of the power-case radial, for validation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloIntersection {
    /// `(∫_K |u·x|^{-p} dx)^{1/p}`.
    pub value: f64,
    /// The integral itself with its standard error.
    pub integral: Estimate,
    pub samples: usize,
    pub seed: u64,
}

/// Estimates the power-case radial from `samples` uniform points in the
/// cube `[−R, R]^n`, `R` the body's recorded upper bound. Independent of
/// the spherical rules: no polar coordinates, no band, no subtraction.
pub fn intersection_power_monte_carlo(
    k: &StarBody,
    u: &Direction,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloIntersection> {
    let n = k.dimension();
    if u.dimension() != n {
        return Err(Error::Dimension(format!("direction has dimension {}, body {n}", u.dimension())));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("power case needs 0 < p < 1, got {p}")));
    }
    if samples < 2 {
        return Err(Error::Domain("need at least 2 samples".to_string()));
    }
    let r = k.upper_bound();
    const CHUNKS: usize = 64;
    // Each chunk owns one ChaCha stream, so the result is independent of
    // the worker count.
    let partial: Vec<(f64, f64)> = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = samples / CHUNKS + usize::from(c < samples % CHUNKS);
            let mut x = vec![0.0; n];
            let (mut sum, mut sq) = (0.0, 0.0);
            for _ in 0..count {
                x.iter_mut().for_each(|v| *v = rng.random_range(-r..r));
                let norm = euclidean_norm(&x);
                let t = u.dot(&x).abs();
                if norm > 0.0 && t > 0.0 {
                    let unit: Vec<f64> = x.iter().map(|v| v / norm).collect();
                    if norm <= k.radial_unit(&unit) {
                        let f = t.powf(-p);
                        sum += f;
                        sq += f * f;
                    }
                }
            }
            (sum, sq)
        })
        .collect();
    let sum = pairwise_sum(&partial.iter().map(|c| c.0).collect::<Vec<_>>());
    let sq = pairwise_sum(&partial.iter().map(|c| c.1).collect::<Vec<_>>());
    let count = samples as f64;
    let cube = (2.0 * r).powi(n as i32);
    let mean = sum / count;
    let var = (sq / count - mean * mean).max(0.0) * count / (count - 1.0);
    let integral = Estimate { value: cube * mean, standard_error: cube * (var / count).sqrt() };
    Ok(MonteCarloIntersection { value: integral.value.powf(1.0 / p), integral, samples, seed })
}

/// `∫_{-π/2}^{π/2}`-type constant: `∫_{S¹} |u·v|^{-p} dv = 2 B((1−p)/2, 1/2)`.
fn circle_singular_constant(p: f64) -> f64 {
    let a = (1.0 - p) / 2.0;
    2.0 * libm::tgamma(a) * libm::tgamma(0.5) / libm::tgamma(a + 0.5)
}

#[allow(clippy::too_many_arguments)]
fn power_integral(
    k: &StarBody,
    u: &Direction,
    rule: &SphericalRule,
    rho: &[f64],
    cos: &[f64],
    p: f64,
    eta: f64,
    subtract: bool,
) -> Result<(f64, f64)> {
    let n = k.dimension() as f64;
    let g = |r: f64| r.powf(n - p) / (n - p);
    let uc = u.coords();
    let (model, exact): (Vec<f64>, f64) = if !subtract {
        (vec![0.0; rho.len()], 0.0)
    } else if k.dimension() == 2 {
        let perp = [-uc[1], uc[0]];
        let gp = g(k.radial_unit(&perp));
        let gm = g(k.radial_unit(&[-perp[0], -perp[1]]));
        let (a, b) = (0.5 * (gp + gm), 0.5 * (gp - gm));
        let model = rule.nodes().iter().map(|v| a + b * v.dot(&perp)).collect();
        (model, a * circle_singular_constant(p))
    } else {
        let (e1, e2) = orthonormal_complement(uc);
        let count = (4 * rule.resolution()).max(512);
        let ring: Vec<f64> = (0..count)
            .map(|j| {
                let (s, c) = (TAU * j as f64 / count as f64).sin_cos();
                let w = [c * e1[0] + s * e2[0], c * e1[1] + s * e2[1], c * e1[2] + s * e2[2]];
                g(k.radial_unit(&w))
            })
            .collect();
        let ring_integral = pairwise_sum(&ring) * TAU / count as f64;
        let model = rule
            .nodes()
            .iter()
            .zip(rho)
            .map(|(v, r)| {
                let t = v.dot(uc);
                let mut w: Vec<f64> = v.coords().iter().zip(uc).map(|(x, y)| x - t * y).collect();
                let norm = euclidean_norm(&w);
                if norm < 1e-12 {
                    return g(*r);
                }
                w.iter_mut().for_each(|x| *x /= norm);
                g(k.radial_unit(&w))
            })
            .collect();
        (model, ring_integral * 2.0 / (1.0 - p))
    };
    let mut kept = Vec::with_capacity(rho.len());
    let mut dropped = Vec::new();
    for (((w, r), c), m) in rule.weights().iter().zip(rho).zip(cos).zip(&model) {
        let term = if *c > 0.0 { w * (g(*r) - m) * c.powf(-p) } else { 0.0 };
        if *c < eta {
            dropped.push(term.abs());
        } else {
            kept.push(term);
        }
    }
    let value = exact + pairwise_sum(&kept);
    if !(value.is_finite() && value >= 0.0) {
        return Err(Error::Domain(format!("intersection integral evaluated to {value}")));
    }
    Ok((value, pairwise_sum(&dropped)))
}

fn orthonormal_complement(u: &[f64]) -> ([f64; 3], [f64; 3]) {
    let pick = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d: f64 = pick.iter().zip(u).map(|(a, b)| a * b).sum();
    let mut e1 = [pick[0] - d * u[0], pick[1] - d * u[1], pick[2] - d * u[2]];
    let norm = euclidean_norm(&e1);
    e1.iter_mut().for_each(|x| *x /= norm);
    let e2 = [u[1] * e1[2] - u[2] * e1[1], u[2] * e1[0] - u[0] * e1[2], u[0] * e1[1] - u[1] * e1[0]];
    (e1, e2)
}

fn general(
    phi: &OrliczFunction,
    k: &StarBody,
    rule: &SphericalRule,
    rho: &[f64],
    cos: &[f64],
    eta: f64,
) -> Result<(f64, f64)> {
    let n = k.dimension() as i32;
    let (gx, gw) = gauss_legendre(32);
    let shell = |lambda: f64, r_max: f64, c: f64| -> f64 {
        gx.iter()
            .zip(&gw)
            .map(|(x, w)| {
                let r = 0.5 * r_max * (x + 1.0);
                0.5 * r_max * w * phi.eval1(1.0 / (lambda * r * c)) * r.powi(n - 1)
            })
            .sum()
    };
    let level = |lambda: f64| -> f64 {
        let terms: Vec<f64> = rule
            .weights()
            .iter()
            .zip(rho)
            .zip(cos)
            .map(|((w, r), c)| if *c < eta || *r == 0.0 { 0.0 } else { w * shell(lambda, *r, *c) })
            .collect();
        pairwise_sum(&terms)
    };
    let seed = k.upper_bound().max(f64::MIN_POSITIVE);
    let lambda = solve_monotone(level, Monotone::Decreasing, 1.0, seed).map_err(|e| match e {
        Error::Divergence { doublings, context } => Error::Divergence {
            doublings,
            context: format!("general intersection body with {}: {context}", phi.label()),
        },
        other => other,
    })?;
    let dropped: Vec<f64> = rule
        .weights()
        .iter()
        .zip(rho)
        .zip(cos)
        .map(|((w, r), c)| if *c < eta && *c > 0.0 && *r > 0.0 { w * shell(lambda, *r, *c) } else { 0.0 })
        .collect();
    Ok((lambda, pairwise_sum(&dropped)))
}
