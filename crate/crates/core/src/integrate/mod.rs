//! Spherical quadrature and the integrals built on it: volumes, dual cone
//! integrals, dual Orlicz and L_p mixed volumes, Orlicz intersection bodies.
//!
//! Node values are computed in parallel and collected in node order, then
//! summed with a fixed pairwise tree, so results do not depend on the
//! number of worker threads.

mod intersection;
mod rule;

use rayon::prelude::*;
use serde::Serialize;

pub use intersection::{
    intersection_body_radial, intersection_body_radial_with, intersection_power_monte_carlo, IntersectionMode,
    IntersectionOptions, IntersectionReport, MonteCarloIntersection,
};
pub use rule::{build_rule, RuleKind, SphericalRule};

use crate::error::{Error, Result};
use crate::geometry::{Direction, StarBody};
use crate::numeric::pairwise_sum;
use crate::orlicz::ScalarFunction;

/// A quadrature value with its Monte Carlo standard error (0 for
/// deterministic rules).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub standard_error: f64,
}

/// Evaluates `f` at every node, rejecting non-finite values.
pub(crate) fn node_values<F>(rule: &SphericalRule, f: F) -> Result<Vec<f64>>
where
    F: Fn(&Direction) -> f64 + Sync,
{
    let values: Vec<f64> = rule.nodes().par_iter().map(&f).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Evaluation {
            node: i,
            message: format!("integrand is {} at {:?}", values[i], rule.nodes()[i].coords()),
        });
    }
    Ok(values)
}

/// `Σ w_i v_i` in fixed pairwise order.
pub(crate) fn weighted_sum(rule: &SphericalRule, values: &[f64]) -> f64 {
    let products: Vec<f64> = rule.weights().iter().zip(values).map(|(w, v)| w * v).collect();
    pairwise_sum(&products)
}

/// `Σ w_i v_i` with its standard error under Monte Carlo rules.
pub(crate) fn estimate(rule: &SphericalRule, values: &[f64]) -> Estimate {
    let value = weighted_sum(rule, values);
    let standard_error = if rule.is_monte_carlo() && values.len() > 1 {
        let n = values.len() as f64;
        let mean = pairwise_sum(values) / n;
        let dev: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
        let var = pairwise_sum(&dev) / (n - 1.0);
        let area: f64 = rule.weights().iter().sum();
        area * (var / n).sqrt()
    } else {
        0.0
    };
    Estimate { value, standard_error }
}

fn check_dimension(body: &StarBody, rule: &SphericalRule) -> Result<()> {
    if body.dimension() != rule.dimension() {
        return Err(Error::Dimension(format!(
            "{} has dimension {}, rule {} has dimension {}",
            body.label(),
            body.dimension(),
            rule.descriptor(),
            rule.dimension()
        )));
    }
    Ok(())
}

fn radial_values(body: &StarBody, rule: &SphericalRule) -> Result<Vec<f64>> {
    check_dimension(body, rule)?;
    node_values(rule, |u| body.radial(u))
}

/// `(1/n) Σ w_i ρ_K(u_i)^n` with its standard error.
pub fn volume_estimate(body: &StarBody, rule: &SphericalRule) -> Result<Estimate> {
    let n = body.dimension() as i32;
    let rho = radial_values(body, rule)?;
    let powers: Vec<f64> = rho.iter().map(|r| r.powi(n)).collect();
    let e = estimate(rule, &powers);
    Ok(Estimate { value: e.value / n as f64, standard_error: e.standard_error / n as f64 })
}

/// `(1/n) Σ w_i ρ_K(u_i)^n`.
pub fn volume(body: &StarBody, rule: &SphericalRule) -> Result<f64> {
    volume_estimate(body, rule).map(|e| e.value)
}

/// Integral of `f` against the dual cone measure `ρ_K^n / (n V_n(K))`.
pub fn dual_cone_integral<F>(body: &StarBody, f: F, rule: &SphericalRule) -> Result<f64>
where
    F: Fn(&Direction) -> f64 + Sync,
{
    let n = body.dimension() as i32;
    let rho = radial_values(body, rule)?;
    let mass: Vec<f64> = rho.iter().map(|r| r.powi(n)).collect();
    let total = weighted_sum(rule, &mass);
    if !(total > 0.0) {
        return Err(Error::Domain(format!("{} has zero volume on {}", body.label(), rule.descriptor())));
    }
    let fv = node_values(rule, f)?;
    let weighted: Vec<f64> = fv.iter().zip(&mass).map(|(f, m)| f * m).collect();
    Ok(weighted_sum(rule, &weighted) / total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedVolumeDiagnostics {
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// Dual mixed volume with the rule it was computed on and the range of
/// `ρ_L / ρ_K` over the nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedVolumeReport {
    pub value: f64,
    pub rule: String,
    pub diagnostics: MixedVolumeDiagnostics,
}

fn paired_radials(k: &StarBody, l: &StarBody, rule: &SphericalRule) -> Result<(Vec<f64>, Vec<f64>)> {
    check_dimension(k, rule)?;
    check_dimension(l, rule)?;
    let pairs: Vec<(f64, f64)> = rule.nodes().par_iter().map(|u| (k.radial(u), l.radial(u))).collect();
    Ok(pairs.into_iter().unzip())
}

/// `(1/n) Σ w_i φ(ρ_L/ρ_K) ρ_K^n` for a real-valued `φ`.
///
/// Needs `ρ_K > 0` at every node, and `ρ_L > 0` too unless `φ` is defined at 0.
pub fn dual_orlicz_mixed_volume(
    phi: &ScalarFunction,
    k: &StarBody,
    l: &StarBody,
    rule: &SphericalRule,
) -> Result<MixedVolumeReport> {
    let n = k.dimension() as i32;
    let (rk, rl) = paired_radials(k, l, rule)?;
    for (i, (a, b)) in rk.iter().zip(&rl).enumerate() {
        if !(*a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("node {i}: ρ_K = {a}, must be positive")));
        }
        let l_ok = if phi.defined_at_zero() { *b >= 0.0 } else { *b > 0.0 };
        if !(l_ok && b.is_finite()) {
            return Err(Error::Domain(format!("node {i}: ρ_L = {b} is outside the domain of {}", phi.label())));
        }
    }
    let ratios: Vec<f64> = rk.iter().zip(&rl).map(|(a, b)| b / a).collect();
    let values: Vec<f64> = ratios.iter().zip(&rk).map(|(t, a)| phi.eval(*t) * a.powi(n)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Evaluation {
            node: i,
            message: format!("{} is not finite at ratio {}", phi.label(), ratios[i]),
        });
    }
    let diagnostics = MixedVolumeDiagnostics {
        min_ratio: ratios.iter().cloned().fold(f64::INFINITY, f64::min),
        max_ratio: ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    };
    Ok(MixedVolumeReport { value: weighted_sum(rule, &values) / n as f64, rule: rule.descriptor(), diagnostics })
}

/// `(1/n) Σ w_i ρ_K^{n−p} ρ_L^p`.
pub fn dual_p_mixed_volume(k: &StarBody, l: &StarBody, p: f64, rule: &SphericalRule) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::Domain(format!("p must be finite, got {p}")));
    }
    let n = k.dimension() as f64;
    let (rk, rl) = paired_radials(k, l, rule)?;
    for (i, (a, b)) in rk.iter().zip(&rl).enumerate() {
        if p < 0.0 && !(*b > 0.0) {
            return Err(Error::Domain(format!("node {i}: p < 0 needs ρ_L > 0, got {b}")));
        }
        if p > n && !(*a > 0.0) {
            return Err(Error::Domain(format!("node {i}: p > n needs ρ_K > 0, got {a}")));
        }
    }
    let values: Vec<f64> = rk.iter().zip(&rl).map(|(a, b)| a.powf(n - p) * b.powf(p)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Evaluation { node: i, message: "dual mixed volume integrand is not finite".to_string() });
    }
    Ok(weighted_sum(rule, &values) / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{linear_image, polar_star_body, ConvexBodySupport, LinearMap};
    use std::f64::consts::PI;

    fn disk() -> StarBody {
        StarBody::ball(2, 1.0).unwrap()
    }

    fn petal() -> StarBody {
        StarBody::fourier_star(1.0, &[(3, 0.5)]).unwrap()
    }

    #[test]
    fn ball_volumes() {
        assert!((volume(&disk(), &build_rule(2, 256, None).unwrap()).unwrap() - PI).abs() < 1e-12);
        let b3 = StarBody::ball(3, 1.0).unwrap();
        let v = volume(&b3, &build_rule(3, 64, None).unwrap()).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-9);
        let b4 = StarBody::ball(4, 1.0).unwrap();
        let e = volume_estimate(&b4, &build_rule(4, 100_000, Some(7)).unwrap()).unwrap();
        assert!((e.value - PI * PI / 2.0).abs() <= 4.0 * e.standard_error + 1e-12);
    }

    #[test]
    fn monte_carlo_error_is_reported() {
        let k = linear_image(&StarBody::ball(4, 1.0).unwrap(), &LinearMap::diagonal(&[2.0, 1.0, 1.0, 0.5]).unwrap())
            .unwrap();
        let e = volume_estimate(&k, &build_rule(4, 20_000, Some(1)).unwrap()).unwrap();
        assert!(e.standard_error > 0.0);
        assert!((e.value - PI * PI / 2.0).abs() <= 4.0 * e.standard_error);
    }

    #[test]
    fn petal_volume() {
        let v = volume(&petal(), &build_rule(2, 256, None).unwrap()).unwrap();
        assert!((v - 1.125 * PI).abs() < 1e-10);
    }

    #[test]
    fn dual_cone_integrals() {
        let rule = build_rule(2, 256, None).unwrap();
        for body in [disk(), petal()] {
            assert!((dual_cone_integral(&body, |_| 1.0, &rule).unwrap() - 1.0).abs() < 1e-12);
            assert!((dual_cone_integral(&body, |_| 2.5, &rule).unwrap() - 2.5).abs() < 1e-12);
        }
        let v = dual_cone_integral(&disk(), |u| u.coords()[0].powi(2), &rule).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let o = StarBody::ball(2, 0.0).unwrap();
        assert!(matches!(dual_cone_integral(&o, |_| 1.0, &rule), Err(Error::Domain(_))));
    }

    #[test]
    fn mixed_volume_examples() {
        let rule = build_rule(2, 256, None).unwrap();
        let pow = ScalarFunction::power(1.5);
        let a = dual_orlicz_mixed_volume(&pow, &disk(), &petal(), &rule).unwrap().value;
        let b = dual_p_mixed_volume(&disk(), &petal(), 1.5, &rule).unwrap();
        assert!((a - b).abs() <= 1e-12 * b.abs());
        let same = dual_orlicz_mixed_volume(&pow, &petal(), &petal(), &rule).unwrap().value;
        assert!((same - volume(&petal(), &rule).unwrap()).abs() < 1e-12);
        let (r, s) = (1.5, 2.5);
        let log = dual_orlicz_mixed_volume(
            &ScalarFunction::log(),
            &StarBody::ball(2, r).unwrap(),
            &StarBody::ball(2, s).unwrap(),
            &rule,
        )
        .unwrap();
        assert!((log.value - PI * r * r * (s / r).ln()).abs() < 1e-12);
        assert!((log.diagnostics.min_ratio - s / r).abs() < 1e-15);
        assert_eq!(log.rule, "2:trapezoid2d:256");
    }

    #[test]
    fn mixed_volume_domain_errors_name_the_node() {
        let rule = build_rule(2, 16, None).unwrap();
        let o = StarBody::ball(2, 0.0).unwrap();
        let err = dual_orlicz_mixed_volume(&ScalarFunction::log(), &disk(), &o, &rule).unwrap_err();
        assert!(matches!(&err, Error::Domain(m) if m.contains("node 0")));
        assert!(dual_p_mixed_volume(&disk(), &o, -1.0, &rule).is_err());
        assert!(dual_orlicz_mixed_volume(&ScalarFunction::power(2.0), &disk(), &o, &rule).is_ok());
    }

    #[test]
    fn dual_p_against_dense_trapezoid() {
        let rule = build_rule(2, 256, None).unwrap();
        let v = dual_p_mixed_volume(&disk(), &petal(), 1.0, &rule).unwrap();
        // Independent oracle: (1/2)∫ρ_K ρ_L dθ by a hand-rolled dense sum.
        let m = 2560;
        let dense: f64 = (0..m)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / m as f64;
                1.0 + 0.5 * (3.0 * t).cos()
            })
            .sum::<f64>()
            * (2.0 * PI / m as f64)
            / 2.0;
        assert!((v - dense).abs() < 1e-12);
        assert!((v - PI).abs() < 1e-12);
        let vr = dual_p_mixed_volume(&StarBody::ball(2, 2.0).unwrap(), &StarBody::ball(2, 3.0).unwrap(), 0.7, &rule)
            .unwrap();
        assert!((vr - 2f64.powf(1.3) * 3f64.powf(0.7) * PI).abs() < 1e-12);
    }

    #[test]
    fn polar_body_with_nonpositive_support_is_an_evaluation_error() {
        let rule = build_rule(2, 16, None).unwrap();
        let half = ConvexBodySupport::from_fn(2, "half", 0.5, 1.0, |u| u[0]).unwrap();
        let polar = polar_star_body(&half).unwrap();
        assert!(matches!(volume(&polar, &rule), Err(Error::Evaluation { .. })));
    }

    #[test]
    fn dimension_mismatch() {
        let rule = build_rule(3, 8, None).unwrap();
        assert!(matches!(volume(&disk(), &rule), Err(Error::Dimension(_))));
    }
}
