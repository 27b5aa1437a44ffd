//! Checkers for the dual Brunn–Minkowski and Minkowski type inequalities,
//! the first variation of volume, and the dilatate equality test.
//!
//! Each inequality holds exactly for any finite positive measure on the
//! sphere, in particular for a quadrature rule, so on deterministic rules the
//! reported slack is only ever negative through solver and rounding error.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{polar_star_body, ConvexBodySupport, StarBody};
use crate::integrate::{dual_cone_integral, dual_orlicz_mixed_volume, volume_estimate, Estimate, SphericalRule};
use crate::orlicz::{
    log_combination, orlicz_linear_combination, orlicz_sum, Curvature, FunctionClass, OrliczFunction, Side,
};

/// Slack tolerance on deterministic rules.
pub const SLACK_TOL: f64 = 1e-9;
/// Equality tolerance on `|slack|`.
pub const EQ_TOL: f64 = 1e-8;
/// Relative spread of `ρ_L/ρ_K` below which two bodies are dilatates.
pub const DILATATE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    LessEq,
    #[serde(rename = ">=")]
    GreaterEq,
}

impl Relation {
    fn from_curvature(c: Curvature, concave: Relation) -> Option<Relation> {
        if c.is_concave() {
            Some(concave)
        } else if c.is_convex() {
            Some(concave.flip())
        } else {
            None
        }
    }

    pub fn flip(self) -> Relation {
        match self {
            Relation::LessEq => Relation::GreaterEq,
            Relation::GreaterEq => Relation::LessEq,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::LessEq => "<=",
            Relation::GreaterEq => ">=",
        }
    }
}

/// Both sides of one inequality instance and its verdict.
///
/// `slack` is `lhs − rhs` for `≥` and `rhs − lhs` for `≤`;
/// `satisfied ⇔ slack ≥ −tol` and `equality ⇔ |slack| ≤ eq_tol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IneqReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub slack: f64,
    pub tol: f64,
    pub eq_tol: f64,
    pub satisfied: bool,
    pub equality: bool,
    pub curvature: Option<Curvature>,
    /// Whether the bodies are dilatates on the rule nodes.
    pub dilatate: Option<bool>,
    pub rule: String,
}

impl IneqReport {
    pub fn new(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        relation: Relation,
        tol: f64,
        rule: &SphericalRule,
    ) -> Self {
        let slack = match relation {
            Relation::GreaterEq => lhs - rhs,
            Relation::LessEq => rhs - lhs,
        };
        Self {
            name: name.into(),
            lhs,
            rhs,
            relation,
            slack,
            tol,
            eq_tol: EQ_TOL,
            satisfied: slack >= -tol,
            equality: slack.abs() <= EQ_TOL,
            curvature: None,
            dilatate: None,
            rule: rule.descriptor(),
        }
    }

    fn with_curvature(mut self, c: Curvature) -> Self {
        self.curvature = Some(c);
        self
    }

    fn with_dilatate(mut self, d: bool) -> Self {
        self.dilatate = Some(d);
        self
    }
}

/// Slack tolerance: `SLACK_TOL`, or 4 propagated standard errors on Monte
/// Carlo rules. The propagation is first order and treats the relative
/// errors of the volumes involved as additive.
fn tolerance(lhs: f64, rhs: f64, estimates: &[Estimate]) -> f64 {
    let rel = estimates.iter().map(|e| if e.value > 0.0 { e.standard_error / e.value } else { 0.0 }).sum::<f64>();
    SLACK_TOL.max(4.0 * rel * (lhs.abs() + rhs.abs()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilatateResult {
    pub dilatate: bool,
    /// Mean of `ρ_L/ρ_K` over the probe.
    pub ratio: f64,
    /// `(max − min)/min` of the ratio.
    pub spread: f64,
    pub diagnostic: Option<String>,
}

/// Decides whether `L = cK` on the probe nodes.
pub fn dilatate_test(k: &StarBody, l: &StarBody, probe: &SphericalRule) -> DilatateResult {
    let ratios: Vec<(f64, f64)> = probe.nodes().par_iter().map(|u| (k.radial(u), l.radial(u))).collect();
    if let Some(i) = ratios.iter().position(|(a, b)| !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite())) {
        return DilatateResult {
            dilatate: false,
            ratio: f64::NAN,
            spread: f64::NAN,
            diagnostic: Some(format!("radial vanishes or is not finite at node {i}")),
        };
    }
    let ratios: Vec<f64> = ratios.iter().map(|(a, b)| b / a).collect();
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = (max - min) / min;
    DilatateResult {
        dilatate: spread <= DILATATE_TOL,
        ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
        spread,
        diagnostic: None,
    }
}

fn curvature_for(phi: &OrliczFunction, n: usize) -> Result<Curvature> {
    match phi.phi0_curvature() {
        None => Err(Error::Hypothesis(format!("{} has no declared φ₀ curvature", phi.label()))),
        Some((m, _)) if m != n => {
            Err(Error::Hypothesis(format!("{} declares φ₀ curvature for n = {m}, bodies have n = {n}", phi.label())))
        }
        Some((_, c)) => Ok(c),
    }
}

fn require_positive(bodies: &[&StarBody], context: &str) -> Result<()> {
    if let Some(b) = bodies.iter().find(|b| !b.is_positive()) {
        return Err(Error::Hypothesis(format!("{context} needs positive bodies; {} is not", b.label())));
    }
    Ok(())
}

/// `φ((V(K_j)/V(S))^{1/n}) ≥ 1` for concave φ₀ (≤ for convex), `S` the
/// radial Orlicz sum.
pub fn check_dual_orlicz_bm(phi: &OrliczFunction, bodies: &[StarBody], rule: &SphericalRule) -> Result<IneqReport> {
    let n = rule.dimension();
    let curvature = curvature_for(phi, n)?;
    let relation = Relation::from_curvature(curvature, Relation::GreaterEq)
        .ok_or_else(|| Error::Hypothesis(format!("{}: φ₀ is neither concave nor convex", phi.label())))?;
    if phi.class() == FunctionClass::Psi {
        require_positive(&bodies.iter().collect::<Vec<_>>(), "Ψ-class Brunn–Minkowski")?;
    }
    let sum = orlicz_sum(phi, bodies)?;
    let vs = volume_estimate(&sum, rule)?;
    let vols: Vec<Estimate> = bodies.iter().map(|b| volume_estimate(b, rule)).collect::<Result<_>>()?;
    if vols.iter().all(|v| v.value <= 0.0) {
        return Err(Error::Hypothesis("all bodies have zero volume".to_string()));
    }
    let args: Vec<f64> = vols.iter().map(|v| (v.value / vs.value).powf(1.0 / n as f64)).collect();
    let lhs = phi.eval(&args);
    let mut estimates = vols.clone();
    estimates.push(vs);
    let dilatate = bodies[1..].iter().all(|b| dilatate_test(&bodies[0], b, rule).dilatate);
    Ok(IneqReport::new("dual-orlicz-bm", lhs, 1.0, relation, tolerance(lhs, 1.0, &estimates), rule)
        .with_curvature(curvature)
        .with_dilatate(dilatate))
}

/// `V((1−t)K +₀ tL) ≤ V(K)^{1−t} V(L)^t`.
pub fn check_dual_log_bm(k: &StarBody, l: &StarBody, t: f64, rule: &SphericalRule) -> Result<IneqReport> {
    require_positive(&[k, l], "log Brunn–Minkowski")?;
    let c = log_combination(k, l, t)?;
    let vc = volume_estimate(&c, rule)?;
    let (vk, vl) = (volume_estimate(k, rule)?, volume_estimate(l, rule)?);
    let rhs = vk.value.powf(1.0 - t) * vl.value.powf(t);
    Ok(IneqReport::new("dual-log-bm", vc.value, rhs, Relation::LessEq, tolerance(vc.value, rhs, &[vc, vk, vl]), rule)
        .with_dilatate(dilatate_test(k, l, rule).dilatate))
}

/// `Ṽ_φ(K,L) ≤ V(K) φ((V(L)/V(K))^{1/n})` for concave φ₀ (≥ for convex).
pub fn check_dual_orlicz_minkowski(
    phi: &OrliczFunction,
    k: &StarBody,
    l: &StarBody,
    rule: &SphericalRule,
) -> Result<IneqReport> {
    let n = rule.dimension();
    let curvature = curvature_for(phi, n)?;
    let relation = Relation::from_curvature(curvature, Relation::LessEq)
        .ok_or_else(|| Error::Hypothesis(format!("{}: φ₀ is neither concave nor convex", phi.label())))?;
    require_positive(&[k, l], "Orlicz–Minkowski")?;
    let lhs = dual_orlicz_mixed_volume(&phi.as_scalar()?, k, l, rule)?.value;
    let (vk, vl) = (volume_estimate(k, rule)?, volume_estimate(l, rule)?);
    let rhs = vk.value * phi.eval1((vl.value / vk.value).powf(1.0 / n as f64));
    Ok(IneqReport::new("dual-orlicz-minkowski", lhs, rhs, relation, tolerance(lhs, rhs, &[vk, vl, vk]), rule)
        .with_curvature(curvature)
        .with_dilatate(dilatate_test(k, l, rule).dilatate))
}

/// `∫ log(ρ_L/ρ_K) dṼ_K ≤ (1/n) log(V(L)/V(K))`.
pub fn check_dual_log_minkowski(k: &StarBody, l: &StarBody, rule: &SphericalRule) -> Result<IneqReport> {
    require_positive(&[k, l], "log-Minkowski")?;
    let n = rule.dimension() as f64;
    let lhs = dual_cone_integral(k, |u| (l.radial(u) / k.radial(u)).ln(), rule)?;
    let (vk, vl) = (volume_estimate(k, rule)?, volume_estimate(l, rule)?);
    let rhs = (vl.value / vk.value).ln() / n;
    Ok(IneqReport::new("dual-log-minkowski", lhs, rhs, Relation::LessEq, tolerance(lhs, rhs, &[vk, vl]), rule)
        .with_dilatate(dilatate_test(k, l, rule).dilatate))
}

/// `∫ log(h_L/h_K) dṼ_{K°} ≥ (1/n) log(V(K°)/V(L°))`.
pub fn check_polar_log(k: &ConvexBodySupport, l: &ConvexBodySupport, rule: &SphericalRule) -> Result<IneqReport> {
    let n = rule.dimension() as f64;
    let (kp, lp) = (polar_star_body(k)?, polar_star_body(l)?);
    let (hk, hl) = (k.oracle(), l.oracle());
    let lhs = dual_cone_integral(&kp, |u| (hl(u.coords()) / hk(u.coords())).ln(), rule)?;
    let (vk, vl) = (volume_estimate(&kp, rule)?, volume_estimate(&lp, rule)?);
    let rhs = (vk.value / vl.value).ln() / n;
    Ok(IneqReport::new("polar-log", lhs, rhs, Relation::GreaterEq, tolerance(lhs, rhs, &[vk, vl]), rule)
        .with_dilatate(dilatate_test(&kp, &lp, rule).dilatate))
}

/// Numeric and analytic first variation of volume along `K +_ε L`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationReport {
    /// Slope extrapolated linearly from the two smallest ε.
    pub numeric_derivative: f64,
    /// Difference quotient at the smallest ε.
    pub raw_derivative: f64,
    /// `(1/φ₁′(1)) Σ w φ₂(ρ_L/ρ_K) ρ_K^n`.
    pub analytic_value: f64,
    pub relative_error: f64,
    pub eps_schedule: Vec<f64>,
    pub extrapolated: bool,
    /// Extrapolations from the two smallest pairs agree within 1e-3 relative.
    pub richardson_consistent: bool,
    /// One-sided derivative of φ₁ at 1 (left for Φ, right for Ψ).
    pub derivative_at_one: f64,
    pub derivative_estimated: bool,
    pub rule: String,
}

/// `1e-2 · 2^{-k}` down to `1e-6`.
pub fn default_eps_schedule() -> Vec<f64> {
    (0..).map(|k| 1e-2 * 0.5f64.powi(k)).take_while(|e| *e >= 1e-6).collect()
}

pub fn first_variation_volume(
    phi1: &OrliczFunction,
    phi2: &OrliczFunction,
    k: &StarBody,
    l: &StarBody,
    rule: &SphericalRule,
    eps_list: &[f64],
) -> Result<VariationReport> {
    if phi1.arity() != 1 || phi2.arity() != 1 || phi1.class() != phi2.class() {
        return Err(Error::Hypothesis("first variation needs two unary functions of one class".to_string()));
    }
    let side = match phi1.class() {
        FunctionClass::Phi => {
            require_positive(&[k], "first variation (Φ-class)")?;
            Side::Left
        }
        FunctionClass::Psi => {
            require_positive(&[k, l], "first variation (Ψ-class)")?;
            Side::Right
        }
    };
    let d = phi1.derivative_at_one(side)?;
    if !(d.value.is_finite() && d.value != 0.0) {
        return Err(Error::Hypothesis(format!("derivative of {} at 1 is {}", phi1.label(), d.value)));
    }
    if eps_list.is_empty() || eps_list.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Domain("ε schedule must be nonempty and positive".to_string()));
    }
    let n = k.dimension() as f64;
    let analytic_value = n * dual_orlicz_mixed_volume(&phi2.as_scalar()?, k, l, rule)?.value / d.value;

    let mut eps: Vec<f64> = eps_list.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    let v0 = volume_estimate(k, rule)?.value;
    let quotients: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let ve = volume_estimate(&orlicz_linear_combination(phi1, phi2, k, e, l)?, rule)?.value;
            Ok((ve - v0) / e)
        })
        .collect::<Result<_>>()?;
    let m = eps.len();
    let raw = quotients[m - 1];
    let extrapolate = |i: usize| {
        let (e1, e2) = (eps[i], eps[i + 1]);
        (e1 * quotients[i + 1] - e2 * quotients[i]) / (e1 - e2)
    };
    let (numeric, extrapolated) = if m >= 2 { (extrapolate(m - 2), true) } else { (raw, false) };
    let richardson_consistent =
        if m >= 3 { (extrapolate(m - 3) - numeric).abs() <= 1e-3 * numeric.abs().max(f64::EPSILON) } else { false };
    Ok(VariationReport {
        numeric_derivative: numeric,
        raw_derivative: raw,
        analytic_value,
        relative_error: (numeric - analytic_value).abs() / analytic_value.abs().max(f64::EPSILON),
        eps_schedule: eps,
        extrapolated,
        richardson_consistent,
        derivative_at_one: d.value,
        derivative_estimated: d.estimated,
        rule: rule.descriptor(),
    })
}

/// One CSV row of a seeded sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub name: String,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
    pub equality: bool,
}

impl SweepRecord {
    pub fn new(report: &IneqReport, seed: u64) -> Self {
        Self {
            name: report.name.clone(),
            seed,
            lhs: report.lhs,
            rhs: report.rhs,
            slack: report.slack,
            satisfied: report.satisfied,
            equality: report.equality,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub min_slack: f64,
    pub violations: usize,
    pub equality_cases: usize,
}

pub fn summarize(records: &[SweepRecord]) -> SweepSummary {
    SweepSummary {
        min_slack: records.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min),
        violations: records.iter().filter(|r| !r.satisfied).count(),
        equality_cases: records.iter().filter(|r| r.equality).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{linear_image, LinearMap};
    use crate::integrate::build_rule;
    use crate::orlicz::parse_function;
    use std::f64::consts::PI;

    fn func(desc: &str, arity: usize, n: usize) -> OrliczFunction {
        parse_function(desc, arity, n).unwrap().into_function().unwrap()
    }

    fn rule() -> SphericalRule {
        build_rule(2, 512, None).unwrap()
    }

    fn disk() -> StarBody {
        StarBody::ball(2, 1.0).unwrap()
    }

    fn petal() -> StarBody {
        StarBody::fourier_star(1.0, &[(3, 0.5)]).unwrap()
    }

    fn ellipse() -> StarBody {
        linear_image(&disk(), &LinearMap::diagonal(&[2.0, 1.0]).unwrap()).unwrap()
    }

    #[test]
    fn dilatate_examples() {
        let k = petal();
        let d = dilatate_test(&k, &k.scaled(3.0).unwrap(), &rule());
        assert!(d.dilatate);
        assert!((d.ratio - 3.0).abs() < 1e-12);
        assert!(!dilatate_test(&disk(), &ellipse(), &rule()).dilatate);
        let o = StarBody::ball(2, 0.0).unwrap();
        let z = dilatate_test(&disk(), &o, &rule());
        assert!(!z.dilatate && z.diagnostic.is_some());
    }

    #[test]
    fn orlicz_bm_directions() {
        let r = rule();
        let report = check_dual_orlicz_bm(&func("lp:1", 2, 2), &[disk(), petal()], &r).unwrap();
        assert_eq!(report.relation, Relation::GreaterEq);
        assert!(report.satisfied && report.slack > EQ_TOL);
        let report = check_dual_orlicz_bm(&func("lp:3", 2, 2), &[disk(), petal()], &r).unwrap();
        assert_eq!(report.relation, Relation::LessEq);
        assert!(report.satisfied && report.slack > EQ_TOL);
        let report = check_dual_orlicz_bm(&func("psi-lp:-1", 2, 2), &[disk(), petal()], &r).unwrap();
        assert_eq!(report.relation, Relation::LessEq);
        assert!(report.satisfied && report.slack > EQ_TOL);
    }

    #[test]
    fn orlicz_bm_equality_cases() {
        let r = rule();
        let k = petal();
        let report = check_dual_orlicz_bm(&func("poly:1,1", 2, 2), &[k.clone(), k.scaled(2.0).unwrap()], &r).unwrap();
        assert!(report.equality && report.dilatate == Some(true));
        assert!(report.slack.abs() <= 1e-8);
        // φ₀ linear at p = n: equality for every pair.
        let report = check_dual_orlicz_bm(&func("lp:2", 2, 2), &[disk(), petal()], &r).unwrap();
        assert!(report.slack.abs() <= 1e-9 && report.dilatate == Some(false));
    }

    #[test]
    fn orlicz_bm_hypotheses() {
        let r = rule();
        let no_curv = OrliczFunction::power_sum(2, 1.0).unwrap();
        assert!(matches!(check_dual_orlicz_bm(&no_curv, &[disk(), petal()], &r), Err(Error::Hypothesis(_))));
        let mixed = func("sum-powers:1,3", 2, 2);
        assert!(matches!(check_dual_orlicz_bm(&mixed, &[disk(), petal()], &r), Err(Error::Hypothesis(_))));
        let wrong_n = func("lp:1", 2, 3);
        assert!(matches!(check_dual_orlicz_bm(&wrong_n, &[disk(), petal()], &r), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn log_bm_examples() {
        let r = rule();
        let same = check_dual_log_bm(&petal(), &petal(), 0.3, &r).unwrap();
        assert!(same.equality);
        let (a, b) = (StarBody::ball(2, 1.5).unwrap(), StarBody::ball(2, 3.0).unwrap());
        let balls = check_dual_log_bm(&a, &b, 0.5, &r).unwrap();
        assert!((balls.lhs - PI * 4.5).abs() < 1e-12 && balls.equality);
        let strict = check_dual_log_bm(&disk(), &petal(), 0.5, &r).unwrap();
        assert!(strict.satisfied && strict.slack > EQ_TOL);
        assert!(matches!(check_dual_log_bm(&disk(), &petal(), 0.0, &r), Err(Error::Domain(_))));
    }

    #[test]
    fn orlicz_minkowski_examples() {
        let r = rule();
        for p in ["0.5", "1", "2"] {
            let rep = check_dual_orlicz_minkowski(&func(&format!("lp:{p}"), 1, 2), &disk(), &petal(), &r).unwrap();
            assert_eq!(rep.relation, Relation::LessEq);
            assert!(rep.satisfied, "p {p}: {rep:?}");
        }
        let conv = check_dual_orlicz_minkowski(&func("lp:3", 1, 2), &disk(), &ellipse(), &r).unwrap();
        assert_eq!(conv.relation, Relation::GreaterEq);
        assert!(conv.satisfied && conv.slack > EQ_TOL);
        let k = petal();
        let dil = check_dual_orlicz_minkowski(&func("lp:0.5", 1, 2), &k, &k.scaled(1.7).unwrap(), &r).unwrap();
        assert!(dil.equality && dil.slack.abs() <= 1e-9);
    }

    #[test]
    fn log_minkowski_examples() {
        let r = rule();
        let k = petal();
        let dil = check_dual_log_minkowski(&k, &k.scaled(2.0).unwrap(), &r).unwrap();
        assert!(dil.equality && (dil.lhs - 2f64.ln()).abs() < 1e-12);
        let strict = check_dual_log_minkowski(&disk(), &ellipse(), &r).unwrap();
        assert!(strict.satisfied && strict.slack > EQ_TOL);
    }

    #[test]
    fn polar_log_examples() {
        let r = rule();
        let e = ConvexBodySupport::axis_ellipsoid(&[2.0, 1.0]).unwrap();
        let e3 = ConvexBodySupport::axis_ellipsoid(&[6.0, 3.0]).unwrap();
        let dil = check_polar_log(&e, &e3, &r).unwrap();
        assert!(dil.equality && (dil.lhs - 3f64.ln()).abs() < 1e-12);
        let balls =
            check_polar_log(&ConvexBodySupport::ball(2, 1.0).unwrap(), &ConvexBodySupport::ball(2, 2.5).unwrap(), &r)
                .unwrap();
        assert!(balls.equality);
        let strict = check_polar_log(&e, &ConvexBodySupport::ball(2, 1.0).unwrap(), &r).unwrap();
        assert!(strict.satisfied && strict.slack > EQ_TOL);
    }

    #[test]
    fn first_variation_radial_addition_of_disks() {
        let t = OrliczFunction::power_sum(1, 1.0).unwrap();
        let rep = first_variation_volume(&t, &t, &disk(), &disk(), &rule(), &default_eps_schedule()).unwrap();
        assert!((rep.analytic_value - 2.0 * PI).abs() < 1e-12);
        assert!(rep.relative_error < 1e-6, "{rep:?}");
        assert!(rep.extrapolated && rep.richardson_consistent);
    }

    #[test]
    fn first_variation_power_balls() {
        let (a, b, p) = (1.5, 0.8, 3.0);
        let f = OrliczFunction::power_sum(1, p).unwrap();
        let rep = first_variation_volume(
            &f,
            &f,
            &StarBody::ball(2, a).unwrap(),
            &StarBody::ball(2, b).unwrap(),
            &rule(),
            &default_eps_schedule(),
        )
        .unwrap();
        let slope = (2.0 / p) * PI * a.powf(2.0 - p) * b.powf(p);
        assert!((rep.analytic_value - slope).abs() < 1e-12 * slope);
        assert!(rep.relative_error < 1e-5);
    }

    #[test]
    fn first_variation_petal() {
        let f = OrliczFunction::power_sum(1, 2.0).unwrap();
        let rep = first_variation_volume(&f, &f, &disk(), &petal(), &rule(), &default_eps_schedule()).unwrap();
        assert!(rep.relative_error < 1e-3, "{rep:?}");
    }

    #[test]
    fn first_variation_psi_branch_is_negative() {
        let f = OrliczFunction::power_sum(1, -1.0).unwrap();
        let rep = first_variation_volume(&f, &f, &disk(), &petal(), &rule(), &default_eps_schedule()).unwrap();
        assert!(rep.analytic_value < 0.0);
        assert!(rep.relative_error < 1e-3, "{rep:?}");
    }

    #[test]
    fn first_variation_needs_positive_k() {
        let f = OrliczFunction::power_sum(1, 1.0).unwrap();
        let o = StarBody::ball(2, 0.0).unwrap();
        assert!(matches!(
            first_variation_volume(&f, &f, &o, &disk(), &rule(), &default_eps_schedule()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn eps_schedule_shape() {
        let s = default_eps_schedule();
        assert_eq!(s[0], 1e-2);
        assert!(*s.last().unwrap() >= 1e-6 && *s.last().unwrap() < 2e-6);
    }

    #[test]
    fn sweep_summary() {
        let r = rule();
        let reports = [
            check_dual_log_minkowski(&disk(), &petal(), &r).unwrap(),
            check_dual_log_minkowski(&disk(), &disk(), &r).unwrap(),
        ];
        let records: Vec<SweepRecord> =
            reports.iter().enumerate().map(|(i, r)| SweepRecord::new(r, i as u64)).collect();
        let s = summarize(&records);
        assert_eq!(s.violations, 0);
        assert_eq!(s.equality_cases, 1);
        assert!(s.min_slack.abs() <= 1e-12);
    }
}
