use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{FunctionClass, LevelSolver, OrliczFunction};
use crate::error::{Error, Result};
use crate::geometry::StarBody;
use crate::integrate::SphericalRule;

/// Relative widening applied to composed bounds so that solver round-off
/// never places a radial outside its recorded range.
const BOUND_SLACK: f64 = 1e-9;

fn common_dimension(bodies: &[&StarBody]) -> Result<usize> {
    let n = bodies.first().ok_or_else(|| Error::Dimension("no bodies given".to_string()))?.dimension();
    if let Some(b) = bodies.iter().find(|b| b.dimension() != n) {
        return Err(Error::Dimension(format!("bodies of dimension {n} and {} cannot be combined", b.dimension())));
    }
    Ok(n)
}

fn solved_body(solver: LevelSolver, bodies: Vec<StarBody>, label: String) -> Result<StarBody> {
    let refs: Vec<&StarBody> = bodies.iter().collect();
    let n = common_dimension(&refs)?;
    if solver.phi().class() == FunctionClass::Psi {
        if let Some(b) = bodies.iter().find(|b| !b.is_positive()) {
            return Err(Error::Domain(format!(
                "Ψ-class combination needs positive bodies; {} has lower bound {}",
                b.label(),
                b.lower_bound()
            )));
        }
    }
    let tau = solver.tau();
    let lower = bodies.iter().map(StarBody::lower_bound).fold(f64::INFINITY, f64::min) / tau;
    let upper = bodies.iter().map(StarBody::upper_bound).fold(0.0, f64::max) / tau;
    let continuous = bodies.iter().all(StarBody::is_continuous);
    StarBody::from_fn(n, label, lower * (1.0 - BOUND_SLACK), upper * (1.0 + BOUND_SLACK), continuous, move |u| {
        let r: Vec<f64> = bodies.iter().map(|b| b.radial_unit(u)).collect();
        solver.solve(&r).unwrap_or(f64::NAN)
    })
}

/// Radial Orlicz sum: `ρ(u)` is the `λ` with `φ(ρ₁(u)/λ, …, ρ_m(u)/λ) = 1`.
///
/// The oracle yields NaN if a node solve fails; quadrature reports that
/// node as an evaluation error.
pub fn orlicz_sum(phi: &OrliczFunction, bodies: &[StarBody]) -> Result<StarBody> {
    if bodies.len() != phi.arity() {
        return Err(Error::Dimension(format!(
            "{} has arity {}, got {} bodies",
            phi.label(),
            phi.arity(),
            bodies.len()
        )));
    }
    let label = format!("sum[{}]({})", phi.label(), bodies.iter().map(StarBody::label).collect::<Vec<_>>().join(","));
    solved_body(LevelSolver::new(phi, None, 1.0)?, bodies.to_vec(), label)
}

/// A finite positive combination of Dirac masses on m-tuples of bodies.
#[derive(Debug, Clone)]
pub struct DiscreteStarMeasure {
    atoms: Vec<(f64, Vec<StarBody>)>,
}

impl DiscreteStarMeasure {
    pub fn new(atoms: Vec<(f64, Vec<StarBody>)>) -> Result<Self> {
        let first = atoms.first().ok_or_else(|| Error::Domain("measure needs at least one atom".to_string()))?;
        let m = first.1.len();
        if m == 0 {
            return Err(Error::Dimension("atoms must hold at least one body".to_string()));
        }
        for (w, bodies) in &atoms {
            if !(*w > 0.0 && w.is_finite()) {
                return Err(Error::Domain(format!("atom weight must be positive, got {w}")));
            }
            if bodies.len() != m {
                return Err(Error::Dimension(format!("atoms have {m} and {} bodies", bodies.len())));
            }
        }
        let all: Vec<&StarBody> = atoms.iter().flat_map(|(_, b)| b.iter()).collect();
        common_dimension(&all)?;
        Ok(Self { atoms })
    }

    /// Unit point mass at one tuple.
    pub fn dirac(bodies: Vec<StarBody>) -> Result<Self> {
        Self::new(vec![(1.0, bodies)])
    }

    pub fn arity(&self) -> usize {
        self.atoms[0].1.len()
    }

    pub fn atoms(&self) -> &[(f64, Vec<StarBody>)] {
        &self.atoms
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|(w, _)| w).sum()
    }
}

/// Orlicz combination under a discrete measure:
/// `Σ_k w_k φ(ρ_{k,1}(u)/λ, …, ρ_{k,m}(u)/λ) = 1`.
pub fn orlicz_combination_measure(phi: &OrliczFunction, mu: &DiscreteStarMeasure) -> Result<StarBody> {
    if mu.arity() != phi.arity() {
        return Err(Error::Dimension(format!(
            "{} has arity {}, measure atoms have {} bodies",
            phi.label(),
            phi.arity(),
            mu.arity()
        )));
    }
    let weights: Vec<f64> = mu.atoms.iter().map(|(w, _)| *w).collect();
    let bodies: Vec<StarBody> = mu.atoms.iter().flat_map(|(_, b)| b.iter().cloned()).collect();
    let label = format!("measure[{}]({} atoms)", phi.label(), weights.len());
    solved_body(LevelSolver::new(phi, Some(&weights), 1.0)?, bodies, label)
}

/// Radial Orlicz linear combination: `φ₁(ρ_K/λ) + ε φ₂(ρ_L/λ) = 1`.
pub fn orlicz_linear_combination(
    phi1: &OrliczFunction,
    phi2: &OrliczFunction,
    k: &StarBody,
    eps: f64,
    l: &StarBody,
) -> Result<StarBody> {
    if phi1.arity() != 1 || phi2.arity() != 1 {
        return Err(Error::InvalidFunction("linear combinations need unary functions".to_string()));
    }
    if phi1.class() != phi2.class() {
        return Err(Error::InvalidFunction(format!(
            "{} and {} belong to different classes",
            phi1.label(),
            phi2.label()
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("ε must be positive, got {eps}")));
    }
    let (f1, f2) = (phi1.oracle(), phi2.oracle());
    let level =
        OrliczFunction::unchecked(2, phi1.class(), format!("{}+{eps}*{}", phi1.label(), phi2.label()), move |x| {
            f1(&x[..1]) + eps * f2(&x[1..])
        });
    let label = format!("{} +[{}] {eps}.{}", k.label(), level.label(), l.label());
    solved_body(LevelSolver::new(&level, None, 1.0)?, vec![k.clone(), l.clone()], label)
}

/// Radial log combination `ρ_K^{1−t} ρ_L^t`.
pub fn log_combination(k: &StarBody, l: &StarBody, t: f64) -> Result<StarBody> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("log combination needs t in (0,1), got {t}")));
    }
    let n = common_dimension(&[k, l])?;
    for b in [k, l] {
        if !b.is_positive() {
            return Err(Error::Domain(format!("log combination needs positive bodies; {} is not", b.label())));
        }
    }
    let mean = move |a: f64, b: f64| a.powf(1.0 - t) * b.powf(t);
    let (kc, lc) = (k.clone(), l.clone());
    StarBody::from_fn(
        n,
        format!("log[{t}]({},{})", k.label(), l.label()),
        mean(k.lower_bound(), l.lower_bound()),
        mean(k.upper_bound(), l.upper_bound()),
        k.is_continuous() && l.is_continuous(),
        move |u| mean(kc.radial_unit(u), lc.radial_unit(u)),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssociativityReport {
    pub max_gap: f64,
    /// Node index attaining `max_gap`.
    pub node: usize,
}

/// Largest node gap between `(K ∔ L) ∔ M` and `K ∔ (L ∔ M)`.
pub fn check_associativity(
    phi: &OrliczFunction,
    k: &StarBody,
    l: &StarBody,
    m: &StarBody,
    probe: &SphericalRule,
) -> Result<AssociativityReport> {
    if phi.arity() != 2 {
        return Err(Error::InvalidFunction(format!("{} is not binary", phi.label())));
    }
    let left = orlicz_sum(phi, &[orlicz_sum(phi, &[k.clone(), l.clone()])?, m.clone()])?;
    let right = orlicz_sum(phi, &[k.clone(), orlicz_sum(phi, &[l.clone(), m.clone()])?])?;
    let mut report = AssociativityReport { max_gap: 0.0, node: 0 };
    for (i, u) in probe.nodes().iter().enumerate() {
        let gap = (left.radial(u) - right.radial(u)).abs();
        if gap.is_nan() {
            return Err(Error::Evaluation { node: i, message: "nested sum is NaN".to_string() });
        }
        if gap > report.max_gap {
            report = AssociativityReport { max_gap: gap, node: i };
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssociativityWitness {
    pub radii: [f64; 3],
    pub gap: f64,
    pub trials: usize,
}

/// Searches seeded ball triples with radii in `[0.2, 5]` for the largest
/// associativity gap.
pub fn find_associativity_witness(
    phi: &OrliczFunction,
    probe: &SphericalRule,
    seed: u64,
    trials: usize,
) -> Result<AssociativityWitness> {
    let n = probe.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = AssociativityWitness { radii: [0.0; 3], gap: 0.0, trials };
    for _ in 0..trials {
        let radii = [rng.random_range(0.2..5.0), rng.random_range(0.2..5.0), rng.random_range(0.2..5.0)];
        let [a, b, c] = radii.map(|r| StarBody::ball(n, r));
        let report = check_associativity(phi, &a?, &b?, &c?, probe)?;
        if report.max_gap > best.gap {
            best.radii = radii;
            best.gap = report.max_gap;
        }
    }
    Ok(best)
}
