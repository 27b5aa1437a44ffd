//! Orlicz function classes, the level-equation solver and the Orlicz-type
//! combinations of star bodies.
//!
//! A Φ-class function is increasing in each coordinate with `φ(o) = 0`; a
//! Ψ-class function is decreasing on the open orthant. Every combination
//! here reduces, node by node, to one monotone scalar equation in `λ` that
//! [`solve_level`] handles by bracketed bisection.

mod combine;
mod registry;
mod solve;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

pub use combine::{
    check_associativity, find_associativity_witness, log_combination, orlicz_combination_measure,
    orlicz_linear_combination, orlicz_sum, AssociativityReport, AssociativityWitness, DiscreteStarMeasure,
};
pub use registry::{lp_curvature, parse_function, Registered};
pub use solve::{solve_level, LevelSolver, SolveBracket};

use crate::error::{Error, Result};

/// Oracle for an m-ary Orlicz function.
pub type EvalFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FunctionClass {
    /// Increasing, `φ(o) = 0`, unbounded along rays.
    Phi,
    /// Decreasing on `(0,∞)^m`, blowing up at `o` and vanishing at infinity.
    Psi,
}

/// Shape of `x ↦ φ(x^{1/n})` for a fixed dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Curvature {
    Concave,
    Convex,
    StrictlyConcave,
    StrictlyConvex,
    None,
}

impl Curvature {
    pub fn is_concave(self) -> bool {
        matches!(self, Curvature::Concave | Curvature::StrictlyConcave)
    }

    pub fn is_convex(self) -> bool {
        matches!(self, Curvature::Convex | Curvature::StrictlyConvex)
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Curvature::StrictlyConcave | Curvature::StrictlyConvex)
    }
}

/// One-sided derivative at 1 and whether it was estimated numerically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Derivative {
    pub value: f64,
    pub estimated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// An m-ary function of class Φ or Ψ with its structural metadata.
#[derive(Clone)]
pub struct OrliczFunction {
    arity: usize,
    class: FunctionClass,
    eval: Arc<EvalFn>,
    normalized: bool,
    convex: Option<bool>,
    phi0: Option<(usize, Curvature)>,
    left_deriv: Option<f64>,
    right_deriv: Option<f64>,
    power: Option<f64>,
    label: String,
}

impl fmt::Debug for OrliczFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrliczFunction")
            .field("label", &self.label)
            .field("arity", &self.arity)
            .field("class", &self.class)
            .field("normalized", &self.normalized)
            .field("convex", &self.convex)
            .field("phi0", &self.phi0)
            .finish()
    }
}

const PROBE_EXP: i32 = 20;

impl OrliczFunction {
    /// Wraps an oracle after spot-checking class membership on the grid
    /// `{2^-20, 2^-19, …, 2^20}` along each axis.
    pub fn new<F>(arity: usize, class: FunctionClass, label: impl Into<String>, eval: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        let f = Self::unchecked(arity, class, label, eval);
        f.spot_check()?;
        Ok(f)
    }

    /// Skips membership checks; used for derived level functions such as
    /// `φ₁(x₁) + ε φ₂(x₂)` whose limits hold but fall outside the probe grid.
    pub(crate) fn unchecked<F>(arity: usize, class: FunctionClass, label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        let eval: Arc<EvalFn> = Arc::new(eval);
        let normalized = match class {
            FunctionClass::Phi => (0..arity).all(|j| {
                let mut e = vec![0.0; arity];
                e[j] = 1.0;
                (eval(&e) - 1.0).abs() <= 1e-12
            }),
            FunctionClass::Psi => arity == 1 && (eval(&[1.0]) - 1.0).abs() <= 1e-12,
        };
        Self {
            arity,
            class,
            eval,
            normalized,
            convex: None,
            phi0: None,
            left_deriv: None,
            right_deriv: None,
            power: None,
            label: label.into(),
        }
    }

    fn spot_check(&self) -> Result<()> {
        let m = self.arity;
        if m == 0 {
            return Err(Error::InvalidFunction("arity must be >= 1".to_string()));
        }
        let fail = |msg: String| Err(Error::InvalidFunction(format!("{}: {msg}", self.label)));
        let grid: Vec<f64> = (-PROBE_EXP..=PROBE_EXP).map(|k| 2f64.powi(k)).collect();
        let (rest, sign) = match self.class {
            FunctionClass::Phi => (0.0, 1.0),
            FunctionClass::Psi => (1.0, -1.0),
        };
        if self.class == FunctionClass::Phi {
            let origin = self.eval(&vec![0.0; m]);
            if origin.abs() > 1e-12 {
                return fail(format!("φ(o) = {origin}, expected 0"));
            }
        }
        for j in 0..m {
            let values: Vec<f64> = grid
                .iter()
                .map(|&t| {
                    let mut x = vec![rest; m];
                    x[j] = t;
                    self.eval(&x)
                })
                .collect();
            if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return fail(format!("value {v} on the probe grid along axis {j}"));
            }
            if values.windows(2).any(|w| sign * (w[1] - w[0]) < 0.0) {
                return fail(format!("not monotone along axis {j}"));
            }
            if !(sign * (values[values.len() - 1] - values[0]) > 0.0) {
                return fail(format!("not strictly monotone along axis {j}"));
            }
        }
        let big = self.eval(&vec![grid[grid.len() - 1]; m]);
        let small = self.eval(&vec![grid[0]; m]);
        let limits_ok = match self.class {
            FunctionClass::Phi => big > 1.0,
            FunctionClass::Psi => small > 1.0 && big < 1.0,
        };
        if !limits_ok {
            return fail("level 1 is not crossed along the diagonal probe".to_string());
        }
        Ok(())
    }

    /// `Σ_j x_j^p`: Φ-class for `p > 0`, Ψ-class for `p < 0`.
    pub fn power_sum(arity: usize, p: f64) -> Result<Self> {
        if p == 0.0 || !p.is_finite() {
            return Err(Error::InvalidFunction(format!("power must be finite and nonzero, got {p}")));
        }
        let class = if p > 0.0 { FunctionClass::Phi } else { FunctionClass::Psi };
        let label = if p > 0.0 { format!("lp:{p}") } else { format!("psi-lp:{p}") };
        let mut f = Self::new(arity, class, label, move |x| x.iter().map(|t| t.powf(p)).sum())?;
        f.convex = Some(!(0.0..1.0).contains(&p));
        if arity == 1 {
            f.left_deriv = Some(p);
            f.right_deriv = Some(p);
            f.power = Some(p);
        }
        Ok(f)
    }

    /// `Σ_j φ_j(x_j)` for unary components of one class.
    pub fn separable(components: &[OrliczFunction]) -> Result<Self> {
        let class = components.first().ok_or_else(|| Error::InvalidFunction("no components".to_string()))?.class;
        if components.iter().any(|c| c.arity != 1 || c.class != class) {
            return Err(Error::InvalidFunction("separable components must be unary and of one class".to_string()));
        }
        let label = components.iter().map(|c| c.label.clone()).collect::<Vec<_>>().join("+");
        let parts: Vec<Arc<EvalFn>> = components.iter().map(|c| c.eval.clone()).collect();
        let mut f =
            Self::new(components.len(), class, label, move |x| parts.iter().zip(x).map(|(p, t)| p(&[*t])).sum())?;
        f.convex = components.iter().map(|c| c.convex).try_fold(true, |acc, c| c.map(|c| acc && c));
        Ok(f)
    }

    pub fn with_phi0_curvature(mut self, n: usize, curvature: Curvature) -> Self {
        self.phi0 = Some((n, curvature));
        if !self.verify_phi0_curvature() {
            log::warn!("{}: declared φ₀ curvature {curvature:?} (n = {n}) fails the midpoint probe", self.label);
        }
        self
    }

    pub fn with_convexity(mut self, convex: bool) -> Self {
        self.convex = Some(convex);
        self
    }

    /// Records analytic one-sided derivatives at 1 (unary only).
    pub fn with_derivatives(mut self, left: Option<f64>, right: Option<f64>) -> Self {
        self.left_deriv = left;
        self.right_deriv = right;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    pub fn eval1(&self, t: f64) -> f64 {
        (self.eval)(&[t])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn class(&self) -> FunctionClass {
        self.class
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn convex(&self) -> Option<bool> {
        self.convex
    }

    /// Declared curvature of `x ↦ φ(x^{1/n})` and the `n` it was declared for.
    pub fn phi0_curvature(&self) -> Option<(usize, Curvature)> {
        self.phi0
    }

    /// Exponent when this is the unary power `t^p`.
    pub fn power(&self) -> Option<f64> {
        self.power
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub(crate) fn oracle(&self) -> Arc<EvalFn> {
        self.eval.clone()
    }

    /// One-sided derivative at 1: the recorded value when available, else
    /// one-sided differences at h = 1e-4, 1e-5, 1e-6 with a Richardson step.
    pub fn derivative_at_one(&self, side: Side) -> Result<Derivative> {
        if self.arity != 1 {
            return Err(Error::Hypothesis(format!(
                "derivative at 1 needs a unary function, {} has arity {}",
                self.label, self.arity
            )));
        }
        let known = match side {
            Side::Left => self.left_deriv,
            Side::Right => self.right_deriv,
        };
        if let Some(value) = known {
            return Ok(Derivative { value, estimated: false });
        }
        let f1 = self.eval1(1.0);
        let diff = |h: f64| match side {
            Side::Left => (f1 - self.eval1(1.0 - h)) / h,
            Side::Right => (self.eval1(1.0 + h) - f1) / h,
        };
        let (d4, d5, d6) = (diff(1e-4), diff(1e-5), diff(1e-6));
        let coarse = (10.0 * d5 - d4) / 9.0;
        let fine = (10.0 * d6 - d5) / 9.0;
        if !(coarse.is_finite() && fine.is_finite()) {
            return Err(Error::Hypothesis(format!("derivative of {} at 1 is not finite", self.label)));
        }
        if (coarse - fine).abs() > 1e-6 * coarse.abs().max(1.0) {
            log::warn!("{}: Richardson derivative estimates disagree ({coarse} vs {fine})", self.label);
        }
        Ok(Derivative { value: coarse, estimated: true })
    }

    /// Midpoint probe of the declared φ₀ curvature; `true` when consistent.
    pub fn verify_phi0_curvature(&self) -> bool {
        let Some((n, curvature)) = self.phi0 else {
            return true;
        };
        let sign = if curvature.is_concave() {
            1.0
        } else if curvature.is_convex() {
            -1.0
        } else {
            return true;
        };
        let m = self.arity;
        let levels = [0.25, 0.5, 1.0, 2.0, 4.0];
        let points: Vec<Vec<f64>> = if m <= 2 {
            let mut pts = Vec::new();
            for &a in &levels {
                if m == 1 {
                    pts.push(vec![a]);
                } else {
                    for &b in &levels {
                        pts.push(vec![a, b]);
                    }
                }
            }
            pts
        } else {
            levels.iter().map(|&a| vec![a; m]).collect()
        };
        let inv_n = 1.0 / n as f64;
        let phi0 = |x: &[f64]| self.eval(&x.iter().map(|t| t.powf(inv_n)).collect::<Vec<_>>());
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                let mid: Vec<f64> = a.iter().zip(b).map(|(s, t)| 0.5 * (s + t)).collect();
                let avg = 0.5 * (phi0(a) + phi0(b));
                if sign * (phi0(&mid) - avg) < -1e-10 * (1.0 + avg.abs()) {
                    return false;
                }
            }
        }
        true
    }

    /// Real-valued view of a unary function for dual mixed volumes.
    pub fn as_scalar(&self) -> Result<ScalarFunction> {
        if self.arity != 1 {
            return Err(Error::InvalidFunction(format!("{} has arity {}, expected 1", self.label, self.arity)));
        }
        let eval = self.eval.clone();
        Ok(ScalarFunction {
            label: self.label.clone(),
            defined_at_zero: self.class == FunctionClass::Phi,
            power: self.power,
            f: Arc::new(move |t| eval(&[t])),
        })
    }
}

/// A real-valued function on `(0,∞)`, possibly negative (e.g. `log`).
#[derive(Clone)]
pub struct ScalarFunction {
    label: String,
    defined_at_zero: bool,
    power: Option<f64>,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("label", &self.label)
            .field("defined_at_zero", &self.defined_at_zero)
            .finish()
    }
}

impl ScalarFunction {
    pub fn new<F>(label: impl Into<String>, defined_at_zero: bool, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { label: label.into(), defined_at_zero, power: None, f: Arc::new(f) }
    }

    pub fn log() -> Self {
        Self::new("log", false, f64::ln)
    }

    /// `t ↦ t^p`; defined at 0 for `p > 0`.
    pub fn power(p: f64) -> Self {
        let mut f = Self::new(format!("pow:{p}"), p > 0.0, move |t| t.powf(p));
        f.power = Some(p);
        f
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn defined_at_zero(&self) -> bool {
        self.defined_at_zero
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn exponent(&self) -> Option<f64> {
        self.power
    }
}
