use serde::Serialize;

use super::{FunctionClass, OrliczFunction};
use crate::error::{Error, Result};
use crate::numeric::{solve_monotone, Monotone};

/// Diagonal level `τ` with `φ(τ,…,τ) = target / W`, and a bracket for `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveBracket {
    pub tau: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Reusable solver for `Σ_k w_k φ(r_k / λ) = target`.
///
/// With no weights there is a single atom of weight 1 and `r` has length
/// `m`; with `K` weights, `r` is the concatenation of `K` m-vectors.
#[derive(Debug, Clone)]
pub struct LevelSolver {
    phi: OrliczFunction,
    weights: Option<Vec<f64>>,
    target: f64,
    tau: f64,
}

impl LevelSolver {
    pub fn new(phi: &OrliczFunction, weights: Option<&[f64]>, target: f64) -> Result<Self> {
        if !(target > 0.0 && target.is_finite()) {
            return Err(Error::Domain(format!("target must be positive, got {target}")));
        }
        if let Some(w) = weights {
            if w.is_empty() || w.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                return Err(Error::Domain(format!("weights must be positive and finite, got {w:?}")));
            }
        }
        let total: f64 = weights.map_or(1.0, |w| w.iter().sum());
        let m = phi.arity();
        let diag = |t: f64| phi.eval(&vec![t; m]);
        let monotone = match phi.class() {
            FunctionClass::Phi => Monotone::Increasing,
            FunctionClass::Psi => Monotone::Decreasing,
        };
        let tau = solve_monotone(diag, monotone, target / total, 1.0).map_err(|e| match e {
            Error::Divergence { doublings, context } => {
                Error::Divergence { doublings, context: format!("diagonal level of {}: {context}", phi.label()) }
            }
            other => other,
        })?;
        Ok(Self { phi: phi.clone(), weights: weights.map(<[f64]>::to_vec), target, tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn phi(&self) -> &OrliczFunction {
        &self.phi
    }

    fn atoms(&self) -> usize {
        self.weights.as_ref().map_or(1, Vec::len)
    }

    fn weight(&self, k: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[k])
    }

    /// Bracket `[min r / τ, max r / τ]` implied by comparison with the diagonal.
    pub fn bracket(&self, r: &[f64]) -> SolveBracket {
        let lo = r.iter().cloned().fold(f64::INFINITY, f64::min) / self.tau;
        let hi = r.iter().cloned().fold(0.0, f64::max) / self.tau;
        SolveBracket { tau: self.tau, lo, hi }
    }

    pub fn solve(&self, r: &[f64]) -> Result<f64> {
        let m = self.phi.arity();
        let atoms = self.atoms();
        if r.len() != m * atoms {
            return Err(Error::Dimension(format!(
                "level equation expects {} inputs ({atoms} atoms of arity {m}), got {}",
                m * atoms,
                r.len()
            )));
        }
        match self.phi.class() {
            FunctionClass::Phi => {
                if let Some(x) = r.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
                    return Err(Error::Domain(format!("Φ-class input must be finite and >= 0, got {x}")));
                }
                if r.iter().all(|x| *x == 0.0) {
                    return Ok(0.0);
                }
                // Identity property: φ(e_j) = 1 forces λ = r_j exactly.
                if self.phi.is_normalized() && atoms == 1 && self.weight(0) == 1.0 && self.target == 1.0 {
                    let mut nonzero = r.iter().filter(|x| **x != 0.0);
                    if let (Some(x), None) = (nonzero.next(), nonzero.next()) {
                        return Ok(*x);
                    }
                }
            }
            FunctionClass::Psi => {
                if let Some(x) = r.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
                    return Err(Error::Domain(format!("Ψ-class input must be finite and > 0, got {x}")));
                }
            }
        }
        let mut buf = vec![0.0; m];
        let level = |lambda: f64| -> f64 {
            let mut total = 0.0;
            for k in 0..atoms {
                for (b, x) in buf.iter_mut().zip(&r[k * m..(k + 1) * m]) {
                    *b = x / lambda;
                }
                total += self.weight(k) * self.phi.eval(&buf);
            }
            total
        };
        let monotone = match self.phi.class() {
            FunctionClass::Phi => Monotone::Decreasing,
            FunctionClass::Psi => Monotone::Increasing,
        };
        let seed = self.bracket(r).hi;
        solve_monotone(level, monotone, self.target, seed).map_err(|e| match e {
            Error::Divergence { doublings, context } => Error::Divergence {
                doublings,
                context: format!("level equation of {} at {r:?}: {context}", self.phi.label()),
            },
            other => other,
        })
    }

    /// `Σ_k w_k φ(r_k / λ)`.
    pub fn level(&self, r: &[f64], lambda: f64) -> f64 {
        let m = self.phi.arity();
        (0..self.atoms())
            .map(|k| {
                let x: Vec<f64> = r[k * m..(k + 1) * m].iter().map(|v| v / lambda).collect();
                self.weight(k) * self.phi.eval(&x)
            })
            .sum()
    }
}

/// The unique `λ` with `Σ w φ(r / λ) = target` (see [`LevelSolver`]).
pub fn solve_level(phi: &OrliczFunction, r: &[f64], weights: Option<&[f64]>, target: f64) -> Result<f64> {
    LevelSolver::new(phi, weights, target)?.solve(r)
}
