//! Built-in functions addressable by descriptor string.

use super::{Curvature, FunctionClass, OrliczFunction, ScalarFunction};
use crate::error::{Error, Result};

/// What a registry descriptor resolves to.
#[derive(Debug, Clone)]
pub enum Registered {
    Function(OrliczFunction),
    /// `log-t:t`, handled only by the log combination.
    LogCombination(f64),
    /// Real-valued functions usable only in dual mixed volumes.
    Scalar(ScalarFunction),
}

impl Registered {
    pub fn into_function(self) -> Result<OrliczFunction> {
        match self {
            Registered::Function(f) => Ok(f),
            Registered::LogCombination(t) => {
                Err(Error::InvalidFunction(format!("log-t:{t} is the log combination, not an Orlicz function")))
            }
            Registered::Scalar(s) => {
                Err(Error::InvalidFunction(format!("{} is real-valued, not an Orlicz function", s.label())))
            }
        }
    }

    pub fn into_scalar(self) -> Result<ScalarFunction> {
        match self {
            Registered::Function(f) => f.as_scalar(),
            Registered::Scalar(s) => Ok(s),
            Registered::LogCombination(t) => {
                Err(Error::InvalidFunction(format!("log-t:{t} is the log combination, not a scalar function")))
            }
        }
    }
}

/// Curvature of `x ↦ Σ x_j^{p/n}`.
pub fn lp_curvature(p: f64, n: usize) -> Curvature {
    let q = p / n as f64;
    if q == 1.0 {
        Curvature::Concave
    } else if q > 0.0 && q < 1.0 {
        Curvature::StrictlyConcave
    } else {
        Curvature::StrictlyConvex
    }
}

fn number(s: &str, desc: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Parse(format!("bad number '{s}' in function descriptor '{desc}'")))
}

fn pair(s: &str, desc: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("expected two comma-separated numbers in '{desc}'")));
    }
    Ok((number(parts[0], desc)?, number(parts[1], desc)?))
}

/// Parses a registry descriptor for the given arity and dimension `n` (the
/// dimension fixes the declared φ₀ curvature).
///
/// * `lp:p` (p > 0): `Σ x_j^p`
/// * `psi-lp:p` (p < 0): `Σ x_j^p`, Ψ-class
/// * `sum-powers:p1,p2`: `x₁^{p1} + x₂^{p2}`, or `(t^{p1} + t^{p2})/2` when unary
/// * `poly:c1,c2`: `Σ (c1 x_j + c2 x_j²)/(c1 + c2)`
/// * `log-t:t`: the log combination with parameter `t ∈ (0,1)`
/// * `log`: the natural logarithm as a scalar function
pub fn parse_function(desc: &str, arity: usize, n: usize) -> Result<Registered> {
    if arity == 0 || n < 2 {
        return Err(Error::Parse(format!("arity {arity} / dimension {n} not supported")));
    }
    let (name, args) = desc.split_once(':').unwrap_or((desc, ""));
    match name {
        "lp" => {
            let p = number(args, desc)?;
            if p <= 0.0 {
                return Err(Error::Parse(format!("lp needs p > 0, got {p}; use psi-lp for p < 0")));
            }
            let f = OrliczFunction::power_sum(arity, p)?.with_phi0_curvature(n, lp_curvature(p, n));
            Ok(Registered::Function(f))
        }
        "psi-lp" => {
            let p = number(args, desc)?;
            if p >= 0.0 {
                return Err(Error::Parse(format!("psi-lp needs p < 0, got {p}")));
            }
            let f = OrliczFunction::power_sum(arity, p)?.with_phi0_curvature(n, lp_curvature(p, n));
            Ok(Registered::Function(f))
        }
        "sum-powers" => {
            let (p1, p2) = pair(args, desc)?;
            if p1 <= 0.0 || p2 <= 0.0 {
                return Err(Error::Parse(format!("sum-powers needs positive exponents in '{desc}'")));
            }
            let nf = n as f64;
            let curvature = if p1 < nf && p2 < nf {
                Curvature::StrictlyConcave
            } else if p1 > nf && p2 > nf {
                Curvature::StrictlyConvex
            } else if p1 <= nf && p2 <= nf {
                Curvature::Concave
            } else if p1 >= nf && p2 >= nf {
                Curvature::Convex
            } else {
                Curvature::None
            };
            let f = match arity {
                1 => OrliczFunction::new(1, FunctionClass::Phi, desc, move |x| 0.5 * (x[0].powf(p1) + x[0].powf(p2)))?
                    .with_derivatives(Some(0.5 * (p1 + p2)), Some(0.5 * (p1 + p2))),
                2 => OrliczFunction::new(2, FunctionClass::Phi, desc, move |x| x[0].powf(p1) + x[1].powf(p2))?,
                _ => return Err(Error::Parse(format!("sum-powers supports arity 1 or 2, got {arity}"))),
            };
            Ok(Registered::Function(f.with_convexity(p1 >= 1.0 && p2 >= 1.0).with_phi0_curvature(n, curvature)))
        }
        "poly" => {
            let (c1, c2) = pair(args, desc)?;
            if c1 < 0.0 || c2 < 0.0 || c1 + c2 <= 0.0 {
                return Err(Error::Parse(format!("poly needs c1, c2 >= 0 with c1 + c2 > 0 in '{desc}'")));
            }
            let s = c1 + c2;
            let (a, b) = (c1 / s, c2 / s);
            // φ₀(x) = a x^{1/n} + b x^{2/n}: strictly concave unless only the
            // quadratic term survives in the plane.
            let curvature = if c1 == 0.0 && n == 2 { Curvature::Concave } else { Curvature::StrictlyConcave };
            let f = OrliczFunction::new(arity, FunctionClass::Phi, desc, move |x| {
                x.iter().map(|t| a * t + b * t * t).sum()
            })?
            .with_convexity(true)
            .with_phi0_curvature(n, curvature);
            let f = if arity == 1 {
                let d = a + 2.0 * b;
                f.with_derivatives(Some(d), Some(d))
            } else {
                f
            };
            Ok(Registered::Function(f))
        }
        "log-t" => {
            let t = number(args, desc)?;
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::Parse(format!("log-t needs t in (0,1), got {t}")));
            }
            Ok(Registered::LogCombination(t))
        }
        "log" if args.is_empty() => Ok(Registered::Scalar(ScalarFunction::log())),
        _ => Err(Error::Parse(format!("unknown function descriptor '{desc}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn func(desc: &str, arity: usize, n: usize) -> OrliczFunction {
        parse_function(desc, arity, n).unwrap().into_function().unwrap()
    }

    #[test]
    fn lp_curvatures() {
        assert_eq!(lp_curvature(1.0, 2), Curvature::StrictlyConcave);
        assert_eq!(lp_curvature(2.0, 2), Curvature::Concave);
        assert_eq!(lp_curvature(3.0, 2), Curvature::StrictlyConvex);
        assert_eq!(lp_curvature(-1.0, 2), Curvature::StrictlyConvex);
        assert_eq!(func("lp:0.5", 2, 3).phi0_curvature(), Some((3, Curvature::StrictlyConcave)));
    }

    #[test]
    fn declared_curvatures_pass_the_probe() {
        for (desc, arity) in [
            ("lp:0.5", 1),
            ("lp:2", 2),
            ("lp:3", 2),
            ("psi-lp:-1", 1),
            ("psi-lp:-2", 2),
            ("sum-powers:0.5,1.5", 2),
            ("sum-powers:3,4", 1),
            ("poly:1,1", 1),
            ("poly:1,1", 2),
            ("poly:0,1", 2),
        ] {
            for n in [2, 3] {
                let f = func(desc, arity, n);
                assert!(f.verify_phi0_curvature(), "{desc} arity {arity} n {n}");
            }
        }
    }

    #[test]
    fn poly_is_normalized() {
        let f = func("poly:3,1", 1, 2);
        assert!(f.is_normalized());
        assert!((f.eval1(2.0) - (0.75 * 2.0 + 0.25 * 4.0)).abs() < 1e-15);
        assert_eq!(f.derivative_at_one(crate::orlicz::Side::Left).unwrap().value, 1.25);
    }

    #[test]
    fn special_entries() {
        assert!(matches!(parse_function("log-t:0.5", 2, 2).unwrap(), Registered::LogCombination(t) if t == 0.5));
        assert!(matches!(parse_function("log", 1, 2).unwrap(), Registered::Scalar(_)));
        assert!(parse_function("log-t:0.5", 2, 2).unwrap().into_function().is_err());
        assert!(matches!(parse_function("lp:-1", 2, 2), Err(Error::Parse(_))));
        assert!(matches!(parse_function("psi-lp:1", 2, 2), Err(Error::Parse(_))));
        assert!(matches!(parse_function("nope:1", 2, 2), Err(Error::Parse(_))));
        assert!(matches!(parse_function("lp:abc", 2, 2), Err(Error::Parse(_))));
    }

    #[test]
    fn mixed_sum_powers_have_no_curvature() {
        assert_eq!(func("sum-powers:1,3", 2, 2).phi0_curvature(), Some((2, Curvature::None)));
    }
}
