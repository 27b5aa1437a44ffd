use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{euclidean_norm, Direction};
use crate::numeric::{gauss_legendre, sphere_area};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RuleKind {
    /// Uniform angles on S¹.
    Trapezoid2d,
    /// Gauss–Legendre in the polar cosine times uniform azimuths on S².
    Product3d,
    /// Seeded uniform sampling with equal weights.
    MonteCarlo,
}

impl RuleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleKind::Trapezoid2d => "trapezoid2d",
            RuleKind::Product3d => "product3d",
            RuleKind::MonteCarlo => "montecarlo",
        }
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trapezoid2d" => Ok(RuleKind::Trapezoid2d),
            "product3d" => Ok(RuleKind::Product3d),
            "montecarlo" => Ok(RuleKind::MonteCarlo),
            other => Err(Error::Parse(format!("unknown rule kind '{other}'"))),
        }
    }
}

/// Quadrature nodes and surface-measure weights on S^{n-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalRule {
    dimension: usize,
    kind: RuleKind,
    resolution: usize,
    seed: Option<u64>,
    nodes: Vec<Direction>,
    weights: Vec<f64>,
    polar_angles: Option<Vec<f64>>,
}

/// Default rule per dimension: trapezoid (n = 2), product (n = 3), seeded
/// Monte Carlo (n ≥ 4, seed required).
pub fn build_rule(n: usize, resolution: usize, seed: Option<u64>) -> Result<SphericalRule> {
    let kind = match n {
        0 | 1 => return Err(Error::Dimension(format!("rules need n >= 2, got {n}"))),
        2 => RuleKind::Trapezoid2d,
        3 => RuleKind::Product3d,
        _ => RuleKind::MonteCarlo,
    };
    SphericalRule::new(n, kind, resolution, seed)
}

impl SphericalRule {
    pub fn new(n: usize, kind: RuleKind, resolution: usize, seed: Option<u64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension(format!("rules need n >= 2, got {n}")));
        }
        if resolution < 4 {
            return Err(Error::Domain(format!("resolution must be >= 4, got {resolution}")));
        }
        let mismatch = |k: RuleKind| {
            Err(Error::Dimension(format!(
                "{} rules are defined only for n = {}",
                k.as_str(),
                if k == RuleKind::Trapezoid2d { 2 } else { 3 }
            )))
        };
        match kind {
            RuleKind::Trapezoid2d if n != 2 => return mismatch(kind),
            RuleKind::Product3d if n != 3 => return mismatch(kind),
            RuleKind::MonteCarlo if seed.is_none() => {
                return Err(Error::Domain("Monte Carlo rules require a seed".to_string()))
            }
            RuleKind::Trapezoid2d | RuleKind::Product3d if seed.is_some() => {
                return Err(Error::Domain(format!("{} rules take no seed", kind.as_str())))
            }
            _ => {}
        }
        let (nodes, weights, polar_angles) = match kind {
            RuleKind::Trapezoid2d => trapezoid(resolution),
            RuleKind::Product3d => product(resolution),
            RuleKind::MonteCarlo => monte_carlo(n, resolution, seed.unwrap_or_default()),
        };
        Ok(Self { dimension: n, kind, resolution, seed, nodes, weights, polar_angles })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn nodes(&self) -> &[Direction] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Polar angle of each row of a product rule, ascending.
    pub fn polar_angles(&self) -> Option<&[f64]> {
        self.polar_angles.as_deref()
    }

    pub fn is_monte_carlo(&self) -> bool {
        self.kind == RuleKind::MonteCarlo
    }

    pub fn descriptor(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SphericalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.dimension, self.kind.as_str(), self.resolution)?;
        if let Some(seed) = self.seed {
            write!(f, ":{seed}")?;
        }
        Ok(())
    }
}

impl FromStr for SphericalRule {
    type Err = Error;

    /// Parses `n:kind:resolution[:seed]`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(Error::Parse(format!("rule descriptor '{s}' is not n:kind:resolution[:seed]")));
        }
        let int = |x: &str| -> Result<u64> {
            x.parse::<u64>().map_err(|_| Error::Parse(format!("bad integer '{x}' in rule descriptor '{s}'")))
        };
        let n = int(parts[0])? as usize;
        let kind: RuleKind = parts[1].parse()?;
        let resolution = int(parts[2])? as usize;
        let seed = parts.get(3).map(|x| int(x)).transpose()?;
        SphericalRule::new(n, kind, resolution, seed)
    }
}

type Nodes = (Vec<Direction>, Vec<f64>, Option<Vec<f64>>);

fn trapezoid(count: usize) -> Nodes {
    let nodes = (0..count).map(|i| Direction::from_angle(TAU * i as f64 / count as f64)).collect();
    (nodes, vec![TAU / count as f64; count], None)
}

fn product(rows: usize) -> Nodes {
    let (x, w) = gauss_legendre(rows);
    let cols = 2 * rows;
    let dphi = TAU / cols as f64;
    let mut nodes = Vec::with_capacity(rows * cols);
    let mut weights = Vec::with_capacity(rows * cols);
    let mut polar = Vec::with_capacity(rows);
    // Descending cosine gives ascending polar angle.
    for i in (0..rows).rev() {
        let ct = x[i];
        let st = (1.0 - ct * ct).sqrt();
        polar.push(ct.acos());
        for j in 0..cols {
            let (sp, cp) = (dphi * j as f64).sin_cos();
            nodes.push(Direction::from_unit(vec![st * cp, st * sp, ct]));
            weights.push(w[i] * dphi);
        }
    }
    (nodes, weights, Some(polar))
}

fn monte_carlo(n: usize, count: usize, seed: u64) -> Nodes {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(count);
    while nodes.len() < count {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = euclidean_norm(&v);
        if norm > 1e-12 {
            nodes.push(Direction::from_unit(v.into_iter().map(|x| x / norm).collect()));
        }
    }
    (nodes, vec![sphere_area(n) / count as f64; count], None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn weights_sum_to_sphere_area() {
        let r = build_rule(2, 256, None).unwrap();
        assert!((r.weights().iter().sum::<f64>() - TAU).abs() < 1e-12);
        let r = build_rule(3, 64, None).unwrap();
        assert!((r.weights().iter().sum::<f64>() - 4.0 * PI).abs() < 1e-10 * 4.0 * PI);
        let r = build_rule(4, 100_000, Some(7)).unwrap();
        assert_eq!(r.weights()[0], 2.0 * PI * PI / 100_000.0);
        assert!((r.weights().iter().sum::<f64>() - 2.0 * PI * PI).abs() < 1e-9);
    }

    #[test]
    fn nodes_are_unit() {
        for rule in [build_rule(3, 16, None).unwrap(), build_rule(5, 500, Some(3)).unwrap()] {
            for u in rule.nodes() {
                assert!((euclidean_norm(u.coords()) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn descriptors_round_trip() {
        for d in ["2:trapezoid2d:256", "3:product3d:32", "4:montecarlo:1000:7", "3:montecarlo:64:1"] {
            let r: SphericalRule = d.parse().unwrap();
            assert_eq!(r.descriptor(), d);
        }
        assert!("2:product3d:16".parse::<SphericalRule>().is_err());
        assert!("4:montecarlo:100".parse::<SphericalRule>().is_err());
        assert!("2:trapezoid2d".parse::<SphericalRule>().is_err());
        assert!(build_rule(4, 100, None).is_err());
        assert!(build_rule(2, 3, None).is_err());
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let a = build_rule(4, 50, Some(9)).unwrap();
        let b = build_rule(4, 50, Some(9)).unwrap();
        assert_eq!(a, b);
        let c = build_rule(4, 50, Some(10)).unwrap();
        assert_ne!(a.nodes()[0], c.nodes()[0]);
    }

    #[test]
    fn product_polar_angles_ascend() {
        let r = build_rule(3, 10, None).unwrap();
        let p = r.polar_angles().unwrap();
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(r.len(), 200);
    }
}
