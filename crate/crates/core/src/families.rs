//! Seeded random test bodies, maps and supports.
//!
//! Every generator takes an explicit `ChaCha8Rng`, so a `(seed, index)` pair
//! names the same object on every platform.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::geometry::{ConvexBodySupport, FourierTerm, LinearMap, RidgeTerm, StarBody};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Planar star `1 + Σ a cos(kθ + phase)` with 1 to 3 terms, `k ∈ [2, 6]`
/// and `Σ|a| ≤ 0.6`.
pub fn fourier_star(rng: &mut ChaCha8Rng) -> StarBody {
    let count = rng.random_range(1..=3);
    let budget = 0.6 / count as f64;
    let terms: Vec<FourierTerm> = (0..count)
        .map(|_| FourierTerm {
            k: rng.random_range(2..=6),
            amplitude: rng.random_range(-budget..budget),
            phase: rng.random_range(0.0..TAU),
        })
        .collect();
    StarBody::fourier_star_phased(1.0, &terms).expect("amplitude budget keeps the star positive")
}

/// Star in R^n with `ρ = 1 + Σ a (w·u)^k` for 1 to 3 random ridges.
pub fn ridge_star(n: usize, rng: &mut ChaCha8Rng) -> StarBody {
    let count = rng.random_range(1..=3);
    let budget = 0.6 / count as f64;
    let terms: Vec<RidgeTerm> = (0..count)
        .map(|_| RidgeTerm {
            axis: (0..n).map(|_| StandardNormal.sample(rng)).collect(),
            power: rng.random_range(1..=4),
            amplitude: rng.random_range(-budget..budget),
        })
        .collect();
    StarBody::ridge_star(n, 1.0, &terms).expect("amplitude budget keeps the star positive")
}

/// A smooth positive star: Fourier in the plane, ridges otherwise.
pub fn star(n: usize, rng: &mut ChaCha8Rng) -> StarBody {
    if n == 2 {
        fourier_star(rng)
    } else {
        ridge_star(n, rng)
    }
}

/// Random invertible map with condition number at most 6 and `|det|` near 1.
pub fn linear_map(n: usize, rng: &mut ChaCha8Rng) -> LinearMap {
    loop {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let g: f64 = StandardNormal.sample(rng);
                        0.4 * g + if i == j { 1.0 } else { 0.0 }
                    })
                    .collect()
            })
            .collect();
        if let Ok(map) = LinearMap::from_rows(&rows) {
            let (lo, hi) = map.singular_value_range();
            if hi / lo <= 6.0 {
                return map;
            }
        }
    }
}

/// Ellipsoid support `h(u) = ‖Bu‖` for a random well-conditioned `B`.
pub fn ellipsoid_support(n: usize, rng: &mut ChaCha8Rng) -> Result<ConvexBodySupport> {
    ConvexBodySupport::ellipsoid_norm(&linear_map(n, rng))
}

/// Supports of a random ellipsoid `E` and of `cE`, `c ∈ [0.3, 3]`.
pub fn ellipsoid_dilatate_pair(n: usize, rng: &mut ChaCha8Rng) -> Result<(ConvexBodySupport, ConvexBodySupport, f64)> {
    let b = linear_map(n, rng);
    let c = rng.random_range(0.3..3.0);
    let cb = LinearMap::scaling(n, c)?.compose(&b)?;
    Ok((ConvexBodySupport::ellipsoid_norm(&b)?, ConvexBodySupport::ellipsoid_norm(&cb)?, c))
}

/// A pair `(K, cK)` with `c ∈ [0.3, 3]`.
pub fn dilatate_pair(n: usize, rng: &mut ChaCha8Rng) -> (StarBody, StarBody, f64) {
    let k = star(n, rng);
    let c = rng.random_range(0.3..3.0);
    let l = k.scaled(c).expect("positive factor");
    (k, l, c)
}
