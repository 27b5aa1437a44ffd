//! Dual Orlicz–Brunn–Minkowski toolkit for star bodies.
//!
//! Star bodies are radial oracles on the unit sphere. On top of them this
//! crate provides radial Orlicz addition (and its measure, linear and log
//! variants), spherical quadrature for volumes and dual mixed volumes,
//! Orlicz intersection bodies, radial M-addition, and checkers for the dual
//! Brunn–Minkowski and Minkowski type inequalities with slack reporting.
//!
//! ```
//! use radial_orlicz::prelude::*;
//!
//! let k = StarBody::ball(2, 3.0).unwrap();
//! let l = StarBody::ball(2, 4.0).unwrap();
//! let phi = OrliczFunction::power_sum(2, 2.0).unwrap();
//! let s = orlicz_sum(&phi, &[k, l]).unwrap();
//! let u = Direction::new(vec![1.0, 0.0]).unwrap();
//! assert!((s.radial(&u) - 5.0).abs() < 1e-10);
//! ```

// `!(x > 0.0)` is the NaN-rejecting guard used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod families;
pub mod geometry;
pub mod inequalities;
pub mod integrate;
pub mod madd;
pub mod numeric;
pub mod orlicz;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::geometry::{ConvexBodySupport, Direction, GridBody, LinearMap, StarBody};
    pub use crate::inequalities::{
        check_dual_log_bm, check_dual_log_minkowski, check_dual_orlicz_bm, check_dual_orlicz_minkowski,
        check_polar_log, dilatate_test, first_variation_volume, IneqReport, Relation, VariationReport,
    };
    pub use crate::integrate::{
        build_rule, dual_cone_integral, dual_orlicz_mixed_volume, dual_p_mixed_volume, intersection_body_radial,
        volume, RuleKind, SphericalRule,
    };
    pub use crate::madd::{radial_m_sum, support_conv, MSet};
    pub use crate::orlicz::{
        log_combination, orlicz_combination_measure, orlicz_linear_combination, orlicz_sum, solve_level, Curvature,
        DiscreteStarMeasure, FunctionClass, OrliczFunction, ScalarFunction,
    };
}
