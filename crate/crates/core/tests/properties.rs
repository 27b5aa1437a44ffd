//! Structural properties of the radial operations on seeded random bodies.

use proptest::prelude::*;
use radial_orlicz::families;
use radial_orlicz::geometry::{
    linear_image, pth_radial_combination, radial_metric, restrict_to_coordinate_subspace, Direction, LinearMap,
    StarBody,
};
use radial_orlicz::inequalities::{check_dual_orlicz_bm, check_dual_orlicz_minkowski, first_variation_volume};
use radial_orlicz::integrate::{build_rule, dual_cone_integral, dual_orlicz_mixed_volume, dual_p_mixed_volume, volume};
use radial_orlicz::madd::{radial_m_sum, MSet};
use radial_orlicz::orlicz::{orlicz_sum, parse_function, OrliczFunction, ScalarFunction};

fn probe(n: usize) -> Vec<Direction> {
    let rule = build_rule(n, if n == 2 { 64 } else { 8 }, None).unwrap();
    rule.nodes().to_vec()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn func(desc: &str, arity: usize, n: usize) -> OrliczFunction {
    parse_function(desc, arity, n).unwrap().into_function().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scaling_map_is_homogeneous(seed in any::<u64>(), n in 2usize..=3, r in 0.1f64..10.0) {
        let k = families::star(n, &mut families::rng(seed));
        let img = linear_image(&k, &LinearMap::scaling(n, r).unwrap()).unwrap();
        for u in probe(n) {
            prop_assert!(close(img.radial(&u), r * k.radial(&u), 1e-12));
        }
    }

    #[test]
    fn images_compose(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = families::rng(seed);
        let k = families::star(n, &mut rng);
        let (a, b) = (families::linear_map(n, &mut rng), families::linear_map(n, &mut rng));
        let twice = linear_image(&linear_image(&k, &a).unwrap(), &b).unwrap();
        let once = linear_image(&k, &b.compose(&a).unwrap()).unwrap();
        for u in probe(n) {
            prop_assert!(close(twice.radial(&u), once.radial(&u), 1e-10));
        }
    }

    #[test]
    fn radial_addition_is_exact_and_symmetric(seed in any::<u64>(), p in prop_oneof![Just(-2.0), Just(-0.5), Just(0.5), Just(1.0), Just(3.0)]) {
        let mut rng = families::rng(seed);
        let (k, l) = (families::star(2, &mut rng), families::star(2, &mut rng));
        let kl = pth_radial_combination(1.0, &k, p, 1.0, &l).unwrap();
        let lk = pth_radial_combination(1.0, &l, p, 1.0, &k).unwrap();
        let sum = pth_radial_combination(0.7, &k, 1.0, 1.3, &l).unwrap();
        for u in probe(2) {
            prop_assert_eq!(kl.radial(&u).to_bits(), lk.radial(&u).to_bits());
            prop_assert_eq!(sum.radial(&u), 0.7 * k.radial(&u) + 1.3 * l.radial(&u));
        }
    }

    #[test]
    fn radial_metric_is_a_pseudometric(seed in any::<u64>()) {
        let mut rng = families::rng(seed);
        let bodies: Vec<StarBody> = (0..3).map(|_| families::star(2, &mut rng)).collect();
        let rule = build_rule(2, 128, None).unwrap();
        let d = |a: &StarBody, b: &StarBody| radial_metric(a, b, &rule);
        prop_assert_eq!(d(&bodies[0], &bodies[1]), d(&bodies[1], &bodies[0]));
        prop_assert_eq!(d(&bodies[0], &bodies[0]), 0.0);
        prop_assert!(d(&bodies[0], &bodies[2]) <= d(&bodies[0], &bodies[1]) + d(&bodies[1], &bodies[2]) + 1e-14);
    }

    #[test]
    fn orlicz_sum_is_gl_covariant(seed in any::<u64>(), n in 2usize..=3, desc in prop_oneof![Just("lp:1"), Just("lp:2.5"), Just("psi-lp:-1"), Just("poly:1,2")]) {
        let mut rng = families::rng(seed);
        let (k, l, a) = (families::star(n, &mut rng), families::star(n, &mut rng), families::linear_map(n, &mut rng));
        let phi = func(desc, 2, n);
        let lhs = linear_image(&orlicz_sum(&phi, &[k.clone(), l.clone()]).unwrap(), &a).unwrap();
        let rhs = orlicz_sum(&phi, &[linear_image(&k, &a).unwrap(), linear_image(&l, &a).unwrap()]).unwrap();
        for u in probe(n) {
            prop_assert!(close(lhs.radial(&u), rhs.radial(&u), 1e-10));
        }
    }

    #[test]
    fn orlicz_sum_is_homogeneous(seed in any::<u64>(), r in 0.05f64..20.0, desc in prop_oneof![Just("lp:1"), Just("lp:0.5"), Just("psi-lp:-2"), Just("poly:3,1")]) {
        let mut rng = families::rng(seed);
        let (k, l) = (families::star(2, &mut rng), families::star(2, &mut rng));
        let phi = func(desc, 2, 2);
        let base = orlicz_sum(&phi, &[k.clone(), l.clone()]).unwrap();
        let scaled = orlicz_sum(&phi, &[k.scaled(r).unwrap(), l.scaled(r).unwrap()]).unwrap();
        for u in probe(2) {
            prop_assert!(close(scaled.radial(&u), r * base.radial(&u), 1e-10));
        }
    }

    #[test]
    fn orlicz_sum_is_monotone(seed in any::<u64>(), grow in 1.0f64..2.0) {
        let mut rng = families::rng(seed);
        let (k, l, m) = (families::star(2, &mut rng), families::star(2, &mut rng), families::star(2, &mut rng));
        let bigger = pth_radial_combination(grow, &l, 1.0, 0.1, &m).unwrap();
        let phi = func("poly:1,1", 2, 2);
        let small = orlicz_sum(&phi, &[k.clone(), l]).unwrap();
        let large = orlicz_sum(&phi, &[k, bigger]).unwrap();
        for u in probe(2) {
            prop_assert!(small.radial(&u) <= large.radial(&u) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn orlicz_sum_commutes_with_sections(seed in any::<u64>()) {
        let mut rng = families::rng(seed);
        let (k, l) = (families::star(3, &mut rng), families::star(3, &mut rng));
        let phi = func("lp:2", 2, 3);
        let axes = [0, 2];
        let lhs = restrict_to_coordinate_subspace(&orlicz_sum(&phi, &[k.clone(), l.clone()]).unwrap(), &axes).unwrap();
        let rhs = orlicz_sum(&phi, &[
            restrict_to_coordinate_subspace(&k, &axes).unwrap(),
            restrict_to_coordinate_subspace(&l, &axes).unwrap(),
        ]).unwrap();
        for u in probe(2) {
            prop_assert!(close(lhs.radial(&u), rhs.radial(&u), 1e-12));
        }
    }

    #[test]
    fn volume_scales_by_determinant(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = families::rng(seed);
        let (k, a) = (families::star(n, &mut rng), families::linear_map(n, &mut rng));
        // Images of smooth stars are smooth; the n = 3 product rule needs more rows.
        let rule = build_rule(n, if n == 2 { 1024 } else { 160 }, None).unwrap();
        let vk = volume(&k, &rule).unwrap();
        let va = volume(&linear_image(&k, &a).unwrap(), &rule).unwrap();
        prop_assert!(close(va, a.determinant().abs() * vk, 1e-8), "{} vs {}", va, a.determinant().abs() * vk);
    }

    #[test]
    fn cone_measure_is_a_probability(seed in any::<u64>(), n in 2usize..=3) {
        let k = families::star(n, &mut families::rng(seed));
        let rule = build_rule(n, if n == 2 { 256 } else { 24 }, None).unwrap();
        prop_assert!((dual_cone_integral(&k, |_| 1.0, &rule).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn mixed_volume_on_the_diagonal(seed in any::<u64>(), desc in prop_oneof![Just("lp:0.5"), Just("lp:3"), Just("psi-lp:-1"), Just("sum-powers:1,3"), Just("poly:2,1")]) {
        let k = families::star(2, &mut families::rng(seed));
        let rule = build_rule(2, 256, None).unwrap();
        let phi = func(desc, 1, 2).as_scalar().unwrap();
        let v = volume(&k, &rule).unwrap();
        prop_assert!(close(dual_orlicz_mixed_volume(&phi, &k, &k, &rule).unwrap().value, v * phi.eval(1.0), 1e-10));
        let log = ScalarFunction::log();
        prop_assert!(dual_orlicz_mixed_volume(&log, &k, &k, &rule).unwrap().value.abs() <= 1e-12);
    }

    #[test]
    fn p_mixed_volume_bihomogeneity(seed in any::<u64>(), a in 0.2f64..5.0, b in 0.2f64..5.0, p in prop_oneof![Just(-1.0), Just(0.5), Just(3.0)]) {
        let mut rng = families::rng(seed);
        let (k, l) = (families::star(2, &mut rng), families::star(2, &mut rng));
        let rule = build_rule(2, 256, None).unwrap();
        let base = dual_p_mixed_volume(&k, &l, p, &rule).unwrap();
        let scaled = dual_p_mixed_volume(&k.scaled(a).unwrap(), &l.scaled(b).unwrap(), p, &rule).unwrap();
        prop_assert!(close(scaled, a.powf(2.0 - p) * b.powf(p) * base, 1e-10));
    }

    #[test]
    fn m_sum_is_homogeneous_and_covariant(seed in any::<u64>(), r in 0.1f64..10.0) {
        let mut rng = families::rng(seed);
        let (k, l, a) = (families::star(2, &mut rng), families::star(2, &mut rng), families::linear_map(2, &mut rng));
        let m = MSet::lp_curve(3.0, 64).unwrap();
        let base = radial_m_sum(&m, &[k.clone(), l.clone()]).unwrap();
        let scaled = radial_m_sum(&m, &[k.scaled(r).unwrap(), l.scaled(r).unwrap()]).unwrap();
        let img = linear_image(&base, &a).unwrap();
        let sum_img = radial_m_sum(&m, &[linear_image(&k, &a).unwrap(), linear_image(&l, &a).unwrap()]).unwrap();
        for u in probe(2) {
            prop_assert!(close(scaled.radial(&u), r * base.radial(&u), 1e-14));
            prop_assert!(close(img.radial(&u), sum_img.radial(&u), 1e-10));
        }
    }

    #[test]
    fn m_sum_is_monotone_in_m(seed in any::<u64>()) {
        let mut rng = families::rng(seed);
        let (k, l) = (families::star(2, &mut rng), families::star(2, &mut rng));
        let coarse = MSet::lp_curve(2.0, 16).unwrap();
        let fine = MSet::lp_curve(2.0, 64).unwrap();
        let (a, b) = (radial_m_sum(&coarse, &[k.clone(), l.clone()]).unwrap(), radial_m_sum(&fine, &[k, l]).unwrap());
        for u in probe(2) {
            prop_assert!(a.radial(&u) <= b.radial(&u));
        }
    }
}

/// For separable φ the Brunn–Minkowski check and the Minkowski checks with
/// `K` replaced by the sum agree in satisfaction status.
#[test]
fn separable_bm_and_minkowski_agree() {
    let rule = build_rule(2, 256, None).unwrap();
    for desc in ["lp:1", "lp:0.5", "lp:3", "poly:1,1"] {
        let phi2 = func(desc, 2, 2);
        let phi1 = func(desc, 1, 2);
        for seed in 0..6 {
            let mut rng = families::rng(seed);
            let (k, l) = (families::star(2, &mut rng), families::star(2, &mut rng));
            let bm = check_dual_orlicz_bm(&phi2, &[k.clone(), l.clone()], &rule).unwrap();
            let s = orlicz_sum(&phi2, &[k.clone(), l.clone()]).unwrap();
            let mk = check_dual_orlicz_minkowski(&phi1, &s, &k, &rule).unwrap();
            let ml = check_dual_orlicz_minkowski(&phi1, &s, &l, &rule).unwrap();
            assert_eq!(bm.satisfied, mk.satisfied && ml.satisfied, "{desc} seed {seed}");
        }
    }
}

/// Reversal for `p < 0` and `p > n` in the p-power case.
#[test]
fn power_bm_reverses_outside_zero_n() {
    let rule = build_rule(2, 256, None).unwrap();
    for (desc, concave) in [("lp:1", true), ("lp:3", false), ("psi-lp:-1", false)] {
        let phi = func(desc, 2, 2);
        for seed in 0..8 {
            let mut rng = families::rng(100 + seed);
            let (k, l) = (families::star(2, &mut rng), families::star(2, &mut rng));
            let r = check_dual_orlicz_bm(&phi, &[k, l], &rule).unwrap();
            assert!(r.satisfied && r.slack > r.eq_tol, "{desc} seed {seed}: {r:?}");
            assert_eq!(r.relation == radial_orlicz::inequalities::Relation::GreaterEq, concave);
        }
    }
}

/// ρ + 1/k perturbations converge and so do their sums.
#[test]
fn sums_are_pointwise_continuous() {
    let phi = func("poly:1,2", 2, 2);
    let k = StarBody::fourier_star(1.0, &[(3, 0.5)]).unwrap();
    let l = StarBody::fourier_star(1.0, &[(2, -0.3)]).unwrap();
    let limit = orlicz_sum(&phi, &[k.clone(), l.clone()]).unwrap();
    let u = Direction::from_angle(0.91);
    let errs: Vec<f64> = [1, 10, 100, 1000, 10000]
        .iter()
        .map(|&j| {
            let kj = pth_radial_combination(1.0, &k, 1.0, 1.0 / j as f64, &StarBody::ball(2, 1.0).unwrap()).unwrap();
            (orlicz_sum(&phi, &[kj, l.clone()]).unwrap().radial(&u) - limit.radial(&u)).abs()
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[4] < 1e-3);
}

#[test]
fn first_variation_on_smooth_families() {
    let t = OrliczFunction::power_sum(1, 1.0).unwrap();
    let sq = OrliczFunction::power_sum(1, 2.0).unwrap();
    let eps = radial_orlicz::inequalities::default_eps_schedule();
    for (n, res) in [(2, 256), (3, 64)] {
        let rule = build_rule(n, res, None).unwrap();
        for seed in 0..3 {
            let mut rng = families::rng(seed);
            let (k, l) = (families::star(n, &mut rng), families::star(n, &mut rng));
            for (a, b) in [(&t, &t), (&t, &sq), (&sq, &t)] {
                let r = first_variation_volume(a, b, &k, &l, &rule, &eps).unwrap();
                assert!(r.relative_error < 1e-3, "n {n} seed {seed}: {r:?}");
            }
        }
    }
}

#[test]
fn reports_are_reproducible() {
    let rule = build_rule(2, 256, None).unwrap();
    let phi = func("lp:0.5", 2, 2);
    let run = || {
        let mut rng = families::rng(42);
        let (k, l) = (families::star(2, &mut rng), families::star(2, &mut rng));
        check_dual_orlicz_bm(&phi, &[k, l], &rule).unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.lhs.to_bits(), b.lhs.to_bits());
    assert_eq!(a.slack.to_bits(), b.slack.to_bits());
}
