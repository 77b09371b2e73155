use harmonic_zeros::bounds::{max_zero_bound, reduce_equal_degree};
use harmonic_zeros::dynamics::{build_iterated_map, critical_points, nonrepelling_zeros_via_orbits, OrbitConfig};
use harmonic_zeros::gallery::random_instance;
use harmonic_zeros::poly::compose_with_rational;
use harmonic_zeros::roots::{cauchy_root_bound, find_roots, DEFAULT_MAX_ITER, DEFAULT_ROOT_TOL};
use harmonic_zeros::solver::{solve, SolverConfig};
use harmonic_zeros::winding::{
    enclosing_radius, verify_argument_principle, winding_number, Circle, WindingConfig, DEFAULT_RADIUS_FACTOR,
};
use harmonic_zeros::{Complex64, Polynomial};
use proptest::prelude::*;

fn disk_point() -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r.sqrt(), t))
}

fn poly(max_degree: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(disk_point(), 1..=max_degree + 1).prop_map(Polynomial::new)
}

/// Nonconstant polynomial with a leading coefficient of modulus at least 0.1.
fn proper_poly(min_degree: usize, max_degree: usize) -> impl Strategy<Value = Polynomial> {
    (prop::collection::vec(disk_point(), min_degree..=max_degree), 0.1..1.0f64, 0.0..std::f64::consts::TAU).prop_map(
        |(mut coeffs, lead, angle)| {
            coeffs.push(Complex64::from_polar(lead, angle));
            Polynomial::new(coeffs)
        },
    )
}

/// `|p(z)| / sum |a_k| |z|^k`.
fn relative_residual(p: &Polynomial, z: Complex64) -> f64 {
    let scale: f64 = p.coeffs().iter().enumerate().map(|(k, a)| a.norm() * z.norm().powi(k as i32)).sum();
    p.eval(z).norm() / scale
}

/// Greatest distance from a point of `a` to its nearest point of `b`.
fn hausdorff_one_way(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

fn degree_pair() -> impl Strategy<Value = (usize, usize)> {
    (0usize..5, 0usize..5).prop_filter("max degree at least 2", |(p, q)| (*p).max(*q) >= 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_multiplicative(a in poly(8), b in poly(8), z in disk_point()) {
        let z = z * 1.5;
        let lhs = (&a * &b).eval(z);
        let rhs = a.eval(z) * b.eval(z);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn composition_matches_nested_evaluation(
        s in poly(4),
        p in proper_poly(0, 3),
        q in proper_poly(1, 3),
        points in prop::collection::vec(disk_point(), 20),
    ) {
        let (n, d) = compose_with_rational(&s, &p, &q);
        for z in points {
            let z = z * 2.0;
            if q.eval(z).norm() < 1e-3 {
                continue;
            }
            let expected = s.eval(p.eval(z) / q.eval(z));
            let got = n.eval(z) / d.eval(z);
            prop_assert!((got - expected).norm() <= 1e-8 * expected.norm().max(1.0));
        }
    }

    #[test]
    fn structural_degrees((n_p, n_q) in degree_pair(), seed in any::<u64>()) {
        let r = random_instance(n_p, n_q, seed).unwrap().r;
        let n = n_p.max(n_q);
        let fixed = r.fixed_point_polynomial(Complex64::new(0.0, 0.0)).unwrap();
        prop_assert!(fixed.degree().unwrap() <= n * n + 1);
        prop_assert!(r.wronskian_numerator().degree().unwrap_or(0) < n_p + n_q);
        prop_assert!(critical_points(&r).unwrap().len() < n_p + n_q);
    }

    #[test]
    fn roots_have_small_residuals(p in proper_poly(1, 30)) {
        let set = find_roots(&p, DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER).unwrap();
        let bound = cauchy_root_bound(&p).unwrap();
        prop_assert_eq!(set.roots.len(), p.degree().unwrap());
        for z in &set.roots {
            // Outside the unit disk |p| grows like |z|^deg; the backward
            // error is the meaningful residual there.
            prop_assert!(relative_residual(&p, *z) <= DEFAULT_ROOT_TOL);
            if z.norm() <= 1.0 {
                prop_assert!(p.eval(*z).norm() <= 1e-8);
            }
            prop_assert!(z.norm() <= bound * (1.0 + 1e-6));
        }
    }

    #[test]
    fn quadratic_roots_reconstruct_coefficients(a in disk_point(), b in disk_point()) {
        prop_assume!((a - b).norm() > 1e-3);
        let set = find_roots(&Polynomial::from_roots(&[a, b]), DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER).unwrap();
        let (x, y) = (set.roots[0], set.roots[1]);
        prop_assert!((x + y - (a + b)).norm() <= 1e-8);
        prop_assert!((x * y - a * b).norm() <= 1e-8);
    }

    #[test]
    fn roots_are_scaling_invariant(p in proper_poly(1, 12), s in disk_point()) {
        prop_assume!(s.norm() > 0.05);
        let roots = find_roots(&p, DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER).unwrap().roots;
        let scaled = find_roots(&p.scale(s * 7.0), DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER).unwrap().roots;
        // Scaling leaves every Aberth step unchanged, so agreement is at
        // rounding level unless roots are clustered.
        let spread = roots
            .iter()
            .enumerate()
            .flat_map(|(i, a)| roots[i + 1..].iter().map(move |b| (a - b).norm()))
            .fold(f64::INFINITY, f64::min);
        prop_assume!(spread > 1e-2);
        prop_assert!(hausdorff_one_way(&roots, &scaled) <= 1e-10);
        prop_assert!(hausdorff_one_way(&scaled, &roots) <= 1e-10);
    }

    #[test]
    fn monomial_winding(k in -5i32..=5, radius in 0.1..10.0f64) {
        let circle = Circle::centered(radius).unwrap();
        let g = |z: Complex64| z.powi(k);
        let w = winding_number(g, &circle, &WindingConfig::default()).unwrap();
        prop_assert_eq!(w.winding, k as i64);
    }

    #[test]
    fn winding_ignores_positive_factors(k in -3i32..=3, a in 0.1..3.0f64, b in 0.0..0.9f64) {
        let circle = Circle::centered(1.3).unwrap();
        let g = |z: Complex64| z.powi(k) * (a * (1.0 + b * (3.0 * z.re).sin()));
        let w = winding_number(g, &circle, &WindingConfig::default()).unwrap();
        prop_assert_eq!(w.winding, k as i64);
    }

    #[test]
    fn solver_invariants((n_p, n_q) in degree_pair(), seed in any::<u64>()) {
        let spec = random_instance(n_p, n_q, seed).unwrap();
        let cfg = SolverConfig::default();
        let set = solve(&spec.r, spec.c, &cfg).unwrap();
        prop_assert!(set.total() <= max_zero_bound(n_p, n_q).unwrap());
        prop_assert!(set.n_zero + set.n_minus < n_p + n_q);
        let fixed = spec.r.fixed_point_polynomial(spec.c).unwrap();
        let map = build_iterated_map(&spec.r, spec.c).unwrap();
        for z in &set.zeros {
            prop_assert!(z.residual <= 1e-10 * (1.0 + z.location.norm()));
            prop_assert!(relative_residual(&fixed, z.location) <= cfg.root_tol);
            let multiplier = map.derivative_at(z.location).norm();
            let expected = z.r_prime_abs * z.r_prime_abs;
            prop_assert!((multiplier - expected).abs() <= 1e-6 * expected.max(1.0));
        }
        let orbits = nonrepelling_zeros_via_orbits(&spec.r, spec.c, &cfg, &OrbitConfig::default()).unwrap();
        prop_assert!(orbits.zeros.len() < n_p + n_q);
    }

    #[test]
    fn large_circle_signature((n_p, n_q) in degree_pair(), seed in any::<u64>()) {
        prop_assume!(n_p != n_q + 1);
        let spec = random_instance(n_p, n_q, seed).unwrap();
        let cfg = SolverConfig::default();
        let set = solve(&spec.r, spec.c, &cfg).unwrap();
        let radius = enclosing_radius(&spec.r, spec.c, DEFAULT_RADIUS_FACTOR).unwrap();
        let circle = Circle::centered(radius).unwrap();
        let verdict = verify_argument_principle(&spec.r, spec.c, &circle, &set, &cfg, &WindingConfig::default()).unwrap();
        let expected = if n_p <= n_q { -1 } else { n_p as i64 - n_q as i64 };
        match verdict {
            harmonic_zeros::winding::Verdict::Equal { winding, .. } => prop_assert_eq!(winding, expected),
            other => prop_assert!(matches!(other, harmonic_zeros::winding::Verdict::Skipped { .. }), "{:?}", other),
        }
    }

    #[test]
    fn equal_degree_round_trip(n in 2usize..5, seed in any::<u64>(), points in prop::collection::vec(disk_point(), 20)) {
        let r = random_instance(n, n, seed).unwrap().r;
        let (reduced, alpha) = reduce_equal_degree(&r).unwrap();
        prop_assert!(reduced.n_p() < n);
        for z in points {
            let z = z * 3.0;
            let expected = r.eval(z);
            if !expected.is_finite() || expected.norm() > 1e8 {
                continue;
            }
            prop_assert!((reduced.eval(z) + alpha - expected).norm() <= 1e-9 * expected.norm().max(1.0));
        }
    }
}

#[test]
fn fixed_point_degree_is_generically_maximal() {
    // n^2 + 1 when r is bounded at infinity; n^2 when r has a pole there.
    for n_p in 0..5usize {
        for n_q in 0..5usize {
            let n = n_p.max(n_q);
            if n < 2 {
                continue;
            }
            let expected = if n_p <= n_q { n * n + 1 } else { n * n };
            let hits = (0..20)
                .filter(|&seed| {
                    let r = random_instance(n_p, n_q, seed).unwrap().r;
                    r.fixed_point_polynomial(Complex64::new(0.0, 0.0)).unwrap().degree() == Some(expected)
                })
                .count();
            assert!(hits >= 18, "({n_p}, {n_q}): degree {expected} in only {hits} of 20");
        }
    }
}
