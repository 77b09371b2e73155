//! Windings on circles by adaptive argument tracking, and the numerical
//! argument-principle and Rouché checks built on them.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::RationalFunction;
use crate::roots::{cauchy_root_bound, find_roots, DEFAULT_MAX_ITER, DEFAULT_ROOT_TOL};
use crate::solver::{harmonic_value, Orientation, SolverConfig, ZeroSet};

/// Positively oriented circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "circle radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn centered(radius: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), radius)
    }

    pub fn point(&self, theta: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, theta)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Distance of `z` from the curve itself.
    pub fn distance_to_curve(&self, z: Complex64) -> f64 {
        ((z - self.center).norm() - self.radius).abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingConfig {
    pub initial_samples: usize,
    pub max_samples: usize,
    /// `|g|` below this fraction of the median initial `|g|` counts as a zero on the curve.
    pub near_zero_rel: f64,
    pub integrality_tol: f64,
}

impl Default for WindingConfig {
    fn default() -> Self {
        Self {
            initial_samples: 64,
            max_samples: 1 << 20,
            near_zero_rel: 1e-9,
            integrality_tol: 0.01,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub winding: i64,
    /// Total phase change divided by `2 pi`, before rounding.
    pub raw: f64,
    pub samples_used: usize,
    pub min_modulus_on_curve: f64,
}

impl WindingResult {
    pub fn integrality_defect(&self) -> f64 {
        (self.raw - self.winding as f64).abs()
    }
}

struct Tracked {
    result: WindingResult,
    thetas: Vec<f64>,
}

fn track<G: Fn(Complex64) -> Complex64>(
    g: G,
    circle: &Circle,
    cfg: &WindingConfig,
) -> Result<Tracked> {
    let n = cfg.initial_samples.max(4);
    let initial: Vec<(f64, Complex64)> = (0..n)
        .map(|k| {
            let theta = TAU * k as f64 / n as f64;
            (theta, g(circle.point(theta)))
        })
        .collect();
    if initial.iter().any(|(_, v)| !v.is_finite()) {
        return Err(Error::NotFiniteOnCurve);
    }
    let mut moduli: Vec<f64> = initial.iter().map(|(_, v)| v.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    let threshold = cfg.near_zero_rel * moduli[n / 2];
    let check = |v: Complex64| -> Result<f64> {
        if !v.is_finite() {
            return Err(Error::NotFiniteOnCurve);
        }
        let m = v.norm();
        if !(m > threshold) {
            return Err(Error::ZeroOnCurve { min_modulus: m });
        }
        Ok(m)
    };

    let mut min_modulus = f64::INFINITY;
    for (_, v) in &initial {
        min_modulus = min_modulus.min(check(*v)?);
    }
    let mut samples = n;
    let mut thetas: Vec<f64> = initial.iter().map(|(t, _)| *t).collect();
    let mut total = 0.0;
    let mut stack = Vec::new();
    for k in 0..n {
        let (ta, ga) = initial[k];
        let (tb, gb) = if k + 1 < n {
            initial[k + 1]
        } else {
            (TAU, initial[0].1)
        };
        stack.push((ta, ga, tb, gb));
        while let Some((ta, ga, tb, gb)) = stack.pop() {
            let step = (gb / ga).arg();
            if step.abs() < FRAC_PI_2 {
                total += step;
                continue;
            }
            if samples >= cfg.max_samples {
                return Err(Error::SampleBudgetExceeded {
                    budget: cfg.max_samples,
                });
            }
            let tm = 0.5 * (ta + tb);
            let gm = g(circle.point(tm));
            min_modulus = min_modulus.min(check(gm)?);
            samples += 1;
            thetas.push(tm);
            // Left half is processed first.
            stack.push((tm, gm, tb, gb));
            stack.push((ta, ga, tm, gm));
        }
    }
    let raw = total / TAU;
    let winding = raw.round();
    if (raw - winding).abs() > cfg.integrality_tol {
        return Err(Error::NonIntegerWinding { value: raw });
    }
    Ok(Tracked {
        result: WindingResult {
            winding: winding as i64,
            raw,
            samples_used: samples,
            min_modulus_on_curve: min_modulus,
        },
        thetas,
    })
}

/// Winding of `g` along `circle`: the unwrapped change of `arg g` over one
/// positive turn, divided by `2 pi`.
///
/// The parameter interval is bisected until every consecutive phase step is
/// below `pi / 2`.
pub fn winding_number<G: Fn(Complex64) -> Complex64>(
    g: G,
    circle: &Circle,
    cfg: &WindingConfig,
) -> Result<WindingResult> {
    track(g, circle, cfg).map(|t| t.result)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Equal { winding: i64, expected: i64 },
    Unequal { winding: i64, expected: i64 },
    Skipped { reason: String },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Self::Equal { .. })
    }

    pub fn is_unequal(&self) -> bool {
        matches!(self, Self::Unequal { .. })
    }
}

/// Poles of `r` (roots of `q` with multiplicity).
pub fn poles(r: &RationalFunction) -> Result<Vec<Complex64>> {
    if r.n_q() == 0 {
        return Ok(Vec::new());
    }
    Ok(find_roots(r.denominator(), DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER)?.roots)
}

/// Compares `V(f_c; circle)` with `N_+ - N_- - P` inside the circle.
///
/// Skipped when a zero or pole lies on the curve or when some zero inside is
/// within `10 * tau_sing` of the singular band.
pub fn verify_argument_principle(
    r: &RationalFunction,
    c: Complex64,
    circle: &Circle,
    zeroset: &ZeroSet,
    solver_cfg: &SolverConfig,
    cfg: &WindingConfig,
) -> Result<Verdict> {
    let on_curve = 1e-9 * (1.0 + circle.radius);
    let shifted = r.shift_numerator_with_tolerance(c, solver_cfg.coprime_tol)?;
    let pole_list = poles(&shifted)?;
    if pole_list.iter().any(|p| circle.distance_to_curve(*p) <= on_curve) {
        return Ok(Verdict::Skipped {
            reason: "pole on the contour".into(),
        });
    }
    if zeroset
        .zeros
        .iter()
        .any(|z| circle.distance_to_curve(z.location) <= on_curve)
    {
        return Ok(Verdict::Skipped {
            reason: "zero on the contour".into(),
        });
    }
    let inside: Vec<_> = zeroset
        .zeros
        .iter()
        .filter(|z| circle.contains(z.location))
        .collect();
    if inside.iter().any(|z| {
        z.orientation == Orientation::Singular || z.singular_gap() <= 10.0 * solver_cfg.tau_sing
    }) {
        return Ok(Verdict::Skipped {
            reason: "zero inside the contour is within the singular band".into(),
        });
    }
    let n_plus = inside
        .iter()
        .filter(|z| z.orientation == Orientation::SensePreserving)
        .count() as i64;
    let n_minus = inside.len() as i64 - n_plus;
    let n_poles = pole_list.iter().filter(|p| circle.contains(**p)).count() as i64;
    let expected = n_plus - n_minus - n_poles;
    let winding = winding_number(|z| harmonic_value(&shifted, z), circle, cfg)?.winding;
    Ok(if winding == expected {
        Verdict::Equal { winding, expected }
    } else {
        Verdict::Unequal { winding, expected }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoucheReport {
    /// `min (|f| + |g| - |f - g|)` over the samples; positive certifies the hypothesis.
    pub margin: f64,
    /// `(V(f), V(g))`, computed only when the margin is positive.
    pub windings: Option<(i64, i64)>,
}

impl RoucheReport {
    pub fn holds(&self) -> bool {
        self.margin > 0.0 && self.windings.is_some_and(|(a, b)| a == b)
    }
}

const ROUCHE_UNIFORM_SAMPLES: usize = 1024;

/// Smallest value of `|f| + |g| - |f - g|` over a uniform grid on the circle.
pub fn rouche_margin<F, G>(f: F, g: G, circle: &Circle) -> f64
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    let thetas: Vec<f64> = (0..ROUCHE_UNIFORM_SAMPLES)
        .map(|k| TAU * k as f64 / ROUCHE_UNIFORM_SAMPLES as f64)
        .collect();
    margin_on(&f, &g, circle, &thetas)
}

fn margin_on<F, G>(f: &F, g: &G, circle: &Circle, thetas: &[f64]) -> f64
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    thetas
        .iter()
        .map(|&t| {
            let z = circle.point(t);
            let (fv, gv) = (f(z), g(z));
            fv.norm() + gv.norm() - (fv - gv).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Rouché check: the margin over the uniform grid and both adaptive winding
/// sample sets, and when it is positive the two windings.
pub fn rouche_check<F, G>(f: F, g: G, circle: &Circle, cfg: &WindingConfig) -> Result<RoucheReport>
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    let mut margin = rouche_margin(&f, &g, circle);
    if margin <= 0.0 {
        return Ok(RoucheReport {
            margin,
            windings: None,
        });
    }
    let tf = track(&f, circle, cfg)?;
    let tg = track(&g, circle, cfg)?;
    margin = margin
        .min(margin_on(&f, &g, circle, &tf.thetas))
        .min(margin_on(&f, &g, circle, &tg.thetas));
    Ok(RoucheReport {
        margin,
        windings: (margin > 0.0).then_some((tf.result.winding, tg.result.winding)),
    })
}

/// Radius enclosing every zero and pole of `f_c`:
/// `factor * (1 + max(cauchy(fixed-point polynomial), cauchy(q)))`.
pub fn enclosing_radius(r: &RationalFunction, c: Complex64, factor: f64) -> Result<f64> {
    let shifted = r.shift_numerator(c)?;
    let mut bound = cauchy_root_bound(&shifted.fixed_point_numerator()?)?;
    if shifted.n_q() > 0 {
        bound = bound.max(cauchy_root_bound(shifted.denominator())?);
    }
    Ok(factor * (1.0 + bound))
}

pub const DEFAULT_RADIUS_FACTOR: f64 = 2.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::solver::solve;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit() -> Circle {
        Circle::centered(1.0).unwrap()
    }

    #[test]
    fn conjugate_winds_backwards() {
        let w = winding_number(|z| -z.conj(), &unit(), &WindingConfig::default()).unwrap();
        assert_eq!(w.winding, -1);
    }

    #[test]
    fn monomial_windings() {
        for radius in [0.1, 1.0, 7.0] {
            let circle = Circle::centered(radius).unwrap();
            let w = winding_number(|z| z * z * z, &circle, &WindingConfig::default()).unwrap();
            assert_eq!(w.winding, 3);
        }
        for k in -5i32..=5 {
            let w = winding_number(|z| z.powi(k), &unit(), &WindingConfig::default()).unwrap();
            assert_eq!(w.winding, k as i64, "k = {k}");
        }
    }

    #[test]
    fn high_order_monomial_triggers_refinement() {
        let w = winding_number(|z| z.powi(20), &unit(), &WindingConfig::default()).unwrap();
        assert_eq!(w.winding, 20);
        assert!(w.samples_used > 64);
    }

    #[test]
    fn harmonic_z_squared_on_radius_five() {
        let circle = Circle::centered(5.0).unwrap();
        let w = winding_number(|z| z * z - z.conj(), &circle, &WindingConfig::default()).unwrap();
        assert_eq!(w.winding, 2);
        assert!(w.integrality_defect() < 0.01);
    }

    #[test]
    fn zero_on_curve_is_an_error() {
        let err = winding_number(|z| z - c(1.0, 0.0), &unit(), &WindingConfig::default());
        assert!(matches!(err, Err(Error::ZeroOnCurve { .. })));
    }

    #[test]
    fn pole_on_curve_is_an_error() {
        let err = winding_number(|z| (z - c(1.0, 0.0)).inv(), &unit(), &WindingConfig::default());
        assert!(matches!(err, Err(Error::NotFiniteOnCurve)));
    }

    #[test]
    fn sample_budget() {
        let cfg = WindingConfig {
            max_samples: 80,
            ..WindingConfig::default()
        };
        let err = winding_number(|z| z.powi(20), &unit(), &cfg);
        assert!(matches!(err, Err(Error::SampleBudgetExceeded { budget: 80 })));
    }

    #[test]
    fn invalid_circle() {
        assert!(Circle::centered(0.0).is_err());
        assert!(Circle::centered(-1.0).is_err());
    }

    fn check_principle(r: RationalFunction, winding: i64) {
        let cfg = SolverConfig::default();
        let set = solve(&r, c(0.0, 0.0), &cfg).unwrap();
        let circle = Circle::centered(5.0).unwrap();
        let verdict =
            verify_argument_principle(&r, c(0.0, 0.0), &circle, &set, &cfg, &WindingConfig::default())
                .unwrap();
        assert_eq!(
            verdict,
            Verdict::Equal {
                winding,
                expected: winding
            }
        );
    }

    #[test]
    fn argument_principle_examples() {
        let one = c(1.0, 0.0);
        check_principle(RationalFunction::polynomial(Polynomial::monomial(one, 2)), 2);
        check_principle(
            RationalFunction::new(
                Polynomial::from_real(&[0.0, 1.0]),
                Polynomial::from_real(&[-0.25, 0.0, 1.0]),
            )
            .unwrap(),
            -1,
        );
        check_principle(
            RationalFunction::new(Polynomial::one(), Polynomial::monomial(one, 2)).unwrap(),
            -1,
        );
    }

    #[test]
    fn argument_principle_skips_contour_through_zero() {
        let cfg = SolverConfig::default();
        let r = RationalFunction::polynomial(Polynomial::monomial(c(1.0, 0.0), 2));
        let set = solve(&r, c(0.0, 0.0), &cfg).unwrap();
        let verdict =
            verify_argument_principle(&r, c(0.0, 0.0), &unit(), &set, &cfg, &WindingConfig::default())
                .unwrap();
        assert!(matches!(verdict, Verdict::Skipped { .. }));
    }

    #[test]
    fn rouche_inverse_square_against_conjugate() {
        let circle = Circle::centered(5.0).unwrap();
        let report = rouche_check(
            |z: Complex64| z.powi(-2) - z.conj(),
            |z: Complex64| -z.conj(),
            &circle,
            &WindingConfig::default(),
        )
        .unwrap();
        assert!(report.margin > 0.0);
        assert_eq!(report.windings, Some((-1, -1)));
        assert!(report.holds());
    }

    #[test]
    fn rouche_antipodal_margin_is_zero() {
        let report = rouche_check(|z| z, |z: Complex64| -z, &unit(), &WindingConfig::default()).unwrap();
        assert_eq!(report.margin, 0.0);
        assert_eq!(report.windings, None);
        assert!(!report.holds());
    }

    #[test]
    fn rouche_z_squared_against_leading_term() {
        let circle = Circle::centered(5.0).unwrap();
        let report = rouche_check(
            |z: Complex64| z * z - z.conj(),
            |z: Complex64| z * z,
            &circle,
            &WindingConfig::default(),
        )
        .unwrap();
        assert!(report.margin > 0.0);
        assert_eq!(report.windings, Some((2, 2)));
    }

    #[test]
    fn enclosing_radius_covers_zeros() {
        let r = RationalFunction::new(
            Polynomial::from_real(&[0.0, 1.0]),
            Polynomial::from_real(&[-0.25, 0.0, 1.0]),
        )
        .unwrap();
        let m = enclosing_radius(&r, c(0.0, 0.0), DEFAULT_RADIUS_FACTOR).unwrap();
        assert!(m > 2.0 * 1.25f64.sqrt());
    }
}
