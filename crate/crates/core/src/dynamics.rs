//! Complex dynamics of `R = conj(r_c) ∘ r_c`.
//!
//! Every sense-reversing or singular zero of `f_c` is an attracting or
//! neutral fixed point of `R`, and each such fixed point attracts a critical
//! point of `r`. Iterating `R` from the critical points therefore enumerates
//! the non-sense-preserving zeros independently of the polynomial solve.
//! The module also samples the critical curve `|r'| = 1` and its image, the
//! caustic.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, RationalFunction};
use crate::roots::{find_roots, DEFAULT_MAX_ITER, DEFAULT_ROOT_TOL};
use crate::solver::{harmonic_value, polish, sort_points, SolverConfig};
use crate::winding::{enclosing_radius, DEFAULT_RADIUS_FACTOR};

/// Above this degree `R` is evaluated as two nested rational evaluations
/// instead of through its composed coefficients.
const COMPOSED_EVAL_MAX_DEGREE: usize = 6;

/// Finite points beyond this modulus are evaluated as the point at infinity.
const INFINITY_CUTOFF: f64 = 1e100;

/// Evaluates a rational function on the Riemann sphere; `None` is infinity.
fn eval_extended(r: &RationalFunction, w: Option<Complex64>) -> Option<Complex64> {
    match w {
        Some(w) if w.norm() < INFINITY_CUTOFF => {
            let den = r.denominator().eval(w);
            if den.norm() == 0.0 {
                return None;
            }
            let v = r.numerator().eval(w) / den;
            v.is_finite().then_some(v)
        }
        _ => r.value_at_infinity(),
    }
}

/// `R = conj(r_c) ∘ r_c` as a single rational map.
#[derive(Clone, Debug)]
pub struct IteratedMap {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
    pub degree: usize,
    shifted: RationalFunction,
    conjugate: RationalFunction,
}

impl IteratedMap {
    pub fn shifted(&self) -> &RationalFunction {
        &self.shifted
    }

    /// `R(z)` on the Riemann sphere.
    pub fn eval(&self, z: Option<Complex64>) -> Option<Complex64> {
        match z {
            Some(z) if self.degree <= COMPOSED_EVAL_MAX_DEGREE && z.norm() < INFINITY_CUTOFF => {
                let den = self.denominator.eval(z);
                if den.norm() == 0.0 {
                    return None;
                }
                let v = self.numerator.eval(z) / den;
                v.is_finite().then_some(v)
            }
            _ => eval_extended(&self.conjugate, eval_extended(&self.shifted, z)),
        }
    }

    pub fn eval_finite(&self, z: Complex64) -> Option<Complex64> {
        self.eval(Some(z))
    }

    /// `R'(z) = conj(r)'(r(z)) r'(z)`.
    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        let w = self.shifted.eval(z);
        self.conjugate.derivative_at(w) * self.shifted.derivative_at(z)
    }
}

/// Builds `R = conj(r_c) ∘ r_c`.
pub fn build_iterated_map(r: &RationalFunction, c: Complex64) -> Result<IteratedMap> {
    let shifted = r.shift_numerator(c)?;
    if shifted.degree() < 2 {
        return Err(Error::DegreeTooLow {
            degree: shifted.degree(),
        });
    }
    let (numerator, denominator) = shifted.conjugate_self_composition();
    let degree = numerator
        .degree()
        .unwrap_or(0)
        .max(denominator.degree().unwrap_or(0));
    let conjugate = shifted.conjugate_coefficients();
    Ok(IteratedMap {
        numerator,
        denominator,
        degree,
        shifted,
        conjugate,
    })
}

/// Critical points of `r`: the roots of `p' q - p q'`. Multiple poles of `r`
/// appear here too.
pub fn critical_points(r: &RationalFunction) -> Result<Vec<Complex64>> {
    let w = r.wronskian_numerator();
    match w.degree() {
        None | Some(0) => Ok(Vec::new()),
        Some(_) => Ok(find_roots(&w, DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER)?.roots),
    }
}

/// Orbit starting points: the critical points `z_c` of `r`, their images
/// `conj(r(z_c))`, and infinity when it is a critical point of `r`
/// (`|n_p - n_q| >= 2`). `None` stands for infinity.
pub fn orbit_seeds(r: &RationalFunction) -> Result<Vec<Option<Complex64>>> {
    let crit = critical_points(r)?;
    let mut seeds: Vec<Option<Complex64>> = crit.iter().map(|&z| Some(z)).collect();
    for &z in &crit {
        seeds.push(eval_extended(r, Some(z)).map(|w| w.conj()));
    }
    if r.n_p().abs_diff(r.n_q()) >= 2 {
        seeds.push(None);
    }
    Ok(seeds)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitConfig {
    pub max_steps: usize,
    /// `|R(z) - z|` bound for a converged limit, scaled by `1 + |z|`.
    pub fixed_tol: f64,
    /// Step size below which the orbit is considered settled, scaled by `1 + |z|`.
    pub step_tol: f64,
    /// `None` derives `10 * M` from the enclosing radius of the instance.
    pub escape_radius: Option<f64>,
    pub cycle_tol: f64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        Self {
            max_steps: 10_000,
            fixed_tol: 1e-10,
            step_tol: 1e-12,
            escape_radius: None,
            cycle_tol: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum OrbitLimit {
    Point(Complex64),
    Divergent,
    Cyclic { period: usize },
    /// Budget exhausted while the orbit still takes large steps: it is not
    /// settling on any fixed point (chaotic or long-period behaviour).
    Wandering,
    /// Budget exhausted with small steps, e.g. slow tangential approach to a
    /// neutral point; carries the last iterate.
    Unresolved(Complex64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitOutcome {
    /// `None` for the point at infinity.
    pub start: Option<Complex64>,
    pub limit: OrbitLimit,
    pub steps: usize,
    pub converged: bool,
}

impl OrbitOutcome {
    pub fn is_resolved(&self) -> bool {
        !matches!(self.limit, OrbitLimit::Unresolved(_))
    }
}

const CESARO_WINDOW: usize = 32;
/// Tail step, relative to `1 + |z|`, above which an orbit out of budget is wandering.
const WANDER_STEP: f64 = 1e-3;
const ACCEL_EVERY: usize = 16;

/// Newton on `R(z) - z` from an orbit point that has nearly settled. The
/// result is kept only if it is a non-repelling fixed point consistent with
/// the observed contraction.
fn accelerate(map: &IteratedMap, z0: Complex64, step: f64, fixed_tol: f64) -> Option<Complex64> {
    let mut z = z0;
    for _ in 0..50 {
        let g = map.eval_finite(z)? - z;
        let dg = map.derivative_at(z) - 1.0;
        let delta = g / dg;
        if !delta.is_finite() {
            return None;
        }
        z -= delta;
        if delta.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    let residual = (map.eval_finite(z)? - z).norm();
    let multiplier = map.derivative_at(z).norm();
    let contraction = (1.0 - multiplier).max(1e-6);
    let consistent = (z - z0).norm() <= 4.0 * step / contraction + 1e-12 * (1.0 + z.norm());
    (residual <= fixed_tol * (1.0 + z.norm()) && multiplier <= 1.0 + 1e-6 && consistent).then_some(z)
}

/// Iterates `R` from `start` until the orbit settles on a fixed point,
/// escapes to an infinite fixed point, revisits itself (cycle) or exhausts
/// `max_steps`.
pub fn iterate_orbit(
    map: &IteratedMap,
    start: Option<Complex64>,
    cfg: &OrbitConfig,
    escape_radius: f64,
) -> OrbitOutcome {
    let infinity_fixed = map.eval(None).is_none();
    let outcome = |limit, steps, converged| OrbitOutcome {
        start,
        limit,
        steps,
        converged,
    };
    let mut z = match start {
        Some(z) if z.norm() <= escape_radius || !infinity_fixed => z,
        _ if infinity_fixed => return outcome(OrbitLimit::Divergent, 0, false),
        _ => match map.eval(None) {
            Some(z) => z,
            None => return outcome(OrbitLimit::Divergent, 0, false),
        },
    };
    let mut history: Vec<Complex64> = Vec::with_capacity(CESARO_WINDOW);
    let mut tail_steps: Vec<f64> = Vec::with_capacity(CESARO_WINDOW);
    let mut checkpoint = z;
    let mut power = 1usize;
    let mut lambda = 0usize;

    for k in 1..=cfg.max_steps {
        let arg = if z.norm() > escape_radius { None } else { Some(z) };
        let Some(next) = map.eval(arg) else {
            return outcome(OrbitLimit::Divergent, k, false);
        };
        if next.norm() > escape_radius && infinity_fixed {
            return outcome(OrbitLimit::Divergent, k, false);
        }
        let step = (next - z).norm();
        z = next;
        if history.len() == CESARO_WINDOW {
            history.remove(0);
            tail_steps.remove(0);
        }
        history.push(z);
        let scale = 1.0 + z.norm();
        tail_steps.push(step / scale);

        if step <= cfg.step_tol * scale {
            if let Some(fz) = map.eval_finite(z) {
                if (fz - z).norm() <= cfg.fixed_tol * scale {
                    return outcome(OrbitLimit::Point(z), k, true);
                }
            }
        }
        if k % ACCEL_EVERY == 0 && step <= 1e-3 * scale {
            if let Some(fixed) = accelerate(map, z, step, cfg.fixed_tol) {
                return outcome(OrbitLimit::Point(fixed), k, true);
            }
        }

        lambda += 1;
        if (z - checkpoint).norm() <= cfg.cycle_tol * scale && step > 10.0 * cfg.cycle_tol * scale {
            // An orbit oscillating around a neutral point also revisits;
            // the running average tells the two apart.
            let mean = history.iter().sum::<Complex64>() / history.len() as f64;
            let near_fixed = map
                .eval_finite(mean)
                .is_some_and(|fm| (fm - mean).norm() <= cfg.fixed_tol.sqrt() * (1.0 + mean.norm()));
            if !near_fixed {
                return outcome(OrbitLimit::Cyclic { period: lambda }, k, false);
            }
            if let Some(fixed) = accelerate(map, mean, step, cfg.fixed_tol) {
                return outcome(OrbitLimit::Point(fixed), k, true);
            }
        }
        if lambda == power {
            checkpoint = z;
            power *= 2;
            lambda = 0;
        }
    }
    if tail_steps.iter().any(|s| *s > WANDER_STEP) {
        return outcome(OrbitLimit::Wandering, cfg.max_steps, false);
    }
    outcome(OrbitLimit::Unresolved(z), cfg.max_steps, false)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSearch {
    /// Distinct non-sense-preserving zeros, sorted by `(re, im)`.
    pub zeros: Vec<Complex64>,
    pub outcomes: Vec<OrbitOutcome>,
    pub unresolved: usize,
}

impl OrbitSearch {
    /// `true` when some orbit exhausted its budget; the zero list may then be incomplete.
    pub fn is_partial(&self) -> bool {
        self.unresolved > 0
    }

    pub fn require_complete(self) -> Result<Self> {
        if self.is_partial() {
            Err(Error::OrbitBudgetExceeded {
                unresolved: self.unresolved,
            })
        } else {
            Ok(self)
        }
    }
}

/// Enumerates the sense-reversing and singular zeros of `f_c` as the limits of
/// critical orbits of `R`. Orbits are run in parallel and merged in seed order.
pub fn nonrepelling_zeros_via_orbits(
    r: &RationalFunction,
    c: Complex64,
    solver_cfg: &SolverConfig,
    cfg: &OrbitConfig,
) -> Result<OrbitSearch> {
    let map = build_iterated_map(r, c)?;
    let escape = match cfg.escape_radius {
        Some(e) => e,
        None => 10.0 * enclosing_radius(r, c, DEFAULT_RADIUS_FACTOR)?,
    };
    let seeds = orbit_seeds(map.shifted())?;
    let outcomes: Vec<OrbitOutcome> = seeds
        .par_iter()
        .map(|&s| iterate_orbit(&map, s, cfg, escape))
        .collect();

    let shifted = map.shifted();
    let mut limits: Vec<Complex64> = outcomes
        .iter()
        .filter_map(|o| match o.limit {
            OrbitLimit::Point(z) => Some(z),
            _ => None,
        })
        .filter_map(|z| {
            let z = polish(shifted, z, 20);
            let residual = harmonic_value(shifted, z).norm();
            let r_prime = shifted.derivative_at(z).norm();
            (residual <= solver_cfg.accept_tol * (1.0 + z.norm())
                && r_prime <= 1.0 + solver_cfg.tau_sing)
                .then_some(z)
        })
        .collect();
    sort_points(&mut limits);
    let mut zeros: Vec<Complex64> = Vec::new();
    for z in limits {
        if !zeros
            .iter()
            .any(|w| (w - z).norm() <= solver_cfg.dedupe_radius * (1.0 + z.norm()))
        {
            zeros.push(z);
        }
    }
    let unresolved = outcomes.iter().filter(|o| !o.is_resolved()).count();
    Ok(OrbitSearch {
        zeros,
        outcomes,
        unresolved,
    })
}

/// Axis-aligned sampling window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if !(x_min < x_max && y_min < y_max) {
            return Err(Error::InvalidParameter(format!(
                "degenerate window [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    pub fn square(half_width: f64) -> Result<Self> {
        Self::new(-half_width, half_width, -half_width, half_width)
    }
}

/// `|r'(z)| - 1` with the pole-free cleared form `|W| / |q|^2 - 1`.
fn critical_gap(w: &Polynomial, q: &Polynomial, z: Complex64) -> f64 {
    let qz = q.eval(z).norm_sqr();
    if qz == 0.0 {
        return f64::INFINITY;
    }
    w.eval(z).norm() / qz - 1.0
}

fn refine_on_edge(w: &Polynomial, q: &Polynomial, a: Complex64, b: Complex64) -> Complex64 {
    let (mut lo, mut hi) = (a, b);
    let mut f_lo = critical_gap(w, q, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = critical_gap(w, q, mid);
        if f_mid.abs() <= 1e-10 || (hi - lo).norm() <= 1e-16 * (1.0 + mid.norm()) {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Points of the critical curve `|r'(z)| = 1` inside `window`.
///
/// Marching squares on a `grid_n x grid_n` node grid of `|W|^2 - |q|^4` (same
/// sign as `|r'|^2 - 1`, free of poles); every grid edge with a sign change
/// contributes one point, refined by bisection along the edge.
pub fn critical_curve_sample(
    r: &RationalFunction,
    window: &Window,
    grid_n: usize,
) -> Result<Vec<Complex64>> {
    if grid_n < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid_n must be at least 2, got {grid_n}"
        )));
    }
    let w = r.wronskian_numerator();
    let q = r.denominator();
    let step_x = (window.x_max - window.x_min) / (grid_n - 1) as f64;
    let step_y = (window.y_max - window.y_min) / (grid_n - 1) as f64;
    let node = |i: usize, j: usize| {
        Complex64::new(window.x_min + i as f64 * step_x, window.y_min + j as f64 * step_y)
    };
    let field: Vec<Vec<f64>> = (0..grid_n)
        .into_par_iter()
        .map(|j| {
            (0..grid_n)
                .map(|i| {
                    let z = node(i, j);
                    w.eval(z).norm_sqr() - q.eval(z).norm_sqr().powi(2)
                })
                .collect()
        })
        .collect();

    let mut points = Vec::new();
    let crosses = |a: f64, b: f64| (a > 0.0) != (b > 0.0);
    for j in 0..grid_n {
        for i in 0..grid_n {
            let here = field[j][i];
            if i + 1 < grid_n && crosses(here, field[j][i + 1]) {
                points.push(refine_on_edge(&w, q, node(i, j), node(i + 1, j)));
            }
            if j + 1 < grid_n && crosses(here, field[j + 1][i]) {
                points.push(refine_on_edge(&w, q, node(i, j), node(i, j + 1)));
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyWindow);
    }
    Ok(points)
}

/// Images `r(z) - conj(z)` of critical-curve points: the shifts `c` at which
/// `f_c` has a singular zero.
pub fn caustic_points(r: &RationalFunction, curve: &[Complex64]) -> Vec<Complex64> {
    curve.iter().map(|&z| r.eval(z) - z.conj()).collect()
}

/// Unit normal of the caustic at the image of the critical point `z`.
///
/// With `r'(z) = e^{i phi}` the differential `df = r' dz - conj(dz)` maps every
/// direction onto `i e^{i phi / 2}`, the caustic tangent; the normal is
/// `e^{i phi / 2}`.
pub fn caustic_normal(r: &RationalFunction, z: Complex64) -> Complex64 {
    let phi = r.derivative_at(z).arg();
    Complex64::from_polar(1.0, 0.5 * phi)
}
