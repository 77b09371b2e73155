//! All-roots solver for dense complex polynomials (Aberth–Ehrlich).

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200;

/// Angular offset of the initial guesses, breaks symmetry with the coefficients.
const ANGLE_OFFSET: f64 = 0.7;
const POLISH_STEPS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|poly(root)|` for each root.
    pub residuals: Vec<f64>,
    pub converged: Vec<bool>,
    pub iterations_used: usize,
}

impl RootSet {
    pub fn unconverged(&self) -> usize {
        self.converged.iter().filter(|c| !**c).count()
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|c| *c)
    }
}

/// `1 + max_k |a_k / a_deg|`; every root lies strictly inside this radius.
pub fn cauchy_root_bound(poly: &Polynomial) -> Result<f64> {
    let deg = match poly.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::DegreeZero),
    };
    let lead = poly.coeffs()[deg].norm();
    let max = poly.coeffs()[..deg]
        .iter()
        .map(|c| c.norm() / lead)
        .fold(0.0, f64::max);
    Ok(1.0 + max)
}

/// Newton ratio `p(z) / p'(z)` and the relative residual `|p(z)| / sum |a_k||z|^k`.
///
/// Outside the unit disk the reversed polynomial is evaluated at `1/z` so
/// that high degrees do not overflow.
fn newton_ratio(coeffs: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let m = coeffs.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = p;
        let mut scale = 0.0;
        let r = z.norm();
        for c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
            scale = scale * r + c.norm();
        }
        (p / dp, p.norm() / scale)
    } else {
        let w = z.inv();
        let r = w.norm();
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = p;
        let mut scale = 0.0;
        for c in coeffs.iter() {
            dp = dp * w + p;
            p = p * w + c;
            scale = scale * r + c.norm();
        }
        let den = p * m as f64 - w * dp;
        (z * p / den, p.norm() / scale)
    }
}

/// Finds all `deg(poly)` roots by simultaneous Aberth–Ehrlich iteration from a
/// circle of initial guesses, followed by per-root Newton polishing.
///
/// A root is converged once its relative residual
/// `|p(z)| / sum |a_k||z|^k` is at most `root_tol`.
pub fn find_roots(poly: &Polynomial, root_tol: f64, max_iter: usize) -> Result<RootSet> {
    let deg = match poly.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::DegreeZero),
    };
    let all = poly.coeffs();
    // Exact zeros at the origin are split off; they need no iteration.
    let zeros_at_origin = all.iter().take_while(|c| c.norm() == 0.0).count();
    let coeffs = &all[zeros_at_origin..];
    let m = deg - zeros_at_origin;

    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    let mut converged = vec![true; zeros_at_origin];
    let mut iterations_used = 0;

    if m > 0 {
        let reduced = Polynomial::new(coeffs.to_vec());
        let bound = cauchy_root_bound(&reduced)?;
        let inner = (coeffs[0].norm() / coeffs[m].norm()).powf(1.0 / m as f64);
        let radius = (bound * inner).sqrt();
        let mut z: Vec<Complex64> = (0..m)
            .map(|j| Complex64::from_polar(radius, TAU * j as f64 / m as f64 + ANGLE_OFFSET))
            .collect();
        let mut done = vec![false; m];

        for iter in 0..max_iter {
            iterations_used = iter + 1;
            for i in 0..m {
                if done[i] {
                    continue;
                }
                let (ratio, rel) = newton_ratio(coeffs, z[i]);
                if rel <= root_tol {
                    done[i] = true;
                    continue;
                }
                if !ratio.is_finite() {
                    // p'(z) vanished: nudge off the critical point.
                    let nudge = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                    z[i] += nudge;
                    continue;
                }
                let repulsion: Complex64 = (0..m)
                    .filter(|&j| j != i)
                    .map(|j| (z[i] - z[j]).inv())
                    .sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
                if step.is_finite() {
                    z[i] -= step;
                } else {
                    z[i] -= ratio;
                }
            }
            if done.iter().all(|d| *d) {
                break;
            }
        }

        for zi in z.iter_mut() {
            let (_, mut best) = newton_ratio(coeffs, *zi);
            for _ in 0..POLISH_STEPS {
                let (ratio, _) = newton_ratio(coeffs, *zi);
                if !ratio.is_finite() {
                    break;
                }
                let cand = *zi - ratio;
                let (_, rel) = newton_ratio(coeffs, cand);
                if rel < best {
                    best = rel;
                    *zi = cand;
                } else {
                    break;
                }
            }
        }
        for zi in &z {
            let (_, rel) = newton_ratio(coeffs, *zi);
            converged.push(rel <= root_tol);
        }
        roots.extend(z);
    }

    let residuals = roots.iter().map(|&z| poly.eval(z).norm()).collect();
    let set = RootSet {
        roots,
        residuals,
        converged,
        iterations_used,
    };
    if set.all_converged() {
        Ok(set)
    } else {
        Err(Error::DidNotConverge(Box::new(set)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Every expected root has a distinct found root within `tol`.
    fn assert_root_match(found: &[Complex64], expected: &[Complex64], tol: f64) {
        assert_eq!(found.len(), expected.len());
        let mut used = vec![false; found.len()];
        for e in expected {
            let (idx, dist) = found
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, f)| (i, (f - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(dist <= tol, "expected root {e} missing (closest at {dist:e}); found {found:?}");
            used[idx] = true;
        }
    }

    #[test]
    fn quadratic() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let set = find_roots(&p, DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_root_match(&set.roots, &[c(-1.0, 0.0), c(1.0, 0.0)], 1e-12);
    }

    #[test]
    fn cube_roots_of_unity() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]);
        let set = find_roots(&p, DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER).unwrap();
        let expected: Vec<_> = (0..3).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 3.0)).collect();
        assert_root_match(&set.roots, &expected, 1e-12);
    }

    #[test]
    fn z4_minus_z() {
        let p = Polynomial::from_real(&[0.0, -1.0, 0.0, 0.0, 1.0]);
        let set = find_roots(&p, DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER).unwrap();
        let mut expected = vec![c(0.0, 0.0)];
        expected.extend((0..3).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 3.0)));
        assert_root_match(&set.roots, &expected, 1e-12);
        assert!(set.residuals.iter().all(|r| *r <= 1e-12));
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(matches!(
            find_roots(&Polynomial::from_real(&[3.0]), 1e-12, 10),
            Err(Error::DegreeZero)
        ));
        assert!(matches!(
            find_roots(&Polynomial::zero(), 1e-12, 10),
            Err(Error::DegreeZero)
        ));
    }

    #[test]
    fn cauchy_bound_examples() {
        assert_eq!(cauchy_root_bound(&Polynomial::from_real(&[-1.0, 0.0, 1.0])).unwrap(), 2.0);
        assert_eq!(cauchy_root_bound(&Polynomial::from_real(&[0.0, 0.0, 0.0, 1.0])).unwrap(), 1.0);
        assert_eq!(cauchy_root_bound(&Polynomial::from_real(&[2.0, -3.0, 1.0])).unwrap(), 4.0);
        assert!(matches!(
            cauchy_root_bound(&Polynomial::from_real(&[2.0])),
            Err(Error::DegreeZero)
        ));
    }

    #[test]
    fn high_degree_unit_roots() {
        let mut coeffs = vec![c(0.0, 0.0); 201];
        coeffs[0] = c(-1.0, 0.0);
        coeffs[200] = c(1.0, 0.0);
        let set = find_roots(&Polynomial::new(coeffs), DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER).unwrap();
        let expected: Vec<_> = (0..200).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 200.0)).collect();
        assert_root_match(&set.roots, &expected, 1e-10);
    }

    #[test]
    fn double_root_is_located() {
        let p = Polynomial::from_roots(&[c(0.5, 0.5), c(0.5, 0.5), c(-1.0, 0.0)]);
        let set = find_roots(&p, DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_root_match(&set.roots, &[c(0.5, 0.5), c(0.5, 0.5), c(-1.0, 0.0)], 1e-6);
    }
}
