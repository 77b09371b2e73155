//! Zeros of `f_c(z) = r(z) - conj(z) - c`.
//!
//! Candidates are the roots of the fixed-point polynomial of `conj(r_c) ∘ r_c`.
//! Poles and spurious fixed points are filtered by the residual of `f_c`
//! itself, survivors are Newton-polished on the real 2x2 system and then
//! classified by `|r'|` against the unit circle.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{RationalFunction, COPRIME_TOL};
use crate::roots::{find_roots, DEFAULT_MAX_ITER, DEFAULT_ROOT_TOL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub root_tol: f64,
    pub max_iter: usize,
    /// Candidate acceptance before polishing, scaled by `1 + |z|`.
    pub accept_tol: f64,
    /// Residual every reported zero must reach after polishing, scaled by `1 + |z|`.
    pub polish_tol: f64,
    /// Half-width of the band around `|r'| = 1` reported as singular.
    pub tau_sing: f64,
    /// `|q(z)|` below this fraction of the largest coefficient of `q` marks a pole.
    pub pole_tol: f64,
    /// Two zeros closer than `dedupe_radius * (1 + |z|)` are one zero.
    pub dedupe_radius: f64,
    /// A candidate above `accept_tol` is still polished, and kept if it reaches
    /// `polish_tol` without moving more than `rescue_radius * (1 + |z|)`.
    /// Roots in clusters of the fixed-point polynomial can be this inaccurate.
    pub rescue_radius: f64,
    pub coprime_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            root_tol: DEFAULT_ROOT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            accept_tol: 1e-6,
            polish_tol: 1e-10,
            tau_sing: 1e-8,
            pole_tol: 1e-10,
            dedupe_radius: 1e-7,
            rescue_radius: 1e-3,
            coprime_tol: COPRIME_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    SensePreserving,
    SenseReversing,
    Singular,
}

impl Orientation {
    pub fn from_r_prime_abs(r_prime_abs: f64, tau_sing: f64) -> Self {
        if r_prime_abs > 1.0 + tau_sing {
            Self::SensePreserving
        } else if r_prime_abs < 1.0 - tau_sing {
            Self::SenseReversing
        } else {
            Self::Singular
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::SensePreserving => "sense-preserving",
            Self::SenseReversing => "sense-reversing",
            Self::Singular => "singular",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub location: Complex64,
    /// `|r'(z)|`; the Jacobian of `f` at the zero is `|r'|^2 - 1`.
    pub r_prime_abs: f64,
    pub orientation: Orientation,
    /// `|r_c(z) - conj(z)|`.
    pub residual: f64,
}

impl Zero {
    /// Distance of `|r'|` from the singular value 1.
    pub fn singular_gap(&self) -> f64 {
        (self.r_prime_abs - 1.0).abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    /// Sorted lexicographically by `(re, im)`.
    pub zeros: Vec<Zero>,
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
    pub candidates_examined: usize,
    /// `(n_p, n_q)` of the shifted function `r_c`.
    pub instance_degrees: (usize, usize),
    /// Some zero lies within `10 * tau_sing` of `|r'| = 1`.
    pub near_caustic: bool,
}

impl ZeroSet {
    pub fn total(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_regular(&self) -> bool {
        self.n_zero == 0
    }

    pub fn non_sense_preserving(&self) -> impl Iterator<Item = &Zero> {
        self.zeros
            .iter()
            .filter(|z| z.orientation != Orientation::SensePreserving)
    }
}

fn lexicographic(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub(crate) fn sort_points(points: &mut [Complex64]) {
    points.sort_by(lexicographic);
}

/// `f_c(z) = r_c(z) - conj(z)` for an already shifted `r_c`.
pub fn harmonic_value(shifted: &RationalFunction, z: Complex64) -> Complex64 {
    shifted.eval(z) - z.conj()
}

/// Damped Newton on `(Re f, Im f)` with `f = r_c - conj(z)`.
///
/// With `a = r'(z)` the real Jacobian is represented by `df = a dz - conj(dz)`,
/// whose inverse gives `dz = -(conj(a) f + conj(f)) / (|a|^2 - 1)`. Near
/// `|a| = 1` the step falls back to steepest descent on `|f|^2`.
pub fn polish(shifted: &RationalFunction, start: Complex64, max_steps: usize) -> Complex64 {
    let mut z = start;
    let mut f = harmonic_value(shifted, z);
    if !f.is_finite() {
        return z;
    }
    for _ in 0..max_steps {
        let scale = 1.0 + z.norm();
        if f.norm() <= 1e-16 * scale {
            break;
        }
        let a = shifted.derivative_at(z);
        let det = a.norm_sqr() - 1.0;
        let newton = -(a.conj() * f + f.conj()) / det;
        let gradient = -(f * a.conj() - f.conj());
        let mut improved = false;
        for dir in [newton, gradient] {
            if !dir.is_finite() || dir.norm() == 0.0 {
                continue;
            }
            let mut t = if dir == gradient {
                f.norm() / dir.norm()
            } else {
                1.0
            };
            for _ in 0..40 {
                let cand = z + dir * t;
                let fc = harmonic_value(shifted, cand);
                if fc.is_finite() && fc.norm() < f.norm() {
                    z = cand;
                    f = fc;
                    improved = true;
                    break;
                }
                t *= 0.5;
            }
            if improved {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    z
}

/// Builds the [`Zero`] record for a point already known to be a zero of `f_c`.
pub fn classify(
    r: &RationalFunction,
    c: Complex64,
    z: Complex64,
    cfg: &SolverConfig,
) -> Result<Zero> {
    let residual = (r.eval(z) - c - z.conj()).norm();
    classify_with_residual(r, z, residual, cfg.accept_tol * (1.0 + z.norm()), cfg.tau_sing)
}

fn classify_with_residual(
    r: &RationalFunction,
    z: Complex64,
    residual: f64,
    tol: f64,
    tau_sing: f64,
) -> Result<Zero> {
    if !(residual <= tol) {
        return Err(Error::NotAZero { residual, tol });
    }
    // r_c' = r'
    let r_prime_abs = r.derivative_at(z).norm();
    Ok(Zero {
        location: z,
        r_prime_abs,
        orientation: Orientation::from_r_prime_abs(r_prime_abs, tau_sing),
        residual,
    })
}

/// Starting points next to the simple poles of `r_c`.
///
/// Near a pole `z0` with residue `A`, `r_c(z) = conj(z)` is approximately
/// `A / (z - z0) = conj(z0)`. The fixed-point polynomial has a root cluster at
/// every pole, and a zero hiding in a cluster can be located too coarsely to
/// polish from; this seed recovers it.
fn pole_seeds(shifted: &RationalFunction) -> Vec<Complex64> {
    let q = shifted.denominator();
    if shifted.n_q() == 0 {
        return Vec::new();
    }
    let poles = match find_roots(q, DEFAULT_ROOT_TOL, DEFAULT_MAX_ITER) {
        Ok(set) => set.roots,
        Err(Error::DidNotConverge(set)) => set.roots,
        Err(_) => return Vec::new(),
    };
    let dq = q.derivative();
    poles
        .into_iter()
        .filter_map(|z0| {
            let residue = shifted.numerator().eval(z0) / dq.eval(z0);
            let seed = z0 + residue / z0.conj();
            seed.is_finite().then_some(seed)
        })
        .collect()
}

/// Locates, classifies and counts all zeros of `r(z) - conj(z) - c`.
pub fn solve(r: &RationalFunction, c: Complex64, cfg: &SolverConfig) -> Result<ZeroSet> {
    let shifted = r.shift_numerator_with_tolerance(c, cfg.coprime_tol)?;
    solve_shifted(&shifted, cfg)
}

/// [`solve`] for `r_c` given directly (`c = 0`).
pub fn solve_shifted(shifted: &RationalFunction, cfg: &SolverConfig) -> Result<ZeroSet> {
    if shifted.degree() < 2 {
        return Err(Error::DegreeTooLow {
            degree: shifted.degree(),
        });
    }
    let fixed = shifted.fixed_point_numerator()?;
    let candidates = find_roots(&fixed, cfg.root_tol, cfg.max_iter)?.roots;

    let p = shifted.numerator();
    let q = shifted.denominator();
    let q_scale = q.max_abs_coeff();
    let cleared_scale = p.max_abs_coeff().max(q_scale);

    let mut accepted: Vec<Zero> = Vec::new();
    for seed in pole_seeds(shifted) {
        let z = polish(shifted, seed, 60);
        let residual = harmonic_value(shifted, z).norm();
        if let Ok(zero) =
            classify_with_residual(shifted, z, residual, cfg.polish_tol * (1.0 + z.norm()), cfg.tau_sing)
        {
            accepted.push(zero);
        }
    }
    for &cand in &candidates {
        let scale = 1.0 + cand.norm();
        if q.eval(cand).norm() <= cfg.pole_tol * q_scale {
            // On a pole f_c is infinite; only an (approximately) common root of
            // p - c q and q could make it look like a zero.
            let cleared = (p.eval(cand) - cand.conj() * q.eval(cand)).norm();
            if cleared <= cfg.accept_tol * cleared_scale {
                return Err(Error::PoleDegenerate {
                    re: cand.re,
                    im: cand.im,
                });
            }
            continue;
        }
        let residual = harmonic_value(shifted, cand).norm();
        let z = polish(shifted, cand, 60);
        if !(residual <= cfg.accept_tol * scale) && !((z - cand).norm() <= cfg.rescue_radius * scale) {
            continue;
        }
        let residual = harmonic_value(shifted, z).norm();
        match classify_with_residual(
            shifted,
            z,
            residual,
            cfg.polish_tol * (1.0 + z.norm()),
            cfg.tau_sing,
        ) {
            Ok(zero) => accepted.push(zero),
            Err(_) => continue,
        }
    }

    accepted.sort_by(|a, b| lexicographic(&a.location, &b.location));
    let mut zeros: Vec<Zero> = Vec::with_capacity(accepted.len());
    for zero in accepted {
        let radius = cfg.dedupe_radius * (1.0 + zero.location.norm());
        match zeros
            .iter_mut()
            .find(|kept| (kept.location - zero.location).norm() <= radius)
        {
            Some(kept) => {
                if zero.residual < kept.residual {
                    *kept = zero;
                }
            }
            None => zeros.push(zero),
        }
    }
    zeros.sort_by(|a, b| lexicographic(&a.location, &b.location));

    let count = |o: Orientation| zeros.iter().filter(|z| z.orientation == o).count();
    let near_caustic = zeros
        .iter()
        .any(|z| z.singular_gap() <= 10.0 * cfg.tau_sing);
    Ok(ZeroSet {
        n_plus: count(Orientation::SensePreserving),
        n_minus: count(Orientation::SenseReversing),
        n_zero: count(Orientation::Singular),
        near_caustic,
        candidates_examined: candidates.len(),
        instance_degrees: (shifted.n_p(), shifted.n_q()),
        zeros,
    })
}
