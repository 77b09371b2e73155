//! Named instances: harmonic monomials, point-lens sums, the
//! Mao–Petters–Witt polygon and Rhie's polygon-plus-center lens, and seeded
//! random instances for fuzzing.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, RationalFunction};
use crate::solver::{solve, SolverConfig};

pub const MAX_RESAMPLES: usize = 100;
/// Polygon radius used by `mpw{n}` when none is given.
pub const DEFAULT_MPW_RADIUS: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub name: String,
    pub r: RationalFunction,
    pub c: Complex64,
    pub expected_count: Option<usize>,
    pub provenance: String,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `z^n - conj(z)`.
pub fn monomial_harmonic(n: usize) -> Result<InstanceSpec> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("monomial degree must be >= 2, got {n}")));
    }
    Ok(InstanceSpec {
        name: format!("monomial{n}"),
        r: RationalFunction::polynomial(Polynomial::monomial(one(), n)),
        c: zero(),
        expected_count: (n == 2).then_some(4),
        provenance: "harmonic polynomial z^n - conj(z); count 3n-2 known in closed form for n = 2".into(),
    })
}

/// `sum_j m_j / (z - z_j)` over a common denominator: the lens map of point
/// masses `m_j` at `z_j`.
pub fn point_mass_sum(masses: &[f64], positions: &[Complex64]) -> Result<InstanceSpec> {
    if masses.len() != positions.len() {
        return Err(Error::InvalidParameter(format!(
            "{} masses for {} positions",
            masses.len(),
            positions.len()
        )));
    }
    if masses.len() < 2 {
        return Err(Error::InvalidParameter("at least two masses are required".into()));
    }
    if let Some(m) = masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
        return Err(Error::InvalidParameter(format!("mass must be positive, got {m}")));
    }
    for (i, a) in positions.iter().enumerate() {
        if positions[..i].iter().any(|b| b == a) {
            return Err(Error::DuplicatePosition { re: a.re, im: a.im });
        }
    }
    let q = Polynomial::from_roots(positions);
    let mut p = Polynomial::zero();
    for (j, &m) in masses.iter().enumerate() {
        let others: Vec<Complex64> = positions
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, z)| *z)
            .collect();
        p = &p + &Polynomial::from_roots(&others).scale(Complex64::new(m, 0.0));
    }
    let r = RationalFunction::new(p, q)?;
    Ok(InstanceSpec {
        name: format!("point_mass{}", masses.len()),
        r,
        c: zero(),
        expected_count: None,
        provenance: "point-mass lens, partial fractions over a common denominator".into(),
    })
}

/// Mao–Petters–Witt lens: masses `1/n` at the vertices of a regular `n`-gon of
/// radius `a`, `r(z) = z^{n-1} / (z^n - a^n)`.
pub fn mpw(n: usize, a: f64) -> Result<InstanceSpec> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("polygon needs n >= 2, got {n}")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("polygon radius must be positive, got {a}")));
    }
    let mut q = vec![zero(); n + 1];
    q[0] = Complex64::new(-a.powi(n as i32), 0.0);
    q[n] = one();
    let r = RationalFunction::new(Polynomial::monomial(one(), n - 1), Polynomial::new(q))?;
    Ok(InstanceSpec {
        name: format!("mpw{n}"),
        r,
        c: zero(),
        expected_count: (n == 2 && a < 1.0).then_some(5),
        provenance: format!("Mao-Petters-Witt polygon lens, a = {a}"),
    })
}

/// Rhie's lens: the `mpw(n, a)` polygon carrying mass `1 - epsilon` plus a
/// central mass `epsilon`,
/// `r(z) = (1 - eps) z^{n-1} / (z^n - a^n) + eps / z = (z^n - eps a^n) / (z^{n+1} - a^n z)`.
pub fn rhie(n: usize, epsilon: f64, a: f64) -> Result<InstanceSpec> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("polygon needs n >= 2, got {n}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("polygon radius must be positive, got {a}")));
    }
    let an = a.powi(n as i32);
    let mut p = vec![zero(); n + 1];
    p[0] = Complex64::new(-epsilon * an, 0.0);
    p[n] = one();
    let mut q = vec![zero(); n + 2];
    q[1] = Complex64::new(-an, 0.0);
    q[n + 1] = one();
    let r = RationalFunction::new(Polynomial::new(p), Polynomial::new(q))?;
    Ok(InstanceSpec {
        name: format!("rhie{n}"),
        r,
        c: zero(),
        expected_count: None,
        provenance: format!("Rhie polygon-plus-center lens, epsilon = {epsilon}, a = {a}"),
    })
}

/// Sweep grid for [`rhie_sweep`].
pub fn default_rhie_grid() -> (Vec<f64>, Vec<f64>) {
    let eps = [0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1].to_vec();
    let a = (0..=40).map(|k| 0.5 + 0.025 * k as f64).collect();
    (eps, a)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhieParameters {
    pub epsilon: f64,
    pub a: f64,
    pub count: usize,
}

/// Scans `(epsilon, a)` in grid order and returns the first pair for which the
/// solver counts `5 (n + 1) - 5` zeros, or `None`.
pub fn rhie_sweep(
    n: usize,
    epsilons: &[f64],
    radii: &[f64],
    cfg: &SolverConfig,
) -> Result<Option<RhieParameters>> {
    let target = 5 * n;
    let grid: Vec<(f64, f64)> = epsilons
        .iter()
        .flat_map(|&e| radii.iter().map(move |&a| (e, a)))
        .collect();
    let counts: Vec<Option<usize>> = grid
        .par_iter()
        .map(|&(e, a)| {
            let spec = rhie(n, e, a).ok()?;
            solve(&spec.r, spec.c, cfg).ok().map(|set| set.total())
        })
        .collect();
    Ok(grid
        .iter()
        .zip(counts)
        .find(|(_, count)| *count == Some(target))
        .map(|(&(epsilon, a), count)| RhieParameters {
            epsilon,
            a,
            count: count.unwrap_or(0),
        }))
}

/// Rhie's lens at a small nonzero shift `c`. The shifted numerator
/// `p - c q` has degree `n + 1`, so a regular Rhie lens with `5n` zeros
/// becomes an equal-degree instance of type `(n + 1, n + 1)` with
/// `5 (n + 1) - 5` zeros once `|c|` is small enough to keep every zero.
pub fn shifted_rhie(n: usize, epsilon: f64, a: f64, c: Complex64) -> Result<InstanceSpec> {
    if c == zero() {
        return Err(Error::InvalidParameter("shift must be nonzero".into()));
    }
    let mut spec = rhie(n, epsilon, a)?;
    spec.name = format!("rhie{n}_shifted");
    spec.c = c;
    spec.provenance = format!("{}, shifted by c = {c}", spec.provenance);
    Ok(spec)
}

fn unit_f64(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform point of the closed unit disk.
fn unit_disk(rng: &mut SplitMix64) -> Complex64 {
    let radius = unit_f64(rng).sqrt();
    let angle = TAU * unit_f64(rng);
    Complex64::from_polar(radius, angle)
}

/// Random `p/q` of exact type `(n_p, n_q)` with coefficients uniform in the
/// unit disk, drawn from SplitMix64 seeded with `seed`; `c = 0`.
pub fn random_instance(n_p: usize, n_q: usize, seed: u64) -> Result<InstanceSpec> {
    if n_p.max(n_q) < 2 {
        return Err(Error::OutOfScope { n_p, n_q });
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    for _ in 0..MAX_RESAMPLES {
        let p = Polynomial::new((0..=n_p).map(|_| unit_disk(&mut rng)).collect());
        let q = Polynomial::new((0..=n_q).map(|_| unit_disk(&mut rng)).collect());
        if p.degree() != Some(n_p) || q.degree() != Some(n_q) {
            continue;
        }
        let Ok(r) = RationalFunction::new(p, q) else {
            continue;
        };
        if r.n_p() != n_p || r.n_q() != n_q {
            continue;
        }
        return Ok(InstanceSpec {
            name: format!("random_{n_p}_{n_q}_{seed}"),
            r,
            c: zero(),
            expected_count: None,
            provenance: format!("SplitMix64 seed {seed}, coefficients uniform in the unit disk"),
        });
    }
    Err(Error::GenerationFailed {
        attempts: MAX_RESAMPLES,
    })
}

/// Overrides accepted by [`catalog`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CatalogParams {
    pub a: Option<f64>,
    pub epsilon: Option<f64>,
}

/// Catalog names: `monomial{n}`, `mpw{n}`, `rhie{n}` and `binary` (`mpw2`
/// at `a = 1/2`). `rhie{n}` without explicit parameters runs [`rhie_sweep`]
/// on the default grid.
pub fn catalog(name: &str, params: &CatalogParams) -> Result<InstanceSpec> {
    let split = name.find(|ch: char| ch.is_ascii_digit()).unwrap_or(name.len());
    let (family, digits) = name.split_at(split);
    let n = || {
        digits
            .parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("unknown gallery instance {name:?}")))
    };
    match family {
        "binary" if digits.is_empty() => mpw(2, params.a.unwrap_or(DEFAULT_MPW_RADIUS)),
        "monomial" => monomial_harmonic(n()?),
        "mpw" => mpw(n()?, params.a.unwrap_or(DEFAULT_MPW_RADIUS)),
        "rhie" => {
            let n = n()?;
            match (params.epsilon, params.a) {
                (Some(e), Some(a)) => rhie(n, e, a),
                (e, a) => {
                    let (mut eps_grid, mut a_grid) = default_rhie_grid();
                    if let Some(e) = e {
                        eps_grid = vec![e];
                    }
                    if let Some(a) = a {
                        a_grid = vec![a];
                    }
                    let found = rhie_sweep(n, &eps_grid, &a_grid, &SolverConfig::default())?;
                    let params = found.ok_or_else(|| {
                        Error::InvalidParameter(format!("no Rhie parameters reach {} zeros for n = {n}", 5 * n))
                    })?;
                    let mut spec = rhie(n, params.epsilon, params.a)?;
                    spec.expected_count = Some(params.count);
                    Ok(spec)
                }
            }
        }
        _ => Err(Error::InvalidParameter(format!("unknown gallery instance {name:?}"))),
    }
}
