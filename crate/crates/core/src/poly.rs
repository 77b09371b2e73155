//! Dense complex polynomials and the rational functions `r = p / q` built on them.
//!
//! Coefficients are stored in ascending order (`coeffs[k]` multiplies `z^k`) and
//! kept trimmed: a leading coefficient whose modulus falls below
//! [`TRIM_REL`] times the largest coefficient modulus is dropped. The zero
//! polynomial is the empty coefficient vector and has no degree.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold below which leading coefficients are treated as zero.
pub const TRIM_REL: f64 = 1e-12;

/// Default relative tolerance of the approximate-gcd coprimality gate.
pub const COPRIME_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn trim_in_place(coeffs: &mut Vec<Complex64>, rel: f64) {
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let cutoff = rel * max;
    while let Some(last) = coeffs.last() {
        if last.norm() <= cutoff {
            coeffs.pop();
        } else {
            break;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl From<Vec<Complex64>> for Polynomial {
    fn from(coeffs: Vec<Complex64>) -> Self {
        Self::new(coeffs)
    }
}

impl From<Polynomial> for Vec<Complex64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        trim_in_place(&mut coeffs, TRIM_REL);
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `coef * z^k`.
    pub fn monomial(coef: Complex64, k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = coef;
        Self::new(coeffs)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| &acc * &Self::new(vec![-r, ONE]))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |a_k| |z|^k`, the natural scale for the rounding error of [`Self::eval`].
    pub fn abs_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Replaces every coefficient by its complex conjugate, so that
    /// `p.conjugate_coefficients().eval(z) == conj(p.eval(conj(z)))`.
    pub fn conjugate_coefficients(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lead) => Self::new(self.coeffs.iter().map(|&c| c / lead).collect()),
            None => Self::zero(),
        }
    }

    /// Multiplies by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Euclidean division `self = quot * divisor + rem` with `deg rem < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let (quot, rem) = raw_div_rem(&self.coeffs, &divisor.coeffs);
        (Self::new(quot), Self::new(rem))
    }
}

/// Long division on raw coefficient vectors; the divisor must be nonzero.
fn raw_div_rem(num: &[Complex64], den: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    assert!(!den.is_empty(), "division by the zero polynomial");
    let dd = den.len() - 1;
    if num.len() <= dd {
        return (Vec::new(), num.to_vec());
    }
    let mut rem = num.to_vec();
    let lead = den[dd];
    let mut quot = vec![ZERO; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let t = rem[k + dd] / lead;
        quot[k] = t;
        for (j, &d) in den.iter().enumerate() {
            rem[k + j] -= t * d;
        }
        rem[k + dd] = ZERO;
    }
    rem.truncate(dd);
    (quot, rem)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

/// Degree of the approximate gcd of `a` and `b`.
///
/// Euclid's algorithm on max-normalized operands; a remainder whose
/// coefficients all fall below `tol` (relative to the unit-normalized working
/// pair) is taken to be zero.
pub fn gcd_degree(a: &Polynomial, b: &Polynomial, tol: f64) -> Result<usize> {
    match (a.degree(), b.degree()) {
        (None, None) => return Err(Error::BothZero),
        (None, Some(d)) | (Some(d), None) => return Ok(d),
        _ => {}
    }
    let normalize = |v: &[Complex64]| -> Vec<Complex64> {
        let m = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
        v.iter().map(|&c| c / m).collect()
    };
    let (mut u, mut v) = if a.coeffs.len() >= b.coeffs.len() {
        (normalize(&a.coeffs), normalize(&b.coeffs))
    } else {
        (normalize(&b.coeffs), normalize(&a.coeffs))
    };
    loop {
        if v.len() == 1 {
            return Ok(0);
        }
        let (_, mut rem) = raw_div_rem(&u, &v);
        while rem.last().is_some_and(|c| c.norm() <= tol) {
            rem.pop();
        }
        if rem.is_empty() {
            return Ok(v.len() - 1);
        }
        u = v;
        v = normalize(&rem);
    }
}

/// Substitutes `p / q` into `s`: returns `(N, D)` with `N / D = s(p / q)` and
/// `D = q^deg(s)`.
pub fn compose_with_rational(
    s: &Polynomial,
    p: &Polynomial,
    q: &Polynomial,
) -> (Polynomial, Polynomial) {
    let Some(d) = s.degree() else {
        return (Polynomial::zero(), Polynomial::one());
    };
    // N_j = N_{j+1} * p + s_j * q^(d-j), starting from N_d = s_d.
    let mut num = Polynomial::constant(s.coeffs[d]);
    let mut q_pow = Polynomial::one();
    for k in (0..d).rev() {
        q_pow = &q_pow * q;
        num = &(&num * p) + &q_pow.scale(s.coeffs[k]);
    }
    (num, q_pow)
}

/// A rational function `p / q` with a monic denominator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    numerator: Polynomial,
    denominator: Polynomial,
    n_p: usize,
    n_q: usize,
}

impl RationalFunction {
    /// Builds `p / q`, normalizing `q` to be monic and checking coprimality
    /// with [`COPRIME_TOL`].
    pub fn new(p: Polynomial, q: Polynomial) -> Result<Self> {
        Self::with_tolerance(p, q, COPRIME_TOL)
    }

    pub fn with_tolerance(p: Polynomial, q: Polynomial, tol: f64) -> Result<Self> {
        let lead = q.leading().ok_or(Error::ZeroDenominator)?;
        let inv = ONE / lead;
        let p = p.scale(inv);
        let q = q.scale(inv);
        let g = gcd_degree(&p, &q, tol)?;
        if g > 0 {
            return Err(Error::NotCoprime { gcd_degree: g });
        }
        Ok(Self::from_parts(p, q))
    }

    /// Polynomial `p` viewed as `p / 1`.
    pub fn polynomial(p: Polynomial) -> Self {
        Self::from_parts(p, Polynomial::one())
    }

    fn from_parts(numerator: Polynomial, denominator: Polynomial) -> Self {
        let n_p = numerator.degree().unwrap_or(0);
        let n_q = denominator.degree().unwrap_or(0);
        Self {
            numerator,
            denominator,
            n_p,
            n_q,
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn n_p(&self) -> usize {
        self.n_p
    }

    pub fn n_q(&self) -> usize {
        self.n_q
    }

    pub fn degree(&self) -> usize {
        self.n_p.max(self.n_q)
    }

    /// `p(z) / q(z)`; an infinite value at poles.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let den = self.denominator.eval(z);
        let num = self.numerator.eval(z);
        if den == ZERO {
            return Complex64::new(f64::INFINITY, f64::INFINITY);
        }
        num / den
    }

    /// `r'(z) = (p' q - p q')(z) / q(z)^2`.
    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        let (p, dp) = self.numerator.eval_with_derivative(z);
        let (q, dq) = self.denominator.eval_with_derivative(z);
        if q == ZERO {
            return Complex64::new(f64::INFINITY, f64::INFINITY);
        }
        (dp * q - p * dq) / (q * q)
    }

    /// `r_c = (p - c q) / q`, coprimality re-verified.
    pub fn shift_numerator(&self, c: Complex64) -> Result<Self> {
        self.shift_numerator_with_tolerance(c, COPRIME_TOL)
    }

    pub fn shift_numerator_with_tolerance(&self, c: Complex64, tol: f64) -> Result<Self> {
        let p = &self.numerator - &self.denominator.scale(c);
        let g = gcd_degree(&p, &self.denominator, tol)?;
        if g > 0 {
            return Err(Error::NotCoprime { gcd_degree: g });
        }
        Ok(Self::from_parts(p, self.denominator.clone()))
    }

    /// `conj(r)`: the rational function with conjugated coefficients, so that
    /// `conj(r)(w) = conj(r(conj(w)))`.
    pub fn conjugate_coefficients(&self) -> Self {
        Self::from_parts(
            self.numerator.conjugate_coefficients(),
            self.denominator.conjugate_coefficients(),
        )
    }

    /// Value at infinity: `None` when `n_p > n_q`.
    pub fn value_at_infinity(&self) -> Option<Complex64> {
        match self.n_p.cmp(&self.n_q) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Equal => Some(
                self.numerator.leading().unwrap_or(ZERO) / self.denominator.leading().unwrap_or(ONE),
            ),
            std::cmp::Ordering::Less => Some(ZERO),
        }
    }

    /// Numerator `p' q - p q'` of `r'`.
    pub fn wronskian_numerator(&self) -> Polynomial {
        &(&self.numerator.derivative() * &self.denominator)
            - &(&self.numerator * &self.denominator.derivative())
    }

    /// Numerator and denominator of `R = conj(r) ∘ r`, where `conj(r)` has the
    /// conjugated coefficients. Not reduced by any gcd.
    pub fn conjugate_self_composition(&self) -> (Polynomial, Polynomial) {
        let p = &self.numerator;
        let q = &self.denominator;
        let m = p.degree().unwrap_or(0);
        let k = q.degree().unwrap_or(0);
        // conj(p)(p/q) = a / q^m and conj(q)(p/q) = b / q^k.
        let (a, _) = compose_with_rational(&p.conjugate_coefficients(), p, q);
        let (b, _) = compose_with_rational(&q.conjugate_coefficients(), p, q);
        if m >= k {
            (a, &b * &q.pow(m - k))
        } else {
            (&a * &q.pow(k - m), b)
        }
    }

    /// Numerator of `(conj(r_c) ∘ r_c)(z) - z` with no gcd reduction; every
    /// zero of `r_c(z) - conj(z)` is among its roots.
    pub fn fixed_point_polynomial(&self, c: Complex64) -> Result<Polynomial> {
        self.shift_numerator(c)?.fixed_point_numerator()
    }

    /// [`Self::fixed_point_polynomial`] for an already shifted function.
    pub fn fixed_point_numerator(&self) -> Result<Polynomial> {
        if self.degree() < 2 {
            return Err(Error::DegreeTooLow {
                degree: self.degree(),
            });
        }
        let (num, den) = self.conjugate_self_composition();
        let out = &num - &den.shift_up(1);
        if out.is_zero() {
            return Err(Error::DegenerateComposition);
        }
        Ok(out)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.numerator, self.denominator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_poly_eq(a: &Polynomial, b: &Polynomial, tol: f64) {
        assert_eq!(a.degree(), b.degree(), "{a} vs {b}");
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() <= tol, "{a} vs {b}");
        }
    }

    #[test]
    fn evaluate_examples() {
        let p = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        assert_eq!(p.eval(c(2.0, 0.0)), c(5.0, 0.0));
        assert_eq!(Polynomial::zero().eval(c(7.0, 0.0)), c(0.0, 0.0));
        let p = Polynomial::from_real(&[0.0, -1.0, 0.0, 1.0]);
        assert_abs_diff_eq!((p.eval(c(0.0, 1.0)) - c(0.0, -2.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let z3 = Polynomial::monomial(ONE, 3);
        assert_eq!(z3.derivative(), Polynomial::monomial(c(3.0, 0.0), 2));
        assert!(Polynomial::constant(c(5.0, 0.0)).derivative().is_zero());
        let p = Polynomial::new(vec![ZERO, c(0.0, 1.0), c(2.0, 0.0)]);
        assert_eq!(p.derivative(), Polynomial::new(vec![c(0.0, 1.0), c(4.0, 0.0)]));
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Polynomial::zero().degree(), None);
        assert_eq!(Polynomial::from_real(&[0.0, 0.0]).degree(), None);
        assert_eq!(Polynomial::from_real(&[1.0, 2.0, 0.0]).degree(), Some(1));
    }

    #[test]
    fn relative_trimming() {
        let p = Polynomial::from_real(&[1e6, 1.0, 1e-7]);
        assert_eq!(p.degree(), Some(1));
        let p = Polynomial::from_real(&[1.0, 1.0, 1e-7]);
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn gcd_degree_examples() {
        let a = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let b = Polynomial::from_real(&[-1.0, 1.0]);
        assert_eq!(gcd_degree(&a, &b, COPRIME_TOL).unwrap(), 1);
        let a = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        assert_eq!(gcd_degree(&a, &b, COPRIME_TOL).unwrap(), 0);
        let a = Polynomial::from_roots(&[c(2.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0)]);
        let b = Polynomial::from_roots(&[c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(gcd_degree(&a, &b, COPRIME_TOL).unwrap(), 1);
        assert!(matches!(
            gcd_degree(&Polynomial::zero(), &Polynomial::zero(), COPRIME_TOL),
            Err(Error::BothZero)
        ));
    }

    #[test]
    fn gcd_degree_of_shared_quadratic_factor() {
        let shared = [c(0.3, 0.4), c(-1.1, 0.2)];
        let a = Polynomial::from_roots(&[shared[0], shared[1], c(2.0, -1.0)]);
        let b = Polynomial::from_roots(&[shared[0], shared[1], c(0.5, 0.5), c(-0.7, 0.0)]);
        assert_eq!(gcd_degree(&a, &b, COPRIME_TOL).unwrap(), 2);
    }

    #[test]
    fn shift_numerator_examples() {
        let r = RationalFunction::polynomial(Polynomial::monomial(ONE, 2));
        assert_eq!(r.shift_numerator(ZERO).unwrap(), r);

        let r = RationalFunction::new(
            Polynomial::from_real(&[0.0, 1.0]),
            Polynomial::from_real(&[-0.25, 0.0, 1.0]),
        )
        .unwrap();
        let rc = r.shift_numerator(ONE).unwrap();
        assert_eq!(rc.n_p(), 2);
        assert_poly_eq(rc.numerator(), &Polynomial::from_real(&[0.25, 1.0, -1.0]), 1e-15);

        let r = RationalFunction::new(Polynomial::one(), Polynomial::monomial(ONE, 2)).unwrap();
        let rc = r.shift_numerator(c(0.0, 1.0)).unwrap();
        assert_poly_eq(
            rc.numerator(),
            &Polynomial::new(vec![ONE, ZERO, c(0.0, -1.0)]),
            1e-15,
        );
        assert_eq!(rc.denominator(), &Polynomial::monomial(ONE, 2));
    }

    #[test]
    fn non_coprime_construction_rejected() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let q = Polynomial::from_real(&[-1.0, 1.0]);
        assert!(matches!(
            RationalFunction::new(p, q),
            Err(Error::NotCoprime { gcd_degree: 1 })
        ));
    }

    #[test]
    fn denominator_is_monic() {
        let r = RationalFunction::new(
            Polynomial::from_real(&[1.0]),
            Polynomial::from_real(&[0.0, 0.0, 4.0]),
        )
        .unwrap();
        assert_eq!(r.denominator().leading(), Some(ONE));
        assert_eq!(r.numerator().coeff(0), c(0.25, 0.0));
    }

    #[test]
    fn conjugate_coefficients_examples() {
        let p = Polynomial::new(vec![c(0.0, 1.0), ZERO, ONE]);
        assert_eq!(
            p.conjugate_coefficients(),
            Polynomial::new(vec![c(0.0, -1.0), ZERO, ONE])
        );
        let real = Polynomial::from_real(&[1.0, -2.0, 3.0]);
        assert_eq!(real.conjugate_coefficients(), real);
        let p = Polynomial::new(vec![ZERO, c(1.0, 2.0)]);
        assert_eq!(p.conjugate_coefficients(), Polynomial::new(vec![ZERO, c(1.0, -2.0)]));
    }

    #[test]
    fn compose_with_rational_examples() {
        let z = Polynomial::monomial(ONE, 1);
        let z2 = Polynomial::monomial(ONE, 2);
        let zm1 = Polynomial::from_real(&[-1.0, 1.0]);
        let (n, d) = compose_with_rational(&z2, &z, &zm1);
        assert_eq!(n, z2);
        assert_eq!(d, zm1.pow(2));

        let s = Polynomial::from_real(&[1.0, 1.0]);
        let (n, d) = compose_with_rational(&s, &Polynomial::one(), &z);
        assert_eq!(n, Polynomial::from_real(&[1.0, 1.0]));
        assert_eq!(d, z);

        let (n, d) = compose_with_rational(&z2, &z2, &Polynomial::one());
        assert_eq!(n, Polynomial::monomial(ONE, 4));
        assert_eq!(d, Polynomial::one());
    }

    #[test]
    fn fixed_point_polynomial_examples() {
        let z4_minus_z = Polynomial::from_real(&[0.0, -1.0, 0.0, 0.0, 1.0]);
        let r = RationalFunction::polynomial(Polynomial::monomial(ONE, 2));
        assert_poly_eq(&r.fixed_point_polynomial(ZERO).unwrap(), &z4_minus_z, 1e-15);

        let r = RationalFunction::new(Polynomial::one(), Polynomial::monomial(ONE, 2)).unwrap();
        assert_poly_eq(&r.fixed_point_polynomial(ZERO).unwrap(), &z4_minus_z, 1e-15);

        let r = RationalFunction::new(
            Polynomial::from_real(&[0.0, 1.0]),
            Polynomial::from_real(&[-0.25, 0.0, 1.0]),
        )
        .unwrap();
        let q = r.fixed_point_polynomial(ZERO).unwrap();
        assert_eq!(q.degree(), Some(5));
        let scale = q.max_abs_coeff();
        for root in [
            ZERO,
            c(1.25f64.sqrt(), 0.0),
            c(-(1.25f64.sqrt()), 0.0),
            c(0.0, 0.75f64.sqrt()),
            c(0.0, -(0.75f64.sqrt())),
        ] {
            assert!(q.eval(root).norm() <= 1e-14 * scale, "root {root}");
        }
    }

    #[test]
    fn fixed_point_polynomial_rejects_low_degree() {
        let r = RationalFunction::new(Polynomial::one(), Polynomial::monomial(ONE, 1)).unwrap();
        assert!(matches!(
            r.fixed_point_polynomial(ZERO),
            Err(Error::DegreeTooLow { degree: 1 })
        ));
    }

    #[test]
    fn wronskian_examples() {
        let r = RationalFunction::polynomial(Polynomial::monomial(ONE, 2));
        assert_eq!(r.wronskian_numerator(), Polynomial::monomial(c(2.0, 0.0), 1));
        let r = RationalFunction::new(Polynomial::one(), Polynomial::monomial(ONE, 2)).unwrap();
        assert_eq!(r.wronskian_numerator(), Polynomial::monomial(c(-2.0, 0.0), 1));
        let r = RationalFunction::new(
            Polynomial::from_real(&[0.0, 1.0]),
            Polynomial::from_real(&[-0.25, 0.0, 1.0]),
        )
        .unwrap();
        assert_eq!(r.wronskian_numerator(), Polynomial::from_real(&[-0.25, 0.0, -1.0]));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = Polynomial::new(vec![c(1.0, 2.0), c(-3.0, 0.5), ZERO, c(2.0, 1.0)]);
        let b = Polynomial::new(vec![c(0.5, 0.0), c(1.0, -1.0)]);
        let (q, r) = a.div_rem(&b);
        let back = &(&q * &b) + &r;
        assert_poly_eq(&back, &a, 1e-14);
        assert!(r.degree().unwrap_or(0) < 1);
    }
}
