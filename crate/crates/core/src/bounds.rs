//! Upper bounds on the number of zeros of `r(z) - conj(z) - c` by degree type,
//! plus the leading-coefficient case analyses.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::RationalFunction;
use crate::solver::ZeroSet;

/// Relative band around `|alpha| = 1` reported as inconclusive.
pub const ALPHA_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundCase {
    PLessQ,
    Equal,
    PEqualsQPlus1,
    PGreaterQPlus1,
}

impl BoundCase {
    pub fn of(n_p: usize, n_q: usize) -> Self {
        if n_p < n_q {
            Self::PLessQ
        } else if n_p == n_q {
            Self::Equal
        } else if n_p == n_q + 1 {
            Self::PEqualsQPlus1
        } else {
            Self::PGreaterQPlus1
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::PLessQ => "PLessQ",
            Self::Equal => "Equal",
            Self::PEqualsQPlus1 => "PEqualsQPlus1",
            Self::PGreaterQPlus1 => "PGreaterQPlus1",
        }
    }
}

impl fmt::Display for BoundCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Maximal number of zeros of `p/q - conj(z) - c` for `deg p = n_p`, `deg q = n_q`.
pub fn max_zero_bound(n_p: usize, n_q: usize) -> Result<usize> {
    if n_p.max(n_q) < 2 {
        return Err(Error::OutOfScope { n_p, n_q });
    }
    Ok(match BoundCase::of(n_p, n_q) {
        BoundCase::PLessQ => 2 * n_p + 3 * n_q - 3,
        BoundCase::Equal => 5 * n_p - 5,
        BoundCase::PEqualsQPlus1 => 5 * n_p - 6,
        BoundCase::PGreaterQPlus1 => 3 * n_p + 2 * n_q - 2,
    })
}

/// `N+ - N-` forced on a regular function by its degree type, where the
/// argument at a large circle determines it. `None` for `n_p = n_q + 1`,
/// which depends on the leading coefficient (see [`leading_ratio_case`]).
pub fn expected_signature(n_p: usize, n_q: usize) -> Option<i64> {
    if n_p <= n_q {
        Some(n_q as i64 - 1)
    } else if n_p > n_q + 1 {
        Some(n_p as i64)
    } else {
        None
    }
}

/// Bound on `N0 + N-`: the number of zeros of `r'`.
pub fn non_sense_preserving_bound(n_p: usize, n_q: usize) -> usize {
    (n_p + n_q).saturating_sub(1)
}

/// Splits `r = r~ + alpha` for `n_p = n_q`, with `deg` of the numerator of
/// `r~` strictly below `n_q`. Zeros of `r - conj(z)` are those of
/// `r~ - conj(z) + alpha`.
pub fn reduce_equal_degree(r: &RationalFunction) -> Result<(RationalFunction, Complex64)> {
    if r.n_p() != r.n_q() {
        return Err(Error::WrongCase {
            expected: "n_p = n_q",
            n_p: r.n_p(),
            n_q: r.n_q(),
        });
    }
    let alpha = r.value_at_infinity().ok_or(Error::WrongCase {
        expected: "n_p = n_q",
        n_p: r.n_p(),
        n_q: r.n_q(),
    })?;
    Ok((r.shift_numerator(alpha)?, alpha))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LeadingRatio {
    /// `|alpha| > 1`: `N+ - N- = n_p`.
    Dominant { alpha: Complex64, signature: i64 },
    /// `|alpha| < 1`: `N+ - N- = n_q - 1`.
    Subdominant { alpha: Complex64, signature: i64 },
    /// `|alpha|` within the tolerance band of 1; nothing follows.
    Inconclusive { alpha: Complex64 },
}

impl LeadingRatio {
    pub fn alpha(&self) -> Complex64 {
        match *self {
            Self::Dominant { alpha, .. } | Self::Subdominant { alpha, .. } | Self::Inconclusive { alpha } => alpha,
        }
    }

    pub fn signature(&self) -> Option<i64> {
        match *self {
            Self::Dominant { signature, .. } | Self::Subdominant { signature, .. } => Some(signature),
            Self::Inconclusive { .. } => None,
        }
    }
}

/// For `n_p = n_q + 1`, writes `r(z) = alpha z + r~(z)` with `r~` bounded at
/// infinity and reads off the signature from `|alpha|`.
pub fn leading_ratio_case(r: &RationalFunction, tol: f64) -> Result<LeadingRatio> {
    let (n_p, n_q) = (r.n_p(), r.n_q());
    if n_p != n_q + 1 {
        return Err(Error::WrongCase {
            expected: "n_p = n_q + 1",
            n_p,
            n_q,
        });
    }
    let lead_p = r.numerator().leading().unwrap_or_default();
    let lead_q = r.denominator().leading().unwrap_or(Complex64::new(1.0, 0.0));
    let alpha = lead_p / lead_q;
    let modulus = alpha.norm();
    Ok(if modulus > 1.0 + tol {
        LeadingRatio::Dominant {
            alpha,
            signature: n_p as i64,
        }
    } else if modulus < 1.0 - tol {
        LeadingRatio::Subdominant {
            alpha,
            signature: n_q as i64 - 1,
        }
    } else {
        LeadingRatio::Inconclusive { alpha }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Degrees of the shifted numerator `p - c q` and of `q`.
    pub n_p: usize,
    pub n_q: usize,
    pub case: BoundCase,
    pub bound: usize,
    pub count: usize,
    pub attained: bool,
    /// Leading ratio in the `Equal` and `PEqualsQPlus1` cases.
    pub alpha: Option<Complex64>,
    /// `Equal` case: `2 n~_p + 3 n_q - 3` for the reduced function, never above `bound`.
    pub reduced_bound: Option<usize>,
    /// `N+ - N-` implied by the degree type when one is determined.
    pub expected_signature: Option<i64>,
    pub regular: bool,
}

impl BoundReport {
    pub fn exceeded(&self) -> bool {
        self.count > self.bound
    }

    /// A function attaining its bound must be regular.
    pub fn attained_implies_regular(&self) -> bool {
        !self.attained || self.regular
    }
}

/// Compares a solved zero set against the bound for the degree type of `r_c`.
pub fn assess(r: &RationalFunction, c: Complex64, zeroset: &ZeroSet) -> Result<BoundReport> {
    let shifted = r.shift_numerator(c)?;
    let (n_p, n_q) = (shifted.n_p(), shifted.n_q());
    let case = BoundCase::of(n_p, n_q);
    let bound = max_zero_bound(n_p, n_q)?;
    let (alpha, reduced_bound, expected) = match case {
        BoundCase::Equal => {
            let (reduced, alpha) = reduce_equal_degree(&shifted)?;
            let reduced_bound = 2 * reduced.n_p() + 3 * n_q - 3;
            (Some(alpha), Some(reduced_bound), expected_signature(n_p, n_q))
        }
        BoundCase::PEqualsQPlus1 => {
            let lr = leading_ratio_case(&shifted, ALPHA_TOL)?;
            (Some(lr.alpha()), None, lr.signature())
        }
        _ => (None, None, expected_signature(n_p, n_q)),
    };
    let count = zeroset.total();
    Ok(BoundReport {
        n_p,
        n_q,
        case,
        bound,
        count,
        attained: count == bound,
        alpha,
        reduced_bound,
        expected_signature: expected,
        regular: zeroset.is_regular(),
    })
}
