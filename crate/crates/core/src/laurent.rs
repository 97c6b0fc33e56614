//! Laurent polynomials `p(z) = Σ_{k=m}^{n} a_k z^k`, their circle images,
//! the self-intersection bound `σ(m, n)` and the exceptional classes the
//! bound excludes.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chebyshev::gcd;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A nonzero Laurent polynomial with `a_m != 0` and `a_n != 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LaurentRepr", into = "LaurentRepr")]
pub struct LaurentPoly {
    m: i64,
    coeffs: Vec<Complex64>,
}

/// Interchange form: `{"m": int, "n": int, "coeffs": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LaurentRepr {
    pub m: i64,
    pub n: i64,
    pub coeffs: Vec<[f64; 2]>,
}

impl TryFrom<LaurentRepr> for LaurentPoly {
    type Error = Error;

    fn try_from(r: LaurentRepr) -> Result<Self> {
        if r.n - r.m + 1 != r.coeffs.len() as i64 {
            return Err(Error::InvalidRange(format!(
                "m = {}, n = {} needs {} coefficients, got {}",
                r.m,
                r.n,
                r.n - r.m + 1,
                r.coeffs.len()
            )));
        }
        LaurentPoly::new(
            r.m,
            r.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
        )
    }
}

impl From<LaurentPoly> for LaurentRepr {
    fn from(p: LaurentPoly) -> Self {
        LaurentRepr {
            m: p.m,
            n: p.n(),
            coeffs: p.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl LaurentPoly {
    /// Builds `Σ coeffs[i] z^(m+i)`, trimming zero coefficients at both ends.
    pub fn new(m: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        let first = coeffs.iter().position(|c| *c != ZERO).ok_or(Error::ZeroPolynomial)?;
        let last = coeffs.iter().rposition(|c| *c != ZERO).unwrap();
        Ok(Self {
            m: m + first as i64,
            coeffs: coeffs[first..=last].to_vec(),
        })
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents add up.
    pub fn from_terms(terms: &[(i64, Complex64)]) -> Result<Self> {
        let lo = terms.iter().map(|t| t.0).min().ok_or(Error::ZeroPolynomial)?;
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![ZERO; (hi - lo + 1) as usize];
        for &(k, a) in terms {
            coeffs[(k - lo) as usize] += a;
        }
        Self::new(lo, coeffs)
    }

    /// `z^k`.
    pub fn monomial(k: i64, a: Complex64) -> Result<Self> {
        Self::new(k, vec![a])
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.m + self.coeffs.len() as i64 - 1
    }

    /// Coefficients `a_m..=a_n`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `a_k`, zero outside `m..=n`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k < self.m || k > self.n() {
            ZERO
        } else {
            self.coeffs[(k - self.m) as usize]
        }
    }

    /// `(k, a_k)` for every exponent in `m..=n`, zeros included.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(i, a)| (self.m + i as i64, *a))
    }

    /// Sum of `|a_k| r^k`; bounds `|p|` on the circle of radius `r`.
    pub fn scale(&self, r: f64) -> f64 {
        self.terms().map(|(k, a)| a.norm() * r.powi(k as i32)).sum()
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z == ZERO && self.m < 0 {
            return Err(Error::DomainError);
        }
        Ok(eval_raw(self.m, &self.coeffs, z))
    }

    /// `p(r e^{iθ})`.
    pub fn eval_circle(&self, theta: f64, r: f64) -> Complex64 {
        eval_raw(self.m, &self.coeffs, Complex64::from_polar(r, theta))
    }

    /// `d/dθ p(r e^{iθ}) = Σ i k a_k r^k e^{ikθ}`.
    pub fn tangent(&self, theta: f64, r: f64) -> Complex64 {
        let weighted: Vec<Complex64> = self.terms().map(|(k, a)| a * k as f64).collect();
        Complex64::i() * eval_raw(self.m, &weighted, Complex64::from_polar(r, theta))
    }

    /// `d²/dθ² p(r e^{iθ}) = -Σ k² a_k r^k e^{ikθ}`.
    pub fn acceleration(&self, theta: f64, r: f64) -> Complex64 {
        let weighted: Vec<Complex64> = self.terms().map(|(k, a)| a * (k * k) as f64).collect();
        -eval_raw(self.m, &weighted, Complex64::from_polar(r, theta))
    }

    /// The polynomial with coefficients `conj(a_{-k})`; on the unit circle it
    /// equals `conj(p)`, so its curve is the mirror image of this one.
    pub fn reflect(&self) -> LaurentPoly {
        let coeffs = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        LaurentPoly {
            m: -self.n(),
            coeffs,
        }
    }

    /// `p(z) - a_0`, or `None` when `p` is constant.
    pub fn without_constant(&self) -> Option<LaurentPoly> {
        let terms: Vec<_> = self.terms().filter(|&(k, a)| k != 0 && a != ZERO).collect();
        if terms.is_empty() {
            None
        } else {
            LaurentPoly::from_terms(&terms).ok()
        }
    }

    /// gcd of the nonzero exponents carrying a nonzero coefficient; 0 for a
    /// constant.
    pub fn support_gcd(&self) -> i64 {
        self.terms()
            .filter(|&(k, a)| k != 0 && a != ZERO)
            .fold(0, |g, (k, _)| gcd(g, k))
    }

    /// Shared by the rational embedding: `z^{-m} p(z)` as an ordinary
    /// polynomial when `m < 0`.
    pub fn shifted_coeffs(&self) -> (i64, &[Complex64]) {
        (self.m, &self.coeffs)
    }
}

pub(crate) fn eval_raw(m: i64, coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let n = m + coeffs.len() as i64 - 1;
    let mut total = ZERO;
    if n >= 0 {
        let lo = m.max(0);
        let mut acc = ZERO;
        for k in (lo..=n).rev() {
            acc = acc * z + coeffs[(k - m) as usize];
        }
        total += acc * z.powi(lo as i32);
    }
    if m < 0 {
        let w = z.inv();
        let top = n.min(-1);
        let mut acc = ZERO;
        for k in m..=top {
            acc = acc * w + coeffs[(k - m) as usize];
        }
        total += acc * w.powi((-top) as i32);
    }
    total
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.terms().filter(|(_, a)| *a != ZERO) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", a.re, a.im)?;
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

/// `σ(m, n) = (n-1)(n-m) - gcd(n, m) + 1` for `n >= |m| >= 1`.
pub fn sigma_bound(m: i64, n: i64) -> Result<i64> {
    if m == 0 || m.abs() > n {
        return Err(Error::InvalidRange(format!(
            "sigma needs n >= |m| >= 1, got m = {m}, n = {n}"
        )));
    }
    let d = gcd(n, m);
    let sigma = (n - 1) * (n - m) - d + 1;
    debug_assert_eq!(sigma, sigma_bound_split(m, n));
    Ok(sigma)
}

/// The same bound written as `(n-d)(n-m) + (d-1)(n-m-1)`.
pub fn sigma_bound_split(m: i64, n: i64) -> i64 {
    let d = gcd(n, m);
    (n - d) * (n - m) + (d - 1) * (n - m - 1)
}

/// Why the bound `σ(m, n)` may not apply to a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum ExceptionalClass {
    None,
    /// `p(z) = q(z^j)`; `j = 0` only for constants.
    PowerSubstitution { j: i64 },
    /// `n = -m` and `|a_n| = |a_m|` up to the detection tolerance.
    BalancedConjugate { modulus_gap: f64 },
    /// `p'` vanishes on the circle of the given radius; set by the crossing
    /// analysis, never by [`exceptional_class`].
    ZeroDerivativeOnCircle { radius: f64, theta: f64 },
}

impl ExceptionalClass {
    pub fn is_none(&self) -> bool {
        matches!(self, ExceptionalClass::None)
    }
}

pub const BALANCE_TOL: f64 = 1e-9;

/// Relative gap `||a_n| - |a_{-n}|| / (|a_n| + |a_{-n}|)`, or `None` when
/// `m != -n`.
pub fn balance_gap(p: &LaurentPoly) -> Option<f64> {
    let (m, n) = (p.m(), p.n());
    if n <= 0 || m != -n {
        return None;
    }
    let (hi, lo) = (p.coeff(n).norm(), p.coeff(m).norm());
    Some((hi - lo).abs() / (hi + lo))
}

pub fn exceptional_class(p: &LaurentPoly, tol: f64) -> ExceptionalClass {
    let j = p.support_gcd();
    if j != 1 {
        return ExceptionalClass::PowerSubstitution { j };
    }
    match balance_gap(p) {
        Some(gap) if gap <= tol => ExceptionalClass::BalancedConjugate { modulus_gap: gap },
        _ => ExceptionalClass::None,
    }
}

/// `p̂(z) = p(z) - (a_{-n}/conj(a_n)) conj(p(z))` restricted to the circle,
/// which cancels the `z^{-n}` term. The real-linear map between the two
/// curves is invertible, so crossing counts agree.
pub fn hat_reduce(p: &LaurentPoly) -> Result<LaurentPoly> {
    let n = p.n();
    if n <= 0 || p.m() != -n {
        return Err(Error::HatPrecondition);
    }
    match balance_gap(p) {
        Some(gap) if gap > BALANCE_TOL => {}
        _ => return Err(Error::HatPrecondition),
    }
    let ratio = p.coeff(-n) / p.coeff(n).conj();
    let terms: Vec<_> = (1 - n..=n)
        .map(|k| (k, p.coeff(k) - ratio * p.coeff(-k).conj()))
        .collect();
    LaurentPoly::from_terms(&terms)
}

/// A polynomial prepared for the bound: constant dropped and reflected so
/// that `n >= |m|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalized {
    pub poly: LaurentPoly,
    pub dropped_constant: bool,
    pub reflected: bool,
}

pub fn normalize_for_bound(p: &LaurentPoly) -> Result<Normalized> {
    let stripped = p
        .without_constant()
        .ok_or_else(|| Error::Invalid("constant polynomial traces a single point".into()))?;
    let dropped_constant = p.coeff(0) != ZERO;
    let reflected = stripped.m().abs() > stripped.n();
    let poly = if reflected { stripped.reflect() } else { stripped };
    Ok(Normalized {
        poly,
        dropped_constant,
        reflected,
    })
}
