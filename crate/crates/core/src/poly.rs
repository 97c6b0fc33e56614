//! Dense univariate complex polynomials and an Aberth–Ehrlich all-roots
//! solver.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Sum of coefficient moduli, a bound for `|p|` on the closed unit disk.
    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// All complex roots, repeated according to multiplicity.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        aberth(&self.coeffs, &AberthOptions::default())
    }
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

#[derive(Debug, Clone, Copy)]
pub struct AberthOptions {
    pub max_iterations: usize,
    pub epsilon: f64,
}

impl Default for AberthOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            epsilon: 4.0 * f64::EPSILON,
        }
    }
}

/// Simultaneous Aberth–Ehrlich iteration started from the Newton-polygon
/// radii of the coefficient moduli.
///
/// Exact zero coefficients at either end are peeled off first: trailing ones
/// become roots at the origin, leading ones lower the degree.
pub fn aberth(coeffs: &[Complex64], opts: &AberthOptions) -> Result<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1] == zero {
        hi -= 1;
    }
    if hi == 0 {
        return Err(Error::ZeroPolynomial);
    }
    let lo = coeffs[..hi].iter().position(|c| *c != zero).unwrap_or(0);
    let mut roots = vec![zero; lo];
    let core = &coeffs[lo..hi];
    let degree = core.len() - 1;
    match degree {
        0 => return Ok(roots),
        1 => {
            roots.push(-core[0] / core[1]);
            return Ok(roots);
        }
        _ => {}
    }

    let lead = core[degree];
    let monic: Vec<Complex64> = core.iter().map(|c| c / lead).collect();
    let deriv: Vec<Complex64> = monic
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();
    let mut z = initial_guesses(&monic);
    let mut done = vec![false; degree];

    for _ in 0..opts.max_iterations {
        let mut all_done = true;
        for i in 0..degree {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let (p, dp) = eval_with_derivative(&monic, &deriv, zi);
            if p == zero {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = z
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, zj)| (zi - zj).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return Err(Error::NoConvergence);
            }
            z[i] = zi - step;
            if step.norm() <= opts.epsilon * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            roots.extend(z);
            return Ok(roots);
        }
    }
    // Clustered roots converge slowly; the iterates are still the best available.
    roots.extend(z);
    Ok(roots)
}

fn eval_with_derivative(
    monic: &[Complex64],
    deriv: &[Complex64],
    z: Complex64,
) -> (Complex64, Complex64) {
    if z.norm() <= 1.0 {
        (horner(monic, z), horner(deriv, z))
    } else {
        // Reversed Horner keeps |z|^degree from overflowing.
        let w = z.inv();
        let n = monic.len() - 1;
        let p_rev = monic.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c);
        let d_rev = deriv.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c);
        let zn = z.powi(n as i32);
        let zn1 = z.powi(n as i32 - 1);
        (p_rev * zn, d_rev * zn1)
    }
}

/// Points on circles whose radii follow the upper convex hull of
/// `(k, log|a_k|)`.
fn initial_guesses(monic: &[Complex64]) -> Vec<Complex64> {
    let degree = monic.len() - 1;
    let logs: Vec<f64> = monic
        .iter()
        .map(|c| if c.norm() > 0.0 { c.norm().ln() } else { f64::NEG_INFINITY })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..=degree {
        if logs[k] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b as f64 - a as f64) * (logs[k] - logs[a])
                - (k as f64 - a as f64) * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut guesses = Vec::with_capacity(degree);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let count = b - a;
        let radius = ((logs[a] - logs[b]) / count as f64).exp();
        for j in 0..count {
            let angle = 2.0 * std::f64::consts::PI * (j as f64 / count as f64)
                + 2.0 * std::f64::consts::PI * a as f64 / degree as f64
                + sigma;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}
