//! Chebyshev polynomials of the second kind for every integer index.
//!
//! `U_k(cos θ) = sin((k+1)θ) / sin θ`. The index is extended to negative
//! integers through the oddness of sine: `U_{-1} = 0` and
//! `U_{-k-2} = -U_k`.

use crate::error::{Error, Result};

/// Largest nonnegative index whose monomial coefficients are produced exactly.
pub const MAX_EXACT_INDEX: i64 = 40;

/// Below this value of `|sin θ|` the sine quotient is replaced by the recurrence.
const SINE_FLOOR: f64 = 1e-6;

/// Index `k` of a Chebyshev polynomial `U_k`, any sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChebIndex(pub i64);

impl ChebIndex {
    /// Rewrites the index as `sign * U_j` with `j >= -1`.
    pub fn canonical(self) -> (i64, i64) {
        let k = self.0;
        if k >= -1 {
            (1, k)
        } else {
            (-1, -k - 2)
        }
    }

    /// Degree of the polynomial, `None` for the zero polynomial `U_{-1}`.
    pub fn degree(self) -> Option<usize> {
        match self.canonical() {
            (_, -1) => None,
            (_, j) => Some(j as usize),
        }
    }
}

/// Evaluates `U_k(t)` for any integer `k` and real `t`.
pub fn cheb_eval(k: i64, t: f64) -> f64 {
    let (sign, j) = ChebIndex(k).canonical();
    if j < 0 {
        return 0.0;
    }
    let value = if t.abs() <= 1.0 {
        let theta = t.acos();
        let s = theta.sin();
        if s.abs() >= SINE_FLOOR {
            (((j + 1) as f64) * theta).sin() / s
        } else {
            recurrence(j, t)
        }
    } else {
        recurrence(j, t)
    };
    sign as f64 * value
}

fn recurrence(j: i64, t: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..j {
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Derivative `U_k'(t)` by differentiating the three-term recurrence.
pub fn cheb_eval_deriv(k: i64, t: f64) -> f64 {
    let (sign, j) = ChebIndex(k).canonical();
    if j <= 0 {
        return 0.0;
    }
    let (mut u_prev, mut u) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for _ in 0..j {
        let u_next = 2.0 * t * u - u_prev;
        let d_next = 2.0 * u + 2.0 * t * d - d_prev;
        u_prev = u;
        u = u_next;
        d_prev = d;
        d = d_next;
    }
    sign as f64 * d
}

/// Exact monomial coefficients of `U_k`, lowest degree first.
///
/// The zero polynomial `U_{-1}` yields an empty vector.
pub fn cheb_coeffs(k: i64) -> Result<Vec<i64>> {
    let (sign, j) = ChebIndex(k).canonical();
    if j > MAX_EXACT_INDEX {
        return Err(Error::ChebIndexOutOfRange(k));
    }
    if j < 0 {
        return Ok(Vec::new());
    }
    let mut prev: Vec<i64> = Vec::new();
    let mut cur: Vec<i64> = vec![1];
    for _ in 0..j {
        let mut next = vec![0i64; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    Ok(cur.into_iter().map(|c| sign * c).collect())
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// The `gcd(n, m) - 1` common zeros of `U_{n-1}` and `U_{m-1}`, namely the
/// zeros `cos(jπ/d)` of `U_{d-1}`, each checked against both polynomials.
pub fn common_zeros(n: i64, m: i64, tol: f64) -> Result<Vec<f64>> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidRange(format!(
            "common_zeros needs nonzero indices, got n = {n}, m = {m}"
        )));
    }
    let d = gcd(n, m);
    let mut zeros = Vec::with_capacity((d - 1) as usize);
    for j in 1..d {
        let t = (j as f64 * std::f64::consts::PI / d as f64).cos();
        let residual = cheb_eval(n - 1, t).abs().max(cheb_eval(m - 1, t).abs());
        if residual >= tol {
            return Err(Error::CommonZeroResidual { t, residual });
        }
        zeros.push(t);
    }
    Ok(zeros)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        assert_eq!(cheb_eval(0, 0.37), 1.0);
        assert!((cheb_eval(4, 1.0) - 5.0).abs() < 1e-12);
        assert!((cheb_eval(4, -1.0) - 5.0).abs() < 1e-12);
        assert!((cheb_eval(3, -1.0) + 4.0).abs() < 1e-12);
        assert_eq!(cheb_eval(-2, 0.5), -1.0);
        assert_eq!(cheb_eval(-1, 0.3), 0.0);
    }

    #[test]
    fn sup_norm_on_interval() {
        let n = 7;
        let max = (0..=20_000)
            .map(|i| -1.0 + 2.0 * i as f64 / 20_000.0)
            .map(|t| cheb_eval(n - 1, t).abs())
            .fold(0.0, f64::max);
        assert!((max - 7.0).abs() < 1e-9, "{max}");
        assert!((cheb_eval(n - 1, 1.0) - 7.0).abs() < 1e-12);
    }

    #[test]
    fn coefficients() {
        assert_eq!(cheb_coeffs(1).unwrap(), vec![0, 2]);
        assert!(cheb_coeffs(-1).unwrap().is_empty());
        // U_3 = 2t U_2 - U_1 with U_2 = 4t^2 - 1.
        assert_eq!(cheb_coeffs(3).unwrap(), vec![0, -4, 0, 8]);
        assert_eq!(cheb_coeffs(-5).unwrap(), vec![0, 4, 0, -8]);
        let top = cheb_coeffs(40).unwrap();
        assert_eq!(top.len(), 41);
        assert_eq!(top[40], 1i64 << 40);
        assert!(matches!(cheb_coeffs(41), Err(Error::ChebIndexOutOfRange(41))));
    }

    #[test]
    fn coefficients_match_evaluation() {
        for k in -12..=20 {
            let c = cheb_coeffs(k).unwrap();
            for &t in &[-1.3, -0.7, 0.0, 0.2, 0.99, 1.5] {
                let horner = c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci as f64);
                let direct = cheb_eval(k, t);
                assert!((horner - direct).abs() <= 1e-9 * direct.abs().max(1.0), "k={k} t={t}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for k in -8..=9 {
            for &t in &[-0.8, -0.1, 0.45, 1.2] {
                let h = 1e-6;
                let fd = (cheb_eval(k, t + h) - cheb_eval(k, t - h)) / (2.0 * h);
                assert!((fd - cheb_eval_deriv(k, t)).abs() < 1e-5 * fd.abs().max(1.0));
            }
        }
    }

    #[test]
    fn common_zero_examples() {
        assert_eq!(common_zeros(6, 4, 1e-12).unwrap().len(), 1);
        assert!(common_zeros(6, 4, 1e-12).unwrap()[0].abs() < 1e-15);
        assert!(common_zeros(5, 3, 1e-12).unwrap().is_empty());
        let z = common_zeros(6, 9, 1e-12).unwrap();
        assert_eq!(z.len(), 2);
        assert!((z[0] - 0.5).abs() < 1e-15 && (z[1] + 0.5).abs() < 1e-15);
        assert!(common_zeros(0, 3, 1e-12).is_err());
    }

    #[test]
    fn common_zero_counts() {
        for n in 1..=12 {
            for m in 1..=12 {
                assert_eq!(common_zeros(n, m, 1e-12).unwrap().len() as i64, gcd(n, m) - 1);
                assert_eq!(common_zeros(n, -m, 1e-12).unwrap().len() as i64, gcd(n, m) - 1);
            }
        }
    }

    proptest! {
        #[test]
        fn recurrence_consistency(k in -10i64..=10, t in -2.0f64..2.0) {
            let lhs = cheb_eval(k, t);
            let (a, b) = (cheb_eval(k - 1, t), cheb_eval(k - 2, t));
            let rhs = 2.0 * t * a - b;
            // Outside [-1, 1] the terms grow geometrically and negative indices
            // cancel them, so the floor is one rounding at the size of the terms.
            let scale = if t.abs() <= 1.0 { 1.0 } else { (2.0 * t * a).abs().max(b.abs()).max(1.0) };
            prop_assert!((lhs - rhs).abs() < 1e-12 * scale, "k={} t={} {} {}", k, t, lhs, rhs);
        }

        #[test]
        fn trigonometric_identity(k in -10i64..=10, theta in 1e-3f64..(std::f64::consts::PI - 1e-3)) {
            let lhs = cheb_eval(k, theta.cos()) * theta.sin();
            prop_assert!((lhs - ((k + 1) as f64 * theta).sin()).abs() < 1e-12);
        }
    }
}
