//! The trinomials `z^n + δ z^{m+1} + ε z^m` that attain `σ(m, n)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{cheb_eval, gcd};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::intersect::{find_self_intersections, SelfIntersection};
use crate::laurent::{sigma_bound, LaurentPoly};
use crate::topology::{family_winding_profile, FamilyProfile};

const PHI_SAMPLES: usize = 10_000;
/// Fact (a) must hold outside a set of at most this fraction of (-1, 1).
const FACT_A_BUDGET: f64 = 0.1;
/// Largest ε the recipe will hand out.
const EPS_CAP: f64 = 0.25;

fn check_range(m: i64, n: i64) -> Result<()> {
    if m == 0 || m.abs() >= n {
        return Err(Error::InvalidRange(format!("need n > |m| >= 1, got m = {m}, n = {n}")));
    }
    Ok(())
}

/// `Φ(t) = (U_{n-1}/U_{m-1})² + (U_{m-1}/U_m)²`; `+∞` at poles.
pub fn phi(m: i64, n: i64, t: f64) -> f64 {
    let (un, um1, um) = (cheb_eval(n - 1, t), cheb_eval(m - 1, t), cheb_eval(m, t));
    let q1 = if um1 == 0.0 { f64::INFINITY } else { un / um1 };
    let q2 = if um == 0.0 { f64::INFINITY } else { um1 / um };
    q1 * q1 + q2 * q2
}

/// `inf Φ` over `[-1, 1]`. For `m = -1`, `U_m ≡ 0` and the infimum is `+∞`.
pub fn phi_inf(m: i64, n: i64) -> Result<f64> {
    check_range(m, n)?;
    if m == -1 {
        return Ok(f64::INFINITY);
    }
    let grid: Vec<f64> = (0..=PHI_SAMPLES).map(|i| -1.0 + 2.0 * i as f64 / PHI_SAMPLES as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&t| phi(m, n, t)).collect();
    let mut best = f64::INFINITY;
    for i in 0..values.len() {
        let left = if i > 0 { values[i - 1] } else { f64::INFINITY };
        let right = values.get(i + 1).copied().unwrap_or(f64::INFINITY);
        if values[i] <= left && values[i] <= right {
            let lo = grid[i.saturating_sub(1)];
            let hi = grid[(i + 1).min(grid.len() - 1)];
            best = best.min(golden(|t| phi(m, n, t), lo, hi)).min(values[i]);
        }
    }
    Ok(best)
}

fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    f(0.5 * (a + b))
}

/// Right side of the simultaneous-vanishing identity; `0` when
/// `n - m = 1`, where `γ_t` is linear in `z` and the identity is vacuous.
pub fn certificate_rhs(m: i64, n: i64, epsilon: f64, delta: f64) -> f64 {
    let k = (n - m - 1) as f64;
    if k == 0.0 {
        return 0.0;
    }
    (epsilon / k).powi(2) + (delta / epsilon).powi(2) * (k / (m - n) as f64).powi(2)
}

/// Zeros of `U_{n-1}` in (-1, 1) that are not zeros of `U_{m-1}`.
fn fact_b_points(m: i64, n: i64) -> Vec<f64> {
    let d = gcd(m, n);
    (1..n)
        .filter(|j| (j * d) % n != 0)
        .map(|j| (PI * j as f64 / n as f64).cos())
        .collect()
}

/// Measure (as a fraction of (-1, 1)) where fact (a) fails.
fn fact_a_failure(m: i64, n: i64, epsilon: f64, delta: f64) -> f64 {
    let threshold = delta * (m + 1).abs() as f64 + epsilon * m.abs() as f64;
    let bad = (0..PHI_SAMPLES)
        .map(|i| -1.0 + 2.0 * (i as f64 + 0.5) / PHI_SAMPLES as f64)
        .filter(|&t| cheb_eval(n - 1, t).abs() <= threshold)
        .count();
    bad as f64 / PHI_SAMPLES as f64
}

/// Deterministic `(ε, δ)`:
/// `ε = min(√inf Φ · (n-m-1)/4, fact-(b) margin, 1/4)`, `δ = ε²/(4(n-m))`,
/// halved until fact (a) holds on at least 90% of (-1, 1).
pub fn choose_eps_delta(m: i64, n: i64) -> Result<(f64, f64)> {
    check_range(m, n)?;
    let inf = phi_inf(m, n)?;
    let k = (n - m) as f64;
    let from_phi = if n - m == 1 { f64::INFINITY } else { inf.sqrt() * (k - 1.0) / 4.0 };
    // ε|U_{m-1}(t)| > δ|m+1| = ε²|m+1|/(4(n-m))  ⇔  ε < 4(n-m)|U_{m-1}(t)|/|m+1|.
    let from_b = if m == -1 {
        f64::INFINITY
    } else {
        fact_b_points(m, n)
            .iter()
            .map(|&t| 2.0 * k * cheb_eval(m - 1, t).abs() / (m + 1).abs() as f64)
            .fold(f64::INFINITY, f64::min)
    };
    let mut epsilon = from_phi.min(from_b).min(EPS_CAP);
    let mut delta = epsilon * epsilon / (4.0 * k);
    while fact_a_failure(m, n, epsilon, delta) >= FACT_A_BUDGET {
        epsilon *= 0.5;
        delta = epsilon * epsilon / (4.0 * k);
    }
    Ok((epsilon, delta))
}

pub fn extremal_poly(m: i64, n: i64, epsilon: f64, delta: f64) -> Result<LaurentPoly> {
    LaurentPoly::from_terms(&[
        (n, Complex64::new(1.0, 0.0)),
        (m + 1, Complex64::new(delta, 0.0)),
        (m, Complex64::new(epsilon, 0.0)),
    ])
}

/// `γ_t(e^{iθ}) = U_{n-1}(t) e^{i(n-m)θ} + δ U_m(t) e^{iθ} + ε U_{m-1}(t)`.
pub fn family_point(m: i64, n: i64, epsilon: f64, delta: f64, t: f64, theta: f64) -> Complex64 {
    cheb_eval(n - 1, t) * Complex64::cis((n - m) as f64 * theta)
        + delta * cheb_eval(m, t) * Complex64::cis(theta)
        + Complex64::new(epsilon * cheb_eval(m - 1, t), 0.0)
}

fn family_derivative(m: i64, n: i64, delta: f64, t: f64, theta: f64) -> Complex64 {
    let k = (n - m) as f64;
    Complex64::i() * (k * cheb_eval(n - 1, t) * Complex64::cis(k * theta) + delta * cheb_eval(m, t) * Complex64::cis(theta))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalWitness {
    pub m: i64,
    pub n: i64,
    pub d: i64,
    pub epsilon: f64,
    pub delta: f64,
    pub phi_inf: f64,
    pub rhs: f64,
    pub sigma: i64,
    pub count: i64,
    pub max_residual: f64,
    /// Smallest `max(|γ_t|, |γ_t'|)` over the `(t, θ)` sample grid,
    /// relative to the largest `|γ_t|`; positive means the two never
    /// vanish together on the grid.
    pub min_joint_modulus: f64,
    /// Fraction of (-1, 1) where fact (a) fails.
    pub fact_a_failure: f64,
    pub poly: LaurentPoly,
    pub crossings: Vec<SelfIntersection>,
}

fn joint_modulus(m: i64, n: i64, epsilon: f64, delta: f64) -> f64 {
    let (nt, nth) = (400, 64 * (n - m) as usize + 64);
    let mut worst = f64::INFINITY;
    let mut top: f64 = 0.0;
    for i in 0..nt {
        let t = -1.0 + 2.0 * (i as f64 + 0.5) / nt as f64;
        for j in 0..nth {
            let theta = TAU * j as f64 / nth as f64;
            let g = family_point(m, n, epsilon, delta, t, theta).norm();
            let dg = family_derivative(m, n, delta, t, theta).norm();
            top = top.max(g);
            worst = worst.min(g.max(dg));
        }
    }
    worst / top.max(f64::MIN_POSITIVE)
}

/// Builds the trinomial, counts its crossings and checks the certificates.
pub fn build_and_verify(m: i64, n: i64, cfg: &Tolerances) -> Result<ExtremalWitness> {
    check_range(m, n)?;
    let (epsilon, delta) = choose_eps_delta(m, n)?;
    let inf = phi_inf(m, n)?;
    let rhs = certificate_rhs(m, n, epsilon, delta);
    if !(epsilon > delta && delta > 0.0) {
        return Err(Error::HypothesisViolated(format!("need ε > δ > 0, got ε = {epsilon}, δ = {delta}")));
    }
    if rhs >= inf {
        return Err(Error::HypothesisViolated(format!("certificate {rhs} >= inf Φ = {inf}")));
    }
    let poly = extremal_poly(m, n, epsilon, delta)?;
    let crossings = find_self_intersections(&poly, 1.0, cfg)?;
    let sigma = sigma_bound(m, n)?;
    let count = crossings.len() as i64;
    if count != sigma {
        return Err(Error::CountMismatch { expected: sigma, found: count });
    }
    Ok(ExtremalWitness {
        m,
        n,
        d: gcd(m, n),
        epsilon,
        delta,
        phi_inf: inf,
        rhs,
        sigma,
        count,
        max_residual: crossings.iter().map(|x| x.residual).fold(0.0, f64::max),
        min_joint_modulus: joint_modulus(m, n, epsilon, delta),
        fact_a_failure: fact_a_failure(m, n, epsilon, delta),
        poly,
        crossings,
    })
}

/// Parameters at which the three facts are checked: zeros of `U_{n-1}`
/// (fact (b) or (c)) interleaved with midpoints and points near `±1`
/// (fact (a)).
pub fn designated_grid(n: i64) -> Vec<f64> {
    let mut zeros: Vec<f64> = (1..n).map(|j| (PI * j as f64 / n as f64).cos()).collect();
    zeros.reverse();
    let mut grid = vec![-1.0 + 1e-3];
    let mut prev = -1.0;
    for &z in &zeros {
        grid.push(0.5 * (prev + z));
        grid.push(z);
        prev = z;
    }
    grid.push(0.5 * (prev + 1.0));
    grid.push(1.0 - 1e-3);
    grid
}

/// Winding profile of the witness family on [`designated_grid`].
pub fn witness_profile(w: &ExtremalWitness) -> FamilyProfile {
    let (m, n, e, d) = (w.m, w.n, w.epsilon, w.delta);
    family_winding_profile(
        |t, th| family_point(m, n, e, d, t, th),
        (n - m) as usize,
        &designated_grid(n),
        1e-9,
    )
}
