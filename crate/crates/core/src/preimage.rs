//! Point preimages: unimodular triples with prescribed sum, cubics with
//! three preimages on one circle, and preimage cardinality.
//!
//! Three unimodular numbers with product 1 are exactly the roots of
//! `z³ − ζz² + ζ̄z − 1` where `ζ` is their sum; the admissible sums fill the
//! closed deltoid traced by `2e^{it} + e^{−2it}`, and the sum determines the
//! triple up to order. Interior points give distinct triples.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::topology::winding_of_smooth;

/// Three distinct unimodular numbers with sum `target` and product 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnimodularTriple {
    pub zeta1: Complex64,
    pub zeta2: Complex64,
    pub zeta3: Complex64,
    pub target: Complex64,
    /// Parameters with `2r e^{it} + e^{−2it} = target`.
    pub r: f64,
    pub t: f64,
}

impl UnimodularTriple {
    pub fn members(&self) -> [Complex64; 3] {
        [self.zeta1, self.zeta2, self.zeta3]
    }

    pub fn min_separation(&self) -> f64 {
        let z = self.members();
        (z[0] - z[1]).norm().min((z[0] - z[2]).norm()).min((z[1] - z[2]).norm())
    }

    /// Largest deviation among the four defining properties:
    /// unit moduli, sum, product and (reported separately) distinctness.
    pub fn residuals(&self) -> (f64, f64, f64) {
        let z = self.members();
        let modulus = z.iter().map(|w| (w.norm() - 1.0).abs()).fold(0.0, f64::max);
        let sum = (z[0] + z[1] + z[2] - self.target).norm();
        let product = (z[0] * z[1] * z[2] - 1.0).norm();
        (modulus, sum, product)
    }
}

fn gamma(r: f64, t: f64) -> Complex64 {
    2.0 * r * Complex64::from_polar(1.0, t) + Complex64::from_polar(1.0, -2.0 * t)
}

/// Unimodular triple for `|ζ| < 1`, where the sum constraint is guaranteed
/// solvable.
pub fn unimodular_triple(zeta: Complex64) -> Result<UnimodularTriple> {
    if zeta.norm() >= 1.0 || !zeta.is_finite() {
        return Err(Error::HypothesisViolated(format!("|zeta| = {} is not below 1", zeta.norm())));
    }
    deltoid_triple(zeta)
}

/// Unimodular triple for any `ζ` strictly inside the deltoid
/// `{2e^{it} + e^{−2it}}`, which contains the unit disk.
///
/// The winding number of `γ_r = 2re^{it} + e^{−2it}` about `ζ` differs at
/// `r = 0` and `r = 1`; bisection on that integer locates a radius where `ζ`
/// lies on `γ_r`, and Newton on `(r, t)` finishes.
pub fn deltoid_triple(zeta: Complex64) -> Result<UnimodularTriple> {
    const SAMPLES: usize = 96;
    const FLOOR: f64 = 1e-13;
    // |γ_r''| ≤ 2r + 4.
    let winding = |r: f64| winding_of_smooth(|t| gamma(r, t), zeta, SAMPLES, FLOOR, 2.0 * r + 4.0);
    let outside = || {
        Error::HypothesisViolated(format!(
            "zeta = {zeta} is not inside the deltoid; no unimodular triple has this sum"
        ))
    };

    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut r = None;
    let w_hi = match winding(hi) {
        Ok(w) => w,
        Err(Error::PointOnCurve(_)) => return Err(outside()),
        Err(e) => return Err(e),
    };
    match winding(lo) {
        Ok(w) if w == w_hi => return Err(outside()),
        Ok(_) => {}
        // On the unit circle: the triple degenerates (two members coincide).
        Err(Error::PointOnCurve(_)) => r = Some(0.0),
        Err(e) => return Err(e),
    }
    if r.is_none() {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            match winding(mid) {
                Ok(w) if w == w_hi => hi = mid,
                Ok(_) => lo = mid,
                Err(Error::PointOnCurve(_)) => {
                    lo = mid;
                    hi = mid;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        r = Some(0.5 * (lo + hi));
    }
    let mut r = r.unwrap_or(0.0);

    // Seed t from a sample of γ_r, then polish (r, t) jointly.
    let mut t = (0..720)
        .map(|i| i as f64 * TAU / 720.0)
        .min_by(|a, b| (gamma(r, *a) - zeta).norm().total_cmp(&(gamma(r, *b) - zeta).norm()))
        .unwrap_or(0.0);
    for _ in 0..50 {
        let f = gamma(r, t) - zeta;
        if f.norm() < 1e-15 {
            break;
        }
        let e = Complex64::from_polar(1.0, t);
        let e2 = Complex64::from_polar(1.0, -2.0 * t);
        let dr = 2.0 * e;
        let dt = Complex64::i() * (2.0 * r * e - 2.0 * e2);
        let det = dr.re * dt.im - dr.im * dt.re;
        if det.abs() < 1e-300 {
            break;
        }
        let step_r = (-f.re * dt.im + f.im * dt.re) / det;
        let step_t = (-dr.re * f.im + dr.im * f.re) / det;
        r += step_r;
        t += step_t;
    }
    if !(0.0..=1.0 + 1e-12).contains(&r) || (gamma(r, t) - zeta).norm() > 1e-10 {
        return Err(Error::NoConvergence);
    }
    let r = r.min(1.0);
    let t = t.rem_euclid(TAU);
    let s = (1.0 - r * r).max(0.0).sqrt();
    let e = Complex64::from_polar(1.0, t);
    let triple = UnimodularTriple {
        zeta1: Complex64::from_polar(1.0, -2.0 * t),
        zeta2: Complex64::new(r, s) * e,
        zeta3: Complex64::new(r, -s) * e,
        target: zeta,
        r,
        t,
    };
    if triple.min_separation() < 1e-9 {
        return Err(outside());
    }
    Ok(triple)
}

/// `0 < |a₁|² < |a₂a₃|`.
pub fn small_linear_term(a: &[Complex64; 4]) -> bool {
    let a1 = a[1].norm_sqr();
    a1 > 0.0 && a1 < (a[2] * a[3]).norm()
}

/// `0 < |a₂|² < |a₁a₃|`: invariant under `p ↦ αp(βz)` and equivalent to
/// the normalized sum having modulus below 1.
pub fn small_quadratic_term(a: &[Complex64; 4]) -> bool {
    let a2 = a[2].norm_sqr();
    a2 > 0.0 && a2 < (a[1] * a[3]).norm()
}

/// A value `w` whose three preimages under a cubic share one modulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicWitness {
    pub w: Complex64,
    pub roots: [Complex64; 3],
    pub alpha: Complex64,
    pub beta: Complex64,
    /// Sum of the normalized triple, `−αβ²a₂`.
    pub zeta: Complex64,
    pub triple: UnimodularTriple,
    pub max_residual: f64,
    pub modulus_spread: f64,
}

/// `(α, β)` with `αβ³a₃ = 1` and `αβ²a₂ = −conj(αβa₁)`, solved separately
/// for moduli and arguments.
pub fn normalize_cubic(a: &[Complex64; 4]) -> Result<(Complex64, Complex64)> {
    if a[3] == Complex64::new(0.0, 0.0) {
        return Err(Error::HypothesisViolated("leading coefficient is zero".into()));
    }
    if a[1].norm() == 0.0 || a[2].norm() == 0.0 {
        return Err(Error::HypothesisViolated("a1 and a2 must both be nonzero".into()));
    }
    // Moduli: |α||β|³|a₃| = 1 and |β| |a₂| = |a₁|.
    let beta_mod = a[1].norm() / a[2].norm();
    let alpha_mod = 1.0 / (beta_mod.powi(3) * a[3].norm());
    // Arguments: arg α + 3 arg β = −arg a₃ and 2 arg α + 3 arg β = π − arg a₁ − arg a₂.
    let beta_arg = (a[1].arg() + a[2].arg() - 2.0 * a[3].arg() - std::f64::consts::PI) / 3.0;
    let alpha_arg = -a[3].arg() - 3.0 * beta_arg;
    Ok((Complex64::from_polar(alpha_mod, alpha_arg), Complex64::from_polar(beta_mod, beta_arg)))
}

/// Three distinct preimages of one value on one circle, for `p = Σ a_k z^k`.
///
/// Works whenever the normalized sum lies inside the deltoid, in particular
/// under [`small_quadratic_term`]. Outside the deltoid no such value exists
/// and `HypothesisViolated` is returned.
pub fn cubic_triple_crossing(a: &[Complex64; 4]) -> Result<CubicWitness> {
    let (alpha, beta) = normalize_cubic(a)?;
    let zeta = -alpha * beta * beta * a[2];
    let triple = deltoid_triple(zeta).map_err(|e| match e {
        Error::HypothesisViolated(_) => Error::HypothesisViolated(format!(
            "normalized sum {zeta} (|zeta| = {:.6}) lies outside the deltoid: \
             no value has three preimages of equal modulus",
            zeta.norm()
        )),
        other => other,
    })?;
    let roots = triple.members().map(|z| beta * z);
    let w = a[0] + 1.0 / alpha;
    let p = Poly::new(a.to_vec());
    let scale = a.iter().map(|c| c.norm()).sum::<f64>().max(w.norm()).max(1.0);
    let max_residual = roots.iter().map(|&z| (p.eval(z) - w).norm()).fold(0.0, f64::max) / scale;
    let moduli = roots.map(|z| z.norm());
    let modulus_spread = moduli.iter().cloned().fold(f64::MIN, f64::max)
        - moduli.iter().cloned().fold(f64::MAX, f64::min);
    Ok(CubicWitness { w, roots, alpha, beta, zeta, triple, max_residual, modulus_spread })
}

/// Critical values of `p` and whether they are pairwise farther apart than `tol`.
pub fn critical_values_distinct(p: &Poly, tol: f64) -> Result<(bool, Vec<Complex64>)> {
    match p.degree() {
        Some(d) if d >= 2 => {}
        _ => return Err(Error::Invalid("critical values need degree at least 2".into())),
    }
    let values: Vec<Complex64> = p.derivative().roots()?.into_iter().map(|u| p.eval(u)).collect();
    let distinct = values
        .iter()
        .enumerate()
        .all(|(i, a)| values[i + 1..].iter().all(|b| (a - b).norm() > tol));
    Ok((distinct, values))
}

/// Number of distinct solutions of `p(z) = w`.
///
/// Roots of `p − w` are clustered at `1e−8`; a root near a critical point
/// `u` with `p(u) ≈ w` is first snapped onto `u`, since a multiple root only
/// comes out of the solver to about `ε^{1/k}`.
pub fn preimage_count(p: &Poly, w: Complex64) -> Result<usize> {
    let mut shifted = p.coeffs.clone();
    match shifted.first_mut() {
        Some(c) => *c -= w,
        None => return Err(Error::ZeroPolynomial),
    }
    let q = Poly::new(shifted);
    if q.degree().unwrap_or(0) == 0 {
        return if q.is_zero() { Err(Error::ZeroPolynomial) } else { Ok(0) };
    }
    let scale = q.norm1();
    let critical: Vec<Complex64> = if q.degree().unwrap_or(0) >= 2 {
        q.derivative()
            .roots()?
            .into_iter()
            .filter(|u| q.eval(*u).norm() <= 1e-10 * scale.max(1.0) * (1.0 + u.norm()).powi(p.coeffs.len() as i32))
            .collect()
    } else {
        Vec::new()
    };
    let mut roots = q.roots()?;
    for x in roots.iter_mut() {
        if let Some(u) = critical.iter().find(|u| (*x - **u).norm() < 1e-4 * (1.0 + u.norm())) {
            *x = *u;
        }
    }
    let mut reps: Vec<Complex64> = Vec::new();
    for x in roots {
        if !reps.iter().any(|y| (x - y).norm() <= 1e-8 * (1.0 + y.norm())) {
            reps.push(x);
        }
    }
    Ok(reps.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check(t: &UnimodularTriple) {
        let (m, s, p) = t.residuals();
        assert!(m < 1e-10 && s < 1e-9 && p < 1e-9, "{t:?}");
        assert!(t.min_separation() > 0.0);
    }

    #[test]
    fn zero_gives_cube_roots_of_unity() {
        let t = unimodular_triple(c(0.0, 0.0)).unwrap();
        check(&t);
        for z in t.members() {
            assert!((z.powi(3) - 1.0).norm() < 1e-10);
        }
        assert!((t.min_separation() - 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn random_disk_points_and_root_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        for _ in 0..200 {
            let zeta = Complex64::from_polar(rng.random_range(0.0..0.99), rng.random_range(0.0..TAU));
            let t = unimodular_triple(zeta).unwrap();
            check(&t);
            // Independent oracle: the triple is the root set of z³ − ζz² + ζ̄z − 1.
            let roots = Poly::new(vec![c(-1.0, 0.0), zeta.conj(), -zeta, c(1.0, 0.0)]).roots().unwrap();
            for z in t.members() {
                assert!(roots.iter().any(|r| (r - z).norm() < 1e-8));
            }
        }
    }

    #[test]
    fn outside_disk_rejected_but_deltoid_interior_solvable() {
        assert!(unimodular_triple(c(1.0, 0.0)).is_err());
        let t = deltoid_triple(c(2.0, 0.0)).unwrap();
        check(&t);
        assert!(matches!(deltoid_triple(c(3.5, 0.0)), Err(Error::HypothesisViolated(_))));
        assert!(matches!(deltoid_triple(c(-1.2, 0.0)), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn cubic_example_has_equal_modulus_preimages() {
        let a = [c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        assert!(small_linear_term(&a));
        let wit = cubic_triple_crossing(&a).unwrap();
        assert!(wit.max_residual < 1e-9 && wit.modulus_spread < 1e-9, "{wit:?}");
        // Normalized sum has modulus |a2|²/(|a1||a3|) = 2: outside the disk.
        assert!((wit.zeta.norm() - 2.0).abs() < 1e-12);
        assert_eq!(preimage_count(&Poly::new(a.to_vec()), wit.w).unwrap(), 3);
    }

    #[test]
    fn missing_quadratic_term_rejected() {
        let a = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(cubic_triple_crossing(&a), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn large_quadratic_term_has_no_witness() {
        // |a1|² < |a2 a3| holds, but the normalized sum has modulus 100.
        let a = [c(0.0, 0.0), c(1.0, 0.0), c(10.0, 0.0), c(1.0, 0.0)];
        assert!(small_linear_term(&a));
        assert!(matches!(cubic_triple_crossing(&a), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn witness_scales_with_alpha_beta() {
        let a = [c(0.3, 0.1), c(1.2, -0.4), c(0.5, 0.2), c(0.7, 0.9)];
        assert!(small_quadratic_term(&a));
        let (al, be) = (c(-0.8, 1.3), c(0.6, -0.2));
        let b: [Complex64; 4] = std::array::from_fn(|k| al * be.powi(k as i32) * a[k]);
        let wa = cubic_triple_crossing(&a).unwrap();
        let wb = cubic_triple_crossing(&b).unwrap();
        assert!((wb.w - al * wa.w).norm() < 1e-9);
        for z in wa.roots {
            assert!(wb.roots.iter().any(|y| (y * be - z).norm() < 1e-9));
        }
    }

    #[test]
    fn critical_values() {
        let (ok, v) = critical_values_distinct(&Poly::from_real(&[0.0, -3.0, 0.0, 1.0]), 1e-9).unwrap();
        assert!(ok);
        let mut re: Vec<f64> = v.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 2.0).abs() < 1e-12 && (re[1] - 2.0).abs() < 1e-12);
        let (ok, _) = critical_values_distinct(&Poly::from_real(&[0.0, 0.0, 0.0, 1.0]), 1e-9).unwrap();
        assert!(!ok);
    }

    #[test]
    fn preimage_counts() {
        assert_eq!(preimage_count(&Poly::from_real(&[0.0, 0.0, 0.0, 1.0]), c(0.0, 0.0)).unwrap(), 1);
        assert_eq!(preimage_count(&Poly::from_real(&[-1.0, 0.0, 1.0]), c(-1.0, 0.0)).unwrap(), 1);
        // Double root away from the origin: (z − 1)²(z + 2) = z³ − 3z + 2.
        assert_eq!(preimage_count(&Poly::from_real(&[2.0, -3.0, 0.0, 1.0]), c(0.0, 0.0)).unwrap(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = Poly::new((0..6).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect());
            let (ok, values) = critical_values_distinct(&p, 1e-9).unwrap();
            assert!(ok);
            for w in values {
                assert!(preimage_count(&p, w).unwrap() >= 4);
            }
        }
    }
}
