//! Rational maps `r = p/q` on the unit circle.
//!
//! For `p = Σ a_k z^k` and `q = Σ b_ℓ z^ℓ` of degree at most `n`,
//!
//! `p(e^{iθ}z) q(e^{−iθ}z) − p(e^{−iθ}z) q(e^{iθ}z) = (e^{iθ} − e^{−iθ}) z · g(cos θ, z)`
//!
//! with `g(t, z) = Σ a_k b_ℓ U_{k−ℓ−1}(t) z^{k+ℓ−1}`. Crossings of the
//! image of the circle are common zeros of `g` and its conjugate-reciprocal
//! `g*` with `|z| = 1`, and there are at most `(n − 1)²` of them.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chebyshev::cheb_coeffs;
use crate::config::Tolerances;
use crate::curve::{push_dirichlet, ClosedCurve};
use crate::error::{Error, Result};
use crate::intersect::{scan_curve, SelfIntersection};
use crate::laurent::LaurentPoly;
use crate::pairsys::{resultant_roots_on_circle, BivarPoly};
use crate::poly::{horner, Poly};
use crate::trig2::TrigPoly2;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Samples used to decide whether `|r| ≡ 1` on the circle.
pub const BLASCHKE_SAMPLES: usize = 512;
pub const BLASCHKE_TOL: f64 = 1e-8;

/// `p/q` with both coefficient vectors padded to a common length `n + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalMap {
    pub p: Vec<Complex64>,
    pub q: Vec<Complex64>,
}

fn trim(v: &[Complex64]) -> usize {
    v.iter().rposition(|c| *c != ZERO).map_or(0, |i| i + 1)
}

impl RationalMap {
    /// Checks that `q` has no zero on the circle and that `p/q` is not
    /// constant.
    pub fn new(p: Vec<Complex64>, q: Vec<Complex64>) -> Result<Self> {
        let len = trim(&p).max(trim(&q));
        if trim(&q) == 0 {
            return Err(Error::Invalid("denominator is zero".into()));
        }
        let pad = |mut v: Vec<Complex64>| {
            v.resize(len.max(1), ZERO);
            v.truncate(len.max(1));
            v
        };
        let map = RationalMap { p: pad(p), q: pad(q) };
        let qpoly = Poly::new(map.q.clone());
        if qpoly.degree().unwrap_or(0) > 0 {
            let near = qpoly
                .roots()?
                .into_iter()
                .map(|z| (z.norm() - 1.0).abs())
                .fold(f64::INFINITY, f64::min);
            if near < 1e-8 {
                return Err(Error::Invalid(format!("denominator vanishes within {near:e} of the circle")));
            }
        }
        // r is constant iff p'q − pq' ≡ 0, i.e. all a_k b_ℓ − a_ℓ b_k vanish.
        let size = map.p.iter().chain(&map.q).map(|c| c.norm()).fold(0.0, f64::max);
        let mut wronskian = 0.0_f64;
        for k in 0..map.p.len() {
            for l in 0..k {
                wronskian = wronskian.max((map.p[k] * map.q[l] - map.p[l] * map.q[k]).norm());
            }
        }
        if wronskian <= 1e-12 * size * size {
            return Err(Error::Invalid("rational map is constant".into()));
        }
        Ok(map)
    }

    /// A Laurent polynomial `Σ_{m..n} a_k z^k` as `z^{−m} p / z^{−m}`
    /// (denominator 1 when `m ≥ 0`).
    pub fn from_laurent(p: &LaurentPoly) -> Result<Self> {
        let shift = (-p.m()).max(0) as usize;
        let mut num = vec![ZERO; (p.n() + shift as i64) as usize + 1];
        for (k, a) in p.terms() {
            num[(k + shift as i64) as usize] += a;
        }
        let mut den = vec![ZERO; shift + 1];
        den[shift] = ONE;
        RationalMap::new(num, den)
    }

    pub fn degree(&self) -> usize {
        self.p.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.p, z) / horner(&self.q, z)
    }

    /// `r(∞)`, infinite when `deg q < deg p`.
    pub fn at_infinity(&self) -> Complex64 {
        let n = self.degree();
        if self.q[n] == ZERO {
            Complex64::new(f64::INFINITY, f64::INFINITY)
        } else {
            self.p[n] / self.q[n]
        }
    }

    pub fn is_blaschke(&self) -> bool {
        (0..BLASCHKE_SAMPLES).all(|i| {
            let z = Complex64::from_polar(1.0, TAU * i as f64 / BLASCHKE_SAMPLES as f64);
            (self.eval(z).norm() - 1.0).abs() < BLASCHKE_TOL
        })
    }

    /// `a₀, b₀, a_n, b_n ≠ 0` and `a_n b₀ − a₀ b_n ≠ 0`, relative to the
    /// coefficient size.
    pub fn is_normalized(&self) -> bool {
        let n = self.degree();
        let size = self.p.iter().chain(&self.q).map(|c| c.norm()).fold(0.0, f64::max);
        let tol = 1e-9 * size;
        n >= 1
            && [self.p[0], self.q[0], self.p[n], self.q[n]].iter().all(|c| c.norm() > tol)
            && (self.p[n] * self.q[0] - self.p[0] * self.q[n]).norm() > tol * size
    }

    /// `r ∘ φ` for `φ(z) = (z + ζ)/(1 + ζ̄z)`, which maps the circle onto itself.
    pub fn compose_mobius(&self, zeta: Complex64) -> RationalMap {
        let n = self.degree();
        let lin = Poly::new(vec![zeta, ONE]);
        let den = Poly::new(vec![ONE, zeta.conj()]);
        let mut pow_lin = vec![Poly::new(vec![ONE])];
        let mut pow_den = vec![Poly::new(vec![ONE])];
        for k in 1..=n {
            pow_lin.push(pow_lin[k - 1].mul(&lin));
            pow_den.push(pow_den[k - 1].mul(&den));
        }
        let compose = |c: &[Complex64]| {
            let mut out = vec![ZERO; n + 1];
            for (k, a) in c.iter().enumerate() {
                let term = pow_lin[k].mul(&pow_den[n - k]);
                for (j, t) in term.coeffs.iter().enumerate() {
                    out[j] += a * t;
                }
            }
            out
        };
        RationalMap { p: compose(&self.p), q: compose(&self.q) }
    }
}

/// Moves `r` by a disk automorphism until `r(0)` and `r(∞)` are distinct
/// and nonzero. The image of the circle is unchanged. Already normalized
/// maps are returned as they are.
pub fn mobius_normalize(r: &RationalMap) -> Result<RationalMap> {
    mobius_normalize_seeded(r, 0x6d6f6269).map(|(map, _)| map)
}

/// As [`mobius_normalize`], also returning the `ζ` used (0 when unchanged).
pub fn mobius_normalize_seeded(r: &RationalMap, seed: u64) -> Result<(RationalMap, Complex64)> {
    const TRIALS: usize = 64;
    if r.is_blaschke() {
        return Err(Error::BlaschkeInput);
    }
    if r.is_normalized() {
        return Ok((r.clone(), ZERO));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..TRIALS {
        let zeta = loop {
            let z = Complex64::new(rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9));
            if z.norm() < 0.9 && z.norm() > 1e-3 {
                break z;
            }
        };
        let (u, v) = (r.eval(zeta), r.eval(1.0 / zeta.conj()));
        let size = u.norm().max(v.norm()).max(1.0);
        if !(u.is_finite() && v.is_finite()) || u.norm() < 1e-6 || v.norm() < 1e-6 || (u - v).norm() < 1e-6 * size {
            continue;
        }
        let out = r.compose_mobius(zeta);
        if out.is_normalized() {
            return Ok((out, zeta));
        }
    }
    Err(Error::SearchExhausted(TRIALS))
}

/// The pair `(g, g*)` for a normalized map, with degree checks.
pub fn build_rational_pair(r: &RationalMap) -> Result<(BivarPoly, BivarPoly)> {
    let n = r.degree();
    let mut g = BivarPoly::zero(0, 0);
    let mut gs = BivarPoly::zero(0, 0);
    for (k, &a) in r.p.iter().enumerate() {
        for (l, &b) in r.q.iter().enumerate() {
            let c = a * b;
            if c == ZERO {
                continue;
            }
            let u = cheb_coeffs(k as i64 - l as i64 - 1)?;
            if u.is_empty() {
                continue;
            }
            g.add_cheb_term(c, &u, k + l - 1);
            gs.add_cheb_term(c.conj(), &u, 2 * n - k - l - 1);
        }
    }
    if n == 0 {
        return Ok((g, gs));
    }
    let lead = 2f64.powi(n as i32 - 1) * (r.p[n] * r.q[0] - r.p[0] * r.q[n]);
    let deg_ok = g.deg_t() == Some(n - 1) && g.total_degree() == Some(2 * n - 2);
    let got = g.coeff(n - 1, n - 1);
    if !deg_ok || (got - lead).norm() > 1e-9 * lead.norm().max(1.0) {
        return Err(Error::DegreeAssertion(format!(
            "g has t-degree {:?}, total degree {:?}, t^{}z^{} coefficient {got} (expected {lead})",
            g.deg_t(),
            g.total_degree(),
            n - 1,
            n - 1
        )));
    }
    Ok((g, gs))
}

/// Relative residual of
/// `g(cos θ, z)(e^{iθ} − e^{−iθ}) z = p(e^{iθ}z)q(e^{−iθ}z) − p(e^{−iθ}z)q(e^{iθ}z)`.
pub fn factorization_residual(r: &RationalMap, theta: f64, z: Complex64) -> Result<f64> {
    let (g, _) = build_rational_pair(r)?;
    let e = Complex64::from_polar(1.0, theta);
    let (zp, zm) = (e * z, e.conj() * z);
    let rhs = horner(&r.p, zp) * horner(&r.q, zm) - horner(&r.p, zm) * horner(&r.q, zp);
    let lhs = g.eval(Complex64::new(theta.cos(), 0.0), z) * (e - e.conj()) * z;
    let size: f64 = r.p.iter().map(|c| c.norm()).sum::<f64>() * r.q.iter().map(|c| c.norm()).sum::<f64>();
    let zpow = z.norm().max(1.0).powi(2 * r.degree() as i32);
    Ok((lhs - rhs).norm() / (size * zpow).max(f64::MIN_POSITIVE))
}

/// `|g*(t, z) − z^{2n−2} conj(g(t̄, 1/z̄))|`, relative to `‖g*‖₁`.
pub fn conjugate_reciprocal_residual(r: &RationalMap, t: Complex64, z: Complex64) -> Result<f64> {
    let (g, gs) = build_rational_pair(r)?;
    let n = r.degree() as i32;
    let lhs = gs.eval(t, z);
    let rhs = z.powi(2 * n - 2) * g.eval(t.conj(), 1.0 / z.conj()).conj();
    Ok((lhs - rhs).norm() / gs.norm1().max(f64::MIN_POSITIVE))
}

/// `θ ↦ r(e^{iθ})`.
#[derive(Debug, Clone)]
pub struct RationalCurve {
    pub map: RationalMap,
    dp: Vec<Complex64>,
    dq: Vec<Complex64>,
    ddp: Vec<Complex64>,
    ddq: Vec<Complex64>,
    scale: f64,
}

impl RationalCurve {
    pub fn new(map: RationalMap) -> Self {
        let der = |v: &[Complex64]| Poly::new(v.to_vec()).derivative().coeffs;
        let (dp, dq) = (der(&map.p), der(&map.q));
        let (ddp, ddq) = (der(&dp), der(&dq));
        let scale = (0..256)
            .map(|i| map.eval(Complex64::from_polar(1.0, TAU * i as f64 / 256.0)).norm())
            .fold(0.0, f64::max);
        RationalCurve { map, dp, dq, ddp, ddq, scale }
    }

    /// `r'(z)` and `r''(z)`.
    fn derivatives(&self, z: Complex64) -> (Complex64, Complex64) {
        let (p, q) = (horner(&self.map.p, z), horner(&self.map.q, z));
        let (p1, q1) = (horner(&self.dp, z), horner(&self.dq, z));
        let (p2, q2) = (horner(&self.ddp, z), horner(&self.ddq, z));
        let w = p1 * q - p * q1;
        let d1 = w / (q * q);
        let d2 = ((p2 * q - p * q2) * q - 2.0 * q1 * w) / (q * q * q);
        (d1, d2)
    }
}

impl ClosedCurve for RationalCurve {
    fn point(&self, theta: f64) -> Complex64 {
        self.map.eval(Complex64::from_polar(1.0, theta))
    }

    fn velocity(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        Complex64::i() * z * self.derivatives(z).0
    }

    fn acceleration(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        let (d1, d2) = self.derivatives(z);
        -z * (d1 + z * d2)
    }

    /// `Σ a_k b_ℓ U_{k−ℓ−1}(cos θ) e^{i(k+ℓ)s}`; it differs from the chord
    /// over `2i sin θ` by the factor `q(e^{i(s+θ)}) q(e^{i(s−θ)})`, which has
    /// no zeros on the circle.
    fn chord_quotient(&self) -> TrigPoly2 {
        let mut terms = Vec::new();
        for (k, &a) in self.map.p.iter().enumerate() {
            for (l, &b) in self.map.q.iter().enumerate() {
                push_dirichlet(&mut terms, k as i64 - l as i64, (k + l) as i64, a * b);
            }
        }
        TrigPoly2::from_terms(terms)
    }

    fn scale(&self) -> f64 {
        self.scale
    }

    fn bandwidth(&self) -> usize {
        (2 * self.map.degree()).max(1)
    }
}

/// Self-intersections of `θ ↦ r(e^{iθ})`.
///
/// A count above `(n − 1)²` is only possible when `g` and `g*` share a
/// factor; that case is reported as `DegenerateResultant`, otherwise as
/// `BoundViolated`.
pub fn rational_self_intersections(r: &RationalMap, cfg: &Tolerances) -> Result<Vec<SelfIntersection>> {
    if r.is_blaschke() {
        return Err(Error::BlaschkeInput);
    }
    let curve = RationalCurve::new(r.clone());
    let crossings = match scan_curve(&curve, 1.0, cfg) {
        Ok(scan) => scan.crossings,
        Err(Error::MultipleCrossingOverflow) => {
            degenerate_check(r)?;
            return Err(Error::MultipleCrossingOverflow);
        }
        Err(e) => return Err(e),
    };
    let n = r.degree() as i64;
    let bound = (n - 1) * (n - 1);
    if crossings.len() as i64 > bound {
        degenerate_check(r)?;
        return Err(Error::BoundViolated { count: crossings.len() as i64, bound });
    }
    Ok(crossings)
}

fn degenerate_check(r: &RationalMap) -> Result<()> {
    let normalized = mobius_normalize(r)?;
    let (g, gs) = build_rational_pair(&normalized)?;
    resultant_roots_on_circle(&g, &gs, 1e-6).map(|_| ())
}
