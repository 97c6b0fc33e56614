//! The bivariate pair system `(g, g*)` whose common zeros with `|z| = 1`
//! and real `t ∈ (-1, 1)` encode self-intersections, together with the
//! intersection accounting at the special points of the projective plane
//! and a resultant-based root oracle.
//!
//! With `t = cos θ`,
//! `g(t, z) = z^{-m} (p(e^{iθ}z) - p(e^{-iθ}z)) / (e^{iθ} - e^{-iθ})`
//! and `g*(t, z) = z^{n-m} conj(g(conj t, 1/conj z))`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{cheb_coeffs, common_zeros, gcd};
use crate::error::{Error, Result};
use crate::laurent::{sigma_bound, LaurentPoly};
use crate::poly::Poly;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Polynomial in `(t, z)`; `coeffs[i][j]` multiplies `t^i z^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivarPoly {
    coeffs: Vec<Vec<Complex64>>,
}

impl BivarPoly {
    pub fn zero(deg_t: usize, deg_z: usize) -> Self {
        Self {
            coeffs: vec![vec![ZERO; deg_z + 1]; deg_t + 1],
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> Complex64 {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .copied()
            .unwrap_or(ZERO)
    }

    /// Adds `a · U(t) · z^j` where `u` holds the monomial coefficients of `U`.
    pub(crate) fn add_cheb_term(&mut self, a: Complex64, u: &[i64], j: usize) {
        for (i, &c) in u.iter().enumerate() {
            if c != 0 {
                self.grow(i, j);
                self.coeffs[i][j] += a * c as f64;
            }
        }
    }

    fn grow(&mut self, i: usize, j: usize) {
        if self.coeffs.len() <= i {
            let width = self.coeffs.first().map_or(j + 1, |r| r.len());
            self.coeffs.resize(i + 1, vec![ZERO; width]);
        }
        if self.coeffs[0].len() <= j {
            for row in &mut self.coeffs {
                row.resize(j + 1, ZERO);
            }
        }
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| **c != ZERO)
                .map(move |(j, c)| (i, j, *c))
        })
    }

    pub fn deg_t(&self) -> Option<usize> {
        self.nonzero().map(|(i, _, _)| i).max()
    }

    pub fn deg_z(&self) -> Option<usize> {
        self.nonzero().map(|(_, j, _)| j).max()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.nonzero().map(|(i, j, _)| i + j).max()
    }

    pub fn eval(&self, t: Complex64, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, row| {
            acc * t + row.iter().rev().fold(ZERO, |a, c| a * z + c)
        })
    }

    /// `(f, ∂f/∂t, ∂f/∂z)` at `(t, z)`.
    pub fn eval_with_gradient(&self, t: Complex64, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let (mut f, mut ft, mut fz) = (ZERO, ZERO, ZERO);
        let mut t_pow = Complex64::new(1.0, 0.0);
        let mut t_pow_prev = ZERO;
        for (i, row) in self.coeffs.iter().enumerate() {
            let mut r = ZERO;
            let mut rz = ZERO;
            for (j, c) in row.iter().enumerate().rev() {
                rz = rz * z + r;
                r = r * z + c;
                let _ = j;
            }
            f += r * t_pow;
            fz += rz * t_pow;
            ft += r * t_pow_prev * i as f64;
            t_pow_prev = t_pow;
            t_pow *= t;
        }
        (f, ft, fz)
    }

    /// `Σ_i (Σ_j c_ij z^j) t^i` as a polynomial in `t` for fixed `z`,
    /// padded to `len` coefficients.
    pub fn in_t(&self, z: Complex64, len: usize) -> Vec<Complex64> {
        let mut out = vec![ZERO; len];
        for (i, row) in self.coeffs.iter().enumerate().take(len) {
            out[i] = row.iter().rev().fold(ZERO, |a, c| a * z + c);
        }
        out
    }

    pub fn norm1(&self) -> f64 {
        self.nonzero().map(|(_, _, c)| c.norm()).sum()
    }
}

/// Builds `g(t, z) = Σ a_k U_{k-1}(t) z^{k-m}` and
/// `g*(t, z) = Σ conj(a_k) U_{k-1}(t) z^{n-k}`.
pub fn build_pair(p: &LaurentPoly) -> Result<(BivarPoly, BivarPoly)> {
    let (m, n) = (p.m(), p.n());
    if m == 0 || m <= -n || m > n {
        return Err(Error::InvalidRange(format!(
            "pair system needs -n < m <= n and m != 0, got m = {m}, n = {n}"
        )));
    }
    let width = (n - m) as usize;
    let mut g = BivarPoly::zero(0, width);
    let mut gs = BivarPoly::zero(0, width);
    for (k, a) in p.terms() {
        if a == ZERO {
            continue;
        }
        let u = cheb_coeffs(k - 1)?;
        g.add_cheb_term(a, &u, (k - m) as usize);
        gs.add_cheb_term(a.conj(), &u, (n - k) as usize);
    }
    let expect_g = (2 * n - m - 1) as usize;
    let expect_gs = (n - m + m.abs() - 1) as usize;
    let got = (g.total_degree().unwrap_or(0), gs.total_degree().unwrap_or(0));
    if got != (expect_g, expect_gs) {
        return Err(Error::DegreeAssertion(format!(
            "total degrees {got:?}, expected ({expect_g}, {expect_gs})"
        )));
    }
    Ok((g, gs))
}

/// `|g(cos θ, z) - z^{-m}(p(e^{iθ}z) - p(e^{-iθ}z))/(e^{iθ} - e^{-iθ})|`.
pub fn pair_identity_residual(p: &LaurentPoly, theta: f64, z: Complex64) -> Result<f64> {
    let (g, _) = build_pair(p)?;
    let e = Complex64::from_polar(1.0, theta);
    let lhs = g.eval(Complex64::new(theta.cos(), 0.0), z);
    let rhs = z.powi(-p.m() as i32) * (p.eval(e * z)? - p.eval(e.conj() * z)?) / (e - e.conj());
    Ok((lhs - rhs).norm())
}

/// Where the intersection of the two homogenized curves is examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecialPoint {
    /// `(t, z, w) = (0, 1, 0)`
    ZOneAtInfinity,
    /// `(t, z, w) = (1, 0, 0)`
    TOneAtInfinity,
}

/// Vanishing orders of `G`, `G*` at a special point, the number of common
/// tangents, and the resulting lower bound `ab + c` on the intersection
/// multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalAnalysis {
    pub point: SpecialPoint,
    pub order_g: usize,
    pub order_gstar: usize,
    pub common_tangents: usize,
    pub multiplicity_lower_bound: usize,
}

/// Binary form `Σ c_e x^e y^{deg-e}` stored by the power of `x`.
#[derive(Debug, Clone)]
struct BinaryForm {
    coeffs: Vec<Complex64>,
}

impl BinaryForm {
    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Multiplicity of the root `[x : y] = [0 : 1]`.
    fn mult_at_x_zero(&self) -> usize {
        self.coeffs.iter().position(|c| *c != ZERO).unwrap_or(0)
    }

    /// Multiplicity of the root `[x : y] = [1 : 0]`.
    fn mult_at_y_zero(&self) -> usize {
        let top = self.coeffs.iter().rposition(|c| *c != ZERO).unwrap_or(0);
        self.degree() - top
    }

    /// Multiplicity of the finite root `x/y = s`, judged by successive derivatives.
    fn mult_at(&self, s: Complex64, tol: f64) -> usize {
        let mut poly = Poly::new(self.coeffs.clone());
        let scale = poly.norm1().max(1.0);
        let mut mult = 0;
        while !poly.is_zero() && poly.eval(s).norm() <= tol * scale {
            mult += 1;
            poly = poly.derivative();
        }
        mult
    }
}

/// Lowest-degree homogeneous part of `f` at `(0, 1, 0)`: the dehomogenized
/// `H(t, w) = F(t, 1, w)` collects `t^i w^{D-i-j}`, so the lowest degree
/// `D - deg_z f` comes from the top row in `z`.
fn lowest_form_z_point(f: &BivarPoly, total: usize) -> (usize, BinaryForm) {
    let jmax = f.deg_z().unwrap_or(0);
    let order = total - jmax;
    let coeffs = (0..=order).map(|i| f.coeff(i, jmax)).collect();
    (order, BinaryForm { coeffs })
}

/// Lowest-degree part at `(1, 0, 0)`: `F(1, z, w)` collects `z^j w^{D-i-j}`
/// of degree `D - i`, so the lowest degree is `D - deg_t f` and the form in
/// `(z, w)` comes from the top row in `t`.
fn lowest_form_t_point(f: &BivarPoly, total: usize) -> (usize, BinaryForm) {
    let imax = f.deg_t().unwrap_or(0);
    let order = total - imax;
    let coeffs = (0..=order).map(|j| f.coeff(imax, j)).collect();
    (order, BinaryForm { coeffs })
}

fn common_tangents(a: &BinaryForm, b: &BinaryForm, finite: &[f64]) -> usize {
    let mut count = a.mult_at_x_zero().min(b.mult_at_x_zero()) + a.mult_at_y_zero().min(b.mult_at_y_zero());
    for &s in finite {
        // s = 0 is the [0 : 1] direction, already counted above.
        if s.abs() < 1e-12 {
            continue;
        }
        let s = Complex64::new(s, 0.0);
        count += a.mult_at(s, 1e-9).min(b.mult_at(s, 1e-9));
    }
    count
}

/// Vanishing orders and common tangents of the homogenized pair at
/// `(0, 1, 0)` and, when `m < 0`, at `(1, 0, 0)`.
pub fn local_analysis(p: &LaurentPoly) -> Result<Vec<LocalAnalysis>> {
    let (m, n) = (p.m(), p.n());
    let (g, gs) = build_pair(p)?;
    let total_g = (2 * n - m - 1) as usize;
    let total_gs = (n - m + m.abs() - 1) as usize;

    let (order_g, form_g) = lowest_form_z_point(&g, total_g);
    let (order_gs, form_gs) = lowest_form_z_point(&gs, total_gs);
    // The tangent directions t/w = r with U_{n-1}(r) = U_{m-1}(r) = 0.
    let candidates = common_zeros(n, m, 1e-9)?;
    let tangents_z = common_tangents(&form_g, &form_gs, &candidates);
    let mut out = vec![LocalAnalysis {
        point: SpecialPoint::ZOneAtInfinity,
        order_g,
        order_gstar: order_gs,
        common_tangents: tangents_z,
        multiplicity_lower_bound: order_g * order_gs + tangents_z,
    }];

    if m < 0 {
        let (order_g, form_g) = lowest_form_t_point(&g, total_g);
        let (order_gs, form_gs) = lowest_form_t_point(&gs, total_gs);
        // Both lowest forms are monomials in (z, w), so only the two
        // coordinate directions can be shared.
        let tangents = common_tangents(&form_g, &form_gs, &[]);
        out.push(LocalAnalysis {
            point: SpecialPoint::TOneAtInfinity,
            order_g,
            order_gstar: order_gs,
            common_tangents: tangents,
            multiplicity_lower_bound: order_g * order_gs + tangents,
        });
    }
    Ok(out)
}

/// `deg g · deg g*` minus the multiplicity bounds at the special points and
/// the `d - 1` common zeros on the line `z = 0`; always `2σ(m, n)`.
pub fn bezout_budget(p: &LaurentPoly) -> Result<i64> {
    let (m, n) = (p.m(), p.n());
    let (g, gs) = build_pair(p)?;
    let bezout = (g.total_degree().unwrap_or(0) * gs.total_degree().unwrap_or(0)) as i64;
    let local: i64 = local_analysis(p)?
        .iter()
        .map(|l| l.multiplicity_lower_bound as i64)
        .sum();
    let on_z_axis = gcd(n, m) - 1;
    let budget = bezout - local - on_z_axis;
    let sigma = sigma_bound(m, n)?;
    if budget != 2 * sigma {
        return Err(Error::DegreeAssertion(format!(
            "Bezout budget {budget} differs from 2σ = {}",
            2 * sigma
        )));
    }
    Ok(budget)
}

/// A common zero of `g` and `g*` with real `t ∈ (-1, 1)` and `|z| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CirclePair {
    pub t: f64,
    pub z: Complex64,
}

fn sylvester_matrix(a: &[Complex64], b: &[Complex64]) -> DMatrix<Complex64> {
    let da = a.len().saturating_sub(1);
    let db = b.len().saturating_sub(1);
    let size = da + db;
    let mut mat = DMatrix::<Complex64>::zeros(size, size);
    for row in 0..db {
        for (k, c) in a.iter().rev().enumerate() {
            mat[(row, row + k)] = *c;
        }
    }
    for row in 0..da {
        for (k, c) in b.iter().rev().enumerate() {
            mat[(db + row, row + k)] = *c;
        }
    }
    mat
}

/// Sylvester determinant `Res_t(a, b)` for coefficient vectors in `t`
/// (lowest first, formal degrees `a.len() - 1`, `b.len() - 1`).
pub fn sylvester_resultant(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    if a.len() + b.len() <= 2 {
        return Complex64::new(1.0, 0.0);
    }
    sylvester_matrix(a, b).determinant()
}

/// Whether `Res_t(g, g*)` vanishes identically in `z`, i.e. `g` and `g*`
/// share a factor depending on `t`.
///
/// Comparing resultant coefficients against a global magnitude bound is
/// hopeless once the degrees grow (Chebyshev coefficients grow like
/// `2^k`, and so does the dynamic range of the determinant). Instead the
/// Sylvester matrix, rows scaled to unit length, is tested for numerical
/// rank deficiency at a few generic points: a shared factor makes it
/// singular for every `z`, while otherwise it is singular only at the
/// finitely many roots of the resultant.
pub fn resultant_degenerate(g: &BivarPoly, gs: &BivarPoly) -> bool {
    const PROBES: [(f64, f64); 3] = [(0.93, 0.7), (1.07, 2.9), (1.0, 4.4)];
    let (a_len, b_len) = (g.deg_t().unwrap_or(0) + 1, gs.deg_t().unwrap_or(0) + 1);
    if a_len + b_len <= 2 {
        return false;
    }
    PROBES.iter().all(|&(r, phi)| {
        let z = Complex64::from_polar(r, phi);
        let mut mat = sylvester_matrix(&g.in_t(z, a_len), &gs.in_t(z, b_len));
        for mut row in mat.row_iter_mut() {
            let norm = row.norm();
            if norm > 0.0 {
                row /= Complex64::new(norm, 0.0);
            }
        }
        let sv = mat.singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        hi == 0.0 || lo <= 1e-10 * hi
    })
}

/// Coefficients (in `z`) of `Res_t(g, g*)`, recovered by sampling the
/// Sylvester determinant at roots of unity and inverting the DFT.
pub fn resultant_in_z(g: &BivarPoly, gs: &BivarPoly) -> Vec<Complex64> {
    resultant_with_noise(g, gs).0
}

/// As [`resultant_in_z`], plus an empirical rounding level. The DFT is
/// taken at twice the needed number of points; coefficients above the
/// degree bound are exactly zero in exact arithmetic, so their size shows
/// how much noise the determinants carry.
fn resultant_with_noise(g: &BivarPoly, gs: &BivarPoly) -> (Vec<Complex64>, f64) {
    let (a_len, b_len) = (g.deg_t().unwrap_or(0) + 1, gs.deg_t().unwrap_or(0) + 1);
    let bound = (a_len - 1) * gs.deg_z().unwrap_or(0) + (b_len - 1) * g.deg_z().unwrap_or(0);
    let samples = 2 * (bound + 1);
    let values: Vec<Complex64> = (0..samples)
        .map(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / samples as f64);
            sylvester_resultant(&g.in_t(z, a_len), &gs.in_t(z, b_len))
        })
        .collect();
    let mut coeffs: Vec<Complex64> = (0..samples)
        .map(|j| {
            let mut acc = ZERO;
            for (k, v) in values.iter().enumerate() {
                let angle = -2.0 * std::f64::consts::PI * ((j * k) % samples) as f64 / samples as f64;
                acc += v * Complex64::from_polar(1.0, angle);
            }
            acc / samples as f64
        })
        .collect();
    let noise = coeffs[bound + 1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    coeffs.truncate(bound + 1);
    (coeffs, noise)
}

/// Newton on the complex system `g = g* = 0` in `(t, z)`.
fn polish_pair(g: &BivarPoly, gs: &BivarPoly, mut t: Complex64, mut z: Complex64) -> Option<(Complex64, Complex64)> {
    for _ in 0..60 {
        let (f1, f1t, f1z) = g.eval_with_gradient(t, z);
        let (f2, f2t, f2z) = gs.eval_with_gradient(t, z);
        let det = f1t * f2z - f1z * f2t;
        if det.norm() == 0.0 || !det.re.is_finite() {
            return None;
        }
        let dt = (f1 * f2z - f1z * f2) / det;
        let dz = (f1t * f2 - f1 * f2t) / det;
        t -= dt;
        z -= dz;
        if !(t.re.is_finite() && z.re.is_finite()) {
            return None;
        }
        if dt.norm() + dz.norm() < 1e-15 * (1.0 + t.norm() + z.norm()) {
            break;
        }
    }
    Some((t, z))
}

/// The resultant route to the common zeros of `g` and `g*` on the real
/// slice: eliminate `t`, keep resultant roots near `|z| = 1`, recover `t`
/// from `g(·, z)`, then polish `(t, z)` jointly.
pub fn resultant_roots_on_circle(g: &BivarPoly, gs: &BivarPoly, tol: f64) -> Result<Vec<CirclePair>> {
    if resultant_degenerate(g, gs) {
        return Err(Error::DegenerateResultant);
    }
    let (res, noise) = resultant_with_noise(g, gs);
    let peak = res.iter().map(|c| c.norm()).fold(0.0, f64::max);
    // Coefficients at rounding level stand for roots at 0 or infinity.
    let floor = (1e-14 * peak).max(100.0 * noise);
    let hi = res.iter().rposition(|c| c.norm() > floor).unwrap_or(0);
    let lo = res.iter().position(|c| c.norm() > floor).unwrap_or(0);
    let core = Poly::new(res[lo..=hi].to_vec());
    if core.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let z_roots = core.roots()?;

    let scale = g.norm1().max(gs.norm1()).max(1.0);
    let t_len = g.deg_t().unwrap_or(0) + 1;
    let mut found: Vec<CirclePair> = Vec::new();
    for zc in z_roots.into_iter().filter(|z| (z.norm() - 1.0).abs() < 1e-2) {
        let g_t = Poly::new(g.in_t(zc, t_len));
        let t_roots = match g_t.degree() {
            Some(d) if d >= 1 => g_t.roots()?,
            _ => continue,
        };
        for tc in t_roots {
            let Some((t, z)) = polish_pair(g, gs, tc, zc) else { continue };
            let resid = g.eval(t, z).norm() + gs.eval(t, z).norm();
            if resid > 1e-9 * scale
                || (z.norm() - 1.0).abs() > tol
                || t.im.abs() > tol
                || t.re.abs() >= 1.0 - 1e-9
            {
                continue;
            }
            let cand = CirclePair { t: t.re, z };
            if !found
                .iter()
                .any(|f| (f.t - cand.t).abs() + (f.z - cand.z).norm() < 1e-7)
            {
                found.push(cand);
            }
        }
    }
    found.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.z.arg().total_cmp(&b.z.arg())));
    Ok(found)
}
