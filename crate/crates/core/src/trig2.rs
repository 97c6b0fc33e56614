//! Bivariate trigonometric polynomials `Σ c_ab e^{i(aθ + bs)}` and a
//! certified search for their zeros on a rectangle.
//!
//! Every difference quotient `(f(e^{i(s+θ)}) - f(e^{i(s-θ)})) / (2i sin θ)`
//! of a Laurent polynomial or of the numerator of a rational map on the
//! circle is such a polynomial, and its zeros away from `θ ∈ {0, π}` are
//! exactly the self-intersections. Working with the quotient removes the
//! trivial diagonal `θ₁ = θ₂`.
//!
//! The search subdivides the rectangle. A cell is discarded when the value
//! at its centre exceeds a bound on the variation over the cell, or when
//! the linearisation at the centre maps the cell to a parallelogram that
//! stays farther from 0 than the second-order remainder; it is
//! resolved when Newton from the centre converges and the Jacobian varies
//! little enough over an enlarged cell to make the map injective there
//! (a Kantorovich-style uniqueness test). Anything else is split.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub a: i32,
    pub b: i32,
    pub c: Complex64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrigPoly2 {
    terms: Vec<TrigTerm>,
}

/// Value and partial derivatives at a point.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    pub value: Complex64,
    pub d_theta: Complex64,
    pub d_s: Complex64,
}

impl Jet {
    /// Real 2x2 Jacobian of `(Re, Im)` with respect to `(θ, s)`.
    fn jacobian(&self) -> [[f64; 2]; 2] {
        [[self.d_theta.re, self.d_s.re], [self.d_theta.im, self.d_s.im]]
    }
}

fn inverse(j: [[f64; 2]; 2]) -> Option<[[f64; 2]; 2]> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some([[j[1][1] / det, -j[0][1] / det], [-j[1][0] / det, j[0][0] / det]])
}

/// Distance from `q` to the parallelogram `{α u + β v : |α|, |β| ≤ 1}`.
fn parallelogram_distance(q: [f64; 2], u: [f64; 2], v: [f64; 2]) -> f64 {
    let det = u[0] * v[1] - u[1] * v[0];
    if det != 0.0 {
        let alpha = (q[0] * v[1] - q[1] * v[0]) / det;
        let beta = (u[0] * q[1] - u[1] * q[0]) / det;
        if alpha.abs() <= 1.0 && beta.abs() <= 1.0 {
            return 0.0;
        }
    }
    let seg = |p0: [f64; 2], p1: [f64; 2]| {
        let d = [p1[0] - p0[0], p1[1] - p0[1]];
        let len2 = d[0] * d[0] + d[1] * d[1];
        let w = [q[0] - p0[0], q[1] - p0[1]];
        let t = if len2 > 0.0 { ((w[0] * d[0] + w[1] * d[1]) / len2).clamp(0.0, 1.0) } else { 0.0 };
        (w[0] - t * d[0]).hypot(w[1] - t * d[1])
    };
    let corner = |a: f64, b: f64| [a * u[0] + b * v[0], a * u[1] + b * v[1]];
    let (c1, c2, c3, c4) = (corner(1.0, 1.0), corner(-1.0, 1.0), corner(-1.0, -1.0), corner(1.0, -1.0));
    seg(c1, c2).min(seg(c2, c3)).min(seg(c3, c4)).min(seg(c4, c1))
}

fn frobenius(j: [[f64; 2]; 2]) -> f64 {
    (j[0][0].powi(2) + j[0][1].powi(2) + j[1][0].powi(2) + j[1][1].powi(2)).sqrt()
}

impl TrigPoly2 {
    /// Collects terms, merging equal frequencies and dropping exact zeros.
    pub fn from_terms(raw: impl IntoIterator<Item = TrigTerm>) -> Self {
        let mut map = std::collections::BTreeMap::<(i32, i32), Complex64>::new();
        for t in raw {
            *map.entry((t.a, t.b)).or_default() += t.c;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|((a, b), c)| TrigTerm { a, b, c })
            .collect();
        TrigPoly2 { terms }
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn norm1(&self) -> f64 {
        self.terms.iter().map(|t| t.c.norm()).sum()
    }

    fn max_freq(&self) -> (i32, i32) {
        self.terms
            .iter()
            .fold((0, 0), |(x, y), t| (x.max(t.a.abs()), y.max(t.b.abs())))
    }

    pub fn eval(&self, theta: f64, s: f64) -> Complex64 {
        self.jet(theta, s).value
    }

    pub fn jet(&self, theta: f64, s: f64) -> Jet {
        let mut jet = Jet {
            value: Complex64::new(0.0, 0.0),
            d_theta: Complex64::new(0.0, 0.0),
            d_s: Complex64::new(0.0, 0.0),
        };
        for t in &self.terms {
            let e = t.c * Complex64::cis(t.a as f64 * theta + t.b as f64 * s);
            jet.value += e;
            let ie = Complex64::new(-e.im, e.re);
            jet.d_theta += ie * t.a as f64;
            jet.d_s += ie * t.b as f64;
        }
        jet
    }

    /// Upper bound on `|f(x) - f(c)|` over the box of half-widths `(h_θ, h_s)`.
    fn variation(&self, h_theta: f64, h_s: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.c.norm() * (t.a.abs() as f64 * h_theta + t.b.abs() as f64 * h_s).min(2.0))
            .sum()
    }

    /// Upper bound on `|f(x) - f(c) - Df(c)(x - c)|` over the box.
    fn curvature_bound(&self, h_theta: f64, h_s: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let w = t.a.abs() as f64 * h_theta + t.b.abs() as f64 * h_s;
                t.c.norm() * 0.5 * w * w
            })
            .sum()
    }

    /// Upper bound on the Frobenius norm of `J(x) - J(c)` over the box.
    fn jacobian_variation(&self, h_theta: f64, h_s: f64) -> f64 {
        let (mut lt, mut ls) = (0.0, 0.0);
        for t in &self.terms {
            let w = (t.a.abs() as f64 * h_theta + t.b.abs() as f64 * h_s).min(2.0);
            lt += t.c.norm() * t.a.abs() as f64 * w;
            ls += t.c.norm() * t.b.abs() as f64 * w;
        }
        (lt * lt + ls * ls).sqrt()
    }

    /// Newton iteration in `(θ, s)`; steps are capped at `max_step`.
    pub fn newton(&self, mut x: [f64; 2], max_step: f64, iterations: usize) -> Option<[f64; 2]> {
        let floor = 4.0 * f64::EPSILON * self.norm1();
        for _ in 0..iterations {
            let jet = self.jet(x[0], x[1]);
            if jet.value.norm() <= floor {
                return Some(x);
            }
            let inv = inverse(jet.jacobian())?;
            let (fr, fi) = (jet.value.re, jet.value.im);
            let mut step = [inv[0][0] * fr + inv[0][1] * fi, inv[1][0] * fr + inv[1][1] * fi];
            let len = step[0].hypot(step[1]);
            if !len.is_finite() {
                return None;
            }
            if len > max_step {
                step = [step[0] * max_step / len, step[1] * max_step / len];
            }
            x = [x[0] - step[0], x[1] - step[1]];
            if len < 1e-15 * (1.0 + x[0].abs() + x[1].abs()) {
                return Some(x);
            }
        }
        let last = self.eval(x[0], x[1]).norm();
        (last <= 1e3 * floor).then_some(x)
    }
}

const DOMAIN_SLACK: f64 = 1e-9;

/// A rectangle in the `(θ, s)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub theta: (f64, f64),
    pub s: (f64, f64),
}

impl Rect {
    fn center(&self) -> [f64; 2] {
        [0.5 * (self.theta.0 + self.theta.1), 0.5 * (self.s.0 + self.s.1)]
    }

    fn half(&self) -> (f64, f64) {
        (0.5 * (self.theta.1 - self.theta.0), 0.5 * (self.s.1 - self.s.0))
    }

    fn contains(&self, x: [f64; 2], slack: f64) -> bool {
        x[0] >= self.theta.0 - slack
            && x[0] <= self.theta.1 + slack
            && x[1] >= self.s.0 - slack
            && x[1] <= self.s.1 + slack
    }

    fn split(&self) -> [Rect; 4] {
        let [ct, cs] = self.center();
        [
            Rect { theta: (self.theta.0, ct), s: (self.s.0, cs) },
            Rect { theta: (ct, self.theta.1), s: (self.s.0, cs) },
            Rect { theta: (self.theta.0, ct), s: (cs, self.s.1) },
            Rect { theta: (ct, self.theta.1), s: (cs, self.s.1) },
        ]
    }
}

/// Whether `x` belongs to `rect`, with `slack` on interior edges and
/// [`DOMAIN_SLACK`] on edges shared with the domain boundary.
fn claims(rect: &Rect, domain: &Rect, x: [f64; 2], slack: f64) -> bool {
    let side = |edge: f64, outer: f64| if edge == outer { DOMAIN_SLACK } else { slack };
    x[0] >= rect.theta.0 - side(rect.theta.0, domain.theta.0)
        && x[0] <= rect.theta.1 + side(rect.theta.1, domain.theta.1)
        && x[1] >= rect.s.0 - side(rect.s.0, domain.s.0)
        && x[1] <= rect.s.1 + side(rect.s.1, domain.s.1)
}

#[derive(Debug, Clone)]
pub struct SearchParams {
    /// Initial grid is `grid × grid` cells.
    pub grid: usize,
    pub max_depth: u32,
    pub max_cells: usize,
    /// Cells lying entirely in `θ < theta_floor` or `θ > π - theta_floor`
    /// are dropped unexamined.
    pub theta_floor: f64,
    /// Zeros closer than this (max-norm) are merged.
    pub merge: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub theta: f64,
    pub s: f64,
    /// `true` when the zero passed the uniqueness test; `false` for zeros
    /// found only by Newton from a cell at maximum depth.
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub zeros: Vec<Zero>,
    pub cells: usize,
    /// Cells at maximum depth where Newton found nothing.
    pub unresolved: usize,
}

/// All zeros of `f` in `domain` (closed), up to merging.
pub fn find_zeros(f: &TrigPoly2, domain: Rect, params: &SearchParams) -> Result<SearchOutcome> {
    if f.is_zero() {
        return Err(Error::MultipleCrossingOverflow);
    }
    let (ft, fs) = f.max_freq();
    let scale = f.norm1();
    let accept = 1e-12 * scale;
    let mut zeros: Vec<Zero> = Vec::new();
    let mut unresolved = 0;
    let mut cells = 0;

    let n = params.grid.max(1);
    let dt = (domain.theta.1 - domain.theta.0) / n as f64;
    let ds = (domain.s.1 - domain.s.0) / n as f64;
    // Grid lines, with the outer ones exactly on the domain edges.
    let edge = |lo: f64, hi: f64, step: f64, k: usize| if k == n { hi } else { lo + k as f64 * step };
    let mut stack: Vec<(Rect, u32)> = Vec::with_capacity(n * n);
    for i in (0..n).rev() {
        for j in (0..n).rev() {
            let rect = Rect {
                theta: (edge(domain.theta.0, domain.theta.1, dt, i), edge(domain.theta.0, domain.theta.1, dt, i + 1)),
                s: (edge(domain.s.0, domain.s.1, ds, j), edge(domain.s.0, domain.s.1, ds, j + 1)),
            };
            stack.push((rect, 0));
        }
    }

    let push_zero = |zeros: &mut Vec<Zero>, z: Zero| {
        if let Some(old) = zeros
            .iter_mut()
            .find(|o| (o.theta - z.theta).abs().max((o.s - z.s).abs()) < params.merge)
        {
            old.certified |= z.certified;
        } else {
            zeros.push(z);
        }
    };

    while let Some((rect, depth)) = stack.pop() {
        cells += 1;
        if cells > params.max_cells {
            return Err(Error::MultipleCrossingOverflow);
        }
        let floor = params.theta_floor;
        if rect.theta.1 < floor || rect.theta.0 > std::f64::consts::PI - floor {
            continue;
        }
        let c = rect.center();
        let (ht, hs) = rect.half();
        let jet = f.jet(c[0], c[1]);
        let value = jet.value.norm();
        let jac = jet.jacobian();
        let slack = 1e-15 * scale;
        if value > f.variation(ht, hs) * (1.0 + 1e-12) + slack {
            continue;
        }
        // Exact image of the box under the linearisation, widened by the
        // second-order remainder.
        let gap = parallelogram_distance(
            [-jet.value.re, -jet.value.im],
            [jac[0][0] * ht, jac[1][0] * ht],
            [jac[0][1] * hs, jac[1][1] * hs],
        );
        if gap > f.curvature_bound(ht, hs) * (1.0 + 1e-12) + slack {
            continue;
        }

        // Uniqueness on the doubled cell, then existence by Newton.
        let (bt, bs) = (2.0 * ht, 2.0 * hs);
        let big = Rect { theta: (c[0] - bt, c[0] + bt), s: (c[1] - bs, c[1] + bs) };
        if let Some(inv) = inverse(jac) {
            let injective = frobenius(inv) * f.jacobian_variation(bt, bs) < 1.0;
            if injective {
                let step_cap = 4.0 * bt.hypot(bs);
                match f.newton(c, step_cap, 40) {
                    Some(x) if big.contains(x, 0.0) && f.eval(x[0], x[1]).norm() <= accept => {
                        // Neighbouring cells share edges, so a tight slack
                        // suffices inside; on the domain edge there is no
                        // neighbour, and zeros lying exactly on it come out
                        // of Newton a little outside when ill-conditioned.
                        if claims(&rect, &domain, x, 1e-12 * (1.0 + ft as f64 + fs as f64)) {
                            push_zero(&mut zeros, Zero { theta: x[0], s: x[1], certified: true });
                        }
                        continue;
                    }
                    _ => {
                        // Injective but Newton left the box: by the same
                        // contraction bound there is no zero in the cell
                        // unless Newton was merely slow; split to be safe.
                    }
                }
            }
        }

        if depth >= params.max_depth {
            let step_cap = 4.0 * ht.hypot(hs).max(1e-12);
            match f.newton(c, step_cap, 80) {
                Some(x) if big.contains(x, 0.0) && f.eval(x[0], x[1]).norm() <= 1e-9 * scale => {
                    if claims(&rect, &domain, x, 0.0) {
                        push_zero(&mut zeros, Zero { theta: x[0], s: x[1], certified: false });
                    }
                }
                _ => unresolved += 1,
            }
            continue;
        }
        for child in rect.split().into_iter().rev() {
            stack.push((child, depth + 1));
        }
    }

    zeros.sort_by(|a, b| a.s.total_cmp(&b.s).then(a.theta.total_cmp(&b.theta)));
    Ok(SearchOutcome { zeros, cells, unresolved })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params() -> SearchParams {
        SearchParams { grid: 8, max_depth: 30, max_cells: 200_000, theta_floor: 0.0, merge: 1e-9 }
    }

    #[test]
    fn jet_matches_difference_quotients() {
        let f = TrigPoly2::from_terms([
            TrigTerm { a: 2, b: -1, c: Complex64::new(0.3, 0.4) },
            TrigTerm { a: 0, b: 3, c: Complex64::new(-1.0, 0.2) },
            TrigTerm { a: -1, b: 1, c: Complex64::new(0.5, 0.0) },
        ]);
        let (t, s, h) = (0.7, -1.3, 1e-6);
        let jet = f.jet(t, s);
        let dt = (f.eval(t + h, s) - f.eval(t - h, s)) / (2.0 * h);
        let ds = (f.eval(t, s + h) - f.eval(t, s - h)) / (2.0 * h);
        assert!((jet.d_theta - dt).norm() < 1e-8);
        assert!((jet.d_s - ds).norm() < 1e-8);
    }

    #[test]
    fn parallelogram_distances() {
        let (u, v) = ([1.0, 0.0], [0.0, 2.0]);
        assert_eq!(parallelogram_distance([0.5, -1.0], u, v), 0.0);
        assert!((parallelogram_distance([3.0, 0.0], u, v) - 2.0).abs() < 1e-15);
        assert!((parallelogram_distance([4.0, 6.0], u, v) - 5.0).abs() < 1e-15);
        // Degenerate (segment) case.
        assert!((parallelogram_distance([0.0, 1.0], u, [2.0, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn merges_duplicate_frequencies() {
        let one = Complex64::new(1.0, 0.0);
        let f = TrigPoly2::from_terms([
            TrigTerm { a: 1, b: 1, c: one },
            TrigTerm { a: 1, b: 1, c: -one },
            TrigTerm { a: 0, b: 0, c: one },
        ]);
        assert_eq!(f.terms().len(), 1);
    }

    #[test]
    fn finds_product_of_sines_zeros() {
        // (e^{iθ} - e^{-iθ})/2i · 1 + i·(e^{is} - e^{-is})/2i = sin θ + i sin s
        // vanishes at θ, s ∈ {0, π} only.
        let half = Complex64::new(0.0, -0.5);
        let f = TrigPoly2::from_terms([
            TrigTerm { a: 1, b: 0, c: half },
            TrigTerm { a: -1, b: 0, c: -half },
            TrigTerm { a: 0, b: 1, c: half * Complex64::i() },
            TrigTerm { a: 0, b: -1, c: -half * Complex64::i() },
        ]);
        let dom = Rect { theta: (-0.5, PI + 0.5), s: (-0.5, PI + 0.5) };
        let out = find_zeros(&f, dom, &params()).unwrap();
        assert_eq!(out.zeros.len(), 4, "{out:?}");
        assert!(out.zeros.iter().all(|z| z.certified));
        assert_eq!(out.unresolved, 0);
    }

    #[test]
    fn zero_free_polynomial_has_no_zeros() {
        let f = TrigPoly2::from_terms([
            TrigTerm { a: 0, b: 0, c: Complex64::new(2.0, 0.0) },
            TrigTerm { a: 3, b: -2, c: Complex64::new(0.9, 0.9) },
        ]);
        let dom = Rect { theta: (0.0, PI), s: (0.0, 2.0 * PI) };
        let out = find_zeros(&f, dom, &params()).unwrap();
        assert!(out.zeros.is_empty());
    }

    #[test]
    fn curve_of_zeros_overflows() {
        // sin s vanishes along whole lines.
        let half = Complex64::new(0.0, -0.5);
        let f = TrigPoly2::from_terms([
            TrigTerm { a: 0, b: 1, c: half },
            TrigTerm { a: 0, b: -1, c: -half },
        ]);
        let dom = Rect { theta: (0.0, PI), s: (-0.5, 0.5) };
        let p = SearchParams { max_cells: 20_000, ..params() };
        assert_eq!(find_zeros(&f, dom, &p), Err(Error::MultipleCrossingOverflow));
    }
}
