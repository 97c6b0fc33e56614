//! Closed curves `θ ↦ γ(θ)` on which the crossing machinery runs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::laurent::LaurentPoly;
use crate::trig2::{TrigPoly2, TrigTerm};

/// A smooth `2π`-periodic planar curve.
///
/// The chord quotient `D(θ, s)` is a trigonometric polynomial whose zeros
/// with `0 < θ < π` are exactly the parameter pairs `{s - θ, s + θ}` at
/// which the curve meets itself: for Laurent polynomials
/// `γ(s + θ) - γ(s - θ) = 2i sin θ · D(θ, s)`, and for rational maps the
/// same holds up to a factor that never vanishes on the circle.
pub trait ClosedCurve: Sync {
    fn point(&self, theta: f64) -> Complex64;
    fn velocity(&self, theta: f64) -> Complex64;
    fn acceleration(&self, theta: f64) -> Complex64;
    fn chord_quotient(&self) -> TrigPoly2;
    /// Magnitude used to make tolerances relative.
    fn scale(&self) -> f64;
    /// Largest frequency present; sets sampling density.
    fn bandwidth(&self) -> usize;
    /// An upper bound on `|d^k γ/dθ^k|` over the whole circle, if known.
    fn derivative_bound(&self, _order: u32) -> Option<f64> {
        None
    }
}

/// A Laurent polynomial restricted to the circle `|z| = r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentCurve {
    pub poly: LaurentPoly,
    pub r: f64,
}

impl LaurentCurve {
    pub fn new(poly: LaurentPoly, r: f64) -> Self {
        LaurentCurve { poly, r }
    }
}

/// Terms of `a · U_{k-1}(cos θ) · e^{i b s}` written as exponentials in θ:
/// `sin(kθ)/sin θ = sgn(k) Σ_{j<|k|} e^{i(|k|-1-2j)θ}`.
pub(crate) fn push_dirichlet(out: &mut Vec<TrigTerm>, k: i64, b: i64, a: Complex64) {
    if k == 0 {
        return;
    }
    let sign = if k > 0 { 1.0 } else { -1.0 };
    let ak = k.abs();
    for j in 0..ak {
        out.push(TrigTerm { a: (ak - 1 - 2 * j) as i32, b: b as i32, c: a * sign });
    }
}

impl ClosedCurve for LaurentCurve {
    fn point(&self, theta: f64) -> Complex64 {
        self.poly.eval_circle(theta, self.r)
    }

    fn velocity(&self, theta: f64) -> Complex64 {
        self.poly.tangent(theta, self.r)
    }

    fn acceleration(&self, theta: f64) -> Complex64 {
        self.poly.acceleration(theta, self.r)
    }

    fn chord_quotient(&self) -> TrigPoly2 {
        let mut terms = Vec::new();
        for (k, a) in self.poly.terms() {
            push_dirichlet(&mut terms, k, k, a * self.r.powi(k as i32));
        }
        TrigPoly2::from_terms(terms)
    }

    fn scale(&self) -> f64 {
        self.poly.scale(self.r)
    }

    fn bandwidth(&self) -> usize {
        self.poly.m().abs().max(self.poly.n().abs()).max(1) as usize
    }

    fn derivative_bound(&self, order: u32) -> Option<f64> {
        Some(
            self.poly
                .terms()
                .map(|(k, a)| a.norm() * (k.abs() as f64).powi(order as i32) * self.r.powi(k as i32))
                .sum(),
        )
    }
}
