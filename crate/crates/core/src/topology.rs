//! Winding numbers, rotation numbers and Whitney's signed-crossing count.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::curve::{ClosedCurve, LaurentCurve};
use crate::error::{Error, Result};
use crate::intersect::{angle_gap, classify_crossing, classify_normality, NormalityClass, SelfIntersection};
use crate::intersect::{golden_min, zero_speed_angles};
use crate::laurent::LaurentPoly;
use crate::poly::Poly;

const MAX_DEPTH: u32 = 30;

fn increment(from: Complex64, to: Complex64, a: Complex64) -> f64 {
    ((to - a) / (from - a)).arg()
}

fn to_integer(total: f64) -> Result<i64> {
    let turns = total / TAU;
    let k = turns.round();
    if (turns - k).abs() >= 0.25 {
        return Err(Error::Invalid(format!("winding sum {turns} is not near an integer")));
    }
    Ok(k as i64)
}

/// Winding number of the closed polyline through `samples` about `a`.
pub fn winding_number(samples: &[Complex64], a: Complex64) -> Result<i64> {
    if samples.len() < 2 {
        return Err(Error::Invalid("a closed polyline needs at least two samples".into()));
    }
    let size = samples.iter().map(|s| (s - a).norm()).fold(0.0, f64::max);
    let floor = 1e-14 * size.max(1.0);
    let mut total = 0.0;
    for (i, &p) in samples.iter().enumerate() {
        let q = samples[(i + 1) % samples.len()];
        if segment_distance(p, q, a) <= floor {
            return Err(Error::PointOnCurve(segment_distance(p, q, a)));
        }
        total += increment(p, q, a);
    }
    to_integer(total)
}

fn segment_distance(p: Complex64, q: Complex64, a: Complex64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (a - p).norm();
    }
    let u = (((a - p) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p + d * u - a).norm()
}

/// Winding number about `a` of the closed curve `θ ↦ f(θ)`, `θ ∈ [0, 2π]`.
///
/// Starts from `samples` equal steps and bisects any step whose argument
/// increment exceeds `π/2`. Fails with `PointOnCurve` when a sample comes
/// within `floor` of `a`.
pub fn winding_of(f: impl Fn(f64) -> Complex64, a: Complex64, samples: usize, floor: f64) -> Result<i64> {
    winding_of_smooth(f, a, samples, floor, 0.0)
}

/// As [`winding_of`], given `bound ≥ max |f''|`.
///
/// An arc over a step of length `h` stays within `bound·h²/8` of its
/// chord, so a step is also bisected while `a` is that close to the chord;
/// otherwise arc and chord are homotopic in `C ∖ {a}` and the chord's
/// increment is exact. Without this, an arc can loop around `a` between
/// two samples whose chord passes on the other side (sharp tips).
pub fn winding_of_smooth(
    f: impl Fn(f64) -> Complex64,
    a: Complex64,
    samples: usize,
    floor: f64,
    bound: f64,
) -> Result<i64> {
    let n = samples.max(8);
    let step = TAU / n as f64;
    let check = |w: Complex64| -> Result<Complex64> {
        let d = (w - a).norm();
        if d <= floor {
            Err(Error::PointOnCurve(d))
        } else {
            Ok(w)
        }
    };
    let seg = Segment { f: &f, check: &check, a, bound };
    let mut total = 0.0;
    let mut prev = check(f(0.0))?;
    let first = prev;
    for i in 1..=n {
        let theta = i as f64 * step;
        let next = if i == n { first } else { check(f(theta))? };
        total += seg.refine(theta - step, theta, prev, next, 0)?;
        prev = next;
    }
    to_integer(total)
}

struct Segment<'a, F, C> {
    f: &'a F,
    check: &'a C,
    a: Complex64,
    bound: f64,
}

impl<F, C> Segment<'_, F, C>
where
    F: Fn(f64) -> Complex64,
    C: Fn(Complex64) -> Result<Complex64>,
{
    fn refine(&self, lo: f64, hi: f64, w_lo: Complex64, w_hi: Complex64, depth: u32) -> Result<f64> {
        let inc = increment(w_lo, w_hi, self.a);
        let h = hi - lo;
        let near = self.bound > 0.0 && segment_distance(w_lo, w_hi, self.a) <= self.bound * h * h / 8.0;
        if (inc.abs() <= FRAC_PI_2 && !near) || depth >= MAX_DEPTH {
            return Ok(inc);
        }
        let mid = 0.5 * (lo + hi);
        let w_mid = (self.check)((self.f)(mid))?;
        Ok(self.refine(lo, mid, w_lo, w_mid, depth + 1)? + self.refine(mid, hi, w_mid, w_hi, depth + 1)?)
    }
}

/// Winding number of a [`ClosedCurve`] about `a`.
pub fn curve_winding<C: ClosedCurve + ?Sized>(curve: &C, a: Complex64) -> Result<i64> {
    let floor = 1e-13 * curve.scale().max(1.0);
    let bound = curve.derivative_bound(2).unwrap_or(0.0);
    winding_of_smooth(|th| curve.point(th), a, 16 * curve.bandwidth() + 16, floor, bound)
}

/// Rotation number of a regular closed curve: winding of `γ'` about 0.
pub fn rotation_of<C: ClosedCurve + ?Sized>(curve: &C, cfg: &Tolerances) -> Result<i64> {
    if let Some(&theta) = zero_speed_angles(curve, cfg).first() {
        return Err(Error::NonRegular { theta, speed: curve.velocity(theta).norm() });
    }
    let bound = curve.derivative_bound(3).unwrap_or(0.0);
    winding_of_smooth(|th| curve.velocity(th), Complex64::new(0.0, 0.0), 16 * curve.bandwidth() + 16, 0.0, bound)
}

pub fn rotation_number_direct(p: &LaurentPoly, r: f64, cfg: &Tolerances) -> Result<i64> {
    rotation_of(&LaurentCurve::new(p.clone(), r), cfg)
}

/// `m + #{roots of Σ k a_k z^{k-m} in |z| < r}`: the zeros inside the disk
/// of `z p'(z)`, which is the tangent up to the factor `i`.
pub fn rotation_number_argprinciple(p: &LaurentPoly, r: f64) -> Result<i64> {
    let m = p.m();
    let coeffs: Vec<Complex64> = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| a * (m + i as i64) as f64)
        .collect();
    let f = Poly::new(coeffs);
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let roots = f.roots()?;
    let mut inside = 0;
    for z in roots {
        let distance = (z.norm() - r).abs();
        if distance < 1e-8 * r {
            return Err(Error::RootNearCircle { distance });
        }
        if z.norm() < r {
            inside += 1;
        }
    }
    Ok(m + inside)
}

/// Both methods, required to agree.
pub fn rotation_number(p: &LaurentPoly, r: f64, cfg: &Tolerances) -> Result<i64> {
    let direct = rotation_number_direct(p, r, cfg)?;
    let argument = rotation_number_argprinciple(p, r)?;
    if direct != argument {
        return Err(Error::RotationMismatch { direct, argument });
    }
    Ok(direct)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhitneyLedger {
    pub n_plus: i64,
    pub n_minus: i64,
    pub mu: i64,
    pub rotation: i64,
    pub base_theta: f64,
    /// The crossings with signs relative to `base_theta`.
    pub crossings: Vec<SelfIntersection>,
}

impl WhitneyLedger {
    pub fn holds(&self) -> bool {
        self.rotation == self.n_plus - self.n_minus + self.mu
    }
}

/// Parameter of the point farthest from the origin; it lies on the
/// boundary of the unbounded complementary component.
pub fn outermost_parameter<C: ClosedCurve + ?Sized>(curve: &C) -> f64 {
    let n = 64 * curve.bandwidth() + 64;
    let step = TAU / n as f64;
    let best = (0..n)
        .map(|i| i as f64 * step)
        .max_by(|a, b| curve.point(*a).norm().total_cmp(&curve.point(*b).norm()))
        .unwrap_or(0.0);
    // Golden-section on -|γ| around the best sample.
    let (mut a, mut b) = (best - step, best + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if curve.point(c).norm() > curve.point(d).norm() {
            b = d;
        } else {
            a = c;
        }
    }
    (0.5 * (a + b)).rem_euclid(TAU)
}

/// Distance from `γ(base)` to the nearest other strand of the curve: the
/// smallest local minimum of `|γ(θ) − γ(base)|` away from `base` itself.
fn strand_gap<C: ClosedCurve + ?Sized>(curve: &C, base: f64) -> f64 {
    let w0 = curve.point(base);
    let n = 256 * curve.bandwidth() + 256;
    let step = TAU / n as f64;
    let dist = |th: f64| (curve.point(th) - w0).norm();
    let d: Vec<f64> = (0..n).map(|i| dist(base + i as f64 * step)).collect();
    let mut gap = f64::INFINITY;
    // Index 0 is the base; its neighbours belong to the base's own arc.
    for i in 2..n - 1 {
        if d[i] <= d[i - 1] && d[i] <= d[i + 1] {
            let th = base + i as f64 * step;
            let (_, v) = golden_min(dist, th - step, th + step);
            gap = gap.min(v);
        }
    }
    gap
}

/// `μ`: sum of the winding numbers about two points on either side of the
/// curve near `γ(base)`. The offset starts below both the local radius of
/// curvature and the distance to any other strand, then halves until two
/// consecutive values agree.
fn base_mu<C: ClosedCurve + ?Sized>(curve: &C, base: f64) -> Result<i64> {
    let w0 = curve.point(base);
    let t = curve.velocity(base);
    let acc = curve.acceleration(base);
    let normal = Complex64::i() * t / t.norm();
    let bend = (t.conj() * acc).im.abs();
    let radius = if bend > 0.0 { t.norm().powi(3) / bend } else { f64::INFINITY };
    let mut eps = (1e-3 * radius.min(curve.scale())).min(0.25 * strand_gap(curve, base));
    let mut last: Option<i64> = None;
    for _ in 0..40 {
        let left = curve_winding(curve, w0 + normal * eps);
        let right = curve_winding(curve, w0 - normal * eps);
        match (left, right) {
            (Ok(l), Ok(r)) => {
                let mu = l + r;
                if last == Some(mu) {
                    return Ok(mu);
                }
                last = Some(mu);
            }
            (Err(Error::PointOnCurve(_)), _) | (_, Err(Error::PointOnCurve(_))) => {}
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
        eps *= 0.5;
    }
    last.ok_or(Error::BasePointNearCrossing)
}

/// Whitney's ledger for a curve whose crossings are already known.
pub fn whitney_ledger<C: ClosedCurve + ?Sized>(
    curve: &C,
    crossings: &[SelfIntersection],
    rotation: i64,
    cfg: &Tolerances,
) -> Result<WhitneyLedger> {
    let base = outermost_parameter(curve);
    if crossings
        .iter()
        .any(|x| angle_gap(x.theta1, base) < 1e-6 || angle_gap(x.theta2, base) < 1e-6)
    {
        return Err(Error::BasePointNearCrossing);
    }
    let mu = base_mu(curve, base)?;
    let signed: Vec<SelfIntersection> = crossings.iter().map(|x| classify_crossing(curve, x, base, cfg)).collect();
    let mut n_plus = 0;
    let mut n_minus = 0;
    for x in &signed {
        match x.sign {
            Some(1) => n_plus += 1,
            Some(_) => n_minus += 1,
            None => return Err(Error::NotNormal("tangential crossing".into())),
        }
    }
    let ledger = WhitneyLedger { n_plus, n_minus, mu, rotation, base_theta: base, crossings: signed };
    if !ledger.holds() {
        return Err(Error::WhitneyMismatch { rotation, n_plus, n_minus, mu });
    }
    Ok(ledger)
}

/// Full check for `p` on `|z| = r`; the curve must be normal.
pub fn whitney_check(p: &LaurentPoly, r: f64, cfg: &Tolerances) -> Result<WhitneyLedger> {
    let report = classify_normality(p, r, cfg)?;
    if report.class != NormalityClass::Normal {
        return Err(Error::NotNormal(format!("{:?}", report.class)));
    }
    let rotation = rotation_number(p, r, cfg)?;
    whitney_ledger(&LaurentCurve::new(p.clone(), r), &report.crossings, rotation, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub t: f64,
    /// `None` when the curve passes (numerically) through 0.
    pub winding: Option<i64>,
    pub min_modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyProfile {
    pub points: Vec<ProfilePoint>,
    /// `Σ |N(t_{i+1}) - N(t_i)|` over consecutive defined values; a lower
    /// bound on the number of zeros `(t, z)` of the family.
    pub total_variation: i64,
}

/// Winding numbers about 0 of `γ_t(e^{iθ}) = family(t, θ)` along `t_grid`.
///
/// `bandwidth` is the largest frequency in θ; `tol` is relative to the
/// largest modulus on each curve.
pub fn family_winding_profile(
    family: impl Fn(f64, f64) -> Complex64 + Sync,
    bandwidth: usize,
    t_grid: &[f64],
    tol: f64,
) -> FamilyProfile {
    let n = 64 * bandwidth + 64;
    let points: Vec<ProfilePoint> = t_grid
        .iter()
        .map(|&t| {
            let moduli: Vec<f64> = (0..n).map(|i| family(t, TAU * i as f64 / n as f64).norm()).collect();
            let min = moduli.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = moduli.iter().cloned().fold(0.0, f64::max);
            let winding = if min < tol * max.max(f64::MIN_POSITIVE) {
                None
            } else {
                winding_of(|th| family(t, th), Complex64::new(0.0, 0.0), 4 * bandwidth + 16, 0.5 * tol * max).ok()
            };
            ProfilePoint { t, winding, min_modulus: min }
        })
        .collect();
    let defined: Vec<i64> = points.iter().filter_map(|p| p.winding).collect();
    let total_variation = defined.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    FamilyProfile { points, total_variation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lp(terms: &[(i64, f64)]) -> LaurentPoly {
        LaurentPoly::from_terms(&terms.iter().map(|&(k, a)| (k, c(a, 0.0))).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn polyline_windings() {
        let circle: Vec<_> = (0..100).map(|i| Complex64::cis(TAU * i as f64 / 100.0)).collect();
        assert_eq!(winding_number(&circle, c(0.0, 0.0)).unwrap(), 1);
        assert_eq!(winding_number(&circle, c(0.3, -0.2)).unwrap(), 1);
        assert_eq!(winding_number(&circle, c(3.0, 0.0)).unwrap(), 0);
        assert!(matches!(winding_number(&circle, circle[7]), Err(Error::PointOnCurve(_))));
        let backwards: Vec<_> = circle.iter().rev().cloned().collect();
        assert_eq!(winding_number(&backwards, c(0.0, 0.0)).unwrap(), -1);
    }

    #[test]
    fn deltoid_windings() {
        let zeta = c(0.2, -0.3);
        let gamma = |r: f64| move |t: f64| 2.0 * r * Complex64::cis(t) + Complex64::cis(-2.0 * t);
        assert_eq!(winding_of(gamma(0.0), zeta, 8, 1e-12).unwrap(), -2);
        assert_eq!(winding_of(gamma(1.0), zeta, 8, 1e-12).unwrap(), 1);
    }

    #[test]
    fn refinement_does_not_change_winding() {
        let f = |t: f64| Complex64::cis(3.0 * t) + 0.4 * Complex64::cis(-t);
        let a = c(0.1, 0.05);
        let base = winding_of(f, a, 8, 1e-12).unwrap();
        for n in [16, 32, 64, 128] {
            assert_eq!(winding_of(f, a, n, 1e-12).unwrap(), base);
        }
    }

    #[test]
    fn rotation_of_monomials_and_endpoints() {
        let cfg = Tolerances::default();
        assert_eq!(rotation_number(&lp(&[(4, 1.0)]), 1.0, &cfg).unwrap(), 4);
        assert_eq!(rotation_number(&lp(&[(-3, 1.0)]), 1.0, &cfg).unwrap(), -3);
        assert_eq!(rotation_number(&lp(&[(2, 1.0), (5, 0.01)]), 1.0, &cfg).unwrap(), 2);
        assert_eq!(rotation_number(&lp(&[(2, 0.01), (5, 1.0)]), 1.0, &cfg).unwrap(), 5);
        assert_eq!(rotation_number(&lp(&[(-2, 1.0), (3, 0.01)]), 1.0, &cfg).unwrap(), -2);
    }

    #[test]
    fn cusp_is_not_regular() {
        let cfg = Tolerances::default();
        assert!(matches!(
            rotation_number_direct(&lp(&[(1, 1.0), (-1, 1.0)]), 1.0, &cfg),
            Err(Error::NonRegular { .. })
        ));
        assert!(matches!(
            rotation_number_argprinciple(&lp(&[(1, 1.0), (-1, 1.0)]), 1.0),
            Err(Error::RootNearCircle { .. })
        ));
    }

    #[test]
    fn methods_agree_on_random_curves() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let cfg = Tolerances::default();
        let mut checked = 0;
        while checked < 60 {
            let m = rng.random_range(-2..=1);
            let n = rng.random_range(m.max(1)..=3);
            let terms: Vec<_> = (m..=n)
                .map(|k| (k, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
                .collect();
            let p = LaurentPoly::from_terms(&terms).unwrap();
            let Ok(direct) = rotation_number_direct(&p, 1.0, &cfg) else { continue };
            let Ok(arg) = rotation_number_argprinciple(&p, 1.0) else { continue };
            assert_eq!(direct, arg, "{p}");
            assert!(p.m() <= direct && direct <= p.n());
            checked += 1;
        }
    }

    #[test]
    fn limacon_ledger() {
        let cfg = Tolerances::default();
        let ledger = whitney_check(&lp(&[(2, 1.0), (1, 1.0)]), 1.0, &cfg).unwrap();
        assert_eq!((ledger.rotation, ledger.n_plus, ledger.n_minus, ledger.mu), (2, 1, 0, 1));
    }

    #[test]
    fn figure_eight_ledger() {
        let cfg = Tolerances::default();
        let p = lp(&[(1, 0.5), (-1, 0.5), (2, 0.25), (-2, -0.25)]);
        let ledger = whitney_check(&p, 1.0, &cfg).unwrap();
        assert_eq!(ledger.rotation, 0);
        assert_eq!(ledger.n_plus + ledger.n_minus, 1);
        assert!(ledger.holds());
        assert_eq!(ledger.mu.abs(), 1);
    }

    #[test]
    fn ledger_on_random_normal_curves() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let cfg = Tolerances::default();
        let mut done = 0;
        while done < 30 {
            let m = rng.random_range(-3..=2);
            let n = rng.random_range(m.max(1) + 1..=4);
            let terms: Vec<_> = (m..=n)
                .map(|k| (k, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
                .collect();
            let p = LaurentPoly::from_terms(&terms).unwrap();
            match whitney_check(&p, 1.0, &cfg) {
                Ok(ledger) => {
                    assert_eq!(ledger.mu.abs(), 1);
                    assert!((ledger.n_plus - ledger.n_minus).abs() <= p.m().abs().max(p.n().abs()) + 1);
                    done += 1;
                }
                Err(Error::NotNormal(_)) | Err(Error::MultipleCrossingOverflow) => {}
                Err(e) => panic!("{p}: {e:?}"),
            }
        }
    }

    #[test]
    fn base_choice_does_not_change_total() {
        // Moving the base point to another parameter changes individual
        // signs but the Whitney total with the matching μ is invariant.
        let cfg = Tolerances::default();
        let p = lp(&[(3, 1.0), (1, 0.9), (-1, 0.3)]);
        let curve = LaurentCurve::new(p.clone(), 1.0);
        let ledger = whitney_check(&p, 1.0, &cfg).unwrap();
        let crossings = &ledger.crossings;
        for base in [0.3, 1.7, 4.0] {
            if crossings.iter().any(|x| angle_gap(x.theta1, base) < 1e-3 || angle_gap(x.theta2, base) < 1e-3) {
                continue;
            }
            let signed: i64 = crossings
                .iter()
                .map(|x| classify_crossing(&curve, x, base, &cfg).sign.unwrap() as i64)
                .sum();
            let mu = base_mu(&curve, base).unwrap();
            assert_eq!(signed + mu, ledger.rotation);
        }
    }

    #[test]
    fn profile_of_shrinking_circle() {
        // γ_t(θ) = e^{iθ} + (t - 0.5) 4: winding 1 for |t - 0.5| < 1/4.
        let family = |t: f64, th: f64| Complex64::cis(th) + c(4.0 * (t - 0.5), 0.0);
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let profile = family_winding_profile(family, 1, &grid, 1e-9);
        assert_eq!(profile.total_variation, 2);
        assert_eq!(profile.points[10].winding, Some(1));
        assert_eq!(profile.points[0].winding, Some(0));
        assert_eq!(profile.points[5].winding, None);
    }
}
