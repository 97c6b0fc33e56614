//! Self-intersections of closed curves and the normality classification.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::curve::{ClosedCurve, LaurentCurve};
use crate::error::{Error, Result};
use crate::laurent::{balance_gap, exceptional_class, ExceptionalClass, LaurentPoly};
use crate::trig2::{find_zeros, Rect, SearchParams};

/// An unordered pair of parameters with a common image point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfIntersection {
    pub theta1: f64,
    pub theta2: f64,
    pub w: Complex64,
    /// `cos((θ₂ - θ₁)/2)`.
    pub t: f64,
    /// `r e^{i(θ₁ + θ₂)/2}`; with `t` a common zero of the pair system.
    pub z: Complex64,
    pub transversal: bool,
    /// `+1`, `-1`, or `None` when the sign is undefined (non-transversal
    /// or not yet classified).
    pub sign: Option<i8>,
    /// Sine of the angle between the two tangents.
    pub sine: f64,
    pub residual: f64,
    /// Whether the underlying zero passed the uniqueness test.
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scan {
    pub crossings: Vec<SelfIntersection>,
    pub cells: usize,
    pub unresolved: usize,
}

fn wrap(theta: f64) -> f64 {
    let x = theta.rem_euclid(TAU);
    if x >= TAU {
        0.0
    } else {
        x
    }
}

/// Circular distance on `[0, 2π)`.
pub(crate) fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Finds every crossing of a closed curve, each unordered pair once.
///
/// Crossings are filled with transversality data relative to
/// `cfg.transversal_tol`; signs are left undefined until
/// [`classify_crossing`] fixes a base point.
pub fn scan_curve<C: ClosedCurve + ?Sized>(curve: &C, r: f64, cfg: &Tolerances) -> Result<Scan> {
    let quotient = curve.chord_quotient();
    let scale = curve.scale();
    let params = SearchParams {
        grid: cfg.grid_factor * curve.bandwidth(),
        max_depth: cfg.max_depth as u32,
        max_cells: cfg.max_cells,
        theta_floor: 0.5 * cfg.separation,
        merge: 1e-10,
    };
    let outcome = find_zeros(&quotient, Rect { theta: (0.0, PI), s: (0.0, PI) }, &params)?;

    let mut crossings: Vec<SelfIntersection> = Vec::new();
    for zero in &outcome.zeros {
        let half = zero.theta;
        if half <= 0.5 * cfg.separation || half >= PI - 0.5 * cfg.separation {
            continue;
        }
        let (a, b) = (wrap(zero.s - half), wrap(zero.s + half));
        let (theta1, theta2) = if a <= b { (a, b) } else { (b, a) };
        let (w1, w2) = (curve.point(theta1), curve.point(theta2));
        let residual = (w1 - w2).norm();
        if residual > cfg.accept_residual * scale.max(1.0) {
            continue;
        }
        let duplicate = crossings.iter().any(|x| {
            angle_gap(x.theta1, theta1) + angle_gap(x.theta2, theta2) < cfg.cluster_radius
        });
        if duplicate {
            continue;
        }
        let mid = 0.5 * (theta1 + theta2);
        let (t1, t2) = (curve.velocity(theta1), curve.velocity(theta2));
        let sine = (t1.conj() * t2).im / (t1.norm() * t2.norm()).max(f64::MIN_POSITIVE);
        crossings.push(SelfIntersection {
            theta1,
            theta2,
            w: 0.5 * (w1 + w2),
            t: (0.5 * (theta2 - theta1)).cos(),
            z: Complex64::from_polar(r, mid),
            transversal: sine.abs() > cfg.transversal_tol,
            sign: None,
            sine,
            residual,
            certified: zero.certified,
        });
    }
    crossings.sort_by(|x, y| x.theta1.total_cmp(&y.theta1).then(x.theta2.total_cmp(&y.theta2)));
    Ok(Scan { crossings, cells: outcome.cells, unresolved: outcome.unresolved })
}

/// All self-intersections of `p` on `|z| = r`.
///
/// Curves of the form `q(z^j)` trace a circle-like loop `|j|` times and
/// have a continuum of crossings; they are refused up front.
pub fn find_self_intersections(p: &LaurentPoly, r: f64, cfg: &Tolerances) -> Result<Vec<SelfIntersection>> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRange(format!("radius {r}")));
    }
    if let ExceptionalClass::PowerSubstitution { .. } = exceptional_class(p, cfg.near_exceptional) {
        return Err(Error::MultipleCrossingOverflow);
    }
    Ok(scan_curve(&LaurentCurve::new(p.clone(), r), r, cfg)?.crossings)
}

/// Fills transversality and sign of `x` relative to the base parameter.
///
/// The first arc is the one reached first when leaving `base` in the
/// direction of increasing θ. The crossing is positive when
/// `det[T_first, T_second] < 0`, i.e. the second arc passes from left to
/// right as seen along the first.
pub fn classify_crossing<C: ClosedCurve + ?Sized>(
    curve: &C,
    x: &SelfIntersection,
    base: f64,
    cfg: &Tolerances,
) -> SelfIntersection {
    let mut out = x.clone();
    let d1 = (x.theta1 - base).rem_euclid(TAU);
    let d2 = (x.theta2 - base).rem_euclid(TAU);
    let (first, second) = if d1 <= d2 { (x.theta1, x.theta2) } else { (x.theta2, x.theta1) };
    let (tf, ts) = (curve.velocity(first), curve.velocity(second));
    let det = (tf.conj() * ts).im;
    out.sine = (x.sine).abs() * det.signum();
    out.transversal = det.abs() > cfg.transversal_tol * tf.norm() * ts.norm();
    out.sign = out.transversal.then_some(if det < 0.0 { 1 } else { -1 });
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormalityClass {
    Normal,
    /// The velocity vanishes somewhere on the circle.
    #[serde(rename = "E_Z")]
    EZ,
    /// A crossing is tangential.
    #[serde(rename = "E_NT")]
    ENT,
    /// Three or more parameters share a value.
    #[serde(rename = "E_MC")]
    EMC,
}

/// A value taken at three or more parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplePoint {
    pub w: Complex64,
    pub thetas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub class: NormalityClass,
    pub r: f64,
    /// Parameters where the velocity (nearly) vanishes.
    pub zero_speed: Vec<f64>,
    /// Tangential crossings, as parameter pairs.
    pub tangential: Vec<(f64, f64)>,
    pub multiple: Vec<MultiplePoint>,
    pub crossings: Vec<SelfIntersection>,
    /// Number of crossing pairs as found.
    pub raw_pairs: usize,
    /// `Σ s(s-1)/2` over clusters of `s` parameters sharing a value.
    pub clustered_pairs: usize,
    pub unresolved_cells: usize,
    /// Set when `p` is within `near_exceptional` of the balanced case.
    pub near_exceptional: bool,
}

impl NormalityReport {
    /// No cusps and no tangential crossings (multiple points allowed).
    pub fn regular_transversal(&self) -> bool {
        self.zero_speed.is_empty() && self.tangential.is_empty()
    }
}

/// Parameters where `|γ'|` has a local minimum below `cfg.zero_tol`
/// relative to the largest speed on the curve.
pub fn zero_speed_angles<C: ClosedCurve + ?Sized>(curve: &C, cfg: &Tolerances) -> Vec<f64> {
    let n = 64 * curve.bandwidth() + 64;
    let step = TAU / n as f64;
    let speed: Vec<f64> = (0..n).map(|i| curve.velocity(i as f64 * step).norm()).collect();
    let top = speed.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return vec![0.0];
    }
    let mut out = Vec::new();
    for i in 0..n {
        let (prev, next) = (speed[(i + n - 1) % n], speed[(i + 1) % n]);
        if speed[i] > prev || speed[i] > next {
            continue;
        }
        if speed[i] == prev && i > 0 {
            continue;
        }
        let (lo, hi) = ((i as f64 - 1.0) * step, (i as f64 + 1.0) * step);
        let (theta, min) = golden_min(|th| curve.velocity(th).norm(), lo, hi);
        if min < cfg.zero_tol * top {
            let theta = wrap(theta);
            if !out.iter().any(|&o: &f64| angle_gap(o, theta) < 1e-9) {
                out.push(theta);
            }
        }
    }
    out
}

pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets((0..n).collect())
    }
    fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut j = i;
        while self.0[j] != root {
            let next = self.0[j];
            self.0[j] = root;
            j = next;
        }
        root
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Groups crossings by common value; returns the groups with three or more
/// distinct parameters and the clustered pair count.
pub fn multiple_points(crossings: &[SelfIntersection], value_tol: f64, param_tol: f64) -> (Vec<MultiplePoint>, usize) {
    let mut sets = DisjointSets::new(crossings.len());
    for i in 0..crossings.len() {
        for j in i + 1..crossings.len() {
            if (crossings[i].w - crossings[j].w).norm() < value_tol {
                sets.union(i, j);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..crossings.len() {
        groups.entry(sets.find(i)).or_default().push(i);
    }
    let mut multiple = Vec::new();
    let mut clustered = 0;
    for members in groups.values() {
        let mut thetas: Vec<f64> = Vec::new();
        for &i in members {
            for th in [crossings[i].theta1, crossings[i].theta2] {
                if !thetas.iter().any(|&o| angle_gap(o, th) < param_tol) {
                    thetas.push(th);
                }
            }
        }
        let s = thetas.len();
        clustered += s * (s - 1) / 2;
        if s >= 3 {
            thetas.sort_by(f64::total_cmp);
            multiple.push(MultiplePoint { w: crossings[members[0]].w, thetas });
        }
    }
    (multiple, clustered)
}

/// Normality of an arbitrary closed curve.
pub fn classify_curve<C: ClosedCurve + ?Sized>(curve: &C, r: f64, cfg: &Tolerances) -> Result<NormalityReport> {
    let zero_speed = zero_speed_angles(curve, cfg);
    let scan = scan_curve(curve, r, cfg)?;
    let tangential = scan
        .crossings
        .iter()
        .filter(|x| !x.transversal)
        .map(|x| (x.theta1, x.theta2))
        .collect::<Vec<_>>();
    let (multiple, clustered_pairs) =
        multiple_points(&scan.crossings, cfg.value_cluster * curve.scale().max(1.0), cfg.cluster_radius);
    let class = if !zero_speed.is_empty() {
        NormalityClass::EZ
    } else if !multiple.is_empty() {
        NormalityClass::EMC
    } else if !tangential.is_empty() {
        NormalityClass::ENT
    } else {
        NormalityClass::Normal
    };
    Ok(NormalityReport {
        class,
        r,
        zero_speed,
        tangential,
        multiple,
        raw_pairs: scan.crossings.len(),
        crossings: scan.crossings,
        clustered_pairs,
        unresolved_cells: scan.unresolved,
        near_exceptional: false,
    })
}

pub fn classify_normality(p: &LaurentPoly, r: f64, cfg: &Tolerances) -> Result<NormalityReport> {
    if let ExceptionalClass::PowerSubstitution { .. } = exceptional_class(p, cfg.near_exceptional) {
        return Err(Error::MultipleCrossingOverflow);
    }
    let mut report = classify_curve(&LaurentCurve::new(p.clone(), r), r, cfg)?;
    report.near_exceptional = balance_gap(p).is_some_and(|g| g <= cfg.near_exceptional);
    Ok(report)
}

/// Base-2 van der Corput sequence.
pub fn van_der_corput(mut k: u64) -> f64 {
    let (mut x, mut denom) = (0.0, 1.0);
    while k > 0 {
        denom *= 2.0;
        x += (k & 1) as f64 / denom;
        k >>= 1;
    }
    x
}

/// First radius (in a low-discrepancy order around 1, starting at 1
/// itself) on which `p` has no cusps and no tangential crossings.
pub fn rescale_to_normal(p: &LaurentPoly, cfg: &Tolerances) -> Result<(f64, NormalityReport)> {
    if let cls @ ExceptionalClass::PowerSubstitution { .. } = exceptional_class(p, cfg.near_exceptional) {
        return Err(Error::HypothesisViolated(format!("{cls:?}")));
    }
    for k in 0..cfg.max_trials {
        let r = if k == 0 { 1.0 } else { 1.0 + cfg.r_span * (2.0 * van_der_corput(k as u64) - 1.0) };
        match classify_normality(p, r, cfg) {
            Ok(report) if report.regular_transversal() => return Ok((r, report)),
            Ok(_) | Err(Error::MultipleCrossingOverflow) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::SearchExhausted(cfg.max_trials))
}
