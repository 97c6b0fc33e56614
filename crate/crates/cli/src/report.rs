//! The `analyze` pipeline and its JSON report.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use trigcurve::curve::{ClosedCurve, LaurentCurve};
use trigcurve::intersect::{
    classify_crossing, classify_curve, classify_normality, find_self_intersections, zero_speed_angles,
    NormalityClass, NormalityReport, SelfIntersection,
};
use trigcurve::laurent::{exceptional_class, hat_reduce, normalize_for_bound, sigma_bound, BALANCE_TOL};
use trigcurve::rational::{mobius_normalize_seeded, rational_self_intersections, RationalCurve, RationalMap};
use trigcurve::topology::{outermost_parameter, rotation_number, rotation_of, whitney_ledger, WhitneyLedger};
use trigcurve::{Error, ExceptionalClass, LaurentPoly, Tolerances};

use crate::input::{Curve, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    WithinBound,
    AtBound,
    /// The bound does not apply (or the count is infinite).
    Exceptional,
    /// A non-exceptional curve with more crossings than the bound allows.
    BoundViolated,
}

impl Verdict {
    pub fn from_count(count: usize, bound: i64) -> Verdict {
        match (count as i64).cmp(&bound) {
            std::cmp::Ordering::Less => Verdict::WithinBound,
            std::cmp::Ordering::Equal => Verdict::AtBound,
            std::cmp::Ordering::Greater => Verdict::BoundViolated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Whitney {
    pub n_plus: i64,
    pub n_minus: i64,
    pub mu: i64,
    pub rotation: i64,
    pub base_theta: f64,
    pub holds: bool,
}

impl From<&WhitneyLedger> for Whitney {
    fn from(l: &WhitneyLedger) -> Self {
        Whitney {
            n_plus: l.n_plus,
            n_minus: l.n_minus,
            mu: l.mu,
            rotation: l.rotation,
            base_theta: l.base_theta,
            holds: l.holds(),
        }
    }
}

/// How a Laurent input was brought into the range the bound is stated for.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reduction {
    pub m: i64,
    pub n: i64,
    pub dropped_constant: bool,
    pub reflected: bool,
    pub exceptional: ExceptionalClass,
    /// For `m = -n`: the polynomial with the `z^-n` term cancelled, and its
    /// crossing count.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hat_reduced: Option<LaurentPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hat_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalInfo {
    pub degree: usize,
    pub blaschke: bool,
    /// The disk point of the Möbius normalization, `[re, im]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mobius_zeta: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveReport {
    pub tool: String,
    pub config: Tolerances,
    pub input: Source,
    pub radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<Reduction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational: Option<RationalInfo>,
    /// `σ(m, n)` for Laurent inputs, `(n - 1)²` for rational ones.
    pub bound: Option<i64>,
    /// `None` when the crossings form a continuum.
    pub count: Option<usize>,
    pub crossings: Vec<SelfIntersection>,
    pub normality: Option<NormalityClass>,
    pub zero_speed: Vec<f64>,
    pub rotation: Option<i64>,
    pub whitney: Option<Whitney>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzeOptions {
    pub radius: f64,
    pub timings: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { radius: 1.0, timings: false }
    }
}

struct Clock {
    enabled: bool,
    last: Instant,
    laps: BTreeMap<String, f64>,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Clock { enabled, last: Instant::now(), laps: BTreeMap::new() }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        *self.laps.entry(name.to_string()).or_default() += (now - self.last).as_secs_f64();
        self.last = now;
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.laps)
    }
}

/// The curve an input traces, for plotting and for topology.
pub fn curve_of(curve: &Curve, radius: f64) -> anyhow::Result<Box<dyn ClosedCurve>> {
    Ok(match curve {
        Curve::Laurent { poly } => Box::new(LaurentCurve::new(poly.clone(), radius)),
        Curve::Rational { map } => Box::new(RationalCurve::new(map.to_map()?)),
    })
}

pub fn analyze(source: &Source, cfg: &Tolerances, opts: &AnalyzeOptions) -> anyhow::Result<CurveReport> {
    let mut report = CurveReport {
        tool: concat!("trigcurve ", env!("CARGO_PKG_VERSION")).to_string(),
        config: *cfg,
        input: source.clone(),
        radius: opts.radius,
        reduction: None,
        rational: None,
        bound: None,
        count: None,
        crossings: Vec::new(),
        normality: None,
        zero_speed: Vec::new(),
        rotation: None,
        whitney: None,
        verdict: Verdict::Exceptional,
        notes: Vec::new(),
        timings: None,
    };
    let mut clock = Clock::new(opts.timings);
    match &source.curve {
        Curve::Laurent { poly } => analyze_laurent(poly, cfg, &mut report, &mut clock)?,
        Curve::Rational { map } => {
            if opts.radius != 1.0 {
                report.notes.push("rational maps are analyzed on the unit circle; radius ignored".into());
                report.radius = 1.0;
            }
            analyze_rational(&map.to_map()?, cfg, &mut report, &mut clock)?
        }
    }
    report.timings = clock.finish();
    Ok(report)
}

fn analyze_laurent(p: &LaurentPoly, cfg: &Tolerances, report: &mut CurveReport, clock: &mut Clock) -> anyhow::Result<()> {
    let r = report.radius;
    let norm = normalize_for_bound(p)?;
    let q = &norm.poly;
    let (m, n) = (q.m(), q.n());
    let exceptional = exceptional_class(q, BALANCE_TOL);
    let mut reduction = Reduction {
        m,
        n,
        dropped_constant: norm.dropped_constant,
        reflected: norm.reflected,
        exceptional,
        hat_reduced: None,
        hat_count: None,
    };
    report.bound = sigma_bound(m, n).ok();
    clock.lap("reduce");

    if let ExceptionalClass::PowerSubstitution { j } = exceptional {
        report.notes.push(format!("p(z) = q(z^{j}): the curve is traced {j} times and every point is a crossing"));
        report.rotation = rotation_number(p, r, cfg).ok();
        report.reduction = Some(reduction);
        clock.lap("rotation");
        return Ok(());
    }

    if m == -n && exceptional.is_none() {
        if r == 1.0 {
            let hat = hat_reduce(q)?;
            reduction.hat_count = find_self_intersections(&hat, 1.0, cfg).ok().map(|x| x.len());
            reduction.hat_reduced = Some(hat);
        } else {
            report.notes.push("hat reduction is only defined on the unit circle; skipped".into());
        }
        clock.lap("hat_reduce");
    }
    report.reduction = Some(reduction);

    let curve = LaurentCurve::new(p.clone(), r);
    let normality = classify_normality(p, r, cfg);
    clock.lap("crossings");
    fill_topology(&curve, normality, cfg, report, |c| rotation_number(p, r, c))?;
    clock.lap("topology");

    report.verdict = match (exceptional.is_none(), report.count, report.bound) {
        (false, _, _) => Verdict::Exceptional,
        (true, Some(count), Some(bound)) => Verdict::from_count(count, bound),
        _ => anyhow::bail!("no finite crossing count for a non-exceptional polynomial"),
    };
    Ok(())
}

fn analyze_rational(map: &RationalMap, cfg: &Tolerances, report: &mut CurveReport, clock: &mut Clock) -> anyhow::Result<()> {
    let n = map.degree();
    let mut info = RationalInfo { degree: n, blaschke: map.is_blaschke(), mobius_zeta: None };
    report.bound = Some((n as i64 - 1).pow(2));
    let curve = RationalCurve::new(map.clone());

    if info.blaschke {
        report.notes.push("Blaschke product: the image is the unit circle, traced repeatedly".into());
        report.rotation = rotation_of(&curve, cfg).ok();
        report.rational = Some(info);
        return Ok(());
    }
    match mobius_normalize_seeded(map, 0x6d6f6269) {
        Ok((_, zeta)) => info.mobius_zeta = Some([zeta.re, zeta.im]),
        Err(e) => report.notes.push(format!("Möbius normalization failed: {e}")),
    }
    report.rational = Some(info);
    clock.lap("normalize");

    let verdict = match rational_self_intersections(map, cfg) {
        Ok(x) => Verdict::from_count(x.len(), report.bound.unwrap_or(0)),
        Err(Error::BoundViolated { .. }) => Verdict::BoundViolated,
        Err(e @ (Error::DegenerateResultant | Error::MultipleCrossingOverflow)) => {
            report.notes.push(e.to_string());
            Verdict::Exceptional
        }
        Err(e) => return Err(e.into()),
    };
    clock.lap("crossings");
    let normality = classify_curve(&curve, 1.0, cfg);
    fill_topology(&curve, normality, cfg, report, |c| rotation_of(&curve, c))?;
    clock.lap("topology");
    report.verdict = verdict;
    Ok(())
}

/// Crossings, normality, rotation and (for normal curves) Whitney's
/// ledger. Crossings of non-normal curves are still signed relative to the
/// outermost point when they are transversal.
fn fill_topology<C: ClosedCurve + ?Sized>(
    curve: &C,
    normality: trigcurve::Result<NormalityReport>,
    cfg: &Tolerances,
    report: &mut CurveReport,
    rotation: impl Fn(&Tolerances) -> trigcurve::Result<i64>,
) -> anyhow::Result<()> {
    let normality = match normality {
        Ok(n) => n,
        Err(Error::MultipleCrossingOverflow) => {
            report.notes.push("the crossing set is not discrete (an arc is traced more than once)".into());
            report.zero_speed = zero_speed_angles(curve, cfg);
            report.normality = (!report.zero_speed.is_empty()).then_some(NormalityClass::EZ);
            if report.zero_speed.is_empty() {
                report.rotation = rotation(cfg).ok();
            }
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    report.count = Some(normality.raw_pairs);
    report.normality = Some(normality.class);
    report.zero_speed = normality.zero_speed.clone();
    if normality.unresolved_cells > 0 {
        report.notes.push(format!("{} search cells left unresolved", normality.unresolved_cells));
    }
    if normality.near_exceptional {
        report.notes.push("close to the balanced exceptional case".into());
    }
    if !normality.multiple.is_empty() {
        report.notes.push(format!("{} multiple point(s) of order >= 3", normality.multiple.len()));
    }
    if normality.zero_speed.is_empty() {
        match rotation(cfg) {
            Ok(rot) => report.rotation = Some(rot),
            Err(e) => report.notes.push(format!("rotation number: {e}")),
        }
    }
    let base = outermost_parameter(curve);
    report.crossings = normality.crossings.iter().map(|x| classify_crossing(curve, x, base, cfg)).collect();
    if let (NormalityClass::Normal, Some(rot)) = (normality.class, report.rotation) {
        match whitney_ledger(curve, &normality.crossings, rot, cfg) {
            Ok(ledger) => {
                report.whitney = Some(Whitney::from(&ledger));
                report.crossings = ledger.crossings;
            }
            Err(e) => report.notes.push(format!("Whitney check: {e}")),
        }
    }
    Ok(())
}
