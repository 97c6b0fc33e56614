//! Random-coefficient sweeps over `(m, n)` cells, written as CSV.

use std::io::Write;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use trigcurve::extremal::build_and_verify;
use trigcurve::intersect::{classify_normality, NormalityClass};
use trigcurve::laurent::{balance_gap, sigma_bound};
use trigcurve::{Complex64, LaurentPoly, Tolerances};

use crate::input::ParseError;
use crate::report::Verdict;

pub const MAX_N: i64 = 12;
/// Minimum relative gap `||a_n| - |a_-n||` for `m = -n` samples, keeping
/// them clear of the balanced exceptional case.
pub const BALANCE_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub m: RangeInclusive<i64>,
    pub n: RangeInclusive<i64>,
    pub trials: usize,
    pub seed: u64,
    /// Append one row per cell for the extremal trinomial.
    pub extremal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub kind: &'static str,
    pub m: i64,
    pub n: i64,
    pub trial: Option<usize>,
    pub count: Option<usize>,
    pub sigma: i64,
    pub verdict: Option<Verdict>,
    pub normality: Option<NormalityClass>,
    pub max_count: Option<usize>,
    pub normal_fraction: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepSummary {
    pub rows: usize,
    pub violations: usize,
    pub errors: usize,
    pub skipped: Cells,
}

/// `a..b`, `a..=b` (both inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, ParseError> {
    let bad = || ParseError(format!("bad range {s:?}; expected a..b or a single integer"));
    let int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => Ok(int(a)?..=int(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let k = int(s)?;
            Ok(k..=k)
        }
    }
}

/// `(m, n)` pairs.
pub type Cells = Vec<(i64, i64)>;

/// Cells of the sweep, then the skipped ones. Pairs outside
/// `1 <= |m| <= n` are dropped silently; `m = n >= 2` is skipped because
/// only monomials (always exceptional) have that support.
pub fn cells(spec: &SweepSpec) -> Result<(Cells, Cells), ParseError> {
    if *spec.n.end() > MAX_N || *spec.n.start() < 1 || spec.m.start().abs().max(spec.m.end().abs()) > MAX_N {
        return Err(ParseError(format!("ranges must stay within 1 <= |m| <= n <= {MAX_N}")));
    }
    let (mut keep, mut skip) = (Vec::new(), Vec::new());
    for n in spec.n.clone() {
        for m in spec.m.clone() {
            if m == 0 || m.abs() > n {
                continue;
            }
            if m == n && n >= 2 {
                skip.push((m, n));
            } else {
                keep.push((m, n));
            }
        }
    }
    Ok((keep, skip))
}

fn disk(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if z.norm_sqr() < 1.0 {
            return z;
        }
    }
}

/// Coefficients uniform in the unit disk, redrawn until the polynomial
/// has exact support `[m, n]`, support gcd 1 and (for `m = -n`) a clear
/// case-(b) margin.
pub fn random_poly(rng: &mut ChaCha8Rng, m: i64, n: i64) -> LaurentPoly {
    loop {
        let coeffs = (m..=n).map(|_| disk(rng)).collect();
        let Ok(p) = LaurentPoly::new(m, coeffs) else { continue };
        if p.m() == m && p.n() == n && p.support_gcd() == 1 && balance_gap(&p).is_none_or(|g| g > BALANCE_MARGIN) {
            return p;
        }
    }
}

/// Each trial has its own stream, so rows do not depend on scheduling.
fn trial_rng(seed: u64, m: i64, n: i64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((((m + MAX_N) as u64) << 48) | ((n as u64) << 40) | trial as u64);
    rng
}

fn trial_row(m: i64, n: i64, trial: usize, sigma: i64, spec: &SweepSpec, cfg: &Tolerances) -> Row {
    let p = random_poly(&mut trial_rng(spec.seed, m, n, trial), m, n);
    let mut row = Row {
        kind: "trial",
        m,
        n,
        trial: Some(trial),
        count: None,
        sigma,
        verdict: None,
        normality: None,
        max_count: None,
        normal_fraction: None,
        error: None,
    };
    match classify_normality(&p, 1.0, cfg) {
        Ok(report) => {
            row.count = Some(report.raw_pairs);
            row.verdict = Some(Verdict::from_count(report.raw_pairs, sigma));
            row.normality = Some(report.class);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

fn extremal_row(m: i64, n: i64, sigma: i64, cfg: &Tolerances) -> Row {
    let mut row = Row {
        kind: "extremal",
        m,
        n,
        trial: None,
        count: None,
        sigma,
        verdict: None,
        normality: None,
        max_count: None,
        normal_fraction: None,
        error: None,
    };
    match build_and_verify(m, n, cfg) {
        Ok(w) => {
            row.count = Some(w.count as usize);
            row.verdict = Some(Verdict::from_count(w.count as usize, sigma));
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Per-cell trial rows followed by a summary row (and the extremal row
/// when requested), in cell order regardless of thread count.
pub fn run(spec: &SweepSpec, cfg: &Tolerances) -> Result<(Vec<Row>, SweepSummary), ParseError> {
    let (cells, skipped) = cells(spec)?;
    let mut rows = Vec::new();
    let mut summary = SweepSummary { skipped, ..Default::default() };
    for (m, n) in cells {
        let sigma = sigma_bound(m, n).expect("cells satisfy 1 <= |m| <= n");
        let trials: Vec<Row> = (0..spec.trials)
            .into_par_iter()
            .map(|t| trial_row(m, n, t, sigma, spec, cfg))
            .collect();
        let normal = trials.iter().filter(|r| r.normality == Some(NormalityClass::Normal)).count();
        let cell_summary = Row {
            kind: "summary",
            m,
            n,
            trial: None,
            count: None,
            sigma,
            verdict: None,
            normality: None,
            max_count: trials.iter().filter_map(|r| r.count).max(),
            normal_fraction: (spec.trials > 0).then(|| normal as f64 / spec.trials as f64),
            error: None,
        };
        rows.extend(trials);
        rows.push(cell_summary);
        if spec.extremal && m.abs() < n {
            rows.push(extremal_row(m, n, sigma, cfg));
        }
    }
    summary.rows = rows.len();
    summary.violations = rows.iter().filter(|r| r.verdict == Some(Verdict::BoundViolated)).count();
    summary.errors = rows.iter().filter(|r| r.error.is_some()).count();
    Ok((rows, summary))
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
