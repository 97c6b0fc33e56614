//! Extremal-curve fixtures: one JSON file per `(m, n)`.
//!
//! A fixture is an ordinary polynomial document (`m`, `n`, `coeffs`) with
//! an extra `extremal` object, so `analyze` reads it unchanged.

use std::path::{Path, PathBuf};

use serde::Serialize;
use trigcurve::extremal::{build_and_verify, ExtremalWitness};
use trigcurve::laurent::LaurentRepr;
use trigcurve::Tolerances;

#[derive(Debug, Clone, Serialize)]
pub struct Fixture {
    #[serde(flatten)]
    pub poly: LaurentRepr,
    pub extremal: Certificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub d: i64,
    pub epsilon: f64,
    pub delta: f64,
    /// `inf Φ`; `None` when unbounded (no common Chebyshev zeros).
    pub phi_inf: Option<f64>,
    pub rhs: f64,
    pub sigma: i64,
    pub count: i64,
    pub max_residual: f64,
}

impl From<&ExtremalWitness> for Fixture {
    fn from(w: &ExtremalWitness) -> Self {
        Fixture {
            poly: w.poly.clone().into(),
            extremal: Certificate {
                d: w.d,
                epsilon: w.epsilon,
                delta: w.delta,
                phi_inf: w.phi_inf.is_finite().then_some(w.phi_inf),
                rhs: w.rhs,
                sigma: w.sigma,
                count: w.count,
                max_residual: w.max_residual,
            },
        }
    }
}

pub fn fixture_path(dir: &Path, m: i64, n: i64) -> PathBuf {
    dir.join(format!("{m}_{n}.json"))
}

/// All `(m, n)` with `1 <= |m| < n <= max_n`.
pub fn all_pairs(max_n: i64) -> Vec<(i64, i64)> {
    (2..=max_n)
        .flat_map(|n| (1 - n..n).filter(|&m| m != 0).map(move |m| (m, n)))
        .collect()
}

pub fn write_fixture(dir: &Path, m: i64, n: i64, cfg: &Tolerances) -> anyhow::Result<(PathBuf, Fixture)> {
    let witness = build_and_verify(m, n, cfg)?;
    let fixture = Fixture::from(&witness);
    std::fs::create_dir_all(dir)?;
    let path = fixture_path(dir, m, n);
    std::fs::write(&path, serde_json::to_string_pretty(&fixture)? + "\n")?;
    Ok((path, fixture))
}
