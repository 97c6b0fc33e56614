//! Numerical tolerances shared by the crossing finder, the normality
//! classifier and the rescaling search.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Initial subdivision of the crossing search: `grid_factor` cells per
    /// unit of the largest frequency, along each axis.
    pub grid_factor: usize,
    /// Minimum parameter distance between the two points of a crossing.
    pub separation: f64,
    /// Maximum accepted |p(z1) - p(z2)|, relative to the coefficient scale.
    pub accept_residual: f64,
    /// Crossings closer than this in parameter space are merged.
    pub cluster_radius: f64,
    /// Crossing values closer than this are treated as one multiple point.
    pub value_cluster: f64,
    /// |gamma'| below this (relative) marks the curve as singular.
    pub zero_tol: f64,
    /// |sin angle| between tangents below this marks a non-transversal crossing.
    pub transversal_tol: f64,
    /// Case (b) margin below which a report carries a near-exceptional warning.
    pub near_exceptional: f64,
    /// Subdivision depth limit for the exclusion search.
    pub max_depth: usize,
    /// Cell budget; exceeding it means the zero set is not discrete.
    pub max_cells: usize,
    /// Half-width of the radius window searched by `rescale_to_normal`.
    pub r_span: f64,
    pub max_trials: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            grid_factor: 8,
            separation: 1e-4,
            accept_residual: 1e-10,
            cluster_radius: 1e-6,
            value_cluster: 1e-7,
            zero_tol: 1e-8,
            transversal_tol: 1e-6,
            near_exceptional: 1e-6,
            max_depth: 24,
            max_cells: 400_000,
            r_span: 0.1,
            max_trials: 50,
        }
    }
}
