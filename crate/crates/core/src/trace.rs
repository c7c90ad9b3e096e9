//! Per-iteration solver traces.

use std::time::Duration;

use crate::solvers::estimating::EstimatingAudit;

/// One recorded iteration. Optional fields are absent where the quantity is
/// undefined for the algorithm or problem (e.g. `rho` for the fixed-stepsize
/// descent method, `dist_to_min` when no minimizer is known).
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    /// Objective at the tracked iterate `u_k`.
    pub f_value: f64,
    pub dist_to_min: Option<f64>,
    pub residual: Option<f64>,
    /// Accepted curvature constant (line-search methods) or the reciprocal of
    /// the fixed stepsize.
    pub rho: Option<f64>,
    /// Line-search trials taken to produce this iterate (`j_k + 1`).
    pub ls_trials: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct TraceSummary {
    pub iterations: usize,
    pub total_ls_trials: u64,
    pub wall_time: Duration,
    pub final_f: f64,
    pub final_dist: Option<f64>,
    pub final_residual: Option<f64>,
    /// Whether the distance / gap target was reached before `max_iters`.
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct SolverTrace {
    pub records: Vec<IterationRecord>,
    pub summary: TraceSummary,
    /// Estimating-sequence data collected when the audit mode is on.
    pub audit: Option<EstimatingAudit>,
}

impl SolverTrace {
    /// First recorded iteration index whose distance column is `<= eps`.
    pub fn first_iter_within(&self, eps: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.dist_to_min.is_some_and(|d| d <= eps))
            .map(|r| r.iter)
    }
}
