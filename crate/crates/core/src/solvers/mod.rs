//! The three projected gradient solvers and their shared run machinery.

pub mod estimating;
mod pgdm;
mod ufgm;
mod upgm;

pub use pgdm::pgdm;
pub use ufgm::{ufgm, ufgm_condition_holds};
pub use upgm::{upgm, upgm_condition_holds};

use std::time::Instant;

use crate::error::{Error, Result};
use crate::problem::ProblemInstance;
use crate::set::project;
use crate::trace::{IterationRecord, SolverTrace, TraceSummary};
use crate::vector::DenseVector;

/// Maximum stepsize doublings inside one line-search loop before the run is
/// declared runaway (a symptom of inconsistent problem metadata).
pub const LINE_SEARCH_MAX_DOUBLINGS: u32 = 200;

/// Run parameters shared by all three solvers. Fields that only apply to a
/// subset of the algorithms are ignored by the others.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Target distance accuracy, in (0, 1).
    pub epsilon: f64,
    pub max_iters: usize,
    /// Initial line-search constant (universal methods). Defaults: 1 for the
    /// primal method, `mu` for the fast method, which requires `rho0 >= mu`.
    pub rho0: Option<f64>,
    /// Fixed stepsize override: `tau` for the descent method, `nu` for the
    /// fast method run without a line search.
    pub fixed_step: Option<f64>,
    /// Replaces the problem's strong-convexity parameter.
    pub mu_override: Option<f64>,
    /// Trace decimation interval; iteration 0 and the final iteration are
    /// always recorded.
    pub record_every: usize,
    /// Maintain and check the estimating sequence (fast method only;
    /// requires a known optimal value).
    pub audit_estimating: bool,
    /// Stop once the distance (or gap) target is reached. Disable to run a
    /// fixed iteration budget.
    pub stop_on_target: bool,
    /// Starting point override; defaults to the problem's initial iterate,
    /// else the projection of zero.
    pub initial: Option<DenseVector>,
}

impl SolverConfig {
    pub fn new(epsilon: f64, max_iters: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::invalid(format!(
                "epsilon must lie in (0,1), got {epsilon}"
            )));
        }
        if max_iters == 0 {
            return Err(Error::invalid("max_iters must be positive"));
        }
        Ok(Self {
            epsilon,
            max_iters,
            rho0: None,
            fixed_step: None,
            mu_override: None,
            record_every: 1,
            audit_estimating: false,
            stop_on_target: true,
            initial: None,
        })
    }

    pub fn with_rho0(mut self, rho0: f64) -> Self {
        self.rho0 = Some(rho0);
        self
    }

    pub fn with_fixed_step(mut self, step: f64) -> Self {
        self.fixed_step = Some(step);
        self
    }

    pub fn with_mu_override(mut self, mu: f64) -> Self {
        self.mu_override = Some(mu);
        self
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every.max(1);
        self
    }

    pub fn with_audit(mut self, on: bool) -> Self {
        self.audit_estimating = on;
        self
    }

    pub fn with_stop_on_target(mut self, on: bool) -> Self {
        self.stop_on_target = on;
        self
    }

    pub fn with_initial(mut self, u0: DenseVector) -> Self {
        self.initial = Some(u0);
        self
    }
}

pub(crate) fn effective_mu(problem: &ProblemInstance, cfg: &SolverConfig) -> f64 {
    cfg.mu_override.unwrap_or(problem.mu)
}

/// Starting point: config override, else the problem's initial iterate, else
/// zero; always projected feasible.
pub(crate) fn starting_point(problem: &ProblemInstance, cfg: &SolverConfig) -> Result<DenseVector> {
    let raw = cfg
        .initial
        .clone()
        .or_else(|| problem.initial.clone())
        .unwrap_or_else(|| DenseVector::zeros(problem.dim));
    if raw.len() != problem.dim {
        return Err(Error::DimensionMismatch {
            expected: problem.dim,
            found: raw.len(),
        });
    }
    project(&problem.feasible, &raw)
}

/// Distance target when the minimizer is known, objective-gap target
/// `f(u) − f* ≤ mu eps²/2` when only the optimal value is known.
pub(crate) fn target_reached(
    problem: &ProblemInstance,
    mu: f64,
    epsilon: f64,
    u: &DenseVector,
    f_u: f64,
) -> bool {
    if let Some(star) = &problem.minimizer {
        return u.dist(star) <= epsilon;
    }
    if let Some(fstar) = problem.optimal_value {
        return f_u - fstar <= mu * epsilon * epsilon / 2.0;
    }
    false
}

/// Collects decimated iteration records plus running totals.
pub(crate) struct Recorder<'a> {
    problem: &'a ProblemInstance,
    every: usize,
    records: Vec<IterationRecord>,
    total_ls_trials: u64,
    started: Instant,
    last_recorded: Option<usize>,
}

impl<'a> Recorder<'a> {
    pub fn new(problem: &'a ProblemInstance, cfg: &SolverConfig) -> Self {
        Self {
            problem,
            every: cfg.record_every.max(1),
            records: Vec::new(),
            total_ls_trials: 0,
            started: Instant::now(),
            last_recorded: None,
        }
    }

    pub fn note_trials(&mut self, trials: u32) {
        self.total_ls_trials += u64::from(trials);
    }

    fn make_record(
        &self,
        iter: usize,
        f_value: f64,
        u: &DenseVector,
        rho: Option<f64>,
        ls_trials: Option<u32>,
        step_for_residual: Option<f64>,
    ) -> IterationRecord {
        let dist_to_min = self.problem.minimizer.as_ref().map(|star| u.dist(star));
        let residual = match (&self.problem.residual, step_for_residual) {
            (Some(r), Some(tau)) => Some(r(u, tau)),
            _ => None,
        };
        IterationRecord {
            iter,
            f_value,
            dist_to_min,
            residual,
            rho,
            ls_trials,
        }
    }

    pub fn record(
        &mut self,
        iter: usize,
        f_value: f64,
        u: &DenseVector,
        rho: Option<f64>,
        ls_trials: Option<u32>,
        step_for_residual: Option<f64>,
    ) {
        if iter.is_multiple_of(self.every) {
            self.records
                .push(self.make_record(iter, f_value, u, rho, ls_trials, step_for_residual));
            self.last_recorded = Some(iter);
        }
    }

    /// Records the final iterate unconditionally and assembles the summary.
    #[allow(clippy::too_many_arguments)]
    pub fn finish(
        mut self,
        iter: usize,
        f_value: f64,
        u: &DenseVector,
        rho: Option<f64>,
        ls_trials: Option<u32>,
        step_for_residual: Option<f64>,
        converged: bool,
    ) -> (Vec<IterationRecord>, TraceSummary) {
        if self.last_recorded != Some(iter) {
            self.records
                .push(self.make_record(iter, f_value, u, rho, ls_trials, step_for_residual));
        }
        let last = self.records.last().expect("at least one record");
        let summary = TraceSummary {
            iterations: iter,
            total_ls_trials: self.total_ls_trials,
            wall_time: self.started.elapsed(),
            final_f: last.f_value,
            final_dist: last.dist_to_min,
            final_residual: last.residual,
            converged,
        };
        (self.records, summary)
    }
}

pub(crate) fn assemble_trace(
    records: Vec<IterationRecord>,
    summary: TraceSummary,
    audit: Option<estimating::EstimatingAudit>,
) -> SolverTrace {
    SolverTrace {
        records,
        summary,
        audit,
    }
}
