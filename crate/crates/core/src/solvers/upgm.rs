//! Universal primal gradient method: a doubling line search adapts the
//! curvature constant without knowing the Hölder metadata.

use crate::error::{Error, Result};
use crate::problem::ProblemInstance;
use crate::set::project;
use crate::trace::SolverTrace;
use crate::vector::DenseVector;

use super::{
    assemble_trace, effective_mu, starting_point, target_reached, Recorder, SolverConfig,
    LINE_SEARCH_MAX_DOUBLINGS,
};

/// Line-search acceptance test:
/// `f(v⁺) ≤ f(v) + ⟨∇f(v), v⁺−v⟩ + (ρ/2)‖v⁺−v‖² + με²/4`.
#[allow(clippy::too_many_arguments)]
pub fn upgm_condition_holds(
    f_v: f64,
    grad_v: &DenseVector,
    v_next: &DenseVector,
    v: &DenseVector,
    rho: f64,
    mu: f64,
    epsilon: f64,
    f_vnext: f64,
) -> bool {
    let d = v_next.minus(v);
    f_vnext <= f_v + grad_v.dot(&d) + rho / 2.0 * d.dot(&d) + mu * epsilon * epsilon / 4.0
}

/// Runs the universal primal method. Each iteration restarts the inner loop
/// at `j = 0` from the carried constant and sets `ρ_{k+1} = 2^{j_k} ρ_k`, so
/// the constant never decreases. The tracked iterate is best-so-far in `f`.
pub fn upgm(problem: &ProblemInstance, cfg: &SolverConfig) -> Result<SolverTrace> {
    let mu = effective_mu(problem, cfg);
    let rho0 = cfg.rho0.unwrap_or(1.0);
    if !(rho0 > 0.0 && rho0.is_finite()) {
        return Err(Error::invalid(format!("rho0 must be positive, got {rho0}")));
    }

    let u0 = starting_point(problem, cfg)?;
    let mut v = u0.clone();
    let mut u = u0;
    let mut f_u = problem.eval_objective(&u)?;
    let mut rho = rho0;

    let mut recorder = Recorder::new(problem, cfg);
    recorder.record(0, f_u, &u, Some(rho), None, Some(1.0 / rho));

    let mut iter = 0;
    let mut converged = cfg.stop_on_target && target_reached(problem, mu, cfg.epsilon, &u, f_u);
    while !converged && iter < cfg.max_iters {
        let g = problem.eval_gradient(&v)?;
        let f_v = problem.eval_objective(&v)?;

        let mut j: u32 = 0;
        let (v_next, accepted_rho) = loop {
            let trial_rho = rho * 2f64.powi(j as i32);
            let cand = project(&problem.feasible, &v.minus_scaled(1.0 / trial_rho, &g))?;
            let f_cand = problem.eval_objective(&cand)?;
            if upgm_condition_holds(f_v, &g, &cand, &v, trial_rho, mu, cfg.epsilon, f_cand) {
                break (cand, trial_rho);
            }
            j += 1;
            if j > LINE_SEARCH_MAX_DOUBLINGS {
                return Err(Error::LineSearchRunaway {
                    iter,
                    doublings: j,
                });
            }
        };
        rho = accepted_rho;
        v = v_next;
        v.ensure_finite("primal line-search iterate")?;
        let f_v_next = problem.eval_objective(&v)?;
        if f_v_next <= f_u {
            u = v.clone();
            f_u = f_v_next;
        }
        iter += 1;
        recorder.note_trials(j + 1);
        recorder.record(iter, f_u, &u, Some(rho), Some(j + 1), Some(1.0 / rho));
        converged = cfg.stop_on_target && target_reached(problem, mu, cfg.epsilon, &u, f_u);
    }

    let (records, summary) =
        recorder.finish(iter, f_u, &u, Some(rho), None, Some(1.0 / rho), converged);
    Ok(assemble_trace(records, summary, None))
}
