//! Universal fast gradient method with strong-convexity momentum, in both
//! line-search and fixed-stepsize forms.

use crate::error::{Error, Result};
use crate::problem::ProblemInstance;
use crate::set::project;
use crate::trace::SolverTrace;
use crate::vector::DenseVector;

use super::estimating::{
    estimating_update, phi_eval, AuditSnapshot, EstimatingAudit, EstimatingState,
};
use super::{
    assemble_trace, effective_mu, starting_point, target_reached, Recorder, SolverConfig,
    LINE_SEARCH_MAX_DOUBLINGS,
};

/// Line-search acceptance test:
/// `f(u⁺) ≤ f(v) + ⟨∇f(v), u⁺−v⟩ + (μ/(2ν²))‖u⁺−v‖² + ημε²/4`.
#[allow(clippy::too_many_arguments)]
pub fn ufgm_condition_holds(
    f_v: f64,
    grad_v: &DenseVector,
    u_next: &DenseVector,
    v: &DenseVector,
    nu: f64,
    eta: f64,
    mu: f64,
    epsilon: f64,
    f_unext: f64,
) -> bool {
    let d = u_next.minus(v);
    f_unext
        <= f_v
            + grad_v.dot(&d)
            + mu / (2.0 * nu * nu) * d.dot(&d)
            + eta * mu * epsilon * epsilon / 4.0
}

struct StepOutcome {
    v: DenseVector,
    grad_v: DenseVector,
    f_v: f64,
    u_next: DenseVector,
    f_unext: f64,
    eta: f64,
}

/// One momentum step at parameter `nu`:
/// `v = (1−η)u + ηΠ(w)`, `z = Π(Π(w) − (ν/μ)∇f(v))`, `u⁺ = (1−η)u + ηz`.
fn momentum_step(
    problem: &ProblemInstance,
    u: &DenseVector,
    pw: &DenseVector,
    nu: f64,
    mu: f64,
) -> Result<StepOutcome> {
    let eta = nu / (1.0 + nu);
    let v = DenseVector::combine(1.0 - eta, u, eta, pw);
    let grad_v = problem.eval_gradient(&v)?;
    let f_v = problem.eval_objective(&v)?;
    let z = project(&problem.feasible, &pw.minus_scaled(nu / mu, &grad_v))?;
    let u_next = DenseVector::combine(1.0 - eta, u, eta, &z);
    u_next.ensure_finite("fast-method iterate")?;
    let f_unext = problem.eval_objective(&u_next)?;
    Ok(StepOutcome {
        v,
        grad_v,
        f_v,
        u_next,
        f_unext,
        eta,
    })
}

/// Runs the fast method. With `cfg.fixed_step = Some(nu)` the line search and
/// curvature bookkeeping are skipped entirely and `nu` is used at every
/// iteration; otherwise the doubling search starts from `rho0 >= mu` and sets
/// `ν_k = √(μ/(2^{j_k}ρ_k))`. With `cfg.audit_estimating` the estimating
/// sequence is maintained and the per-iteration descent inequality asserted,
/// which requires a known optimal value.
pub fn ufgm(problem: &ProblemInstance, cfg: &SolverConfig) -> Result<SolverTrace> {
    let mu = effective_mu(problem, cfg);
    let fixed_nu = cfg.fixed_step;
    if let Some(nu) = fixed_nu {
        if !(nu > 0.0 && nu <= 1.0) {
            return Err(Error::ParameterInconsistency(format!(
                "fixed stepsize nu must lie in (0, 1], got {nu}"
            )));
        }
    }
    let rho0 = cfg.rho0.unwrap_or(mu);
    if fixed_nu.is_none() && rho0 < mu {
        return Err(Error::invalid(format!(
            "fast method requires rho0 >= mu (got rho0 = {rho0}, mu = {mu})"
        )));
    }

    let u0 = starting_point(problem, cfg)?;
    let mut u = u0.clone();
    let mut w = u0.clone();
    let mut f_u = problem.eval_objective(&u)?;
    let mut rho = rho0;

    let f_star = problem.optimal_value;
    let mut estimating = if cfg.audit_estimating {
        let f_star = f_star.ok_or_else(|| {
            Error::MissingData("estimating audit requires the problem's optimal value".into())
        })?;
        Some(EstimatingState::initial(&u0, f_u, f_star, mu, cfg.epsilon))
    } else {
        None
    };
    let mut snapshots = if estimating.is_some() {
        vec![AuditSnapshot {
            iter: 0,
            nu: 0.0,
            sigma: 1.0,
            c: f_u - f_star.unwrap() - mu * cfg.epsilon * cfg.epsilon / 4.0,
            w: w.clone(),
            u: u.clone(),
            f_u,
        }]
    } else {
        Vec::new()
    };

    let record_rho = |rho: f64, nu: f64| -> f64 {
        match fixed_nu {
            Some(nu_fixed) => 1.0 / nu_fixed,
            None => {
                let _ = nu;
                rho
            }
        }
    };

    let mut recorder = Recorder::new(problem, cfg);
    let nu0 = fixed_nu.unwrap_or((mu / rho0).sqrt());
    recorder.record(0, f_u, &u, Some(record_rho(rho, nu0)), None, Some(nu0));

    let mut iter = 0;
    let mut last_nu = nu0;
    let mut converged = cfg.stop_on_target && target_reached(problem, mu, cfg.epsilon, &u, f_u);
    while !converged && iter < cfg.max_iters {
        let pw = project(&problem.feasible, &w)?;

        let (outcome, nu, trials) = match fixed_nu {
            Some(nu) => (momentum_step(problem, &u, &pw, nu, mu)?, nu, None),
            None => {
                let mut j: u32 = 0;
                loop {
                    let trial_rho = rho * 2f64.powi(j as i32);
                    let nu = (mu / trial_rho).sqrt();
                    let out = momentum_step(problem, &u, &pw, nu, mu)?;
                    if ufgm_condition_holds(
                        out.f_v,
                        &out.grad_v,
                        &out.u_next,
                        &out.v,
                        nu,
                        out.eta,
                        mu,
                        cfg.epsilon,
                        out.f_unext,
                    ) {
                        rho = trial_rho;
                        break (out, nu, Some(j + 1));
                    }
                    j += 1;
                    if j > LINE_SEARCH_MAX_DOUBLINGS {
                        return Err(Error::LineSearchRunaway {
                            iter,
                            doublings: j,
                        });
                    }
                }
            }
        };

        // w update uses the accepted v and gradient.
        w = DenseVector::combine(1.0 - outcome.eta, &w, outcome.eta, &outcome.v)
            .minus_scaled(outcome.eta / mu, &outcome.grad_v);
        w.ensure_finite("estimating center")?;
        u = outcome.u_next;
        f_u = outcome.f_unext;
        last_nu = nu;
        iter += 1;

        if let Some(state) = estimating.take() {
            let f_star = f_star.unwrap();
            let next =
                estimating_update(&state, nu, &outcome.v, outcome.f_v, &outcome.grad_v, f_star, mu)?;
            // Descent inequality at the new state, checked every iteration.
            let lhs = next.sigma * (f_u - f_star - mu * cfg.epsilon * cfg.epsilon / 4.0);
            let rhs = phi_eval(&next, &project(&problem.feasible, &next.w)?, mu)?;
            if lhs > rhs + 1e-8 {
                return Err(Error::AuditViolation { iter, lhs, rhs });
            }
            snapshots.push(AuditSnapshot {
                iter,
                nu,
                sigma: next.sigma,
                c: next.c,
                w: next.w.clone(),
                u: u.clone(),
                f_u,
            });
            estimating = Some(next);
        }

        if let Some(t) = trials {
            recorder.note_trials(t);
        }
        recorder.record(iter, f_u, &u, Some(record_rho(rho, nu)), trials, Some(nu));
        converged = cfg.stop_on_target && target_reached(problem, mu, cfg.epsilon, &u, f_u);
    }

    let audit = estimating.map(|state| EstimatingAudit {
        epsilon: cfg.epsilon,
        mu,
        f_star: f_star.unwrap(),
        w0: state.w0.clone(),
        c0: state.c0,
        history: state.history,
        snapshots,
    });

    let (records, summary) = recorder.finish(
        iter,
        f_u,
        &u,
        Some(record_rho(rho, last_nu)),
        None,
        Some(last_nu),
        converged,
    );
    Ok(assemble_trace(records, summary, audit))
}
