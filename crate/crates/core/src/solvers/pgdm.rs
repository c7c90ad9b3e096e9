//! Projected gradient descent with a fixed, accuracy-matched stepsize.

use crate::error::{Error, Result};
use crate::problem::ProblemInstance;
use crate::set::project;
use crate::stepsize::{alpha_hat, constant_m, pgdm_stepsize};
use crate::trace::SolverTrace;

use super::{assemble_trace, effective_mu, starting_point, target_reached, Recorder, SolverConfig};

/// Runs the fixed-stepsize descent method. The stepsize is
/// `cfg.fixed_step` when supplied, otherwise `ε^{2(1−α̂)/(1+α̂)}/M` from the
/// problem's component metadata. A best-so-far iterate is maintained: the
/// tracked point only moves when the objective does not increase.
pub fn pgdm(problem: &ProblemInstance, cfg: &SolverConfig) -> Result<SolverTrace> {
    let mu = effective_mu(problem, cfg);
    let tau = match cfg.fixed_step {
        Some(t) => t,
        None => pgdm_stepsize(
            cfg.epsilon,
            constant_m(&problem.components, mu)?,
            alpha_hat(&problem.components)?,
        )?,
    };
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!("stepsize must be positive and finite, got {tau}")));
    }

    let u0 = starting_point(problem, cfg)?;
    let mut v = u0.clone();
    let mut u = u0;
    let mut f_u = problem.eval_objective(&u)?;

    let mut recorder = Recorder::new(problem, cfg);
    recorder.record(0, f_u, &u, None, None, Some(tau));

    let mut iter = 0;
    let mut converged = cfg.stop_on_target && target_reached(problem, mu, cfg.epsilon, &u, f_u);
    while !converged && iter < cfg.max_iters {
        let g = problem.eval_gradient(&v)?;
        v = project(&problem.feasible, &v.minus_scaled(tau, &g))?;
        v.ensure_finite("descent iterate")?;
        let f_v = problem.eval_objective(&v)?;
        if f_v <= f_u {
            u = v.clone();
            f_u = f_v;
        }
        iter += 1;
        recorder.record(iter, f_u, &u, None, None, Some(tau));
        converged = cfg.stop_on_target && target_reached(problem, mu, cfg.epsilon, &u, f_u);
    }

    let (records, summary) = recorder.finish(iter, f_u, &u, None, None, Some(tau), converged);
    Ok(assemble_trace(records, summary, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{example1, quadratic};

    #[test]
    fn quadratic_contracts_exactly_at_half_step() {
        // v_{k+1} = (1 - tau) v_k with tau = 1/2 halves the iterate exactly.
        let p = quadratic(1);
        let cfg = SolverConfig::new(1e-6, 10)
            .unwrap()
            .with_fixed_step(0.5)
            .with_initial(crate::vector::DenseVector::new(vec![1.0]).unwrap())
            .with_stop_on_target(false);
        let trace = pgdm(&p, &cfg).unwrap();
        for r in &trace.records {
            let expected = 0.5f64.powi(r.iter as i32);
            assert_eq!(r.dist_to_min.unwrap(), expected, "iter {}", r.iter);
        }
    }

    #[test]
    fn example1_reaches_target_within_predicted_bound() {
        let p = example1();
        let cfg = SolverConfig::new(0.1, 100_000).unwrap();
        let trace = pgdm(&p, &cfg).unwrap();
        assert!(trace.summary.converged);
        assert!(trace.summary.final_dist.unwrap() <= 0.1);
        let m = constant_m(&p.components, 1.0).unwrap();
        let bound = crate::stepsize::predict_iterations(
            crate::stepsize::Algorithm::Pgdm,
            0.1,
            m,
            1.0,
            0.5,
            1.0,
            None,
        )
        .unwrap()
        .predicted_iterations;
        assert!((trace.summary.iterations as f64) <= bound);
    }

    #[test]
    fn naive_fixed_step_stagnates_near_tau_squared() {
        // tau = 0.1 with no accuracy scaling plateaus around tau^2 = 1e-2.
        let p = example1();
        let cfg = SolverConfig::new(1e-6, 20_000)
            .unwrap()
            .with_fixed_step(0.1)
            .with_stop_on_target(false);
        let trace = pgdm(&p, &cfg).unwrap();
        let min_late = trace
            .records
            .iter()
            .filter(|r| r.iter >= 100)
            .map(|r| r.dist_to_min.unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(min_late >= 1e-3, "plateau broke: {min_late}");
        assert!(min_late <= 5e-2, "no plateau reached: {min_late}");
    }

    #[test]
    fn best_so_far_objective_is_monotone() {
        let p = example1();
        let cfg = SolverConfig::new(1e-3, 2_000).unwrap().with_fixed_step(0.35);
        let trace = pgdm(&p, &cfg).unwrap();
        for pair in trace.records.windows(2) {
            assert!(pair[1].f_value <= pair[0].f_value);
        }
    }

    #[test]
    fn non_finite_stepsize_rejected() {
        let p = example1();
        let cfg = SolverConfig::new(1e-2, 10).unwrap().with_fixed_step(f64::NAN);
        assert!(pgdm(&p, &cfg).is_err());
    }
}
