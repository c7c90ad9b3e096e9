//! Implementations behind the four subcommands.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use holder_pg::stepsize::{
    alpha_hat, constant_m, pgdm_stepsize, predict_iterations, ufgm_fixed_nu, ufgm_omega,
};
use holder_pg::validation::{
    fd_gradient_check, holder_probe, inexact_oracle_probe, strong_convexity_probe, PairSampler,
    ProbeReport,
};
use holder_pg::{Algorithm, DenseVector, ProblemInstance};

use crate::csvio::write_trace_csv;
use crate::experiment::{ExperimentSpec, ProblemKind, RunOutcome};
use crate::svg::{semilogy_svg, Series};

pub fn run_command(spec: &ExperimentSpec, out: &Path) -> Result<RunOutcome> {
    let outcome = spec.run()?;
    write_trace_csv(&outcome.trace, out)
        .with_context(|| format!("writing trace to {}", out.display()))?;
    for line in outcome.summary_lines() {
        println!("{line}");
    }
    if let Some(k) = outcome.k_star() {
        println!("k_star:             {k}");
    }
    println!("trace:              {}", out.display());
    Ok(outcome)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Alpha,
    Tau0,
    Eps,
}

impl SweepParam {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(Self::Alpha),
            "tau0" => Ok(Self::Tau0),
            "eps" => Ok(Self::Eps),
            other => bail!("unknown sweep parameter `{other}` (expected alpha | tau0 | eps)"),
        }
    }

    fn apply(self, base: &ExperimentSpec, value: f64) -> ExperimentSpec {
        let mut spec = base.clone();
        match self {
            Self::Alpha => spec.alpha = value,
            Self::Tau0 => spec.tau0 = Some(value),
            Self::Eps => spec.epsilon = value,
        }
        spec
    }

    fn name(self) -> &'static str {
        match self {
            Self::Alpha => "alpha",
            Self::Tau0 => "tau0",
            Self::Eps => "eps",
        }
    }
}

/// Runs `base` once per parameter value (shared seed), writing one CSV per
/// run and a combined semilog overlay. Failed runs keep the partial outputs
/// and fail the sweep as a whole.
pub fn sweep_command(
    base: &ExperimentSpec,
    param: SweepParam,
    values: &[f64],
    out_dir: &Path,
    svg_path: Option<&Path>,
) -> Result<Vec<RunOutcome>> {
    if values.is_empty() {
        bail!("sweep needs at least one value");
    }
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating sweep directory {}", out_dir.display()))?;

    let mut outcomes = Vec::new();
    let mut series = Vec::new();
    let mut failure: Option<anyhow::Error> = None;
    for &value in values {
        let spec = param.apply(base, value);
        let label = format!("{}={value}", param.name());
        match spec.run() {
            Ok(outcome) => {
                let csv = out_dir.join(format!("sweep_{}_{value}.csv", param.name()));
                write_trace_csv(&outcome.trace, &csv)?;
                let points: Vec<(f64, f64)> = outcome
                    .trace
                    .records
                    .iter()
                    .filter_map(|r| {
                        r.dist_to_min
                            .or(r.residual)
                            .map(|y| (r.iter as f64, y))
                    })
                    .collect();
                series.push(Series {
                    label: label.clone(),
                    points,
                });
                let metric = outcome
                    .trace
                    .summary
                    .final_dist
                    .or(outcome.trace.summary.final_residual)
                    .unwrap_or(outcome.trace.summary.final_f);
                match outcome.k_star() {
                    Some(k) => println!("{label}: k_star={k} final={metric:.6e}"),
                    None => println!("{label}: final={metric:.6e} ({} iterations)", outcome.trace.summary.iterations),
                }
                outcomes.push(outcome);
            }
            Err(e) => {
                eprintln!("{label}: FAILED: {e:#}");
                failure.get_or_insert(e.context(format!("sweep value {label}")));
            }
        }
    }

    if let Some(svg_path) = svg_path {
        let y_label = if base.problem == ProblemKind::Elliptic2 {
            "residual norm"
        } else {
            "distance to minimizer"
        };
        let title = format!("{} {} sweep over {}", base.problem_label(), base.algo, param.name());
        let svg = semilogy_svg(&title, "iteration", y_label, &series);
        std::fs::write(svg_path, svg)
            .with_context(|| format!("writing overlay to {}", svg_path.display()))?;
        println!("overlay:            {}", svg_path.display());
    }

    match failure {
        Some(e) => Err(e),
        None => Ok(outcomes),
    }
}

impl ExperimentSpec {
    pub fn problem_label(&self) -> &'static str {
        match self.problem {
            ProblemKind::Example1 => "example1",
            ProblemKind::Elliptic1 => "elliptic1",
            ProblemKind::Elliptic2 => "elliptic2",
            ProblemKind::Quadratic => "quadratic",
        }
    }
}

/// A kink-free point for the finite-difference check, clear of sign kinks
/// and inside the feasible set.
fn fd_probe_point(spec: &ExperimentSpec, problem: &ProblemInstance) -> Result<(DenseVector, f64)> {
    match spec.problem {
        ProblemKind::Example1 | ProblemKind::Quadratic => {
            Ok((DenseVector::new(vec![1.0])?, 1e-6))
        }
        ProblemKind::Elliptic1 => {
            // The harmonic start is nonnegative; shifting by 0.1 clears zero.
            let u0 = problem.initial.clone().expect("elliptic1 carries a start");
            Ok((u0.map(|v| v + 0.1), 1e-5))
        }
        ProblemKind::Elliptic2 => {
            let u0 = problem.initial.clone().expect("elliptic2 carries a start");
            Ok((u0.map(|v| v.abs().clamp(0.2, 0.8)), 1e-5))
        }
    }
}

/// Runs every probe for the selected problem and prints the reports.
/// Returns true iff all of them pass.
pub fn validate_command(spec: &ExperimentSpec) -> Result<bool> {
    let problem = spec.build_problem()?;
    println!(
        "validating {} (n = {}, mu = {:.6}, seed = {})",
        problem.name, problem.dim, problem.mu, spec.seed
    );

    let mut reports: Vec<ProbeReport> = Vec::new();

    let (fd_point, fd_step) = fd_probe_point(spec, &problem)?;
    let fd_err = fd_gradient_check(&problem, &fd_point, fd_step)?;
    reports.push(ProbeReport {
        name: format!("fd_gradient_check(step={fd_step:.0e})"),
        samples: problem.dim,
        violations: usize::from(fd_err > 1e-5),
        worst_margin: 1e-5 - fd_err,
        pass: fd_err <= 1e-5,
    });

    for (i, meta) in problem.components.iter().enumerate() {
        let mut sampler = PairSampler::for_problem(&problem, spec.seed);
        let mut r = holder_probe(
            &problem.component_gradients[i],
            meta.alpha,
            meta.lipschitz_holder,
            &mut sampler,
            10_000,
        );
        r.name = format!("component {i} {r_name}", r_name = r.name);
        reports.push(r);
    }

    reports.push(strong_convexity_probe(&problem, 1000, spec.seed));
    for delta in [1e-1, 1e-2, 1e-3] {
        reports.push(inexact_oracle_probe(&problem, delta, 10_000, spec.seed)?);
    }

    let mut all_pass = true;
    for r in &reports {
        println!("{r}");
        all_pass &= r.pass;
    }
    println!("overall: {}", if all_pass { "PASS" } else { "FAIL" });
    Ok(all_pass)
}

/// Prints the closed-form constants and iteration bounds for the selected
/// problem at the given accuracy.
pub fn predict_command(spec: &ExperimentSpec, d0_flag: Option<f64>) -> Result<()> {
    let problem = spec.build_problem()?;
    let mu = spec.mu_override.unwrap_or(problem.mu);
    let a_hat = alpha_hat(&problem.components)?;
    let m = constant_m(&problem.components, mu)?;
    let eps = spec.epsilon;

    println!("problem:   {} (n = {})", problem.name, problem.dim);
    println!("mu:        {mu:.6}");
    for (i, c) in problem.components.iter().enumerate() {
        println!("component {i}: alpha = {}, L = {:.6}", c.alpha, c.lipschitz_holder);
    }
    println!("alpha_hat: {a_hat}");
    println!("M:         {m:.6}");
    println!("epsilon:   {eps:e}");
    println!("tau:       {:.6e}", pgdm_stepsize(eps, m, a_hat)?);
    match ufgm_fixed_nu(eps, m, mu, a_hat) {
        Ok(nu) => println!("nu:        {nu:.6e}"),
        Err(e) => println!("nu:        unavailable ({e})"),
    }
    println!("omega:     {:.6e}", ufgm_omega(mu, m, a_hat));

    let d0 = d0_flag.or_else(|| {
        match (&problem.minimizer, &problem.initial) {
            (Some(star), Some(u0)) => Some(u0.dist(star)),
            _ => None,
        }
    });
    let gap0 = match (problem.optimal_value, &problem.initial) {
        (Some(fstar), Some(u0)) => Some((problem.objective)(u0) - fstar),
        _ => None,
    };

    match d0 {
        Some(d0) => {
            println!("d0:        {d0:.6e}");
            let descent = predict_iterations(Algorithm::Pgdm, eps, m, mu, a_hat, d0, None)?;
            println!(
                "descent/primal bound: {:.1} iterations (eps-exponent {:.4})",
                descent.predicted_iterations, descent.exponent
            );
            match gap0 {
                Some(gap0) => {
                    let fast =
                        predict_iterations(Algorithm::Ufgm, eps, m, mu, a_hat, d0, Some(gap0))?;
                    println!(
                        "fast bound:           {:.1} iterations (eps-exponent {:.4})",
                        fast.predicted_iterations, fast.exponent
                    );
                }
                None => println!(
                    "fast bound:           needs f(u0) − f*; unavailable without the optimal value"
                ),
            }
        }
        None => {
            // No minimizer and no --d0: report the bounds parametrically.
            let q1 = 2.0 * (1.0 - a_hat) / (1.0 + a_hat);
            let q3 = 2.0 * (1.0 - a_hat) / (1.0 + 3.0 * a_hat);
            let lead1 = 4.0 * m / (mu * (1.0 + a_hat) * eps.powf(q1));
            let lead3 = 4.0 / (ufgm_omega(mu, m, a_hat) * eps.powf(q3));
            println!("d0:        unknown (pass --d0 to evaluate the bounds)");
            println!(
                "descent/primal bound: {lead1:.4e} * ln((2 M d0^2 / mu)^{{(1+a)/4}} / eps) with a = {a_hat}"
            );
            println!(
                "fast bound:           {lead3:.4e} * ln(sqrt(2 (2 gap0/mu + d0^2)) / eps)"
            );
        }
    }
    Ok(())
}

/// Resolves the run seed: explicit flag, then HOLDER_PG_SEED, then 42.
pub fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("HOLDER_PG_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(42)
}

pub fn default_out_path(spec: &ExperimentSpec) -> PathBuf {
    PathBuf::from(format!("{}_{}.csv", spec.problem_label(), spec.algo))
}
