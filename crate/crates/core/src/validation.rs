//! Independent oracles that check problem metadata and solver-internal
//! inequalities: finite differences against analytic gradients, sampled
//! smoothness and convexity inequalities, and the estimating-sequence audit.
//!
//! All probes are deterministic given a seed. Inequalities carry an additive
//! slack of `1e-9` to absorb rounding; a violation is counted only beyond it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::{GradientFn, ProbeRegion, ProblemInstance};
use crate::set::{project, FeasibleSet};
use crate::solvers::estimating::phi_eval_recursive;
use crate::stepsize::rho_required;
use crate::trace::SolverTrace;
use crate::vector::DenseVector;

pub const DEFAULT_SEED: u64 = 42;
const PROBE_SLACK: f64 = 1e-9;
/// Pairs with any coordinate this close to zero are resampled: the gradients
/// exist there but sign kinks degrade finite differences.
const KINK_EXCLUSION: f64 = 1e-12;

/// Outcome of one probe. `pass` holds exactly when no violation was found.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub name: String,
    pub samples: usize,
    pub violations: usize,
    /// Most negative slack observed (negative values are violations).
    pub worst_margin: f64,
    pub pass: bool,
}

impl ProbeReport {
    fn new(name: impl Into<String>, samples: usize, violations: usize, worst_margin: f64) -> Self {
        Self {
            name: name.into(),
            samples,
            violations,
            worst_margin,
            pass: violations == 0,
        }
    }
}

impl std::fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:<38} {:>7} samples {:>6} violations  worst margin {:>13.4e}  {}",
            self.name,
            self.samples,
            self.violations,
            self.worst_margin,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Seeded sampler of feasible points from a problem's probe region.
pub struct PairSampler {
    region: ProbeRegion,
    feasible: FeasibleSet,
    dim: usize,
    rng: ChaCha8Rng,
}

impl PairSampler {
    pub fn for_problem(problem: &ProblemInstance, seed: u64) -> Self {
        Self {
            region: problem.probe_region.clone(),
            feasible: problem.feasible.clone(),
            dim: problem.dim,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    // Ball directions use Box-Muller normals: reproducible across platforms.
    fn raw_point(&mut self) -> DenseVector {
        match self.region {
            ProbeRegion::UniformBox { lo, hi } => {
                let vals: Vec<f64> = (0..self.dim).map(|_| self.rng.random_range(lo..hi)).collect();
                DenseVector::new(vals).expect("finite")
            }
            ProbeRegion::BallAround { ref center, radius } => {
                let dir: Vec<f64> = {
                    let mut d = Vec::with_capacity(self.dim);
                    for _ in 0..self.dim {
                        let u1: f64 = self.rng.random::<f64>().max(f64::MIN_POSITIVE);
                        let u2: f64 = self.rng.random::<f64>();
                        d.push((-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos());
                    }
                    d
                };
                let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt().max(1e-300);
                let r = radius * self.rng.random::<f64>().powf(1.0 / self.dim as f64);
                DenseVector::from_fn(self.dim, |i| center[i] + r * dir[i] / norm).expect("finite")
            }
        }
    }

    /// One feasible sample point, resampled away from coordinate kinks.
    pub fn sample(&mut self) -> DenseVector {
        for _ in 0..1000 {
            let raw = self.raw_point();
            let p = project(&self.feasible, &raw).expect("dimension fixed");
            if p.iter().all(|v| v.abs() >= KINK_EXCLUSION) {
                return p;
            }
        }
        // Kink-free resampling failed; accept the last draw.
        let raw = self.raw_point();
        project(&self.feasible, &raw).expect("dimension fixed")
    }

    pub fn sample_pair(&mut self) -> (DenseVector, DenseVector) {
        (self.sample(), self.sample())
    }
}

/// Maximum over coordinates of the relative error between the analytic
/// gradient and central finite differences with the given step. Relative
/// error is measured against `max(|g_i|, 1)`.
pub fn fd_gradient_check(problem: &ProblemInstance, u: &DenseVector, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::invalid(format!("step must be positive, got {step}")));
    }
    if u.len() != problem.dim {
        return Err(Error::DimensionMismatch {
            expected: problem.dim,
            found: u.len(),
        });
    }
    if !problem.feasible.contains(u, 0.0) {
        return Err(Error::invalid("finite-difference point must be feasible"));
    }
    if let Some(i) = (0..u.len()).find(|&i| u[i].abs() <= 10.0 * step) {
        return Err(Error::invalid(format!(
            "coordinate {i} is within 10 steps of a kink; move the probe point"
        )));
    }
    let g = problem.eval_gradient(u)?;
    let mut worst: f64 = 0.0;
    let mut shifted: Vec<f64> = u.as_slice().to_vec();
    for i in 0..u.len() {
        let orig = shifted[i];
        shifted[i] = orig + step;
        let fp = problem.eval_objective(&DenseVector::new(shifted.clone())?)?;
        shifted[i] = orig - step;
        let fm = problem.eval_objective(&DenseVector::new(shifted.clone())?)?;
        shifted[i] = orig;
        let fd = (fp - fm) / (2.0 * step);
        worst = worst.max((fd - g[i]).abs() / g[i].abs().max(1.0));
    }
    Ok(worst)
}

/// Checks the gradient Hölder inequality
/// `‖∇f_i(u) − ∇f_i(v)‖ ≤ L ‖u − v‖^α` over sampled pairs.
pub fn holder_probe(
    gradient: &GradientFn,
    alpha: f64,
    l: f64,
    sampler: &mut PairSampler,
    n_pairs: usize,
) -> ProbeReport {
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..n_pairs {
        let (u, v) = sampler.sample_pair();
        let lhs = gradient(&u).minus(&gradient(&v)).norm();
        let rhs = l * u.dist(&v).powf(alpha) + PROBE_SLACK;
        let margin = rhs - lhs;
        worst = worst.min(margin);
        if margin < 0.0 {
            violations += 1;
        }
    }
    ProbeReport::new(
        format!("holder(alpha={alpha}, L={l:.6})"),
        n_pairs,
        violations,
        worst,
    )
}

/// Checks `f(u) ≥ f(v) + ⟨∇f(v), u−v⟩ + (μ/2)‖u−v‖²` over sampled pairs.
pub fn strong_convexity_probe(problem: &ProblemInstance, n_pairs: usize, seed: u64) -> ProbeReport {
    strong_convexity_probe_with_mu(problem, problem.mu, n_pairs, seed)
}

pub fn strong_convexity_probe_with_mu(
    problem: &ProblemInstance,
    mu: f64,
    n_pairs: usize,
    seed: u64,
) -> ProbeReport {
    let mut sampler = PairSampler::for_problem(problem, seed);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..n_pairs {
        let (u, v) = sampler.sample_pair();
        let d = u.minus(&v);
        let lhs = (problem.objective)(&u);
        let rhs = (problem.objective)(&v) + (problem.gradient)(&v).dot(&d)
            + mu / 2.0 * d.dot(&d)
            - PROBE_SLACK;
        let margin = lhs - rhs;
        worst = worst.min(margin);
        if margin < 0.0 {
            violations += 1;
        }
    }
    ProbeReport::new(format!("strong_convexity(mu={mu:.6})"), n_pairs, violations, worst)
}

/// Checks the inexact quadratic upper model of the averaged objective:
/// `f(v) ≤ f(u) + ⟨∇f(u), v−u⟩ + (ρ/2)‖v−u‖² + δ/2` with
/// `ρ = rho_required(components, δ)`.
pub fn inexact_oracle_probe(
    problem: &ProblemInstance,
    delta: f64,
    n_pairs: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let rho = rho_required(&problem.components, delta)?;
    Ok(inexact_oracle_probe_with_rho(problem, rho, delta, n_pairs, seed))
}

/// Same inequality with an explicit curvature, for fault injection.
pub fn inexact_oracle_probe_with_rho(
    problem: &ProblemInstance,
    rho: f64,
    delta: f64,
    n_pairs: usize,
    seed: u64,
) -> ProbeReport {
    let mut sampler = PairSampler::for_problem(problem, seed);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..n_pairs {
        let (u, v) = sampler.sample_pair();
        let d = v.minus(&u);
        let lhs = (problem.objective)(&v);
        let rhs = (problem.objective)(&u)
            + (problem.gradient)(&u).dot(&d)
            + rho / 2.0 * d.dot(&d)
            + delta / 2.0
            + PROBE_SLACK;
        let margin = rhs - lhs;
        worst = worst.min(margin);
        if margin < 0.0 {
            violations += 1;
        }
    }
    ProbeReport::new(
        format!("inexact_oracle(delta={delta:.0e}, rho={rho:.4})"),
        n_pairs,
        violations,
        worst,
    )
}

/// Re-derives the estimating-sequence inequalities from an audited fast-method
/// trace. Per iteration: (a) the canonical quadratic agrees with the expanded
/// recursion at 100 random points to 1e-8 relative; (b) the scaled descent
/// inequality holds; (c) the optimality-gap bound holds. The scale factors
/// are recomputed from the recorded momentum parameters and must match
/// bit-for-bit.
pub fn estimating_sequence_audit(
    trace: &SolverTrace,
    problem: &ProblemInstance,
    seed: u64,
) -> Result<ProbeReport> {
    let audit = trace
        .audit
        .as_ref()
        .ok_or_else(|| Error::MissingData("trace carries no estimating audit data".into()))?;
    let u_star = problem
        .minimizer
        .as_ref()
        .ok_or_else(|| Error::MissingData("audit requires a known minimizer".into()))?;
    let f_star = audit.f_star;
    let mu = audit.mu;
    let eps = audit.epsilon;
    let phi0_at_star = {
        let d = u_star.dist(&audit.w0);
        audit.c0 + mu / 2.0 * d * d
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut samples = 0;

    let mut sigma_check = 1.0;
    for (k, snap) in audit.snapshots.iter().enumerate() {
        if k > 0 {
            sigma_check *= 1.0 + snap.nu;
        }
        if snap.sigma.to_bits() != sigma_check.to_bits() {
            return Err(Error::AuditViolation {
                iter: snap.iter,
                lhs: snap.sigma,
                rhs: sigma_check,
            });
        }

        // (a) canonical form vs expanded recursion at random points.
        let history = &audit.history[..k];
        for _ in 0..100 {
            let q = DenseVector::from_fn(problem.dim, |_| rng.random_range(-2.0..2.0))?;
            let d = q.dist(&snap.w);
            let canonical = snap.c + snap.sigma * mu / 2.0 * d * d;
            let recursive = phi_eval_recursive(&audit.w0, audit.c0, history, f_star, &q, mu);
            let scale = 1.0_f64.max(canonical.abs()).max(recursive.abs());
            let margin = 1e-8 - (canonical - recursive).abs() / scale;
            samples += 1;
            worst = worst.min(margin);
            if margin < 0.0 {
                violations += 1;
            }
        }

        // (b) sigma_k (f(u_k) - f* - mu eps^2/4) <= phi_k(Pi(w_k)) + 1e-8.
        let pw = project(&problem.feasible, &snap.w)?;
        let dp = pw.dist(&snap.w);
        let phi_at_pw = snap.c + snap.sigma * mu / 2.0 * dp * dp;
        let lhs = snap.sigma * (snap.f_u - f_star - mu * eps * eps / 4.0);
        let margin_b = phi_at_pw + 1e-8 - lhs;
        samples += 1;
        worst = worst.min(margin_b);
        if margin_b < 0.0 {
            violations += 1;
        }

        // (c) f(u_k) - f* <= phi_0(u*)/sigma_k + mu eps^2/4 + 1e-8.
        let margin_c = phi0_at_star / snap.sigma + mu * eps * eps / 4.0 + 1e-8 - (snap.f_u - f_star);
        samples += 1;
        worst = worst.min(margin_c);
        if margin_c < 0.0 {
            violations += 1;
        }
    }

    Ok(ProbeReport::new(
        "estimating_sequence_audit",
        samples,
        violations,
        worst,
    ))
}
