//! Estimating-sequence bookkeeping for the fast gradient method.
//!
//! The sequence of quadratics `φ_k(u) = c_k + (σ_k μ/2)‖u − w_k‖²` starts at
//! `σ_0 = 1`, `c_0 = f(u_0) − f* − μ ε²/4`, `w_0 = u_0` and is advanced by one
//! rank-preserving update per accepted iteration. The recursion history is
//! retained so that the canonical form can be cross-evaluated against the
//! fully expanded sum.

use crate::error::{Error, Result};
use crate::vector::DenseVector;

/// One accepted-iteration contribution to the recursion,
/// `ν_l σ_l [f(v_l) − f* + ⟨∇f(v_l), u − v_l⟩ + (μ/2)‖u − v_l‖²]`.
#[derive(Debug, Clone)]
pub struct HistoryEntry {
    pub nu_sigma: f64,
    pub v: DenseVector,
    pub f_v: f64,
    pub grad_v: DenseVector,
}

/// Canonical-form state `(σ_k, c_k, w_k)` together with the recursion data.
#[derive(Debug, Clone)]
pub struct EstimatingState {
    pub sigma: f64,
    pub c: f64,
    pub w: DenseVector,
    pub history: Vec<HistoryEntry>,
    pub w0: DenseVector,
    pub c0: f64,
}

impl EstimatingState {
    /// Initial state with `σ_0 = 1` and `c_0 = f(u_0) − f* − μ ε²/4`.
    pub fn initial(u0: &DenseVector, f_u0: f64, f_star: f64, mu: f64, epsilon: f64) -> Self {
        let c0 = f_u0 - f_star - mu * epsilon * epsilon / 4.0;
        Self {
            sigma: 1.0,
            c: c0,
            w: u0.clone(),
            history: Vec::new(),
            w0: u0.clone(),
            c0,
        }
    }
}

/// Advances the canonical form by one accepted iteration: `σ⁺ = (1+ν)σ`, the
/// quadratic's center moves to
/// `w⁺ = (1−η)w + ηv − (η/μ)∇f(v)` with `η = ν/(1+ν)`, and the offset becomes
/// `c⁺ = c + (σμ/2)‖w⁺−w‖² + νσ(f(v)−f*) + νσ⟨∇f(v), w⁺−v⟩ + (νσμ/2)‖w⁺−v‖²`.
pub fn estimating_update(
    state: &EstimatingState,
    nu: f64,
    v: &DenseVector,
    f_v: f64,
    grad_v: &DenseVector,
    f_star: f64,
    mu: f64,
) -> Result<EstimatingState> {
    if !(nu > 0.0) {
        return Err(Error::invalid(format!("nu must be positive, got {nu}")));
    }
    let eta = nu / (1.0 + nu);
    let w_next = DenseVector::combine(1.0 - eta, &state.w, eta, v).minus_scaled(eta / mu, grad_v);
    let dw = w_next.minus(&state.w);
    let dv = w_next.minus(v);
    let nu_sigma = nu * state.sigma;
    let c_next = state.c
        + state.sigma * mu / 2.0 * dw.dot(&dw)
        + nu_sigma * (f_v - f_star)
        + nu_sigma * grad_v.dot(&dv)
        + nu_sigma * mu / 2.0 * dv.dot(&dv);

    let mut history = state.history.clone();
    history.push(HistoryEntry {
        nu_sigma,
        v: v.clone(),
        f_v,
        grad_v: grad_v.clone(),
    });
    Ok(EstimatingState {
        sigma: (1.0 + nu) * state.sigma,
        c: c_next,
        w: w_next,
        history,
        w0: state.w0.clone(),
        c0: state.c0,
    })
}

/// Evaluates the canonical form `φ_k(u) = c_k + (σ_k μ/2)‖u − w_k‖²`.
pub fn phi_eval(state: &EstimatingState, u: &DenseVector, mu: f64) -> Result<f64> {
    if u.len() != state.w.len() {
        return Err(Error::DimensionMismatch {
            expected: state.w.len(),
            found: u.len(),
        });
    }
    let d = u.dist(&state.w);
    Ok(state.c + state.sigma * mu / 2.0 * d * d)
}

/// Evaluates `φ_k(u)` by expanding the full recursion from `φ_0` — the
/// independent route used to audit the canonical form.
pub fn phi_eval_recursive(
    w0: &DenseVector,
    c0: f64,
    history: &[HistoryEntry],
    f_star: f64,
    u: &DenseVector,
    mu: f64,
) -> f64 {
    let d0 = u.dist(w0);
    let mut total = c0 + mu / 2.0 * d0 * d0;
    for entry in history {
        let dv = u.dist(&entry.v);
        total += entry.nu_sigma
            * (entry.f_v - f_star + entry.grad_v.dot(&u.minus(&entry.v)) + mu / 2.0 * dv * dv);
    }
    total
}

/// Per-iteration snapshot taken by the fast method when the audit mode is on.
/// `iter = k` stores the state after `k` updates together with the iterate
/// `u_k`, so `snapshots[0]` is the initial state.
#[derive(Debug, Clone)]
pub struct AuditSnapshot {
    pub iter: usize,
    /// Momentum parameter accepted at this iteration (0 at `iter = 0`).
    pub nu: f64,
    pub sigma: f64,
    pub c: f64,
    pub w: DenseVector,
    pub u: DenseVector,
    pub f_u: f64,
}

/// Everything needed to re-derive and check the estimating inequalities
/// after a run.
#[derive(Debug, Clone)]
pub struct EstimatingAudit {
    pub epsilon: f64,
    pub mu: f64,
    pub f_star: f64,
    pub w0: DenseVector,
    pub c0: f64,
    pub history: Vec<HistoryEntry>,
    pub snapshots: Vec<AuditSnapshot>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state1d() -> EstimatingState {
        let u0 = DenseVector::new(vec![1.0]).unwrap();
        // f(u0) = 7/6 for the univariate benchmark, f* = 0, eps = 1e-2.
        EstimatingState::initial(&u0, 7.0 / 6.0, 0.0, 1.0, 1e-2)
    }

    #[test]
    fn sigma_recursion() {
        let s = state1d();
        assert_eq!(s.sigma, 1.0);
        let v = DenseVector::new(vec![0.5]).unwrap();
        let g = DenseVector::new(vec![0.5]).unwrap();
        let s1 = estimating_update(&s, 0.5, &v, 0.125, &g, 0.0, 1.0).unwrap();
        assert_eq!(s1.sigma, 1.5);
        assert!(estimating_update(&s, 0.0, &v, 0.125, &g, 0.0, 1.0).is_err());
    }

    #[test]
    fn phi_at_center_is_c() {
        let s = state1d();
        let c0 = 7.0 / 6.0 - 1e-4 / 4.0;
        assert!((phi_eval(&s, &s.w, 1.0).unwrap() - c0).abs() < 1e-15);
        // At w0 the canonical and recursive forms coincide with c0.
        let rec = phi_eval_recursive(&s.w0, s.c0, &s.history, 0.0, &s.w0, 1.0);
        assert!((rec - c0).abs() < 1e-15);
    }

    #[test]
    fn canonical_matches_recursive_after_updates() {
        let mut s = state1d();
        let mu = 1.0;
        // A few synthetic strongly-convex update steps: f(x) = x^2/2 + |x|.
        let f = |x: f64| 0.5 * x * x + x.abs();
        let g = |x: f64| x + x.signum();
        let mut x = 0.8;
        for k in 0..5 {
            let v = DenseVector::new(vec![x]).unwrap();
            let gv = DenseVector::new(vec![g(x)]).unwrap();
            s = estimating_update(&s, 0.3 + 0.1 * k as f64, &v, f(x), &gv, 0.0, mu).unwrap();
            x *= -0.6;
        }
        for q in [-2.0, -0.3, 0.0, 0.7, 1.9] {
            let u = DenseVector::new(vec![q]).unwrap();
            let can = phi_eval(&s, &u, mu).unwrap();
            let rec = phi_eval_recursive(&s.w0, s.c0, &s.history, 0.0, &u, mu);
            let scale = 1.0_f64.max(can.abs());
            assert!((can - rec).abs() <= 1e-12 * scale, "q = {q}: {can} vs {rec}");
        }
    }
}
