//! Closed-form stepsize constants and iteration-count predictors.
//!
//! All exponent arithmetic follows the convention `0^0 = 1`, implemented as an
//! explicit branch on `alpha == 1` rather than a floating-point `pow(0, 0)`.

use crate::error::{Error, Result};
use crate::problem::ComponentMeta;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Pgdm,
    Upgm,
    Ufgm,
    UfgmFixed,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Algorithm::Pgdm => "pgdm",
            Algorithm::Upgm => "upgm",
            Algorithm::Ufgm => "ufgm",
            Algorithm::UfgmFixed => "ufgm-fixed",
        };
        f.write_str(s)
    }
}

/// Iteration upper bound for reaching `‖u_k − u*‖ ≤ ε`, together with the
/// constants that produced it.
#[derive(Debug, Clone)]
pub struct ComplexityPrediction {
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub constant_m: f64,
    pub alpha_hat: f64,
    pub predicted_iterations: f64,
    /// The ε-exponent of the bound: `2(1−α̂)/(1+α̂)` for the primal methods,
    /// `2(1−α̂)/(1+3α̂)` for the fast method.
    pub exponent: f64,
    /// Rate constant of the fast method; `None` for the primal methods.
    pub omega: Option<f64>,
}

/// Smallest Hölder exponent over the components; it governs every
/// complexity exponent.
pub fn alpha_hat(components: &[ComponentMeta]) -> Result<f64> {
    components
        .iter()
        .map(|c| c.alpha)
        .min_by(|a, b| a.total_cmp(b))
        .ok_or_else(|| Error::invalid("alpha_hat of an empty component list"))
}

/// The curvature constant
/// `M = max_i [2(1−α_i)/(μ(1+α_i))]^{(1−α_i)/(1+α_i)} · L_i^{2/(1+α_i)}`,
/// with the `α_i = 1` term equal to `L_i`.
pub fn constant_m(components: &[ComponentMeta], mu: f64) -> Result<f64> {
    if components.is_empty() {
        return Err(Error::invalid("constant_m of an empty component list"));
    }
    if !(mu > 0.0) {
        return Err(Error::invalid(format!("mu must be positive, got {mu}")));
    }
    let mut best = f64::NEG_INFINITY;
    for c in components {
        let term = if c.alpha == 1.0 {
            c.lipschitz_holder
        } else {
            let ratio = (1.0 - c.alpha) / (1.0 + c.alpha);
            (2.0 * (1.0 - c.alpha) / (mu * (1.0 + c.alpha))).powf(ratio)
                * c.lipschitz_holder.powf(2.0 / (1.0 + c.alpha))
        };
        best = best.max(term);
    }
    Ok(best)
}

/// Smallest curvature `ρ` for which the inexact quadratic upper model with
/// slack `δ/2` holds:
/// `ρ = max_i [(1−α_i)/((1+α_i)δ)]^{(1−α_i)/(1+α_i)} · L_i^{2/(1+α_i)}`.
pub fn rho_required(components: &[ComponentMeta], delta: f64) -> Result<f64> {
    if components.is_empty() {
        return Err(Error::invalid("rho_required of an empty component list"));
    }
    if !(delta > 0.0) {
        return Err(Error::invalid(format!("delta must be positive, got {delta}")));
    }
    let mut best = f64::NEG_INFINITY;
    for c in components {
        let term = if c.alpha == 1.0 {
            c.lipschitz_holder
        } else {
            let ratio = (1.0 - c.alpha) / (1.0 + c.alpha);
            ((1.0 - c.alpha) / ((1.0 + c.alpha) * delta)).powf(ratio)
                * c.lipschitz_holder.powf(2.0 / (1.0 + c.alpha))
        };
        best = best.max(term);
    }
    Ok(best)
}

fn check_common(epsilon: f64, m: f64, alpha_hat: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::invalid(format!("M must be positive, got {m}")));
    }
    if !(alpha_hat > 0.0 && alpha_hat <= 1.0) {
        return Err(Error::invalid(format!(
            "alpha_hat must lie in (0,1], got {alpha_hat}"
        )));
    }
    Ok(())
}

/// Accuracy-matched fixed stepsize `τ = ε^{2(1−α̂)/(1+α̂)} / M` for the
/// descent method.
pub fn pgdm_stepsize(epsilon: f64, m: f64, alpha_hat: f64) -> Result<f64> {
    check_common(epsilon, m, alpha_hat)?;
    Ok(epsilon.powf(2.0 * (1.0 - alpha_hat) / (1.0 + alpha_hat)) / m)
}

/// Fixed momentum parameter
/// `ν = 2 [μ/(4M)]^{(1+α̂)/(1+3α̂)} ε^{2(1−α̂)/(1+3α̂)}` for the fast method
/// run without a line search. Values above 1 are rejected: the convergence
/// argument requires `ν ≤ 1`.
pub fn ufgm_fixed_nu(epsilon: f64, m: f64, mu: f64, alpha_hat: f64) -> Result<f64> {
    check_common(epsilon, m, alpha_hat)?;
    if !(mu > 0.0) {
        return Err(Error::invalid(format!("mu must be positive, got {mu}")));
    }
    let nu = 2.0
        * (mu / (4.0 * m)).powf((1.0 + alpha_hat) / (1.0 + 3.0 * alpha_hat))
        * epsilon.powf(2.0 * (1.0 - alpha_hat) / (1.0 + 3.0 * alpha_hat));
    if nu > 1.0 {
        return Err(Error::ParameterInconsistency(format!(
            "fixed stepsize nu = {nu:.6} exceeds 1; decrease epsilon or check (mu, M)"
        )));
    }
    Ok(nu)
}

/// Rate constant `ω = 2^{−2/(1+3α̂)} (μ/M)^{(1+α̂)/(1+3α̂)}` of the fast
/// method's bound.
pub fn ufgm_omega(mu: f64, m: f64, alpha_hat: f64) -> f64 {
    2f64.powf(-2.0 / (1.0 + 3.0 * alpha_hat))
        * (mu / m).powf((1.0 + alpha_hat) / (1.0 + 3.0 * alpha_hat))
}

/// Evaluates the iteration upper bound for the given algorithm.
///
/// The primal methods use
/// `4M log((2M d₀²/μ)^{(1+α̂)/4}/ε) / (μ (1+α̂) ε^{2(1−α̂)/(1+α̂)})` and the
/// fast method `4 log(√(2χ)/ε) / (ω ε^{2(1−α̂)/(1+3α̂)})` with
/// `χ = 2·gap₀/μ + d₀²`. Logarithms are natural.
pub fn predict_iterations(
    algorithm: Algorithm,
    epsilon: f64,
    m: f64,
    mu: f64,
    alpha_hat: f64,
    d0: f64,
    gap0: Option<f64>,
) -> Result<ComplexityPrediction> {
    check_common(epsilon, m, alpha_hat)?;
    if !(mu > 0.0) {
        return Err(Error::invalid(format!("mu must be positive, got {mu}")));
    }
    if !(d0 > 0.0 && d0.is_finite()) {
        return Err(Error::invalid(format!("d0 must be positive, got {d0}")));
    }
    let (bound, exponent, omega) = match algorithm {
        Algorithm::Pgdm | Algorithm::Upgm => {
            let q = 2.0 * (1.0 - alpha_hat) / (1.0 + alpha_hat);
            let arg = (2.0 * m * d0 * d0 / mu).powf((1.0 + alpha_hat) / 4.0) / epsilon;
            let bound = 4.0 * m * arg.ln() / (mu * (1.0 + alpha_hat) * epsilon.powf(q));
            (bound, q, None)
        }
        Algorithm::Ufgm | Algorithm::UfgmFixed => {
            let gap0 = gap0.ok_or_else(|| {
                Error::MissingData("gap0 = f(u0) − f* is required for the fast-method bound".into())
            })?;
            if gap0 < 0.0 {
                return Err(Error::invalid(format!("gap0 must be nonnegative, got {gap0}")));
            }
            let q = 2.0 * (1.0 - alpha_hat) / (1.0 + 3.0 * alpha_hat);
            let omega = ufgm_omega(mu, m, alpha_hat);
            let chi = 2.0 * gap0 / mu + d0 * d0;
            let bound = 4.0 * ((2.0 * chi).sqrt() / epsilon).ln() / (omega * epsilon.powf(q));
            (bound, q, Some(omega))
        }
    };
    Ok(ComplexityPrediction {
        algorithm,
        epsilon,
        constant_m: m,
        alpha_hat,
        predicted_iterations: bound.max(1.0),
        exponent,
        omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn meta(alpha: f64, l: f64) -> ComponentMeta {
        ComponentMeta::new(alpha, l).unwrap()
    }

    fn example1_components() -> Vec<ComponentMeta> {
        vec![meta(1.0, 2.0), meta(0.5, 2.0 * 2f64.sqrt())]
    }

    #[test]
    fn alpha_hat_takes_the_minimum() {
        assert_eq!(alpha_hat(&[meta(1.0, 2.0)]).unwrap(), 1.0);
        assert_eq!(alpha_hat(&example1_components()).unwrap(), 0.5);
        assert_eq!(alpha_hat(&[meta(0.3, 1.0), meta(0.7, 5.0)]).unwrap(), 0.3);
        assert!(alpha_hat(&[]).is_err());
    }

    #[test]
    fn constant_m_known_values() {
        // alpha = 1 term reduces to L for any mu.
        assert_eq!(constant_m(&[meta(1.0, 2.0)], 7.3).unwrap(), 2.0);
        // max{2, 4 (2/3)^(1/3)}
        let m = constant_m(&example1_components(), 1.0).unwrap();
        assert!((m - 3.4943218589451956).abs() < 1e-12);
        let m2 = constant_m(&[meta(0.5, 1.0)], 2.0).unwrap();
        assert!((m2 - 0.6933612743506347).abs() < 1e-12);
        assert!(constant_m(&example1_components(), 0.0).is_err());
    }

    #[test]
    fn rho_required_known_values() {
        assert_eq!(rho_required(&[meta(1.0, 3.0)], 0.1).unwrap(), 3.0);
        let r = rho_required(&[meta(0.5, 2.0 * 2f64.sqrt())], 0.05).unwrap();
        assert!((r - 7.5282882310482275).abs() < 1e-12);
        assert!(rho_required(&[meta(1.0, 3.0)], 0.0).is_err());
    }

    #[test]
    fn rho_at_matched_delta_equals_m_scaling() {
        // With delta = mu eps^2 / 2 the required curvature is exactly
        // M · eps^{-2(1-a)/(1+a)} for a single component.
        let cases = [
            (0.3, 1.5, 0.8, 0.05),
            (0.5, 2.0, 1.0, 0.01),
            (0.7, 0.4, 3.0, 0.2),
            (0.9, 5.0, 0.5, 0.1),
            (0.25, 1.0, 2.0, 0.02),
            (0.6, 3.3, 1.7, 0.005),
            (0.45, 0.9, 0.9, 0.15),
            (0.8, 2.2, 4.0, 0.03),
            (0.35, 1.1, 1.2, 0.07),
            (0.55, 6.0, 2.5, 0.008),
        ];
        for (a, l, mu, eps) in cases {
            let comps = [meta(a, l)];
            let delta = mu * eps * eps / 2.0;
            let lhs = rho_required(&comps, delta).unwrap();
            let m = constant_m(&comps, mu).unwrap();
            let rhs = m * eps.powf(-2.0 * (1.0 - a) / (1.0 + a));
            assert!((lhs - rhs).abs() <= 1e-10 * rhs, "case {a} {l} {mu} {eps}");
        }
    }

    #[test]
    fn pgdm_stepsize_values() {
        assert_eq!(pgdm_stepsize(0.37, 2.0, 1.0).unwrap(), 0.5);
        let tau = pgdm_stepsize(1e-2, 3.4943218589451956, 0.5).unwrap();
        assert!((tau - 0.013283232114782639).abs() < 1e-15);
        assert!(pgdm_stepsize(1e-3, 3.5, 0.5).unwrap() < tau);
        assert!(pgdm_stepsize(1.0, 2.0, 0.5).is_err());
        assert!(pgdm_stepsize(0.5, -1.0, 0.5).is_err());
    }

    #[test]
    fn ufgm_fixed_nu_values() {
        // alpha_hat = 1: nu = sqrt(mu / M), independent of epsilon.
        let nu1 = ufgm_fixed_nu(1e-3, 4.0, 1.0, 1.0).unwrap();
        let nu2 = ufgm_fixed_nu(1e-1, 4.0, 1.0, 1.0).unwrap();
        assert!((nu1 - 0.5).abs() < 1e-15);
        assert_eq!(nu1, nu2);

        let nu = ufgm_fixed_nu(1e-2, 3.4943218589451956, 1.0, 0.5).unwrap();
        assert!((nu - 0.0651292771174338).abs() < 1e-12);
        // Increasing in epsilon for alpha_hat < 1.
        assert!(ufgm_fixed_nu(3e-2, 3.4943218589451956, 1.0, 0.5).unwrap() > nu);
        // nu > 1 is a parameter inconsistency.
        assert!(matches!(
            ufgm_fixed_nu(0.9, 1.0, 100.0, 0.5),
            Err(crate::error::Error::ParameterInconsistency(_))
        ));
    }

    #[test]
    fn predictor_known_values() {
        let p = predict_iterations(Algorithm::Pgdm, 1e-2, 3.4943218589451956, 1.0, 0.5, 1.0, None)
            .unwrap();
        assert!((p.predicted_iterations - 1070.8794525328615).abs() < 1e-6);
        assert!((p.exponent - 2.0 / 3.0).abs() < 1e-15);
        assert!(p.omega.is_none());

        let u = predict_iterations(
            Algorithm::UfgmFixed,
            1e-2,
            3.4943218589451956,
            1.0,
            0.5,
            1.0,
            Some(7.0 / 6.0),
        )
        .unwrap();
        assert!((u.omega.unwrap() - 0.27111794279942464).abs() < 1e-12);
        assert!((u.exponent - 0.4).abs() < 1e-15);
        assert!((u.predicted_iterations - 516.9951953987444).abs() < 1e-6);

        assert!(matches!(
            predict_iterations(Algorithm::Ufgm, 1e-2, 3.5, 1.0, 0.5, 1.0, None),
            Err(crate::error::Error::MissingData(_))
        ));
    }

    #[test]
    fn predictor_is_pure_log_at_alpha_one() {
        // Exponent 0: bound reduces to (2M/mu) log(sqrt(2 M d0^2 / mu)/eps).
        let m = 2.0;
        let mu = 1.5;
        let d0 = 3.0;
        let eps = 1e-3;
        let p = predict_iterations(Algorithm::Pgdm, eps, m, mu, 1.0, d0, None).unwrap();
        let expected = 2.0 * m / mu * ((2.0 * m * d0 * d0 / mu).sqrt() / eps).ln();
        assert!((p.predicted_iterations - expected).abs() < 1e-9 * expected);
        assert_eq!(p.exponent, 0.0);
    }

    proptest! {
        // M is nondecreasing in every L_i and nonincreasing in mu.
        #[test]
        fn constant_m_monotone(
            a1 in 0.05f64..1.0, a2 in 0.05f64..1.0,
            l1 in 0.1f64..10.0, l2 in 0.1f64..10.0,
            mu in 0.1f64..10.0, bump in 0.01f64..5.0,
        ) {
            let base = [meta(a1, l1), meta(a2, l2)];
            let m0 = constant_m(&base, mu).unwrap();
            let grown = [meta(a1, l1 + bump), meta(a2, l2)];
            prop_assert!(constant_m(&grown, mu).unwrap() >= m0 - 1e-12);
            let m_softer = constant_m(&base, mu + bump).unwrap();
            prop_assert!(m_softer <= m0 + 1e-12);
        }
    }
}
