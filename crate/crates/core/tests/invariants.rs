//! Cross-module invariants: projection geometry, the sampled quadratic
//! upper-model inequality on every benchmark problem, and predictor
//! domination of measured iteration counts.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use holder_pg::problems::{elliptic1, elliptic2, example1};
use holder_pg::solvers::{pgdm, ufgm, upgm, SolverConfig};
use holder_pg::stepsize::{alpha_hat, constant_m, predict_iterations, ufgm_fixed_nu, Algorithm};
use holder_pg::validation::{
    holder_probe, inexact_oracle_probe, strong_convexity_probe, PairSampler, DEFAULT_SEED,
};
use holder_pg::{project, DenseVector, FeasibleSet, ProblemInstance};

const H: f64 = 0.0625;

fn random_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> DenseVector {
    DenseVector::from_fn(n, |_| rng.random_range(lo..hi)).unwrap()
}

#[test]
fn projection_is_idempotent_nonexpansive_and_optimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let sets = [
        FeasibleSet::whole_space(6),
        FeasibleSet::symmetric_box(6, 1.0).unwrap(),
        FeasibleSet::new_box(
            DenseVector::new(vec![-2.0, 0.0, -1.0, 0.5, -3.0, -0.1]).unwrap(),
            DenseVector::new(vec![-1.0, 0.2, 4.0, 0.5, 3.0, 0.1]).unwrap(),
        )
        .unwrap(),
    ];
    for set in &sets {
        for _ in 0..1000 {
            let u = random_vec(&mut rng, 6, -5.0, 5.0);
            let v = random_vec(&mut rng, 6, -5.0, 5.0);
            let pu = project(set, &u).unwrap();
            let pv = project(set, &v).unwrap();

            // Idempotence.
            assert_eq!(project(set, &pu).unwrap(), pu);
            // Non-expansiveness.
            assert!(pu.dist(&pv) <= u.dist(&v) + 1e-12);
            // Variational characterization against a feasible point.
            let w = project(set, &random_vec(&mut rng, 6, -5.0, 5.0)).unwrap();
            let inner = pu.minus(&u).dot(&w.minus(&pu));
            assert!(inner >= -1e-12, "optimality inner product {inner}");
        }
    }
}

#[test]
fn minimizers_satisfy_first_order_optimality() {
    let problems = [example1(), elliptic1(H, 0.5, 0.5).unwrap()];
    for p in &problems {
        let star = p.minimizer.as_ref().unwrap();
        let g = (p.gradient)(star);
        let mut sampler = PairSampler::for_problem(p, DEFAULT_SEED);
        for _ in 0..1000 {
            let w = sampler.sample();
            assert!(
                g.dot(&w.minus(star)) >= -1e-8,
                "first-order optimality violated for {}",
                p.name
            );
        }
    }
}

fn all_problems() -> Vec<ProblemInstance> {
    vec![
        example1(),
        elliptic1(H, 0.5, 0.5).unwrap(),
        elliptic2(H, 0.8, 1.5, 20.0).unwrap(),
    ]
}

#[test]
fn quadratic_upper_model_holds_on_every_problem() {
    for p in all_problems() {
        for delta in [1e-1, 1e-2, 1e-3] {
            let report = inexact_oracle_probe(&p, delta, 1000, DEFAULT_SEED).unwrap();
            assert!(report.pass, "{} delta={delta}: {report}", p.name);
        }
    }
}

#[test]
fn strong_convexity_holds_on_every_problem() {
    for p in all_problems() {
        let report = strong_convexity_probe(&p, 1000, DEFAULT_SEED);
        assert!(report.pass, "{}: {report}", p.name);
    }
}

#[test]
fn holder_inequality_holds_for_scalar_and_operator_components() {
    // The univariate components and both quadratic-part components carry
    // exact Euclidean constants.
    let ex1 = example1();
    let mut sampler = PairSampler::for_problem(&ex1, DEFAULT_SEED);
    for (i, meta) in ex1.components.iter().enumerate() {
        let r = holder_probe(
            &ex1.component_gradients[i],
            meta.alpha,
            meta.lipschitz_holder,
            &mut sampler,
            10_000,
        );
        assert!(r.pass, "example1 component {i}: {r}");
    }
    for p in [elliptic1(H, 0.5, 0.5).unwrap(), elliptic2(H, 0.8, 1.5, 20.0).unwrap()] {
        let mut sampler = PairSampler::for_problem(&p, DEFAULT_SEED);
        let meta = p.components[0];
        let r = holder_probe(
            &p.component_gradients[0],
            meta.alpha,
            meta.lipschitz_holder,
            &mut sampler,
            2_000,
        );
        assert!(r.pass, "{} quadratic component: {r}", p.name);
    }
}

#[test]
fn holder_probe_flags_separable_components_with_scalar_constants() {
    // The registered constants for the separable non-Lipschitz components are
    // per-coordinate bounds. In the Euclidean norm a field of n coordinates
    // can exceed them by up to n^{(1-alpha)/2}, and the probe must report
    // that honestly rather than pass.
    let cases = [
        (elliptic1(H, 0.5, 0.5).unwrap(), 3.87),
        (elliptic2(H, 0.8, 1.5, 20.0).unwrap(), 1.72),
    ];
    for (p, ratio_cap) in cases {
        let meta = p.components[1];
        let mut sampler = PairSampler::for_problem(&p, DEFAULT_SEED);
        let r = holder_probe(
            &p.component_gradients[1],
            meta.alpha,
            meta.lipschitz_holder,
            &mut sampler,
            10_000,
        );
        assert!(
            !r.pass,
            "{}: scalar constant unexpectedly valid in the Euclidean norm: {r}",
            p.name
        );
        // The dimension factor bounds the worst violation.
        let dimension_factor = (p.dim as f64).powf((1.0 - meta.alpha) / 2.0);
        assert!(dimension_factor <= ratio_cap * 1.01);
        let mut sampler = PairSampler::for_problem(&p, DEFAULT_SEED);
        let corrected = holder_probe(
            &p.component_gradients[1],
            meta.alpha,
            meta.lipschitz_holder * dimension_factor,
            &mut sampler,
            10_000,
        );
        assert!(corrected.pass, "{}: dimension-corrected constant: {corrected}", p.name);
    }
}

#[test]
fn estimating_quadratics_never_rise_above_their_start_at_the_minimizer() {
    // phi_k(u*) <= phi_0(u*) along an audited fast-method run.
    let p = example1();
    let cfg = SolverConfig::new(1e-2, 100)
        .unwrap()
        .with_audit(true)
        .with_stop_on_target(false);
    let trace = ufgm(&p, &cfg).unwrap();
    let audit = trace.audit.as_ref().unwrap();
    let star = p.minimizer.as_ref().unwrap();
    let phi0_at_star = {
        let d = star.dist(&audit.w0);
        audit.c0 + audit.mu / 2.0 * d * d
    };
    for snap in &audit.snapshots {
        let d = star.dist(&snap.w);
        let phi_k = snap.c + snap.sigma * audit.mu / 2.0 * d * d;
        assert!(
            phi_k <= phi0_at_star + 1e-8,
            "iter {}: {phi_k} > {phi0_at_star}",
            snap.iter
        );
    }
}

#[test]
fn predicted_bounds_dominate_measured_counts_on_example1() {
    let p = example1();
    let m = constant_m(&p.components, p.mu).unwrap();
    let a_hat = alpha_hat(&p.components).unwrap();
    let d0 = 1.0;
    let gap0 = 7.0 / 6.0;

    for eps in [1e-1, 3e-2, 1e-2, 3e-3, 1e-3] {
        let cfg = SolverConfig::new(eps, 1_000_000).unwrap();
        let descent = pgdm(&p, &cfg).unwrap();
        assert!(descent.summary.converged);
        let bound = predict_iterations(Algorithm::Pgdm, eps, m, p.mu, a_hat, d0, None)
            .unwrap()
            .predicted_iterations;
        assert!(
            (descent.summary.iterations as f64) <= bound,
            "descent at eps={eps}: {} > {bound}",
            descent.summary.iterations
        );

        let primal = upgm(&p, &cfg.clone().with_rho0(1.0)).unwrap();
        assert!((primal.summary.iterations as f64) <= bound);

        let nu = ufgm_fixed_nu(eps, m, p.mu, a_hat).unwrap();
        let fast = ufgm(&p, &cfg.clone().with_fixed_step(nu)).unwrap();
        assert!(fast.summary.converged);
        let fast_bound =
            predict_iterations(Algorithm::UfgmFixed, eps, m, p.mu, a_hat, d0, Some(gap0))
                .unwrap()
                .predicted_iterations;
        assert!(
            (fast.summary.iterations as f64) <= fast_bound,
            "fast at eps={eps}: {} > {fast_bound}",
            fast.summary.iterations
        );
    }
}
