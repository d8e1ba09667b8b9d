//! Statistical behavior of the two-phase learner on planted instances with a
//! known spectrum: exact-recovery rate, phase-1 sample complexity against its
//! reference curve, sample soundness, the out-of-span weight guarantee that
//! backs the stopping rule, and the coupon-collector expectation.

use fsparse_core::chang::verify_weight_bound;
use fsparse_core::f2linalg::{complete_basis, Span};
use fsparse_core::fourier::random_sparse_function;
use fsparse_core::learner::{
    learn, learn_span, phase2_coupon, phase2_estimate, stall_limit, LearnerConfig, Phase2Mode,
};
use fsparse_core::oracle::ExampleOracle;
use fsparse_core::fourier::and_table;

fn planted_run_seeds(master: u64, trial: u64) -> (u64, u64) {
    // Instance and oracle draw from unrelated streams.
    (master ^ (trial * 2 + 1), master.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_mul(trial + 1))
}

#[test]
fn planted_instances_are_recovered_exactly_with_bounded_phase1_cost() {
    let (n, k, r_core) = (8usize, 8usize, 3usize);
    let trials = 200u64;
    let cfg = LearnerConfig::new(k);
    let mut exact = 0u64;
    let mut selfreported_wrong = 0u64;
    let mut phase1_total = 0u64;
    for trial in 0..trials {
        let (inst_seed, oracle_seed) = planted_run_seeds(0xA11CE, trial);
        let planted = random_sparse_function(n, k, r_core, inst_seed).unwrap();
        let mut oracle = ExampleOracle::new(planted.clone(), oracle_seed).unwrap();
        let result = learn(&mut oracle, &cfg).unwrap();
        phase1_total += result.log.quantum_examples_used;
        if result.spectrum == planted {
            exact += 1;
        } else if result.success_selfreport {
            selfreported_wrong += 1;
        }
    }
    // Exactness: every self-reported success recovered the planted spectrum.
    assert_eq!(selfreported_wrong, 0);
    assert!(exact >= trials * 95 / 100, "exact = {exact}/{trials}");

    // Phase-1 mean against the reference curve plus the stall allowance
    // (the factor 2 accounts for the rejected half of the quantum examples).
    let mean = phase1_total as f64 / trials as f64;
    let kf = k as f64;
    let reference = 4.0 * kf * kf.log2() * ((r_core as f64).ln() + 1.0);
    let allowance = 2.0 * stall_limit(&cfg, n) as f64;
    assert!(
        mean <= reference + allowance,
        "mean phase-1 quantum examples {mean:.1} > {reference:.1} + {allowance:.1}"
    );
    println!(
        "phase-1 mean {mean:.1} quantum examples (reference {reference:.1} + stall {allowance:.1})"
    );
}

#[test]
fn accepted_samples_are_sound_and_span_growth_obeys_the_weight_bound() {
    let (n, k, r_core) = (8usize, 8usize, 3usize);
    let mut cfg = LearnerConfig::new(k);
    cfg.record_samples = true;
    for trial in 0..40u64 {
        let (inst_seed, oracle_seed) = planted_run_seeds(0xB0B, trial);
        let planted = random_sparse_function(n, k, r_core, inst_seed).unwrap();
        let mut oracle = ExampleOracle::new(planted.clone(), oracle_seed).unwrap();
        let out = learn_span(&mut oracle, &cfg).unwrap();

        // Soundness: every accepted sample lies in the true support.
        for s in &out.accepted_samples {
            assert!(planted.contains(s), "sample {s} outside support");
        }

        // Span never exceeds the true dimension and grows monotonically.
        let true_dim = planted.fourier_span().dim();
        assert!(out.span.dim() <= true_dim);

        // Every proper prefix of the accumulated basis leaves enough weight
        // outside its span for the stopping rule to be safe.
        for prefix_len in 0..out.span.dim() {
            let prefix = &out.span.vectors()[..prefix_len];
            assert!(
                verify_weight_bound(&planted, prefix).unwrap(),
                "trial {trial} prefix {prefix_len}"
            );
        }
    }
}

#[test]
fn span_dimension_is_monotone_and_bounded_during_phase1() {
    let (n, k, r_core) = (6usize, 4usize, 2usize);
    let mut cfg = LearnerConfig::new(k);
    cfg.record_samples = true;
    for trial in 0..40u64 {
        let (inst_seed, oracle_seed) = planted_run_seeds(0xCAFE, trial);
        let planted = random_sparse_function(n, k, r_core, inst_seed).unwrap();
        let true_dim = planted.fourier_span().dim();
        let mut oracle = ExampleOracle::new(planted.clone(), oracle_seed).unwrap();
        let out = learn_span(&mut oracle, &cfg).unwrap();
        let mut span = Span::new(n);
        let mut dims = vec![0usize];
        for s in &out.accepted_samples {
            span.insert(s);
            dims.push(span.dim());
        }
        assert!(dims.windows(2).all(|w| w[0] <= w[1]));
        assert!(*dims.last().unwrap() <= true_dim);
    }
}

#[test]
fn estimating_phase2_meets_its_failure_budget() {
    // r = 3, k = 8, delta = 0.1, 200 seeded runs: the per-run sample size is
    // chosen so the failure rate stays under delta with a wide margin.
    let (r, k, delta) = (3usize, 8usize, 0.1f64);
    let mut ok = 0u32;
    for seed in 0..200u64 {
        let planted = random_sparse_function(r, k, r, seed * 7 + 1).unwrap();
        let span = planted.fourier_span();
        let b = complete_basis(span.vectors(), r).unwrap();
        let mut oracle = ExampleOracle::new(planted.clone(), seed).unwrap();
        if let Ok(reduced) = phase2_estimate(&mut oracle, &b, span.dim(), k, delta, 1 << 24) {
            if reduced.lift(&b).unwrap() == planted {
                ok += 1;
            }
        }
    }
    assert!(ok >= 180, "phase-2 estimation succeeded in {ok}/200 runs");
}

#[test]
fn coupon_phase2_matches_the_collector_expectation() {
    // AND on two variables reduced over the identity: all four inputs must
    // be seen; the expected draw count is 4·(1 + 1/2 + 1/3 + 1/4) = 25/3.
    let and2 = and_table(2).wht();
    let b = fsparse_core::f2linalg::F2Matrix::identity(2);
    let mut total = 0u64;
    let trials = 1000u64;
    for seed in 0..trials {
        let mut oracle = ExampleOracle::new(and2.clone(), seed).unwrap();
        let got = phase2_coupon(&mut oracle, &b, 2, 1 << 20).unwrap();
        assert_eq!(got, and2);
        assert!(got.is_boolean() && got.granularity_check());
        total += oracle.log().classical_examples_used;
    }
    let mean = total as f64 / trials as f64;
    assert!(
        (7.8..=8.9).contains(&mean),
        "coupon mean {mean:.3} outside [7.8, 8.9]"
    );
}

#[test]
fn runs_are_reproducible_from_the_seed() {
    let planted = random_sparse_function(8, 8, 3, 4242).unwrap();
    let cfg = LearnerConfig::new(8);
    let mut first = ExampleOracle::new(planted.clone(), 99).unwrap();
    let mut second = ExampleOracle::new(planted, 99).unwrap();
    let a = learn(&mut first, &cfg).unwrap();
    let b = learn(&mut second, &cfg).unwrap();
    assert_eq!(a.spectrum, b.spectrum);
    assert_eq!(a.log, b.log);
    assert_eq!(a.span.vectors(), b.span.vectors());
}

#[test]
fn coupon_mode_learns_end_to_end() {
    let mut cfg = LearnerConfig::new(8);
    cfg.phase2_mode = Phase2Mode::CouponCollector;
    let mut exact = 0u32;
    for trial in 0..50u64 {
        let (inst_seed, oracle_seed) = planted_run_seeds(0xD00D, trial);
        let planted = random_sparse_function(8, 8, 3, inst_seed).unwrap();
        let mut oracle = ExampleOracle::new(planted.clone(), oracle_seed).unwrap();
        let result = learn(&mut oracle, &cfg).unwrap();
        assert!(result.spectrum.granularity_check());
        assert!(result.spectrum.parseval_sum().is_one());
        if result.spectrum == planted {
            exact += 1;
        }
    }
    assert!(exact >= 48, "coupon mode exact in {exact}/50 runs");
}
