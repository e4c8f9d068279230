use std::f64::consts::PI;

use alphamod_core::covering::Covering;
use alphamod_core::grid::GridSpec;
use alphamod_core::synth::{self, LipschitzSine};
use alphamod_core::verify::{self, Suite, VerifyConfig};

fn quick() -> VerifyConfig {
    VerifyConfig {
        points_per_axis: 64,
        trials: 3,
        functions: 2,
        x_modes: 4,
        xi_modes: 2,
        ..VerifyConfig::default()
    }
}

#[test]
fn ratios_do_not_grow_with_trial_count() {
    let base = VerifyConfig {
        refine: false,
        ..VerifyConfig::default()
    };
    let many = VerifyConfig { trials: 50, ..base.clone() };
    let op10 = verify::check_operator_bound(&[0.0], &base).unwrap();
    let op50 = verify::check_operator_bound(&[0.0], &many).unwrap();
    assert!(op50[0].max_ratio <= 1.5 * op10[0].max_ratio);
    let cm10 = verify::check_commutator_bound(&[0.0], &base).unwrap();
    let cm50 = verify::check_commutator_bound(&[0.0], &many).unwrap();
    assert!(cm50[0].max_ratio <= 1.5 * cm10[0].max_ratio);
}

#[test]
fn single_sine_touches_neighboring_levels_only() {
    let g = GridSpec::new(1, 128, 8.0 * PI).unwrap();
    let cov = Covering::build(1.0, &g).unwrap();
    // xi = 4 sits on the level j = 2.
    let a = synth::lipschitz_sines(
        &g,
        &[LipschitzSine {
            amplitude: 1.0,
            index: [16, 0],
            phase: 0.4,
        }],
    )
    .unwrap();
    let rows = verify::dyadic_decay_rows(&a, &cov, 0, 0).unwrap();
    for (i, row) in rows.iter().enumerate() {
        let j = i as i64 + 1;
        if (j - 2).abs() > 1 {
            assert!(row.ratio <= 1e-12, "level {j}: {}", row.ratio);
        }
    }
    assert!(rows[1].ratio > 0.1);
}

#[test]
fn suites_are_deterministic_and_pass() {
    let cfg = quick();
    for suite in [Suite::Operator, Suite::Commutator, Suite::Appendix] {
        let a = verify::run_suite(suite, &[0.0, 1.0], &cfg).unwrap();
        let b = verify::run_suite(suite, &[0.0, 1.0], &cfg).unwrap();
        assert_eq!(a, b);
        for r in &a {
            assert!(r.pass, "{} {:?}", r.check, r.alpha);
            assert_eq!(r.rows.len(), r.refined_rows.len());
        }
    }
}

#[test]
fn pointwise_ceiling_is_the_derived_constant() {
    let reports = verify::check_band_limited_bounds(&quick()).unwrap();
    let pointwise = reports.iter().find(|r| r.check == "band-limited-pointwise").unwrap();
    let ceiling = (2.0 * PI).powf(-0.5) * verify::POINTWISE_SLACK;
    assert!((pointwise.ceiling.unwrap() - ceiling).abs() <= 1e-15);
    assert!(pointwise.max_ratio <= ceiling);
}

#[test]
fn seeds_are_logged_for_replay() {
    let cfg = quick();
    let r = &verify::check_operator_bound(&[0.5], &cfg).unwrap()[0];
    let seeds: Vec<u64> = r.rows.iter().map(|row| row.seed).collect();
    assert_eq!(seeds, vec![cfg.seed, cfg.seed + 1, cfg.seed + 2]);
}
