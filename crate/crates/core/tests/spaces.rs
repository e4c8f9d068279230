use std::f64::consts::PI;

use alphamod_core::covering::Covering;
use alphamod_core::grid::{Exponent, GridSpec, SampledFunction};
use alphamod_core::operators::l2_norm;
use alphamod_core::spaces::{
    alpha_modulation_norm, band_component, besov_norm, product_symbol_norm, reconstruct, NormParams,
};
use alphamod_core::synth::{self, MultiplierProfile};
use num_complex::Complex64;

fn grid(n: usize) -> GridSpec {
    GridSpec::new(1, n, 8.0 * PI).unwrap()
}

#[test]
fn plane_wave_at_a_lattice_center_is_one_band() {
    let g = grid(128);
    let cov = Covering::build(0.0, &g).unwrap();
    // xi = 1 is lattice index 4 at step 1/4.
    let f = synth::plane_wave(&g, [4, 0]).unwrap();
    for p in cov.pieces() {
        let part = band_component(&f, &cov, p).unwrap();
        let expected = if p.label[0] == 1 { 1.0 } else { 0.0 };
        let err = part
            .values()
            .iter()
            .zip(f.values())
            .map(|(u, v)| (u - v * expected).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-10, "piece {:?}: {err}", p.label);
    }
}

#[test]
fn components_sum_to_the_input() {
    for alpha in [0.0, 0.3, 0.5, 1.0] {
        let g = grid(128);
        let cov = Covering::build(alpha, &g).unwrap();
        let f = synth::band_limited_random(&g, 6.0, 5).unwrap();
        assert!(reconstruct(&f, &cov).unwrap().max_abs_diff(&f) <= 1e-8);
    }
}

#[test]
fn hilbert_norm_is_comparable_to_l2() {
    for alpha in [0.0, 0.5, 1.0] {
        let g = grid(128);
        let cov = Covering::build(alpha, &g).unwrap();
        let mult = cov.pointwise_multiplicity() as f64;
        let params = NormParams::function(alpha, Exponent::Two, Exponent::Two, 0.0);
        for seed in 0..5 {
            let f = synth::band_limited_random(&g, 8.0, seed).unwrap();
            let ratio = alpha_modulation_norm(&f, &params, &cov).unwrap().total / l2_norm(&f);
            assert!(ratio <= 1.0 + 1e-12 && ratio >= mult.sqrt().recip() - 1e-12, "alpha {alpha}: {ratio}");
        }
    }
}

#[test]
fn dyadic_path_matches_besov() {
    let g = grid(128);
    let cov = Covering::build(1.0, &g).unwrap();
    let f = synth::band_limited_random(&g, 8.0, 9).unwrap();
    for (p, q) in [(Exponent::Two, Exponent::Two), (Exponent::Infinity, Exponent::One)] {
        let generic = alpha_modulation_norm(&f, &NormParams::function(1.0, p, q, 0.5), &cov).unwrap();
        let direct = besov_norm(&f, p, q, 0.5).unwrap();
        assert_eq!(generic.total, direct.total);
    }
}

#[test]
fn symbol_norm_is_homogeneous() {
    let g = grid(64);
    let cov = Covering::build(0.5, &g).unwrap();
    let sigma = synth::smooth_symbol(&g, 4, 2, g.period() / 16.0, 3).unwrap();
    let params = NormParams::symbol(0.5, 0.25, 0.25);
    let base = product_symbol_norm(&sigma, &params, &cov).unwrap().total;
    let c = Complex64::new(-1.5, 2.0);
    let scaled = product_symbol_norm(&sigma.scaled(c), &params, &cov).unwrap().total;
    assert!((scaled - c.norm() * base).abs() <= 1e-12 * scaled);
}

#[test]
fn multiplier_symbol_factorizes() {
    let g = grid(64);
    let dual = g.dual();
    // A lattice frequency of the dual grid keeps m band-limited in eta.
    let shift = 5.0 * dual.freq_step();
    let sigma = synth::multiplier_symbol(&g, &MultiplierProfile::Cosine { shift }).unwrap();
    let m = SampledFunction::from_space_fn(&dual, |xi| Complex64::new((shift * xi[0]).cos(), 0.0));
    for alpha in [0.0, 0.5, 1.0] {
        let cov = Covering::build(alpha, &g).unwrap();
        let s2 = alpha / 2.0;
        let total = product_symbol_norm(&sigma, &NormParams::symbol(alpha, 0.0, s2), &cov)
            .unwrap()
            .total;
        let xi_cov = cov.resample(&dual).unwrap();
        let params = NormParams::function(alpha, Exponent::Infinity, Exponent::One, s2);
        let oracle = alpha_modulation_norm(&m, &params, &xi_cov).unwrap().total;
        assert!((total - oracle).abs() <= 1e-9 * oracle, "alpha {alpha}: {total} vs {oracle}");
    }
}

#[test]
fn lenient_band_truncates_instead_of_failing() {
    let g = grid(64);
    let cov = Covering::build(0.0, &g).unwrap();
    let xi = 30.0 * g.freq_step();
    let f = SampledFunction::from_space_fn(&g, |x| Complex64::from_polar(1.0, xi * x[0]));
    let strict = NormParams::function(0.0, Exponent::Two, Exponent::Two, 0.0);
    assert!(alpha_modulation_norm(&f, &strict, &cov).is_err());
    let lenient = strict.with_strict_band(false);
    assert!(alpha_modulation_norm(&f, &lenient, &cov).unwrap().total.is_finite());
}
