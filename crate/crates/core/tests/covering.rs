use std::f64::consts::PI;

use alphamod_core::covering::{Covering, PieceShape};
use alphamod_core::grid::GridSpec;

fn grid(n: usize) -> GridSpec {
    GridSpec::new(1, n, 8.0 * PI).unwrap()
}

#[test]
fn lattice_overlap_is_three() {
    let r = Covering::build(0.0, &grid(256)).unwrap().validate();
    assert_eq!(r.n0, 3);
    assert_eq!(r.pointwise_multiplicity, 2);
}

#[test]
fn dyadic_annuli_meet_only_neighbors() {
    let cov = Covering::build(1.0, &grid(256)).unwrap();
    assert_eq!(cov.pointwise_multiplicity(), 2);
    // Closed annuli also touch the next-but-one at a single radius.
    assert!(cov.overlap_count() <= 3);
    for p in cov.pieces() {
        if let PieceShape::Annulus { inner, outer } = p.shape {
            if inner > 0.0 {
                assert!((outer / inner - 4.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn partition_is_exact_for_every_alpha() {
    for alpha in [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0] {
        let cov = Covering::build(alpha, &grid(128)).unwrap();
        assert!(cov.partition_residual() <= 1e-8, "alpha {alpha}");
        assert!(cov.validate().is_finite());
    }
    let plane = GridSpec::new(2, 32, 8.0 * PI).unwrap();
    for alpha in [0.0, 0.5, 1.0] {
        assert!(Covering::build(alpha, &plane).unwrap().partition_residual() <= 1e-8);
    }
}

#[test]
fn windows_stay_inside_pieces() {
    let g = grid(256);
    for alpha in [0.0, 0.5, 1.0] {
        let cov = Covering::build(alpha, &g).unwrap();
        for p in cov.pieces() {
            assert!(p.support().iter().all(|&i| p.shape.contains(&g.freq_point(i), 1, 1e-9)));
            assert!(p.window().iter().all(|&w| (0.0..=1.0 + 1e-12).contains(&w)));
        }
    }
}

#[test]
fn comparability_constant_is_refinement_stable() {
    for alpha in [0.0, 0.5, 1.0] {
        let a = Covering::build(alpha, &grid(128)).unwrap().validate();
        let b = Covering::build(alpha, &grid(256)).unwrap().validate();
        assert!(a.kappa.is_finite() && b.kappa.is_finite());
        assert!((b.kappa - a.kappa).abs() / a.kappa <= 0.2, "alpha {alpha}: {} vs {}", a.kappa, b.kappa);
    }
}

#[test]
fn kernel_masses_are_uniform() {
    for alpha in [0.0, 0.5, 1.0] {
        let values: Vec<f64> = Covering::build(alpha, &grid(256))
            .unwrap()
            .window_derivative_l1([0, 0])
            .unwrap()
            .iter()
            .map(|w| w.value)
            .collect();
        let max = values.iter().cloned().fold(0.0, f64::max);
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min <= 10.0, "alpha {alpha}: {max} / {min}");
    }
}

#[test]
fn dyadic_derivative_ratio_is_uniform_in_level() {
    let ratios: Vec<f64> = Covering::build(1.0, &grid(256))
        .unwrap()
        .window_derivative_l1([1, 0])
        .unwrap()
        .iter()
        .map(|w| w.ratio)
        .collect();
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    assert!(max.is_finite() && max < 10.0);
}

#[test]
fn lattice_windows_are_translates() {
    let cov = Covering::build(0.0, &grid(256)).unwrap();
    let masses: Vec<f64> = cov
        .window_derivative_l1([0, 0])
        .unwrap()
        .iter()
        .filter(|w| w.resolved)
        .map(|w| w.value)
        .collect();
    let spread = masses.iter().cloned().fold(0.0, f64::max) / masses.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread < 1.01, "spread {spread}");
    let ratios: Vec<f64> = cov
        .window_derivative_l1([1, 0])
        .unwrap()
        .iter()
        .filter(|w| w.resolved)
        .map(|w| w.ratio)
        .collect();
    let spread = ratios.iter().cloned().fold(0.0, f64::max) / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread < 4.0, "derivative ratio spread {spread}");
}

#[test]
fn resampling_keeps_geometry() {
    let cov = Covering::build(0.5, &grid(64)).unwrap();
    let fine = cov.resample(&grid(128)).unwrap();
    assert_eq!(fine.alpha(), 0.5);
    assert!(fine.partition_residual() <= 1e-8);
}
