//! Fixed library profiles shared by the coverings, mollifiers and regularizers.

use std::sync::OnceLock;

/// `b(t) = exp(1 - 1/(1 - t^2))` for `|t| < 1`, zero otherwise; `b(0) = 1`.
pub fn bump(t: f64) -> f64 {
    let s = 1.0 - t * t;
    if s <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / s).exp()
    }
}

/// `b'(t)`.
pub fn bump_derivative(t: f64) -> f64 {
    let s = 1.0 - t * t;
    if s <= 0.0 {
        0.0
    } else {
        bump(t) * (-2.0 * t / (s * s))
    }
}

fn h(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// Smooth transition from 0 (at `u <= 0`) to 1 (at `u >= 1`).
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = h(u);
        a / (a + h(1.0 - u))
    }
}

/// Radial cut-off: 1 for `r <= 1`, 0 for `r >= 2`.
pub fn dyadic_cutoff(r: f64) -> f64 {
    1.0 - smooth_step(r - 1.0)
}

/// One-dimensional uniform-lattice window `psi(t) = b(t) / sum_m b(t - m)`.
///
/// Supported in `[-1, 1]`, and `sum_k psi(t - k) = 1` for every real `t`.
pub fn lattice_profile(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        return 0.0;
    }
    let base = t.floor() as i64;
    let mut denom = 0.0;
    for m in base - 1..=base + 2 {
        denom += bump(t - m as f64);
    }
    bump(t) / denom
}

const QUAD_POINTS: usize = 4096;

struct BumpQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    mass: f64,
    second_moment: f64,
}

/// Trapezoid rule on `[-1, 1]`. The bump is flat to all orders at the endpoints, so
/// the rule converges faster than any power of the step.
fn quadrature() -> &'static BumpQuadrature {
    static Q: OnceLock<BumpQuadrature> = OnceLock::new();
    Q.get_or_init(|| {
        let h = 2.0 / QUAD_POINTS as f64;
        let nodes: Vec<f64> = (0..=QUAD_POINTS).map(|i| -1.0 + i as f64 * h).collect();
        let weights: Vec<f64> = nodes.iter().map(|&t| h * bump(t)).collect();
        let mass = weights.iter().sum();
        let second_moment = nodes.iter().zip(&weights).map(|(t, w)| w * t * t).sum();
        BumpQuadrature {
            nodes,
            weights,
            mass,
            second_moment,
        }
    })
}

/// `int_{-1}^{1} b(t) dt`.
pub fn bump_mass() -> f64 {
    quadrature().mass
}

/// Normalized cosine transform `int b(t) cos(u t) dt / int b(t) dt`; equals 1 at `u = 0`.
pub fn bump_transform(u: f64) -> f64 {
    let q = quadrature();
    if u == 0.0 {
        return 1.0;
    }
    let s: f64 = q
        .nodes
        .iter()
        .zip(&q.weights)
        .map(|(t, w)| w * (u * t).cos())
        .sum();
    s / q.mass
}

/// Per-axis radius `1/sqrt(n)`, so that a tensor product of per-axis supports lies in
/// the unit ball of `R^n`.
pub fn axis_radius(dim: usize) -> f64 {
    1.0 / (dim as f64).sqrt()
}

/// Per-axis factor of the smooth cut-off with band-limited transform: `phi(0) = 1`
/// and `supp phi_hat` in `|y| < 1/sqrt(n)`.
pub fn band_limited_cutoff(x: f64, dim: usize) -> f64 {
    bump_transform(axis_radius(dim) * x)
}

/// Per-axis factor of the unit-mass mollifier `psi = b / int b`, on the Fourier side.
pub fn mollifier_transform(omega: f64) -> f64 {
    bump_transform(omega)
}

/// Per-axis factor of the compactly supported cut-off used to regularize Lipschitz
/// functions: `phi_1(t) = b(t/rho) (1 + c (t/rho)^2)` with `rho = 1/sqrt(n)`, where
/// `c` makes `int phi_1 = 1`; then `phi_1(0) = 1` and the tensor product is supported
/// in the unit ball.
#[derive(Clone, Debug)]
pub struct CompactCutoff {
    rho: f64,
    c: f64,
}

impl CompactCutoff {
    pub fn new(dim: usize) -> Self {
        let q = quadrature();
        let rho = axis_radius(dim);
        let c = (1.0 / rho - q.mass) / q.second_moment;
        Self { rho, c }
    }

    pub fn value(&self, t: f64) -> f64 {
        let u = t / self.rho;
        bump(u) * (1.0 + self.c * u * u)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let u = t / self.rho;
        (bump_derivative(u) * (1.0 + self.c * u * u) + bump(u) * 2.0 * self.c * u) / self.rho
    }

    /// `int phi_1(t) e^{-i omega t} dt` (real, since `phi_1` is even).
    pub fn transform(&self, omega: f64) -> f64 {
        let q = quadrature();
        let s: f64 = q
            .nodes
            .iter()
            .zip(&q.weights)
            .map(|(u, w)| w * (1.0 + self.c * u * u) * (omega * self.rho * u).cos())
            .sum();
        self.rho * s
    }

    /// `int phi_1`, which is 1 by construction.
    pub fn mass(&self) -> f64 {
        let q = quadrature();
        self.rho * (q.mass + self.c * q.second_moment)
    }

    pub fn support_radius(&self) -> f64 {
        self.rho
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bump_basics() {
        assert_eq!(bump(0.0), 1.0);
        assert_eq!(bump(1.0), 0.0);
        assert_eq!(bump(-1.5), 0.0);
        assert!(bump(0.999) > 0.0);
        let h = 1e-6;
        for t in [-0.7, -0.2, 0.3, 0.8] {
            let fd = (bump(t + h) - bump(t - h)) / (2.0 * h);
            assert_relative_eq!(bump_derivative(t), fd, max_relative = 1e-6);
        }
    }

    #[test]
    fn lattice_profile_partition() {
        for i in 0..200 {
            let t = -3.0 + i as f64 * 0.0317;
            let s: f64 = (-6..=6).map(|k| lattice_profile(t - k as f64)).sum();
            assert!((s - 1.0).abs() < 1e-14, "t = {t}: {s}");
        }
        assert_eq!(lattice_profile(0.0), 1.0);
        assert_eq!(lattice_profile(1.0), 0.0);
        assert_eq!(lattice_profile(-1.0), 0.0);
    }

    #[test]
    fn dyadic_cutoff_telescopes() {
        for i in 0..300 {
            let r = i as f64 * 0.1;
            let mut s = dyadic_cutoff(r);
            for j in 1..12 {
                s += dyadic_cutoff(r / 2f64.powi(j)) - dyadic_cutoff(r / 2f64.powi(j - 1));
            }
            assert!((s - 1.0).abs() < 1e-14);
        }
        assert_eq!(dyadic_cutoff(1.0), 1.0);
        assert_eq!(dyadic_cutoff(2.0), 0.0);
    }

    #[test]
    fn bump_mass_matches_fine_midpoint_rule() {
        let m = 200_000;
        let h = 2.0 / m as f64;
        let mid: f64 = (0..m).map(|i| bump(-1.0 + (i as f64 + 0.5) * h) * h).sum();
        assert_relative_eq!(bump_mass(), mid, max_relative = 1e-10);
    }

    #[test]
    fn compact_cutoff_normalization() {
        for dim in [1, 2] {
            let c = CompactCutoff::new(dim);
            assert_eq!(c.value(0.0), 1.0);
            assert_relative_eq!(c.mass(), 1.0, epsilon = 1e-13);
            assert_relative_eq!(c.transform(0.0), 1.0, epsilon = 1e-13);
            assert_eq!(c.value(c.support_radius()), 0.0);
            assert!(c.value(0.5 * c.support_radius()) > 0.0);
        }
    }

    #[test]
    fn band_limited_cutoff_at_origin() {
        assert_eq!(band_limited_cutoff(0.0, 1), 1.0);
        assert_eq!(mollifier_transform(0.0), 1.0);
        assert!(band_limited_cutoff(3.0, 1) < 1.0);
    }
}
