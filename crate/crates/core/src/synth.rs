//! Deterministic test families: functions, symbols and Lipschitz multipliers.
//!
//! Random families draw their coefficients in a fixed order indexed by physical
//! lattice frequencies, so a family evaluated on a grid and on its refinement (same
//! period, more points) describes the same continuum object.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{sup_coord, Domain, GridSpec, SampledFunction, SampledSymbol};
use crate::operators::LipschitzFunction;
use crate::window;

/// `(-log(1e-12) * 2)^{1/2}`: a Gaussian of width `w` is below `1e-12` of its peak
/// beyond `7.43 w`.
const GAUSSIAN_REACH: f64 = 7.434;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "kebab-case")]
pub enum MultiplierProfile {
    /// `m(xi) = value`.
    Constant { value: f64 },
    /// `m(xi) = i xi_1`, the lattice-truncated derivative.
    Derivative,
    /// `m(xi) = cos(shift * xi_1)`.
    Cosine { shift: f64 },
    /// `m(xi) = b(|xi| / radius)`.
    Bump { radius: f64 },
}

impl MultiplierProfile {
    pub fn eval(&self, xi: &[f64; 2], dim: usize) -> Complex64 {
        match self {
            MultiplierProfile::Constant { value } => Complex64::new(*value, 0.0),
            MultiplierProfile::Derivative => Complex64::new(0.0, xi[0]),
            MultiplierProfile::Cosine { shift } => Complex64::new((shift * xi[0]).cos(), 0.0),
            MultiplierProfile::Bump { radius } => {
                let r = xi[..dim].iter().map(|v| v * v).sum::<f64>().sqrt();
                Complex64::new(window::bump(r / radius), 0.0)
            }
        }
    }
}

/// One term `amplitude * sin(xi_index . x + phase)` of a Lipschitz test function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzSine {
    pub amplitude: f64,
    pub index: [i64; 2],
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum TestFamily {
    /// `exp(-|x|^2 / (2 width^2))`.
    Gaussian { width: f64 },
    /// `e^{i xi_index . x}` at the lattice frequency with integer index `index`.
    PlaneWave { index: [i64; 2] },
    /// Random lattice spectrum filling `[-band, band]^n`.
    BandLimitedRandom { band: f64 },
    /// `sigma(x, xi) = m(xi)`.
    MultiplierSymbol { profile: MultiplierProfile },
    /// `sigma(x, xi) = offset + amplitude cos(xi_index . x)`.
    MultiplicationSymbol {
        offset: f64,
        amplitude: f64,
        index: [i64; 2],
    },
    /// Random trigonometric polynomial in `(x, xi)` with `x`-frequencies `p 2 pi / L`,
    /// `|p|_inf <= x_modes`, and `xi`-frequencies `q xi_step`, `|q|_inf <= xi_modes`;
    /// coefficients decay like `1 / (1 + |p|^2 + |q|^2)`.
    SmoothSymbol {
        x_modes: i64,
        xi_modes: i64,
        xi_step: f64,
    },
    /// Real sum of sines.
    LipschitzSines { terms: Vec<LipschitzSine> },
}

#[derive(Clone, Debug)]
pub enum Synthesized {
    Function(SampledFunction),
    Symbol(SampledSymbol),
    Lipschitz(LipschitzFunction),
}

/// `e^{2 pi i a b / n}` computed from the integer product, exact in the argument.
pub(crate) fn lattice_phase(a: i64, b: i64, n: usize) -> Complex64 {
    let m = (a * b).rem_euclid(n as i64);
    Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)
}

fn check_lattice_index(grid: &GridSpec, index: [i64; 2], what: &str) -> Result<()> {
    let mut xi = [0.0; 2];
    for a in 0..grid.dim() {
        xi[a] = index[a] as f64 * grid.freq_step();
    }
    if !grid.in_band(&xi) {
        return Err(Error::BandViolation(format!(
            "{what} frequency {:?} outside the band |xi| <= {}",
            &xi[..grid.dim()],
            grid.band_limit()
        )));
    }
    Ok(())
}

/// Integer multi-indices of `[-m, m]^n` in lexicographic order.
pub(crate) fn cube_indices(m: i64, dim: usize) -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    if dim == 1 {
        for a in -m..=m {
            out.push([a, 0]);
        }
    } else {
        for a in -m..=m {
            for b in -m..=m {
                out.push([a, b]);
            }
        }
    }
    out
}

/// Per-axis index tables: `e^{i xi_p x_j}` for frequency index `p` at spatial index `j`.
fn spatial_wave(grid: &GridSpec, p: [i64; 2]) -> Vec<Complex64> {
    let n = grid.points_per_axis();
    let half = (n / 2) as i64;
    (0..grid.len())
        .map(|flat| {
            let idx = grid.unflatten(flat);
            (0..grid.dim())
                .map(|a| lattice_phase(p[a], idx[a] as i64 - half, n))
                .product()
        })
        .collect()
}

pub fn synthesize(family: &TestFamily, grid: &GridSpec, seed: u64) -> Result<Synthesized> {
    match family {
        TestFamily::Gaussian { width } => gaussian(grid, *width).map(Synthesized::Function),
        TestFamily::PlaneWave { index } => plane_wave(grid, *index).map(Synthesized::Function),
        TestFamily::BandLimitedRandom { band } => {
            band_limited_random(grid, *band, seed).map(Synthesized::Function)
        }
        TestFamily::MultiplierSymbol { profile } => {
            multiplier_symbol(grid, profile).map(Synthesized::Symbol)
        }
        TestFamily::MultiplicationSymbol {
            offset,
            amplitude,
            index,
        } => multiplication_symbol(grid, *offset, *amplitude, *index).map(Synthesized::Symbol),
        TestFamily::SmoothSymbol {
            x_modes,
            xi_modes,
            xi_step,
        } => smooth_symbol(grid, *x_modes, *xi_modes, *xi_step, seed).map(Synthesized::Symbol),
        TestFamily::LipschitzSines { terms } => {
            lipschitz_sines(grid, terms).map(Synthesized::Lipschitz)
        }
    }
}

pub fn gaussian(grid: &GridSpec, width: f64) -> Result<SampledFunction> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::InvalidParameter(format!("gaussian width {width}")));
    }
    if width * grid.band_limit() < GAUSSIAN_REACH {
        return Err(Error::BandViolation(format!(
            "gaussian of width {width} is not negligible at the band edge {}",
            grid.band_limit()
        )));
    }
    if 0.5 * grid.period() < GAUSSIAN_REACH * width {
        return Err(Error::BandViolation(format!(
            "gaussian of width {width} is not negligible at the box edge {}",
            0.5 * grid.period()
        )));
    }
    let dim = grid.dim();
    Ok(SampledFunction::from_space_fn(grid, |x| {
        let r2: f64 = x[..dim].iter().map(|v| v * v).sum();
        Complex64::new((-r2 / (2.0 * width * width)).exp(), 0.0)
    }))
}

pub fn plane_wave(grid: &GridSpec, index: [i64; 2]) -> Result<SampledFunction> {
    check_lattice_index(grid, index, "plane wave")?;
    SampledFunction::new(grid.clone(), Domain::Space, spatial_wave(grid, index))
}

pub fn band_limited_random(grid: &GridSpec, band: f64, seed: u64) -> Result<SampledFunction> {
    if !(band.is_finite() && band > 0.0) {
        return Err(Error::InvalidParameter(format!("band {band}")));
    }
    if band > grid.band_limit() + 1e-12 {
        return Err(Error::BandViolation(format!(
            "band {band} exceeds {}",
            grid.band_limit()
        )));
    }
    let dim = grid.dim();
    let m = (band / grid.freq_step() + 1e-9).floor() as i64;
    let indices = cube_indices(m, dim);
    let scale = grid.period().powi(dim as i32) / (indices.len() as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spectrum = SampledFunction::zeros(grid, Domain::Frequency);
    for k in indices {
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let mut idx = [0usize; 2];
        for a in 0..dim {
            idx[a] = grid.freq_storage(k[a]).expect("index inside the band");
        }
        spectrum.values_mut()[grid.flatten(idx)] = c * scale;
    }
    spectrum.inverse_ft()
}

pub fn multiplier_symbol(grid: &GridSpec, profile: &MultiplierProfile) -> Result<SampledSymbol> {
    match profile {
        MultiplierProfile::Cosine { shift } => {
            let dual_band = grid.dual().band_limit();
            if shift.abs() > dual_band {
                return Err(Error::BandViolation(format!(
                    "cosine shift {shift} exceeds the dual band {dual_band}"
                )));
            }
        }
        MultiplierProfile::Bump { radius } => {
            if !(radius.is_finite() && *radius > 0.0) {
                return Err(Error::InvalidParameter(format!("bump radius {radius}")));
            }
            if *radius > grid.band_limit() {
                return Err(Error::BandViolation(format!(
                    "bump radius {radius} exceeds the band {}",
                    grid.band_limit()
                )));
            }
        }
        _ => {}
    }
    let dim = grid.dim();
    let row: Vec<Complex64> = (0..grid.len())
        .map(|k| profile.eval(&grid.freq_point(k), dim))
        .collect();
    let mut values = Vec::with_capacity(grid.len() * grid.len());
    for _ in 0..grid.len() {
        values.extend_from_slice(&row);
    }
    SampledSymbol::new(grid.clone(), crate::grid::SymbolDomain::XXi, values)
}

pub fn multiplication_symbol(
    grid: &GridSpec,
    offset: f64,
    amplitude: f64,
    index: [i64; 2],
) -> Result<SampledSymbol> {
    check_lattice_index(grid, index, "multiplication")?;
    let wave = spatial_wave(grid, index);
    let m = grid.len();
    let mut values = Vec::with_capacity(m * m);
    for w in &wave {
        let v = Complex64::new(offset + amplitude * w.re, 0.0);
        values.extend(std::iter::repeat_n(v, m));
    }
    SampledSymbol::new(grid.clone(), crate::grid::SymbolDomain::XXi, values)
}

/// Integer `s` with `xi_step = s L / N`, if the step lies on the dual lattice.
fn dual_multiple(grid: &GridSpec, xi_step: f64) -> Option<i64> {
    let unit = grid.period() / grid.points_per_axis() as f64;
    let s = xi_step / unit;
    let r = s.round();
    ((s - r).abs() < 1e-9 * s.abs().max(1.0) && r >= 1.0).then_some(r as i64)
}

pub fn smooth_symbol(
    grid: &GridSpec,
    x_modes: i64,
    xi_modes: i64,
    xi_step: f64,
    seed: u64,
) -> Result<SampledSymbol> {
    if x_modes < 0 || xi_modes < 0 {
        return Err(Error::InvalidParameter("mode counts must be nonnegative".into()));
    }
    let dim = grid.dim();
    let s = dual_multiple(grid, xi_step).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "xi step {xi_step} is not a positive multiple of L/N = {}",
            grid.period() / grid.points_per_axis() as f64
        ))
    })?;
    if x_modes as f64 * grid.freq_step() > grid.band_limit() + 1e-12 {
        return Err(Error::BandViolation(format!(
            "x-frequency {} exceeds the band {}",
            x_modes as f64 * grid.freq_step(),
            grid.band_limit()
        )));
    }
    let dual = grid.dual();
    if xi_modes as f64 * xi_step > dual.band_limit() + 1e-12 {
        return Err(Error::BandViolation(format!(
            "xi-frequency {} exceeds the dual band {}",
            xi_modes as f64 * xi_step,
            dual.band_limit()
        )));
    }
    let n = grid.points_per_axis();
    let half = (n / 2) as i64;
    let ps = cube_indices(x_modes, dim);
    let qs = cube_indices(xi_modes, dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = grid.len();
    // e^{i q s (L/N) . xi_k} = e^{2 pi i q s (k - N/2) / N}
    let xi_waves: Vec<Vec<Complex64>> = qs
        .iter()
        .map(|q| {
            (0..m)
                .map(|flat| {
                    let idx = grid.unflatten(flat);
                    (0..dim)
                        .map(|a| lattice_phase(q[a] * s, idx[a] as i64 - half, n))
                        .product()
                })
                .collect()
        })
        .collect();
    let mut values = vec![Complex64::default(); m * m];
    for p in &ps {
        let mut row = vec![Complex64::default(); m];
        for (q, wave) in qs.iter().zip(&xi_waves) {
            let decay = 1.0
                + (0..dim).map(|a| (p[a] * p[a] + q[a] * q[a]) as f64).sum::<f64>();
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) / decay;
            for (r, w) in row.iter_mut().zip(wave) {
                *r += c * w;
            }
        }
        let xw = spatial_wave(grid, *p);
        for (j, x) in xw.iter().enumerate() {
            let out = &mut values[j * m..(j + 1) * m];
            for (o, r) in out.iter_mut().zip(&row) {
                *o += x * r;
            }
        }
    }
    SampledSymbol::new(grid.clone(), crate::grid::SymbolDomain::XXi, values)
}

pub fn lipschitz_sines(grid: &GridSpec, terms: &[LipschitzSine]) -> Result<LipschitzFunction> {
    let mut samples = vec![0.0; grid.len()];
    for t in terms {
        check_lattice_index(grid, t.index, "lipschitz sine")?;
        let wave = spatial_wave(grid, t.index);
        let rot = Complex64::from_polar(1.0, t.phase);
        for (s, w) in samples.iter_mut().zip(&wave) {
            *s += t.amplitude * (w * rot).im;
        }
    }
    LipschitzFunction::new(grid, samples)
}

/// Band of a function family, or `None` if it is not band-limited.
pub fn family_band(family: &TestFamily, grid: &GridSpec) -> Option<f64> {
    let dim = grid.dim();
    let step = grid.freq_step();
    match family {
        TestFamily::PlaneWave { index } => {
            let mut xi = [0.0; 2];
            for a in 0..dim {
                xi[a] = index[a] as f64 * step;
            }
            Some(sup_coord(&xi, dim))
        }
        TestFamily::BandLimitedRandom { band } => Some(*band),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(1, 64, 8.0 * PI).unwrap()
    }

    #[test]
    fn lattice_phase_matches_polar() {
        for (a, b) in [(3, 5), (-7, 11), (0, 9), (13, -13)] {
            let direct = Complex64::from_polar(1.0, 2.0 * PI * (a * b) as f64 / 32.0);
            assert!((lattice_phase(a, b, 32) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn band_limited_random_support_and_determinism() {
        let g = grid();
        let f = band_limited_random(&g, 4.0, 7).unwrap();
        let again = band_limited_random(&g, 4.0, 7).unwrap();
        assert_eq!(f.values(), again.values());
        let fh = f.forward_ft().unwrap();
        let peak = fh.max_abs();
        for (k, v) in fh.values().iter().enumerate() {
            if g.freq_coord(k).abs() > 4.0 + 1e-9 {
                assert!(v.norm() < 1e-12 * peak);
            }
        }
        assert!(band_limited_random(&g, 7.0, 7).is_err());
    }

    #[test]
    fn band_limited_random_is_refinement_invariant() {
        let g = grid();
        let fine = g.refined(2).unwrap();
        let f = band_limited_random(&g, 3.0, 11).unwrap();
        let h = band_limited_random(&fine, 3.0, 11).unwrap();
        for j in 0..g.len() {
            assert!((f.values()[j] - h.values()[2 * j]).norm() < 1e-12);
        }
    }

    #[test]
    fn gaussian_checks_margins() {
        let g = grid();
        assert!(gaussian(&g, 1.5).is_ok());
        assert!(gaussian(&g, 0.2).is_err());
        assert!(gaussian(&g, 3.0).is_err());
    }

    #[test]
    fn smooth_symbol_rejects_off_lattice_step() {
        let g = grid();
        let unit = g.period() / 64.0;
        assert!(smooth_symbol(&g, 2, 1, 4.0 * unit, 1).is_ok());
        assert!(smooth_symbol(&g, 2, 1, 4.5 * unit, 1).is_err());
        assert!(smooth_symbol(&g, 100, 1, 4.0 * unit, 1).is_err());
    }

    #[test]
    fn smooth_symbol_matches_pointwise_formula() {
        let g = GridSpec::new(1, 16, 8.0 * PI).unwrap();
        let step = g.period() / 16.0;
        let sigma = smooth_symbol(&g, 1, 1, step, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut coeffs = Vec::new();
        for p in -1i64..=1 {
            for q in -1i64..=1 {
                let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                coeffs.push((p, q, c / (1.0 + (p * p + q * q) as f64)));
            }
        }
        for j in 0..16 {
            for k in 0..16 {
                let x = g.space_coord(j);
                let xi = g.freq_coord(k);
                let direct: Complex64 = coeffs
                    .iter()
                    .map(|(p, q, c)| {
                        c * Complex64::from_polar(1.0, *p as f64 * g.freq_step() * x + *q as f64 * step * xi)
                    })
                    .sum();
                assert!((sigma.values()[j * 16 + k] - direct).norm() < 1e-12);
            }
        }
    }
}
