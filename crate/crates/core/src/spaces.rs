//! α-modulation norms of functions, the product norm of symbols, and the indices
//! of the optimal Besov and modulation embeddings.
//!
//! Band components are formed on the lattice spectrum. `L^2` norms use the discrete
//! Plancherel identity; `L^1` and `L^inf` norms are evaluated on the trigonometric
//! interpolant sampled on an oversampled lattice.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use crate::covering::{dyadic_levels, dyadic_window, l1_oversampling, lattice_labels, lattice_window, Covering, CoveringPiece};
use crate::error::{Error, Result};
use crate::fft;
use crate::grid::{japanese, lp_of, Domain, Exponent, GridSpec, Point, SampledFunction, SampledSymbol, SymbolDomain};

/// Relative size below which a coefficient counts as outside the support when
/// checking band limitation.
const BAND_TOLERANCE: f64 = 1e-10;
/// Relative size below which a symbol coefficient is dropped from the pair sum.
const ACTIVE_TOLERANCE: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormParams {
    pub alpha: f64,
    pub p: Exponent,
    pub q: Exponent,
    pub s: f64,
    pub s1: f64,
    pub s2: f64,
    /// Reject inputs whose spectrum leaves the truncation band instead of warning.
    pub strict_band: bool,
}

impl NormParams {
    /// Parameters of `M^{p,q}_{s,alpha}`.
    pub fn function(alpha: f64, p: Exponent, q: Exponent, s: f64) -> Self {
        Self {
            alpha,
            p,
            q,
            s,
            s1: 0.0,
            s2: 0.0,
            strict_band: true,
        }
    }

    /// Parameters of the product space with outer exponents `(inf, inf), (1, 1)`.
    pub fn symbol(alpha: f64, s1: f64, s2: f64) -> Self {
        Self {
            alpha,
            p: Exponent::Infinity,
            q: Exponent::One,
            s: 0.0,
            s1,
            s2,
            strict_band: true,
        }
    }

    pub fn with_strict_band(mut self, strict: bool) -> Self {
        self.strict_band = strict;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub piece_x: usize,
    /// Piece filtering the `xi` variable; absent for function norms.
    pub piece_xi: Option<usize>,
    pub weight: f64,
    pub band_norm: f64,
    /// `weight * band_norm`.
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormBreakdown {
    pub total: f64,
    /// Exponent of the outer sum over contributions.
    pub q: Exponent,
    pub contributions: Vec<Contribution>,
}

impl NormBreakdown {
    fn from_contributions(q: Exponent, contributions: Vec<Contribution>) -> Self {
        let total = q.aggregate(contributions.iter().map(|c| c.contribution));
        Self {
            total,
            q,
            contributions,
        }
    }
}

fn check_alpha(cov: &Covering, alpha: f64) -> Result<()> {
    if (cov.alpha() - alpha).abs() > 1e-12 {
        return Err(Error::AlphaMismatch {
            covering: cov.alpha(),
            requested: alpha,
        });
    }
    Ok(())
}

fn check_function_band(spectrum: &SampledFunction, strict: bool) -> Result<()> {
    let grid = spectrum.grid();
    let band = spectrum.effective_band(BAND_TOLERANCE)?;
    if band > grid.band_limit() + 1e-12 {
        let msg = format!(
            "spectrum reaches |xi|_inf = {band}, beyond the band {}",
            grid.band_limit()
        );
        if strict {
            return Err(Error::BandViolation(msg));
        }
        log::warn!("{msg}");
    }
    Ok(())
}

/// `psi(D) f` from the spectrum of `f` and a window sampled on its lattice.
fn filtered_spectrum(spectrum: &SampledFunction, window: &[f64], support: &[usize]) -> SampledFunction {
    let mut out = SampledFunction::zeros(spectrum.grid(), Domain::Frequency);
    let src = spectrum.values();
    let dst = out.values_mut();
    for &i in support {
        dst[i] = src[i] * window[i];
    }
    out
}

/// `‖psi(D) f‖_{L^p}` from the spectrum of `f`.
fn band_norm(spectrum: &SampledFunction, window: &[f64], support: &[usize], p: Exponent) -> Result<f64> {
    let grid = spectrum.grid();
    let filtered = filtered_spectrum(spectrum, window, support);
    match p {
        Exponent::Two => {
            // ‖g‖_2 = (2 pi)^{-n/2} ‖g_hat‖_2 on the lattice.
            let two_pi = 2.0 * std::f64::consts::PI;
            Ok(filtered.lp_norm(Exponent::Two) / two_pi.powf(0.5 * grid.dim() as f64))
        }
        _ => Ok(filtered
            .upsampled_inverse(l1_oversampling(grid.dim()))?
            .lp_norm(p)),
    }
}

fn weighted_norm(
    spectrum: &SampledFunction,
    windows: Vec<(usize, f64, &[f64], &[usize])>,
    p: Exponent,
    q: Exponent,
) -> Result<NormBreakdown> {
    let contributions: Vec<Contribution> = windows
        .into_par_iter()
        .map(|(id, weight, window, support)| {
            let value = band_norm(spectrum, window, support, p)?;
            Ok(Contribution {
                piece_x: id,
                piece_xi: None,
                weight,
                band_norm: value,
                contribution: weight * value,
            })
        })
        .collect::<Result<_>>()?;
    Ok(NormBreakdown::from_contributions(q, contributions))
}

/// `psi_Q(D) f`.
pub fn band_component(f: &SampledFunction, cov: &Covering, piece: &CoveringPiece) -> Result<SampledFunction> {
    f.expect_space()?;
    f.grid().ensure_same(cov.grid())?;
    let spectrum = f.forward_ft()?;
    filtered_spectrum(&spectrum, piece.window(), piece.support()).inverse_ft()
}

/// `sum_Q psi_Q(D) f`, which reproduces `f` on band-limited inputs.
pub fn reconstruct(f: &SampledFunction, cov: &Covering) -> Result<SampledFunction> {
    f.expect_space()?;
    f.grid().ensure_same(cov.grid())?;
    let spectrum = f.forward_ft()?;
    let mut total = SampledFunction::zeros(f.grid(), Domain::Frequency);
    for piece in cov.pieces() {
        let dst = total.values_mut();
        for &i in piece.support() {
            dst[i] += spectrum.values()[i] * piece.window()[i];
        }
    }
    total.inverse_ft()
}

/// `(sum_Q <xi_Q>^{sq} ‖psi_Q(D) f‖_{L^p}^q)^{1/q}`, with the dyadic weights `2^{js}`
/// when `alpha = 1`.
pub fn alpha_modulation_norm(f: &SampledFunction, params: &NormParams, cov: &Covering) -> Result<NormBreakdown> {
    check_alpha(cov, params.alpha)?;
    f.expect_space()?;
    f.grid().ensure_same(cov.grid())?;
    let spectrum = f.forward_ft()?;
    check_function_band(&spectrum, params.strict_band)?;
    let windows = cov
        .pieces()
        .iter()
        .map(|p| (p.id, p.weight.powf(params.s), p.window(), p.support()))
        .collect();
    weighted_norm(&spectrum, windows, params.p, params.q)
}

/// Modulation norm `(sum_k <k>^{sq} ‖psi(D - k) f‖_{L^p}^q)^{1/q}` from the uniform
/// lattice windows, without building a covering.
pub fn modulation_norm(f: &SampledFunction, p: Exponent, q: Exponent, s: f64) -> Result<NormBreakdown> {
    f.expect_space()?;
    let grid = f.grid();
    let dim = grid.dim();
    let spectrum = f.forward_ft()?;
    check_function_band(&spectrum, true)?;
    let owned: Vec<(f64, Vec<f64>, Vec<usize>)> = lattice_labels(grid)
        .into_iter()
        .map(|k| {
            let center: Point = [k[0] as f64, k[1] as f64];
            let w = lattice_window(grid, k);
            let support = nonzero(&w);
            (japanese(&center, dim).powf(s), w, support)
        })
        .collect();
    let windows = owned
        .iter()
        .enumerate()
        .map(|(id, (w, win, sup))| (id, *w, win.as_slice(), sup.as_slice()))
        .collect();
    weighted_norm(&spectrum, windows, p, q)
}

/// Besov norm `(sum_j 2^{jsq} ‖phi_j(D) f‖_{L^p}^q)^{1/q}` from the dyadic windows,
/// without building a covering.
pub fn besov_norm(f: &SampledFunction, p: Exponent, q: Exponent, s: f64) -> Result<NormBreakdown> {
    f.expect_space()?;
    let grid = f.grid();
    let spectrum = f.forward_ft()?;
    check_function_band(&spectrum, true)?;
    let owned: Vec<(f64, Vec<f64>, Vec<usize>)> = dyadic_levels(grid)
        .into_iter()
        .map(|j| {
            let w = dyadic_window(grid, j);
            let support = nonzero(&w);
            (2f64.powi(j as i32).powf(s), w, support)
        })
        .collect();
    let windows = owned
        .iter()
        .enumerate()
        .map(|(id, (w, win, sup))| (id, *w, win.as_slice(), sup.as_slice()))
        .collect();
    weighted_norm(&spectrum, windows, p, q)
}

fn nonzero(w: &[f64]) -> Vec<usize> {
    w.iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// Coverings for the two variables of a symbol: the `y` lattice of the grid and the
/// `eta` lattice of its dual, both from one continuum construction.
#[derive(Clone, Debug)]
pub struct SymbolNormPlan {
    x_cov: Covering,
    xi_cov: Covering,
}

impl SymbolNormPlan {
    pub fn new(cov: &Covering) -> Result<Self> {
        Ok(Self {
            x_cov: cov.clone(),
            xi_cov: cov.resample(&cov.grid().dual())?,
        })
    }

    pub fn covering(&self) -> &Covering {
        &self.x_cov
    }

    /// The covering sampled on the `eta` lattice.
    pub fn dual_covering(&self) -> &Covering {
        &self.xi_cov
    }

    /// `sum_{Q, Q'} <x_Q>^{s1} <xi_Q'>^{s2} ‖psi_Q(D_x) psi_Q'(D_xi) sigma‖_{L^inf}`.
    pub fn norm(&self, sigma: &SampledSymbol, params: &NormParams) -> Result<NormBreakdown> {
        check_alpha(&self.x_cov, params.alpha)?;
        sigma.expect(SymbolDomain::XXi)?;
        let grid = sigma.grid();
        grid.ensure_same(self.x_cov.grid())?;
        let spectrum = sigma.fourier_both()?;
        self.norm_of_spectrum(&spectrum, params)
    }

    fn norm_of_spectrum(&self, spectrum: &SampledSymbol, params: &NormParams) -> Result<NormBreakdown> {
        let grid = spectrum.grid();
        let m = grid.len();
        let values = spectrum.values();
        let peak = spectrum.max_abs();
        if peak == 0.0 {
            return Ok(NormBreakdown::from_contributions(Exponent::One, Vec::new()));
        }
        check_symbol_band(spectrum, peak, params.strict_band)?;

        let mut active_y = vec![false; m];
        let mut active_eta = vec![false; m];
        for (flat, v) in values.iter().enumerate() {
            if v.norm() > ACTIVE_TOLERANCE * peak {
                active_y[flat / m] = true;
                active_eta[flat % m] = true;
            }
        }
        let x_pieces: Vec<&CoveringPiece> = self
            .x_cov
            .pieces()
            .iter()
            .filter(|p| p.support().iter().any(|&i| active_y[i]))
            .collect();
        let xi_pieces: Vec<&CoveringPiece> = self
            .xi_cov
            .pieces()
            .iter()
            .filter(|p| p.support().iter().any(|&i| active_eta[i]))
            .collect();
        let pairs: Vec<(&CoveringPiece, &CoveringPiece)> = x_pieces
            .iter()
            .flat_map(|a| xi_pieces.iter().map(move |b| (*a, *b)))
            .collect();

        let contributions: Vec<Contribution> = pairs
            .into_par_iter()
            .filter_map(|(px, pxi)| {
                let mut entries = Vec::new();
                for &y in px.support() {
                    if !active_y[y] {
                        continue;
                    }
                    let wy = px.window()[y];
                    for &e in pxi.support() {
                        let v = values[y * m + e];
                        if v.norm() > ACTIVE_TOLERANCE * peak {
                            entries.push((y, e, v * (wy * pxi.window()[e])));
                        }
                    }
                }
                if entries.is_empty() {
                    return None;
                }
                let sup = filtered_sup(grid, &entries);
                let weight = px.weight.powf(params.s1) * pxi.weight.powf(params.s2);
                Some(Contribution {
                    piece_x: px.id,
                    piece_xi: Some(pxi.id),
                    weight,
                    band_norm: sup,
                    contribution: weight * sup,
                })
            })
            .collect();
        Ok(NormBreakdown::from_contributions(Exponent::One, contributions))
    }

    /// `sum_{Q, Q'} psi_Q(D_x) psi_Q'(D_xi) sigma`, which reproduces band-limited symbols.
    pub fn reconstruct(&self, sigma: &SampledSymbol) -> Result<SampledSymbol> {
        sigma.expect(SymbolDomain::XXi)?;
        sigma.grid().ensure_same(self.x_cov.grid())?;
        let m = sigma.grid().len();
        let spectrum = sigma.fourier_both()?;
        let mut wy = vec![0.0; m];
        for p in self.x_cov.pieces() {
            for &i in p.support() {
                wy[i] += p.window()[i];
            }
        }
        let mut weta = vec![0.0; m];
        for p in self.xi_cov.pieces() {
            for &i in p.support() {
                weta[i] += p.window()[i];
            }
        }
        let mut out = spectrum;
        for (flat, v) in out.values_mut().iter_mut().enumerate() {
            *v *= wy[flat / m] * weta[flat % m];
        }
        out.inverse_fourier_both()
    }
}

/// Cap on the evaluation lattice per axis, as a multiple of the points per axis.
fn product_oversampling(dim: usize) -> usize {
    if dim == 1 {
        2
    } else {
        1
    }
}

/// Sup norm of `F^{-1}_{1,2}` of a sparse `(y, eta)` spectrum.
///
/// The modulus is unchanged by a frequency shift, so the coefficients are moved to
/// the low corner of their bounding box and the trigonometric polynomial is sampled
/// on `min(4 W, cap)` points per axis, `W` being the box width along that axis.
fn filtered_sup(grid: &GridSpec, entries: &[(usize, usize, Complex64)]) -> f64 {
    let dim = grid.dim();
    let n = grid.points_per_axis();
    let cap = n * product_oversampling(dim);
    let mut lo = [usize::MAX; 4];
    let mut hi = [0usize; 4];
    let multi = |y: usize, e: usize| {
        let a = grid.unflatten(y);
        let b = grid.unflatten(e);
        let mut out = [0usize; 4];
        out[..dim].copy_from_slice(&a[..dim]);
        out[dim..2 * dim].copy_from_slice(&b[..dim]);
        out
    };
    for &(y, e, _) in entries {
        let idx = multi(y, e);
        for a in 0..2 * dim {
            lo[a] = lo[a].min(idx[a]);
            hi[a] = hi[a].max(idx[a]);
        }
    }
    let shape: Vec<usize> = (0..2 * dim)
        .map(|a| (4 * (hi[a] - lo[a] + 1)).next_power_of_two().clamp(8, cap.max(8)))
        .collect();
    let total: usize = shape.iter().product();
    let mut data = vec![Complex64::default(); total];
    for &(y, e, v) in entries {
        let idx = multi(y, e);
        let mut flat = 0;
        for a in 0..2 * dim {
            flat = flat * shape[a] + (idx[a] - lo[a]);
        }
        data[flat] += v;
    }
    for axis in 0..2 * dim {
        fft::dft_axis(&mut data, &shape, axis, FftDirection::Inverse);
    }
    let scale = (grid.period() * grid.dual().period()).powi(dim as i32).recip();
    scale * lp_of(&data, 1.0, Exponent::Infinity)
}

fn check_symbol_band(spectrum: &SampledSymbol, peak: f64, strict: bool) -> Result<()> {
    let grid = spectrum.grid();
    let dual = grid.dual();
    let m = grid.len();
    let dim = grid.dim();
    let mut reach_y: f64 = 0.0;
    let mut reach_eta: f64 = 0.0;
    for (flat, v) in spectrum.values().iter().enumerate() {
        if v.norm() > BAND_TOLERANCE * peak {
            let y = grid.freq_point(flat / m);
            let e = dual.freq_point(flat % m);
            reach_y = reach_y.max(crate::grid::sup_coord(&y, dim));
            reach_eta = reach_eta.max(crate::grid::sup_coord(&e, dim));
        }
    }
    if reach_y > grid.band_limit() + 1e-12 || reach_eta > dual.band_limit() + 1e-12 {
        let msg = format!(
            "symbol spectrum reaches |y|_inf = {reach_y}, |eta|_inf = {reach_eta}; bands are {} and {}",
            grid.band_limit(),
            dual.band_limit()
        );
        if strict {
            return Err(Error::BandViolation(msg));
        }
        log::warn!("{msg}");
    }
    Ok(())
}

/// Product norm of `sigma` with outer exponents `(inf, inf), (1, 1)`.
pub fn product_symbol_norm(sigma: &SampledSymbol, params: &NormParams, cov: &Covering) -> Result<NormBreakdown> {
    SymbolNormPlan::new(cov)?.norm(sigma, params)
}

/// An exponent in `[1, inf]`, kept exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LebesgueIndex {
    Finite(Ratio<i64>),
    Infinity,
}

impl LebesgueIndex {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        let r = Ratio::new(numer, denom);
        if r < Ratio::from_integer(1) {
            return Err(Error::InvalidParameter(format!("exponent {r} below 1")));
        }
        Ok(LebesgueIndex::Finite(r))
    }

    /// `1/p`.
    pub fn reciprocal(self) -> Ratio<i64> {
        match self {
            LebesgueIndex::Finite(r) => r.recip(),
            LebesgueIndex::Infinity => Ratio::from_integer(0),
        }
    }
}

impl From<Exponent> for LebesgueIndex {
    fn from(p: Exponent) -> Self {
        match p {
            Exponent::One => LebesgueIndex::Finite(Ratio::from_integer(1)),
            Exponent::Two => LebesgueIndex::Finite(Ratio::from_integer(2)),
            Exponent::Infinity => LebesgueIndex::Infinity,
        }
    }
}

impl FromStr for LebesgueIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if matches!(t.as_str(), "inf" | "infinity" | "∞") {
            return Ok(LebesgueIndex::Infinity);
        }
        let bad = || Error::InvalidParameter(format!("cannot parse exponent {s:?}"));
        match t.split_once('/') {
            Some((a, b)) => {
                let a = a.trim().parse::<i64>().map_err(|_| bad())?;
                let b = b.trim().parse::<i64>().map_err(|_| bad())?;
                LebesgueIndex::new(a, b)
            }
            None => LebesgueIndex::new(t.parse::<i64>().map_err(|_| bad())?, 1),
        }
    }
}

impl fmt::Display for LebesgueIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LebesgueIndex::Finite(r) => write!(f, "{r}"),
            LebesgueIndex::Infinity => f.write_str("inf"),
        }
    }
}

/// `nu_1 = max(0, 1/q - min(1/p, 1/p'))`, `nu_2 = min(0, 1/q - max(1/p, 1/p'))`.
pub fn nu_indices(p: LebesgueIndex, q: LebesgueIndex) -> (Ratio<i64>, Ratio<i64>) {
    let zero = Ratio::from_integer(0);
    let ip = p.reciprocal();
    let ipc = Ratio::from_integer(1) - ip;
    let iq = q.reciprocal();
    let nu1 = (iq - ip.min(ipc)).max(zero);
    let nu2 = (iq - ip.max(ipc)).min(zero);
    (nu1, nu2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use std::f64::consts::PI;

    fn grid(n: usize) -> GridSpec {
        GridSpec::new(1, n, 8.0 * PI).unwrap()
    }

    #[test]
    fn nu_index_table() {
        let inf = LebesgueIndex::Infinity;
        let one = LebesgueIndex::from(Exponent::One);
        let two = LebesgueIndex::from(Exponent::Two);
        let r = |a: i64| Ratio::from_integer(a);
        assert_eq!(nu_indices(inf, one), (r(1), r(0)));
        assert_eq!(nu_indices(two, two), (r(0), r(0)));
        assert_eq!(nu_indices(one, one), (r(1), r(0)));
        assert_eq!(nu_indices(inf, inf), (r(0), r(-1)));
        let four: LebesgueIndex = "4".parse().unwrap();
        assert_eq!(nu_indices(four, two), (Ratio::new(1, 4), Ratio::new(-1, 4)));
        assert!("1/2".parse::<LebesgueIndex>().is_err());
        assert_eq!("3/2".parse::<LebesgueIndex>().unwrap().to_string(), "3/2");
    }

    #[test]
    fn zero_function_has_zero_norm() {
        let g = grid(64);
        let cov = Covering::build(0.5, &g).unwrap();
        let f = SampledFunction::zeros(&g, Domain::Space);
        let params = NormParams::function(0.5, Exponent::Two, Exponent::Two, 1.0);
        assert_eq!(alpha_modulation_norm(&f, &params, &cov).unwrap().total, 0.0);
    }

    #[test]
    fn alpha_mismatch_rejected() {
        let g = grid(64);
        let cov = Covering::build(0.0, &g).unwrap();
        let f = SampledFunction::zeros(&g, Domain::Space);
        let params = NormParams::function(1.0, Exponent::Two, Exponent::Two, 0.0);
        assert!(matches!(
            alpha_modulation_norm(&f, &params, &cov),
            Err(Error::AlphaMismatch { .. })
        ));
    }

    #[test]
    fn lattice_path_is_bit_equal() {
        let g = grid(64);
        let cov = Covering::build(0.0, &g).unwrap();
        let f = synth::band_limited_random(&g, 4.0, 3).unwrap();
        for (p, q) in [(Exponent::Infinity, Exponent::One), (Exponent::Two, Exponent::Two)] {
            let a = alpha_modulation_norm(&f, &NormParams::function(0.0, p, q, 0.5), &cov).unwrap();
            let b = modulation_norm(&f, p, q, 0.5).unwrap();
            assert_eq!(a.total.to_bits(), b.total.to_bits());
        }
    }

    #[test]
    fn reconstruction_reproduces_input() {
        let g = grid(64);
        let f = synth::band_limited_random(&g, 4.0, 9).unwrap();
        for alpha in [0.0, 0.5, 1.0] {
            let cov = Covering::build(alpha, &g).unwrap();
            let r = reconstruct(&f, &cov).unwrap();
            assert!(r.max_abs_diff(&f) < 1e-8 * f.max_abs());
        }
    }

    #[test]
    fn constant_symbol_lattice_norm_is_one() {
        let g = grid(32);
        let cov = Covering::build(0.0, &g).unwrap();
        let one = SampledSymbol::constant(&g, Complex64::new(1.0, 0.0));
        let b = product_symbol_norm(&one, &NormParams::symbol(0.0, 0.0, 0.0), &cov).unwrap();
        assert!((b.total - 1.0).abs() < 1e-12, "{}", b.total);
        assert_eq!(b.contributions.len(), 1);
    }

    #[test]
    fn out_of_band_function_rejected_when_strict() {
        let g = grid(32);
        let f = synth::plane_wave(&g, [15, 0]);
        assert!(f.is_err());
        let wave = SampledFunction::from_space_fn(&g, |x| Complex64::from_polar(1.0, 3.5 * x[0]));
        let cov = Covering::build(0.0, &g).unwrap();
        let strict = NormParams::function(0.0, Exponent::Two, Exponent::Two, 0.0);
        assert!(alpha_modulation_norm(&wave, &strict, &cov).is_err());
        let loose = strict.with_strict_band(false);
        assert!(alpha_modulation_norm(&wave, &loose, &cov).is_ok());
    }
}
