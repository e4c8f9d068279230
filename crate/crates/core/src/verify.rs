//! Empirical bound checks. Each check evaluates a family of `lhs / rhs` ratios on a
//! base grid and on its refinement (same period, twice the points per axis) and
//! summarizes them in a [`BoundReport`].
//!
//! Random inputs are drawn from seeds `seed + trial`, so a longer run extends a
//! shorter one, and every family is indexed by physical frequencies so that the
//! refined grid sees the same continuum inputs.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covering::Covering;
use crate::error::{Error, Result};
use crate::grid::{euclid, sup_coord, Domain, Exponent, GridSpec, SampledFunction, SampledSymbol, SymbolDomain};
use crate::operators::{
    self, commutator_apply, commutator_twisted, cutoff_constants, l2_norm, mollify_symbol,
    operator_norm_estimate, quantize_apply, regularize_lipschitz, LipschitzFunction,
};
use crate::spaces::{alpha_modulation_norm, nu_indices, LebesgueIndex, NormParams, SymbolNormPlan};
use crate::synth::{self, cube_indices, LipschitzSine};
use crate::window;

/// Mollification and regularization parameters.
pub const EPSILONS: [f64; 3] = [0.5, 0.25, 0.125];
/// Relative slack on the pointwise band-limited bound.
pub const POINTWISE_SLACK: f64 = 1.05;
/// Ceiling on the relative disagreement of the two commutator forms.
pub const COMMUTATOR_AGREEMENT: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub dim: usize,
    pub points_per_axis: usize,
    pub period: f64,
    pub trials: usize,
    /// Size of the test-function suite paired with each symbol.
    pub functions: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub max_iter: usize,
    /// Also evaluate every check on the refined grid.
    pub refine: bool,
    /// Largest accepted relative change of the maximal ratio under refinement.
    pub refinement_tolerance: f64,
    /// `x`-modes of the random smooth symbols.
    pub x_modes: i64,
    /// `xi`-modes of the random smooth symbols.
    pub xi_modes: i64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            dim: 1,
            points_per_axis: 128,
            period: 8.0 * PI,
            trials: 10,
            functions: 5,
            seed: 42,
            tolerance: operators::DEFAULT_TOLERANCE,
            max_iter: operators::DEFAULT_MAX_ITER,
            refine: true,
            refinement_tolerance: 0.2,
            x_modes: 8,
            xi_modes: 3,
        }
    }
}

impl VerifyConfig {
    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.dim, self.points_per_axis, self.period)
    }

    fn grids(&self) -> Result<Vec<GridSpec>> {
        let base = self.grid()?;
        let mut out = vec![base.clone()];
        if self.refine {
            out.push(base.refined(2)?);
        }
        Ok(out)
    }

    fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }

    fn function_seed(&self, trial: usize, index: usize) -> u64 {
        self.seed
            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add((trial * 1000 + index) as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub trial: usize,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub grid_n: usize,
}

impl BoundRow {
    /// `ratio = lhs / rhs`, and 0 when both sides vanish.
    pub fn new(trial: usize, seed: u64, lhs: f64, rhs: f64, grid_n: usize) -> Self {
        let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
        Self {
            trial,
            seed,
            lhs,
            rhs,
            ratio,
            grid_n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub check: String,
    pub alpha: Option<f64>,
    pub dim: usize,
    pub rows: Vec<BoundRow>,
    pub refined_rows: Vec<BoundRow>,
    pub max_ratio: f64,
    pub median_ratio: f64,
    pub refined_max_ratio: Option<f64>,
    pub refined_median_ratio: Option<f64>,
    /// `|max_2N - max_N| / max_N`.
    pub refinement_change: Option<f64>,
    pub refinement_tolerance: Option<f64>,
    pub ceiling: Option<f64>,
    pub skipped: usize,
    pub pass: bool,
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn max_ratio(rows: &[BoundRow]) -> f64 {
    rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
}

impl BoundReport {
    /// Summarizes the rows. The report passes when every ratio is finite, the maximal
    /// ratio stays below `ceiling` on every grid, and, when `stability` is given, the
    /// maximal ratio changes by at most that fraction under refinement.
    pub fn assemble(
        check: &str,
        alpha: Option<f64>,
        dim: usize,
        mut per_grid: Vec<Vec<BoundRow>>,
        skipped: usize,
        ceiling: Option<f64>,
        stability: Option<f64>,
    ) -> Self {
        let refined_rows = if per_grid.len() > 1 {
            per_grid.pop().unwrap_or_default()
        } else {
            Vec::new()
        };
        let rows = per_grid.pop().unwrap_or_default();
        let max = max_ratio(&rows);
        let med = median(&mut rows.iter().map(|r| r.ratio).collect::<Vec<_>>());
        let (refined_max, refined_median, change) = if refined_rows.is_empty() {
            (None, None, None)
        } else {
            let m2 = max_ratio(&refined_rows);
            let med2 = median(&mut refined_rows.iter().map(|r| r.ratio).collect::<Vec<_>>());
            let change = if max > 0.0 {
                (m2 - max).abs() / max
            } else if m2 == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            (Some(m2), Some(med2), Some(change))
        };
        let finite = rows
            .iter()
            .chain(&refined_rows)
            .all(|r| r.ratio.is_finite() && r.lhs.is_finite() && r.rhs.is_finite());
        let under_ceiling = ceiling.is_none_or(|c| max <= c && refined_max.is_none_or(|m| m <= c));
        let stable = match (stability, change) {
            (Some(tol), Some(ch)) => ch <= tol,
            _ => true,
        };
        Self {
            check: check.to_string(),
            alpha,
            dim,
            max_ratio: max,
            median_ratio: med,
            refined_max_ratio: refined_max,
            refined_median_ratio: refined_median,
            refinement_change: change,
            refinement_tolerance: stability.filter(|_| change.is_some()),
            ceiling,
            skipped,
            pass: finite && under_ceiling && stable && !rows.is_empty(),
            rows,
            refined_rows,
        }
    }
}

/// Inputs shared by the refined runs, fixed from the base grid.
#[derive(Clone, Debug)]
struct SuiteScale {
    function_band: f64,
    sine_band: f64,
    xi_step: f64,
}

impl SuiteScale {
    fn new(base: &GridSpec) -> Self {
        let band = base.band_limit();
        Self {
            function_band: 4.0f64.min(0.3 * band),
            sine_band: 3.0f64.min(0.25 * band),
            xi_step: base.period() / 16.0,
        }
    }
}

fn symbol_suite(cfg: &VerifyConfig, grid: &GridSpec, scale: &SuiteScale) -> Result<Vec<SampledSymbol>> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| synth::smooth_symbol(grid, cfg.x_modes, cfg.xi_modes, scale.xi_step, cfg.trial_seed(t)))
        .collect()
}

fn function_suite(cfg: &VerifyConfig, grid: &GridSpec, scale: &SuiteScale, trial: usize) -> Result<Vec<SampledFunction>> {
    (0..cfg.functions)
        .map(|i| synth::band_limited_random(grid, scale.function_band, cfg.function_seed(trial, i)))
        .collect()
}

/// Three random sines with frequencies in `(0, sine_band]`.
pub fn random_sines(grid: &GridSpec, band: f64, seed: u64, odd: bool) -> Vec<LipschitzSine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kmax = ((band / grid.freq_step()) + 1e-9).floor().max(1.0) as i64;
    let dim = grid.dim();
    (0..3)
        .map(|_| {
            let mut index = [0i64; 2];
            loop {
                for a in index.iter_mut().take(dim) {
                    *a = rng.random_range(-kmax..=kmax);
                }
                if index[..dim].iter().any(|&k| k != 0) {
                    break;
                }
            }
            let amplitude = rng.random_range(0.2..1.0);
            let phase: f64 = rng.random_range(0.0..2.0 * PI);
            LipschitzSine {
                amplitude,
                index,
                phase: if odd { 0.0 } else { phase },
            }
        })
        .collect()
}

fn norm_plans(alphas: &[f64], grid: &GridSpec) -> Result<Vec<SymbolNormPlan>> {
    alphas
        .iter()
        .map(|&a| SymbolNormPlan::new(&Covering::build(a, grid)?))
        .collect()
}

/// `‖sigma(X,D)‖_{L^2 -> L^2} / ‖sigma‖` with weights `s1 = s2 = alpha n / 2`, one
/// report per `alpha`.
pub fn check_operator_bound(alphas: &[f64], cfg: &VerifyConfig) -> Result<Vec<BoundReport>> {
    let grids = cfg.grids()?;
    let scale = SuiteScale::new(&grids[0]);
    let mut per_alpha: Vec<Vec<Vec<BoundRow>>> = vec![Vec::new(); alphas.len()];
    for grid in &grids {
        let n = grid.points_per_axis();
        let dim = grid.dim() as f64;
        let symbols = symbol_suite(cfg, grid, &scale)?;
        let norms: Vec<f64> = symbols
            .par_iter()
            .map(|s| operator_norm_estimate(s, cfg.tolerance, cfg.max_iter).map(|e| e.norm))
            .collect::<Result<_>>()?;
        let plans = norm_plans(alphas, grid)?;
        for (ai, (&alpha, plan)) in alphas.iter().zip(&plans).enumerate() {
            let params = NormParams::symbol(alpha, alpha * dim / 2.0, alpha * dim / 2.0);
            let rows = symbols
                .par_iter()
                .enumerate()
                .map(|(t, s)| {
                    let rhs = plan.norm(s, &params)?.total;
                    Ok(BoundRow::new(t, cfg.trial_seed(t), norms[t], rhs, n))
                })
                .collect::<Result<Vec<_>>>()?;
            per_alpha[ai].push(rows);
        }
    }
    Ok(alphas
        .iter()
        .zip(per_alpha)
        .map(|(&a, rows)| {
            BoundReport::assemble("operator-bound", Some(a), cfg.dim, rows, 0, None, Some(cfg.refinement_tolerance))
        })
        .collect())
}

/// `max_f ‖[sigma(X,D), a] f‖ / ‖f‖` against `‖∇a‖_inf ‖sigma‖` with weights
/// `s1 = alpha n / 2`, `s2 = alpha n + 1`, one report per `alpha`, plus a report on
/// the agreement of the direct and difference forms of the commutator.
pub fn check_commutator_bound(alphas: &[f64], cfg: &VerifyConfig) -> Result<Vec<BoundReport>> {
    let grids = cfg.grids()?;
    let scale = SuiteScale::new(&grids[0]);
    let mut per_alpha: Vec<Vec<Vec<BoundRow>>> = vec![Vec::new(); alphas.len()];
    let mut identity: Vec<Vec<BoundRow>> = Vec::new();
    for grid in &grids {
        let n = grid.points_per_axis();
        let dim = grid.dim() as f64;
        let symbols = symbol_suite(cfg, grid, &scale)?;
        let trials: Vec<(f64, f64, f64, f64)> = symbols
            .par_iter()
            .enumerate()
            .map(|(t, sigma)| {
                let a = synth::lipschitz_sines(grid, &random_sines(grid, scale.sine_band, cfg.trial_seed(t), false))?;
                let mut best: f64 = 0.0;
                let mut diff: f64 = 0.0;
                let mut peak: f64 = 0.0;
                for f in function_suite(cfg, grid, &scale, t)? {
                    let direct = commutator_apply(sigma, &a, &f)?;
                    let twisted = commutator_twisted(sigma, &a, &f)?;
                    diff = diff.max(direct.max_abs_diff(&twisted));
                    peak = peak.max(direct.max_abs());
                    best = best.max(l2_norm(&direct) / l2_norm(&f));
                }
                Ok((best, a.grad_sup(), diff, peak))
            })
            .collect::<Result<_>>()?;
        identity.push(
            trials
                .iter()
                .enumerate()
                .map(|(t, &(_, _, d, p))| BoundRow::new(t, cfg.trial_seed(t), d, p, n))
                .collect(),
        );
        let plans = norm_plans(alphas, grid)?;
        for (ai, (&alpha, plan)) in alphas.iter().zip(&plans).enumerate() {
            let params = NormParams::symbol(alpha, alpha * dim / 2.0, alpha * dim + 1.0);
            let rows = symbols
                .par_iter()
                .enumerate()
                .map(|(t, s)| {
                    let (lhs, grad, _, _) = trials[t];
                    let rhs = grad * plan.norm(s, &params)?.total;
                    Ok(BoundRow::new(t, cfg.trial_seed(t), lhs, rhs, n))
                })
                .collect::<Result<Vec<_>>>()?;
            per_alpha[ai].push(rows);
        }
    }
    let mut out: Vec<BoundReport> = alphas
        .iter()
        .zip(per_alpha)
        .map(|(&a, rows)| {
            BoundReport::assemble("commutator-bound", Some(a), cfg.dim, rows, 0, None, Some(cfg.refinement_tolerance))
        })
        .collect();
    out.push(BoundReport::assemble(
        "commutator-identity",
        None,
        cfg.dim,
        identity,
        0,
        Some(COMMUTATOR_AGREEMENT),
        None,
    ));
    Ok(out)
}

/// Half-width of the box `Omega` used by the band-limited checks.
pub const OMEGA_HALF_WIDTH: f64 = 2.0;
/// Range `|tau|_inf <= TAU_RANGE` of the oscillatory-integral inputs.
pub const TAU_RANGE: f64 = 4.0;

fn omega_measure(dim: usize) -> f64 {
    (2.0 * OMEGA_HALF_WIDTH).powi(dim as i32)
}

/// Samples `g(x, tau)` of a function band-limited in `x` to `Omega`, for `tau` on the
/// frequency lattice with `|tau|_inf <= TAU_RANGE`; returns `(tau indices, rows)`.
pub fn oscillatory_input(grid: &GridSpec, seed: u64) -> Result<(Vec<[i64; 2]>, Vec<SampledFunction>)> {
    let dim = grid.dim();
    let step = grid.freq_step();
    let pm = (OMEGA_HALF_WIDTH / step + 1e-9).floor() as i64;
    let tm = (TAU_RANGE / step + 1e-9).floor() as i64;
    if (pm + tm) as f64 * step > grid.band_limit() {
        return Err(Error::BandViolation(format!(
            "Omega and tau range exceed the band {}",
            grid.band_limit()
        )));
    }
    let taus = cube_indices(tm, dim);
    let ps = cube_indices(pm, dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ln = grid.period().powi(dim as i32);
    let mut rows = Vec::with_capacity(taus.len());
    for _ in &taus {
        let mut spectrum = SampledFunction::zeros(grid, Domain::Frequency);
        for p in &ps {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            spectrum.values_mut()[storage(grid, *p)] = c * ln;
        }
        rows.push(spectrum.inverse_ft()?);
    }
    Ok((taus, rows))
}

fn storage(grid: &GridSpec, k: [i64; 2]) -> usize {
    let mut idx = [0usize; 2];
    for a in 0..grid.dim() {
        idx[a] = grid.freq_storage(k[a]).expect("index inside the lattice");
    }
    grid.flatten(idx)
}

/// `h(x) = ∫ e^{i x . tau} g(x, tau) dtau` and `‖g‖_{L^2 x L^2}` on the lattice.
pub fn oscillatory_integral(grid: &GridSpec, taus: &[[i64; 2]], rows: &[SampledFunction]) -> Result<(SampledFunction, f64)> {
    let w = grid.freq_weight();
    let mut h = SampledFunction::zeros(grid, Domain::Space);
    let mut g2 = 0.0;
    for (tau, g) in taus.iter().zip(rows) {
        let wave = synth::plane_wave(grid, *tau)?;
        for ((hv, gv), e) in h.values_mut().iter_mut().zip(g.values()).zip(wave.values()) {
            *hv += w * e * gv;
        }
        g2 += w * g.lp_norm(Exponent::Two).powi(2);
    }
    Ok((h, g2.sqrt()))
}

/// `‖h‖_{L^2} / (|Omega|^{1/2} ‖g‖_{L^2 x L^2})` for random `g` band-limited in `x`.
pub fn check_oscillatory_integral(cfg: &VerifyConfig) -> Result<BoundReport> {
    let grids = cfg.grids()?;
    let omega = omega_measure(cfg.dim);
    let mut per_grid = Vec::new();
    for grid in &grids {
        let n = grid.points_per_axis();
        let rows = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let (taus, g) = oscillatory_input(grid, cfg.trial_seed(t))?;
                let (h, gn) = oscillatory_integral(grid, &taus, &g)?;
                Ok(BoundRow::new(t, cfg.trial_seed(t), l2_norm(&h), omega.sqrt() * gn, n))
            })
            .collect::<Result<Vec<_>>>()?;
        per_grid.push(rows);
    }
    Ok(BoundReport::assemble(
        "oscillatory-integral",
        None,
        cfg.dim,
        per_grid,
        0,
        None,
        Some(cfg.refinement_tolerance),
    ))
}

/// A symbol whose transform in `xi` is supported in the open ball of radius
/// `OMEGA_HALF_WIDTH`, uniformly in `x`: `F_2 sigma(x, eta) = sum_p e^{i xi_p x} d_p(eta)`
/// with `d_p(eta) = b(|eta| / 2) t_p(eta)` for random trigonometric `t_p` and
/// `|p|_inf <= 2`.
pub fn band_limited_symbol(grid: &GridSpec, seed: u64) -> Result<SampledSymbol> {
    let dim = grid.dim();
    let dual = grid.dual();
    if OMEGA_HALF_WIDTH > dual.band_limit() {
        return Err(Error::BandViolation(format!(
            "Omega exceeds the dual band {}",
            dual.band_limit()
        )));
    }
    let ps = cube_indices(2, dim);
    let modes = cube_indices(2, dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = grid.len();
    let mut values = vec![Complex64::default(); m * m];
    for p in &ps {
        let coeffs: Vec<Complex64> = modes
            .iter()
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let d = SampledFunction::from_freq_fn(&dual, |eta| {
            let r = euclid(eta, dim);
            let b = window::bump(r / OMEGA_HALF_WIDTH);
            if b == 0.0 {
                return Complex64::default();
            }
            let t: Complex64 = modes
                .iter()
                .zip(&coeffs)
                .map(|(q, c)| {
                    let arg: f64 = (0..dim).map(|a| q[a] as f64 * eta[a]).sum();
                    c * Complex64::from_polar(1.0, 0.5 * arg)
                })
                .sum();
            t * b
        });
        let profile = d.inverse_ft()?;
        let wave = synth::plane_wave(grid, *p)?;
        for (j, e) in wave.values().iter().enumerate() {
            let row = &mut values[j * m..(j + 1) * m];
            for (v, dv) in row.iter_mut().zip(profile.values()) {
                *v += e * dv;
            }
        }
    }
    SampledSymbol::new(grid.clone(), SymbolDomain::XXi, values)
}

/// Ratios for symbols with `xi`-transform supported in `Omega`:
/// `‖sigma(X,D)‖ / (|Omega|^{1/2} sup_x ‖sigma(x,.)‖_2)` and the pointwise
/// `|sigma(X,D) f(x)| / (|Omega|^{1/2} ‖sigma(x,.)‖_2 ‖f‖_inf)`, the latter
/// against the ceiling `(2 pi)^{-n/2} * POINTWISE_SLACK`.
pub fn check_band_limited_bounds(cfg: &VerifyConfig) -> Result<Vec<BoundReport>> {
    let grids = cfg.grids()?;
    let scale = SuiteScale::new(&grids[0]);
    let omega = omega_measure(cfg.dim).sqrt();
    let mut l2_rows = Vec::new();
    let mut point_rows = Vec::new();
    for grid in &grids {
        let n = grid.points_per_axis();
        let m = grid.len();
        let w = grid.freq_weight();
        let pairs = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let seed = cfg.trial_seed(t);
                let sigma = band_limited_symbol(grid, seed)?;
                let row_norms: Vec<f64> = (0..m)
                    .map(|j| crate::grid::lp_of(sigma.row(j), w, Exponent::Two))
                    .collect();
                let sup = row_norms.iter().cloned().fold(0.0, f64::max);
                let op = operator_norm_estimate(&sigma, cfg.tolerance, cfg.max_iter)?.norm;
                let l2 = BoundRow::new(t, seed, op, omega * sup, n);
                let mut best = BoundRow::new(t, seed, 0.0, 1.0, n);
                for f in function_suite(cfg, grid, &scale, t)? {
                    let tf = quantize_apply(&sigma, &f)?;
                    let finf = f.max_abs();
                    for (j, v) in tf.values().iter().enumerate() {
                        let rhs = omega * row_norms[j] * finf;
                        if rhs > 0.0 {
                            let row = BoundRow::new(t, seed, v.norm(), rhs, n);
                            if row.ratio > best.ratio {
                                best = row;
                            }
                        }
                    }
                }
                Ok((l2, best))
            })
            .collect::<Result<Vec<_>>>()?;
        let (l2, point): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        l2_rows.push(l2);
        point_rows.push(point);
    }
    let ceiling = (2.0 * PI).powf(-0.5 * cfg.dim as f64) * POINTWISE_SLACK;
    Ok(vec![
        BoundReport::assemble("band-limited-l2", None, cfg.dim, l2_rows, 0, None, Some(cfg.refinement_tolerance)),
        BoundReport::assemble(
            "band-limited-pointwise",
            None,
            cfg.dim,
            point_rows,
            0,
            Some(ceiling),
            Some(cfg.refinement_tolerance),
        ),
    ])
}

/// `‖phi_j(D) a‖_inf 2^j / ‖∇a‖_inf` for every dyadic level `j >= 1`; one row per
/// `(trial, level)`.
pub fn dyadic_decay_rows(a: &LipschitzFunction, cov: &Covering, trial_base: usize, seed: u64) -> Result<Vec<BoundRow>> {
    if cov.alpha() != 1.0 {
        return Err(Error::AlphaMismatch {
            covering: cov.alpha(),
            requested: 1.0,
        });
    }
    a.grid().ensure_same(cov.grid())?;
    let grad = a.grad_sup();
    if grad <= 1e-12 {
        return Err(Error::InvalidParameter("constant function has no gradient to compare".into()));
    }
    let grid = a.grid();
    let n = grid.points_per_axis();
    let params = NormParams::function(1.0, Exponent::Infinity, Exponent::Infinity, 0.0);
    let norms = alpha_modulation_norm(&a.to_function(), &params, cov)?;
    Ok(cov
        .pieces()
        .iter()
        .zip(&norms.contributions)
        .filter(|(p, _)| p.label[0] >= 1)
        .enumerate()
        .map(|(i, (p, c))| BoundRow::new(trial_base + i, seed, c.band_norm * p.weight, grad, n))
        .collect())
}

pub fn check_dyadic_decay(cfg: &VerifyConfig) -> Result<BoundReport> {
    let grids = cfg.grids()?;
    let scale = SuiteScale::new(&grids[0]);
    let mut per_grid = Vec::new();
    for grid in &grids {
        let cov = Covering::build(1.0, grid)?;
        let levels = cov.pieces().iter().filter(|p| p.label[0] >= 1).count();
        let rows: Vec<Vec<BoundRow>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let seed = cfg.trial_seed(t);
                let a = synth::lipschitz_sines(grid, &random_sines(grid, scale.sine_band, seed, false))?;
                dyadic_decay_rows(&a, &cov, t * levels, seed)
            })
            .collect::<Result<_>>()?;
        per_grid.push(rows.into_iter().flatten().collect());
    }
    Ok(BoundReport::assemble(
        "dyadic-decay",
        None,
        cfg.dim,
        per_grid,
        0,
        None,
        Some(cfg.refinement_tolerance),
    ))
}

/// For `(p, q)`, the ratios `‖f‖_{M^{p,q}} / ‖f‖_{B^{p,q}_{n nu_1}}` and
/// `‖f‖_{B^{p,q}_{n nu_2}} / ‖f‖_{M^{p,q}}` over random band-limited `f`.
pub fn check_embeddings(p: Exponent, q: Exponent, cfg: &VerifyConfig) -> Result<Vec<BoundReport>> {
    let grids = cfg.grids()?;
    let scale = SuiteScale::new(&grids[0]);
    let (nu1, nu2) = nu_indices(LebesgueIndex::from(p), LebesgueIndex::from(q));
    let n = cfg.dim as f64;
    let s1 = n * (*nu1.numer() as f64 / *nu1.denom() as f64);
    let s2 = n * (*nu2.numer() as f64 / *nu2.denom() as f64);
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for grid in &grids {
        let gn = grid.points_per_axis();
        let modulation = Covering::build(0.0, grid)?;
        let dyadic = Covering::build(1.0, grid)?;
        let rows = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let seed = cfg.function_seed(t, 0);
                let f = synth::band_limited_random(grid, scale.function_band, seed)?;
                let m = alpha_modulation_norm(&f, &NormParams::function(0.0, p, q, 0.0), &modulation)?.total;
                let b1 = alpha_modulation_norm(&f, &NormParams::function(1.0, p, q, s1), &dyadic)?.total;
                let b2 = alpha_modulation_norm(&f, &NormParams::function(1.0, p, q, s2), &dyadic)?.total;
                Ok((BoundRow::new(t, seed, m, b1, gn), BoundRow::new(t, seed, b2, m, gn)))
            })
            .collect::<Result<Vec<_>>>()?;
        let (u, l): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        upper.push(u);
        lower.push(l);
    }
    let tag = format!("{p}-{q}");
    Ok(vec![
        BoundReport::assemble(
            &format!("embedding-upper-{tag}"),
            None,
            cfg.dim,
            upper,
            0,
            None,
            Some(cfg.refinement_tolerance),
        ),
        BoundReport::assemble(
            &format!("embedding-lower-{tag}"),
            None,
            cfg.dim,
            lower,
            0,
            None,
            Some(cfg.refinement_tolerance),
        ),
    ])
}

/// Zeroes the joint spectrum outside the truncation bands in `y` and `eta`.
fn band_truncated(sigma: &SampledSymbol) -> Result<SampledSymbol> {
    let grid = sigma.grid();
    let dual = grid.dual();
    let (m, dim) = (grid.len(), grid.dim());
    let mut spectrum = sigma.fourier_both()?;
    for (flat, v) in spectrum.values_mut().iter_mut().enumerate() {
        let y = sup_coord(&grid.freq_point(flat / m), dim);
        let eta = sup_coord(&dual.freq_point(flat % m), dim);
        if y > grid.band_limit() + 1e-12 || eta > dual.band_limit() + 1e-12 {
            *v = Complex64::default();
        }
    }
    spectrum.inverse_fourier_both()
}

/// `‖sigma_eps‖ / ‖sigma‖` over `eps` in [`EPSILONS`] with the product norm at
/// `s1 = s2 = alpha n / 2`; one row per `(trial, eps)`.
pub fn check_mollifier(alpha: f64, cfg: &VerifyConfig) -> Result<BoundReport> {
    let grids = cfg.grids()?;
    let scale = SuiteScale::new(&grids[0]);
    let mut per_grid = Vec::new();
    for grid in &grids {
        let n = grid.points_per_axis();
        let s = alpha * grid.dim() as f64 / 2.0;
        let plan = SymbolNormPlan::new(&Covering::build(alpha, grid)?)?;
        let params = NormParams::symbol(alpha, s, s);
        let symbols = symbol_suite(cfg, grid, &scale)?;
        let rows: Vec<Vec<BoundRow>> = symbols
            .par_iter()
            .enumerate()
            .map(|(t, sigma)| {
                let base = plan.norm(sigma, &params)?.total;
                EPSILONS
                    .iter()
                    .enumerate()
                    .map(|(e, &eps)| {
                        let lhs = plan.norm(&band_truncated(&mollify_symbol(sigma, eps)?)?, &params)?.total;
                        Ok(BoundRow::new(t * EPSILONS.len() + e, cfg.trial_seed(t), lhs, base, n))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        per_grid.push(rows.into_iter().flatten().collect());
    }
    Ok(BoundReport::assemble(
        "mollifier",
        Some(alpha),
        cfg.dim,
        per_grid,
        0,
        None,
        Some(cfg.refinement_tolerance),
    ))
}

/// `‖∇a_eps‖_inf / ‖∇a‖_inf` over `eps` in [`EPSILONS`] for odd sine sums (so that
/// `a(0) = 0` and every `eps < 1` is admissible), against the cut-off bound.
pub fn check_regularizer(cfg: &VerifyConfig) -> Result<BoundReport> {
    let grids = cfg.grids()?;
    let scale = SuiteScale::new(&grids[0]);
    let bound = cutoff_constants(cfg.dim).bound;
    let mut per_grid = Vec::new();
    for grid in &grids {
        let n = grid.points_per_axis();
        let rows: Vec<Vec<BoundRow>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let seed = cfg.trial_seed(t);
                let a = synth::lipschitz_sines(grid, &random_sines(grid, scale.sine_band, seed, true))?;
                EPSILONS
                    .iter()
                    .enumerate()
                    .map(|(e, &eps)| {
                        let ae = regularize_lipschitz(&a, eps)?;
                        Ok(BoundRow::new(t * EPSILONS.len() + e, seed, ae.grad_sup(), a.grad_sup(), n))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        per_grid.push(rows.into_iter().flatten().collect());
    }
    Ok(BoundReport::assemble(
        "regularizer",
        None,
        cfg.dim,
        per_grid,
        0,
        Some(bound),
        Some(cfg.refinement_tolerance),
    ))
}

/// Which groups of checks to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Operator,
    Commutator,
    Lemmas,
    Appendix,
    All,
}

pub fn run_suite(suite: Suite, alphas: &[f64], cfg: &VerifyConfig) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Operator {
        out.extend(check_operator_bound(alphas, cfg)?);
    }
    if all || suite == Suite::Commutator {
        out.extend(check_commutator_bound(alphas, cfg)?);
    }
    if all || suite == Suite::Lemmas {
        out.push(check_oscillatory_integral(cfg)?);
        out.extend(check_band_limited_bounds(cfg)?);
        out.push(check_dyadic_decay(cfg)?);
        out.push(check_mollifier(0.0, cfg)?);
        out.push(check_regularizer(cfg)?);
    }
    if all || suite == Suite::Appendix {
        out.extend(check_embeddings(Exponent::Two, Exponent::Two, cfg)?);
        out.extend(check_embeddings(Exponent::Infinity, Exponent::One, cfg)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            points_per_axis: 64,
            trials: 2,
            functions: 2,
            x_modes: 3,
            xi_modes: 2,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn median_and_assembly() {
        let rows = vec![
            BoundRow::new(0, 1, 1.0, 2.0, 64),
            BoundRow::new(1, 2, 3.0, 2.0, 64),
            BoundRow::new(2, 3, 0.0, 0.0, 64),
        ];
        let refined = vec![BoundRow::new(0, 1, 2.0, 1.0, 128)];
        let r = BoundReport::assemble("x", None, 1, vec![rows, refined], 0, None, Some(0.2));
        assert_eq!(r.max_ratio, 1.5);
        assert_eq!(r.median_ratio, 0.5);
        assert!((r.refinement_change.unwrap() - 0.5 / 1.5).abs() < 1e-15);
        assert!(!r.pass);
        let ok = BoundReport::assemble("x", None, 1, vec![vec![BoundRow::new(0, 1, 1.0, 1.0, 64)]], 0, Some(2.0), Some(0.2));
        assert!(ok.pass);
        assert!(ok.refinement_change.is_none());
    }

    #[test]
    fn oscillatory_separable_closed_form() {
        let g = GridSpec::new(1, 64, 8.0 * PI).unwrap();
        let u = synth::band_limited_random(&g, 1.5, 4).unwrap();
        let taus = vec![[-2, 0], [3, 0]];
        let v = [Complex64::new(0.5, 0.0), Complex64::new(0.0, -1.0)];
        let rows: Vec<SampledFunction> = v.iter().map(|c| u.scaled(*c)).collect();
        let (h, _) = oscillatory_integral(&g, &taus, &rows).unwrap();
        let w = g.freq_weight();
        for j in 0..g.len() {
            let x = g.space_coord(j);
            let inner: Complex64 = taus
                .iter()
                .zip(&v)
                .map(|(t, c)| c * Complex64::from_polar(w, t[0] as f64 * g.freq_step() * x))
                .sum();
            assert!((h.values()[j] - u.values()[j] * inner).norm() < 1e-12);
        }
    }

    #[test]
    fn band_limited_symbol_has_compact_xi_transform() {
        let g = GridSpec::new(1, 64, 8.0 * PI).unwrap();
        let sigma = band_limited_symbol(&g, 5).unwrap();
        let t = sigma.fourier_xi().unwrap();
        let dual = g.dual();
        let m = g.len();
        let peak = t.max_abs();
        for (flat, v) in t.values().iter().enumerate() {
            if dual.freq_coord(flat % m).abs() >= OMEGA_HALF_WIDTH {
                assert!(v.norm() < 1e-12 * peak);
            }
        }
    }

    #[test]
    fn checks_are_deterministic() {
        let cfg = small();
        let a = check_oscillatory_integral(&cfg).unwrap();
        let b = check_oscillatory_integral(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 2);
        assert_eq!(a.refined_rows.len(), 2);
    }

    #[test]
    fn dyadic_decay_rejects_constants() {
        let g = GridSpec::new(1, 64, 8.0 * PI).unwrap();
        let cov = Covering::build(1.0, &g).unwrap();
        let a = LipschitzFunction::new(&g, vec![2.0; g.len()]).unwrap();
        assert!(dyadic_decay_rows(&a, &cov, 0, 0).is_err());
    }
}
