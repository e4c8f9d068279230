//! Pseudo-differential operators `sigma(X, D)` on the lattice, their commutators
//! with multiplications, operator-norm estimates, and the smoothing families used
//! to regularize symbols and Lipschitz multipliers.
//!
//! Quadrature form of the quantization:
//! `sigma(X,D) f(x_j) = L^{-n} sum_k e^{i xi_k . x_j} sigma(x_j, xi_k) f_hat(xi_k)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covering::l1_oversampling;
use crate::error::{Error, Result};
use crate::grid::{
    lp_of, Domain, Exponent, GridSpec, SampledFunction, SampledSymbol, SymbolDomain,
};
use crate::synth::lattice_phase;
use crate::window::{self, CompactCutoff};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 500;
const POWER_SEED: u64 = 0x5eed_a1fa;
/// Relative size below which a Fourier coefficient is treated as absent when
/// locating the effective band of a product.
const BAND_TOLERANCE: f64 = 1e-10;

/// `table[a N + b] = e^{2 pi i (a - N/2)(b - N/2) / N} = e^{i xi_a x_b}`.
struct PhaseTable {
    n: usize,
    dim: usize,
    table: Vec<Complex64>,
}

impl PhaseTable {
    fn new(grid: &GridSpec) -> Self {
        let n = grid.points_per_axis();
        let half = (n / 2) as i64;
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(lattice_phase(a as i64 - half, b as i64 - half, n));
            }
        }
        Self {
            n,
            dim: grid.dim(),
            table,
        }
    }

    /// `out[k] = e^{i xi_k . x_j}` for the spatial multi-index `j`.
    fn fill_row(&self, j: [usize; 2], out: &mut [Complex64]) {
        let n = self.n;
        if self.dim == 1 {
            out.copy_from_slice(&self.table[j[0] * n..(j[0] + 1) * n]);
        } else {
            let r1 = &self.table[j[0] * n..(j[0] + 1) * n];
            let r2 = &self.table[j[1] * n..(j[1] + 1) * n];
            for (k1, a) in r1.iter().enumerate() {
                let block = &mut out[k1 * n..(k1 + 1) * n];
                for (o, b) in block.iter_mut().zip(r2) {
                    *o = a * b;
                }
            }
        }
    }
}

fn check_pair(sigma: &SampledSymbol, f: &SampledFunction) -> Result<()> {
    sigma.grid().ensure_same(f.grid())?;
    sigma.expect(SymbolDomain::XXi)?;
    f.expect_space()
}

/// `sigma(X, D) f`.
pub fn quantize_apply(sigma: &SampledSymbol, f: &SampledFunction) -> Result<SampledFunction> {
    check_pair(sigma, f)?;
    let spectrum = f.forward_ft()?;
    Ok(apply_spectrum(sigma, spectrum.values(), &PhaseTable::new(f.grid())))
}

fn apply_spectrum(sigma: &SampledSymbol, fhat: &[Complex64], phases: &PhaseTable) -> SampledFunction {
    let grid = sigma.grid();
    let m = grid.len();
    let scale = grid.period().powi(grid.dim() as i32).recip();
    let values: Vec<Complex64> = (0..m)
        .into_par_iter()
        .map_init(
            || vec![Complex64::default(); m],
            |row, j| {
                phases.fill_row(grid.unflatten(j), row);
                let s = sigma.row(j);
                let acc: Complex64 = row
                    .iter()
                    .zip(s)
                    .zip(fhat)
                    .map(|((e, s), f)| e * s * f)
                    .sum();
                acc * scale
            },
        )
        .collect();
    SampledFunction::new(grid.clone(), Domain::Space, values).expect("length matches grid")
}

/// Conjugate transpose of the quadrature matrix of `sigma(X, D)`:
/// `(L/N)^n F^{-1}[ sum_j e^{-i xi_k . x_j} conj(sigma(x_j, xi_k)) g_j ]`.
pub fn adjoint_apply(sigma: &SampledSymbol, g: &SampledFunction) -> Result<SampledFunction> {
    check_pair(sigma, g)?;
    adjoint_with(sigma, g, &PhaseTable::new(g.grid()))
}

fn adjoint_with(sigma: &SampledSymbol, g: &SampledFunction, phases: &PhaseTable) -> Result<SampledFunction> {
    let grid = g.grid();
    let m = grid.len();
    let gv = g.values();
    let values = sigma.values();
    // e^{i xi_k x_j} is symmetric in the lattice indices, so column k of the phase
    // matrix is row k of the table.
    let h: Vec<Complex64> = (0..m)
        .into_par_iter()
        .map_init(
            || vec![Complex64::default(); m],
            |col, k| {
                phases.fill_row(grid.unflatten(k), col);
                let mut acc = Complex64::default();
                for (j, (e, gj)) in col.iter().zip(gv).enumerate() {
                    acc += (e * values[j * m + k]).conj() * gj;
                }
                acc
            },
        )
        .collect();
    let out = SampledFunction::new(grid.clone(), Domain::Frequency, h)?.inverse_ft()?;
    Ok(out.scaled(Complex64::new(grid.space_weight(), 0.0)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Largest singular value of the discrete `sigma(X, D)` on `L^2` of the lattice, by
/// power iteration on `A^H A` from a fixed pseudo-random start.
pub fn operator_norm_estimate(
    sigma: &SampledSymbol,
    tol: f64,
    max_iter: usize,
) -> Result<NormEstimate> {
    sigma.expect(SymbolDomain::XXi)?;
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} and iteration cap {max_iter} must be positive"
        )));
    }
    let grid = sigma.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let start: Vec<Complex64> = (0..grid.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let mut v = SampledFunction::new(grid.clone(), Domain::Space, start)?;
    normalize(&mut v);
    let phases = PhaseTable::new(grid);
    let mut lambda = 0.0;
    for it in 1..=max_iter {
        let av = apply_spectrum(sigma, v.forward_ft()?.values(), &phases);
        let next = l2_sq(&av);
        if next == 0.0 {
            return Ok(NormEstimate {
                norm: 0.0,
                iterations: it,
                converged: true,
            });
        }
        let change = (next - lambda).abs();
        lambda = next;
        if it > 1 && change <= tol * lambda {
            return Ok(NormEstimate {
                norm: lambda.sqrt(),
                iterations: it,
                converged: true,
            });
        }
        v = adjoint_with(sigma, &av, &phases)?;
        normalize(&mut v);
    }
    log::warn!("power iteration stopped at {max_iter} iterations without converging");
    Ok(NormEstimate {
        norm: lambda.sqrt(),
        iterations: max_iter,
        converged: false,
    })
}

fn l2_sq(f: &SampledFunction) -> f64 {
    f.values().iter().map(|v| v.norm_sqr()).sum()
}

fn normalize(f: &mut SampledFunction) {
    let n = l2_sq(f).sqrt();
    if n > 0.0 {
        f.values_mut().iter_mut().for_each(|v| *v /= n);
    }
}

/// A real function `a` on the spatial lattice with `‖∇a‖_{L^inf}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzFunction {
    grid: GridSpec,
    samples: Vec<f64>,
    grad_sup: f64,
}

impl LipschitzFunction {
    /// Computes `‖∇a‖_{L^inf}` by spectral differentiation of the trigonometric
    /// interpolant, maximized on an oversampled lattice.
    pub fn new(grid: &GridSpec, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Format(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        let f = real_function(grid, &samples);
        let grad_sup = spectral_grad_sup(&f)?;
        Ok(Self {
            grid: grid.clone(),
            samples,
            grad_sup,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn grad_sup(&self) -> f64 {
        self.grad_sup
    }

    /// The constant `A` in `|a(x) - a(y)| <= A |x - y|`, taken equal to `‖∇a‖_inf`.
    pub fn lipschitz_constant(&self) -> f64 {
        self.grad_sup
    }

    pub fn to_function(&self) -> SampledFunction {
        real_function(&self.grid, &self.samples)
    }

    /// `a(0)`; the origin is a lattice node.
    pub fn value_at_origin(&self) -> f64 {
        let half = self.grid.points_per_axis() / 2;
        self.samples[self.grid.flatten([half, half])]
    }

    /// Upper end of the admissible regularization range:
    /// `min(‖∇a‖ / |a(0)|, 1)` if `a(0) != 0`, else 1.
    pub fn epsilon_limit(&self) -> f64 {
        let a0 = self.value_at_origin();
        if a0 != 0.0 {
            (self.grad_sup / a0.abs()).min(1.0)
        } else {
            1.0
        }
    }
}

fn real_function(grid: &GridSpec, samples: &[f64]) -> SampledFunction {
    SampledFunction::new(
        grid.clone(),
        Domain::Space,
        samples.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
    )
    .expect("length checked")
}

/// Spectral derivative along `axis`; the unpaired Nyquist mode is dropped.
fn derivative_spectrum(spectrum: &SampledFunction, axis: usize) -> SampledFunction {
    let grid = spectrum.grid();
    let mut out = spectrum.clone();
    for (k, v) in out.values_mut().iter_mut().enumerate() {
        let idx = grid.unflatten(k);
        if idx[axis] == 0 {
            *v = Complex64::default();
        } else {
            *v *= Complex64::new(0.0, grid.freq_coord(idx[axis]));
        }
    }
    out
}

fn spectral_grad_sup(f: &SampledFunction) -> Result<f64> {
    let grid = f.grid();
    let factor = l1_oversampling(grid.dim());
    let spectrum = f.forward_ft()?;
    let mut sq: Option<Vec<f64>> = None;
    for axis in 0..grid.dim() {
        let d = derivative_spectrum(&spectrum, axis).upsampled_inverse(factor)?;
        let acc = sq.get_or_insert_with(|| vec![0.0; d.values().len()]);
        for (s, v) in acc.iter_mut().zip(d.values()) {
            *s += v.norm_sqr();
        }
    }
    Ok(sq
        .unwrap_or_default()
        .into_iter()
        .fold(0.0, f64::max)
        .sqrt())
}

/// Largest `|k|_inf` (lattice index) carrying a coefficient above `BAND_TOLERANCE`
/// relative to the peak.
fn index_extent(spectrum: &SampledFunction) -> i64 {
    let grid = spectrum.grid();
    let peak = spectrum.max_abs();
    if peak == 0.0 {
        return 0;
    }
    spectrum
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > BAND_TOLERANCE * peak)
        .map(|(k, _)| {
            let idx = grid.freq_multi_index(k);
            idx[..grid.dim()].iter().map(|v| v.abs()).max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

fn check_product_band(a_hat: &SampledFunction, f_hat: &SampledFunction) -> Result<()> {
    let grid = a_hat.grid();
    let reach = (index_extent(a_hat) + index_extent(f_hat)) as f64 * grid.freq_step();
    if reach > grid.band_limit() + 1e-12 {
        return Err(Error::BandViolation(format!(
            "product a f reaches |xi| = {reach}, beyond the band {}",
            grid.band_limit()
        )));
    }
    Ok(())
}

/// `[sigma(X,D), a] f = sigma(X,D)(a f) - a sigma(X,D) f`.
pub fn commutator_apply(
    sigma: &SampledSymbol,
    a: &LipschitzFunction,
    f: &SampledFunction,
) -> Result<SampledFunction> {
    check_pair(sigma, f)?;
    sigma.grid().ensure_same(a.grid())?;
    let af = a.to_function();
    check_product_band(&af.forward_ft()?, &f.forward_ft()?)?;
    let product = f.zip_with(&af, |u, v| u * v)?;
    let left = quantize_apply(sigma, &product)?;
    let tf = quantize_apply(sigma, f)?;
    let right = tf.zip_with(&af, |u, v| u * v)?;
    left.zip_with(&right, |u, v| u - v)
}

/// The commutator through the difference form
/// `(2 pi)^{-2n} ∫∫ e^{i x.(xi + eta)} (sigma(x, xi + eta) - sigma(x, xi)) a_hat(eta) f_hat(xi)`,
/// with `xi + eta` realized as a lattice index shift and zero fill outside the lattice.
pub fn commutator_twisted(
    sigma: &SampledSymbol,
    a: &LipschitzFunction,
    f: &SampledFunction,
) -> Result<SampledFunction> {
    check_pair(sigma, f)?;
    sigma.grid().ensure_same(a.grid())?;
    let grid = f.grid();
    let a_hat = a.to_function().forward_ft()?;
    let f_hat = f.forward_ft()?;
    check_product_band(&a_hat, &f_hat)?;

    let n = grid.points_per_axis() as i64;
    let dim = grid.dim();
    let m_total = grid.len();
    let peak = a_hat.max_abs();
    let shifts: Vec<(usize, [i64; 2], Complex64)> = a_hat
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| peak > 0.0 && v.norm() >= 1e-15 * peak)
        .map(|(m, v)| (m, grid.freq_multi_index(m), *v))
        .collect();
    // Each lattice sum carries (2 pi / L)^n and the prefactor is (2 pi)^{-2n}.
    let scale = grid.period().powi(2 * dim as i32).recip();
    let phases = PhaseTable::new(grid);
    let fv = f_hat.values();

    let values: Vec<Complex64> = (0..m_total)
        .into_par_iter()
        .map_init(
            || vec![Complex64::default(); m_total],
            |row, j| {
                phases.fill_row(grid.unflatten(j), row);
                let s = sigma.row(j);
                let mut total = Complex64::default();
                for &(m_flat, shift, am) in &shifts {
                    let mut inner = Complex64::default();
                    for (k, fk) in fv.iter().enumerate() {
                        if *fk == Complex64::default() {
                            continue;
                        }
                        let idx = grid.unflatten(k);
                        let mut shifted = [0usize; 2];
                        let mut inside = true;
                        for a in 0..dim {
                            let t = idx[a] as i64 + shift[a];
                            if t < 0 || t >= n {
                                inside = false;
                                break;
                            }
                            shifted[a] = t as usize;
                        }
                        let moved = if inside { s[grid.flatten(shifted)] } else { Complex64::default() };
                        inner += row[k] * (moved - s[k]) * fk;
                    }
                    total += am * row[m_flat] * inner;
                }
                total * scale
            },
        )
        .collect();
    SampledFunction::new(grid.clone(), Domain::Space, values)
}

fn axis_table(grid: &GridSpec, f: impl Fn(f64) -> f64, freq: bool) -> Vec<f64> {
    (0..grid.points_per_axis())
        .map(|i| {
            f(if freq {
                grid.freq_coord(i)
            } else {
                grid.space_coord(i)
            })
        })
        .collect()
}

/// Product over the `2n` axes of a symbol array of per-axis factors.
fn tensor_multiply(
    values: &mut [Complex64],
    grid: &GridSpec,
    first: &[f64],
    second: &[f64],
) {
    let m = grid.len();
    let dim = grid.dim();
    let first_full: Vec<f64> = (0..m)
        .map(|j| {
            let idx = grid.unflatten(j);
            (0..dim).map(|a| first[idx[a]]).product()
        })
        .collect();
    let second_full: Vec<f64> = (0..m)
        .map(|k| {
            let idx = grid.unflatten(k);
            (0..dim).map(|a| second[idx[a]]).product()
        })
        .collect();
    values
        .par_chunks_mut(m)
        .zip(first_full.par_iter())
        .for_each(|(row, fj)| {
            for (v, sk) in row.iter_mut().zip(&second_full) {
                *v *= fj * sk;
            }
        });
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside (0, 1)")));
    }
    Ok(())
}

/// Spectrum `psi_hat(eps y) psi_hat(eps eta)` of the mollifier `Psi_eps` in the
/// `(y, eta)` domain.
fn mollifier_spectrum(grid: &GridSpec, epsilon: f64) -> (Vec<f64>, Vec<f64>) {
    let dual = grid.dual();
    let y = axis_table(grid, |v| window::mollifier_transform(epsilon * v), true);
    let eta = axis_table(&dual, |v| window::mollifier_transform(epsilon * v), true);
    (y, eta)
}

/// `sigma_eps = Phi_eps (Psi_eps * sigma)` with `Phi_eps(x, xi) = phi(eps x) phi(eps xi)`.
pub fn mollify_symbol(sigma: &SampledSymbol, epsilon: f64) -> Result<SampledSymbol> {
    check_epsilon(epsilon)?;
    sigma.expect(SymbolDomain::XXi)?;
    let grid = sigma.grid();
    let dim = grid.dim();
    let (y, eta) = mollifier_spectrum(grid, epsilon);
    let mut spectrum = sigma.fourier_both()?;
    tensor_multiply(spectrum.values_mut(), grid, &y, &eta);
    let mut out = spectrum.inverse_fourier_both()?;
    let px = axis_table(grid, |v| window::band_limited_cutoff(epsilon * v, dim), false);
    let pxi = axis_table(grid, |v| window::band_limited_cutoff(epsilon * v, dim), true);
    tensor_multiply(out.values_mut(), grid, &px, &pxi);
    Ok(out)
}

/// Lattice quadrature of the discrete mollifier kernel `Psi_eps` on the `(x, xi)` grid.
pub fn mollifier_mass(grid: &GridSpec, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let (y, eta) = mollifier_spectrum(grid, epsilon);
    let m = grid.len();
    let mut kernel = SampledSymbol::new(
        grid.clone(),
        SymbolDomain::YEta,
        vec![Complex64::new(1.0, 0.0); m * m],
    )?;
    tensor_multiply(kernel.values_mut(), grid, &y, &eta);
    let kernel = kernel.inverse_fourier_both()?;
    let weight = grid.space_weight() * grid.freq_weight();
    Ok(kernel.values().iter().map(|v| v.re).sum::<f64>() * weight)
}

/// Constants of the regularizing cut-off `phi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffConstants {
    /// `sup (1 + |x|) |∇phi(x)|`
    pub c1: f64,
    /// `∫ (1 + |y|) |phi(y)| dy`
    pub c2: f64,
    pub grad_sup: f64,
    pub l1: f64,
    pub sup: f64,
    /// `sqrt(n) (c1 c2 + ‖∇phi‖_inf + ‖phi‖_1 ‖phi‖_inf)`, the bound on
    /// `‖∇a_eps‖_inf / ‖∇a‖_inf` for `0 < eps < eps(a)`.
    pub bound: f64,
}

pub fn cutoff_constants(dim: usize) -> CutoffConstants {
    let cut = CompactCutoff::new(dim);
    let rho = cut.support_radius();
    let samples = if dim == 1 { 20_001 } else { 801 };
    let h = 2.0 * rho / (samples - 1) as f64;
    let nodes: Vec<f64> = (0..samples).map(|i| -rho + i as f64 * h).collect();
    let vals: Vec<f64> = nodes.iter().map(|&t| cut.value(t)).collect();
    let ders: Vec<f64> = nodes.iter().map(|&t| cut.derivative(t)).collect();
    let mut c1: f64 = 0.0;
    let mut c2 = 0.0;
    let mut grad_sup: f64 = 0.0;
    let mut l1 = 0.0;
    let mut sup: f64 = 0.0;
    let cell = h.powi(dim as i32);
    let mut visit = |x: [f64; 2], phi: f64, grad: f64| {
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        c1 = c1.max((1.0 + r) * grad);
        c2 += (1.0 + r) * phi.abs() * cell;
        grad_sup = grad_sup.max(grad);
        l1 += phi.abs() * cell;
        sup = sup.max(phi.abs());
    };
    if dim == 1 {
        for i in 0..samples {
            visit([nodes[i], 0.0], vals[i], ders[i].abs());
        }
    } else {
        for i in 0..samples {
            for j in 0..samples {
                let g0 = ders[i] * vals[j];
                let g1 = vals[i] * ders[j];
                visit([nodes[i], nodes[j]], vals[i] * vals[j], (g0 * g0 + g1 * g1).sqrt());
            }
        }
    }
    let bound = (dim as f64).sqrt() * (c1 * c2 + grad_sup + l1 * sup);
    CutoffConstants {
        c1,
        c2,
        grad_sup,
        l1,
        sup,
        bound,
    }
}

/// `a_eps(x) = phi(eps x) (phi_eps * a)(x)`; the gradient bound is evaluated by the
/// product rule on an oversampled lattice.
pub fn regularize_lipschitz(a: &LipschitzFunction, epsilon: f64) -> Result<LipschitzFunction> {
    let limit = a.epsilon_limit();
    if !(epsilon > 0.0 && epsilon < limit) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {epsilon} outside (0, {limit})"
        )));
    }
    let grid = a.grid();
    let dim = grid.dim();
    let factor = l1_oversampling(dim);
    let cut = CompactCutoff::new(dim);
    let a_hat = a.to_function().forward_ft()?;
    let mut conv = a_hat.clone();
    for (k, v) in conv.values_mut().iter_mut().enumerate() {
        let xi = grid.freq_point(k);
        let m: f64 = (0..dim).map(|i| cut.transform(epsilon * xi[i])).product();
        *v *= m;
    }
    let u = conv.upsampled_inverse(factor)?;
    let du: Vec<SampledFunction> = (0..dim)
        .map(|axis| derivative_spectrum(&conv, axis).upsampled_inverse(factor))
        .collect::<Result<_>>()?;
    let fine = u.grid().clone();
    let mut grad_sq_max: f64 = 0.0;
    let mut samples = vec![0.0; grid.len()];
    for (jf, uv) in u.values().iter().enumerate() {
        let x = fine.space_point(jf);
        let c: [f64; 2] = [cut.value(epsilon * x[0]), cut.value(epsilon * x[1])];
        let dc: [f64; 2] = [
            epsilon * cut.derivative(epsilon * x[0]),
            epsilon * cut.derivative(epsilon * x[1]),
        ];
        let cx: f64 = c[..dim].iter().product();
        let mut g2 = 0.0;
        for axis in 0..dim {
            let mut dcx = dc[axis];
            for b in 0..dim {
                if b != axis {
                    dcx *= c[b];
                }
            }
            let g = dcx * uv.re + cx * du[axis].values()[jf].re;
            g2 += g * g;
        }
        grad_sq_max = grad_sq_max.max(g2);
        let idx = fine.unflatten(jf);
        if (0..dim).all(|i| idx[i] % factor == 0) {
            let mut coarse = [0usize; 2];
            for i in 0..dim {
                coarse[i] = idx[i] / factor;
            }
            samples[grid.flatten(coarse)] = cx * uv.re;
        }
    }
    Ok(LipschitzFunction {
        grid: grid.clone(),
        samples,
        grad_sup: grad_sq_max.sqrt(),
    })
}

/// A pair `(phi, chi)` of functions of `xi` with `supp phi` in `{|xi| < 1}`,
/// `supp chi_hat` in `{|eta| < 1}` and `∫ phi chi = 1`.
#[derive(Clone, Debug)]
pub struct SmoothingPair {
    grid: GridSpec,
    phi: Vec<Complex64>,
    chi: Vec<Complex64>,
}

impl SmoothingPair {
    pub fn new(grid: &GridSpec) -> Result<Self> {
        let dual = grid.dual();
        for (what, step) in [("xi", grid.freq_step()), ("eta", dual.freq_step())] {
            if 2.0 / step < 8.0 {
                return Err(Error::InvalidGrid(format!(
                    "{what} spacing {step} leaves fewer than 8 lattice points across the unit ball"
                )));
            }
        }
        let dim = grid.dim();
        let phi: Vec<Complex64> = (0..grid.len())
            .map(|k| {
                let xi = grid.freq_point(k);
                Complex64::new(window::bump(crate::grid::euclid(&xi, dim)), 0.0)
            })
            .collect();
        let chi_hat = SampledFunction::from_freq_fn(&dual, |eta| {
            Complex64::new(window::bump(crate::grid::euclid(eta, dim)), 0.0)
        });
        let chi = chi_hat.inverse_ft()?.into_values();
        let integral: Complex64 =
            phi.iter().zip(&chi).map(|(p, c)| p * c).sum::<Complex64>() * grid.freq_weight();
        if !(integral.re > 0.0) || integral.im.abs() > 1e-9 * integral.re {
            return Err(Error::Construction(format!(
                "pair integral {integral} is not positive"
            )));
        }
        let s = integral.re.sqrt().recip();
        Ok(Self {
            grid: grid.clone(),
            phi: phi.into_iter().map(|v| v * s).collect(),
            chi: chi.into_iter().map(|v| v * s).collect(),
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Samples of `phi` on the `xi` lattice.
    pub fn phi(&self) -> &[Complex64] {
        &self.phi
    }

    /// Samples of `chi` on the `xi` lattice.
    pub fn chi(&self) -> &[Complex64] {
        &self.chi
    }

    /// Lattice quadrature of `phi chi`.
    pub fn integral(&self) -> Complex64 {
        self.phi
            .iter()
            .zip(&self.chi)
            .map(|(p, c)| p * c)
            .sum::<Complex64>()
            * self.grid.freq_weight()
    }

    /// Transform of `chi` in the `eta` variable, on the dual lattice.
    pub fn chi_hat(&self) -> Result<SampledFunction> {
        SampledFunction::new(self.grid.dual(), Domain::Space, self.chi.clone())?.forward_ft()
    }
}

/// `‖f‖_{L^2}` on the lattice.
pub fn l2_norm(f: &SampledFunction) -> f64 {
    f.lp_norm(Exponent::Two)
}

/// `sup_x ‖sigma(x, .)‖_{L^2}` over the `xi` lattice.
pub fn symbol_xi_l2_sup(sigma: &SampledSymbol) -> Result<f64> {
    sigma.expect(SymbolDomain::XXi)?;
    let grid = sigma.grid();
    let w = grid.freq_weight();
    Ok((0..grid.len())
        .map(|j| lp_of(sigma.row(j), w, Exponent::Two))
        .fold(0.0, f64::max))
}
