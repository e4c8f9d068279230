//! Periodic lattice model of `R^n` (n = 1, 2) with quadrature Fourier transforms.
//!
//! Spatial nodes are `x_j = -L/2 + jL/N`, frequency nodes `xi_k = 2 pi k / L` for
//! `k = -N/2, ..., N/2 - 1`. The transforms are literal rectangle-rule quadratures
//! of `F f(xi) = int e^{-i xi x} f(x) dx` and
//! `F^{-1} g(x) = (2 pi)^{-n} int e^{i x xi} g(xi) d xi`.
//!
//! Frequency arrays are stored in centered order: storage index `i` holds `k = i - N/2`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft;

/// Truncation band as a fraction of the Nyquist bound.
pub const BAND_FRACTION: f64 = 0.8;

/// Coordinates of one lattice node; entries past `dim` are zero.
pub type Point = [f64; 2];

pub fn euclid(p: &Point, dim: usize) -> f64 {
    p[..dim].iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn sup_coord(p: &Point, dim: usize) -> f64 {
    p[..dim].iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `<xi> = (1 + |xi|^2)^{1/2}`.
pub fn japanese(p: &Point, dim: usize) -> f64 {
    (1.0 + p[..dim].iter().map(|v| v * v).sum::<f64>()).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    points_per_axis: usize,
    period: f64,
}

impl GridSpec {
    pub fn new(dim: usize, points_per_axis: usize, period: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{1, 2}}")));
        }
        if points_per_axis % 2 == 1 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even, got {points_per_axis}"
            )));
        }
        if points_per_axis < 16 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be at least 16, got {points_per_axis}"
            )));
        }
        if !points_per_axis.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two, got {points_per_axis}"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidGrid(format!("period must be positive, got {period}")));
        }
        Ok(Self {
            dim,
            points_per_axis,
            period,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Total number of lattice nodes, `N^n`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.points_per_axis; self.dim]
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.points_per_axis as f64
    }

    pub fn freq_step(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Nyquist bound `pi N / L`.
    pub fn nyquist(&self) -> f64 {
        PI * self.points_per_axis as f64 / self.period
    }

    /// Half-width of the truncation band `[-0.8 Xi, 0.8 Xi]^n`.
    pub fn band_limit(&self) -> f64 {
        BAND_FRACTION * self.nyquist()
    }

    /// Quadrature weight of one spatial node, `(L/N)^n`.
    pub fn space_weight(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Quadrature weight of one frequency node, `(2 pi / L)^n`.
    pub fn freq_weight(&self) -> f64 {
        self.freq_step().powi(self.dim as i32)
    }

    /// The grid on which functions of `xi` live: its spatial nodes are this grid's
    /// frequency nodes, and its frequency nodes `eta_m = m L / N` mirror this
    /// grid's spatial spacing.
    pub fn dual(&self) -> GridSpec {
        GridSpec {
            dim: self.dim,
            points_per_axis: self.points_per_axis,
            period: 2.0 * PI * self.points_per_axis as f64 / self.period,
        }
    }

    /// Same period, `factor` times as many points per axis.
    pub fn refined(&self, factor: usize) -> Result<GridSpec> {
        GridSpec::new(self.dim, self.points_per_axis * factor, self.period)
    }

    pub fn space_coord(&self, j: usize) -> f64 {
        -0.5 * self.period + j as f64 * self.spacing()
    }

    pub fn freq_index(&self, i: usize) -> i64 {
        i as i64 - (self.points_per_axis / 2) as i64
    }

    pub fn freq_coord(&self, i: usize) -> f64 {
        self.freq_index(i) as f64 * self.freq_step()
    }

    /// Storage index of lattice frequency `k`, if it lies on the lattice.
    pub fn freq_storage(&self, k: i64) -> Option<usize> {
        let i = k + (self.points_per_axis / 2) as i64;
        (0..self.points_per_axis as i64).contains(&i).then_some(i as usize)
    }

    /// Per-axis indices of a flat row-major index.
    pub fn unflatten(&self, flat: usize) -> [usize; 2] {
        let n = self.points_per_axis;
        if self.dim == 1 {
            [flat, 0]
        } else {
            [flat / n, flat % n]
        }
    }

    pub fn flatten(&self, idx: [usize; 2]) -> usize {
        if self.dim == 1 {
            idx[0]
        } else {
            idx[0] * self.points_per_axis + idx[1]
        }
    }

    pub fn space_point(&self, flat: usize) -> Point {
        let idx = self.unflatten(flat);
        let mut p = [0.0; 2];
        for (a, slot) in p.iter_mut().enumerate().take(self.dim) {
            *slot = self.space_coord(idx[a]);
        }
        p
    }

    pub fn freq_point(&self, flat: usize) -> Point {
        let idx = self.unflatten(flat);
        let mut p = [0.0; 2];
        for (a, slot) in p.iter_mut().enumerate().take(self.dim) {
            *slot = self.freq_coord(idx[a]);
        }
        p
    }

    pub fn freq_multi_index(&self, flat: usize) -> [i64; 2] {
        let idx = self.unflatten(flat);
        let mut k = [0i64; 2];
        for a in 0..self.dim {
            k[a] = self.freq_index(idx[a]);
        }
        k
    }

    pub fn space_points(&self) -> Vec<Point> {
        (0..self.len()).map(|f| self.space_point(f)).collect()
    }

    pub fn freq_points(&self) -> Vec<Point> {
        (0..self.len()).map(|f| self.freq_point(f)).collect()
    }

    /// Whether `xi` lies in the truncation band.
    pub fn in_band(&self, xi: &Point) -> bool {
        sup_coord(xi, self.dim) <= self.band_limit() + 1e-12
    }

    pub fn same_as(&self, other: &GridSpec) -> bool {
        self.dim == other.dim
            && self.points_per_axis == other.points_per_axis
            && (self.period - other.period).abs() <= 1e-12 * self.period
    }

    pub(crate) fn ensure_same(&self, other: &GridSpec) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self} vs {other}")))
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "grid(n={}, N={}, L={})",
            self.dim, self.points_per_axis, self.period
        )
    }
}

/// Lebesgue exponent restricted to the supported set `{1, 2, inf}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Exponent {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "inf")]
    Infinity,
}

impl Exponent {
    pub fn value(self) -> f64 {
        match self {
            Exponent::One => 1.0,
            Exponent::Two => 2.0,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn from_f64(p: f64) -> Result<Self> {
        if p == 1.0 {
            Ok(Exponent::One)
        } else if p == 2.0 {
            Ok(Exponent::Two)
        } else if p.is_infinite() && p > 0.0 {
            Ok(Exponent::Infinity)
        } else {
            Err(Error::UnsupportedExponent(p.to_string()))
        }
    }

    /// ℓ^p aggregate of nonnegative terms.
    pub fn aggregate(self, terms: impl IntoIterator<Item = f64>) -> f64 {
        match self {
            Exponent::One => terms.into_iter().sum(),
            Exponent::Two => terms.into_iter().map(|t| t * t).sum::<f64>().sqrt(),
            Exponent::Infinity => terms.into_iter().fold(0.0, f64::max),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" => Ok(Exponent::One),
            "2" => Ok(Exponent::Two),
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => Err(Error::UnsupportedExponent(other.to_string())),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exponent::One => "1",
            Exponent::Two => "2",
            Exponent::Infinity => "inf",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Space,
    Frequency,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Space => "space",
            Domain::Frequency => "frequency",
        }
    }
}

/// Samples of a function of `x` (or of its transform) on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    grid: GridSpec,
    domain: Domain,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: GridSpec, domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Format(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            grid,
            domain,
            values,
        })
    }

    pub fn zeros(grid: &GridSpec, domain: Domain) -> Self {
        Self {
            grid: grid.clone(),
            domain,
            values: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn from_space_fn(grid: &GridSpec, f: impl Fn(&Point) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|j| f(&grid.space_point(j))).collect();
        Self {
            grid: grid.clone(),
            domain: Domain::Space,
            values,
        }
    }

    pub fn from_freq_fn(grid: &GridSpec, f: impl Fn(&Point) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|k| f(&grid.freq_point(k))).collect();
        Self {
            grid: grid.clone(),
            domain: Domain::Frequency,
            values,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    fn expect(&self, domain: Domain) -> Result<()> {
        if self.domain == domain {
            Ok(())
        } else {
            Err(Error::WrongDomain {
                expected: domain.name(),
                found: self.domain.name(),
            })
        }
    }

    pub fn expect_space(&self) -> Result<()> {
        self.expect(Domain::Space)
    }

    pub fn expect_frequency(&self) -> Result<()> {
        self.expect(Domain::Frequency)
    }

    /// `f_hat(xi_k) = (L/N)^n sum_j e^{-i xi_k . x_j} f(x_j)`.
    pub fn forward_ft(&self) -> Result<SampledFunction> {
        self.expect(Domain::Space)?;
        let mut values = self.values.clone();
        let shape = self.grid.shape();
        for axis in 0..self.grid.dim() {
            fft::forward_axis(&mut values, &shape, axis, self.grid.period());
        }
        Ok(Self {
            grid: self.grid.clone(),
            domain: Domain::Frequency,
            values,
        })
    }

    /// `f(x_j) = L^{-n} sum_k e^{i xi_k . x_j} F(xi_k)`.
    pub fn inverse_ft(&self) -> Result<SampledFunction> {
        self.expect(Domain::Frequency)?;
        let mut values = self.values.clone();
        let shape = self.grid.shape();
        for axis in 0..self.grid.dim() {
            fft::inverse_axis(&mut values, &shape, axis, self.grid.period());
        }
        Ok(Self {
            grid: self.grid.clone(),
            domain: Domain::Space,
            values,
        })
    }

    fn node_weight(&self) -> f64 {
        match self.domain {
            Domain::Space => self.grid.space_weight(),
            Domain::Frequency => self.grid.freq_weight(),
        }
    }

    /// Rectangle-rule `L^p` norm on the lattice the samples live on.
    pub fn lp_norm(&self, p: Exponent) -> f64 {
        lp_of(&self.values, self.node_weight(), p)
    }

    /// Evaluates the trigonometric interpolant of a space-domain function on a grid
    /// with `factor` times as many points per axis.
    pub fn upsampled(&self, factor: usize) -> Result<SampledFunction> {
        self.expect(Domain::Space)?;
        if factor == 1 {
            return Ok(self.clone());
        }
        let spectrum = self.forward_ft()?;
        spectrum.upsampled_inverse(factor)
    }

    /// Inverse transform of a frequency-domain array evaluated on the refined grid.
    pub fn upsampled_inverse(&self, factor: usize) -> Result<SampledFunction> {
        self.expect(Domain::Frequency)?;
        let fine = self.grid.refined(factor)?;
        let padded = fft::zero_pad_centered(
            &self.values,
            self.grid.dim(),
            self.grid.points_per_axis(),
            factor,
        );
        SampledFunction::new(fine, Domain::Frequency, padded)?.inverse_ft()
    }

    /// `L^p` norm of the trigonometric interpolant, evaluated on a `factor`-times
    /// refined lattice for `p` in `{1, inf}`; `p = 2` is exact on the base lattice.
    pub fn lp_norm_fine(&self, p: Exponent, factor: usize) -> Result<f64> {
        match (self.domain, p) {
            (Domain::Space, Exponent::Two) => Ok(self.lp_norm(p)),
            (Domain::Space, _) => Ok(self.upsampled(factor)?.lp_norm(p)),
            (Domain::Frequency, _) => Err(Error::WrongDomain {
                expected: "space",
                found: "frequency",
            }),
        }
    }

    pub fn scaled(&self, c: Complex64) -> SampledFunction {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// Pointwise combination of two functions on the same grid and domain.
    pub fn zip_with(
        &self,
        other: &SampledFunction,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<SampledFunction> {
        self.grid.ensure_same(&other.grid)?;
        if self.domain != other.domain {
            return Err(Error::WrongDomain {
                expected: self.domain.name(),
                found: other.domain.name(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| op(*a, *b))
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            domain: self.domain,
            values,
        })
    }

    pub fn max_abs_diff(&self, other: &SampledFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Largest `|xi|_inf` carrying a coefficient above `rel_tol * max |f_hat|`.
    pub fn effective_band(&self, rel_tol: f64) -> Result<f64> {
        let spectrum = match self.domain {
            Domain::Space => self.forward_ft()?,
            Domain::Frequency => self.clone(),
        };
        let peak = spectrum.max_abs();
        if peak == 0.0 {
            return Ok(0.0);
        }
        let cut = rel_tol * peak;
        let dim = self.grid.dim();
        Ok(spectrum
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > cut)
            .map(|(k, _)| sup_coord(&self.grid.freq_point(k), dim))
            .fold(0.0, f64::max))
    }
}

pub(crate) fn lp_of(values: &[Complex64], weight: f64, p: Exponent) -> f64 {
    match p {
        Exponent::One => weight * values.iter().map(|v| v.norm()).sum::<f64>(),
        Exponent::Two => (weight * values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt(),
        Exponent::Infinity => values.iter().fold(0.0, |m, v| m.max(v.norm())),
    }
}

/// Which partial transforms have been applied to a sampled symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymbolDomain {
    /// `sigma(x, xi)`
    #[serde(rename = "x-xi")]
    XXi,
    /// `F_1 sigma(y, xi)`
    #[serde(rename = "y-xi")]
    YXi,
    /// `F_2 sigma(x, eta)`
    #[serde(rename = "x-eta")]
    XEta,
    /// `F_{1,2} sigma(y, eta)`
    #[serde(rename = "y-eta")]
    YEta,
}

impl SymbolDomain {
    pub fn name(self) -> &'static str {
        match self {
            SymbolDomain::XXi => "x-xi",
            SymbolDomain::YXi => "y-xi",
            SymbolDomain::XEta => "x-eta",
            SymbolDomain::YEta => "y-eta",
        }
    }

    fn first_is_spatial(self) -> bool {
        matches!(self, SymbolDomain::XXi | SymbolDomain::XEta)
    }

    fn second_is_xi(self) -> bool {
        matches!(self, SymbolDomain::XXi | SymbolDomain::YXi)
    }

    fn with(first_spatial: bool, second_xi: bool) -> Self {
        match (first_spatial, second_xi) {
            (true, true) => SymbolDomain::XXi,
            (false, true) => SymbolDomain::YXi,
            (true, false) => SymbolDomain::XEta,
            (false, false) => SymbolDomain::YEta,
        }
    }
}

/// Samples of a symbol of `(x, xi)`, stored row-major with the spatial multi-index
/// outermost: entry `j * N^n + k` holds `sigma(x_j, xi_k)`.
///
/// The `xi` lattice is the spatial lattice of [`GridSpec::dual`], so the second
/// partial transform uses the dual grid's conventions and lands on `eta_m = m L / N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSymbol {
    grid: GridSpec,
    domain: SymbolDomain,
    values: Vec<Complex64>,
}

impl SampledSymbol {
    pub fn new(grid: GridSpec, domain: SymbolDomain, values: Vec<Complex64>) -> Result<Self> {
        let expected = grid.len() * grid.len();
        if values.len() != expected {
            return Err(Error::Format(format!(
                "expected {expected} symbol samples, got {}",
                values.len()
            )));
        }
        Ok(Self {
            grid,
            domain,
            values,
        })
    }

    pub fn from_fn(grid: &GridSpec, f: impl Fn(&Point, &Point) -> Complex64) -> Self {
        let m = grid.len();
        let xs = grid.space_points();
        let xis = grid.freq_points();
        let mut values = Vec::with_capacity(m * m);
        for x in &xs {
            for xi in &xis {
                values.push(f(x, xi));
            }
        }
        Self {
            grid: grid.clone(),
            domain: SymbolDomain::XXi,
            values,
        }
    }

    pub fn constant(grid: &GridSpec, c: Complex64) -> Self {
        Self::from_fn(grid, |_, _| c)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn domain(&self) -> SymbolDomain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Samples `sigma(x_j, .)` for the flat spatial index `j`.
    pub fn row(&self, j: usize) -> &[Complex64] {
        let m = self.grid.len();
        &self.values[j * m..(j + 1) * m]
    }

    pub(crate) fn shape(&self) -> Vec<usize> {
        vec![self.grid.points_per_axis(); 2 * self.grid.dim()]
    }

    pub fn expect(&self, domain: SymbolDomain) -> Result<()> {
        if self.domain == domain {
            Ok(())
        } else {
            Err(Error::WrongDomain {
                expected: domain.name(),
                found: self.domain.name(),
            })
        }
    }

    fn transformed(&self, first: Option<bool>, second: Option<bool>) -> Result<SampledSymbol> {
        let shape = self.shape();
        let dim = self.grid.dim();
        let mut values = self.values.clone();
        let mut first_spatial = self.domain.first_is_spatial();
        let mut second_xi = self.domain.second_is_xi();
        if let Some(forward) = first {
            if forward != first_spatial {
                return Err(Error::WrongDomain {
                    expected: if forward { "x-*" } else { "y-*" },
                    found: self.domain.name(),
                });
            }
            let period = self.grid.period();
            for axis in 0..dim {
                if forward {
                    fft::forward_axis(&mut values, &shape, axis, period);
                } else {
                    fft::inverse_axis(&mut values, &shape, axis, period);
                }
            }
            first_spatial = !forward;
        }
        if let Some(forward) = second {
            if forward != second_xi {
                return Err(Error::WrongDomain {
                    expected: if forward { "*-xi" } else { "*-eta" },
                    found: self.domain.name(),
                });
            }
            let period = self.grid.dual().period();
            for axis in dim..2 * dim {
                if forward {
                    fft::forward_axis(&mut values, &shape, axis, period);
                } else {
                    fft::inverse_axis(&mut values, &shape, axis, period);
                }
            }
            second_xi = !forward;
        }
        Ok(Self {
            grid: self.grid.clone(),
            domain: SymbolDomain::with(first_spatial, second_xi),
            values,
        })
    }

    /// `F_1`: transform in the first variable.
    pub fn fourier_x(&self) -> Result<SampledSymbol> {
        self.transformed(Some(true), None)
    }

    pub fn inverse_fourier_x(&self) -> Result<SampledSymbol> {
        self.transformed(Some(false), None)
    }

    /// `F_2`: transform in the second variable.
    pub fn fourier_xi(&self) -> Result<SampledSymbol> {
        self.transformed(None, Some(true))
    }

    pub fn inverse_fourier_xi(&self) -> Result<SampledSymbol> {
        self.transformed(None, Some(false))
    }

    /// `F_{1,2}`.
    pub fn fourier_both(&self) -> Result<SampledSymbol> {
        self.transformed(Some(true), Some(true))
    }

    pub fn inverse_fourier_both(&self) -> Result<SampledSymbol> {
        self.transformed(Some(false), Some(false))
    }

    pub fn scaled(&self, c: Complex64) -> SampledSymbol {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn zip_with(
        &self,
        other: &SampledSymbol,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<SampledSymbol> {
        self.grid.ensure_same(&other.grid)?;
        other.expect(self.domain)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| op(*a, *b))
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            domain: self.domain,
            values,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_abs_diff(&self, other: &SampledSymbol) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}

/// One component of a compact frequency set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum BandShape {
    Box { lo: Point, hi: Point },
    Ball { center: Point, radius: f64 },
}

impl BandShape {
    fn measure(&self, dim: usize) -> f64 {
        match self {
            BandShape::Box { lo, hi } => (0..dim).map(|a| hi[a] - lo[a]).product(),
            BandShape::Ball { radius, .. } => unit_ball_volume(dim) * radius.powi(dim as i32),
        }
    }

    fn contains(&self, p: &Point, dim: usize) -> bool {
        match self {
            BandShape::Box { lo, hi } => (0..dim).all(|a| lo[a] <= p[a] && p[a] <= hi[a]),
            BandShape::Ball { center, radius } => {
                let d: f64 = (0..dim).map(|a| (p[a] - center[a]).powi(2)).sum();
                d.sqrt() <= *radius
            }
        }
    }

    fn bounding_box(&self, dim: usize) -> (Point, Point) {
        match self {
            BandShape::Box { lo, hi } => (*lo, *hi),
            BandShape::Ball { center, radius } => {
                let mut lo = [0.0; 2];
                let mut hi = [0.0; 2];
                for a in 0..dim {
                    lo[a] = center[a] - radius;
                    hi[a] = center[a] + radius;
                }
                (lo, hi)
            }
        }
    }
}

/// A compact frequency set `Omega`: a union of pairwise disjoint boxes and balls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandSupport {
    dim: usize,
    shapes: Vec<BandShape>,
}

impl BandSupport {
    pub fn new(dim: usize, shapes: Vec<BandShape>) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidParameter(format!("dimension {dim}")));
        }
        for s in &shapes {
            let (lo, hi) = s.bounding_box(dim);
            if (0..dim).any(|a| !(hi[a] > lo[a])) {
                return Err(Error::InvalidParameter(format!("degenerate shape {s:?}")));
            }
        }
        // Bounding boxes must not overlap so that the measure is additive.
        for (i, a) in shapes.iter().enumerate() {
            for b in &shapes[i + 1..] {
                let (alo, ahi) = a.bounding_box(dim);
                let (blo, bhi) = b.bounding_box(dim);
                if (0..dim).all(|d| alo[d] < bhi[d] && blo[d] < ahi[d]) {
                    return Err(Error::InvalidParameter(
                        "band components must be disjoint".into(),
                    ));
                }
            }
        }
        Ok(Self { dim, shapes })
    }

    /// Symmetric cube `[-h, h]^n`.
    pub fn cube(dim: usize, half_width: f64) -> Result<Self> {
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for a in 0..dim {
            lo[a] = -half_width;
            hi[a] = half_width;
        }
        Self::new(dim, vec![BandShape::Box { lo, hi }])
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        Self::new(
            dim,
            vec![BandShape::Ball {
                center: [0.0; 2],
                radius,
            }],
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shapes(&self) -> &[BandShape] {
        &self.shapes
    }

    /// Lebesgue measure `|Omega|` of the continuum set.
    pub fn measure(&self) -> f64 {
        self.shapes.iter().map(|s| s.measure(self.dim)).sum()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.shapes.iter().any(|s| s.contains(p, self.dim))
    }

    /// Largest `|p|_inf` over the set.
    pub fn extent(&self) -> f64 {
        self.shapes
            .iter()
            .map(|s| {
                let (lo, hi) = s.bounding_box(self.dim);
                (0..self.dim).fold(0.0f64, |m, a| m.max(lo[a].abs()).max(hi[a].abs()))
            })
            .fold(0.0, f64::max)
    }
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => PI,
        _ => unreachable!("dimension restricted to 1 or 2"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_fn(grid: &GridSpec, seed: u64) -> SampledFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        SampledFunction::new(grid.clone(), Domain::Space, values).unwrap()
    }

    /// Direct `O(N^2)` evaluation of the forward quadrature transform.
    fn direct_forward(f: &SampledFunction) -> Vec<Complex64> {
        let g = f.grid();
        let dim = g.dim();
        (0..g.len())
            .map(|k| {
                let xi = g.freq_point(k);
                let mut acc = Complex64::default();
                for j in 0..g.len() {
                    let x = g.space_point(j);
                    let phase: f64 = (0..dim).map(|a| xi[a] * x[a]).sum();
                    acc += Complex64::from_polar(1.0, -phase) * f.values()[j];
                }
                acc * g.space_weight()
            })
            .collect()
    }

    fn direct_inverse(grid: &GridSpec, spectrum: &[Complex64]) -> Vec<Complex64> {
        let dim = grid.dim();
        (0..grid.len())
            .map(|j| {
                let x = grid.space_point(j);
                let mut acc = Complex64::default();
                for k in 0..grid.len() {
                    let xi = grid.freq_point(k);
                    let phase: f64 = (0..dim).map(|a| xi[a] * x[a]).sum();
                    acc += Complex64::from_polar(1.0, phase) * spectrum[k];
                }
                acc / grid.period().powi(dim as i32)
            })
            .collect()
    }

    #[test]
    fn grid_examples() {
        let g = GridSpec::new(1, 16, 2.0 * PI).unwrap();
        assert_eq!(g.freq_index(0), -8);
        assert_eq!(g.freq_index(15), 7);
        assert_relative_eq!(g.nyquist(), 8.0, epsilon = 1e-14);
        assert_relative_eq!(g.freq_step(), 1.0, epsilon = 1e-14);

        let g2 = GridSpec::new(2, 32, 4.0 * PI).unwrap();
        assert_eq!(g2.len(), 1024);
        assert_relative_eq!(g2.freq_step(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(g2.nyquist(), 8.0, epsilon = 1e-14);
    }

    #[test]
    fn grid_rejects_bad_parameters() {
        assert!(GridSpec::new(1, 15, 2.0 * PI).is_err());
        assert!(GridSpec::new(1, 8, 2.0 * PI).is_err());
        assert!(GridSpec::new(1, 24, 2.0 * PI).is_err());
        assert!(GridSpec::new(1, 16, 0.0).is_err());
        assert!(GridSpec::new(1, 16, -1.0).is_err());
        assert!(GridSpec::new(3, 16, 1.0).is_err());
        assert!(GridSpec::new(0, 16, 1.0).is_err());
    }

    #[test]
    fn dual_grid_nodes_match_frequency_lattice() {
        let g = GridSpec::new(1, 32, 8.0 * PI).unwrap();
        let d = g.dual();
        for i in 0..32 {
            assert_relative_eq!(d.space_coord(i), g.freq_coord(i), epsilon = 1e-12);
            assert_relative_eq!(
                d.freq_coord(i),
                g.freq_index(i) as f64 * g.spacing(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn constant_transforms_to_delta() {
        let g = GridSpec::new(1, 16, 2.0 * PI).unwrap();
        let f = SampledFunction::from_space_fn(&g, |_| Complex64::new(1.0, 0.0));
        let fh = f.forward_ft().unwrap();
        for (k, v) in fh.values().iter().enumerate() {
            if g.freq_index(k) == 0 {
                assert_relative_eq!(v.re, g.period(), epsilon = 1e-12);
                assert!(v.im.abs() < 1e-12);
            } else {
                assert!(v.norm() < 1e-12);
            }
        }
        let back = fh.inverse_ft().unwrap();
        assert!(back.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn plane_wave_transforms_to_single_entry() {
        let g = GridSpec::new(2, 16, 2.0 * PI).unwrap();
        let m = [3.0, -2.0];
        let f = SampledFunction::from_space_fn(&g, |x| {
            Complex64::from_polar(1.0, m[0] * x[0] + m[1] * x[1])
        });
        let fh = f.forward_ft().unwrap();
        for (k, v) in fh.values().iter().enumerate() {
            let xi = g.freq_point(k);
            if (xi[0] - m[0]).abs() < 1e-9 && (xi[1] - m[1]).abs() < 1e-9 {
                assert_relative_eq!(v.re, g.period().powi(2), epsilon = 1e-10);
            } else {
                assert!(v.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn transforms_match_direct_summation() {
        let g = GridSpec::new(1, 32, 5.0).unwrap();
        let f = random_fn(&g, 3);
        let fast = f.forward_ft().unwrap();
        let slow = direct_forward(&f);
        for (a, b) in fast.values().iter().zip(&slow) {
            assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()));
        }
        let spectrum = random_fn(&g, 4).into_values();
        let ff = SampledFunction::new(g.clone(), Domain::Frequency, spectrum.clone()).unwrap();
        let fast = ff.inverse_ft().unwrap();
        let slow = direct_inverse(&g, &spectrum);
        for (a, b) in fast.values().iter().zip(&slow) {
            assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn transforms_match_direct_summation_2d() {
        let g = GridSpec::new(2, 16, 3.0).unwrap();
        let f = random_fn(&g, 9);
        let fast = f.forward_ft().unwrap();
        let slow = direct_forward(&f);
        for (a, b) in fast.values().iter().zip(&slow) {
            assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn wrong_domain_is_rejected() {
        let g = GridSpec::new(1, 16, 1.0).unwrap();
        let f = SampledFunction::zeros(&g, Domain::Frequency);
        assert!(matches!(f.forward_ft(), Err(Error::WrongDomain { .. })));
        let f = SampledFunction::zeros(&g, Domain::Space);
        assert!(matches!(f.inverse_ft(), Err(Error::WrongDomain { .. })));
    }

    #[test]
    fn lp_norm_of_constant() {
        let g = GridSpec::new(1, 16, 2.0 * PI).unwrap();
        let one = SampledFunction::from_space_fn(&g, |_| Complex64::new(1.0, 0.0));
        assert_relative_eq!(one.lp_norm(Exponent::Two), (2.0 * PI).sqrt(), epsilon = 1e-12);
        assert_relative_eq!(one.lp_norm(Exponent::One), 2.0 * PI, epsilon = 1e-12);
        assert_relative_eq!(one.lp_norm(Exponent::Infinity), 1.0);
        let c = Complex64::new(-3.0, 4.0);
        let cf = one.scaled(c);
        for p in [Exponent::One, Exponent::Two, Exponent::Infinity] {
            assert_relative_eq!(cf.lp_norm(p), 5.0 * one.lp_norm(p), epsilon = 1e-12);
        }
        assert_eq!(SampledFunction::zeros(&g, Domain::Space).lp_norm(Exponent::Two), 0.0);
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("2".parse::<Exponent>().unwrap(), Exponent::Two);
        assert!("3".parse::<Exponent>().is_err());
        assert!(Exponent::from_f64(1.5).is_err());
    }

    #[test]
    fn real_even_function_has_real_transform() {
        let g = GridSpec::new(1, 64, 10.0).unwrap();
        // Even about x = 0 on the lattice: x_{N/2 + m} = -x_{N/2 - m}.
        let f = SampledFunction::from_space_fn(&g, |x| Complex64::new((-x[0] * x[0]).exp() + x[0].cos(), 0.0));
        let fh = f.forward_ft().unwrap();
        for v in fh.values() {
            assert!(v.im.abs() < 1e-12 * (1.0 + fh.max_abs()));
        }
    }

    #[test]
    fn upsampling_preserves_trig_polynomials() {
        let g = GridSpec::new(1, 32, 2.0 * PI).unwrap();
        let f = SampledFunction::from_space_fn(&g, |x| Complex64::new((3.0 * x[0]).cos(), 0.0));
        let fine = f.upsampled(4).unwrap();
        assert_eq!(fine.grid().points_per_axis(), 128);
        for (j, v) in fine.values().iter().enumerate() {
            let x = fine.grid().space_coord(j);
            assert!((v.re - (3.0 * x).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn symbol_partial_transforms_round_trip() {
        let g = GridSpec::new(1, 16, 4.0).unwrap();
        let s = SampledSymbol::from_fn(&g, |x, xi| Complex64::new((x[0] * 0.7).sin(), xi[0].cos()));
        let t = s.fourier_both().unwrap();
        assert_eq!(t.domain(), SymbolDomain::YEta);
        let back = t.inverse_fourier_x().unwrap().inverse_fourier_xi().unwrap();
        assert_eq!(back.domain(), SymbolDomain::XXi);
        assert!(back.max_abs_diff(&s) < 1e-12);
        assert!(s.inverse_fourier_x().is_err());
        assert!(t.fourier_xi().is_err());
    }

    #[test]
    fn band_support_measure_and_membership() {
        let b = BandSupport::cube(1, 2.0).unwrap();
        assert_relative_eq!(b.measure(), 4.0);
        assert!(b.contains(&[1.5, 0.0]));
        assert!(!b.contains(&[2.5, 0.0]));
        let ball = BandSupport::ball(2, 1.0).unwrap();
        assert_relative_eq!(ball.measure(), PI);
        let overlapping = BandSupport::new(
            1,
            vec![
                BandShape::Box { lo: [-1.0, 0.0], hi: [1.0, 0.0] },
                BandShape::Ball { center: [0.5, 0.0], radius: 1.0 },
            ],
        );
        assert!(overlapping.is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn round_trip_and_plancherel(seed in any::<u64>(), dim in 1usize..=2, period in 0.5f64..40.0) {
                let g = GridSpec::new(dim, 16, period).unwrap();
                let f = random_fn(&g, seed);
                let fh = f.forward_ft().unwrap();
                let back = fh.inverse_ft().unwrap();
                let scale = f.max_abs();
                prop_assert!(back.max_abs_diff(&f) <= 1e-12 * scale.max(1.0));
                let lhs = fh.lp_norm(Exponent::Two).powi(2);
                let rhs = (2.0 * PI).powi(dim as i32) * f.lp_norm(Exponent::Two).powi(2);
                prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs);
            }

            #[test]
            fn transforms_are_linear(s1 in any::<u64>(), s2 in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
                let g = GridSpec::new(1, 32, 7.0).unwrap();
                let f = random_fn(&g, s1);
                let h = random_fn(&g, s2);
                let ca = Complex64::new(a, 0.5);
                let cb = Complex64::new(-0.25, b);
                let combo = f.zip_with(&h, |u, v| ca * u + cb * v).unwrap();
                let lhs = combo.forward_ft().unwrap();
                let rhs = f.forward_ft().unwrap().zip_with(&h.forward_ft().unwrap(), |u, v| ca * u + cb * v).unwrap();
                prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10 * (1.0 + rhs.max_abs()));
            }
        }
    }
}
