//! α-coverings of frequency space with bounded admissible partitions of unity.
//!
//! Three constructions:
//! * `alpha = 0`: cubes `k + [-1, 1]^n` with tensor-product lattice windows.
//! * `alpha = 1`: the ball `{|xi| <= 2}` and dyadic annuli `{2^{j-1} <= |xi| <= 2^{j+1}}`.
//! * `0 < alpha < 1`: balls `B(c_k, r |c_k|^alpha)`, `c_k = |k|^{alpha/(1-alpha)} k`,
//!   with windows `g_k / sum_m g_m`, `g_k(xi) = Phi(|c_k|^{-alpha}(xi - c_k))`.
//!
//! Only pieces meeting the truncation band are kept. Windows are sampled on the
//! frequency lattice of the grid they were built for.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{euclid, japanese, unit_ball_volume, Domain, Exponent, GridSpec, Point, SampledFunction};
use crate::window;

/// Floor for the window denominator on the band when `0 < alpha < 1`.
pub const DENOMINATOR_FLOOR: f64 = 1e-6;
/// Number of times the ball scale may be doubled before construction fails.
pub const MAX_DOUBLINGS: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PieceShape {
    Cube { center: Point, half_width: f64 },
    /// Centered at the origin; `inner = 0` is the ball `{|xi| <= outer}`.
    Annulus { inner: f64, outer: f64 },
    Ball { center: Point, radius: f64 },
}

impl PieceShape {
    fn measure(&self, dim: usize) -> f64 {
        match self {
            PieceShape::Cube { half_width, .. } => (2.0 * half_width).powi(dim as i32),
            PieceShape::Annulus { inner, outer } => {
                unit_ball_volume(dim) * (outer.powi(dim as i32) - inner.powi(dim as i32))
            }
            PieceShape::Ball { radius, .. } => unit_ball_volume(dim) * radius.powi(dim as i32),
        }
    }

    /// Smallest and largest `|xi|` over the closed piece.
    fn modulus_range(&self, dim: usize) -> (f64, f64) {
        match self {
            PieceShape::Cube { center, half_width } => {
                let mut near = 0.0;
                let mut far = 0.0;
                for &c in &center[..dim] {
                    let lo = c - half_width;
                    let hi = c + half_width;
                    let n = if lo <= 0.0 && hi >= 0.0 { 0.0 } else { lo.abs().min(hi.abs()) };
                    let f = lo.abs().max(hi.abs());
                    near += n * n;
                    far += f * f;
                }
                (near.sqrt(), far.sqrt())
            }
            PieceShape::Annulus { inner, outer } => (*inner, *outer),
            PieceShape::Ball { center, radius } => {
                let d = euclid(center, dim);
                ((d - radius).max(0.0), d + radius)
            }
        }
    }

    /// Largest `|xi|_inf` over the piece.
    fn sup_extent(&self, dim: usize) -> f64 {
        match self {
            PieceShape::Cube { center, half_width } => center[..dim]
                .iter()
                .fold(0.0f64, |m, c| m.max(c.abs() + half_width)),
            PieceShape::Annulus { outer, .. } => *outer,
            PieceShape::Ball { center, radius } => center[..dim]
                .iter()
                .fold(0.0f64, |m, c| m.max(c.abs() + radius)),
        }
    }

    /// Whether `xi` lies in the closed piece, up to `slack`.
    pub fn contains(&self, xi: &Point, dim: usize, slack: f64) -> bool {
        match self {
            PieceShape::Cube { center, half_width } => {
                (0..dim).all(|i| (xi[i] - center[i]).abs() <= half_width + slack)
            }
            PieceShape::Annulus { inner, outer } => {
                let r = euclid(xi, dim);
                r >= inner - slack && r <= outer + slack
            }
            PieceShape::Ball { center, radius } => {
                let d: f64 = (0..dim).map(|i| (xi[i] - center[i]).powi(2)).sum::<f64>().sqrt();
                d <= radius + slack
            }
        }
    }

    /// Whether the piece meets the open cube `(-b, b)^n`.
    fn meets_cube(&self, b: f64, dim: usize) -> bool {
        match self {
            PieceShape::Cube { center, half_width } => {
                center[..dim].iter().all(|c| c.abs() - half_width < b)
            }
            PieceShape::Annulus { inner, .. } => *inner < b * (dim as f64).sqrt(),
            PieceShape::Ball { center, radius } => {
                let d2: f64 = center[..dim]
                    .iter()
                    .map(|c| (c.abs() - b).max(0.0).powi(2))
                    .sum();
                d2.sqrt() < *radius
            }
        }
    }
}

/// Euclidean distance between two closed pieces of the same construction.
fn piece_distance(a: &PieceShape, b: &PieceShape, dim: usize) -> f64 {
    match (a, b) {
        (
            PieceShape::Cube { center: c1, half_width: h1 },
            PieceShape::Cube { center: c2, half_width: h2 },
        ) => (0..dim)
            .map(|i| ((c1[i] - c2[i]).abs() - h1 - h2).max(0.0).powi(2))
            .sum::<f64>()
            .sqrt(),
        (
            PieceShape::Annulus { inner: i1, outer: o1 },
            PieceShape::Annulus { inner: i2, outer: o2 },
        ) => (i2 - o1).max(i1 - o2).max(0.0),
        (
            PieceShape::Ball { center: c1, radius: r1 },
            PieceShape::Ball { center: c2, radius: r2 },
        ) => {
            let d: f64 = (0..dim).map(|i| (c1[i] - c2[i]).powi(2)).sum::<f64>().sqrt();
            (d - r1 - r2).max(0.0)
        }
        _ => unreachable!("pieces of one covering share a shape kind"),
    }
}

/// Whether the open interiors of two pieces intersect.
fn interiors_meet(a: &PieceShape, b: &PieceShape, dim: usize) -> bool {
    match (a, b) {
        (
            PieceShape::Cube { center: c1, half_width: h1 },
            PieceShape::Cube { center: c2, half_width: h2 },
        ) => (0..dim).all(|i| (c1[i] - c2[i]).abs() < h1 + h2),
        (
            PieceShape::Annulus { inner: i1, outer: o1 },
            PieceShape::Annulus { inner: i2, outer: o2 },
        ) => i1.max(*i2) < o1.min(*o2),
        (
            PieceShape::Ball { center: c1, radius: r1 },
            PieceShape::Ball { center: c2, radius: r2 },
        ) => {
            let d: f64 = (0..dim).map(|i| (c1[i] - c2[i]).powi(2)).sum::<f64>().sqrt();
            d < r1 + r2
        }
        _ => unreachable!("pieces of one covering share a shape kind"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringPiece {
    pub id: usize,
    /// Lattice index `k` (cubes and balls) or dyadic level `j` in the first slot.
    pub label: [i64; 2],
    pub shape: PieceShape,
    /// Construction center of the piece.
    pub center: Point,
    /// Radius of the largest ball inside the piece.
    pub inner_radius: f64,
    /// Radius of the smallest ball about `center` containing the piece.
    pub outer_radius: f64,
    /// Representative point `xi_Q`.
    pub representative: Point,
    /// Norm weight: `<xi_Q>`, or `2^j` for the dyadic construction.
    pub weight: f64,
    pub measure: f64,
    /// Whether the piece lies inside the lattice box, so its window is not truncated.
    pub resolved: bool,
    #[serde(skip)]
    window: Vec<f64>,
    #[serde(skip)]
    support: Vec<usize>,
}

impl CoveringPiece {
    /// Window samples on the full frequency lattice.
    pub fn window(&self) -> &[f64] {
        &self.window
    }

    /// Flat lattice indices where the window is nonzero.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// `<xi_Q>`.
    pub fn bracket(&self, dim: usize) -> f64 {
        japanese(&self.representative, dim)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Construction {
    Lattice,
    Dyadic,
    Balls { radius_scale: f64 },
}

#[derive(Clone, Debug)]
pub struct Covering {
    alpha: f64,
    grid: GridSpec,
    construction: Construction,
    pieces: Vec<CoveringPiece>,
}

fn finalize_window(grid: &GridSpec, window: Vec<f64>) -> (Vec<f64>, Vec<usize>) {
    let support = window
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, _)| i)
        .collect();
    debug_assert_eq!(window.len(), grid.len());
    (window, support)
}

fn resolved(shape: &PieceShape, grid: &GridSpec) -> bool {
    shape.sup_extent(grid.dim()) <= grid.nyquist() - grid.freq_step() + 1e-12
}

/// Window of the lattice piece `k + [-1, 1]^n`.
pub(crate) fn lattice_window(grid: &GridSpec, k: [i64; 2]) -> Vec<f64> {
    let n = grid.points_per_axis();
    let dim = grid.dim();
    let axis: Vec<Vec<f64>> = (0..dim)
        .map(|a| {
            (0..n)
                .map(|i| window::lattice_profile(grid.freq_coord(i) - k[a] as f64))
                .collect()
        })
        .collect();
    (0..grid.len())
        .map(|flat| {
            let idx = grid.unflatten(flat);
            (0..dim).map(|a| axis[a][idx[a]]).product()
        })
        .collect()
}

/// Window `phi_j` of the dyadic family.
pub(crate) fn dyadic_window(grid: &GridSpec, j: u32) -> Vec<f64> {
    let dim = grid.dim();
    (0..grid.len())
        .map(|flat| {
            let r = euclid(&grid.freq_point(flat), dim);
            if j == 0 {
                window::dyadic_cutoff(r)
            } else {
                let s = 2f64.powi(j as i32);
                window::dyadic_cutoff(r / s) - window::dyadic_cutoff(r / (s / 2.0))
            }
        })
        .collect()
}

/// Lattice indices `k` of the uniform construction meeting the band.
pub(crate) fn lattice_labels(grid: &GridSpec) -> Vec<[i64; 2]> {
    let b = grid.band_limit();
    // |k| - 1 < b
    let kmax = (b + 1.0).ceil() as i64;
    let range: Vec<i64> = (-kmax..=kmax).filter(|k| (k.abs() as f64) - 1.0 < b).collect();
    let mut out = Vec::new();
    if grid.dim() == 1 {
        for &k in &range {
            out.push([k, 0]);
        }
    } else {
        for &k1 in &range {
            for &k2 in &range {
                out.push([k1, k2]);
            }
        }
    }
    out
}

/// Dyadic levels meeting the band.
pub(crate) fn dyadic_levels(grid: &GridSpec) -> Vec<u32> {
    let reach = grid.band_limit() * (grid.dim() as f64).sqrt();
    let mut out = vec![0];
    let mut j = 1u32;
    while 2f64.powi(j as i32 - 1) < reach {
        out.push(j);
        j += 1;
    }
    out
}

fn ball_center(k: [i64; 2], dim: usize, alpha: f64) -> Point {
    let kf = [k[0] as f64, k[1] as f64];
    let norm = euclid(&kf, dim);
    let scale = norm.powf(alpha / (1.0 - alpha));
    let mut c = [0.0; 2];
    for a in 0..dim {
        c[a] = scale * kf[a];
    }
    c
}

fn ball_radius(center: &Point, dim: usize, alpha: f64, r: f64) -> f64 {
    r * euclid(center, dim).powf(alpha)
}

struct BallFamily {
    labels: Vec<[i64; 2]>,
    centers: Vec<Point>,
    radii: Vec<f64>,
    g: Vec<Vec<(usize, f64)>>,
    denominator: Vec<f64>,
}

fn ball_family(grid: &GridSpec, alpha: f64, r: f64) -> BallFamily {
    let dim = grid.dim();
    let box_reach = grid.nyquist() * (dim as f64).sqrt();
    // Grow |k| until the ball around c_k cannot reach the lattice box.
    let mut kmax = 1i64;
    loop {
        let c = (kmax as f64).powf(1.0 / (1.0 - alpha));
        let rad = r * c.powf(alpha);
        if c - rad > box_reach + 1.0 && kmax > 1 {
            break;
        }
        kmax += 1;
        if kmax > 100_000 {
            break;
        }
    }
    let mut labels = Vec::new();
    if dim == 1 {
        for k in -kmax..=kmax {
            if k != 0 {
                labels.push([k, 0]);
            }
        }
    } else {
        for k1 in -kmax..=kmax {
            for k2 in -kmax..=kmax {
                if k1 != 0 || k2 != 0 {
                    labels.push([k1, k2]);
                }
            }
        }
    }
    let nyq = grid.nyquist();
    let mut kept_labels = Vec::new();
    let mut centers = Vec::new();
    let mut radii = Vec::new();
    for k in labels {
        let c = ball_center(k, dim, alpha);
        let rad = ball_radius(&c, dim, alpha, r);
        let shape = PieceShape::Ball { center: c, radius: rad };
        if shape.meets_cube(nyq + grid.freq_step(), dim) {
            kept_labels.push(k);
            centers.push(c);
            radii.push(rad);
        }
    }
    let g: Vec<Vec<(usize, f64)>> = centers
        .par_iter()
        .zip(radii.par_iter())
        .map(|(c, rad)| ball_samples(grid, c, *rad))
        .collect();
    let mut denominator = vec![0.0; grid.len()];
    for samples in &g {
        for &(i, v) in samples {
            denominator[i] += v;
        }
    }
    BallFamily {
        labels: kept_labels,
        centers,
        radii,
        g,
        denominator,
    }
}

/// Nonzero samples of `b(|xi - c| / radius)` on the lattice.
fn ball_samples(grid: &GridSpec, c: &Point, radius: f64) -> Vec<(usize, f64)> {
    let dim = grid.dim();
    let n = grid.points_per_axis();
    let step = grid.freq_step();
    let half = (n / 2) as f64;
    let mut ranges = [(0usize, 0usize); 2];
    for a in 0..dim {
        let lo = ((c[a] - radius) / step + half).floor().max(0.0) as usize;
        let hi = ((c[a] + radius) / step + half).ceil().min((n - 1) as f64);
        if hi < 0.0 || lo > n - 1 {
            return Vec::new();
        }
        ranges[a] = (lo, hi as usize);
    }
    let mut out = Vec::new();
    let push = |idx: [usize; 2], out: &mut Vec<(usize, f64)>| {
        let flat = grid.flatten(idx);
        let xi = grid.freq_point(flat);
        let d: f64 = (0..dim).map(|a| (xi[a] - c[a]).powi(2)).sum::<f64>().sqrt();
        let v = window::bump(d / radius);
        if v > 0.0 {
            out.push((flat, v));
        }
    };
    if dim == 1 {
        for i in ranges[0].0..=ranges[0].1 {
            push([i, 0], &mut out);
        }
    } else {
        for i in ranges[0].0..=ranges[0].1 {
            for j in ranges[1].0..=ranges[1].1 {
                push([i, j], &mut out);
            }
        }
    }
    out
}

fn band_indices(grid: &GridSpec) -> Vec<usize> {
    (0..grid.len())
        .filter(|&i| grid.in_band(&grid.freq_point(i)))
        .collect()
}

impl Covering {
    /// Builds the covering for `alpha` on the frequency lattice of `grid`.
    pub fn build(alpha: f64, grid: &GridSpec) -> Result<Self> {
        Self::build_with_scale(alpha, grid, None)
    }

    /// As [`Covering::build`], with an explicit ball scale `r` for `0 < alpha < 1`
    /// instead of the automatic choice.
    pub fn build_with_scale(alpha: f64, grid: &GridSpec, scale: Option<f64>) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || alpha.is_nan() {
            return Err(Error::InvalidParameter(format!("alpha {alpha} outside [0, 1]")));
        }
        if alpha == 0.0 {
            Ok(Self::build_lattice(grid))
        } else if alpha == 1.0 {
            Ok(Self::build_dyadic(grid))
        } else {
            Self::build_balls(alpha, grid, scale)
        }
    }

    fn build_lattice(grid: &GridSpec) -> Self {
        let dim = grid.dim();
        let labels = lattice_labels(grid);
        let pieces: Vec<CoveringPiece> = labels
            .par_iter()
            .enumerate()
            .map(|(id, &k)| {
                let mut center = [0.0; 2];
                for a in 0..dim {
                    center[a] = k[a] as f64;
                }
                let shape = PieceShape::Cube { center, half_width: 1.0 };
                let (window, support) = finalize_window(grid, lattice_window(grid, k));
                CoveringPiece {
                    id,
                    label: k,
                    measure: shape.measure(dim),
                    resolved: resolved(&shape, grid),
                    shape,
                    center,
                    inner_radius: 1.0,
                    outer_radius: (dim as f64).sqrt(),
                    representative: center,
                    weight: japanese(&center, dim),
                    window,
                    support,
                }
            })
            .collect();
        Self {
            alpha: 0.0,
            grid: grid.clone(),
            construction: Construction::Lattice,
            pieces,
        }
    }

    fn build_dyadic(grid: &GridSpec) -> Self {
        let dim = grid.dim();
        let levels = dyadic_levels(grid);
        let pieces: Vec<CoveringPiece> = levels
            .par_iter()
            .enumerate()
            .map(|(id, &j)| {
                let (shape, inner_radius, representative, weight) = if j == 0 {
                    (PieceShape::Annulus { inner: 0.0, outer: 2.0 }, 2.0, [0.0; 2], 1.0)
                } else {
                    let s = 2f64.powi(j as i32);
                    (
                        PieceShape::Annulus { inner: s / 2.0, outer: 2.0 * s },
                        0.75 * s,
                        [s, 0.0],
                        s,
                    )
                };
                let outer_radius = match shape {
                    PieceShape::Annulus { outer, .. } => outer,
                    _ => unreachable!(),
                };
                let (window, support) = finalize_window(grid, dyadic_window(grid, j));
                CoveringPiece {
                    id,
                    label: [j as i64, 0],
                    measure: shape.measure(dim),
                    resolved: resolved(&shape, grid),
                    shape,
                    center: [0.0; 2],
                    inner_radius,
                    outer_radius,
                    representative,
                    weight,
                    window,
                    support,
                }
            })
            .collect();
        Self {
            alpha: 1.0,
            grid: grid.clone(),
            construction: Construction::Dyadic,
            pieces,
        }
    }

    fn build_balls(alpha: f64, grid: &GridSpec, scale: Option<f64>) -> Result<Self> {
        let dim = grid.dim();
        let band = band_indices(grid);
        let (r, family) = match scale {
            Some(r) => {
                if !(r.is_finite() && r > 0.0) {
                    return Err(Error::InvalidParameter(format!("ball scale {r}")));
                }
                (r, ball_family(grid, alpha, r))
            }
            None => {
                let mut r = 2.0 * (dim as f64).sqrt();
                let mut attempt = 0;
                loop {
                    let family = ball_family(grid, alpha, r);
                    let floor = band
                        .iter()
                        .map(|&i| family.denominator[i])
                        .fold(f64::INFINITY, f64::min);
                    if floor >= DENOMINATOR_FLOOR {
                        break (r, family);
                    }
                    if attempt == MAX_DOUBLINGS {
                        return Err(Error::Construction(format!(
                            "window denominator {floor:e} below {DENOMINATOR_FLOOR:e} \
                             on the band after {MAX_DOUBLINGS} doublings (r = {r})"
                        )));
                    }
                    attempt += 1;
                    r *= 2.0;
                }
            }
        };
        if let Some(&i) = band.iter().find(|&&i| family.denominator[i] <= 0.0) {
            return Err(Error::Construction(format!(
                "lattice frequency {:?} is not covered (r = {r})",
                grid.freq_point(i)
            )));
        }
        let band_limit = grid.band_limit();
        let mut pieces = Vec::new();
        for (((k, c), rad), samples) in family
            .labels
            .iter()
            .zip(&family.centers)
            .zip(&family.radii)
            .zip(&family.g)
        {
            let shape = PieceShape::Ball { center: *c, radius: *rad };
            if !shape.meets_cube(band_limit, dim) {
                continue;
            }
            let mut window = vec![0.0; grid.len()];
            for &(i, v) in samples {
                window[i] = v / family.denominator[i];
            }
            let (window, support) = finalize_window(grid, window);
            pieces.push(CoveringPiece {
                id: pieces.len(),
                label: *k,
                measure: shape.measure(dim),
                resolved: resolved(&shape, grid),
                shape,
                center: *c,
                inner_radius: *rad,
                outer_radius: *rad,
                representative: *c,
                weight: japanese(c, dim),
                window,
                support,
            });
        }
        Ok(Self {
            alpha,
            grid: grid.clone(),
            construction: Construction::Balls { radius_scale: r },
            pieces,
        })
    }

    /// The same continuum construction sampled on another grid.
    pub fn resample(&self, grid: &GridSpec) -> Result<Self> {
        let scale = match self.construction {
            Construction::Balls { radius_scale } => Some(radius_scale),
            _ => None,
        };
        Self::build_with_scale(self.alpha, grid, scale)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn pieces(&self) -> &[CoveringPiece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// `max |sum_Q psi_Q - 1|` over the lattice points of the truncation band.
    pub fn partition_residual(&self) -> f64 {
        let mut sum = vec![0.0; self.grid.len()];
        for p in &self.pieces {
            for &i in &p.support {
                sum[i] += p.window[i];
            }
        }
        band_indices(&self.grid)
            .into_iter()
            .map(|i| (sum[i] - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest number of windows that are simultaneously nonzero at a lattice point.
    pub fn pointwise_multiplicity(&self) -> usize {
        let mut count = vec![0usize; self.grid.len()];
        for p in &self.pieces {
            for &i in &p.support {
                count[i] += 1;
            }
        }
        count.into_iter().max().unwrap_or(0)
    }

    /// `max_Q #{Q' : interior(Q) meets interior(Q')}`, counting `Q` itself.
    pub fn overlap_count(&self) -> usize {
        let dim = self.grid.dim();
        self.pieces
            .iter()
            .map(|p| {
                self.pieces
                    .iter()
                    .filter(|q| interiors_meet(&p.shape, &q.shape, dim))
                    .count()
            })
            .max()
            .unwrap_or(0)
    }

    /// `max_Q #{Q' : dist(Q, Q') < radius}`, i.e. pieces meeting `Q + B(0, radius)`.
    pub fn enlarged_overlap_count(&self, radius: f64) -> usize {
        let dim = self.grid.dim();
        self.pieces
            .iter()
            .map(|p| {
                self.pieces
                    .iter()
                    .filter(|q| piece_distance(&p.shape, &q.shape, dim) < radius)
                    .count()
            })
            .max()
            .unwrap_or(0)
    }

    /// `‖∂^β F^{-1} psi_Q‖_{L^1}` for every piece, with `|β| <= 2`.
    pub fn window_derivative_l1(&self, beta: [u32; 2]) -> Result<Vec<WindowDerivative>> {
        let dim = self.grid.dim();
        let order: u32 = beta[..dim].iter().sum();
        if order > 2 || (dim == 1 && beta[1] != 0) {
            return Err(Error::InvalidParameter(format!(
                "derivative multi-index {beta:?} unsupported (order at most 2)"
            )));
        }
        let factor = l1_oversampling(dim);
        self.pieces
            .par_iter()
            .map(|p| {
                let mut spectrum = SampledFunction::zeros(&self.grid, Domain::Frequency);
                let vals = spectrum.values_mut();
                for &i in &p.support {
                    let xi = self.grid.freq_point(i);
                    let mut m = Complex64::new(p.window[i], 0.0);
                    for a in 0..dim {
                        for _ in 0..beta[a] {
                            m *= Complex64::new(0.0, xi[a]);
                        }
                    }
                    vals[i] = m;
                }
                let value = spectrum.upsampled_inverse(factor)?.lp_norm(Exponent::One);
                let bracket = p.bracket(dim);
                Ok(WindowDerivative {
                    id: p.id,
                    value,
                    ratio: value / bracket.powi(order as i32),
                    resolved: p.resolved,
                })
            })
            .collect()
    }

    pub fn validate(&self) -> AdmissibilityReport {
        let dim = self.grid.dim();
        let an = self.alpha * dim as f64;
        let resolved_count = self.pieces.iter().filter(|p| p.resolved).count();

        let mut measure_lo = f64::INFINITY;
        let mut measure_hi: f64 = 0.0;
        let mut inner_lo = f64::INFINITY;
        let mut inner_hi: f64 = 0.0;
        let mut outer_lo = f64::INFINITY;
        let mut outer_hi: f64 = 0.0;
        let mut k_bound: f64 = 0.0;
        let mut kappa: f64 = 1.0;
        for p in &self.pieces {
            let b = p.bracket(dim);
            let m = p.measure / b.powf(an);
            measure_lo = measure_lo.min(m);
            measure_hi = measure_hi.max(m);
            let ri = p.measure / p.inner_radius.powi(dim as i32);
            inner_lo = inner_lo.min(ri);
            inner_hi = inner_hi.max(ri);
            let ro = p.measure / p.outer_radius.powi(dim as i32);
            outer_lo = outer_lo.min(ro);
            outer_hi = outer_hi.max(ro);
            k_bound = k_bound.max(p.outer_radius / p.inner_radius);
            let (near, far) = p.shape.modulus_range(dim);
            let lo = (1.0 + near * near).sqrt();
            let hi = (1.0 + far * far).sqrt();
            kappa = kappa.max(hi / b).max(b / lo);
        }

        let mut neighbor_kappa: f64 = 1.0;
        for p in &self.pieces {
            for q in &self.pieces {
                if piece_distance(&p.shape, &q.shape, dim) < 1.0 {
                    let r = p.bracket(dim) / q.bracket(dim);
                    neighbor_kappa = neighbor_kappa.max(r).max(1.0 / r);
                }
            }
        }

        let radius_scale = match self.construction {
            Construction::Balls { radius_scale } => Some(radius_scale),
            _ => None,
        };

        AdmissibilityReport {
            alpha: self.alpha,
            dim,
            points_per_axis: self.grid.points_per_axis(),
            period: self.grid.period(),
            piece_count: self.pieces.len(),
            resolved_count,
            n0: self.overlap_count(),
            pointwise_multiplicity: self.pointwise_multiplicity(),
            n0_enlarged_r1: self.enlarged_overlap_count(1.0),
            n0_enlarged_r2: self.enlarged_overlap_count(2.0),
            k_bound,
            measure_ratio_lo: measure_lo,
            measure_ratio_hi: measure_hi,
            inner_measure_ratio_lo: inner_lo,
            inner_measure_ratio_hi: inner_hi,
            outer_measure_ratio_lo: outer_lo,
            outer_measure_ratio_hi: outer_hi,
            kappa,
            neighbor_kappa,
            unit_ball_volume: unit_ball_volume(dim),
            partition_residual: self.partition_residual(),
            radius_scale,
        }
    }
}

/// Oversampling factor per axis used for `L^1` and `L^inf` norms of band components.
pub(crate) fn l1_oversampling(dim: usize) -> usize {
    if dim == 1 {
        4
    } else {
        2
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowDerivative {
    pub id: usize,
    pub value: f64,
    /// `value / <xi_Q>^{|β|}`.
    pub ratio: f64,
    pub resolved: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub alpha: f64,
    pub dim: usize,
    pub points_per_axis: usize,
    pub period: f64,
    pub piece_count: usize,
    pub resolved_count: usize,
    /// Largest number of pieces whose interiors meet a given piece, itself included.
    pub n0: usize,
    /// Largest number of sampled windows nonzero at one lattice point.
    pub pointwise_multiplicity: usize,
    pub n0_enlarged_r1: usize,
    pub n0_enlarged_r2: usize,
    /// `max R_Q / r_Q`.
    pub k_bound: f64,
    /// Bounds of `|Q| / <xi_Q>^{alpha n}`.
    pub measure_ratio_lo: f64,
    pub measure_ratio_hi: f64,
    /// Bounds of `|Q| / r_Q^n`.
    pub inner_measure_ratio_lo: f64,
    pub inner_measure_ratio_hi: f64,
    /// Bounds of `|Q| / R_Q^n`.
    pub outer_measure_ratio_lo: f64,
    pub outer_measure_ratio_hi: f64,
    /// `max_Q max_{xi in Q} max(<xi>/<xi_Q>, <xi_Q>/<xi>)`.
    pub kappa: f64,
    /// `max <xi_Q>/<xi_Q'>` over pairs with `(Q + B(0,1))` meeting `Q'`.
    pub neighbor_kappa: f64,
    pub unit_ball_volume: f64,
    pub partition_residual: f64,
    pub radius_scale: Option<f64>,
}

impl AdmissibilityReport {
    pub fn is_finite(&self) -> bool {
        [
            self.k_bound,
            self.measure_ratio_lo,
            self.measure_ratio_hi,
            self.inner_measure_ratio_lo,
            self.inner_measure_ratio_hi,
            self.outer_measure_ratio_lo,
            self.outer_measure_ratio_hi,
            self.kappa,
            self.neighbor_kappa,
            self.partition_residual,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> GridSpec {
        GridSpec::new(1, n, 8.0 * PI).unwrap()
    }

    #[test]
    fn lattice_pieces_are_integer_translates() {
        let cov = Covering::build(0.0, &grid(64)).unwrap();
        let labels: Vec<i64> = cov.pieces().iter().map(|p| p.label[0]).collect();
        // band 0.8 * 8 = 6.4, so |k| - 1 < 6.4
        assert_eq!(labels, (-7..=7).collect::<Vec<_>>());
        for p in cov.pieces() {
            assert_eq!(p.representative[0], p.label[0] as f64);
        }
    }

    #[test]
    fn dyadic_levels_cover_band() {
        let g = grid(128); // band 12.8
        assert_eq!(dyadic_levels(&g), vec![0, 1, 2, 3, 4]);
        let cov = Covering::build(1.0, &g).unwrap();
        assert!(cov.partition_residual() < 1e-14);
    }

    #[test]
    fn half_alpha_centers() {
        let cov = Covering::build(0.5, &grid(128)).unwrap();
        let mut centers: Vec<f64> = cov
            .pieces()
            .iter()
            .filter(|p| p.center[0] > 0.0)
            .map(|p| p.center[0])
            .collect();
        centers.sort_by(f64::total_cmp);
        assert_eq!(&centers[..3], &[1.0, 4.0, 9.0]);
    }

    #[test]
    fn shape_distances() {
        let a = PieceShape::Cube { center: [0.0, 0.0], half_width: 1.0 };
        let b = PieceShape::Cube { center: [3.0, 0.0], half_width: 1.0 };
        assert_eq!(piece_distance(&a, &b, 1), 1.0);
        assert!(!interiors_meet(&a, &b, 1));
        let c = PieceShape::Annulus { inner: 1.0, outer: 4.0 };
        let d = PieceShape::Annulus { inner: 4.0, outer: 16.0 };
        assert_eq!(piece_distance(&c, &d, 2), 0.0);
        assert!(!interiors_meet(&c, &d, 2));
    }

    #[test]
    fn rejects_alpha_out_of_range() {
        assert!(Covering::build(-0.1, &grid(64)).is_err());
        assert!(Covering::build(1.5, &grid(64)).is_err());
        assert!(Covering::build(f64::NAN, &grid(64)).is_err());
    }

    #[test]
    fn derivative_order_limited() {
        let cov = Covering::build(0.0, &grid(64)).unwrap();
        assert!(cov.window_derivative_l1([3, 0]).is_err());
        assert!(cov.window_derivative_l1([1, 1]).is_err());
        assert!(cov.window_derivative_l1([2, 0]).is_ok());
    }
}
