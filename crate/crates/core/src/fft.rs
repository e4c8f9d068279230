//! Axis-wise FFT helpers for row-major complex arrays.
//!
//! The lattice conventions used throughout the crate store spatial samples at
//! `x_j = -L/2 + jL/N` and frequency samples in centered order, `k = i - N/2`.
//! With `N/2` even, `e^{-i xi_k x_j} = (-1)^{i+j} e^{-2 pi i ij/N}`, so every
//! convention transform is a plain DFT sandwiched between two sign flips.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized DFT along `axis`. All-zero lines are skipped.
pub(crate) fn dft_axis(
    data: &mut [Complex64],
    shape: &[usize],
    axis: usize,
    direction: FftDirection,
) {
    let len = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    debug_assert_eq!(data.len(), len * inner * outer);
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction));
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let zero = Complex64::default();

    if inner == 1 {
        for line in data.chunks_exact_mut(len) {
            if line.iter().all(|v| *v == zero) {
                continue;
            }
            fft.process_with_scratch(line, &mut scratch);
        }
        return;
    }

    let mut line = vec![zero; len];
    for o in 0..outer {
        let block = o * len * inner;
        for i in 0..inner {
            let base = block + i;
            let mut nonzero = false;
            for (t, slot) in line.iter_mut().enumerate() {
                *slot = data[base + t * inner];
                nonzero |= *slot != zero;
            }
            if !nonzero {
                continue;
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (t, v) in line.iter().enumerate() {
                data[base + t * inner] = *v;
            }
        }
    }
}

/// Multiplies every entry by `factor * (-1)^(index along axis)`.
fn alternate_axis(data: &mut [Complex64], shape: &[usize], axis: usize, factor: f64) {
    let len = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    for (flat, v) in data.iter_mut().enumerate() {
        let idx = (flat / inner) % len;
        if idx % 2 == 1 {
            *v *= -factor;
        } else {
            *v *= factor;
        }
    }
}

/// Forward quadrature transform along `axis` for an axis of length `period`:
/// `F(xi_k) = (L/N) sum_j e^{-i xi_k x_j} f(x_j)`.
pub(crate) fn forward_axis(data: &mut [Complex64], shape: &[usize], axis: usize, period: f64) {
    let n = shape[axis];
    alternate_axis(data, shape, axis, 1.0);
    dft_axis(data, shape, axis, FftDirection::Forward);
    alternate_axis(data, shape, axis, period / n as f64);
}

/// Inverse quadrature transform along `axis`:
/// `f(x_j) = (1/L) sum_k e^{i xi_k x_j} F(xi_k)`.
pub(crate) fn inverse_axis(data: &mut [Complex64], shape: &[usize], axis: usize, period: f64) {
    alternate_axis(data, shape, axis, 1.0);
    dft_axis(data, shape, axis, FftDirection::Inverse);
    alternate_axis(data, shape, axis, 1.0 / period);
}

/// Embeds a centered-frequency array of side `n` into one of side `factor * n`,
/// keeping each lattice frequency at the same integer index.
pub(crate) fn zero_pad_centered(
    data: &[Complex64],
    ndim: usize,
    n: usize,
    factor: usize,
) -> Vec<Complex64> {
    let big = n * factor;
    let offset = (big - n) / 2;
    let total_big = big.pow(ndim as u32);
    let mut out = vec![Complex64::default(); total_big];
    for (flat, v) in data.iter().enumerate() {
        if *v == Complex64::default() {
            continue;
        }
        let mut rem = flat;
        let mut big_flat = 0usize;
        let mut stride_small = n.pow(ndim as u32);
        for _ in 0..ndim {
            stride_small /= n;
            let idx = rem / stride_small;
            rem %= stride_small;
            big_flat = big_flat * big + idx + offset;
        }
        out[big_flat] = *v;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_pad_keeps_centered_index() {
        // n = 4: storage index 2 is frequency 0; in the padded array of 8 it is index 4.
        let mut data = vec![Complex64::default(); 4];
        data[2] = Complex64::new(1.0, 0.0);
        data[0] = Complex64::new(2.0, 0.0);
        let out = zero_pad_centered(&data, 1, 4, 2);
        assert_eq!(out[4], Complex64::new(1.0, 0.0));
        assert_eq!(out[2], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn forward_then_inverse_is_identity_along_inner_axis() {
        let shape = [4, 8];
        let orig: Vec<Complex64> = (0..32)
            .map(|i| Complex64::new(i as f64 * 0.3 - 1.0, (i * i % 7) as f64))
            .collect();
        let mut data = orig.clone();
        forward_axis(&mut data, &shape, 1, 3.0);
        inverse_axis(&mut data, &shape, 1, 3.0);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
